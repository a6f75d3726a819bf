//! The inverse spectral problem: from a prescribed spectrum and a weight
//! rule back to the unique chain.
//!
//! Mirror-symmetric transfer asks for weights alternating as
//! w_s ∝ (−1)^{N+s}/P'_{N+1}(λ_s); two-site revival with relative phase
//! ψ ≠ π/2 skews the even/odd sublattices by the asymmetry parameter γ,
//! the positive root of γ − 1/γ = −2 tan 2θ cos ψ. Reconstruction runs a
//! discrete Stieltjes orthogonalisation (Lanczos on diag(λ) seeded with
//! √w, fully reorthogonalised), whose recurrence coefficients are the
//! couplings and fields.

use nalgebra::DVector;

use crate::chain::{JacobiMatrix, SpectralData};
use crate::error::{Error, Result};
use crate::orthopoly::char_poly_derivatives;

/// Squared couplings at or below this are treated as a reconstruction
/// breakdown rather than clamped.
pub const POSITIVITY_FLOOR: f64 = 1e-13;

/// Index parity of the chain order N; selects which sublattice carries the
/// factor γ in the skewed weight rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of the chain order N for a spectrum with N+1 points.
    pub fn of_order(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The weight-asymmetry parameter γ together with the revival angles that
/// produced it.
#[derive(Debug, Clone, Copy)]
pub struct GammaParam {
    gamma: f64,
    theta: f64,
    psi: f64,
}

impl GammaParam {
    /// γ itself.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Revival amplitude angle θ.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Relative phase ψ.
    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Residual of the defining relation γ − 1/γ + 2 tan 2θ cos ψ = 0.
    pub fn defect(&self) -> f64 {
        (self.gamma - 1.0 / self.gamma + 2.0 * (2.0 * self.theta).tan() * self.psi.cos()).abs()
    }
}

/// Positive root of γ − 1/γ = −2 tan 2θ cos ψ.
///
/// Fails with `DegenerateRevival` at |θ| ≥ π/4 where tan 2θ blows up.
pub fn gamma_from(theta: f64, psi: f64) -> Result<GammaParam> {
    if !theta.is_finite() || theta.abs() >= std::f64::consts::FRAC_PI_4 {
        return Err(Error::DegenerateRevival);
    }
    let t = (2.0 * theta).tan() * psi.cos();
    // γ = −t + √(t² + 1) > 0 for every real t.
    let gamma = t.hypot(1.0) - t;
    Ok(GammaParam { gamma, theta, psi })
}

/// Weights enforcing mirror symmetry: w_s ∝ (−1)^{N+s} / P'_{N+1}(λ_s),
/// normalised to sum 1.
///
/// Any strictly increasing spectrum admits these weights; they are all
/// positive by the interlacing of the sign of P'_{N+1}.
pub fn pst_weights(spectrum: &[f64]) -> Result<SpectralData> {
    let n = spectrum.len().checked_sub(1).ok_or(Error::InvalidSpectrumOrder)?;
    let deriv = char_poly_derivatives(spectrum);
    let mut weights = Vec::with_capacity(spectrum.len());
    for (s, d) in deriv.into_iter().enumerate() {
        let sign = if (n + s) % 2 == 0 { 1.0 } else { -1.0 };
        let u = sign / d;
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::InvalidSpectrumOrder);
        }
        weights.push(u);
    }
    SpectralData::new(spectrum.to_vec(), weights)
}

/// Weights of a two-site revival chain: the mirror-symmetric rule with the
/// even/odd sublattices skewed by γ^{±1} according to the parity of N.
///
/// `n_parity` must be the parity of N = len − 1; a mismatch makes every
/// unnormalised weight negative and is rejected.
pub fn fr_weights(spectrum: &[f64], gamma: &GammaParam, n_parity: Parity) -> Result<SpectralData> {
    if spectrum.is_empty() {
        return Err(Error::InvalidSpectrumOrder);
    }
    let g = gamma.gamma();
    let deriv = char_poly_derivatives(spectrum);
    let mut weights = Vec::with_capacity(spectrum.len());
    for (s, d) in deriv.into_iter().enumerate() {
        let factor = match (n_parity, s % 2 == 0) {
            (Parity::Odd, true) => -g,
            (Parity::Odd, false) => 1.0 / g,
            (Parity::Even, true) => 1.0 / g,
            (Parity::Even, false) => -g,
        };
        let u = factor / d;
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::InvalidSpectrumOrder);
        }
        weights.push(u);
    }
    SpectralData::new(spectrum.to_vec(), weights)
}

/// Reconstruct the unique chain whose orthogonality measure is `measure`.
///
/// Discrete Stieltjes: Lanczos on diag(λ_s) started from (√w_s), with full
/// reorthogonalisation of every residual. The recurrence coefficients read
/// off along the way are B_0..B_N and J_1..J_N.
pub fn reconstruct_jacobi(measure: &SpectralData) -> Result<JacobiMatrix> {
    let n_points = measure.len();
    let lambda = measure.points();

    let seed: Vec<f64> = measure.weights().iter().map(|w| w.sqrt()).collect();
    let mut basis: Vec<DVector<f64>> = vec![DVector::from_vec(seed)];
    let mut fields = Vec::with_capacity(n_points);
    let mut couplings = Vec::with_capacity(n_points.saturating_sub(1));

    for step in 0..n_points {
        let v = &basis[step];
        let dv = DVector::from_fn(n_points, |s, _| lambda[s] * v[s]);
        let b = v.dot(&dv);
        fields.push(b);
        if step + 1 == n_points {
            break;
        }

        let mut residual = dv - b * v;
        if step > 0 {
            residual -= *couplings.last().unwrap() * &basis[step - 1];
        }
        // Full reorthogonalisation, twice, against everything built so far.
        for _ in 0..2 {
            for q in &basis {
                let overlap = q.dot(&residual);
                residual -= overlap * q;
            }
        }
        let norm_sq = residual.norm_squared();
        if norm_sq <= POSITIVITY_FLOOR {
            return Err(Error::ReconstructionBreakdown {
                step: step + 1,
                value: norm_sq,
            });
        }
        let norm = norm_sq.sqrt();
        couplings.push(norm);
        basis.push(residual / norm);
    }

    JacobiMatrix::new(couplings, fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{eigendecompose, spectral_data};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn gamma_limits() {
        assert_abs_diff_eq!(gamma_from(0.0, 1.23).unwrap().gamma(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            gamma_from(0.19, PI / 2.0).unwrap().gamma(),
            1.0,
            epsilon = 1e-15
        );
        // ψ = 0: the positive root of γ − 1/γ = −2 tan 2θ is
        // sec 2θ − tan 2θ = tan(π/4 − θ).
        let theta = PI / 8.0;
        let expected = (PI / 4.0 - theta).tan();
        assert_abs_diff_eq!(gamma_from(theta, 0.0).unwrap().gamma(), expected, epsilon = 1e-12);
        assert!(gamma_from(theta, 0.0).unwrap().defect() < 1e-12);
        assert!(matches!(
            gamma_from(PI / 4.0, 0.0),
            Err(Error::DegenerateRevival)
        ));
    }

    #[test]
    fn pst_weights_linear_spectrum_is_binomial() {
        let spectrum = [-1.0, 0.0, 1.0];
        let m = pst_weights(&spectrum).unwrap();
        assert_abs_diff_eq!(m.weights()[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(m.weights()[1], 0.50, epsilon = 1e-14);
        assert_abs_diff_eq!(m.weights()[2], 0.25, epsilon = 1e-14);
    }

    #[test]
    fn pst_weights_single_point() {
        let m = pst_weights(&[0.7]).unwrap();
        assert_eq!(m.weights(), &[1.0]);
    }

    #[test]
    fn pst_weights_bilattice_half_sums() {
        // Centered bi-lattice, N = 3, δ = 3/2.
        let spectrum = [-1.75, -0.25, 0.25, 1.75];
        let m = pst_weights(&spectrum).unwrap();
        assert!(m.half_sum_defect() < 1e-12);
        assert!(matches!(
            pst_weights(&[0.0, -1.0]),
            Err(Error::InvalidSpectrumOrder)
        ));
    }

    #[test]
    fn fr_weights_reduce_to_pst_at_unit_gamma() {
        let spectrum = [-1.5, -0.5, 0.5, 1.5];
        let gamma = gamma_from(0.21, PI / 2.0).unwrap();
        let fr = fr_weights(&spectrum, &gamma, Parity::Odd).unwrap();
        let pst = pst_weights(&spectrum).unwrap();
        for s in 0..spectrum.len() {
            assert_abs_diff_eq!(fr.weights()[s], pst.weights()[s], epsilon = 1e-14);
        }
    }

    #[test]
    fn fr_weights_scale_even_sublattice_for_odd_order() {
        let spectrum = [-1.5, -0.5, 0.5, 1.5];
        let gamma = gamma_from(-0.25_f64.atan() / 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(gamma.gamma() - 1.0 / gamma.gamma(), 0.5, epsilon = 1e-12);
        let fr = fr_weights(&spectrum, &gamma, Parity::Odd).unwrap();
        let pst = pst_weights(&spectrum).unwrap();
        // Even/odd ratio against the mirror-symmetric weights is γ : 1/γ
        // before normalisation, i.e. γ² after taking the double ratio.
        let ratio_even = fr.weights()[0] / pst.weights()[0];
        let ratio_odd = fr.weights()[1] / pst.weights()[1];
        assert_abs_diff_eq!(
            ratio_even / ratio_odd,
            gamma.gamma() * gamma.gamma(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn fr_weights_reject_mismatched_parity() {
        let spectrum = [-1.5, -0.5, 0.5, 1.5]; // N = 3, odd
        let gamma = gamma_from(0.3, 0.0).unwrap();
        assert!(matches!(
            fr_weights(&spectrum, &gamma, Parity::Even),
            Err(Error::InvalidSpectrumOrder)
        ));
    }

    #[test]
    fn reconstruct_single_point() {
        let m = SpectralData::new(vec![2.5], vec![1.0]).unwrap();
        let j = reconstruct_jacobi(&m).unwrap();
        assert_eq!(j.n(), 0);
        assert_abs_diff_eq!(j.field(0), 2.5, epsilon = 1e-15);
    }

    #[test]
    fn reconstruct_krawtchouk_from_linear_spectrum() {
        // N = 4, T = π: couplings (π/T)·√(ℓ(N+1−ℓ))/2 = √(ℓ(5−ℓ))/2.
        let n = 4;
        let spectrum: Vec<f64> = (0..=n).map(|s| s as f64 - n as f64 / 2.0).collect();
        let j = reconstruct_jacobi(&pst_weights(&spectrum).unwrap()).unwrap();
        for l in 1..=n {
            let expected = ((l * (n + 1 - l)) as f64).sqrt() / 2.0;
            assert_abs_diff_eq!(j.coupling(l), expected, epsilon = 1e-10);
            assert_abs_diff_eq!(j.field(l - 1), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn reconstruct_centered_bilattice() {
        let delta: f64 = 1.5;
        let spectrum = [-1.75, -0.25, 0.25, 1.75];
        let j = reconstruct_jacobi(&pst_weights(&spectrum).unwrap()).unwrap();
        let edge = 0.5 * (4.0 - delta * delta).sqrt();
        assert_abs_diff_eq!(j.coupling(1), edge, epsilon = 1e-10);
        assert_abs_diff_eq!(j.coupling(2), delta, epsilon = 1e-10);
        assert_abs_diff_eq!(j.coupling(3), edge, epsilon = 1e-10);
        for l in 0..4 {
            assert_abs_diff_eq!(j.field(l), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn round_trip_through_measure() {
        let j = JacobiMatrix::new(
            vec![0.8, 1.4, 0.3, 1.9, 0.7],
            vec![0.1, -0.6, 0.4, 0.0, 0.9, -0.2],
        )
        .unwrap();
        let measure = spectral_data(&eigendecompose(&j).unwrap()).unwrap();
        let back = reconstruct_jacobi(&measure).unwrap();
        assert!(j.max_abs_diff(&back) < 1e-8 * j.max_abs().max(1.0));
    }

    #[test]
    fn pst_weights_always_reconstruct_persymmetric() {
        // Even for spectra violating the odd-gap transfer condition, the
        // alternating-sign weights force mirror symmetry.
        let spectrum = [-2.3, -0.9, 0.4, 1.1, 3.0];
        let j = reconstruct_jacobi(&pst_weights(&spectrum).unwrap()).unwrap();
        assert!(j.is_persymmetric(1e-8 * j.max_abs()));
    }
}
