//! Orthogonal polynomials attached to a chain.
//!
//! The eigenvector components of a Jacobi matrix factor as
//! W_{sℓ} = √w_s χ_ℓ(λ_s) where the χ_ℓ satisfy the three-term recurrence
//!
//! ```text
//!     J_{ℓ+1} χ_{ℓ+1}(λ) = (λ − B_ℓ) χ_ℓ(λ) − J_ℓ χ_{ℓ−1}(λ),
//!     χ_0 = 1, χ_{−1} = 0,
//! ```
//!
//! and are orthonormal for the measure {λ_s, w_s}. The monic companions
//! P_ℓ = √h_ℓ χ_ℓ with √h_ℓ = J_1⋯J_ℓ obey
//! P_{ℓ+1} = (λ − B_ℓ)P_ℓ − J_ℓ² P_{ℓ−1} and extend one degree further to
//! the characteristic polynomial P_{N+1}(λ) = Π_s (λ − λ_s). This module
//! evaluates both families and recovers the weights from the characteristic
//! polynomial — a route independent of the eigenvectors.

use nalgebra::DMatrix;

use crate::chain::{eigendecompose, JacobiMatrix, SpectralData};
use crate::error::{Error, Result};

/// Forward recurrences grow roughly like λ^N; beyond this order the values
/// on far-out points can overflow before normalisation.
const FORWARD_RECURRENCE_SOFT_LIMIT: usize = 64;

/// Past this order the norm products J_1⋯J_ℓ are accumulated in log space.
const LOG_SPACE_THRESHOLD: usize = 32;

/// Values of the orthonormal polynomials on a set of spectral points,
/// together with the monic norms and the characteristic-polynomial
/// derivatives.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    /// chi[(ℓ, s)] = χ_ℓ(λ_s).
    chi: DMatrix<f64>,
    /// h_ℓ = (J_1⋯J_ℓ)², ℓ = 0..=N.
    monic_norms: Vec<f64>,
    /// ln √h_ℓ, always finite even when h_ℓ overflows.
    ln_sqrt_norms: Vec<f64>,
    /// P'_{N+1}(λ_s) = Π_{r≠s} (λ_s − λ_r).
    char_deriv: Vec<f64>,
}

impl PolynomialTable {
    /// Tabulate χ_ℓ(λ_s) for all ℓ = 0..=N over the given points.
    pub fn build(j: &JacobiMatrix, points: &[f64]) -> Self {
        let n_sites = j.n_sites();
        let mut chi = DMatrix::zeros(n_sites, points.len());
        for (s, &lambda) in points.iter().enumerate() {
            for (l, value) in eval_chi(j, lambda).into_iter().enumerate() {
                chi[(l, s)] = value;
            }
        }
        let (monic_norms, ln_sqrt_norms) = norms(j);
        let char_deriv = char_poly_derivatives(points);
        PolynomialTable {
            chi,
            monic_norms,
            ln_sqrt_norms,
            char_deriv,
        }
    }

    /// χ_ℓ(λ_s).
    pub fn chi(&self, l: usize, s: usize) -> f64 {
        self.chi[(l, s)]
    }

    /// The full table as a matrix, rows by degree, columns by point.
    pub fn chi_matrix(&self) -> &DMatrix<f64> {
        &self.chi
    }

    /// Monic norms h_ℓ = (J_1⋯J_ℓ)².
    pub fn monic_norms(&self) -> &[f64] {
        &self.monic_norms
    }

    /// √h_ℓ, taken through log space for long chains.
    pub fn sqrt_norm(&self, l: usize) -> f64 {
        if self.monic_norms.len() > LOG_SPACE_THRESHOLD + 1 {
            self.ln_sqrt_norms[l].exp()
        } else {
            self.monic_norms[l].sqrt()
        }
    }

    /// Monic value P_ℓ(λ_s) = √h_ℓ χ_ℓ(λ_s).
    pub fn monic(&self, l: usize, s: usize) -> f64 {
        self.sqrt_norm(l) * self.chi[(l, s)]
    }

    /// P'_{N+1}(λ_s) for every point.
    pub fn char_deriv(&self) -> &[f64] {
        &self.char_deriv
    }

    fn n_points(&self) -> usize {
        self.chi.ncols()
    }

    fn n_degrees(&self) -> usize {
        self.chi.nrows()
    }
}

fn norms(j: &JacobiMatrix) -> (Vec<f64>, Vec<f64>) {
    let mut h = Vec::with_capacity(j.n() + 1);
    let mut ln = Vec::with_capacity(j.n() + 1);
    h.push(1.0);
    ln.push(0.0);
    let mut acc = 1.0;
    let mut ln_acc = 0.0;
    for &coupling in j.couplings() {
        acc *= coupling * coupling;
        ln_acc += coupling.ln();
        h.push(acc);
        ln.push(ln_acc);
    }
    (h, ln)
}

/// Evaluate χ_0(λ)..χ_N(λ) by the forward recurrence.
///
/// The chain must have strictly positive couplings.
pub fn eval_chi(j: &JacobiMatrix, lambda: f64) -> Vec<f64> {
    if j.n_sites() > FORWARD_RECURRENCE_SOFT_LIMIT + 1 {
        log::warn!(
            "forward recurrence over {} sites may overflow away from the spectrum",
            j.n_sites()
        );
    }
    let n = j.n();
    let mut chi = Vec::with_capacity(n + 1);
    chi.push(1.0);
    let mut below = 0.0;
    for l in 0..n {
        let here = chi[l];
        let next = ((lambda - j.field(l)) * here - j.coupling(l) * below) / j.coupling(l + 1);
        chi.push(next);
        below = here;
    }
    chi
}

/// Evaluate the monic polynomials P_0(λ)..P_{N+1}(λ); the last entry is the
/// characteristic polynomial of the chain.
pub fn eval_monic(j: &JacobiMatrix, lambda: f64) -> Vec<f64> {
    let n = j.n();
    let mut p = Vec::with_capacity(n + 2);
    p.push(1.0);
    let mut below = 0.0;
    for l in 0..=n {
        let here = p[l];
        let jsq = j.coupling(l) * j.coupling(l);
        p.push((lambda - j.field(l)) * here - jsq * below);
        below = here;
    }
    p
}

/// Π_{r≠s}(λ_s − λ_r) for every s: the derivative of Π_r (λ − λ_r) at each
/// of its roots, computed from the factored form.
pub fn char_poly_derivatives(points: &[f64]) -> Vec<f64> {
    points
        .iter()
        .enumerate()
        .map(|(s, &x)| {
            points
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != s)
                .map(|(_, &y)| x - y)
                .product()
        })
        .collect()
}

/// Recover the orthogonality weights of a chain from its characteristic
/// polynomial: w_s ∝ h_N / (P_N(λ_s) P'_{N+1}(λ_s)), normalised to sum 1.
///
/// `spectrum` must be the eigenvalue list of `j` (checked against a fresh
/// eigendecomposition); a disagreement yields `SpectrumMismatch`.
pub fn weights_from_char(j: &JacobiMatrix, spectrum: &[f64]) -> Result<SpectralData> {
    let eig = eigendecompose(j)?;
    if spectrum.len() != eig.eigenvalues().len() {
        return Err(Error::SpectrumMismatch { defect: f64::INFINITY });
    }
    let scale = eig.spectral_radius().max(1.0);
    let defect = spectrum
        .iter()
        .zip(eig.eigenvalues())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if defect > 1e-8 * scale {
        return Err(Error::SpectrumMismatch { defect });
    }

    // w_s = h_N / (P_N P'_{N+1}) = √h_N / (χ_N P'_{N+1}); the √h_N factor
    // is common to all s and drops out in the normalisation.
    let deriv = char_poly_derivatives(spectrum);
    let n = j.n();
    let mut unnormalised = Vec::with_capacity(spectrum.len());
    for (s, &lambda) in spectrum.iter().enumerate() {
        let chi_n = eval_chi(j, lambda)[n];
        let u = 1.0 / (chi_n * deriv[s]);
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::SpectrumMismatch { defect: f64::INFINITY });
        }
        unnormalised.push(u);
    }
    SpectralData::new(spectrum.to_vec(), unnormalised)
}

/// Largest deviation of Σ_s w_s χ_m(λ_s) χ_n(λ_s) from δ_{mn} over all
/// degree pairs.
///
/// Panics if the table and the measure have different numbers of points.
pub fn orthonormality_defect(table: &PolynomialTable, measure: &SpectralData) -> f64 {
    assert_eq!(
        table.n_points(),
        measure.len(),
        "table and measure sizes disagree"
    );
    let degrees = table.n_degrees();
    let mut defect: f64 = 0.0;
    for m in 0..degrees {
        for n in m..degrees {
            let mut acc = 0.0;
            for (s, &w) in measure.weights().iter().enumerate() {
                acc += w * table.chi(m, s) * table.chi(n, s);
            }
            let target = if m == n { 1.0 } else { 0.0 };
            defect = defect.max((acc - target).abs());
        }
    }
    defect
}
