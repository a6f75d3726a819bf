//! Isospectral deformations of mirror-symmetric chains.
//!
//! Conjugating a persymmetric J by the involution V(θ) — a direct sum of
//! 2×2 rotation-like blocks pairing sites ℓ and N−ℓ — preserves the
//! spectrum but trades mirror symmetry for invariance under Q = V(2θ),
//! turning perfect transfer into two-site revival with zero relative phase.
//! Only the central entries move:
//!
//! - N odd:  J̃_{(N+1)/2} = J_{(N+1)/2} cos 2θ and a ± J_{(N+1)/2} sin 2θ
//!   split of the two central fields;
//! - N even: J̃_{N/2} = J_{N/2}(cos θ + sin θ), J̃_{N/2+1} = J_{N/2}(cos θ − sin θ).
//!
//! `deform_chain` computes both the dense conjugation and the closed form
//! and insists they agree; the closed form is what is returned.

use nalgebra::DMatrix;
use std::f64::consts::FRAC_PI_4;

use crate::chain::JacobiMatrix;
use crate::error::{Error, Result};
use crate::inverse::gamma_from;

/// Dense conjugation and closed form must agree to this, relative to the
/// largest matrix entry.
pub const CLOSED_FORM_AGREEMENT: f64 = 1e-11;

/// Relative persymmetry tolerance for deformation inputs.
pub const PERSYMMETRY_REL_TOL: f64 = 1e-9;

/// Which involution a matrix realises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvolutionKind {
    /// The anti-diagonal reflection R.
    Reflection,
    /// V(θ): rotation-like pairing of mirror sites.
    PairRotation(f64),
    /// Q(θ) = V(θ) R V(θ), the symmetry of the deformed chain; equals the
    /// V-form at angle 2θ.
    QInvariance(f64),
    /// The Hadamard-type form, the V-form at π/4.
    Hadamard,
}

/// An explicit involution on the site space.
#[derive(Debug, Clone)]
pub struct InvolutionMatrix {
    kind: InvolutionKind,
    matrix: DMatrix<f64>,
}

impl InvolutionMatrix {
    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Size N+1 of the underlying site space.
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// ‖M² − 1‖_max.
    pub fn involution_defect(&self) -> f64 {
        let n = self.size();
        let sq = &self.matrix * &self.matrix;
        let mut defect: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                defect = defect.max((sq[(r, c)] - target).abs());
            }
        }
        defect
    }
}

fn v_form(n: usize, theta: f64) -> DMatrix<f64> {
    let size = n + 1;
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::zeros(size, size);
    for l in 0..size / 2 {
        let r = n - l;
        m[(l, l)] = s;
        m[(l, r)] = c;
        m[(r, l)] = c;
        m[(r, r)] = -s;
    }
    if size % 2 == 1 {
        let mid = n / 2;
        m[(mid, mid)] = 1.0;
    }
    m
}

/// The anti-diagonal reflection R on N+1 sites.
pub fn reflection(n: usize) -> InvolutionMatrix {
    let size = n + 1;
    let mut m = DMatrix::zeros(size, size);
    for l in 0..size {
        m[(l, n - l)] = 1.0;
    }
    InvolutionMatrix {
        kind: InvolutionKind::Reflection,
        matrix: m,
    }
}

/// V(θ) on N+1 sites; V(0) = R.
pub fn v_matrix(n: usize, theta: f64) -> InvolutionMatrix {
    InvolutionMatrix {
        kind: InvolutionKind::PairRotation(theta),
        matrix: v_form(n, theta),
    }
}

/// Q(θ) = V(θ) R V(θ), the invariance of the deformed chain.
pub fn q_matrix(n: usize, theta: f64) -> InvolutionMatrix {
    InvolutionMatrix {
        kind: InvolutionKind::QInvariance(theta),
        matrix: v_form(n, 2.0 * theta),
    }
}

/// The Hadamard-type involution, V(π/4).
pub fn hadamard(n: usize) -> InvolutionMatrix {
    InvolutionMatrix {
        kind: InvolutionKind::Hadamard,
        matrix: v_form(n, FRAC_PI_4),
    }
}

fn closed_form_entries(j: &JacobiMatrix, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let n = j.n();
    let mut couplings = j.couplings().to_vec();
    let mut fields = j.fields().to_vec();
    if n % 2 == 1 {
        let c = (n + 1) / 2; // central coupling, 1-based
        let jc = j.coupling(c);
        couplings[c - 1] = jc * (2.0 * theta).cos();
        let b = j.field((n - 1) / 2);
        fields[(n - 1) / 2] = b + jc * (2.0 * theta).sin();
        fields[(n + 1) / 2] = b - jc * (2.0 * theta).sin();
    } else if n > 0 {
        let m = n / 2;
        let jm = j.coupling(m);
        couplings[m - 1] = jm * (theta.cos() + theta.sin());
        couplings[m] = jm * (theta.cos() - theta.sin());
    }
    (couplings, fields)
}

fn deform_impl(j: &JacobiMatrix, theta: f64, allow_split: bool) -> Result<JacobiMatrix> {
    if !theta.is_finite() || theta.abs() > FRAC_PI_4 {
        return Err(Error::InvalidArgument(format!(
            "deformation angle must lie in [-pi/4, pi/4], got {theta}"
        )));
    }
    let scale = j.max_abs().max(1.0);
    let defect = j.persymmetry_defect();
    if defect > PERSYMMETRY_REL_TOL * scale {
        return Err(Error::RequiresPersymmetry(defect));
    }

    let (couplings, fields) = closed_form_entries(j, theta);

    // Double-entry bookkeeping: the dense conjugation V J V must reproduce
    // the closed form entry by entry.
    let v = v_form(j.n(), theta);
    let dense = &v * j.to_dense() * &v;
    let size = j.n_sites();
    let mut disagreement: f64 = 0.0;
    for r in 0..size {
        for c in 0..size {
            let expected = if r == c {
                fields[r]
            } else if c == r + 1 {
                couplings[r]
            } else if r == c + 1 {
                couplings[c]
            } else {
                0.0
            };
            disagreement = disagreement.max((dense[(r, c)] - expected).abs());
        }
    }
    assert!(
        disagreement <= CLOSED_FORM_AGREEMENT * scale,
        "dense conjugation disagrees with the closed form by {disagreement:.3e}"
    );

    if allow_split {
        let floor = 1e-12 * scale;
        let couplings = couplings
            .into_iter()
            .map(|c| if c.abs() <= floor { 0.0 } else { c })
            .collect();
        JacobiMatrix::allowing_zero_couplings(couplings, fields)
    } else {
        for (idx, &c) in couplings.iter().enumerate() {
            if c <= 1e-12 * scale {
                return Err(Error::DisconnectedChain(idx + 1));
            }
        }
        JacobiMatrix::new(couplings, fields)
    }
}

/// Deform a persymmetric chain by V(θ).
///
/// Fails with `RequiresPersymmetry` for asymmetric inputs and with
/// `DisconnectedChain` when |θ| = π/4 drives a central coupling to zero.
pub fn deform_chain(j: &JacobiMatrix, theta: f64) -> Result<JacobiMatrix> {
    deform_impl(j, theta, false)
}

/// Like [`deform_chain`] but permits the |θ| = π/4 boundary, returning a
/// chain split into two halves that still supports paired-site revival.
pub fn deform_chain_allowing_split(j: &JacobiMatrix, theta: f64) -> Result<JacobiMatrix> {
    deform_impl(j, theta, true)
}

/// The constants ζ_ℓ relating the monic polynomials of the deformed chain
/// to those of the parent: P̃_{N−ℓ} = P_{N−ℓ} + ζ_ℓ P_ℓ.
#[derive(Debug, Clone)]
pub struct PerturbedPolyParams {
    zeta: Vec<f64>,
}

impl PerturbedPolyParams {
    /// ζ_0..ζ_{⌊(N−1)/2⌋}.
    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }
}

/// ζ_0 = J_1⋯J_N (γ cos 2θ − 1) with γ the zero-phase asymmetry parameter,
/// and ζ_ℓ = ζ_0 / (J²_{N+1−ℓ} ⋯ J²_N).
pub fn perturbed_poly_constants(j: &JacobiMatrix, theta: f64) -> Result<PerturbedPolyParams> {
    let scale = j.max_abs().max(1.0);
    let defect = j.persymmetry_defect();
    if defect > PERSYMMETRY_REL_TOL * scale {
        return Err(Error::RequiresPersymmetry(defect));
    }
    let gamma = gamma_from(theta, 0.0)?.gamma();
    let n = j.n();
    if n == 0 {
        return Ok(PerturbedPolyParams { zeta: Vec::new() });
    }
    let product: f64 = j.couplings().iter().product();
    let zeta0 = product * (gamma * (2.0 * theta).cos() - 1.0);
    let mut zeta = vec![zeta0];
    let mut tail_sq = 1.0;
    for l in 1..=(n - 1) / 2 {
        tail_sq *= j.coupling(n + 1 - l).powi(2);
        zeta.push(zeta0 / tail_sq);
    }
    Ok(PerturbedPolyParams { zeta })
}
