//! Spectral surgery: removing eigenvalues from a chain.
//!
//! Removing a level λ_i rewrites the recurrence through the ratios
//! A_ℓ = P_{ℓ+1}(λ_i)/P_ℓ(λ_i):
//!
//! ```text
//!     (J'_ℓ)² = (A_ℓ/A_{ℓ−1}) J_ℓ²,   B'_ℓ = B_{ℓ+1} + A_{ℓ+1} − A_ℓ,
//! ```
//!
//! the Christoffel transform of the orthogonality measure by the kernel
//! (λ − λ_i). Weight positivity restricts admissible removals to the two
//! extremal levels, or to pairs of neighbouring interior levels; interior
//! singles are blocked at the API.

use crate::chain::{eigendecompose, JacobiMatrix};
use crate::error::{Error, Result};

/// The data of one level removal.
#[derive(Debug, Clone)]
pub struct SurgeryStep {
    removed_level: f64,
    a_ratios: Vec<f64>,
}

impl SurgeryStep {
    /// The eigenvalue being removed.
    pub fn removed_level(&self) -> f64 {
        self.removed_level
    }

    /// A_0..A_N; the last entry is exactly zero since λ_i is a root of the
    /// characteristic polynomial.
    pub fn a_ratios(&self) -> &[f64] {
        &self.a_ratios
    }
}

/// Recurrence coefficients with the couplings kept in squared form;
/// positivity is only demanded when converting back into a chain.
struct Recurrence {
    fields: Vec<f64>,
    couplings_sq: Vec<f64>,
}

impl Recurrence {
    fn of(j: &JacobiMatrix) -> Self {
        Recurrence {
            fields: j.fields().to_vec(),
            couplings_sq: j.couplings().iter().map(|c| c * c).collect(),
        }
    }

    fn into_chain(self) -> Result<JacobiMatrix> {
        let mut couplings = Vec::with_capacity(self.couplings_sq.len());
        for (l, sq) in self.couplings_sq.into_iter().enumerate() {
            if !(sq.is_finite() && sq > 0.0) {
                return Err(Error::InvalidSurgery(format!(
                    "squared coupling J'_{} = {sq:.3e} lost positivity",
                    l + 1
                )));
            }
            couplings.push(sq.sqrt());
        }
        JacobiMatrix::new(couplings, self.fields)
    }
}

/// Compute the ratios A_ℓ = P_{ℓ+1}(λ)/P_ℓ(λ) without ever forming the
/// monic values: A_0 = λ − B_0 and A_ℓ = (λ − B_ℓ) − J_ℓ²/A_{ℓ−1}.
fn ratio_sequence(data: &Recurrence, lambda: f64) -> Result<Vec<f64>> {
    let n = data.couplings_sq.len();
    let mut a = Vec::with_capacity(n + 1);
    a.push(lambda - data.fields[0]);
    for l in 1..n {
        let prev = a[l - 1];
        if !prev.is_finite() || prev == 0.0 {
            return Err(Error::InvalidSurgery(format!(
                "polynomial ratio A_{} vanishes at level {}",
                l - 1,
                lambda
            )));
        }
        a.push((lambda - data.fields[l]) - data.couplings_sq[l - 1] / prev);
    }
    // λ is an eigenvalue, so P_{N+1}(λ) = 0 identically.
    a.push(0.0);
    Ok(a)
}

fn remove_once(data: &Recurrence, lambda: f64) -> Result<(Recurrence, SurgeryStep)> {
    let n = data.couplings_sq.len();
    if n == 0 {
        return Err(Error::InvalidSurgery(
            "cannot remove the only level of a single site".into(),
        ));
    }
    let a = ratio_sequence(data, lambda)?;
    let couplings_sq = (1..n)
        .map(|l| a[l] / a[l - 1] * data.couplings_sq[l - 1])
        .collect();
    let fields = (0..n)
        .map(|l| data.fields[l + 1] + a[l + 1] - a[l])
        .collect();
    let step = SurgeryStep {
        removed_level: lambda,
        a_ratios: a,
    };
    Ok((
        Recurrence {
            fields,
            couplings_sq,
        },
        step,
    ))
}

/// Monic values P_0(λ)..P_{N+1}(λ) of a (possibly signed) recurrence.
fn monic_values(data: &Recurrence, lambda: f64) -> Vec<f64> {
    let n = data.couplings_sq.len();
    let mut p = Vec::with_capacity(n + 2);
    p.push(1.0);
    let mut below = 0.0;
    for l in 0..=n {
        let here = p[l];
        let jsq = if l == 0 { 0.0 } else { data.couplings_sq[l - 1] };
        p.push((lambda - data.fields[l]) * here - jsq * below);
        below = here;
    }
    p
}

/// Remove two levels in one composed step through the quadratic kernel
/// (λ − z1)(λ − z2).
///
/// Chaining two single removals can pass through an exact zero of some
/// P_ℓ(z1) — the uniform N = 8 chain has P_4 = (λ²−1)(λ²−9) with all four
/// zeros ON the spectrum — so the composition is evaluated through the
/// pair determinants G_ℓ = P_{ℓ+1}(z1)P_ℓ(z2) − P_ℓ(z1)P_{ℓ+1}(z2) and
/// K_ℓ = P_{ℓ+2}(z1)P_ℓ(z2) − P_ℓ(z1)P_{ℓ+2}(z2), in which those lone
/// factors cancel:
///
/// ```text
///     (J''_ℓ)² = (G_{ℓ−1} G_{ℓ+1} / G_ℓ²) J_ℓ²,
///     B''_ℓ   = B_{ℓ+2} + K_{ℓ+1}/G_{ℓ+1} − K_ℓ/G_ℓ.
/// ```
fn remove_adjacent(data: &Recurrence, z1: f64, z2: f64) -> Result<Recurrence> {
    let n = data.couplings_sq.len();
    if n < 2 {
        return Err(Error::InvalidSurgery(
            "pair removal needs at least three sites".into(),
        ));
    }
    let p1 = monic_values(data, z1);
    let p2 = monic_values(data, z2);
    let det = |i: usize, j: usize| p1[i] * p2[j] - p1[j] * p2[i];
    let g: Vec<f64> = (0..n).map(|l| det(l + 1, l)).collect();
    let k: Vec<f64> = (0..n).map(|l| det(l + 2, l)).collect();
    for (l, &value) in g.iter().enumerate() {
        if !value.is_finite() || value == 0.0 {
            return Err(Error::InvalidSurgery(format!(
                "pair determinant G_{l} vanishes"
            )));
        }
    }
    let couplings_sq = (1..n - 1)
        .map(|l| g[l - 1] * g[l + 1] / (g[l] * g[l]) * data.couplings_sq[l - 1])
        .collect();
    let fields = (0..n - 1)
        .map(|l| data.fields[l + 2] + k[l + 1] / g[l + 1] - k[l] / g[l])
        .collect();
    Ok(Recurrence {
        fields,
        couplings_sq,
    })
}

/// The ratio data for removing the eigenvalue with the given index.
pub fn plan_removal(j: &JacobiMatrix, index: usize) -> Result<SurgeryStep> {
    let eig = eigendecompose(j)?;
    let lambda = *eig
        .eigenvalues()
        .get(index)
        .ok_or_else(|| Error::InvalidSurgery(format!("no eigenvalue with index {index}")))?;
    Ok(remove_once(&Recurrence::of(j), lambda)?.1)
}

/// Remove an extremal eigenvalue (index 0 or N) from the chain.
///
/// Interior single removals are rejected: they make a weight negative.
/// Use [`remove_pair`] for the bulk.
pub fn remove_level(j: &JacobiMatrix, index: usize) -> Result<JacobiMatrix> {
    let eig = eigendecompose(j)?;
    let n = j.n();
    if index != 0 && index != n {
        return Err(Error::InvalidSurgery(format!(
            "single removal must target an extremal level, got index {index} of 0..={n}"
        )));
    }
    let lambda = eig.eigenvalues()[index];
    remove_once(&Recurrence::of(j), lambda)?.0.into_chain()
}

/// Remove the neighbouring interior pair (λ_i, λ_{i+1}).
///
/// Requires 0 < i and i+1 < N. Both levels go in one composed step; only
/// the combined removal must keep the weights positive.
pub fn remove_pair(j: &JacobiMatrix, index: usize) -> Result<JacobiMatrix> {
    let n = j.n();
    if index == 0 || index + 1 >= n {
        return Err(Error::InvalidSurgery(format!(
            "pair removal needs interior neighbours, got index {index} of 0..={n}"
        )));
    }
    let eig = eigendecompose(j)?;
    let first = eig.eigenvalues()[index];
    let second = eig.eigenvalues()[index + 1];
    remove_adjacent(&Recurrence::of(j), first, second)?.into_chain()
}
