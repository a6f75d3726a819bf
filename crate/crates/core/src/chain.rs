//! Chain data types and the tridiagonal eigendecomposition contract.
//!
//! An XX spin chain with N+1 sites, couplings J_1..J_N and local fields
//! B_0..B_N restricts in the one-excitation sector to the symmetric
//! tridiagonal (Jacobi) matrix
//!
//! ```text
//!     ( B_0  J_1            )
//!     ( J_1  B_1  J_2       )
//!     (      J_2  B_2  ...  )
//!     (           ...  J_N  )
//!     (           J_N  B_N  )
//! ```
//!
//! With all couplings strictly positive the spectrum is simple. The rows of
//! the transition matrix W are the eigenvectors, ordered by ascending
//! eigenvalue and signed so that W_{s0} ≥ 0; the squared first components
//! w_s = W_{s0}² are the discrete orthogonality weights every other module
//! builds on.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adjacent eigenvalues closer than `GAP_TOL_REL * (λ_N − λ_0)` are treated
/// as degenerate.
pub const GAP_TOL_REL: f64 = 1e-9;

/// Eigenvector first components at or below this floor indicate a decoupled
/// boundary site.
pub const BOUNDARY_WEIGHT_FLOOR: f64 = 1e-14;

/// Couplings and fields of the one-excitation restriction of an XX chain.
///
/// Immutable after construction. `new` enforces strictly positive couplings;
/// `allowing_zero_couplings` relaxes this to J_ℓ ≥ 0 for the split-chain
/// deformations at |θ| = π/4 (such chains are rejected by
/// [`eigendecompose`] but can still be propagated in time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JacobiMatrixRepr", into = "JacobiMatrixRepr")]
pub struct JacobiMatrix {
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

/// Interchange form: `{"n": N, "couplings": [J_1..J_N], "fields": [B_0..B_N]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct JacobiMatrixRepr {
    n: usize,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

impl TryFrom<JacobiMatrixRepr> for JacobiMatrix {
    type Error = Error;

    fn try_from(repr: JacobiMatrixRepr) -> Result<Self> {
        if repr.couplings.len() != repr.n {
            return Err(Error::InvalidChain(format!(
                "field `n` = {} disagrees with {} couplings",
                repr.n,
                repr.couplings.len()
            )));
        }
        JacobiMatrix::new(repr.couplings, repr.fields)
    }
}

impl From<JacobiMatrix> for JacobiMatrixRepr {
    fn from(j: JacobiMatrix) -> Self {
        JacobiMatrixRepr {
            n: j.couplings.len(),
            couplings: j.couplings,
            fields: j.fields,
        }
    }
}

impl JacobiMatrix {
    /// Build a chain from couplings J_1..J_N and fields B_0..B_N.
    ///
    /// Requires `fields.len() == couplings.len() + 1`, every entry finite and
    /// every coupling strictly positive.
    pub fn new(couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        Self::validate(&couplings, &fields, false)?;
        Ok(JacobiMatrix { couplings, fields })
    }

    /// Like [`JacobiMatrix::new`] but permits couplings equal to zero, which
    /// describe a chain split into independent segments.
    pub fn allowing_zero_couplings(couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        Self::validate(&couplings, &fields, true)?;
        Ok(JacobiMatrix { couplings, fields })
    }

    /// The chain with a single site at field `b0`.
    pub fn single_site(b0: f64) -> Self {
        JacobiMatrix {
            couplings: Vec::new(),
            fields: vec![b0],
        }
    }

    fn validate(couplings: &[f64], fields: &[f64], allow_zero: bool) -> Result<()> {
        if fields.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one site".into()));
        }
        if fields.len() != couplings.len() + 1 {
            return Err(Error::InvalidChain(format!(
                "{} couplings need {} fields, got {}",
                couplings.len(),
                couplings.len() + 1,
                fields.len()
            )));
        }
        if !fields.iter().all(|b| b.is_finite()) {
            return Err(Error::InvalidChain("fields must be finite".into()));
        }
        for (l, &j) in couplings.iter().enumerate() {
            let ok = j.is_finite() && if allow_zero { j >= 0.0 } else { j > 0.0 };
            if !ok {
                return Err(Error::InvalidChain(format!(
                    "coupling J_{} = {} must be {}",
                    l + 1,
                    j,
                    if allow_zero { "non-negative" } else { "strictly positive" }
                )));
            }
        }
        Ok(())
    }

    /// Chain order N (the number of couplings; sites are 0..=N).
    pub fn n(&self) -> usize {
        self.couplings.len()
    }

    /// Number of sites N+1.
    pub fn n_sites(&self) -> usize {
        self.fields.len()
    }

    /// Couplings J_1..J_N.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Fields B_0..B_N.
    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// J_ℓ with the 1-based index of the recurrence; J_0 = 0 by convention.
    pub fn coupling(&self, l: usize) -> f64 {
        if l == 0 {
            0.0
        } else {
            self.couplings[l - 1]
        }
    }

    /// B_ℓ, 0-based.
    pub fn field(&self, l: usize) -> f64 {
        self.fields[l]
    }

    /// True if some coupling is exactly zero (split chain).
    pub fn has_zero_coupling(&self) -> bool {
        self.couplings.iter().any(|&j| j == 0.0)
    }

    /// Dense symmetric tridiagonal form.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n_sites();
        let mut m = DMatrix::zeros(n, n);
        for (l, &b) in self.fields.iter().enumerate() {
            m[(l, l)] = b;
        }
        for (l, &j) in self.couplings.iter().enumerate() {
            m[(l, l + 1)] = j;
            m[(l + 1, l)] = j;
        }
        m
    }

    /// Largest |entry| of the matrix.
    pub fn max_abs(&self) -> f64 {
        self.couplings
            .iter()
            .chain(self.fields.iter())
            .fold(0.0, |acc, &x| acc.max(x.abs()))
    }

    /// The chain with `c` added to every field (a uniform magnetic shift).
    pub fn shifted(&self, c: f64) -> Self {
        JacobiMatrix {
            couplings: self.couplings.clone(),
            fields: self.fields.iter().map(|b| b + c).collect(),
        }
    }

    /// Largest violation of the mirror symmetry J_n = J_{N+1−n},
    /// B_n = B_{N−n}.
    pub fn persymmetry_defect(&self) -> f64 {
        let n = self.n();
        let mut defect: f64 = 0.0;
        for l in 0..self.n_sites() {
            defect = defect.max((self.fields[l] - self.fields[n - l]).abs());
        }
        for l in 0..n {
            defect = defect.max((self.couplings[l] - self.couplings[n - 1 - l]).abs());
        }
        defect
    }

    /// True iff the chain is mirror-symmetric about its midpoint within
    /// `tol` (entrywise, absolute).
    pub fn is_persymmetric(&self, tol: f64) -> bool {
        self.persymmetry_defect() <= tol
    }

    /// Largest entrywise difference against another chain of the same size.
    ///
    /// Panics if the sizes differ.
    pub fn max_abs_diff(&self, other: &JacobiMatrix) -> f64 {
        assert_eq!(self.n_sites(), other.n_sites(), "size mismatch");
        let mut d: f64 = 0.0;
        for (a, b) in self.couplings.iter().zip(&other.couplings) {
            d = d.max((a - b).abs());
        }
        for (a, b) in self.fields.iter().zip(&other.fields) {
            d = d.max((a - b).abs());
        }
        d
    }
}

/// Eigenvalues and eigenvectors of a chain.
///
/// `transition` holds the orthogonal matrix W with row s the eigenvector of
/// λ_s expressed over the site basis, W_{s0} ≥ 0.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    transition: DMatrix<f64>,
}

impl EigenSystem {
    /// Ascending eigenvalues λ_0 < … < λ_N.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Transition matrix W, rows indexed by eigenvalue, columns by site.
    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    /// max(|λ_0|, |λ_N|).
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0, |acc: f64, &x| acc.max(x.abs()))
    }

    /// ‖W Wᵀ − 1‖_max.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.transition.nrows();
        let g = &self.transition * self.transition.transpose();
        let mut defect: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                defect = defect.max((g[(r, c)] - target).abs());
            }
        }
        defect
    }

    /// ‖Wᵀ diag(λ) W − J‖_max, the reconstruction error against a chain.
    pub fn reconstruction_defect(&self, j: &JacobiMatrix) -> f64 {
        let n = self.transition.nrows();
        let mut lambda = DMatrix::zeros(n, n);
        for (s, &v) in self.eigenvalues.iter().enumerate() {
            lambda[(s, s)] = v;
        }
        let rebuilt = self.transition.transpose() * lambda * &self.transition;
        let dense = j.to_dense();
        let mut defect: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                defect = defect.max((rebuilt[(r, c)] - dense[(r, c)]).abs());
            }
        }
        defect
    }
}

/// A finite discrete measure: strictly increasing support points with
/// positive weights normalised to sum 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectralDataRepr", into = "SpectralDataRepr")]
pub struct SpectralData {
    points: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpectralDataRepr {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<SpectralDataRepr> for SpectralData {
    type Error = Error;

    fn try_from(repr: SpectralDataRepr) -> Result<Self> {
        SpectralData::new(repr.points, repr.weights)
    }
}

impl From<SpectralData> for SpectralDataRepr {
    fn from(m: SpectralData) -> Self {
        SpectralDataRepr {
            points: m.points,
            weights: m.weights,
        }
    }
}

impl SpectralData {
    /// Build a measure from points and (possibly unnormalised) weights.
    ///
    /// Points must be finite and strictly increasing, weights finite and
    /// strictly positive; weights are rescaled to sum 1.
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidSpectrumOrder);
        }
        if !points.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidSpectrumOrder);
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpectrumOrder);
        }
        if weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::InvalidSpectrumOrder);
        }
        let total: f64 = weights.iter().sum();
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(SpectralData { points, weights })
    }

    /// Support points, ascending.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Weights, summing to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the measure has no support points (never constructible).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of even-index weights minus 1/2 and odd-index weights minus 1/2,
    /// which both vanish for measures of mirror-symmetric chains.
    pub fn half_sum_defect(&self) -> f64 {
        let even: f64 = self.weights.iter().step_by(2).sum();
        let odd: f64 = self.weights.iter().skip(1).step_by(2).sum();
        (even - 0.5).abs().max((odd - 0.5).abs())
    }
}

/// Plain sorted eigendecomposition without the contract checks; also used
/// for split chains whose spectrum may be degenerate.
pub(crate) fn raw_symmetric_eigen(j: &JacobiMatrix) -> (Vec<f64>, DMatrix<f64>) {
    let n = j.n_sites();
    if n == 1 {
        return (vec![j.field(0)], DMatrix::identity(1, 1));
    }
    let se = nalgebra::linalg::SymmetricEigen::new(j.to_dense());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut transition = DMatrix::zeros(n, n);
    for (s, &col) in order.iter().enumerate() {
        eigenvalues.push(se.eigenvalues[col]);
        let flip = se.eigenvectors[(0, col)] < 0.0;
        for l in 0..n {
            let v = se.eigenvectors[(l, col)];
            transition[(s, l)] = if flip { -v } else { v };
        }
    }
    (eigenvalues, transition)
}

/// Diagonalise a chain.
///
/// Returns ascending eigenvalues and the transition matrix with the
/// W_{s0} ≥ 0 sign convention. Fails with `InvalidChain` when a coupling is
/// not strictly positive and with `NonSimpleSpectrum` when two eigenvalues
/// collide within `GAP_TOL_REL` of the spectral range.
pub fn eigendecompose(j: &JacobiMatrix) -> Result<EigenSystem> {
    if j.has_zero_coupling() {
        return Err(Error::InvalidChain(
            "eigendecomposition requires strictly positive couplings".into(),
        ));
    }
    let (eigenvalues, transition) = raw_symmetric_eigen(j);
    let n = eigenvalues.len();
    if n >= 2 {
        let range = eigenvalues[n - 1] - eigenvalues[0];
        let tol = GAP_TOL_REL * range;
        let gap = eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if gap < tol {
            return Err(Error::NonSimpleSpectrum { gap, tol });
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        transition,
    })
}

/// Extract the orthogonality measure of a chain: point λ_s with weight
/// w_s = (W_{s0})².
///
/// Fails with `ZeroBoundaryWeight` if some eigenvector has no support on
/// site 0.
pub fn spectral_data(e: &EigenSystem) -> Result<SpectralData> {
    let mut weights = Vec::with_capacity(e.eigenvalues.len());
    for s in 0..e.eigenvalues.len() {
        let w0 = e.transition[(s, 0)];
        if w0 <= BOUNDARY_WEIGHT_FLOOR {
            return Err(Error::ZeroBoundaryWeight { index: s });
        }
        weights.push(w0 * w0);
    }
    SpectralData::new(e.eigenvalues.clone(), weights)
}
