//! Closed-form chain families.
//!
//! The uniform lattice s − N/2 with binomial weights gives the classic
//! mirror-inverting chain with couplings √(ℓ(N+1−ℓ))/2. Its bi-lattice
//! generalisation splits the spectrum into two interleaved uniform grids
//! offset by δ ∈ (0, 2),
//!
//! ```text
//!     x̄_s = s + (δ − 1)(1 − (−1)^s)/2,
//! ```
//!
//! whose persymmetric recurrence coefficients are known in closed form and
//! reduce to the uniform case at δ = 1. These generators are the analytic
//! ground truth the inverse solver is cross-checked against.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::chain::JacobiMatrix;
use crate::error::{Error, Result};

/// Lattice points x̄_0..x̄_N of the bi-lattice with offset parameter δ.
pub fn bi_lattice_points(n: usize, delta: f64) -> Vec<f64> {
    (0..=n)
        .map(|s| s as f64 + if s % 2 == 1 { delta - 1.0 } else { 0.0 })
        .collect()
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0 && delta < 2.0) {
        return Err(Error::InvalidDelta(delta));
    }
    Ok(())
}

fn check_time_scale(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time scale must be positive, got {t}"
        )));
    }
    Ok(())
}

/// The uniform-lattice chain with transfer time `t`: B ≡ 0 and
/// J_ℓ = (π/t)·√(ℓ(N+1−ℓ))/2.
pub fn krawtchouk_chain(n: usize, t: f64) -> Result<JacobiMatrix> {
    check_time_scale(t)?;
    let scale = PI / t;
    let couplings = (1..=n)
        .map(|l| scale * ((l * (n + 1 - l)) as f64).sqrt() / 2.0)
        .collect();
    JacobiMatrix::new(couplings, vec![0.0; n + 1])
}

/// Raw recurrence field B̄_ℓ on the unit bi-lattice.
fn raw_field(n: usize, delta: f64, l: usize) -> f64 {
    let base = (n as f64 - 1.0 + delta) / 2.0;
    if n % 2 == 1 {
        base
    } else {
        let li = l as i64;
        let ni = n as i64;
        let pole_a = (2 * li - ni - 1) as f64;
        let pole_b = (2 * li + 1 - ni) as f64;
        base + (delta - 1.0) * (n as f64 + 1.0) / 4.0 * (1.0 / pole_a - 1.0 / pole_b)
    }
}

/// Raw squared coupling J̄_ℓ² on the unit bi-lattice, ℓ = 1..=N.
fn raw_coupling_sq(n: usize, delta: f64, l: usize) -> f64 {
    let li = l as i64;
    let ni = n as i64;
    let num_base = (l * (n + 1 - l)) as f64;
    if n % 2 == 1 {
        let gap = (ni + 1 - 2 * li) as f64;
        let den = ((ni - 2 * li) * (ni - 2 * li + 2)) as f64;
        num_base * (gap * gap - delta * delta) / (4.0 * den)
    } else {
        let gap = (2 * li - ni - 1) as f64;
        let skew = delta - 1.0;
        num_base * (gap * gap - skew * skew) / (4.0 * gap * gap)
    }
}

/// Bi-lattice chain with recurrence coefficients mapped by the affine
/// change of spectrum x ↦ a·x̄ + b: fields a·B̄_ℓ + b, couplings |a|·J̄_ℓ.
///
/// `a = 1, b = 0` gives the raw coefficients; the eigenvalues are then the
/// bi-lattice points themselves.
pub fn para_krawtchouk_chain(n: usize, delta: f64, a: f64, b: f64) -> Result<JacobiMatrix> {
    check_delta(delta)?;
    if a == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "affine map needs a ≠ 0 and finite b, got a = {a}, b = {b}"
        )));
    }
    let mut couplings = Vec::with_capacity(n);
    for l in 1..=n {
        let sq = raw_coupling_sq(n, delta, l);
        if sq <= 0.0 || !sq.is_finite() {
            return Err(Error::InvalidDelta(delta));
        }
        couplings.push(a.abs() * sq.sqrt());
    }
    let fields = (0..=n).map(|l| a * raw_field(n, delta, l) + b).collect();
    JacobiMatrix::new(couplings, fields)
}

/// Bi-lattice chain in the centered convention: spectrum
/// (π/t)·(x̄_s − (N−1+δ)/2), which removes the uniform part of the fields
/// (B ≡ 0 for N odd).
pub fn centered_para_krawtchouk_chain(n: usize, delta: f64, t: f64) -> Result<JacobiMatrix> {
    check_time_scale(t)?;
    let a = PI / t;
    let b = -a * (n as f64 - 1.0 + delta) / 2.0;
    para_krawtchouk_chain(n, delta, a, b)
}

/// Two-site revival chain with purely imaginary end-to-end amplitude ratio
/// (relative phase π/2): the centered bi-lattice chain with
/// δ = 1 + 4θ/π for N odd and δ = 1 − 4θ/π for N even.
///
/// Returns the chain together with its global revival phase
/// φ = π(N±1)/2 reduced to (−π, π].
pub fn fr_chain_psi_half(n: usize, theta: f64, t: f64) -> Result<(JacobiMatrix, f64)> {
    check_time_scale(t)?;
    if !theta.is_finite() || theta.abs() > PI / 4.0 {
        return Err(Error::InvalidArgument(format!(
            "theta must lie in [-pi/4, pi/4], got {theta}"
        )));
    }
    let delta = if n % 2 == 1 {
        1.0 + 4.0 * theta / PI
    } else {
        1.0 - 4.0 * theta / PI
    };
    check_delta(delta)?;
    let chain = centered_para_krawtchouk_chain(n, delta, t)?;
    let phi = psi_half_phase(n);
    Ok((chain, phi))
}

/// Global phase of the ψ = π/2 revival for the centered chain:
/// π(N+1)/2 for N odd, π(N−1)/2 for N even, wrapped to (−π, π].
pub fn psi_half_phase(n: usize) -> f64 {
    let raw = if n % 2 == 1 {
        PI * (n as f64 + 1.0) / 2.0
    } else {
        PI * (n as f64 - 1.0) / 2.0
    };
    wrap_angle(raw)
}

/// Reduce an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x.rem_euclid(two_pi);
    if y > PI {
        y -= two_pi;
    }
    y
}

/// Bi-lattice description of a revival chain's spectrum:
/// (T·λ_s + φ)/π = μ/π + s + (δ−1)(1−(−1)^s)/2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiLatticeSpec {
    pub n_sites: usize,
    pub delta: f64,
    pub mu: f64,
    pub xi: f64,
    pub eta: f64,
    pub time_scale: f64,
    pub global_phase: f64,
}

impl BiLatticeSpec {
    /// Validate ranges and the parity-dependent consistency between δ and
    /// the sublattice angles (ξ, η), which must agree modulo 2.
    pub fn new(
        n_sites: usize,
        delta: f64,
        mu: f64,
        xi: f64,
        eta: f64,
        time_scale: f64,
        global_phase: f64,
    ) -> Result<Self> {
        check_delta(delta)?;
        check_time_scale(time_scale)?;
        if n_sites == 0 {
            return Err(Error::InvalidArgument("a bi-lattice needs sites".into()));
        }
        let n = n_sites - 1;
        let implied = if n % 2 == 1 {
            2.0 + (eta - xi) / PI
        } else {
            (xi - eta) / PI
        };
        let defect = (implied - delta).rem_euclid(2.0);
        let defect = defect.min(2.0 - defect);
        if defect > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "delta = {delta} is inconsistent with (xi, eta) = ({xi}, {eta})"
            )));
        }
        Ok(BiLatticeSpec {
            n_sites,
            delta,
            mu,
            xi,
            eta,
            time_scale,
            global_phase,
        })
    }

    /// The unit lattice points x̄_s.
    pub fn lattice_points(&self) -> Vec<f64> {
        bi_lattice_points(self.n_sites - 1, self.delta)
    }

    /// The spectrum λ_s = (μ − φ + π·x̄_s)/T.
    pub fn spectrum(&self) -> Vec<f64> {
        self.lattice_points()
            .into_iter()
            .map(|x| (self.mu - self.global_phase + PI * x) / self.time_scale)
            .collect()
    }
}

/// A rational bi-lattice offset δ = M₁/M₂ in lowest terms with odd M₁: the
/// arithmetic condition for the revival chain to also transfer perfectly
/// (at time M₂·T).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PstRationalCondition {
    m1: u64,
    m2: u64,
}

impl PstRationalCondition {
    /// Requires gcd(m1, m2) = 1 and m1 odd.
    pub fn new(m1: u64, m2: u64) -> Result<Self> {
        if m1 == 0 || m2 == 0 || gcd(m1, m2) != 1 || m1 % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "need co-prime m1/m2 with m1 odd, got {m1}/{m2}"
            )));
        }
        Ok(PstRationalCondition { m1, m2 })
    }

    pub fn m1(&self) -> u64 {
        self.m1
    }

    pub fn m2(&self) -> u64 {
        self.m2
    }

    /// δ = M₁/M₂.
    pub fn delta(&self) -> f64 {
        self.m1 as f64 / self.m2 as f64
    }

    /// Transfer happens at this multiple of the revival time.
    pub fn pst_multiple(&self) -> u64 {
        self.m2
    }

    /// Best rational match for a floating δ with bounded denominator, if it
    /// is within `tol` and has an odd numerator.
    pub fn approximate(delta: f64, max_denominator: u64, tol: f64) -> Option<Self> {
        if !(delta > 0.0 && delta < 2.0) {
            return None;
        }
        let mut best: Option<(f64, u64, u64)> = None;
        for m2 in 1..=max_denominator {
            let m1 = (delta * m2 as f64).round() as u64;
            if m1 == 0 {
                continue;
            }
            let err = (delta - m1 as f64 / m2 as f64).abs();
            if best.map(|(e, _, _)| err < e).unwrap_or(true) {
                best = Some((err, m1, m2));
                if err == 0.0 {
                    break;
                }
            }
        }
        let (err, m1, m2) = best?;
        if err > tol {
            return None;
        }
        let g = gcd(m1, m2);
        PstRationalCondition::new(m1 / g, m2 / g).ok()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
