//! Generic two-parameter revival synthesis.
//!
//! Given a target e^{−iTJ}|0⟩ = e^{iφ}(sin 2θ |0⟩ + e^{iψ} cos 2θ |N⟩),
//! the chain is built in two steps. The sublattice angles
//!
//! ```text
//!     (cos ξ, sin ξ) = (sin 2θ − γ⁻¹ cos 2θ cos ψ,  γ⁻¹ cos 2θ sin ψ),
//!     (cos η, sin η) = (sin 2θ + γ   cos 2θ cos ψ, −γ   cos 2θ sin ψ),
//! ```
//!
//! fix a bi-lattice through σ = (π + η − ξ)/4 and δ = 1 ± 4σ/π; the
//! centered bi-lattice chain realises the revival with relative phase π/2
//! and amplitude angle σ. A second, isospectral deformation by V(τ) with
//!
//! ```text
//!     cos 2τ = cos 2θ / cos 2σ,   sin 2τ = sin 2θ cos ψ / cos 2σ,
//! ```
//!
//! rotates the relative phase onto the requested ψ. Each step contributes
//! one free parameter, and the revival time never depends on N.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::chain::JacobiMatrix;
use crate::deform::deform_chain;
use crate::dynamics::{detect_fractional_revival, fit_bilattice, propagator, BiLatticeFit, RevivalOutcome, RevivalTarget};
use crate::error::{Error, Result};
use crate::inverse::gamma_from;
use crate::models::{centered_para_krawtchouk_chain, psi_half_phase, wrap_angle};

/// Internal identities of the synthesis must close to this tolerance;
/// failures indicate a bug, not a bad input.
const CONSISTENCY_TOL: f64 = 1e-10;

/// The angles steering the two construction steps.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DesignAngles {
    /// Bi-lattice amplitude angle, σ = (π + η − ξ)/4.
    pub sigma: f64,
    /// Deformation angle of the second step.
    pub tau: f64,
    /// Even-sublattice angle.
    pub xi: f64,
    /// Odd-sublattice angle.
    pub eta: f64,
    /// Asymmetry parameter of the deformation step,
    /// γ̃ − 1/γ̃ = −2 tan 2τ.
    pub gamma_tilde: f64,
}

/// Sublattice angles (ξ, η) for a revival target; ξ ∈ [0, π], η ∈ [−π, 0],
/// so their sines carry opposite signs for ψ ∈ (0, π).
pub fn xi_eta(theta: f64, psi: f64) -> Result<(f64, f64)> {
    check_target_angles(theta, psi)?;
    let gamma = gamma_from(theta, psi)?.gamma();
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    let xi = (c2 / gamma * psi.sin()).atan2(s2 - c2 / gamma * psi.cos());
    let eta = (-gamma * c2 * psi.sin()).atan2(s2 + gamma * c2 * psi.cos());
    // atan2 returns (−π, π]; for ψ = 0 the even angle degenerates to ±π —
    // pin it to +π so that σ = (π + η − ξ)/4 lands at zero.
    let xi = if xi < 0.0 && xi + PI < 1e-12 { PI } else { xi };
    Ok((xi, eta))
}

fn check_target_angles(theta: f64, psi: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() >= PI / 4.0 {
        return Err(Error::DegenerateRevival);
    }
    if !psi.is_finite() || !(0.0..PI).contains(&psi) {
        return Err(Error::InvalidArgument(format!(
            "relative phase psi must lie in [0, pi), got {psi}"
        )));
    }
    Ok(())
}

/// All design angles for a target (θ, ψ).
pub fn design_angles(theta: f64, psi: f64) -> Result<DesignAngles> {
    let (xi, eta) = xi_eta(theta, psi)?;
    let sigma = (PI + eta - xi) / 4.0;

    // Unit-modulus and closure identities; both follow from the definition
    // of γ and must hold to rounding.
    let gamma = gamma_from(theta, psi)?.gamma();
    let c2 = (2.0 * theta).cos();
    let s2 = (2.0 * theta).sin();
    let xi_norm = (s2 - c2 / gamma * psi.cos()).hypot(c2 / gamma * psi.sin());
    let eta_norm = (s2 + gamma * c2 * psi.cos()).hypot(gamma * c2 * psi.sin());
    if (xi_norm - 1.0).abs() > CONSISTENCY_TOL || (eta_norm - 1.0).abs() > CONSISTENCY_TOL {
        return Err(Error::DesignInconsistency(format!(
            "sublattice vectors are not unit: |ξ| = {xi_norm}, |η| = {eta_norm}"
        )));
    }
    let closure = ((2.0 * sigma).sin() - s2 * psi.sin()).abs();
    if closure > CONSISTENCY_TOL {
        return Err(Error::DesignInconsistency(format!(
            "sin 2σ − sin 2θ sin ψ = {closure:.3e}"
        )));
    }

    let cos2s = (2.0 * sigma).cos();
    let cos2t = c2 / cos2s;
    let sin2t = s2 * psi.cos() / cos2s;
    let tau_norm = cos2t.hypot(sin2t);
    if (tau_norm - 1.0).abs() > CONSISTENCY_TOL {
        return Err(Error::DesignInconsistency(format!(
            "deformation angle vector is not unit: {tau_norm}"
        )));
    }
    let tau = 0.5 * sin2t.atan2(cos2t);
    let gamma_tilde = gamma_from(tau, 0.0)?.gamma();
    Ok(DesignAngles {
        sigma,
        tau,
        xi,
        eta,
        gamma_tilde,
    })
}

/// A synthesised chain together with its target data.
#[derive(Debug, Clone)]
pub struct Design {
    /// The chain itself.
    pub chain: JacobiMatrix,
    /// Global phase of the revival, in (−π, π].
    pub phi: f64,
    /// Bi-lattice offset of the first step.
    pub delta: f64,
    /// The internal angles.
    pub angles: DesignAngles,
    /// Requested amplitude angle.
    pub theta: f64,
    /// Requested relative phase.
    pub psi: f64,
    /// Revival time.
    pub time_scale: f64,
}

impl Design {
    /// The revival target this design realises.
    pub fn target(&self) -> RevivalTarget {
        RevivalTarget::new(self.theta, self.psi, self.phi, self.time_scale)
    }
}

/// Build the unique chain with e^{−iTJ}|0⟩ = e^{iφ}(sin 2θ|0⟩ + e^{iψ} cos 2θ|N⟩).
pub fn design_chain(n: usize, theta: f64, psi: f64, time_scale: f64) -> Result<Design> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "revival between distinct ends needs at least two sites".into(),
        ));
    }
    let angles = design_angles(theta, psi)?;
    let delta = if n % 2 == 1 {
        1.0 + 4.0 * angles.sigma / PI
    } else {
        1.0 - 4.0 * angles.sigma / PI
    };
    let base = centered_para_krawtchouk_chain(n, delta, time_scale)?;
    let chain = if angles.tau.abs() < 1e-15 {
        base
    } else {
        deform_chain(&base, angles.tau)?
    };
    let phi = wrap_angle(psi_half_phase(n) + PI / 2.0 - psi);
    Ok(Design {
        chain,
        phi,
        delta,
        angles,
        theta,
        psi,
        time_scale,
    })
}

/// What `verify_design` reports.
#[derive(Debug, Clone)]
pub struct DesignReport {
    /// max_k |⟨k|e^{−iTJ}|0⟩ − target_k| against the prescribed target.
    pub residual: f64,
    /// Outcome of the revival detector on the chain.
    pub recovered: RevivalOutcome,
    /// Mirror-symmetry defect of the chain.
    pub persymmetry_defect: f64,
    /// Bi-lattice fit of the spectrum (using the detected phase when the
    /// detector fires, otherwise the target's).
    pub bilattice: Option<BiLatticeFit>,
}

/// Check a chain against a revival target and report every residual.
pub fn verify_design(j: &JacobiMatrix, target: &RevivalTarget) -> DesignReport {
    let u = propagator(j, target.time());
    let n = j.n();
    let mut residual: f64 = 0.0;
    for k in 0..=n {
        let want = if k == 0 {
            target.alpha()
        } else if k == n {
            target.beta()
        } else {
            num_complex::Complex64::ZERO
        };
        residual = residual.max((u.amplitude(k, 0) - want).norm());
    }
    let recovered = detect_fractional_revival(j, target.time(), 1e-6);
    let phi = recovered
        .target()
        .map(|t| t.phi())
        .unwrap_or_else(|| target.phi());
    let (values, _) = crate::chain::raw_symmetric_eigen(j);
    let bilattice = fit_bilattice(&values, target.time(), phi);
    DesignReport {
        residual,
        recovered,
        persymmetry_defect: j.persymmetry_defect(),
        bilattice,
    }
}
