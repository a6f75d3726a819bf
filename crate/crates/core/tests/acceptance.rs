//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Every tolerance is fixed here, in code.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use revival_core::chain::{eigendecompose, spectral_data, JacobiMatrix};
use revival_core::deform::{deform_chain, perturbed_poly_constants};
use revival_core::designer::{design_chain, design_angles};
use revival_core::dynamics::{
    detect_fractional_revival, hadamard_factorization_check, krawtchouk_amplitude, propagator,
    propagator_from_eigen, RevivalOutcome,
};
use revival_core::inverse::{gamma_from, pst_weights, reconstruct_jacobi};
use revival_core::models::{
    bi_lattice_points, centered_para_krawtchouk_chain, fr_chain_psi_half, krawtchouk_chain,
};
use revival_core::orthopoly::eval_monic;

const DELTAS: [f64; 5] = [0.5, 0.75, 1.0, 4.0 / 3.0, 1.5];
const THETAS: [f64; 3] = [PI / 16.0, PI / 8.0, 3.0 * PI / 16.0];

fn report(number: u32, name: &str, pass: bool, detail: String) -> bool {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {name}: {verdict} ({detail})");
    pass
}

fn centered_bilattice_spectrum(n: usize, delta: f64) -> Vec<f64> {
    let shift = (n as f64 - 1.0 + delta) / 2.0;
    bi_lattice_points(n, delta).into_iter().map(|x| x - shift).collect()
}

#[test]
fn criterion_01_closed_form_vs_inverse_spectral() {
    let mut worst: f64 = 0.0;
    for n in 3..=20 {
        for &delta in &DELTAS {
            let spectrum = centered_bilattice_spectrum(n, delta);
            let rebuilt = reconstruct_jacobi(&pst_weights(&spectrum).unwrap()).unwrap();
            let closed = centered_para_krawtchouk_chain(n, delta, PI).unwrap();
            let defect = rebuilt.max_abs_diff(&closed) / closed.max_abs();
            worst = worst.max(defect);
        }
    }
    let pass = worst <= 1e-8;
    assert!(report(
        1,
        "closed form vs inverse spectral",
        pass,
        format!("max relative entry defect {worst:.2e}")
    ));
}

#[test]
fn criterion_02_unit_delta_reduction() {
    let mut worst: f64 = 0.0;
    for n in 1..=20 {
        let uniform = krawtchouk_chain(n, PI).unwrap();
        let bilattice = centered_para_krawtchouk_chain(n, 1.0, PI).unwrap();
        worst = worst.max(uniform.max_abs_diff(&bilattice));
    }
    let pass = worst <= 1e-12;
    assert!(report(
        2,
        "delta = 1 reduces to the uniform chain",
        pass,
        format!("max entry defect {worst:.2e}")
    ));
}

#[test]
fn criterion_03_analytic_amplitude() {
    let mut rng = ChaCha8Rng::seed_from_u64(421);
    let period = PI;
    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        let j = krawtchouk_chain(n, period).unwrap();
        let eig = eigendecompose(&j).unwrap();
        for _ in 0..10 {
            let t: f64 = rng.random_range(0.0..4.0 * period);
            let u = propagator_from_eigen(&eig, t);
            for k in 0..=n {
                for l in 0..=n {
                    let defect = (krawtchouk_amplitude(n, period, t, k, l) - u.amplitude(k, l))
                        .norm();
                    worst = worst.max(defect);
                }
            }
        }
    }
    let pass = worst <= 1e-10;
    assert!(report(
        3,
        "terminating hypergeometric amplitude",
        pass,
        format!("max amplitude defect {worst:.2e}")
    ));
}

#[test]
fn criterion_04_perfect_transfer_and_mirror_inversion() {
    let mut worst_transfer: f64 = 0.0;
    let mut worst_mirror: f64 = 0.0;
    for n in 1..=12 {
        let j = krawtchouk_chain(n, PI).unwrap();
        let u = propagator(&j, PI);
        worst_transfer = worst_transfer.max((u.amplitude(n, 0).norm() - 1.0).abs());
        let phase = Complex64::from_polar(1.0, u.amplitude(n, 0).arg());
        for k in 0..=n {
            for l in 0..=n {
                let expected = if k + l == n { phase } else { Complex64::ZERO };
                worst_mirror = worst_mirror.max((u.amplitude(k, l) - expected).norm());
            }
        }
    }
    let pass = worst_transfer <= 1e-10 && worst_mirror <= 1e-9;
    assert!(report(
        4,
        "perfect transfer with full mirror inversion",
        pass,
        format!("transfer defect {worst_transfer:.2e}, mirror defect {worst_mirror:.2e}")
    ));
}

#[test]
fn criterion_05_revival_amplitudes_at_quarter_phase() {
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        for &theta in &[-PI / 8.0, -PI / 16.0, PI / 16.0, PI / 8.0, 3.0 * PI / 16.0] {
            let (j, _) = fr_chain_psi_half(n, theta, PI).unwrap();
            let u = propagator(&j, PI);
            for k in 1..n {
                worst = worst.max(u.amplitude(k, 0).norm());
            }
            let alpha = u.amplitude(0, 0);
            let beta = u.amplitude(n, 0);
            worst = worst.max((alpha.norm_sqr() - (2.0 * theta).sin().powi(2)).abs());
            worst = worst.max((beta.norm_sqr() - (2.0 * theta).cos().powi(2)).abs());
            if alpha.norm() > 1e-12 {
                let rel = (beta / alpha).arg();
                worst = worst.max((rel.abs() - PI / 2.0).abs());
            }
        }
        // Balanced case: θ = π/8 puts exactly half the probability on each
        // end.
        let (j, _) = fr_chain_psi_half(n, PI / 8.0, PI).unwrap();
        let u = propagator(&j, PI);
        worst = worst.max((u.amplitude(0, 0).norm_sqr() - 0.5).abs());
        worst = worst.max((u.amplitude(n, 0).norm_sqr() - 0.5).abs());
    }
    let pass = worst <= 1e-9;
    assert!(report(
        5,
        "quarter-phase revival amplitudes",
        pass,
        format!("max defect {worst:.2e}")
    ));
}

#[test]
fn criterion_06_transfer_after_revival_cycle() {
    let mut worst: f64 = 0.0;
    for n in [3usize, 5, 9] {
        let (j, _) = fr_chain_psi_half(n, PI / 8.0, PI).unwrap(); // δ = 3/2
        let eig = eigendecompose(&j).unwrap();

        let u2 = propagator_from_eigen(&eig, 2.0 * PI);
        worst = worst.max((u2.amplitude(n, 0).norm() - 1.0).abs());

        // Cycle: revive, transfer, revive, return.
        for (m, expect_ends) in [(1, true), (2, false), (3, true), (4, false)] {
            let u = propagator_from_eigen(&eig, m as f64 * PI);
            if expect_ends {
                worst = worst.max((u.amplitude(0, 0).norm_sqr() - 0.5).abs());
                worst = worst.max((u.amplitude(n, 0).norm_sqr() - 0.5).abs());
            } else if m == 2 {
                worst = worst.max((u.amplitude(n, 0).norm() - 1.0).abs());
            } else {
                worst = worst.max((u.amplitude(0, 0).norm() - 1.0).abs());
            }
        }
    }
    let pass = worst <= 1e-9;
    assert!(report(
        6,
        "perfect transfer at 2T with a 4T cycle",
        pass,
        format!("max defect {worst:.2e}")
    ));
}

#[test]
fn criterion_07_isospectral_deformation() {
    let mut worst_spectrum: f64 = 0.0;
    let mut worst_sparsity: f64 = 0.0;
    let mut worst_dynamics: f64 = 0.0;
    for n in 3..=12 {
        for &theta in &THETAS {
            let j = krawtchouk_chain(n, PI).unwrap();
            let d = deform_chain(&j, theta).unwrap();

            let e0 = eigendecompose(&j).unwrap();
            let e1 = eigendecompose(&d).unwrap();
            let radius = e0.spectral_radius();
            for s in 0..=n {
                worst_spectrum = worst_spectrum
                    .max((e0.eigenvalues()[s] - e1.eigenvalues()[s]).abs() / radius);
            }

            // Everything away from the centre must be untouched.
            let central_coupling: &[usize] = if n % 2 == 1 {
                &[(n + 1) / 2]
            } else {
                &[n / 2, n / 2 + 1]
            };
            for l in 1..=n {
                if !central_coupling.contains(&l) {
                    worst_sparsity = worst_sparsity.max((d.coupling(l) - j.coupling(l)).abs());
                }
            }
            let central_fields: &[usize] = if n % 2 == 1 {
                &[(n - 1) / 2, (n + 1) / 2]
            } else {
                &[]
            };
            for l in 0..=n {
                if !central_fields.contains(&l) {
                    worst_sparsity = worst_sparsity.max((d.field(l) - j.field(l)).abs());
                }
            }

            let u = propagator(&d, PI);
            let alpha = u.amplitude(0, 0);
            let beta = u.amplitude(n, 0);
            worst_dynamics = worst_dynamics.max((alpha.norm() - (2.0 * theta).sin()).abs());
            worst_dynamics = worst_dynamics.max((beta.norm() - (2.0 * theta).cos()).abs());
            worst_dynamics = worst_dynamics.max((beta / alpha).arg().abs());
            for k in 1..n {
                worst_dynamics = worst_dynamics.max(u.amplitude(k, 0).norm());
            }
        }
    }
    let pass = worst_spectrum <= 1e-10 && worst_sparsity < 1e-12 && worst_dynamics <= 1e-9;
    assert!(report(
        7,
        "isospectral deformation",
        pass,
        format!(
            "spectrum {worst_spectrum:.2e}, off-centre movement {worst_sparsity:.2e}, dynamics {worst_dynamics:.2e}"
        )
    ));
}

#[test]
fn criterion_08_half_sums_and_weight_ratio_law() {
    let mut worst_half: f64 = 0.0;
    // Every mirror-symmetric family in the crate.
    for n in 1..=16 {
        let j = krawtchouk_chain(n, PI).unwrap();
        worst_half = worst_half
            .max(spectral_data(&eigendecompose(&j).unwrap()).unwrap().half_sum_defect());
    }
    for n in 3..=10 {
        for &delta in &DELTAS {
            let j = centered_para_krawtchouk_chain(n, delta, PI).unwrap();
            worst_half = worst_half
                .max(spectral_data(&eigendecompose(&j).unwrap()).unwrap().half_sum_defect());
        }
    }

    let mut worst_ratio: f64 = 0.0;
    for n in 3..=10 {
        for &theta in &THETAS {
            let j = krawtchouk_chain(n, PI).unwrap();
            let d = deform_chain(&j, theta).unwrap();
            let w0 = spectral_data(&eigendecompose(&j).unwrap()).unwrap();
            let w1 = spectral_data(&eigendecompose(&d).unwrap()).unwrap();
            let gamma = gamma_from(theta, 0.0).unwrap().gamma();
            let c2 = (2.0 * theta).cos();
            for s in 0..=n {
                let skew = if (n % 2 == 1) == (s % 2 == 0) {
                    gamma * c2
                } else {
                    c2 / gamma
                };
                worst_ratio =
                    worst_ratio.max((w1.weights()[s] / w0.weights()[s] - skew).abs());
            }
        }
    }
    let pass = worst_half <= 1e-12 && worst_ratio <= 1e-9;
    assert!(report(
        8,
        "half sums and skewed weight ratios",
        pass,
        format!("half-sum defect {worst_half:.2e}, ratio defect {worst_ratio:.2e}")
    ));
}

#[test]
fn criterion_09_surgery_against_christoffel_oracle() {
    let j = krawtchouk_chain(8, PI).unwrap();
    let measure = spectral_data(&eigendecompose(&j).unwrap()).unwrap();

    let oracle = |removed: &[usize]| -> JacobiMatrix {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (s, (&x, &w)) in measure.points().iter().zip(measure.weights()).enumerate() {
            if removed.contains(&s) {
                continue;
            }
            let factor: f64 = removed
                .iter()
                .map(|&r| (x - measure.points()[r]).abs())
                .product();
            points.push(x);
            weights.push(w * factor);
        }
        reconstruct_jacobi(
            &revival_core::SpectralData::new(points, weights).unwrap(),
        )
        .unwrap()
    };

    let mut worst_oracle: f64 = 0.0;
    let mut worst_pst: f64 = 0.0;

    let cases: Vec<(JacobiMatrix, Vec<usize>)> = vec![
        (revival_core::surgery::remove_level(&j, 0).unwrap(), vec![0]),
        (revival_core::surgery::remove_level(&j, 8).unwrap(), vec![8]),
        (revival_core::surgery::remove_pair(&j, 3).unwrap(), vec![3, 4]),
        (revival_core::surgery::remove_pair(&j, 5).unwrap(), vec![5, 6]),
    ];
    for (cut, removed) in cases {
        worst_oracle = worst_oracle.max(cut.max_abs_diff(&oracle(&removed)));
        let u = propagator(&cut, PI);
        worst_pst = worst_pst.max((u.amplitude(cut.n(), 0).norm() - 1.0).abs());
    }
    let pass = worst_oracle <= 1e-7 && worst_pst <= 1e-8;
    assert!(report(
        9,
        "spectral surgery",
        pass,
        format!("oracle defect {worst_oracle:.2e}, transfer defect {worst_pst:.2e}")
    ));
}

#[test]
fn criterion_10_perturbed_polynomial_constants() {
    let mut worst: f64 = 0.0;
    for n in 2..=9 {
        for &theta in &THETAS {
            let j = krawtchouk_chain(n, PI).unwrap();
            let d = deform_chain(&j, theta).unwrap();
            let zeta = perturbed_poly_constants(&j, theta).unwrap();
            let eig = eigendecompose(&j).unwrap();
            for &lambda in eig.eigenvalues() {
                let p = eval_monic(&j, lambda);
                let q = eval_monic(&d, lambda);
                worst = worst.max((q[n] - p[n] - zeta.zeta()[0]).abs());
                for (l, &z) in zeta.zeta().iter().enumerate() {
                    worst = worst.max((q[n - l] - p[n - l] - z * p[l]).abs());
                }
            }
        }
    }
    let pass = worst <= 1e-8;
    assert!(report(
        10,
        "perturbed monic polynomials",
        pass,
        format!("max defect {worst:.2e}")
    ));
}

#[test]
fn criterion_11_designer_round_trip() {
    let thetas = [-PI / 8.0, -PI / 16.0, PI / 16.0, PI / 8.0, 3.0 * PI / 16.0];
    let psis = [0.0, PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0];
    let mut worst_recovery: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    let mut all_fire = true;
    for n in 3..=10 {
        for &theta in &thetas {
            for &psi in &psis {
                let design = design_chain(n, theta, psi, PI).unwrap();
                let angles = design_angles(theta, psi).unwrap();
                worst_identity = worst_identity
                    .max(((2.0 * angles.sigma).sin() - (2.0 * theta).sin() * psi.sin()).abs());
                match detect_fractional_revival(&design.chain, PI, 1e-8) {
                    RevivalOutcome::Revival { target, .. } => {
                        worst_recovery = worst_recovery.max((target.theta() - theta).abs());
                        worst_recovery = worst_recovery.max((target.psi() - psi).abs());
                    }
                    RevivalOutcome::NoRevival { .. } => all_fire = false,
                }
            }
        }
    }
    let pass = all_fire && worst_recovery <= 1e-8 && worst_identity <= 1e-12;
    assert!(report(
        11,
        "generic designer round trip",
        pass,
        format!(
            "recovery defect {worst_recovery:.2e}, closure identity {worst_identity:.2e}, \
             revival fired everywhere: {all_fire}"
        )
    ));
}

#[test]
fn criterion_12_hadamard_factorisation() {
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        for &theta in &[0.0, PI / 16.0, PI / 8.0, 3.0 * PI / 16.0, -PI / 8.0] {
            let (j, _) = fr_chain_psi_half(n, theta, PI).unwrap();
            worst = worst.max(hadamard_factorization_check(&j, PI));
        }
        let uniform = krawtchouk_chain(n, PI).unwrap();
        worst = worst.max(hadamard_factorization_check(&uniform, PI));
    }
    let pass = worst <= 1e-9;
    assert!(report(
        12,
        "Hadamard factorisation of quarter-phase chains",
        pass,
        format!("max defect {worst:.2e}")
    ));
}
