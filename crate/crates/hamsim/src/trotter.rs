//! Finite-time certification of simulation protocols.
//!
//! A protocol is a time-sharing schedule: running the source Hamiltonian
//! for the fraction `p_k` of a short interval `t`, conjugated by the k-th
//! local unitary pair, produces the interspersed product
//!
//! ```text
//! prod_k (u_k x v_k) exp(-i p_k t H) (u_k x v_k)^H
//! ```
//!
//! which agrees with `exp(-i s t H')` up to second-order corrections in
//! `t`. The checks here run that product at a sweep of times, measure the
//! operator-norm deviation, and fit the log-log slope, which must sit near
//! 2 (or the errors must vanish outright, the commuting case).

use crate::matcore::{c64, expm, op_norm, CMat};
use crate::protocol::{reconstruct, SimulationProtocol};
use crate::HamsimError;

/// Error sweep with its fitted scaling exponent.
#[derive(Debug, Clone)]
pub struct TrotterReport {
    /// Sweep times, decreasing.
    pub times: Vec<f64>,
    /// Operator-norm deviations, matching `times`.
    pub errors: Vec<f64>,
    /// Log-log regression slope over the asymptotic window (the smallest
    /// half of the times). NaN when the window errors sit at machine
    /// precision and no slope is identifiable.
    pub fitted_slope: f64,
    /// Largest error over the asymptotic window.
    pub max_window_error: f64,
}

impl TrotterReport {
    /// Second-order scaling confirmed: slope in [1.8, 2.2], or errors at
    /// machine precision throughout the window.
    pub fn second_order(&self) -> bool {
        self.max_window_error <= 1e-13 || (1.8..=2.2).contains(&self.fitted_slope)
    }
}

/// One pass of the schedule: the interspersed product of true evolutions,
/// factors applied in term order (the first term acts first).
pub fn run_product(protocol: &SimulationProtocol, h: &CMat, t: f64) -> CMat {
    let mut out = CMat::identity(4, 4);
    for term in &protocol.terms {
        let g = term.pair.tensor();
        let step = &g * expm(h, term.p * t).expect("Hermitian input") * g.adjoint();
        out = step * out;
    }
    out
}

/// `n` repetitions of the schedule at `t/n`, for slope confirmation.
pub fn run_product_rounds(protocol: &SimulationProtocol, h: &CMat, t: f64, rounds: usize) -> CMat {
    let single = run_product(protocol, h, t / rounds.max(1) as f64);
    let mut out = CMat::identity(4, 4);
    for _ in 0..rounds.max(1) {
        out = &single * out;
    }
    out
}

/// Sweep the product error and fit its scaling exponent.
///
/// `error(t) = ||run_product(t) - exp(-i s t H_target)||`. The protocol is
/// gated first: its unitary mixing must reconstruct `s * H_target` within
/// 1e-9, so a corrupted schedule is rejected before any sweep runs.
pub fn scaling_check(
    protocol: &SimulationProtocol,
    h_source: &CMat,
    h_target: &CMat,
    s: f64,
    t_values: &[f64],
) -> Result<TrotterReport, HamsimError> {
    let mixed = reconstruct(protocol, h_source);
    let wanted = h_target.map(|z| z * c64(s, 0.));
    let residual = (mixed - wanted).norm();
    if residual > 1e-9 {
        return Err(HamsimError::BadReconstruction {
            residual,
            tolerance: 1e-9,
        });
    }

    let mut times: Vec<f64> = t_values.to_vec();
    times.sort_by(|a, b| b.total_cmp(a));
    let errors: Vec<f64> = times
        .iter()
        .map(|&t| {
            let product = run_product(protocol, h_source, t);
            let exact = expm(h_target, s * t).expect("Hermitian input");
            op_norm(&(product - exact))
        })
        .collect();

    // asymptotic window: the smallest half of the times
    let start = times.len() / 2;
    let window: Vec<(f64, f64)> = times[start..]
        .iter()
        .zip(&errors[start..])
        .map(|(&t, &e)| (t, e))
        .collect();
    let max_window_error = window.iter().fold(0.0f64, |acc, &(_, e)| acc.max(e));
    let fitted_slope = fit_loglog_slope(&window);

    Ok(TrotterReport {
        times,
        errors,
        fitted_slope,
        max_window_error,
    })
}

/// Least-squares slope of log(error) against log(t), ignoring points at
/// machine precision.
fn fit_loglog_slope(points: &[(f64, f64)]) -> f64 {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > 1e-15)
        .map(|&(t, e)| (t.ln(), e.ln()))
        .collect();
    if usable.len() < 2 {
        return f64::NAN;
    }
    let n = usable.len() as f64;
    let (sx, sy): (f64, f64) = usable
        .iter()
        .fold((0., 0.), |(sx, sy), &(x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den): (f64, f64) = usable.iter().fold((0., 0.), |(num, den), &(x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::simulation_factor;
    use crate::matcore::{eye2, frob_dist, kron, max_abs_diff, pauli};
    use crate::pauli_ham::{canonicalize, PauliHamiltonian};
    use crate::protocol::{synthesize, LocalUnitaryPair, ProtocolTerm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn canonical(h: [f64; 3]) -> crate::pauli_ham::CanonicalForm {
        canonicalize(&PauliHamiltonian::from_diagonal_coupling(h))
    }

    fn identity_protocol() -> SimulationProtocol {
        SimulationProtocol {
            terms: vec![ProtocolTerm {
                p: 1.0,
                pair: LocalUnitaryPair::identity(),
            }],
            s: 1.0,
            target_h: [1., 0., 0.],
            source_h: [1., 0., 0.],
        }
    }

    #[test]
    fn single_identity_term_is_exact() {
        let h = kron(&pauli(1), &pauli(1));
        let protocol = identity_protocol();
        for &t in &[0.1, 1.0, 3.0] {
            let product = run_product(&protocol, &h, t);
            let exact = expm(&h, t).unwrap();
            assert!(max_abs_diff(&product, &exact) <= 1e-13);
        }
    }

    #[test]
    fn commuting_terms_are_exact() {
        // (I x s1) conjugation flips the sign of s3 x s3; the two conjugated
        // Hamiltonians commute and average to zero.
        let h = kron(&pauli(3), &pauli(3));
        let protocol = SimulationProtocol {
            terms: vec![
                ProtocolTerm {
                    p: 0.5,
                    pair: LocalUnitaryPair::identity(),
                },
                ProtocolTerm {
                    p: 0.5,
                    pair: LocalUnitaryPair::new(eye2(), pauli(1)).unwrap(),
                },
            ],
            s: 0.0,
            target_h: [0.; 3],
            source_h: [0., 0., 1.],
        };
        let product = run_product(&protocol, &h, 0.7);
        assert!(max_abs_diff(&product, &CMat::identity(4, 4)) <= 1e-13);
    }

    #[test]
    fn product_is_unitary() {
        let source = canonical([1., 0., 0.]);
        let target = canonical([1., 1., 1.]);
        let protocol = synthesize(&source, &target, 1.0 / 3.0).unwrap();
        let h = source.canonical_matrix();
        for j in 0..9 {
            let t = 0.1 * 0.5f64.powi(j);
            let u = run_product(&protocol, &h, t);
            assert!(frob_dist(&(&u * u.adjoint()), &CMat::identity(4, 4)) <= 1e-12);
        }
    }

    #[test]
    fn ising_to_heisenberg_small_time_deviation() {
        let source = canonical([1., 0., 0.]);
        let target = canonical([1., 1., 1.]);
        let protocol = synthesize(&source, &target, 1.0 / 3.0).unwrap();
        let product = run_product(&protocol, &source.canonical_matrix(), 0.01);
        let exact = expm(&target.canonical_matrix(), 0.01 / 3.0).unwrap();
        let dev = op_norm(&(product - exact));
        assert!(dev <= 1e-4, "deviation {dev:e} should be O(t^2)");
    }

    #[test]
    fn identity_protocol_scaling_flat() {
        let source = canonical([1., 0.5, 0.25]);
        let protocol = synthesize(&source, &source, 1.0).unwrap();
        let times: Vec<f64> = (0..9).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        let h = source.canonical_matrix();
        let report = scaling_check(&protocol, &h, &h, 1.0, &times).unwrap();
        assert!(report.max_window_error <= 1e-13);
        assert!(report.second_order());
    }

    /// A two-term mixing that is NOT a Bell-projector permutation: equal
    /// rotations by +-theta about x on both qubits turn `s3 x s3` into
    /// `cos^2 s3 x s3 + sin^2 s2 x s2` exactly (the cross terms cancel),
    /// and the two conjugated Hamiltonians do not commute.
    fn rotation_mixing(theta: f64) -> (SimulationProtocol, CMat, CMat) {
        let rot = |angle: f64| expm(&pauli(1), angle / 2.0).unwrap();
        let protocol = SimulationProtocol {
            terms: vec![
                ProtocolTerm {
                    p: 0.5,
                    pair: LocalUnitaryPair::new(rot(theta), rot(theta)).unwrap(),
                },
                ProtocolTerm {
                    p: 0.5,
                    pair: LocalUnitaryPair::new(rot(-theta), rot(-theta)).unwrap(),
                },
            ],
            s: 1.0,
            target_h: [theta.cos().powi(2), theta.sin().powi(2), 0.],
            source_h: [1., 0., 0.],
        };
        let h_source = kron(&pauli(3), &pauli(3));
        let c2 = theta.cos().powi(2);
        let s2 = theta.sin().powi(2);
        let h_target = kron(&pauli(3), &pauli(3)).map(|z| z * c64(c2, 0.))
            + kron(&pauli(2), &pauli(2)).map(|z| z * c64(s2, 0.));
        (protocol, h_source, h_target)
    }

    #[test]
    fn synthesized_protocols_are_exactly_commuting() {
        // Table-based protocols conjugate Bell projectors to Bell
        // projectors; every term shares the Bell eigenbasis and the
        // interspersed product is exact at machine precision.
        let source = canonical([1., 0., 0.]);
        let target = canonical([1., 1., 1.]);
        let protocol = synthesize(&source, &target, 1.0 / 3.0).unwrap();
        let times: Vec<f64> = (0..9).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        let report = scaling_check(
            &protocol,
            &source.canonical_matrix(),
            &target.canonical_matrix(),
            1.0 / 3.0,
            &times,
        )
        .unwrap();
        assert!(
            report.max_window_error <= 1e-13,
            "errors {:?}",
            report.errors
        );
        assert!(report.second_order());
    }

    #[test]
    fn non_commuting_mixing_slope_two() {
        let (protocol, h_source, h_target) = rotation_mixing(0.6);
        let times: Vec<f64> = (0..9).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        let report = scaling_check(&protocol, &h_source, &h_target, 1.0, &times).unwrap();
        assert!(report.max_window_error > 1e-13);
        assert!(
            (1.8..=2.2).contains(&report.fitted_slope),
            "slope {}",
            report.fitted_slope
        );
    }

    #[test]
    fn corrupted_protocol_rejected() {
        let source = canonical([1., 0., 0.]);
        let target = canonical([1., 1., 1.]);
        let mut protocol = synthesize(&source, &target, 1.0 / 3.0).unwrap();
        protocol.terms[0].p += 0.05;
        let times = [0.1, 0.05];
        let err = scaling_check(
            &protocol,
            &source.canonical_matrix(),
            &target.canonical_matrix(),
            1.0 / 3.0,
            &times,
        )
        .unwrap_err();
        assert!(matches!(err, HamsimError::BadReconstruction { .. }));
    }

    #[test]
    fn random_optimal_protocols_stay_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        let mut checked = 0;
        while checked < 25 {
            let source = canonical(crate::majorization::random_canonical_h(&mut rng));
            let target = canonical(crate::majorization::random_canonical_h(&mut rng));
            let factor = simulation_factor(&target.spectrum(), &source.spectrum());
            let Some(s) = factor.value else { continue };
            let protocol = synthesize(&source, &target, s).unwrap();
            let times: Vec<f64> = (4..=9).map(|j| 0.1 * 0.5f64.powi(j)).collect();
            let report = scaling_check(
                &protocol,
                &source.canonical_matrix(),
                &target.canonical_matrix(),
                s,
                &times,
            )
            .unwrap();
            assert!(report.second_order());
            checked += 1;
        }
    }

    #[test]
    fn halving_t_quarters_the_error() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for _ in 0..25 {
            let (protocol, h_source, h_target) = rotation_mixing(rng.gen_range(0.2..1.2));
            let times: Vec<f64> = (4..=9).map(|j| 0.1 * 0.5f64.powi(j)).collect();
            let report = scaling_check(&protocol, &h_source, &h_target, 1.0, &times).unwrap();
            for w in report.errors.windows(2) {
                if w[0] > 1e-12 && w[1] > 1e-14 {
                    let ratio = w[0] / w[1];
                    assert!(
                        (3.5..=4.5).contains(&ratio),
                        "halving ratio {ratio} out of band"
                    );
                }
            }
        }
    }

    #[test]
    fn repeated_rounds_reduce_error() {
        let (protocol, h_source, h_target) = rotation_mixing(0.6);
        let exact = expm(&h_target, 0.3).unwrap();
        let one = op_norm(&(run_product(&protocol, &h_source, 0.3) - &exact));
        let four = op_norm(&(run_product_rounds(&protocol, &h_source, 0.3, 4) - exact));
        assert!(
            four < one / 3.0,
            "rounds should shrink the error: {one:e} -> {four:e}"
        );
    }
}
