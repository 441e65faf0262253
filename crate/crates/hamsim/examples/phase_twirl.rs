//! Build the phase-twirl ensemble behind an ancilla-assisted extreme point
//! and verify its defining identity.
//!
//! For unitaries `U` on A x A' and `V` on B x B', the ensemble
//! `U_a = (I x D_a) U`, `V_b = (I x D_b) V` with uniform weights averages,
//! on blank-ancilla inputs, to the `|00>`-projected single conjugation:
//! that is the protocol realizing `<00| U x V (H x I) U^H x V^H |00>` with
//! unit time efficiency.
//!
//! Run with:
//!   cargo run --release --example phase_twirl

use hamsim::matcore::{c64, expm, CMat};
use hamsim::protocol::{build_twirl, luanc_conjugate, verify_twirl, AncillaConjugation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let raw = CMat::from_fn(n, n, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let herm = (&raw + raw.adjoint()) / c64(2., 0.);
    expm(&herm, 1.0).unwrap()
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
    let raw = CMat::from_fn(n, n, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    (&raw + raw.adjoint()) / c64(2., 0.)
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    for (dap, dbp) in [(1usize, 1usize), (2, 1), (2, 2), (3, 2), (3, 3)] {
        let u = random_unitary(&mut rng, 2 * dap);
        let v = random_unitary(&mut rng, 2 * dbp);
        let conj = AncillaConjugation::new(u, v, 2, 2).unwrap();
        let h = random_hermitian(&mut rng, 4);

        let ensemble = build_twirl(&conj);
        let residual = verify_twirl(&conj, &h).unwrap();
        println!(
            "ancilla dims ({dap}, {dbp}): {} terms, weight {:.4} each, twirl residual {:.3e}",
            ensemble.terms.len(),
            ensemble.terms[0].0,
            residual
        );

        let compressed = luanc_conjugate(&h, &conj).unwrap();
        println!(
            "  extreme point <00|U x V (H x I) U^H x V^H|00>: 4x4 Hermitian, |E(H)| = {:.4}",
            compressed.norm()
        );
    }
}
