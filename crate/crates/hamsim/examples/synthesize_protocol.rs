//! Synthesize the optimal Ising -> Heisenberg protocol and inspect it.
//!
//! Computes the optimal factor (1/3), decomposes the scaled target spectrum
//! over permutations of the source spectrum, and prints the resulting
//! schedule: probabilities and the local unitary pair of every term. The
//! weighted conjugation sum is then compared against s * H_target.
//!
//! Run with:
//!   cargo run --release --example synthesize_protocol

use hamsim::majorization::simulation_factor;
use hamsim::matcore::{c64, frob_dist};
use hamsim::pauli_ham::{canonicalize, PauliHamiltonian};
use hamsim::protocol::{reconstruct, synthesize};

fn main() {
    let source = canonicalize(&PauliHamiltonian::from_diagonal_coupling([1., 0., 0.]));
    let target = canonicalize(&PauliHamiltonian::from_diagonal_coupling([1., 1., 1.]));

    let factor = simulation_factor(&target.spectrum(), &source.spectrum());
    let s = factor.finite();
    println!(
        "optimal factor s = {s} (binding prefix constraints: {:?})",
        factor.binding_constraints
    );

    let protocol = synthesize(&source, &target, s).unwrap();
    println!("protocol with {} terms:", protocol.terms.len());
    for (k, term) in protocol.terms.iter().enumerate() {
        println!("-- term {k}: p = {:.12}", term.p);
        println!("   u =\n{:.4}", term.pair.u);
        println!("   v =\n{:.4}", term.pair.v);
    }

    let achieved = reconstruct(&protocol, &source.canonical_matrix());
    let wanted = target.canonical_matrix().map(|z| z * c64(s, 0.));
    println!(
        "reconstruction residual |sum_k p_k (u_k x v_k) H (u_k x v_k)^H - s H'| = {:.3e}",
        frob_dist(&achieved, &wanted)
    );

    // a sub-optimal factor is allowed too and may need one more term
    let sub = synthesize(&source, &target, 0.5 * s).unwrap();
    println!("\nsub-optimal run at s/2 uses {} terms", sub.terms.len());

    // asking for more than the optimum is refused
    match synthesize(&source, &target, 1.1 * s) {
        Err(err) => println!("requesting 1.1 * s fails as it should: {err}"),
        Ok(_) => unreachable!(),
    }
}
