//! Reduce a two-qubit Hamiltonian to canonical form.
//!
//! Takes an operator with local terms and a skewed coupling matrix, strips
//! the locals, diagonalizes the coupling with a proper-rotation SVD, and
//! prints the canonical coefficients together with the SU(2) pair that
//! undoes the reduction. Rebuilding the input from the pieces checks the
//! bookkeeping.
//!
//! Run with:
//!   cargo run --release --example canonical_form

use hamsim::matcore::max_abs_diff;
use hamsim::pauli_ham::{canonicalize, to_matrix, PauliHamiltonian};
use nalgebra::Matrix3;

fn main() {
    let ham = PauliHamiltonian {
        a: 0.4,
        m: [0.1, -0.2, 0.05],
        n: [0.0, 0.3, -0.1],
        h: Matrix3::new(
            0.9, 0.3, -0.2, //
            -0.1, 0.7, 0.4, //
            0.2, -0.5, 0.6,
        ),
    };

    let form = canonicalize(&ham);
    println!(
        "canonical coefficients h = ({:.6}, {:.6}, {:.6})",
        form.h[0], form.h[1], form.h[2]
    );
    println!(
        "ordering h1 >= h2 >= |h3|: {}",
        form.h[0] >= form.h[1] && form.h[1] >= form.h[2].abs()
    );
    println!("removed identity coefficient a = {}", form.removed_a);
    println!(
        "removed local m = {:?}, n = {:?}",
        form.removed_m, form.removed_n
    );
    println!("u =\n{:.4}", form.u);
    println!("v =\n{:.4}", form.v);

    let residual = max_abs_diff(&form.reconstruct_input(), &to_matrix(&ham));
    println!("reconstruction residual (u x v conjugation + locals): {residual:.3e}");

    let spectrum = form.spectrum();
    println!("Bell spectrum lambda = {:?}", spectrum.values());
    println!("zero sum: {:.3e}", spectrum.values().iter().sum::<f64>());
}
