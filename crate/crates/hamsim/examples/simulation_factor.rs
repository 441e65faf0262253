//! Decide simulability and compute optimal time-efficiency factors.
//!
//! Walks a few named interactions through the majorization criterion and
//! the closed-form simulation factor: which Hamiltonian simulates which,
//! and at what time cost. The Ising/Heisenberg pair is the classic
//! asymmetry: Heisenberg simulates Ising at full speed, the reverse runs
//! three times slower.
//!
//! Run with:
//!   cargo run --release --example simulation_factor

use hamsim::majorization::{s_majorizes, simulation_factor};
use hamsim::pauli_ham::lambda_from_h;
use hamsim::pauli_ham::{canonicalize, PauliHamiltonian};
use hamsim::protocol::gate_time_bound;

fn main() {
    let named: [(&str, [f64; 3]); 4] = [
        ("Ising      ", [1., 0., 0.]),
        ("XY         ", [1., 1., 0.]),
        ("Heisenberg ", [1., 1., 1.]),
        ("anisotropic", [1., 0.5, -0.25]),
    ];

    println!("pairwise optimal factors s (row simulates column):\n");
    print!("{:24}", "");
    for (name, _) in &named {
        print!("{name:>14}");
    }
    println!();
    for (source_name, source_h) in &named {
        print!("source {source_name:>12}    ");
        for (_, target_h) in &named {
            let s = simulation_factor(
                &lambda_from_h(*target_h).unwrap(),
                &lambda_from_h(*source_h).unwrap(),
            );
            print!("{:>14.6}", s.finite());
        }
        println!();
    }

    println!("\nefficient simulation (s >= 1) via the h-vector inequalities:");
    for (a, ha) in &named {
        for (b, hb) in &named {
            let verdict = s_majorizes(*hb, *ha).unwrap();
            if verdict.holds && a != b {
                println!("  {} efficiently simulates {}", a.trim(), b.trim());
            }
        }
    }

    let ising = canonicalize(&PauliHamiltonian::from_diagonal_coupling([1., 0., 0.]));
    let heisenberg = canonicalize(&PauliHamiltonian::from_diagonal_coupling([1., 1., 1.]));
    let bound = gate_time_bound(&heisenberg, &ising, 1.0).unwrap();
    println!(
        "\ngate synthesis: exp(-i H_heis T') with T'=1 needs at most t = {bound} of Ising time"
    );
}
