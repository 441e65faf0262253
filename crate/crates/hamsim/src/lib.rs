//! Simulation of two-qubit interaction Hamiltonians under fast local control.
//!
//! Given an available interaction `H` and a desired interaction `H'`, this
//! crate decides whether `H` can simulate `H'`, computes the optimal
//! time-efficiency factor `s` (the largest ratio of simulated time to
//! consumed interaction time), synthesizes an explicit protocol of local
//! unitaries achieving it, and certifies the protocol numerically by running
//! it as an interspersed product of true evolutions.
//!
//! The machinery rests on a chain of classical facts: every two-qubit
//! Hamiltonian reduces under local unitaries to the canonical form
//! `h1 σ1⊗σ1 + h2 σ2⊗σ2 + h3 σ3⊗σ3`, which is diagonal in the Bell basis
//! with a zero-sum spectrum λ; unitary mixing reaches exactly the spectra
//! majorized by λ; and Birkhoff's theorem turns any majorized spectrum into
//! a convex combination of permuted copies of λ, each permutation realizable
//! by a local unitary pair.
//!
//! The crate also machine-checks two constructions showing that local
//! unitaries with ancillas are strictly stronger than bare local unitaries
//! (for a pair of d-level systems with d > 2, and for three qubits), and the
//! phase-twirl ensemble realizing ancilla-assisted extreme points.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --release --example simulation_factor
//! cargo run --release --example synthesize_protocol
//! cargo run --release --example trotter_scaling
//! cargo run --release --example separation_witness
//! cargo run --release --example phase_twirl
//! cargo run --release --example canonical_form
//! ```
//!
//! or with the `hamsim` binary, which exposes the same operations behind a
//! JSON batch interface.

pub mod cli;
pub mod majorization;
pub mod matcore;
pub mod pauli_ham;
pub mod protocol;
pub mod separations;
pub mod trotter;

mod error;

pub use error::HamsimError;

pub use majorization::{
    birkhoff_decompose, hull_membership, majorizes, s_majorizes, simulation_factor,
    BirkhoffDecomposition, MajorizationVerdict, SimulationFactor,
};
pub use matcore::{expm, herm_eig, so3_to_su2, svd3, CMat, Rot3};
pub use pauli_ham::{BellSpectrum, CanonicalForm, PauliHamiltonian};
pub use protocol::{
    build_permutation_table, build_twirl, gate_time_bound, luanc_conjugate, reconstruct,
    synthesize, verify_twirl, AncillaConjugation, BellBasis, BellPermutationTable,
    LocalUnitaryPair, SimulationProtocol, TwirlEnsemble,
};
pub use separations::{example1, example2, ThreeQubitReport, WitnessReport};
pub use trotter::{run_product, scaling_check, TrotterReport};
