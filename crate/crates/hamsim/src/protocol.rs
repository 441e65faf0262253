//! Executable protocols: the Bell basis, the table of local-unitary pairs
//! realizing Bell-projector permutations, synthesis of time-sharing
//! protocols from a Birkhoff decomposition, and the ancilla-assisted
//! extreme-point machinery with its phase twirl.
//!
//! A simulation protocol is a probability distribution over local unitary
//! pairs: running the source Hamiltonian for fractions `p_k` of the time,
//! conjugated by `u_k x v_k`, produces (to first order) the evolution of the
//! mixed operator `sum_k p_k (u_k x v_k) H (u_k x v_k)^H`. Permuting Bell
//! projectors is enough to realize any mixing target allowed by
//! majorization, and each of the 24 permutations factors into the three
//! adjacent transpositions
//!
//! ```text
//! (Phi1 Phi2)  <-  (I - i s1)/sqrt2 x (I - i s1)/sqrt2
//! (Phi2 Phi3)  <-  (I - i s3)/sqrt2 x (I - i s3)/sqrt2
//! (Phi3 Phi4)  <-  (I + i s1)/sqrt2 x (I - i s1)/sqrt2
//! ```
//!
//! each realized by an explicit local unitary pair (phases on the Bell
//! vectors are free; the contract is the action on projectors). Every
//! generator and every composed table entry is verified numerically during
//! construction, so a transcription slip cannot survive to use.

use num_complex::Complex64;

use crate::majorization::{all_permutations, birkhoff_decompose, simulation_factor};
use crate::matcore::{c64, eye2, frob_dist, kron, max_abs_diff, pauli, CMat, ORTHO_TOL};
use crate::pauli_ham::{bell_basis_matrix, CanonicalForm};
use crate::HamsimError;

/// The fixed basis of maximally entangled two-qubit vectors.
#[derive(Debug, Clone)]
pub struct BellBasis {
    matrix: CMat,
}

impl BellBasis {
    pub fn standard() -> Self {
        BellBasis {
            matrix: bell_basis_matrix(),
        }
    }

    /// 4x4 unitary whose k-th column is `Phi_{k+1}`.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Column vector `Phi_{i+1}` (0-based index).
    pub fn vector(&self, i: usize) -> CMat {
        CMat::from_column_slice(4, 1, self.matrix.column(i).as_slice())
    }

    /// Projector `|Phi_{i+1}><Phi_{i+1}|`.
    pub fn projector(&self, i: usize) -> CMat {
        let phi = self.vector(i);
        &phi * phi.adjoint()
    }
}

/// A pair of one-qubit unitaries acting as `u x v`.
#[derive(Debug, Clone)]
pub struct LocalUnitaryPair {
    pub u: CMat,
    pub v: CMat,
}

impl LocalUnitaryPair {
    pub fn new(u: CMat, v: CMat) -> Result<Self, HamsimError> {
        for m in [&u, &v] {
            let n = m.nrows();
            if n != m.ncols() {
                return Err(HamsimError::DimensionMismatch {
                    expected: n,
                    got: m.ncols(),
                });
            }
            let dev = frob_dist(&(m * m.adjoint()), &CMat::identity(n, n));
            if dev.is_nan() || dev > ORTHO_TOL * 10.0 {
                return Err(HamsimError::Domain(format!(
                    "matrix is not unitary: |uu^H - I| = {dev:e}"
                )));
            }
        }
        Ok(LocalUnitaryPair { u, v })
    }

    pub fn identity() -> Self {
        LocalUnitaryPair {
            u: eye2(),
            v: eye2(),
        }
    }

    /// The product unitary `u x v`.
    pub fn tensor(&self) -> CMat {
        kron(&self.u, &self.v)
    }

    fn compose(&self, first: &LocalUnitaryPair) -> LocalUnitaryPair {
        LocalUnitaryPair {
            u: &self.u * &first.u,
            v: &self.v * &first.v,
        }
    }
}

/// One weighted step of a simulation protocol.
#[derive(Debug, Clone)]
pub struct ProtocolTerm {
    pub p: f64,
    pub pair: LocalUnitaryPair,
}

/// A time-sharing schedule of local unitary pairs simulating
/// `s * H_target` from `H_source` (both canonical).
#[derive(Debug, Clone)]
pub struct SimulationProtocol {
    pub terms: Vec<ProtocolTerm>,
    /// Achieved simulation factor.
    pub s: f64,
    pub target_h: [f64; 3],
    pub source_h: [f64; 3],
}

/// Map from Bell-projector permutations to the local unitary pairs
/// realizing them: for the entry `(sigma, (u, v))`,
/// `(u x v) |Phi_i><Phi_i| (u x v)^H = |Phi_sigma(i)><Phi_sigma(i)|`.
#[derive(Debug, Clone)]
pub struct BellPermutationTable {
    entries: Vec<([usize; 4], LocalUnitaryPair)>,
}

impl BellPermutationTable {
    pub fn get(&self, perm: [usize; 4]) -> Option<&LocalUnitaryPair> {
        self.entries
            .iter()
            .find(|(p, _)| *p == perm)
            .map(|(_, pair)| pair)
    }

    pub fn entries(&self) -> &[([usize; 4], LocalUnitaryPair)] {
        &self.entries
    }
}

/// Permutation action of a local unitary pair on Bell projectors, if any.
fn projector_permutation(pair: &LocalUnitaryPair, basis: &BellBasis) -> Option<[usize; 4]> {
    let g = pair.tensor();
    let mut sigma = [usize::MAX; 4];
    for (i, slot) in sigma.iter_mut().enumerate() {
        let conj = &g * basis.projector(i) * g.adjoint();
        let mut image = None;
        for j in 0..4 {
            if max_abs_diff(&conj, &basis.projector(j)) <= ORTHO_TOL {
                image = Some(j);
                break;
            }
        }
        *slot = image?;
    }
    Some(sigma)
}

fn transposition(a: usize) -> [usize; 4] {
    let mut p = [0, 1, 2, 3];
    p.swap(a, a + 1);
    p
}

/// Build the full table of 24 Bell-projector permutations.
///
/// The three adjacent-transposition generators are verified against their
/// claimed permutations first; any mismatch aborts the construction. Each
/// permutation is then factored into adjacent transpositions by bubble
/// sort (word length at most 6), the corresponding pairs are composed, and
/// the composite is verified as well.
pub fn build_permutation_table() -> Result<BellPermutationTable, HamsimError> {
    let basis = BellBasis::standard();
    let sqrt2 = std::f64::consts::SQRT_2;
    let rot = |sign: f64, axis: usize| -> CMat {
        (eye2() + pauli(axis).map(|z| z * c64(0., sign))).map(|z| z / c64(sqrt2, 0.))
    };

    let generators = [
        LocalUnitaryPair::new(rot(-1., 1), rot(-1., 1))?,
        LocalUnitaryPair::new(rot(-1., 3), rot(-1., 3))?,
        LocalUnitaryPair::new(rot(1., 1), rot(-1., 1))?,
    ];
    for (k, gen) in generators.iter().enumerate() {
        let sigma = projector_permutation(gen, &basis);
        if sigma != Some(transposition(k)) {
            return Err(HamsimError::Domain(format!(
                "generator {} does not realize the transposition ({} {}): got {:?}",
                k + 1,
                k + 1,
                k + 2,
                sigma
            )));
        }
    }

    let mut entries = Vec::with_capacity(24);
    for sigma in all_permutations() {
        // Bubble-sort sigma's array to the identity; the swap positions read
        // off a factorization sigma = t_{j_m} o ... o t_{j_1}.
        let mut arr = sigma;
        let mut word = Vec::new();
        loop {
            let mut swapped = false;
            for j in 0..3 {
                if arr[j] > arr[j + 1] {
                    arr.swap(j, j + 1);
                    word.push(j);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let mut pair = LocalUnitaryPair::identity();
        for &j in &word {
            pair = generators[j].compose(&pair);
        }
        if projector_permutation(&pair, &basis) != Some(sigma) {
            return Err(HamsimError::Domain(format!(
                "composed word {word:?} does not realize permutation {sigma:?}"
            )));
        }
        entries.push((sigma, pair));
    }
    Ok(BellPermutationTable { entries })
}

fn invert(perm: [usize; 4]) -> [usize; 4] {
    let mut inv = [0usize; 4];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Synthesize a protocol simulating `s * H_target` with `H_source`.
///
/// Decomposes the scaled target spectrum over the permutation hull of the
/// source spectrum and maps each permutation through the Bell table. The
/// requested `s` may not exceed the optimal factor; the result is verified
/// to reconstruct `s * H'_canon` within 1e-9 before it is returned.
pub fn synthesize(
    source: &CanonicalForm,
    target: &CanonicalForm,
    s: f64,
) -> Result<SimulationProtocol, HamsimError> {
    if s.is_nan() || s < 0.0 {
        return Err(HamsimError::Domain(format!("factor s = {s} must be >= 0")));
    }
    let lambda = source.spectrum();
    let lambda_target = target.spectrum();
    let optimum = simulation_factor(&lambda_target, &lambda);
    if let Some(opt) = optimum.value {
        if s > opt * (1.0 + 1e-12) + 1e-15 {
            return Err(HamsimError::FactorTooLarge {
                requested: s,
                optimal: opt,
            });
        }
    }

    let t = lambda_target.values();
    let mu: [f64; 4] = std::array::from_fn(|i| s * t[i]);
    let decomposition = birkhoff_decompose(mu, &lambda)?;
    let table = build_permutation_table()?;

    let mut terms = Vec::with_capacity(decomposition.terms.len());
    for term in &decomposition.terms {
        let pair = table
            .get(invert(term.perm))
            .expect("table holds all 24 permutations")
            .clone();
        terms.push(ProtocolTerm {
            p: term.weight,
            pair,
        });
    }
    let protocol = SimulationProtocol {
        terms,
        s,
        target_h: target.h,
        source_h: source.h,
    };

    let achieved = reconstruct(&protocol, &source.canonical_matrix());
    let wanted = target.canonical_matrix().map(|z| z * c64(s, 0.));
    let residual = frob_dist(&achieved, &wanted);
    if residual > 1e-9 {
        return Err(HamsimError::BadReconstruction {
            residual,
            tolerance: 1e-9,
        });
    }
    Ok(protocol)
}

/// The literal unitary mixing `sum_k p_k (u_k x v_k) H (u_k x v_k)^H`.
pub fn reconstruct(protocol: &SimulationProtocol, h: &CMat) -> CMat {
    let mut out = CMat::zeros(4, 4);
    for term in &protocol.terms {
        let g = term.pair.tensor();
        out += (&g * h * g.adjoint()).map(|z| z * c64(term.p, 0.));
    }
    out
}

/// Dimensions of the two systems and their ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjDims {
    pub d_a: usize,
    pub d_a_prime: usize,
    pub d_b: usize,
    pub d_b_prime: usize,
}

impl ConjDims {
    fn total(&self) -> usize {
        self.d_a * self.d_a_prime * self.d_b * self.d_b_prime
    }

    fn index(&self, a: usize, ap: usize, b: usize, bp: usize) -> usize {
        ((a * self.d_a_prime + ap) * self.d_b + b) * self.d_b_prime + bp
    }
}

/// An ancilla-assisted conjugation `<0 0| U x V ( . x I ) U^H x V^H |0 0>`:
/// `U` acts on system A with its ancilla A', `V` on B with B'.
#[derive(Debug, Clone)]
pub struct AncillaConjugation {
    u: CMat,
    v: CMat,
    dims: ConjDims,
}

impl AncillaConjugation {
    /// `u` must be unitary on `d_a * d_a'` dimensions (ancilla dimension is
    /// inferred), and likewise `v` on `d_b * d_b'`.
    pub fn new(u: CMat, v: CMat, d_a: usize, d_b: usize) -> Result<Self, HamsimError> {
        for (m, d) in [(&u, d_a), (&v, d_b)] {
            if m.nrows() != m.ncols() || d == 0 || m.nrows() % d != 0 {
                return Err(HamsimError::DimensionMismatch {
                    expected: d,
                    got: m.nrows(),
                });
            }
            let n = m.nrows();
            let dev = frob_dist(&(m * m.adjoint()), &CMat::identity(n, n));
            if dev.is_nan() || dev > ORTHO_TOL * (n as f64) {
                return Err(HamsimError::Domain(format!(
                    "conjugation factor is not unitary: |UU^H - I| = {dev:e}"
                )));
            }
        }
        let dims = ConjDims {
            d_a,
            d_a_prime: u.nrows() / d_a,
            d_b,
            d_b_prime: v.nrows() / d_b,
        };
        Ok(AncillaConjugation { u, v, dims })
    }

    /// Trivial conjugation (no ancillas, identity unitaries).
    pub fn identity(d_a: usize, d_b: usize) -> Self {
        AncillaConjugation {
            u: CMat::identity(d_a, d_a),
            v: CMat::identity(d_b, d_b),
            dims: ConjDims {
                d_a,
                d_a_prime: 1,
                d_b,
                d_b_prime: 1,
            },
        }
    }

    pub fn dims(&self) -> ConjDims {
        self.dims
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    /// `U x V` on the full space in (A, A', B, B') index order.
    fn total_unitary(&self) -> CMat {
        kron(&self.u, &self.v)
    }

    /// `H x I_{A'B'}` in (A, A', B, B') index order.
    fn embed(&self, h: &CMat) -> CMat {
        let d = self.dims;
        let n = d.total();
        let mut out = CMat::zeros(n, n);
        for a in 0..d.d_a {
            for c in 0..d.d_a {
                for b in 0..d.d_b {
                    for e in 0..d.d_b {
                        let val = h[(a * d.d_b + b, c * d.d_b + e)];
                        if val == c64(0., 0.) {
                            continue;
                        }
                        for ap in 0..d.d_a_prime {
                            for bp in 0..d.d_b_prime {
                                out[(d.index(a, ap, b, bp), d.index(c, ap, e, bp))] = val;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Isometry embedding `psi -> psi x |0_{A'} 0_{B'}>`.
    fn blank_isometry(&self) -> CMat {
        let d = self.dims;
        let mut out = CMat::zeros(d.total(), d.d_a * d.d_b);
        for a in 0..d.d_a {
            for b in 0..d.d_b {
                out[(d.index(a, 0, b, 0), a * d.d_b + b)] = c64(1., 0.);
            }
        }
        out
    }
}

/// The extreme-point compression `<00| U x V (H x I) U^H x V^H |00>`.
///
/// Embeds `H` with blank ancillas, conjugates, and keeps the block where
/// both ancillas sit in their `|0>` slice. Linear in `H`, Hermitian for
/// Hermitian input, and the plain `(u x v)`-conjugation when both ancillas
/// are trivial.
pub fn luanc_conjugate(h: &CMat, conj: &AncillaConjugation) -> Result<CMat, HamsimError> {
    let d = conj.dims;
    let small = d.d_a * d.d_b;
    if h.nrows() != small || h.ncols() != small {
        return Err(HamsimError::DimensionMismatch {
            expected: small,
            got: h.nrows(),
        });
    }
    let uv = conj.total_unitary();
    let full = &uv * conj.embed(h) * uv.adjoint();
    let mut out = CMat::zeros(small, small);
    for a in 0..d.d_a {
        for b in 0..d.d_b {
            for c in 0..d.d_a {
                for e in 0..d.d_b {
                    out[(a * d.d_b + b, c * d.d_b + e)] =
                        full[(d.index(a, 0, b, 0), d.index(c, 0, e, 0))];
                }
            }
        }
    }
    Ok(out)
}

/// The phase-twirl family realizing an ancilla-assisted extreme point.
#[derive(Debug, Clone)]
pub struct TwirlEnsemble {
    /// Terms `(p_ab, U_a, V_b)` with uniform `p_ab = 1/(d_A' d_B')`.
    pub terms: Vec<(f64, CMat, CMat)>,
}

/// Construct the ensemble `U_a = (I x D_a) U`, `V_b = (I x D_b) V` with the
/// phase diagonals `D_a = sum_l e^{i 2 pi a l / d_A'} |l><l|` and uniform
/// weights over all `(a, b)`.
pub fn build_twirl(conj: &AncillaConjugation) -> TwirlEnsemble {
    let d = conj.dims;
    let phase_diag = |idx: usize, dim: usize, sys: usize| -> CMat {
        let diag = CMat::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (idx as f64) * (r as f64) / (dim as f64),
                )
            } else {
                c64(0., 0.)
            }
        });
        kron(&CMat::identity(sys, sys), &diag)
    };
    let p = 1.0 / ((d.d_a_prime * d.d_b_prime) as f64);
    let mut terms = Vec::with_capacity(d.d_a_prime * d.d_b_prime);
    for a in 0..d.d_a_prime {
        let ua = phase_diag(a, d.d_a_prime, d.d_a) * conj.u();
        for b in 0..d.d_b_prime {
            let vb = phase_diag(b, d.d_b_prime, d.d_b) * conj.v();
            terms.push((p, ua.clone(), vb));
        }
    }
    TwirlEnsemble { terms }
}

/// Residual of the twirl identity on the blank-ancilla input slice.
///
/// Both sides act on vectors `psi x |0 0>`: the uniform phase-twirl average
/// must equal the `|0 0>`-projected single conjugation. Returns the
/// Frobenius norm of the difference, which the construction drives to zero.
pub fn verify_twirl(conj: &AncillaConjugation, h: &CMat) -> Result<f64, HamsimError> {
    let d = conj.dims;
    let small = d.d_a * d.d_b;
    if h.nrows() != small || h.ncols() != small {
        return Err(HamsimError::DimensionMismatch {
            expected: small,
            got: h.nrows(),
        });
    }
    let embedded = conj.embed(h);
    let blank = conj.blank_isometry();

    let ensemble = build_twirl(conj);
    let mut lhs = CMat::zeros(d.total(), small);
    for (p, ua, vb) in &ensemble.terms {
        let g = kron(ua, vb);
        lhs += (&g * &embedded * g.adjoint() * &blank).map(|z| z * c64(*p, 0.));
    }

    let uv = conj.total_unitary();
    let projector = &blank * blank.adjoint();
    let rhs = projector * &uv * &embedded * uv.adjoint() * &blank;

    Ok((lhs - rhs).norm())
}

/// Upper bound `T' / s` on the interaction time needed to synthesize the
/// gate `exp(-i H' T')` from `H`.
pub fn gate_time_bound(
    target: &CanonicalForm,
    source: &CanonicalForm,
    t_prime: f64,
) -> Result<f64, HamsimError> {
    let factor = simulation_factor(&target.spectrum(), &source.spectrum());
    match factor.value {
        None => Ok(0.0), // nothing to simulate
        Some(s) if s <= 0.0 => Err(HamsimError::ZeroFactor(
            "source cannot simulate target at any time ratio".to_string(),
        )),
        Some(s) => Ok(t_prime / s),
    }
}
