//! Two-qubit Hamiltonians in the Pauli coefficient basis, their canonical
//! form, and the correspondence between canonical coefficients and the
//! Bell-basis spectrum.
//!
//! Any two-qubit Hermitian operator expands as
//!
//! ```text
//! H = a I + sum_i m_i s_i x I + sum_j n_j I x s_j + sum_ij h_ij s_i x s_j.
//! ```
//!
//! Local terms (`a`, `m`, `n`) are freely added or removed by local control
//! and never affect the non-local classification; the coupling matrix
//! `h_ij` reduces under one-qubit unitaries `u x v` to the canonical
//! diagonal `h1 s1 x s1 + h2 s2 x s2 + h3 s3 x s3` with
//! `h1 >= h2 >= |h3| >= 0`. The canonical operator is diagonal in the Bell
//! basis with zero-sum spectrum
//!
//! ```text
//! lambda_1 = h1 + h2 - h3      lambda_3 = -h1 + h2 + h3
//! lambda_2 = h1 - h2 + h3      lambda_4 = -h1 - h2 - h3
//! ```
//!
//! which is the entry point to the majorization machinery.

use nalgebra::Matrix3;

use crate::matcore::{
    c64, eye2, hermiticity_deviation, kron, pauli, so3_to_su2, svd3, CMat, RECON_TOL,
};
use crate::HamsimError;

/// Tolerance on ordering constraints and zero sums.
pub const ORDER_TOL: f64 = 1e-12;

/// A two-qubit Hermitian operator in Pauli coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    /// Identity coefficient.
    pub a: f64,
    /// Local part on qubit A: coefficients of `s_i x I`.
    pub m: [f64; 3],
    /// Local part on qubit B: coefficients of `I x s_j`.
    pub n: [f64; 3],
    /// Coupling matrix: coefficients of `s_i x s_j`.
    pub h: Matrix3<f64>,
}

impl PauliHamiltonian {
    /// Purely non-local Hamiltonian with the given coupling matrix.
    pub fn from_coupling(h: Matrix3<f64>) -> Self {
        PauliHamiltonian {
            a: 0.0,
            m: [0.0; 3],
            n: [0.0; 3],
            h,
        }
    }

    /// Diagonal coupling `h1 s1 x s1 + h2 s2 x s2 + h3 s3 x s3`.
    pub fn from_diagonal_coupling(h: [f64; 3]) -> Self {
        Self::from_coupling(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            h[0], h[1], h[2],
        )))
    }
}

/// Ordered canonical data of a two-qubit Hamiltonian.
///
/// `(u x v) . canonical . (u x v)^H` plus the removed local terms
/// reproduces the operator it was computed from.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Canonical coefficients, `h[0] >= h[1] >= |h[2]|`.
    pub h: [f64; 3],
    /// Special unitary on qubit A.
    pub u: CMat,
    /// Special unitary on qubit B.
    pub v: CMat,
    pub removed_a: f64,
    pub removed_m: [f64; 3],
    pub removed_n: [f64; 3],
}

impl CanonicalForm {
    /// The canonical operator `sum_i h_i s_i x s_i` as a dense 4x4 matrix.
    pub fn canonical_matrix(&self) -> CMat {
        to_matrix(&PauliHamiltonian::from_diagonal_coupling(self.h))
    }

    /// Bell spectrum of the canonical operator.
    pub fn spectrum(&self) -> BellSpectrum {
        lambda_from_h(self.h).expect("canonical form is canonically ordered")
    }

    /// Rebuild the original operator: conjugate back and re-add locals.
    pub fn reconstruct_input(&self) -> CMat {
        let uv = kron(&self.u, &self.v);
        let mut out = &uv * self.canonical_matrix() * uv.adjoint();
        out += CMat::identity(4, 4).map(|z| z * c64(self.removed_a, 0.));
        for i in 0..3 {
            out += kron(&pauli(i + 1), &eye2()).map(|z| z * c64(self.removed_m[i], 0.));
            out += kron(&eye2(), &pauli(i + 1)).map(|z| z * c64(self.removed_n[i], 0.));
        }
        out
    }
}

/// The four decreasingly ordered eigenvalues of a canonical operator in the
/// Bell basis. Zero-sum by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    lambda: [f64; 4],
}

impl BellSpectrum {
    /// Validate ordering and zero trace.
    pub fn new(lambda: [f64; 4]) -> Result<Self, HamsimError> {
        for k in 0..3 {
            if lambda[k] < lambda[k + 1] - ORDER_TOL {
                return Err(HamsimError::UnsortedSpectrum);
            }
        }
        let sum: f64 = lambda.iter().sum();
        let scale = lambda.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if sum.abs() > ORDER_TOL * scale {
            return Err(HamsimError::NonZeroTrace { sum });
        }
        Ok(BellSpectrum { lambda })
    }

    /// Sort the entries before validating.
    pub fn from_unsorted(mut lambda: [f64; 4]) -> Result<Self, HamsimError> {
        lambda.sort_by(|a, b| b.total_cmp(a));
        Self::new(lambda)
    }

    pub fn values(&self) -> [f64; 4] {
        self.lambda
    }

    /// Partial sums `lambda_1 + ... + lambda_k` for k = 1, 2, 3.
    pub fn prefix_sums(&self) -> [f64; 3] {
        [
            self.lambda[0],
            self.lambda[0] + self.lambda[1],
            self.lambda[0] + self.lambda[1] + self.lambda[2],
        ]
    }

    /// True when every entry is negligibly small.
    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(|v| v.abs() <= 1e-14)
    }
}

/// Bell basis as a 4x4 unitary whose columns are the maximally entangled
/// vectors, in the fixed order
///
/// ```text
/// Phi_1 = (|01> + |10>)/sqrt(2)    Phi_2 = (|00> + |11>)/sqrt(2)
/// Phi_3 = (|00> - |11>)/sqrt(2)    Phi_4 = (|01> - |10>)/sqrt(2)
/// ```
pub fn bell_basis_matrix() -> CMat {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(
        4,
        4,
        &[
            c64(0., 0.),
            c64(r, 0.),
            c64(r, 0.),
            c64(0., 0.),
            c64(r, 0.),
            c64(0., 0.),
            c64(0., 0.),
            c64(r, 0.),
            c64(r, 0.),
            c64(0., 0.),
            c64(0., 0.),
            c64(-r, 0.),
            c64(0., 0.),
            c64(r, 0.),
            c64(-r, 0.),
            c64(0., 0.),
        ],
    )
}

/// Expand a 4x4 Hermitian matrix into Pauli coefficients.
///
/// Coefficients are normalized traces against the sixteen Pauli products;
/// non-Hermitian inputs (beyond 1e-10) are rejected.
pub fn from_matrix(m: &CMat) -> Result<PauliHamiltonian, HamsimError> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(HamsimError::DimensionMismatch {
            expected: 4,
            got: m.nrows(),
        });
    }
    let dev = hermiticity_deviation(m);
    if dev.is_nan() || dev > RECON_TOL {
        return Err(HamsimError::NotHermitian { deviation: dev });
    }
    let coeff = |basis: &CMat| (basis * m).trace().re / 4.0;
    let a = m.trace().re / 4.0;
    let mut loc_m = [0.0; 3];
    let mut loc_n = [0.0; 3];
    let mut h = Matrix3::zeros();
    for i in 0..3 {
        loc_m[i] = coeff(&kron(&pauli(i + 1), &eye2()));
        loc_n[i] = coeff(&kron(&eye2(), &pauli(i + 1)));
        for j in 0..3 {
            h[(i, j)] = coeff(&kron(&pauli(i + 1), &pauli(j + 1)));
        }
    }
    Ok(PauliHamiltonian {
        a,
        m: loc_m,
        n: loc_n,
        h,
    })
}

/// Dense 4x4 matrix of a Pauli-coefficient Hamiltonian.
pub fn to_matrix(p: &PauliHamiltonian) -> CMat {
    let mut out = CMat::identity(4, 4).map(|z| z * c64(p.a, 0.));
    for i in 0..3 {
        out += kron(&pauli(i + 1), &eye2()).map(|z| z * c64(p.m[i], 0.));
        out += kron(&eye2(), &pauli(i + 1)).map(|z| z * c64(p.n[i], 0.));
        for j in 0..3 {
            out += kron(&pauli(i + 1), &pauli(j + 1)).map(|z| z * c64(p.h[(i, j)], 0.));
        }
    }
    out
}

/// Reduce to canonical form.
///
/// Strips the local terms, then diagonalizes the coupling matrix with a
/// proper-rotation SVD lifted to SU(2) pairs: `h = R(u) diag(h_can) R(v)^T`,
/// so conjugating the canonical operator by `u x v` and re-adding the locals
/// reproduces the input.
pub fn canonicalize(p: &PauliHamiltonian) -> CanonicalForm {
    let (o1, d, o2) = svd3(&p.h);
    CanonicalForm {
        h: d,
        u: so3_to_su2(&o1),
        v: so3_to_su2(&o2),
        removed_a: p.a,
        removed_m: p.m,
        removed_n: p.n,
    }
}

fn require_canonical(h: [f64; 3]) -> Result<(), HamsimError> {
    if h[0] < h[1] - ORDER_TOL || h[1] < h[2].abs() - ORDER_TOL {
        return Err(HamsimError::NotCanonical { h });
    }
    Ok(())
}

/// Bell spectrum of canonical coefficients.
///
/// Applies the four linear relations in the module docs and sorts. For
/// canonically ordered input the relations already produce a decreasing
/// sequence; the sort only guards against rounding at ties.
pub fn lambda_from_h(h: [f64; 3]) -> Result<BellSpectrum, HamsimError> {
    require_canonical(h)?;
    let lambda = [
        h[0] + h[1] - h[2],
        h[0] - h[1] + h[2],
        -h[0] + h[1] + h[2],
        -h[0] - h[1] - h[2],
    ];
    BellSpectrum::from_unsorted(lambda)
}

/// Invert [`lambda_from_h`] on the canonical branch.
///
/// The linear system inverts to `h1 = (l1+l2)/2`, `h2 = (l1+l3)/2`,
/// `h3 = (l2+l3)/2`. A decreasing zero-sum spectrum always lands in
/// canonical order; the check stays to surface malformed callers rather
/// than repair them.
pub fn h_from_lambda(s: &BellSpectrum) -> Result<[f64; 3], HamsimError> {
    let l = s.values();
    let h = [
        (l[0] + l[1]) / 2.0,
        (l[0] + l[2]) / 2.0,
        (l[1] + l[2]) / 2.0,
    ];
    require_canonical(h)?;
    Ok(h)
}

/// Read the spectrum off a canonical-form operator.
///
/// The input must be traceless and diagonal in the Bell basis within 1e-10;
/// anything else is rejected.
pub fn bell_projector_spectrum(m: &CMat) -> Result<BellSpectrum, HamsimError> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(HamsimError::DimensionMismatch {
            expected: 4,
            got: m.nrows(),
        });
    }
    let dev = hermiticity_deviation(m);
    if dev.is_nan() || dev > RECON_TOL {
        return Err(HamsimError::NotHermitian { deviation: dev });
    }
    let basis = bell_basis_matrix();
    let in_bell = basis.adjoint() * m * &basis;
    let mut off = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                off = off.max(in_bell[(i, j)].norm());
            }
        }
    }
    if off > RECON_TOL {
        return Err(HamsimError::NotBellDiagonal { deviation: off });
    }
    let trace = in_bell.trace().re;
    if trace.abs() > RECON_TOL * m.norm().max(1.0) {
        return Err(HamsimError::NonZeroTrace { sum: trace });
    }
    BellSpectrum::from_unsorted([
        in_bell[(0, 0)].re,
        in_bell[(1, 1)].re,
        in_bell[(2, 2)].re,
        in_bell[(3, 3)].re,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{frob_dist, max_abs_diff};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_pauli_ham(rng: &mut impl Rng) -> PauliHamiltonian {
        PauliHamiltonian {
            a: rng.gen_range(-1.0..1.0),
            m: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            n: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            h: Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0)),
        }
    }

    fn random_su2(rng: &mut impl Rng) -> CMat {
        let h = {
            let raw = CMat::from_fn(2, 2, |_, _| {
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            (&raw + raw.adjoint()) / c64(2., 0.)
        };
        crate::matcore::expm(&h, rng.gen_range(0.0..2.0)).unwrap()
    }

    #[test]
    fn pauli_basis_elements() {
        let p = from_matrix(&kron(&pauli(3), &pauli(3))).unwrap();
        assert_eq!(p.a, 0.0);
        assert_eq!(p.m, [0.0; 3]);
        assert_eq!(p.n, [0.0; 3]);
        assert_eq!(
            p.h,
            Matrix3::from_diagonal(&nalgebra::Vector3::new(0., 0., 1.))
        );

        let p = from_matrix(&CMat::identity(4, 4)).unwrap();
        assert_eq!(p.a, 1.0);
        assert_eq!(p.m, [0.0; 3]);
        assert_eq!(p.n, [0.0; 3]);
        assert_eq!(p.h, Matrix3::zeros());
    }

    #[test]
    fn heisenberg_expansion() {
        let p = PauliHamiltonian::from_diagonal_coupling([1., 1., 1.]);
        let mut expected = CMat::zeros(4, 4);
        for i in 1..=3 {
            expected += kron(&pauli(i), &pauli(i));
        }
        assert!(max_abs_diff(&to_matrix(&p), &expected) <= 1e-15);

        let zero = PauliHamiltonian::from_diagonal_coupling([0.; 3]);
        assert!(to_matrix(&zero).norm() == 0.0);
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = random_pauli_ham(&mut rng);
            let m = to_matrix(&p);
            let q = from_matrix(&m).unwrap();
            assert!(max_abs_diff(&to_matrix(&q), &m) <= RECON_TOL);
        }
    }

    #[test]
    fn from_matrix_rejects_non_hermitian() {
        let mut m = CMat::identity(4, 4);
        m[(0, 1)] = c64(1., 0.);
        assert!(matches!(
            from_matrix(&m),
            Err(HamsimError::NotHermitian { .. })
        ));
    }

    #[test]
    fn canonicalize_axis_rotation() {
        // s3 x s3 has canonical coefficients (1, 0, 0)
        let p = PauliHamiltonian::from_diagonal_coupling([0., 0., 1.]);
        let form = canonicalize(&p);
        assert!((form.h[0] - 1.0).abs() <= 1e-14);
        assert!(form.h[1].abs() <= 1e-14 && form.h[2].abs() <= 1e-14);
        assert!(max_abs_diff(&form.reconstruct_input(), &to_matrix(&p)) <= RECON_TOL);
    }

    #[test]
    fn canonicalize_fixed_point() {
        let p = PauliHamiltonian::from_diagonal_coupling([3., 2., 1.]);
        let form = canonicalize(&p);
        assert!((form.h[0] - 3.0).abs() <= 1e-13);
        assert!((form.h[1] - 2.0).abs() <= 1e-13);
        assert!((form.h[2] - 1.0).abs() <= 1e-13);
        // u, v may only be +-I
        let u_dev =
            max_abs_diff(&form.u, &eye2()).min(max_abs_diff(&form.u.clone().map(|z| -z), &eye2()));
        assert!(u_dev <= 1e-12);
    }

    #[test]
    fn canonicalize_keeps_legal_negative_h3() {
        let p = PauliHamiltonian::from_diagonal_coupling([1., 1., -1.]);
        let form = canonicalize(&p);
        assert!((form.h[0] - 1.0).abs() <= 1e-13);
        assert!((form.h[1] - 1.0).abs() <= 1e-13);
        assert!((form.h[2] + 1.0).abs() <= 1e-13);
        assert!(max_abs_diff(&form.reconstruct_input(), &to_matrix(&p)) <= RECON_TOL);
    }

    #[test]
    fn canonicalize_soundness_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let p = random_pauli_ham(&mut rng);
            let form = canonicalize(&p);
            assert!(form.h[0] >= form.h[1] - 1e-12 && form.h[1] >= form.h[2].abs() - 1e-12);
            assert!(
                max_abs_diff(&form.reconstruct_input(), &to_matrix(&p)) <= RECON_TOL,
                "reconstruction failed"
            );
        }
    }

    #[test]
    fn canonical_h_is_lu_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let p = random_pauli_ham(&mut rng);
            let m = to_matrix(&p);
            let ab = kron(&random_su2(&mut rng), &random_su2(&mut rng));
            let conjugated = &ab * &m * ab.adjoint();
            let f1 = canonicalize(&p);
            let f2 = canonicalize(&from_matrix(&conjugated).unwrap());
            for k in 0..3 {
                assert!(
                    (f1.h[k] - f2.h[k]).abs() <= RECON_TOL,
                    "h mismatch {:?} vs {:?}",
                    f1.h,
                    f2.h
                );
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let s = lambda_from_h([1., 0., 0.]).unwrap();
        assert_eq!(s.values(), [1., 1., -1., -1.]);
        let s = lambda_from_h([1., 1., 1.]).unwrap();
        assert_eq!(s.values(), [1., 1., 1., -3.]);
        let s = lambda_from_h([0., 0., 0.]).unwrap();
        assert_eq!(s.values(), [0., 0., 0., 0.]);
    }

    #[test]
    fn lambda_rejects_non_canonical() {
        assert!(lambda_from_h([0., 1., 0.]).is_err());
        assert!(lambda_from_h([1., 0., 0.5]).is_err());
    }

    #[test]
    fn h_from_lambda_examples() {
        let s = BellSpectrum::new([1., 1., -1., -1.]).unwrap();
        assert_eq!(h_from_lambda(&s).unwrap(), [1., 0., 0.]);
        let s = BellSpectrum::new([0., 0., 0., 0.]).unwrap();
        assert_eq!(h_from_lambda(&s).unwrap(), [0., 0., 0.]);
        let s = BellSpectrum::new([1., 1., 1., -3.]).unwrap();
        assert_eq!(h_from_lambda(&s).unwrap(), [1., 1., 1.]);
    }

    #[test]
    fn bell_projector_spectrum_examples() {
        let heisenberg = to_matrix(&PauliHamiltonian::from_diagonal_coupling([1., 1., 1.]));
        let s = bell_projector_spectrum(&heisenberg).unwrap();
        for (a, b) in s.values().iter().zip(&[1., 1., 1., -3.]) {
            assert!((a - b).abs() <= RECON_TOL);
        }

        assert_eq!(
            bell_projector_spectrum(&CMat::zeros(4, 4))
                .unwrap()
                .values(),
            [0., 0., 0., 0.]
        );

        let ising_x = kron(&pauli(1), &pauli(1));
        let s = bell_projector_spectrum(&ising_x).unwrap();
        for (a, b) in s.values().iter().zip(&[1., 1., -1., -1.]) {
            assert!((a - b).abs() <= RECON_TOL);
        }
    }

    #[test]
    fn bell_projector_spectrum_rejects_off_diagonal() {
        // A local term is not Bell-diagonal.
        let m = kron(&pauli(3), &eye2());
        assert!(matches!(
            bell_projector_spectrum(&m),
            Err(HamsimError::NotBellDiagonal { .. })
        ));
    }

    #[test]
    fn bell_basis_is_maximally_entangled() {
        let basis = bell_basis_matrix();
        assert!(frob_dist(&(basis.adjoint() * &basis), &CMat::identity(4, 4)) <= 1e-15);
        for k in 0..4 {
            // reduced density matrix of each column must be I/2
            let phi = basis.column(k);
            let mut rho_a = CMat::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = c64(0., 0.);
                    for b in 0..2 {
                        acc += phi[i * 2 + b] * phi[j * 2 + b].conj();
                    }
                    rho_a[(i, j)] = acc;
                }
            }
            assert!(max_abs_diff(&rho_a, &eye2().map(|z| z * c64(0.5, 0.))) <= 1e-15);
        }
    }

    proptest! {
        // h -> lambda -> h is the identity on the canonical cone
        #[test]
        fn h_lambda_bijection(raw in proptest::array::uniform3(-2.0f64..2.0)) {
            let mut h = raw;
            h.sort_by(|a, b| b.total_cmp(a));
            // force |h3| <= h2 by possibly swapping magnitude order
            let h = [h[0].abs().max(h[1].abs()), h[0].abs().min(h[1].abs()), h[2].clamp(-h[0].abs().min(h[1].abs()), h[0].abs().min(h[1].abs()))];
            let spectrum = lambda_from_h(h).unwrap();
            let back = h_from_lambda(&spectrum).unwrap();
            for k in 0..3 {
                prop_assert!((back[k] - h[k]).abs() <= 1e-12);
            }
        }

        // canonical-operator spectrum read two ways agrees
        #[test]
        fn spectrum_consistency(raw in proptest::array::uniform3(0.0f64..2.0), sign in -1.0f64..1.0) {
            let mut h = raw;
            h.sort_by(|a, b| b.total_cmp(a));
            let h = [h[0], h[1], h[2] * sign.signum()];
            let spectrum = lambda_from_h(h).unwrap();
            let op = to_matrix(&PauliHamiltonian::from_diagonal_coupling(h));
            let direct = bell_projector_spectrum(&op).unwrap();
            for (a, b) in spectrum.values().iter().zip(direct.values()) {
                prop_assert!((a - b).abs() <= RECON_TOL);
            }
        }
    }
}
