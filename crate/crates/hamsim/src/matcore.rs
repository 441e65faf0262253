//! Minimal dense complex linear algebra for the small dimensions this crate
//! needs (up to ~512): Hermitian eigendecomposition, matrix exponential,
//! real 3x3 SVD with proper-rotation factors, and the SO(3) <-> SU(2)
//! correspondence.
//!
//! Everything here is a pure function over immutable values; nalgebra does
//! the heavy lifting behind the contracts.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::HamsimError;

/// Dense complex matrix, row-major semantics via nalgebra.
pub type CMat = DMatrix<Complex64>;

/// Tolerance for reconstruction residuals and Hermiticity checks.
pub const RECON_TOL: f64 = 1e-10;
/// Tolerance for orthogonality / unitarity checks.
pub const ORTHO_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 identity.
pub fn eye2() -> CMat {
    CMat::identity(2, 2)
}

/// Pauli matrix sigma_i for i in {1, 2, 3}.
pub fn pauli(i: usize) -> CMat {
    match i {
        1 => CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]),
        2 => CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)]),
        3 => CMat::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)]),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    }
}

/// Maximum entry-wise deviation from Hermiticity, `max |m - m^H|`.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn require_hermitian(m: &CMat) -> Result<(), HamsimError> {
    let dev = hermiticity_deviation(m);
    // NaN is rejected too.
    if dev.is_nan() || dev > RECON_TOL {
        return Err(HamsimError::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns the eigenvalues sorted decreasingly and the unitary of matching
/// eigenvector columns, so that `m = V diag(w) V^H`. Inputs further than
/// 1e-10 from Hermitian are rejected rather than symmetrized.
///
/// Classical two-sided Jacobi iteration; quadratically convergent and
/// accurate to machine precision, which the 1e-10 reconstruction contract
/// needs at the dimensions used here.
pub fn herm_eig(m: &CMat) -> Result<(Vec<f64>, CMat), HamsimError> {
    require_hermitian(m)?;
    let n = m.nrows();
    let mut a = m.clone();
    let mut vectors = CMat::identity(n, n);
    let scale = a.norm().max(1e-300);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let beta_abs = beta.norm();
                if beta_abs <= 1e-300 {
                    continue;
                }
                let phase = beta / beta_abs;
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * beta_abs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let s_phase = phase * c64(sn, 0.);

                // rows: A <- R^H A
                for k in 0..n {
                    let ap = a[(p, k)];
                    let aq = a[(q, k)];
                    a[(p, k)] = ap * c64(cs, 0.) - aq * s_phase;
                    a[(q, k)] = ap * s_phase.conj() + aq * c64(cs, 0.);
                }
                // columns: A <- A R, and accumulate V <- V R
                for k in 0..n {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    a[(k, p)] = ap * c64(cs, 0.) - aq * s_phase.conj();
                    a[(k, q)] = ap * s_phase + aq * c64(cs, 0.);
                    let vp = vectors[(k, p)];
                    let vq = vectors[(k, q)];
                    vectors[(k, p)] = vp * c64(cs, 0.) - vq * s_phase.conj();
                    vectors[(k, q)] = vp * s_phase + vq * c64(cs, 0.);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut sorted = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &vectors.column(src));
    }
    Ok((values, sorted))
}

/// `exp(-i * scale * m)`.
///
/// Hermitian inputs go through the spectral decomposition, which keeps the
/// result unitary to machine precision; anything else falls back to
/// scaling-and-squaring on the scaled generator.
pub fn expm(m: &CMat, scale: f64) -> Result<CMat, HamsimError> {
    if m.nrows() != m.ncols() {
        return Err(HamsimError::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if hermiticity_deviation(m) <= RECON_TOL {
        let (values, vectors) = herm_eig(m)?;
        let phases = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&w| (c64(0., -scale * w)).exp()),
        ));
        Ok(&vectors * phases * vectors.adjoint())
    } else {
        Ok(expm_taylor(&m.map(|z| z * c64(0., -scale))))
    }
}

/// Scaling-and-squaring Taylor exponential for small general matrices.
fn expm_taylor(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / c64(2f64.powi(squarings as i32), 0.));
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=20 {
        term = &term * &scaled / c64(k as f64, 0.);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Proper rotation in SO(3).
///
/// Wraps a 3x3 real matrix validated to be orthogonal with determinant +1,
/// both within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct Rot3(Matrix3<f64>);

impl Rot3 {
    pub fn new(m: Matrix3<f64>) -> Result<Self, HamsimError> {
        let ortho = (m.transpose() * m - Matrix3::identity()).abs().max();
        if ortho.is_nan() || ortho > ORTHO_TOL {
            return Err(HamsimError::NotSpecialOrthogonal {
                reason: format!("R^T R deviates from I by {ortho:e}"),
            });
        }
        let det = m.determinant();
        if det.is_nan() || (det - 1.0).abs() > ORTHO_TOL {
            return Err(HamsimError::NotSpecialOrthogonal {
                reason: format!("determinant {det} is not +1"),
            });
        }
        Ok(Rot3(m))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn identity() -> Self {
        Rot3(Matrix3::identity())
    }
}

/// SVD of a real 3x3 matrix with both factors forced into SO(3).
///
/// Returns `(o1, d, o2)` with `m = o1 * diag(d) * o2^T`, `d[0] >= d[1] >= |d[2]|`,
/// and `det(o1) = det(o2) = +1`. A standard SVD (one-sided Jacobi on the
/// columns) is computed first; sign flips that make the orthogonal factors
/// proper are absorbed into `d[2]`.
pub fn svd3(m: &Matrix3<f64>) -> (Rot3, [f64; 3], Rot3) {
    let mut a = *m;
    let mut v = Matrix3::<f64>::identity();

    // One-sided Jacobi: right-rotate until the columns of a are orthogonal.
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let col_p = a.column(p).clone_owned();
                let col_q = a.column(q).clone_owned();
                let app = col_p.dot(&col_p);
                let aqq = col_q.dot(&col_q);
                let apq = col_p.dot(&col_q);
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for k in 0..3 {
                    let (ap, aq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = cs * ap - sn * aq;
                    a[(k, q)] = sn * ap + cs * aq;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = cs * vp - sn * vq;
                    v[(k, q)] = sn * vp + cs * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut s = [a.column(0).norm(), a.column(1).norm(), a.column(2).norm()];

    // Sort decreasingly, carrying the columns of a and v along.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let (sa, sv, ss) = (a, v, s);
    for (dst, &src) in order.iter().enumerate() {
        a.set_column(dst, &sa.column(src));
        v.set_column(dst, &sv.column(src));
        s[dst] = ss[src];
    }

    // Left factor: normalized columns where the rank allows, orthonormal
    // completion where it does not.
    let rank_tol = 1e-13 * s[0].max(1.0);
    let mut u = Matrix3::<f64>::identity();
    if s[0] > rank_tol {
        u.set_column(0, &(a.column(0) / s[0]));
        if s[1] > rank_tol {
            u.set_column(1, &(a.column(1) / s[1]));
        } else {
            let u0 = u.column(0).clone_owned();
            let mut pick = 0;
            for k in 1..3 {
                if u0[k].abs() < u0[pick].abs() {
                    pick = k;
                }
            }
            let mut e = nalgebra::Vector3::zeros();
            e[pick] = 1.0;
            let ortho = (e - u0 * u0.dot(&e)).normalize();
            u.set_column(1, &ortho);
            s[1] = 0.0;
        }
        if s[2] > rank_tol {
            u.set_column(2, &(a.column(2) / s[2]));
        } else {
            let u2 = u.column(0).cross(&u.column(1));
            u.set_column(2, &u2);
            s[2] = 0.0;
        }
    } else {
        s = [0.0; 3];
        v = Matrix3::identity();
    }

    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        s[2] = -s[2];
    }

    let o1 = Rot3::new(u).expect("SVD factor must be orthogonal");
    let o2 = Rot3::new(v).expect("SVD factor must be orthogonal");
    (o1, s, o2)
}

/// Lift a proper rotation to SU(2).
///
/// The returned `u` satisfies `u sigma_i u^H = sum_j r[j][i] sigma_j`. The
/// quaternion is extracted with the largest-diagonal branch for stability;
/// the (irrelevant) global sign is fixed by making the real part of the
/// first nonzero entry nonnegative.
pub fn so3_to_su2(r: &Rot3) -> CMat {
    let m = r.matrix();
    let tr = m.trace();
    let (w, x, y, z);
    if tr > m[(0, 0)] && tr > m[(1, 1)] && tr > m[(2, 2)] {
        let s = (tr + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (m[(2, 1)] - m[(1, 2)]) / s;
        y = (m[(0, 2)] - m[(2, 0)]) / s;
        z = (m[(1, 0)] - m[(0, 1)]) / s;
    } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
        let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
        w = (m[(2, 1)] - m[(1, 2)]) / s;
        x = 0.25 * s;
        y = (m[(0, 1)] + m[(1, 0)]) / s;
        z = (m[(0, 2)] + m[(2, 0)]) / s;
    } else if m[(1, 1)] > m[(2, 2)] {
        let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
        w = (m[(0, 2)] - m[(2, 0)]) / s;
        x = (m[(0, 1)] + m[(1, 0)]) / s;
        y = 0.25 * s;
        z = (m[(1, 2)] + m[(2, 1)]) / s;
    } else {
        let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
        w = (m[(1, 0)] - m[(0, 1)]) / s;
        x = (m[(0, 2)] + m[(2, 0)]) / s;
        y = (m[(1, 2)] + m[(2, 1)]) / s;
        z = 0.25 * s;
    }

    // u = w I - i (x s1 + y s2 + z s3)
    let mut u = CMat::from_row_slice(2, 2, &[c64(w, -z), c64(-y, -x), c64(y, -x), c64(w, z)]);
    for k in 0..4 {
        let entry = u[(k / 2, k % 2)];
        if entry.norm() > 1e-12 {
            if entry.re < 0.0 || (entry.re.abs() < 1e-15 && entry.im < 0.0) {
                u.neg_mut();
            }
            break;
        }
    }
    u
}

/// Adjoint action of a 2x2 unitary on the Pauli vector, back in SO(3).
///
/// Inverse of [`so3_to_su2`] up to the global sign:
/// `r[j][i] = Re tr(sigma_j u sigma_i u^H) / 2`.
pub fn su2_to_so3(u: &CMat) -> Result<Rot3, HamsimError> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(HamsimError::DimensionMismatch {
            expected: 2,
            got: u.nrows(),
        });
    }
    let mut r = Matrix3::zeros();
    for i in 1..=3 {
        let conj = u * pauli(i) * u.adjoint();
        for j in 1..=3 {
            r[(j - 1, i - 1)] = 0.5 * (pauli(j) * &conj).trace().re;
        }
    }
    Rot3::new(r)
}

/// Tensor (Kronecker) product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Frobenius norm of the difference.
pub fn frob_dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

/// Operator norm (largest singular value), via the top eigenvalue of `m^H m`.
pub fn op_norm(m: &CMat) -> f64 {
    let gram = m.adjoint() * m;
    let (values, _) = herm_eig(&gram).expect("Gram matrix is Hermitian");
    values.first().map_or(0.0, |w| w.max(0.0).sqrt())
}

/// Max entry-wise modulus of the difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).map(|z| z.norm()).max()
}
