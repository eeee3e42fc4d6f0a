//! Small dense linear-algebra helpers: Hermitian eigensolvers sized for
//! covariance-level objects (2x2 and 4x4), symmetric square roots, and the
//! symplectic form.
//!
//! The 2x2 Hermitian spectrum is computed in closed form (a numerically
//! robust quadratic); larger matrices go through a cyclic complex Jacobi
//! sweep. The two paths are cross-validated in the test suite.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Block-diagonal symplectic form for `n` modes: blocks [[0,1],[-1,0]].
pub fn symplectic_matrix(n: usize) -> RMatrix {
    let mut s = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        s[(2 * k, 2 * k + 1)] = 1.0;
        s[(2 * k + 1, 2 * k)] = -1.0;
    }
    s
}

/// i*sigma as a complex Hermitian matrix.
pub fn i_sigma(n: usize) -> CMatrix {
    to_complex(&symplectic_matrix(n)).map(|z| Complex64::new(0.0, 1.0) * z)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Largest absolute entry of M - M^T.
pub fn max_asymmetry(m: &RMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Largest absolute entry of M - M^dagger.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        worst = worst.max(m[(i, i)].im.abs());
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues_2x2(h: &CMatrix) -> [f64; 2] {
    debug_assert_eq!(h.nrows(), 2);
    let a = h[(0, 0)].re;
    let b = h[(1, 1)].re;
    let off = 0.5 * (h[(0, 1)].norm() + h[(1, 0)].norm());
    let mean = 0.5 * (a + b);
    let half_gap = 0.5 * (a - b);
    let disc = half_gap.hypot(off);
    [mean - disc, mean + disc]
}

/// Eigenvalues of a Hermitian matrix, ascending. Closed form for 2x2,
/// cyclic Jacobi otherwise.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    if h.nrows() == 2 {
        hermitian_eigenvalues_2x2(h).to_vec()
    } else {
        hermitian_eigen_jacobi(h).0
    }
}

pub fn min_eigenvalue_hermitian(h: &CMatrix) -> f64 {
    hermitian_eigenvalues(h)[0]
}

/// Full Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Returns (eigenvalues ascending, unitary eigenvector matrix, columns
/// matching the eigenvalue order).
pub fn hermitian_eigen_jacobi(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    let mut a = hermitize(h);
    let mut v = CMatrix::identity(n, n);
    let scale = a.norm().max(1.0);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
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
                let apq = a[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq <= 1e-300 {
                    continue;
                }
                let phase = apq / abs_apq;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs_apq);
                // Stable small root of t^2 - 2*tau*t - 1 = 0.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary G: G[p,p]=c, G[p,q]=-s*phase, G[q,p]=s*conj(phase), G[q,q]=c.
                // Row update A <- G^dagger A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * (phase * s);
                    a[(q, k)] = apk * (-s * phase.conj()) + aqk * c;
                }
                // Column update A <- A G, V <- V G.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * (phase.conj() * s);
                    a[(k, q)] = akp * (-s * phase) + akq * c;

                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * (phase.conj() * s);
                    v[(k, q)] = vkp * (-s * phase) + vkq * c;
                }
                // Clean the rotated pivot.
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &v.column(old_col));
    }
    (eigenvalues, vectors)
}

/// Eigendecomposition of a real symmetric matrix (through the complex path).
pub fn symmetric_eigen(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let (vals, vecs) = hermitian_eigen_jacobi(&to_complex(m));
    // Eigenvectors of a real symmetric matrix carry at most a phase; rotate
    // each column to be real before discarding the imaginary part.
    let n = m.nrows();
    let mut real_vecs = RMatrix::zeros(n, n);
    for j in 0..n {
        let col = vecs.column(j);
        let pivot = (0..n)
            .max_by(|&a, &b| col[a].norm().partial_cmp(&col[b].norm()).unwrap())
            .unwrap();
        let ph = col[pivot] / col[pivot].norm();
        for i in 0..n {
            real_vecs[(i, j)] = (col[i] * ph.conj()).re;
        }
    }
    (vals, real_vecs)
}

/// Symmetric square root of a symmetric positive semidefinite matrix.
pub fn symmetric_sqrt(m: &RMatrix) -> Result<RMatrix> {
    let (vals, vecs) = symmetric_eigen(m);
    let scale = vals.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
    let mut d = RMatrix::zeros(m.nrows(), m.nrows());
    for (i, &lam) in vals.iter().enumerate() {
        if lam < -1e-12 * scale {
            return Err(Error::InvalidParam(format!(
                "matrix square root of indefinite matrix (eigenvalue {lam:.3e})"
            )));
        }
        d[(i, i)] = lam.max(0.0).sqrt();
    }
    Ok(symmetrize(&(&vecs * d * vecs.transpose())))
}

/// Trace of the product of a real symmetric and a real matrix.
pub fn trace_product(a: &RMatrix, b: &RMatrix) -> f64 {
    let mut t = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        });
        hermitize(&a)
    }

    #[test]
    fn jacobi_matches_closed_form_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let h = random_hermitian(2, &mut rng);
            let closed = hermitian_eigenvalues_2x2(&h);
            let (jac, _) = hermitian_eigen_jacobi(&h);
            assert_abs_diff_eq!(closed[0], jac[0], epsilon = 1e-12);
            assert_abs_diff_eq!(closed[1], jac[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn jacobi_matches_library_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 3, 4, 6] {
            for _ in 0..50 {
                let h = random_hermitian(n, &mut rng);
                let (vals, vecs) = hermitian_eigen_jacobi(&h);
                let se = nalgebra::SymmetricEigen::new(h.clone());
                let mut reference: Vec<f64> = se.eigenvalues.iter().copied().collect();
                reference.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (x, y) in vals.iter().zip(reference.iter()) {
                    assert_abs_diff_eq!(x, y, epsilon = 1e-11);
                }
                // Reconstruction check.
                let d = CMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        Complex64::new(vals[i], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let rec = &vecs * d * vecs.adjoint();
                assert!((rec - &h).norm() < 1e-11, "reconstruction failed for n={n}");
            }
        }
    }

    #[test]
    fn symmetric_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = RMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let m = &a * a.transpose();
            let r = symmetric_sqrt(&m).unwrap();
            assert!((&r * &r - &m).norm() < 1e-10);
        }
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        for n in 1..=3 {
            let s = symplectic_matrix(n);
            assert!(max_asymmetry(&s) == 0.0 || (s.transpose() + &s).norm() == 0.0);
            let s2 = &s * &s;
            let neg_id = -RMatrix::identity(2 * n, 2 * n);
            assert!((s2 - neg_id).norm() == 0.0);
        }
    }
}
