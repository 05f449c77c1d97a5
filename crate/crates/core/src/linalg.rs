//! Small dense linear algebra: a complex Hermitian Jacobi solver for the
//! 2×2 and 4×4 matrices of the two-site problems, and a real symmetric
//! eigensolver for exact-diagonalization blocks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real symmetric eigendecomposition of a dense column-major block.
pub trait DenseEigen: Sized {
    /// Returns `(eigenvalues ascending, eigenvectors column-major)`.
    fn symmetric_eigen(dim: usize, data: &[Self]) -> Result<(Vec<Self>, Vec<Self>)>;
}

macro_rules! impl_dense_eigen {
    ($t:ty) => {
        impl DenseEigen for $t {
            fn symmetric_eigen(dim: usize, data: &[$t]) -> Result<(Vec<$t>, Vec<$t>)> {
                if data.len() != dim * dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim * dim,
                        found: data.len(),
                    });
                }
                if dim == 0 {
                    return Ok((Vec::new(), Vec::new()));
                }
                let m = faer::Mat::<$t>::from_fn(dim, dim, |i, j| data[i + j * dim]);
                let evd = m
                    .self_adjoint_eigen(faer::Side::Lower)
                    .map_err(|e| Error::Eigen(format!("{e:?}")))?;
                let s = evd.S().column_vector();
                let u = evd.U();
                let values = (0..dim).map(|i| s[i]).collect();
                let mut vectors = Vec::with_capacity(dim * dim);
                for j in 0..dim {
                    for i in 0..dim {
                        vectors.push(u[(i, j)]);
                    }
                }
                Ok((values, vectors))
            }
        }
    };
}

impl_dense_eigen!(f32);
impl_dense_eigen!(f64);

pub type CMatrix<T, const N: usize> = [[Complex<T>; N]; N];

pub fn zero_matrix<T: Real, const N: usize>() -> CMatrix<T, N> {
    [[Complex::new(T::zero(), T::zero()); N]; N]
}

pub fn identity<T: Real, const N: usize>() -> CMatrix<T, N> {
    let mut m = zero_matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex::new(T::one(), T::zero());
    }
    m
}

pub fn matmul<T: Real, const N: usize>(a: &CMatrix<T, N>, b: &CMatrix<T, N>) -> CMatrix<T, N> {
    let mut out = zero_matrix();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint<T: Real, const N: usize>(a: &CMatrix<T, N>) -> CMatrix<T, N> {
    let mut out = zero_matrix();
    for i in 0..N {
        for j in 0..N {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn conjugate<T: Real, const N: usize>(a: &CMatrix<T, N>) -> CMatrix<T, N> {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v = v.conj();
        }
    }
    out
}

/// Eigenvalues (ascending) and unitary eigenvector matrix (columns) of a
/// Hermitian matrix, by cyclic complex Jacobi rotations.
///
/// Only the upper triangle and the real part of the diagonal are read.
pub fn hermitian_eigen<T: Real, const N: usize>(m: &CMatrix<T, N>) -> ([T; N], CMatrix<T, N>) {
    let mut a = *m;
    for i in 0..N {
        a[i][i] = Complex::new(a[i][i].re, T::zero());
        for j in 0..i {
            a[i][j] = a[j][i].conj();
        }
    }
    let mut v: CMatrix<T, N> = identity();
    let scale = a.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    let threshold = T::epsilon() * T::epsilon() * scale * scale;

    for _sweep in 0..64 {
        let off: T = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a[i][j].norm_sqr());
        if off <= threshold {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                // phase e^{iφ} of a_pq, then a real rotation by θ
                let phase = apq / r;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let theta = T::lit(0.5) * (T::lit(2.0) * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // G = D·R on (p, q), D = diag(1, e^{-iφ}), R = [[c, s], [-s, c]]
                let dq = phase.conj();
                let g_pp = Complex::new(c, T::zero());
                let g_pq = Complex::new(s, T::zero());
                let g_qp = dq * (-s);
                let g_qq = dq * c;
                // A ← A·G (columns p, q)
                for row in a.iter_mut() {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = xp * g_pp + xq * g_qp;
                    row[q] = xp * g_pq + xq * g_qq;
                }
                // A ← G†·A (rows p, q)
                for col in 0..N {
                    let xp = a[p][col];
                    let xq = a[q][col];
                    a[p][col] = g_pp.conj() * xp + g_qp.conj() * xq;
                    a[q][col] = g_pq.conj() * xp + g_qq.conj() * xq;
                }
                a[p][q] = Complex::new(T::zero(), T::zero());
                a[q][p] = Complex::new(T::zero(), T::zero());
                a[p][p] = Complex::new(a[p][p].re, T::zero());
                a[q][q] = Complex::new(a[q][q].re, T::zero());
                for row in v.iter_mut() {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = xp * g_pp + xq * g_qp;
                    row[q] = xp * g_pq + xq * g_qq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = std::array::from_fn(|k| a[order[k]][order[k]].re);
    let mut vectors = zero_matrix();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors[i][k] = v[i][src];
        }
    }
    (values, vectors)
}
