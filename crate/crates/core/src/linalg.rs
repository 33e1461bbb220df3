//! Dense linear algebra helpers: a deterministic cyclic Jacobi eigensolver,
//! Hermitian spectra through the real embedding, square roots, ranks and
//! random orthogonal matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type Vector = DVector<f64>;

/// Off-diagonal Frobenius threshold (relative to the full norm) at which
/// the Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

pub fn fro(m: &Mat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn cfro(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

pub fn skew_residual(m: &Mat) -> f64 {
    max_abs(&(m + m.transpose()))
}

pub fn sym_residual(m: &Mat) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// ‖MᵀM − I‖ in the max-entry norm.
pub fn orth_residual(m: &Mat) -> f64 {
    let n = m.ncols();
    max_abs(&(m.transpose() * m - Mat::identity(n, n)))
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

pub fn anticommutator(a: &Mat, b: &Mat) -> Mat {
    a * b + b * a
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns. The input is symmetrized first.
pub fn eigh(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigh needs a square matrix");
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = Mat::identity(n, n);
    let scale = fro(&a).max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &v.column(old));
    }
    (values, vecs)
}

/// Real embedding [[Re, −Im], [Im, Re]] of a complex matrix.
pub fn real_embedding(h: &CMat) -> Mat {
    let n = h.nrows();
    let m = h.ncols();
    let mut out = Mat::zeros(2 * n, 2 * m);
    for i in 0..n {
        for j in 0..m {
            let z = h[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + m)] = -z.im;
            out[(i + n, j)] = z.im;
            out[(i + n, j + m)] = z.re;
        }
    }
    out
}

/// Spectrum of a Hermitian matrix. Every eigenvalue appears twice in the
/// real embedding; every other sorted value is kept.
pub fn eigvalsh_hermitian(h: &CMat) -> Vec<f64> {
    let (vals, _) = eigh(&real_embedding(h));
    vals.into_iter().step_by(2).collect()
}

pub fn hermitian_residual(h: &CMat) -> f64 {
    h.iter()
        .zip(h.adjoint().iter())
        .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
}

/// Square root of a symmetric positive semidefinite matrix.
pub fn sqrt_psd(m: &Mat) -> Mat {
    let (vals, vecs) = eigh(m);
    let d = Vector::from_iterator(vals.len(), vals.iter().map(|&x| x.max(0.0).sqrt()));
    &vecs * Mat::from_diagonal(&d) * vecs.transpose()
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| a.total_cmp(b));
    s
}

/// Numerical rank: singular values above `tol · max(1, σ_max)`.
pub fn rank(m: &Mat, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.last().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Orthonormal basis (as columns) of the span of the given columns, built by
/// modified Gram–Schmidt with re-orthogonalization; columns whose residual
/// falls below `tol` are dropped.
pub fn orthonormal_span(cols: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = b.dot(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > tol {
            basis.push(v / n);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement in ℝⁿ of the given vectors.
pub fn orthogonal_complement(vecs: &[Vector], n: usize, tol: f64) -> Vec<Vector> {
    let span = orthonormal_span(vecs, tol);
    let mut all = span.clone();
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = Vector::zeros(n);
        e[i] = 1.0;
        for _ in 0..2 {
            for b in &all {
                let p = b.dot(&e);
                e -= b * p;
            }
        }
        let nrm = e.norm();
        if nrm > 1e-8 {
            let u = e / nrm;
            all.push(u.clone());
            out.push(u);
        }
    }
    out
}

pub fn columns_to_mat(cols: &[Vector], n: usize) -> Mat {
    let mut m = Mat::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

pub fn block_diag(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Mat {
    Mat::from_fn(n, m, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    loop {
        let v = gaussian_vector(n, rng);
        let nv = v.norm();
        if nv > 1e-6 {
            return v / nv;
        }
    }
}

/// Haar-distributed orthogonal matrix from the QR factorization of a
/// Gaussian matrix with the sign convention diag(R) > 0.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    q
}

pub fn random_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let g = gaussian_matrix(n, n, rng);
    (&g - g.transpose()) * 0.5
}

/// Least-squares solution of `a x = b` through the SVD.
/// Least-squares solution of a·x ≈ b. Full-column-rank systems use
/// Householder QR; rank-deficient ones fall back to a truncated SVD.
pub fn lstsq(a: &Mat, b: &Vector) -> Vector {
    let (m, n) = a.shape();
    if n <= m && n > 0 {
        let qr = a.clone().qr();
        let r = qr.r();
        let scale = (0..n).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
        if (0..n).all(|i| r[(i, i)].abs() > 1e-10 * scale) {
            let qtb = qr.q().transpose() * b;
            if let Some(x) = r.solve_upper_triangular(&qtb) {
                return x;
            }
        }
    }
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-13).expect("SVD solve with computed U and V")
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Matrix exponential of a real matrix.
pub fn expm(m: &Mat) -> Mat {
    m.clone().exp()
}

const POWER_ITERATIONS: usize = 500;

/// Largest singular value by power iteration on MᵀM from a fixed start
/// vector; stops once the estimate is stable to 1e-13 relative.
pub fn spectral_norm(m: &Mat) -> f64 {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let mut v = Vector::from_fn(n, |i, _| 1.0 + 0.1 * ((i + 1) as f64).sin());
    v /= v.norm();
    let mut est = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = m.transpose() * (m * &v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw.sqrt();
        v = w / nw;
        if (next - est).abs() <= 1e-13 * next {
            return next;
        }
        est = next;
    }
    est
}

/// Complex version of `spectral_norm`.
pub fn cspectral_norm(m: &CMat) -> f64 {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let mut v = nalgebra::DVector::<Complex64>::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * ((i + 1) as f64).sin(), 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    let mut est = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = m.adjoint() * (m * &v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw.sqrt();
        v = w / Complex64::new(nw, 0.0);
        if (next - est).abs() <= 1e-13 * next {
            return next;
        }
        est = next;
    }
    est
}

/// Scale-aware relative residual used by several certificates:
/// ‖a − b‖ / max(1, ‖a‖, ‖b‖).
pub fn rel_diff(a: &Mat, b: &Mat) -> f64 {
    fro(&(a - b)) / 1f64.max(fro(a)).max(fro(b))
}
