//! Dense coefficient vectors over the monomials of a fixed degree, the
//! sparse operators between degrees, harmonic projection and orthonormal
//! bases of the harmonic spaces.

use super::poly::{sphere_volume, Exponent, GradedPoly};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;

/// Pivot threshold of the Gram–Cholesky orthonormalization.
pub const RANK_TOL: f64 = 1e-10;

/// Monomials of one total degree in k variables.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub k: usize,
    pub degree: usize,
    pub exps: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    /// a! = Π a_i!, the Fischer weight of X^a.
    pub fischer: Vec<f64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

impl MonomialBasis {
    pub fn new(k: usize, degree: usize) -> Self {
        let mut exps = Vec::new();
        let mut cur = vec![0u8; k];
        fn rec(pos: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Exponent>) {
            if pos + 1 == cur.len() {
                cur[pos] = left as u8;
                out.push(cur.clone());
                cur[pos] = 0;
                return;
            }
            for v in (0..=left).rev() {
                cur[pos] = v as u8;
                rec(pos + 1, left - v, cur, out);
            }
            cur[pos] = 0;
        }
        if k > 0 {
            rec(0, degree, &mut cur, &mut exps);
        }
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let fischer = exps.iter().map(|e| e.iter().map(|&a| factorial(a as usize)).product()).collect();
        Self { k, degree, exps, index, fischer }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn position(&self, e: &[u8]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// A sparse matrix as a list of (row, column, value) triplets.
#[derive(Debug, Clone)]
pub struct SparseOp {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseOp {
    pub fn apply(&self, v: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows, v.ncols());
        for c in 0..v.ncols() {
            let src = v.column(c);
            let mut dst = out.column_mut(c);
            for &(r, s, x) in &self.entries {
                dst[r] += x * src[s];
            }
        }
        out
    }

    pub fn apply_vec(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.rows);
        for &(r, s, x) in &self.entries {
            out[r] += x * v[s];
        }
        out
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.rows, self.cols);
        for &(r, c, x) in &self.entries {
            m[(r, c)] += x;
        }
        m
    }
}

/// Monomial bases of every degree up to a bound, with the sparse maps
/// between them.
#[derive(Debug, Clone)]
pub struct GradedSpace {
    pub k: usize,
    pub max_degree: usize,
    pub bases: Vec<MonomialBasis>,
}

/// Coefficients B_s of h(p) = Σ_s B_s |X|^{2s} Δ^s p for degree r in k
/// variables: B₀ = 1 and 2s(k + 2r − 2s − 2)B_s + B_{s−1} = 0, the relation
/// forced by Δ(h(p)) = 0.
pub fn harmonic_recursion(k: usize, r: usize) -> Vec<f64> {
    let mut b = vec![1.0];
    for s in 1..=r / 2 {
        let denom = 2.0 * s as f64 * (k as f64 + 2.0 * r as f64 - 2.0 * s as f64 - 2.0);
        b.push(-b[s - 1] / denom);
    }
    b
}

/// The dimension-free relation 2s(2(s+r) − 1)B_s + B_{s−1} = 0, kept for
/// comparison: it does not produce harmonic output in general.
pub fn dimension_free_recursion(r: usize) -> Vec<f64> {
    let mut b = vec![1.0];
    for s in 1..=r / 2 {
        let denom = 2.0 * s as f64 * (2.0 * (s + r) as f64 - 1.0);
        b.push(-b[s - 1] / denom);
    }
    b
}

/// dim 𝐇^{(q)} = C(k+q−1, q) − C(k+q−3, q−2).
pub fn harmonic_dimension(k: usize, q: usize) -> usize {
    let binom = |n: i64, r: i64| -> i64 {
        if r < 0 || n < r || n < 0 {
            return 0;
        }
        let mut acc: i64 = 1;
        for i in 0..r {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    let (k, q) = (k as i64, q as i64);
    (binom(k + q - 1, q) - binom(k + q - 3, q - 2)) as usize
}

impl GradedSpace {
    pub fn new(k: usize, max_degree: usize) -> Self {
        let bases = (0..=max_degree).map(|d| MonomialBasis::new(k, d)).collect();
        Self { k, max_degree, bases }
    }

    pub fn basis(&self, d: usize) -> &MonomialBasis {
        &self.bases[d]
    }

    fn check(&self, d: usize) -> Result<()> {
        if d > self.max_degree {
            return Err(Error::SingularTruncation(format!("degree {d} exceeds the truncation {}", self.max_degree)));
        }
        Ok(())
    }

    /// Δ from degree d to d − 2.
    pub fn laplacian_op(&self, d: usize) -> SparseOp {
        let src = &self.bases[d];
        if d < 2 {
            return SparseOp { rows: 0, cols: src.len(), entries: Vec::new() };
        }
        let dst = &self.bases[d - 2];
        let mut entries = Vec::new();
        for (c, e) in src.exps.iter().enumerate() {
            for i in 0..self.k {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    let r = dst.position(&f).expect("degree bookkeeping");
                    entries.push((r, c, e[i] as f64 * (e[i] as f64 - 1.0)));
                }
            }
        }
        SparseOp { rows: dst.len(), cols: src.len(), entries }
    }

    /// Multiplication by ⟨Q X, X⟩ from degree d to d + 2 (d + 2 must be in
    /// range).
    pub fn quadratic_op(&self, q: &Mat, d: usize) -> SparseOp {
        let src = &self.bases[d];
        let dst = &self.bases[d + 2];
        let mut acc: HashMap<(usize, usize), f64> = HashMap::new();
        for (c, e) in src.exps.iter().enumerate() {
            for i in 0..self.k {
                for j in 0..self.k {
                    let w = q[(i, j)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut f = e.clone();
                    f[i] += 1;
                    f[j] += 1;
                    let r = dst.position(&f).expect("degree bookkeeping");
                    *acc.entry((r, c)).or_default() += w;
                }
            }
        }
        let mut entries: Vec<_> = acc.into_iter().filter(|(_, v)| *v != 0.0).map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (c, r));
        SparseOp { rows: dst.len(), cols: src.len(), entries }
    }

    pub fn norm_squared_op(&self, d: usize) -> SparseOp {
        self.quadratic_op(&Mat::identity(self.k, self.k), d)
    }

    /// D_F = Σ_ij F_ij x_j ∂_i on degree d.
    pub fn derivation_op(&self, f: &Mat, d: usize) -> SparseOp {
        let b = &self.bases[d];
        let mut acc: HashMap<(usize, usize), f64> = HashMap::new();
        for (c, e) in b.exps.iter().enumerate() {
            for i in 0..self.k {
                if e[i] == 0 {
                    continue;
                }
                for j in 0..self.k {
                    let w = f[(i, j)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut g = e.clone();
                    g[i] -= 1;
                    g[j] += 1;
                    let r = b.position(&g).expect("degree bookkeeping");
                    *acc.entry((r, c)).or_default() += w * e[i] as f64;
                }
            }
        }
        let mut entries: Vec<_> = acc.into_iter().filter(|(_, v)| *v != 0.0).map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (c, r));
        SparseOp { rows: b.len(), cols: b.len(), entries }
    }

    /// Matrix of p ↦ p(L X) on degree d.
    pub fn substitution(&self, l: &Mat, d: usize) -> Mat {
        let b = &self.bases[d];
        let k = self.k;
        let cols: Vec<Vector> = b
            .exps
            .par_iter()
            .map(|e| {
                // Expand Π_i (Σ_j L_ij x_j)^{e_i}.
                let mut poly: HashMap<Exponent, f64> = HashMap::new();
                poly.insert(vec![0; k], 1.0);
                for (i, &ei) in e.iter().enumerate() {
                    for _ in 0..ei {
                        let mut next: HashMap<Exponent, f64> = HashMap::new();
                        for (m, c) in &poly {
                            for j in 0..k {
                                let w = l[(i, j)];
                                if w == 0.0 {
                                    continue;
                                }
                                let mut m2 = m.clone();
                                m2[j] += 1;
                                *next.entry(m2).or_insert(0.0) += c * w;
                            }
                        }
                        poly = next;
                    }
                }
                let mut col = Vector::zeros(b.len());
                for (m, c) in poly {
                    col[b.position(&m).expect("degree bookkeeping")] += c;
                }
                col
            })
            .collect();
        let mut out = Mat::zeros(b.len(), b.len());
        for (c, col) in cols.iter().enumerate() {
            out.set_column(c, col);
        }
        out
    }

    /// h(p) = Σ_s B_s |X|^{2s} Δ^s p applied to every column (degree d).
    pub fn project_with(&self, v: &Mat, d: usize, coeffs: &[f64]) -> Mat {
        let smax = (coeffs.len() - 1).min(d / 2);
        let mut lap = vec![v.clone()];
        for s in 1..=smax {
            let next = self.laplacian_op(d - 2 * (s - 1)).apply(&lap[s - 1]);
            lap.push(next);
        }
        let mut acc = &lap[smax] * coeffs[smax];
        for s in (0..smax).rev() {
            acc = self.norm_squared_op(d - 2 * (s + 1)).apply(&acc) + &lap[s] * coeffs[s];
        }
        acc
    }

    pub fn project(&self, v: &Mat, d: usize) -> Mat {
        self.project_with(v, d, &harmonic_recursion(self.k, d))
    }

    /// Harmonic components h_j (degree d − 2j) with v = Σ_j |X|^{2j} h_j,
    /// obtained as h_j = h(Δ^j v) / Π_{i=1}^{j} 2i(k + 2(d−2j) + 2i − 2).
    pub fn sphere_components(&self, v: &Mat, d: usize) -> Vec<Mat> {
        let mut out = Vec::with_capacity(d / 2 + 1);
        let mut lap = v.clone();
        for j in 0..=d / 2 {
            if j > 0 {
                lap = self.laplacian_op(d - 2 * (j - 1)).apply(&lap);
            }
            let m = d - 2 * j;
            let c: f64 = (1..=j).map(|i| 2.0 * i as f64 * (self.k as f64 + 2.0 * m as f64 + 2.0 * i as f64 - 2.0)).product();
            out.push(self.project(&lap, m) / c);
        }
        out
    }

    /// Homogeneous polynomial from the sum Σ_j |X|^{2j} h_j (inverse of
    /// `sphere_components`).
    pub fn assemble_components(&self, parts: &[Mat], d: usize) -> Mat {
        let mut acc = parts[parts.len() - 1].clone();
        for j in (0..parts.len() - 1).rev() {
            acc = self.norm_squared_op(d - 2 * (j + 1)).apply(&acc) + &parts[j];
        }
        acc
    }

    pub fn to_vec(&self, p: &GradedPoly, d: usize) -> Result<Vector> {
        self.check(d)?;
        let b = &self.bases[d];
        let mut v = Vector::zeros(b.len());
        for (e, c) in p.terms() {
            if c.im.abs() > 1e-12 {
                return Err(Error::InvalidParameter("complex coefficient in a real coefficient vector".into()));
            }
            match b.position(e) {
                Some(i) => v[i] += c.re,
                None => return Err(Error::NotHomogeneous),
            }
        }
        Ok(v)
    }

    pub fn to_poly(&self, v: &Vector, d: usize) -> GradedPoly {
        let b = &self.bases[d];
        GradedPoly::from_terms(self.k, b.exps.iter().zip(v.iter()).map(|(e, &c)| (e.clone(), Complex64::new(c, 0.0))))
    }

    /// Factor c_d with ∫_S h₁h₂ dσ = c_d Σ_a a! h₁_a h₂_a for harmonic h₁, h₂
    /// of degree d: c_d = vol(S^{k−1}) / (k(k+2)⋯(k+2d−2)).
    pub fn sphere_factor(&self, d: usize) -> f64 {
        let denom: f64 = (0..d).map(|i| self.k as f64 + 2.0 * i as f64).product();
        sphere_volume(self.k) / denom
    }

    /// Sphere inner-product weights for harmonics of degree d.
    pub fn harmonic_weights(&self, d: usize) -> Vector {
        let c = self.sphere_factor(d);
        Vector::from_iterator(self.bases[d].len(), self.bases[d].fischer.iter().map(|&f| f * c))
    }
}

/// Orthonormal bases (sphere L²) of 𝐇^{(q)}, q ≤ max_degree, as columns of
/// monomial coefficients.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub space: GradedSpace,
    pub blocks: Vec<Mat>,
    pub weights: Vec<Vector>,
}

impl HarmonicBasis {
    /// Spans 𝐇^{(q)} by projections of the monomials with a₀ ≤ 1 and
    /// orthonormalizes them by a Cholesky factorization of their Gram matrix.
    /// `space_degree` bounds the monomial space (≥ max_degree).
    pub fn new(k: usize, max_degree: usize, space_degree: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("harmonic analysis needs k ≥ 2, got {k}")));
        }
        let space = GradedSpace::new(k, space_degree.max(max_degree));
        let blocks: Vec<Result<Mat>> = (0..=max_degree).into_par_iter().map(|q| Self::block(&space, q)).collect();
        let blocks = blocks.into_iter().collect::<Result<Vec<_>>>()?;
        let weights = (0..=max_degree).map(|q| space.harmonic_weights(q)).collect();
        Ok(Self { space, blocks, weights })
    }

    fn block(space: &GradedSpace, q: usize) -> Result<Mat> {
        let b = space.basis(q);
        let chosen: Vec<usize> = (0..b.len()).filter(|&i| b.exps[i][0] <= 1).collect();
        let d = chosen.len();
        let expected = harmonic_dimension(space.k, q);
        if d != expected {
            return Err(Error::SingularTruncation(format!("degree {q}: {d} spanning monomials, expected {expected}")));
        }
        let mut e = Mat::zeros(b.len(), d);
        for (c, &i) in chosen.iter().enumerate() {
            e[(i, c)] = 1.0;
        }
        let p = space.project(&e, q);
        // [h(x^a), h(x^b)]_F = [h(x^a), x^b]_F = b!·h(x^a)_b.
        let c = space.sphere_factor(q);
        let mut g = Mat::from_fn(d, d, |i, j| c * b.fischer[chosen[j]] * p[(chosen[j], i)]);
        g = (&g + g.transpose()) * 0.5;
        let scale = (0..d).map(|i| g[(i, i)]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let chol = g
            .cholesky()
            .ok_or_else(|| Error::SingularTruncation(format!("degree {q}: Gram matrix is not positive definite")))?;
        let l = chol.l();
        let pivot = (0..d).map(|i| l[(i, i)] * l[(i, i)]).fold(f64::INFINITY, f64::min);
        if d > 0 && pivot < RANK_TOL * scale {
            return Err(Error::SingularTruncation(format!("degree {q}: pivot {pivot:.3e} below rank threshold")));
        }
        let y = l
            .solve_lower_triangular(&p.transpose())
            .ok_or_else(|| Error::SingularTruncation(format!("degree {q}: triangular solve failed")))?;
        Ok(y.transpose())
    }

    pub fn k(&self) -> usize {
        self.space.k
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.blocks[q].ncols()
    }

    /// Coordinates of harmonic degree-q columns in the orthonormal basis.
    pub fn coords(&self, q: usize, v: &Mat) -> Mat {
        let w = Mat::from_diagonal(&self.weights[q]);
        self.blocks[q].transpose() * (w * v)
    }

    /// Basis element j of degree q as a polynomial.
    pub fn element(&self, q: usize, j: usize) -> GradedPoly {
        self.space.to_poly(&self.blocks[q].column(j).into_owned(), q)
    }

    /// max |Δ η| over the basis of degree q.
    pub fn laplacian_residual(&self, q: usize) -> f64 {
        if q < 2 {
            return 0.0;
        }
        crate::linalg::max_abs(&self.space.laplacian_op(q).apply(&self.blocks[q]))
    }

    /// ‖HᵀWH − I‖ for degree q.
    pub fn orthonormality_residual(&self, q: usize) -> f64 {
        let g = self.coords(q, &self.blocks[q]);
        crate::linalg::max_abs(&(g - Mat::identity(self.dim(q), self.dim(q))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::poly::sphere_inner;

    #[test]
    fn recursion_degree_two() {
        assert!((harmonic_recursion(6, 2)[1] + 1.0 / 12.0).abs() < 1e-15);
        assert!((dimension_free_recursion(2)[1] + 1.0 / 10.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_formula_small_cases() {
        assert_eq!(harmonic_dimension(3, 2), 5);
        assert_eq!(harmonic_dimension(4, 0), 1);
        assert_eq!(harmonic_dimension(4, 1), 4);
        assert_eq!(harmonic_dimension(8, 6), 1386);
    }

    #[test]
    fn fischer_factor_matches_moments() {
        let hb = HarmonicBasis::new(4, 3, 3).unwrap();
        for q in 0..=3 {
            let n = hb.dim(q).min(4);
            for i in 0..n {
                for j in 0..n {
                    let ip = sphere_inner(&hb.element(q, i), &hb.element(q, j)).re;
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expected).abs() < 1e-10, "q={q} i={i} j={j}: {ip}");
                }
            }
        }
    }

    #[test]
    fn components_reassemble() {
        let s = GradedSpace::new(3, 6);
        let v = Mat::from_fn(s.basis(6).len(), 2, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let parts = s.sphere_components(&v, 6);
        let back = s.assemble_components(&parts, 6);
        assert!(crate::linalg::max_abs(&(back - v)) < 1e-10);
    }
}
