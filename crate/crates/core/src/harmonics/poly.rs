//! Sparse complex polynomials in k real variables, exact sphere moments and
//! the differential operators acting on them.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Coefficients below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

pub type Exponent = Vec<u8>;

/// Polynomial Σ c_a X^a with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedPoly {
    k: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

fn degree_of(e: &[u8]) -> usize {
    e.iter().map(|&v| v as usize).sum()
}

impl GradedPoly {
    pub fn zero(k: usize) -> Self {
        Self { k, terms: BTreeMap::new() }
    }

    pub fn constant(k: usize, c: Complex64) -> Self {
        let mut p = Self::zero(k);
        p.add_term(vec![0; k], c);
        p
    }

    pub fn monomial(exp: Exponent, c: Complex64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The linear form X ↦ Σ v_i x_i.
    pub fn linear(v: &[Complex64]) -> Self {
        let k = v.len();
        let mut p = Self::zero(k);
        for (i, &c) in v.iter().enumerate() {
            let mut e = vec![0u8; k];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    /// |X|² = Σ x_i².
    pub fn norm_squared(k: usize) -> Self {
        let mut p = Self::zero(k);
        for i in 0..k {
            let mut e = vec![0u8; k];
            e[i] = 2;
            p.add_term(e, Complex64::new(1.0, 0.0));
        }
        p
    }

    /// The quadratic form ⟨Q X, X⟩ for a square matrix Q.
    pub fn quadratic(q: &Mat) -> Self {
        let k = q.nrows();
        let mut p = Self::zero(k);
        for i in 0..k {
            for j in 0..k {
                let c = q[(i, j)];
                if c != 0.0 {
                    let mut e = vec![0u8; k];
                    e[i] += 1;
                    e[j] += 1;
                    p.add_term(e, Complex64::new(c, 0.0));
                }
            }
        }
        p.pruned()
    }

    pub fn from_terms(k: usize, terms: impl IntoIterator<Item = (Exponent, Complex64)>) -> Self {
        let mut p = Self::zero(k);
        for (e, c) in terms {
            assert_eq!(e.len(), k, "exponent length differs from the variable count");
            p.add_term(e, c);
        }
        p.pruned()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u8]) -> Complex64 {
        self.terms.get(e).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: Complex64) {
        *self.terms.entry(e).or_default() += c;
    }

    /// Removes coefficients below `PRUNE_TOL`.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
        self
    }

    /// Highest total degree present (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| degree_of(e)).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        Self { k: self.k, terms: self.terms.iter().filter(|(e, _)| degree_of(e) == d).map(|(e, c)| (e.clone(), *c)).collect() }
    }

    /// Degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Result<usize> {
        let mut degs = self.terms.keys().map(|e| degree_of(e));
        match degs.next() {
            None => Ok(0),
            Some(d) => {
                if degs.all(|x| x == d) {
                    Ok(d)
                } else {
                    Err(Error::NotHomogeneous)
                }
            }
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.norm()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), *c);
        }
        p.pruned()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { k: self.k, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }.pruned()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.k);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p.pruned()
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut p = Self::constant(self.k, Complex64::new(1.0, 0.0));
        for _ in 0..n {
            p = p.mul(self);
        }
        p
    }

    pub fn conj(&self) -> Self {
        Self { k: self.k, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.k);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * e[i] as f64);
            }
        }
        p.pruned()
    }

    /// Euclidean Laplacian Σ ∂²/∂x_i².
    pub fn laplacian(&self) -> Self {
        let mut p = Self::zero(self.k);
        for (e, c) in &self.terms {
            for i in 0..self.k {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    p.add_term(f, c * (e[i] as f64 * (e[i] as f64 - 1.0)));
                }
            }
        }
        p.pruned()
    }

    /// Derivative along the linear field X ↦ F X: Σ_ij F_ij x_j ∂_i.
    pub fn d_op_apply(&self, f: &Mat) -> Self {
        let mut p = Self::zero(self.k);
        for (e, c) in &self.terms {
            for i in 0..self.k {
                if e[i] == 0 {
                    continue;
                }
                for j in 0..self.k {
                    let fij = f[(i, j)];
                    if fij == 0.0 {
                        continue;
                    }
                    let mut g = e.clone();
                    g[i] -= 1;
                    g[j] += 1;
                    p.add_term(g, c * (fij * e[i] as f64));
                }
            }
        }
        p.pruned()
    }

    /// p(L X) for a k×k matrix L.
    pub fn substitute(&self, l: &Mat) -> Self {
        let k = self.k;
        let rows: Vec<Self> = (0..k)
            .map(|i| Self::linear(&(0..k).map(|j| Complex64::new(l[(i, j)], 0.0)).collect::<Vec<_>>()))
            .collect();
        let mut out = Self::zero(k);
        for (e, c) in &self.terms {
            let mut t = Self::constant(k, *c);
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t = t.mul(&rows[i].pow(ei as usize));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&a, &xi)| xi.powi(a as i32)).product::<f64>())
            .sum()
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&a, &xi)| xi.powi(a as i32)).product::<Complex64>())
            .sum()
    }
}

/// Γ(n/2) for a positive integer n.
fn gamma_half(n: usize) -> f64 {
    assert!(n > 0, "Γ(0) is undefined");
    let (mut g, mut x) = if n % 2 == 0 { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
    while 2.0 * x < n as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// ∫_{S^{k−1}} X^a dσ = 2 Π Γ((a_i+1)/2) / Γ((|a|+k)/2) when every a_i is
/// even, and 0 otherwise.
pub fn sphere_moment(a: &[u8]) -> f64 {
    if a.iter().any(|&v| v % 2 == 1) {
        return 0.0;
    }
    let k = a.len();
    let num: f64 = a.iter().map(|&v| gamma_half(v as usize + 1)).product();
    2.0 * num / gamma_half(degree_of(a) + k)
}

/// Surface area of S^{k−1}.
pub fn sphere_volume(k: usize) -> f64 {
    sphere_moment(&vec![0u8; k])
}

/// L² inner product ∫_S p q̄ dσ by exact monomial moments.
pub fn sphere_inner(p: &GradedPoly, q: &GradedPoly) -> Complex64 {
    let mut acc = Complex64::default();
    for (e1, c1) in p.terms() {
        for (e2, c2) in q.terms() {
            let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            let m = sphere_moment(&e);
            if m != 0.0 {
                acc += c1 * c2.conj() * m;
            }
        }
    }
    acc
}

/// Θ_Q(X) = ⟨Q + 𝐢A₀Q, X⟩ for a unit complex structure A₀.
pub fn theta(q: &[f64], a0: &Mat) -> Result<GradedPoly> {
    let k = q.len();
    if a0.nrows() != k || a0.ncols() != k {
        return Err(Error::DimensionMismatch(format!("Q has length {k}, A₀ is {}×{}", a0.nrows(), a0.ncols())));
    }
    let r = crate::linalg::max_abs(&(a0 * a0 + Mat::identity(k, k)));
    if r > crate::endospace::STRUCT_TOL {
        return Err(Error::NotUnit(r));
    }
    let qv = crate::linalg::Vector::from_column_slice(q);
    let aq = a0 * &qv;
    let coeffs: Vec<Complex64> = (0..k).map(|i| Complex64::new(qv[i], aq[i])).collect();
    Ok(GradedPoly::linear(&coeffs).pruned())
}
