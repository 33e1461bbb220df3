//! Harmonic projection, zonal kernels, the D_A eigen-splitting, the operator
//! T and the maps κ*, κ between the harmonic spaces of two complex
//! structures.

use super::dense::{harmonic_recursion, GradedSpace, HarmonicBasis};
use super::poly::GradedPoly;
use crate::endospace::{unit_endo_conjugator, STRUCT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat, Vector};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// Accepted distance of a D_A eigenvalue from the lattice (2s−q)𝐢 before
/// the split is rejected outright.
pub const SPLIT_REJECT_TOL: f64 = 1e-6;

fn real_part_checked(p: &GradedPoly) -> (GradedPoly, GradedPoly) {
    let re = GradedPoly::from_terms(p.k(), p.terms().iter().map(|(e, c)| (e.clone(), Complex64::new(c.re, 0.0))));
    let im = GradedPoly::from_terms(p.k(), p.terms().iter().map(|(e, c)| (e.clone(), Complex64::new(c.im, 0.0))));
    (re, im)
}

/// h_{(r)}(p) = Σ_s B_s |X|^{2s} Δ^s p with the given coefficients.
pub fn harmonic_project_with(p: &GradedPoly, coeffs: &[f64]) -> Result<GradedPoly> {
    let r = p.homogeneous_degree()?;
    let mut lap = vec![p.clone()];
    for s in 1..coeffs.len().min(r / 2 + 1) {
        let next = lap[s - 1].laplacian();
        lap.push(next);
    }
    let n2 = GradedPoly::norm_squared(p.k());
    let mut out = GradedPoly::zero(p.k());
    let mut radial = GradedPoly::constant(p.k(), Complex64::new(1.0, 0.0));
    for (s, l) in lap.iter().enumerate() {
        out = out.add(&radial.mul(l).scale(Complex64::new(coeffs[s], 0.0)));
        radial = radial.mul(&n2);
    }
    Ok(out)
}

/// Harmonic projection of a homogeneous polynomial with the recursion
/// 2s(k + 2r − 2s − 2)B_s + B_{s−1} = 0.
pub fn harmonic_project(p: &GradedPoly) -> Result<GradedPoly> {
    let r = p.homogeneous_degree()?;
    harmonic_project_with(p, &harmonic_recursion(p.k(), r))
}

/// Largest coefficient of Δ(h(p)) under the k-dependent and the
/// dimension-free recursions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionComparison {
    pub k: usize,
    pub degree: usize,
    pub dimension_aware: f64,
    pub dimension_free: f64,
}

pub fn compare_recursions(p: &GradedPoly) -> Result<RecursionComparison> {
    let r = p.homogeneous_degree()?;
    let a = harmonic_project(p)?.laplacian().max_coeff();
    let b = harmonic_project_with(p, &super::dense::dimension_free_recursion(r))?.laplacian().max_coeff();
    Ok(RecursionComparison { k: p.k(), degree: r, dimension_aware: a, dimension_free: b })
}

/// Reproducing kernel H_{(q)}(Q_u, ·) = Σ_j η_j(Q_u) η_j(·).
pub fn zonal_kernel(q: usize, qu: &[f64], basis: &HarmonicBasis) -> Result<GradedPoly> {
    if q > basis.max_degree() {
        return Err(Error::SingularTruncation(format!("degree {q} exceeds the basis truncation {}", basis.max_degree())));
    }
    if qu.len() != basis.k() {
        return Err(Error::DimensionMismatch(format!("Q has length {}, expected {}", qu.len(), basis.k())));
    }
    let mb = basis.space.basis(q);
    let m = Vector::from_iterator(
        mb.len(),
        mb.exps.iter().map(|e| e.iter().zip(qu).map(|(&a, &x)| x.powi(a as i32)).product::<f64>()),
    );
    let h = &basis.blocks[q];
    let v = h * (h.transpose() * m);
    Ok(basis.space.to_poly(&v, q))
}

/// Matrix of D_F on 𝐇^{(q)} in the orthonormal basis.
pub fn d_op_matrix(basis: &HarmonicBasis, f: &Mat, q: usize) -> Mat {
    let v = basis.space.derivation_op(f, q).apply(&basis.blocks[q]);
    basis.coords(q, &v)
}

/// 𝐇^{(q)} split into the D_{A₀} eigenspaces 𝐇^{(s,q−s)} with eigenvalue
/// (2s−q)𝐢; bases are complex columns in the orthonormal harmonic
/// coordinates.
#[derive(Debug, Clone)]
pub struct HqSplit {
    pub q: usize,
    pub parts: Vec<(usize, CMat)>,
    /// Largest distance of a computed eigenvalue from the lattice (2s−q)𝐢.
    pub max_eigen_deviation: f64,
    /// max over parts of ‖S B − (2s−q)𝐢 B‖.
    pub eigen_residual: f64,
}

impl HqSplit {
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.parts.iter().map(|(s, b)| (*s, b.ncols())).collect()
    }
}

fn orthonormal_complex_columns(m: &CMat, tol: f64) -> CMat {
    let mut cols: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for c in 0..m.ncols() {
        let mut v = m.column(c).into_owned();
        for _ in 0..2 {
            for b in &cols {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > tol {
            cols.push(v / Complex64::new(n, 0.0));
        }
    }
    let mut out = CMat::zeros(m.nrows(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

pub fn hq_split(basis: &HarmonicBasis, q: usize, a0: &Mat) -> Result<HqSplit> {
    let k = basis.k();
    let unit = linalg::max_abs(&(a0 * a0 + Mat::identity(k, k)));
    if unit > STRUCT_TOL {
        return Err(Error::NotUnit(unit));
    }
    let s_mat = d_op_matrix(basis, a0, q);
    let d = s_mat.nrows();
    let neg_sq = -(&s_mat * &s_mat);
    let eig = SymmetricEigen::new((&neg_sq + neg_sq.transpose()) * 0.5);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); q + 1];
    for (i, &mu) in eig.eigenvalues.iter().enumerate() {
        let m = mu.max(0.0).sqrt();
        // Nearest |2s − q| with the parity of q.
        let mut best = q % 2;
        for cand in (q % 2..=q).step_by(2) {
            if (cand as f64 - m).abs() < (best as f64 - m).abs() {
                best = cand;
            }
        }
        if (m - best as f64).abs() > SPLIT_REJECT_TOL {
            return Err(Error::UnexpectedEigenvalue(format!("D_A eigenvalue ±{m:.9}𝐢 on 𝐇^({q}) is not of the form (2s−q)𝐢")));
        }
        groups[best].push(i);
    }
    let sc = linalg::to_complex(&s_mat);
    // The square root above amplifies rounding near 0, so the reported
    // deviation comes from the spectrum of the Hermitian matrix 𝐢S.
    let worst = linalg::eigvalsh_hermitian(&(&sc * Complex64::new(0.0, 1.0)))
        .iter()
        .map(|lam| {
            let nearest = ((lam + q as f64) / 2.0).round().clamp(0.0, q as f64) * 2.0 - q as f64;
            (lam - nearest).abs()
        })
        .fold(0.0, f64::max);
    let mut parts = Vec::new();
    let mut residual: f64 = 0.0;
    for (m, idx) in groups.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        let u = Mat::from_fn(d, idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
        if m == 0 {
            parts.push((q / 2, linalg::to_complex(&u)));
            continue;
        }
        let uc = linalg::to_complex(&u);
        let su = &sc * &uc;
        let i_over_m = Complex64::new(0.0, 1.0 / m as f64);
        // (I ∓ 𝐢S/m)/2 project onto the ±m𝐢 eigenspaces.
        let plus = (&uc - &su * i_over_m) * Complex64::new(0.5, 0.0);
        let minus = (&uc + &su * i_over_m) * Complex64::new(0.5, 0.0);
        let bp = orthonormal_complex_columns(&plus, 1e-6);
        let bm = orthonormal_complex_columns(&minus, 1e-6);
        if 2 * bp.ncols() != idx.len() || 2 * bm.ncols() != idx.len() {
            return Err(Error::UnexpectedEigenvalue(format!(
                "±{m}𝐢 eigenspaces on 𝐇^({q}) have dimensions {} and {} inside a block of {}",
                bp.ncols(),
                bm.ncols(),
                idx.len()
            )));
        }
        parts.push(((q + m) / 2, bp));
        parts.push(((q - m) / 2, bm));
    }
    for (s, b) in &parts {
        let lam = Complex64::new(0.0, 2.0 * *s as f64 - q as f64);
        let r = &sc * b - b * lam;
        residual = residual.max(r.iter().fold(0.0, |a, z| a.max(z.norm())));
    }
    parts.sort_by_key(|(s, _)| *s);
    Ok(HqSplit { q, parts, max_eigen_deviation: worst, eigen_residual: residual })
}

/// T on a homogeneous polynomial of degree r: its harmonic components of
/// degrees r, r−2, … (the spherical decomposition on |X| = 1).
pub fn t_apply(p: &GradedPoly) -> Result<Vec<GradedPoly>> {
    let r = p.homogeneous_degree()?;
    let space = GradedSpace::new(p.k(), r);
    let (re, im) = real_part_checked(p);
    let mut v = Mat::zeros(space.basis(r).len(), 2);
    v.set_column(0, &space.to_vec(&re, r)?);
    v.set_column(1, &space.to_vec(&im, r)?);
    let parts = space.sphere_components(&v, r);
    Ok(parts
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let d = r - 2 * j;
            space
                .to_poly(&m.column(0).into_owned(), d)
                .add(&space.to_poly(&m.column(1).into_owned(), d).scale(Complex64::new(0.0, 1.0)))
        })
        .collect())
}

/// Inverse of `t_apply`: the degree-r polynomial Σ_j |X|^{2j} h_j whose
/// restriction to the sphere has the given harmonic components.
pub fn t_invert(parts: &[GradedPoly], r: usize) -> Result<GradedPoly> {
    if parts.is_empty() || parts.len() > r / 2 + 1 {
        return Err(Error::SingularTruncation(format!("{} components for degree {r}", parts.len())));
    }
    let k = parts[0].k();
    let n2 = GradedPoly::norm_squared(k);
    let mut out = GradedPoly::zero(k);
    let mut radial = GradedPoly::constant(k, Complex64::new(1.0, 0.0));
    for (j, h) in parts.iter().enumerate() {
        if !h.is_zero() {
            let d = h.homogeneous_degree()?;
            if d != r - 2 * j {
                return Err(Error::SingularTruncation(format!("component {j} has degree {d}, expected {}", r - 2 * j)));
            }
            let lap = h.laplacian().max_coeff();
            if lap > 1e-8 * h.max_coeff().max(1.0) {
                return Err(Error::SingularTruncation(format!("component {j} is not harmonic (|Δh| = {lap:.3e})")));
            }
        }
        out = out.add(&radial.mul(h));
        radial = radial.mul(&n2);
    }
    Ok(out)
}

/// The real orthogonal φ with φA₀φᵀ = A₀′ that realizes κ* as the
/// coordinate reinterpretation p ↦ p∘φᵀ, so that κ*(Θ_Q) = Θ′_{φQ}.
///
/// The unit-anticommutator conjugator √D (fixing the perpendicular family)
/// reduces A₀′ to Ŝ∘A₀. On each joint eigenspace of Ŝ (and of the optional
/// symmetric `adapt` map commuting with A₀ and Ŝ) a real basis E_j with
/// A₀E_j completing it is chosen; φ fixes E_j and sends A₀E_j to ŜA₀E_j.
#[derive(Debug, Clone)]
pub struct KappaMap {
    pub a0: Mat,
    pub a0_prime: Mat,
    pub phi: Mat,
    /// Real basis vectors E_j fixed by the reinterpretation (before √D).
    pub real_basis: Vec<Vector>,
    /// max |φA₀φᵀ − A₀′|.
    pub conjugation_residual: f64,
}

impl KappaMap {
    pub fn new(a0: &Mat, a0_prime: &Mat, f_list: &[Mat], adapt: Option<&Mat>) -> Result<Self> {
        let k = a0.nrows();
        let conj = unit_endo_conjugator(a0, a0_prime, f_list)?;
        let s_hat = &conj.s_hat;
        if let Some(m) = adapt {
            let r = linalg::max_abs(&linalg::commutator(m, a0)).max(linalg::max_abs(&linalg::commutator(m, s_hat)));
            if r > 1e-9 {
                return Err(Error::InvalidParameter(format!("adapting map does not commute with A₀ and Ŝ ({r:.3e})")));
            }
        }
        let (svals, svecs) = linalg::eigh(s_hat);
        let mut blocks: Vec<(f64, Mat)> = Vec::new();
        for sign in [-1.0, 1.0] {
            let idx: Vec<usize> = (0..k).filter(|&i| (svals[i] - sign).abs() < 0.5).collect();
            if idx.is_empty() {
                continue;
            }
            let u = Mat::from_fn(k, idx.len(), |r, c| svecs[(r, idx[c])]);
            match adapt {
                None => blocks.push((sign, u)),
                Some(m) => {
                    let (mv, mvec) = linalg::eigh(&(u.transpose() * m * &u));
                    let mut start = 0;
                    while start < mv.len() {
                        let mut end = start + 1;
                        while end < mv.len() && (mv[end] - mv[start]).abs() <= 1e-8 * mv[start].abs().max(1.0) {
                            end += 1;
                        }
                        let sub = &u * mvec.columns(start, end - start);
                        blocks.push((sign, sub));
                        start = end;
                    }
                }
            }
        }
        let mut phi1 = Mat::zeros(k, k);
        let mut chosen: Vec<Vector> = Vec::new();
        let mut real_basis = Vec::new();
        for (sign, w) in &blocks {
            let mut local = 0;
            for c in 0..w.ncols() {
                if 2 * local == w.ncols() {
                    break;
                }
                let mut v = w.column(c).into_owned();
                for _ in 0..2 {
                    for b in &chosen {
                        let p = b.dot(&v);
                        v -= b * p;
                    }
                }
                let n = v.norm();
                if n < 1e-6 {
                    continue;
                }
                let e = v / n;
                let ae = a0 * &e;
                phi1 += &e * e.transpose() + (&ae * *sign) * ae.transpose();
                chosen.push(e.clone());
                chosen.push(ae);
                real_basis.push(e);
                local += 1;
            }
            if 2 * local != w.ncols() {
                return Err(Error::SingularTruncation(format!(
                    "could not complete a complex basis on a block of dimension {}",
                    w.ncols()
                )));
            }
        }
        let phi = conj.sqrt_d.transpose() * phi1;
        let conjugation_residual = linalg::max_abs(&(&phi * a0 * phi.transpose() - a0_prime));
        Ok(Self { a0: a0.clone(), a0_prime: a0_prime.clone(), phi, real_basis, conjugation_residual })
    }

    /// κ*(p) = p∘φᵀ.
    pub fn kappa_star(&self, p: &GradedPoly) -> GradedPoly {
        p.substitute(&self.phi.transpose())
    }

    /// κ = T′∘κ*∘T⁻¹ on a harmonic polynomial of degree r: the harmonic
    /// lift, the reinterpretation, and the top harmonic component.
    pub fn kappa(&self, h: &GradedPoly) -> Result<GradedPoly> {
        let r = h.homogeneous_degree()?;
        let lifted = t_invert(std::slice::from_ref(h), r)?;
        let moved = self.kappa_star(&lifted);
        let parts = t_apply(&moved)?;
        Ok(parts.into_iter().next().unwrap_or_else(|| GradedPoly::zero(h.k())))
    }

    /// Matrix of κ on 𝐇^{(q)} in the orthonormal basis.
    pub fn matrix(&self, basis: &HarmonicBasis, q: usize) -> Mat {
        let sub = basis.space.substitution(&self.phi.transpose(), q);
        let moved = sub * &basis.blocks[q];
        let top = basis.space.project(&moved, q);
        basis.coords(q, &top)
    }

    /// Matrix of κ* on all monomials of degree q.
    pub fn star_matrix(&self, space: &GradedSpace, q: usize) -> Mat {
        space.substitution(&self.phi.transpose(), q)
    }
}

/// Matrix of ψ ↦ ⟨Q X, X⟩ψ on 𝐇^{(r)}, decomposed on the sphere into its
/// 𝐇^{(r+2)}, 𝐇^{(r)} and 𝐇^{(r−2)} components (entries for degrees above
/// the basis truncation are omitted).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub domain: usize,
    pub blocks: Vec<(usize, Mat)>,
}

pub fn mult_project_operator(basis: &HarmonicBasis, q_form: &Mat, r: usize) -> Result<OperatorMatrix> {
    if r + 2 > basis.space.max_degree {
        return Err(Error::SingularTruncation(format!(
            "multiplying degree {r} needs monomials up to degree {}",
            r + 2
        )));
    }
    let sym = (q_form + q_form.transpose()) * 0.5;
    let f = basis.space.quadratic_op(&sym, r).apply(&basis.blocks[r]);
    let parts = basis.space.sphere_components(&f, r + 2);
    let mut blocks = Vec::new();
    for (j, part) in parts.iter().enumerate().take(3) {
        let d = r + 2 - 2 * j;
        if d <= basis.max_degree() {
            blocks.push((d, basis.coords(d, part)));
        }
    }
    Ok(OperatorMatrix { domain: r, blocks })
}

/// The two halves of ⟨J_cX, J_dX⟩ = J⁽¹⁾ + J⁽²⁾ written through
/// 𝐐_{ei} = J_e E_i + 𝐢A₀J_e E_i: J⁽¹⁾ pairs 𝐐 with 𝐐̄, J⁽²⁾ pairs like
/// with like.
pub fn cd_expansion(a0: &Mat, jc: &Mat, jd: &Mat) -> (GradedPoly, GradedPoly) {
    let k = a0.nrows();
    let mut j1 = GradedPoly::zero(k);
    let mut j2 = GradedPoly::zero(k);
    let quarter = Complex64::new(0.25, 0.0);
    for i in 0..k {
        let mut e = Vector::zeros(k);
        e[i] = 1.0;
        let bold = |m: &Mat| -> GradedPoly {
            let q = m * &e;
            let aq = a0 * &q;
            GradedPoly::linear(&(0..k).map(|t| Complex64::new(q[t], aq[t])).collect::<Vec<_>>())
        };
        let qc = bold(jc);
        let qd = bold(jd);
        j1 = j1.add(&qc.mul(&qd.conj()).add(&qc.conj().mul(&qd)).scale(quarter));
        j2 = j2.add(&qc.mul(&qd).add(&qc.conj().mul(&qd.conj())).scale(quarter));
    }
    (j1, j2)
}
