//! Z-Fourier reduction of the Laplacian.
//!
//! On functions f(X)e^{−2π𝐢⟨β,Z⟩} the Laplacian acts as
//! □_β f = Δ_X f − 4π²|β|² f − π²|J_β X|² f − 2π𝐢 D_β f, where D_β is the
//! derivative along the field X ↦ J_β X. The positive operator −□_β is
//! represented on product Hermite functions ψ_n(s·x) of total degree ≤ N.
//!
//! Two assemblies are provided. `dense_hermitian` works in the original
//! coordinates (complex Hermitian, 𝐢 times the real skew matrix of D_β).
//! `fourier_reduce` rotates to the normal form of J_β, where every 2-plane
//! carries its own angular momentum; in circular Hermite states the matrix
//! is real and splits into sectors of fixed angular momenta and kernel
//! parities. Both act on the same truncated space, so their spectra agree.

use crate::endospace::SkewEndo;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat, Vector};
use crate::nilgeom::MetricGroup;
use num_complex::Complex64;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

/// Eigenvalues of J_βᵀJ_β below this are treated as kernel.
const KERNEL_TOL: f64 = 1e-10;

/// Orthonormal basis in which a skew matrix is block diagonal with blocks
/// a_c·[[0,1],[−1,0]] (a_c > 0) followed by its kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewNormalForm {
    /// Columns: u₁, w₁, u₂, w₂, …, then a kernel basis.
    pub basis: Mat,
    pub frequencies: Vec<f64>,
    pub kernel_dim: usize,
}

pub fn skew_normal_form(j: &Mat) -> SkewNormalForm {
    let k = j.nrows();
    let (vals, vecs) = linalg::eigh(&(j.transpose() * j));
    let scale = vals.iter().copied().fold(1.0, f64::max);
    let mut cols: Vec<Vector> = Vec::with_capacity(k);
    let mut frequencies = Vec::new();
    // Descending eigenvalues; each non-zero one is doubled.
    let mut i = k;
    while i > 0 {
        i -= 1;
        let lam = vals[i];
        if lam <= KERNEL_TOL * scale {
            continue;
        }
        let a = lam.sqrt();
        let mut u = vecs.column(i).into_owned();
        for _ in 0..2 {
            for b in &cols {
                let p = b.dot(&u);
                u -= b * p;
            }
        }
        let nu = u.norm();
        if nu < 1e-6 {
            continue;
        }
        let u = u / nu;
        let w = -(j * &u) / a;
        cols.push(u);
        cols.push(w);
        frequencies.push(a);
    }
    let kernel = linalg::orthogonal_complement(&cols, k, 1e-8);
    let kernel_dim = kernel.len();
    cols.extend(kernel);
    SkewNormalForm { basis: linalg::columns_to_mat(&cols, k), frequencies, kernel_dim }
}

/// One block of −□_β: fixed angular momentum per plane and fixed parity
/// per kernel coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSector {
    /// Angular momenta m_c followed by kernel parities.
    pub key: Vec<i64>,
    /// Per state: (n₊, n₋) per plane, then n per kernel coordinate.
    pub states: Vec<Vec<usize>>,
    pub matrix: Mat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOperator {
    pub beta: Vector,
    pub j_beta: SkewEndo,
    pub truncation: usize,
    /// Hermite scale s: basis functions ψ_n(s·x).
    pub scale: f64,
    pub normal_form: SkewNormalForm,
    pub constant: f64,
    pub sectors: Vec<ReducedSector>,
}

impl ReducedOperator {
    pub fn dimension(&self) -> usize {
        self.sectors.iter().map(|s| s.states.len()).sum()
    }

    /// Full spectrum of −□_β on the truncated space, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.sectors.iter().flat_map(|s| linalg::eigh(&s.matrix).0).collect();
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    /// Eigenpairs with the total Hermite degree of every basis state, used
    /// to measure how much weight an eigenvector has near the cutoff.
    pub fn eigen_with_edge_weight(&self, edge_degree: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.dimension());
        for s in &self.sectors {
            let (vals, vecs) = linalg::eigh(&s.matrix);
            let degrees: Vec<usize> = s.states.iter().map(|st| st.iter().sum()).collect();
            for (c, &v) in vals.iter().enumerate() {
                let w: f64 = degrees
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > edge_degree)
                    .map(|(r, _)| vecs[(r, c)] * vecs[(r, c)])
                    .sum();
                out.push((v, w));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Largest total-degree jump between coupled states (at most 2).
    pub fn band_width(&self) -> usize {
        let mut worst = 0;
        for s in &self.sectors {
            for r in 0..s.states.len() {
                for c in 0..s.states.len() {
                    if s.matrix[(r, c)] != 0.0 {
                        let dr: usize = s.states[r].iter().sum();
                        let dc: usize = s.states[c].iter().sum();
                        worst = worst.max(dr.abs_diff(dc));
                    }
                }
            }
        }
        worst
    }
}

fn default_scale() -> f64 {
    1.0
}

/// Builds −□_β on circular Hermite states of total degree ≤ N in the
/// normal-form coordinates of J_β. `scale` defaults to 1.
pub fn fourier_reduce(g: &MetricGroup, beta: &Vector, n: usize, scale: Option<f64>) -> Result<ReducedOperator> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Hermite truncation N = {n} must be at least 2")));
    }
    if beta.len() != g.l() {
        return Err(Error::DimensionMismatch(format!("β has length {}, expected {}", beta.len(), g.l())));
    }
    let j = g.j(beta);
    let s = scale.unwrap_or_else(default_scale);
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("Hermite scale {s} must be positive")));
    }
    let nf = skew_normal_form(&j);
    let planes = nf.frequencies.len();
    let kdim = nf.kernel_dim;
    let slots = 2 * planes + kdim;
    let s2 = s * s;
    let constant = 4.0 * PI * PI * beta.norm_squared();

    // Enumerate occupation vectors (n₊, n₋ per plane; n per kernel axis).
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; slots];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, n, &mut cur, &mut all);

    let key_of = |st: &[usize]| -> Vec<i64> {
        let mut key: Vec<i64> = (0..planes).map(|c| st[2 * c] as i64 - st[2 * c + 1] as i64).collect();
        key.extend((0..kdim).map(|q| (st[2 * planes + q] % 2) as i64));
        key
    };
    let mut groups: BTreeMap<Vec<i64>, Vec<Vec<usize>>> = BTreeMap::new();
    for st in all {
        groups.entry(key_of(&st)).or_default().push(st);
    }

    let sectors = groups
        .into_iter()
        .map(|(key, states)| {
            let index: HashMap<&[usize], usize> = states.iter().enumerate().map(|(i, st)| (st.as_slice(), i)).collect();
            let dim = states.len();
            let mut m = Mat::zeros(dim, dim);
            for (r, st) in states.iter().enumerate() {
                let mut diag = constant;
                for (c, &a) in nf.frequencies.iter().enumerate() {
                    let (np, nm) = (st[2 * c], st[2 * c + 1]);
                    let ntot = (np + nm) as f64;
                    diag += (s2 + PI * PI * a * a / s2) * (ntot + 1.0) + 2.0 * PI * a * (np as f64 - nm as f64);
                    let off = PI * PI * a * a / s2 - s2;
                    if off != 0.0 {
                        // b₊b₋ + b₊†b₋†
                        if np > 0 && nm > 0 {
                            let mut t = st.clone();
                            t[2 * c] -= 1;
                            t[2 * c + 1] -= 1;
                            if let Some(&col) = index.get(t.as_slice()) {
                                m[(col, r)] += off * ((np * nm) as f64).sqrt();
                            }
                        }
                        let mut t = st.clone();
                        t[2 * c] += 1;
                        t[2 * c + 1] += 1;
                        if let Some(&col) = index.get(t.as_slice()) {
                            m[(col, r)] += off * (((np + 1) * (nm + 1)) as f64).sqrt();
                        }
                    }
                }
                for q in 0..kdim {
                    let slot = 2 * planes + q;
                    let nq = st[slot];
                    diag += s2 * (nq as f64 + 0.5);
                    if nq >= 2 {
                        let mut t = st.clone();
                        t[slot] -= 2;
                        if let Some(&col) = index.get(t.as_slice()) {
                            m[(col, r)] += -0.5 * s2 * ((nq * (nq - 1)) as f64).sqrt();
                        }
                    }
                    let mut t = st.clone();
                    t[slot] += 2;
                    if let Some(&col) = index.get(t.as_slice()) {
                        m[(col, r)] += -0.5 * s2 * (((nq + 1) * (nq + 2)) as f64).sqrt();
                    }
                }
                m[(r, r)] += diag;
            }
            ReducedSector { key, states, matrix: m }
        })
        .collect();

    Ok(ReducedOperator {
        beta: beta.clone(),
        j_beta: SkewEndo::new(j)?,
        truncation: n,
        scale: s,
        normal_form: nf,
        constant,
        sectors,
    })
}

/// Multi-indices of total degree ≤ N in k variables, graded by degree and
/// lexicographic within a degree.
pub fn hermite_multi_indices(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=n {
        let mut cur = vec![0usize; k];
        fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(cur.clone());
                cur[pos] = 0;
                return;
            }
            for v in (0..=left).rev() {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
            cur[pos] = 0;
        }
        if k == 0 {
            if d == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        rec(0, d, &mut cur, &mut out);
    }
    out
}

/// A product of ladder operators (mode, raising) applied right to left.
fn apply_ladder(state: &[usize], ops: &[(usize, bool)]) -> Option<(f64, Vec<usize>)> {
    let mut st = state.to_vec();
    let mut coef = 1.0;
    for &(mode, raise) in ops.iter().rev() {
        if raise {
            st[mode] += 1;
            coef *= (st[mode] as f64).sqrt();
        } else {
            if st[mode] == 0 {
                return None;
            }
            coef *= (st[mode] as f64).sqrt();
            st[mode] -= 1;
        }
    }
    Some((coef, st))
}

/// Real symmetric part and real skew matrix of D_β on product Hermite
/// functions in the original coordinates; −□_β = sym + 2π𝐢·skew.
pub fn dense_parts(j: &Mat, beta_norm_sq: f64, n: usize, scale: f64) -> (Vec<Vec<usize>>, Mat, Mat) {
    let k = j.nrows();
    let states = hermite_multi_indices(k, n);
    let index: HashMap<Vec<usize>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let dim = states.len();
    let s2 = scale * scale;
    let m = j.transpose() * j;
    let mut sym = Mat::zeros(dim, dim);
    let mut skew = Mat::zeros(dim, dim);
    let add = |target: &mut Mat, col: usize, st: &[usize], coef: f64, ops: &[(usize, bool)]| {
        if coef == 0.0 {
            return;
        }
        if let Some((c, out)) = apply_ladder(st, ops) {
            if let Some(&row) = index.get(&out) {
                target[(row, col)] += coef * c;
            }
        }
    };
    for (col, st) in states.iter().enumerate() {
        sym[(col, col)] += 4.0 * PI * PI * beta_norm_sq;
        for i in 0..k {
            // −s²∂²: s²[(n+½) − ½(a² + a†²)]
            sym[(col, col)] += s2 * (st[i] as f64 + 0.5);
            add(&mut sym, col, st, -0.5 * s2, &[(i, false), (i, false)]);
            add(&mut sym, col, st, -0.5 * s2, &[(i, true), (i, true)]);
        }
        for i in 0..k {
            for jj in 0..k {
                // π²/s² M_ij y_i y_j with y = (a + a†)/√2
                let c = PI * PI / s2 * m[(i, jj)] * 0.5;
                for ri in [false, true] {
                    for rj in [false, true] {
                        add(&mut sym, col, st, c, &[(i, ri), (jj, rj)]);
                    }
                }
                // D = Σ J_ij y_j ∂_i, ∂ = (a − a†)/√2
                let d = j[(i, jj)] * 0.5;
                if i != jj && d != 0.0 {
                    for rj in [false, true] {
                        add(&mut skew, col, st, d, &[(jj, rj), (i, false)]);
                        add(&mut skew, col, st, -d, &[(jj, rj), (i, true)]);
                    }
                }
            }
        }
    }
    (states, sym, skew)
}

/// −□_β as a complex Hermitian matrix on product Hermite functions of
/// total degree ≤ N in the original coordinates.
pub fn dense_hermitian(g: &MetricGroup, beta: &Vector, n: usize, scale: f64) -> CMat {
    let j = g.j(beta);
    let (_, sym, skew) = dense_parts(&j, beta.norm_squared(), n, scale);
    CMat::from_fn(sym.nrows(), sym.ncols(), |r, c| Complex64::new(sym[(r, c)], 2.0 * PI * skew[(r, c)]))
}

/// Matrix of f ↦ f∘Oᵀ on product Hermite functions of total degree ≤ N
/// (isotropic scale): a_i† ↦ Σ_j O_ji a_j†, so each degree transforms as
/// the symmetric power of O in normalized monomial states.
pub fn rotation_induced_map(o: &Mat, n: usize) -> Mat {
    let k = o.nrows();
    let states = hermite_multi_indices(k, n);
    let index: HashMap<Vec<usize>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let fact = |m: usize| (1..=m).map(|v| v as f64).product::<f64>();
    let mut out = Mat::zeros(states.len(), states.len());
    for (col, st) in states.iter().enumerate() {
        // Expand Π_i (Σ_j O_ji a_j†)^{n_i} as a polynomial in the a_j†.
        let mut poly: HashMap<Vec<usize>, f64> = HashMap::new();
        poly.insert(vec![0; k], 1.0);
        for (i, &ni) in st.iter().enumerate() {
            for _ in 0..ni {
                let mut next: HashMap<Vec<usize>, f64> = HashMap::new();
                for (mono, c) in &poly {
                    for jj in 0..k {
                        let w = o[(jj, i)];
                        if w == 0.0 {
                            continue;
                        }
                        let mut m2 = mono.clone();
                        m2[jj] += 1;
                        *next.entry(m2).or_insert(0.0) += c * w;
                    }
                }
                poly = next;
            }
        }
        let norm_in: f64 = st.iter().map(|&v| fact(v)).product::<f64>().sqrt();
        for (mono, c) in poly {
            // (a†)^m |0⟩ = √(m!) |m⟩
            let norm_out: f64 = mono.iter().map(|&v| fact(v)).product::<f64>().sqrt();
            if let Some(&row) = index.get(&mono) {
                out[(row, col)] += c * norm_out / norm_in;
            }
        }
    }
    out
}

/// Lowest eigenvalues of −□_β at truncation N with the Cauchy difference
/// against N − 2 as error bar and the eigenvector weight above degree N − 4.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowReport {
    pub truncation: usize,
    pub eigenvalues: Vec<f64>,
    pub cauchy_errors: Vec<f64>,
    pub edge_weights: Vec<f64>,
}

pub fn interior_window(g: &MetricGroup, beta: &Vector, n: usize, count: usize, scale: Option<f64>) -> Result<WindowReport> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("window needs N ≥ 4, got {n}")));
    }
    let hi = fourier_reduce(g, beta, n, scale)?;
    let lo = fourier_reduce(g, beta, n - 2, scale)?;
    let top = hi.eigen_with_edge_weight(n - 4);
    let low = lo.eigenvalues();
    let count = count.min(top.len()).min(low.len());
    Ok(WindowReport {
        truncation: n,
        eigenvalues: top[..count].iter().map(|p| p.0).collect(),
        cauchy_errors: (0..count).map(|i| (top[i].0 - low[i]).abs()).collect(),
        edge_weights: top[..count].iter().map(|p| p.1).collect(),
    })
}

/// Floor on the truncation error bar: a matched Hermite scale makes the
/// truncation exact, and the Cauchy difference then sits at rounding level.
pub const CAUCHY_FLOOR: f64 = 1e-9;

/// Orthogonal O with O J₁ Oᵀ = J₂, built from the two skew normal forms.
/// Fails when the normal forms differ (J₁, J₂ not orthogonally conjugate).
pub fn normal_form_conjugator(j1: &Mat, j2: &Mat) -> Result<Mat> {
    if j1.shape() != j2.shape() {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", j1.shape(), j2.shape())));
    }
    let n1 = skew_normal_form(j1);
    let n2 = skew_normal_form(j2);
    let scale = n1.frequencies.iter().chain(&n2.frequencies).copied().fold(1.0, f64::max);
    let same = n1.frequencies.len() == n2.frequencies.len()
        && n1.frequencies.iter().zip(&n2.frequencies).all(|(a, b)| (a - b).abs() <= 1e-9 * scale);
    if !same {
        return Err(Error::InvalidParameter(format!(
            "skew spectra differ: {:?} vs {:?}",
            n1.frequencies, n2.frequencies
        )));
    }
    Ok(&n2.basis * n1.basis.transpose())
}

/// Exact unitary-equivalence certificate for one Fourier mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEquivalenceReport {
    pub truncation: usize,
    /// ‖O J_β Oᵀ − J′_β‖ (max entry).
    pub conjugacy_residual: f64,
    /// Normalized ‖K P − P′ K‖ for the induced basis map K.
    pub operator_residual: f64,
    pub pass: bool,
}

/// Builds O from the normal forms of J_β and J′_β and checks that the
/// induced map on Hermite functions intertwines the dense operators.
pub fn exact_equivalence(
    g1: &MetricGroup,
    g2: &MetricGroup,
    beta: &Vector,
    n: usize,
    scale: f64,
    tol: f64,
) -> Result<ExactEquivalenceReport> {
    if g1.k() != g2.k() || g1.l() != g2.l() || beta.len() != g1.l() {
        return Err(Error::DimensionMismatch("groups or β have incompatible sizes".into()));
    }
    let j1 = g1.j(beta);
    let j2 = g2.j(beta);
    let o = normal_form_conjugator(&j1, &j2)?;
    let conjugacy_residual = linalg::max_abs(&(&o * &j1 * o.transpose() - &j2));
    let p1 = dense_hermitian(g1, beta, n, scale);
    let p2 = dense_hermitian(g2, beta, n, scale);
    let k = linalg::to_complex(&rotation_induced_map(&o, n));
    let operator_residual = crate::spectra::conjugation_residual_c(&p1, &p2, &k)?;
    Ok(ExactEquivalenceReport {
        truncation: n,
        conjugacy_residual,
        operator_residual,
        pass: conjugacy_residual <= tol && operator_residual <= tol,
    })
}

/// Interior-window comparison of two reduced operators at equal truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowComparison {
    pub first: WindowReport,
    pub second: WindowReport,
    pub deviations: Vec<f64>,
    /// 2 × max(Cauchy error of either side, `CAUCHY_FLOOR`) per eigenvalue.
    pub tolerances: Vec<f64>,
    pub pass: bool,
}

pub fn compare_windows(
    g1: &MetricGroup,
    g2: &MetricGroup,
    beta: &Vector,
    n: usize,
    count: usize,
    scale: Option<f64>,
) -> Result<WindowComparison> {
    let first = interior_window(g1, beta, n, count, scale)?;
    let second = interior_window(g2, beta, n, count, scale)?;
    let m = first.eigenvalues.len().min(second.eigenvalues.len());
    let deviations: Vec<f64> = (0..m).map(|i| (first.eigenvalues[i] - second.eigenvalues[i]).abs()).collect();
    let tolerances: Vec<f64> = (0..m)
        .map(|i| 2.0 * first.cauchy_errors[i].max(second.cauchy_errors[i]).max(CAUCHY_FLOOR))
        .collect();
    let pass = m == count && deviations.iter().zip(&tolerances).all(|(d, t)| d <= t);
    Ok(WindowComparison { first, second, deviations, tolerances, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::build_endo_space;
    use crate::rng::seeded;
    use crate::spectra::conjugation_residual_c;

    fn heisenberg() -> MetricGroup {
        MetricGroup::new(build_endo_space(&[Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])]).unwrap())
    }

    #[test]
    fn normal_form_reproduces_blocks() {
        let mut rng = seeded(3);
        let j = linalg::random_skew(5, &mut rng);
        let nf = skew_normal_form(&j);
        assert_eq!(nf.kernel_dim, 1);
        let t = nf.basis.transpose() * &j * &nf.basis;
        for (c, &a) in nf.frequencies.iter().enumerate() {
            assert!((t[(2 * c, 2 * c + 1)] - a).abs() < 1e-10);
            assert!((t[(2 * c + 1, 2 * c)] + a).abs() < 1e-10);
        }
        assert!(linalg::orth_residual(&nf.basis) < 1e-10);
    }

    #[test]
    fn sector_split_matches_dense_assembly() {
        let mut rng = seeded(8);
        let mats: Vec<Mat> = (0..2).map(|_| linalg::random_skew(3, &mut rng)).collect();
        let g = MetricGroup::new(build_endo_space(&mats).unwrap());
        let beta = Vector::from_vec(vec![0.3, -0.7]);
        let red = fourier_reduce(&g, &beta, 6, Some(1.3)).unwrap();
        assert!(red.band_width() <= 2);
        let dense = dense_hermitian(&g, &beta, 6, 1.3);
        let a = red.eigenvalues();
        let b = linalg::eigvalsh_hermitian(&dense);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn matched_scale_gives_landau_levels() {
        let g = heisenberg();
        let beta = Vector::from_vec(vec![1.0]);
        let s = PI.sqrt();
        let red = fourier_reduce(&g, &beta, 8, Some(s)).unwrap();
        let ev = red.eigenvalues();
        // lowest level 2π|β| + 4π²|β|²
        assert!((ev[0] - (2.0 * PI + 4.0 * PI * PI)).abs() < 1e-10);
    }

    #[test]
    fn rotation_map_intertwines_dense_operators() {
        let mut rng = seeded(5);
        let mats: Vec<Mat> = (0..2).map(|_| linalg::random_skew(3, &mut rng)).collect();
        let space = build_endo_space(&mats).unwrap();
        let o = linalg::random_orthogonal(3, &mut rng);
        let g1 = MetricGroup::new(space.clone());
        let g2 = MetricGroup::new(space.conjugated(&o));
        let beta = Vector::from_vec(vec![0.4, 0.9]);
        let p1 = dense_hermitian(&g1, &beta, 5, 1.0);
        let p2 = dense_hermitian(&g2, &beta, 5, 1.0);
        let k = linalg::to_complex(&rotation_induced_map(&o, 5));
        assert!(conjugation_residual_c(&p1, &p2, &k).unwrap() < 1e-12);
        assert!(linalg::orth_residual(&rotation_induced_map(&o, 5)) < 1e-12);
    }

    #[test]
    fn rejects_small_truncation() {
        assert!(fourier_reduce(&heisenberg(), &Vector::from_vec(vec![1.0]), 1, None).is_err());
    }
}
