//! Intertwining certificates: the operator families of the boundary
//! Laplacian assembled on both spaces over the harmonic truncation, and the
//! κ-conjugation residual of each family.

use super::dense::HarmonicBasis;
use super::ops::{d_op_matrix, mult_project_operator, KappaMap};
use crate::endospace::{rescale_to_unit, EndoSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use rayon::prelude::*;
use std::fmt::Write as _;

/// Pass threshold of every family residual.
pub const INTERTWINING_TOL: f64 = 1e-8;

/// The deformation data shared by both spaces: the distinguished index, the
/// unit parts of A and A′ and the κ map built from them.
#[derive(Debug, Clone)]
pub struct IntertwiningSetup {
    pub a_index: usize,
    pub first: EndoSpace,
    pub second: EndoSpace,
    pub kappa: KappaMap,
}

impl IntertwiningSetup {
    pub fn new(first: &EndoSpace, second: &EndoSpace, a_index: Option<usize>) -> Result<Self> {
        if first.k() != second.k() || first.l() != second.l() {
            return Err(Error::DimensionMismatch(format!(
                "(k,l) = ({},{}) vs ({},{})",
                first.k(),
                first.l(),
                second.k(),
                second.l()
            )));
        }
        let a_index = a_index
            .or(first.anticommutator_index())
            .or(second.anticommutator_index())
            .ok_or_else(|| Error::InvalidParameter("no distinguished anticommutator index".into()))?;
        if a_index >= first.l() {
            return Err(Error::IndexOutOfRange(a_index));
        }
        let mut f_list = Vec::new();
        for alpha in (0..first.l()).filter(|&a| a != a_index) {
            let d = linalg::max_abs(&(first.mat(alpha) - second.mat(alpha)));
            if d > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "perpendicular families differ at index {alpha} (max entry {d:.3e})"
                )));
            }
            f_list.push(first.mat(alpha).clone());
        }
        let (s, a0) = rescale_to_unit(first.mat(a_index))?;
        let (_, a0p) = rescale_to_unit(second.mat(a_index))?;
        let adapt = &s * &s;
        let kappa = KappaMap::new(&a0, &a0p, &f_list, Some(&adapt))?;
        Ok(Self { a_index, first: first.clone(), second: second.clone(), kappa })
    }
}

/// Block-sparse operator on ⊕_q 𝐇^{(q)}: ((out degree, in degree), matrix).
pub type GradedBlocks = Vec<((usize, usize), Mat)>;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResidual {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

/// ‖K P − P′ K‖_F / (‖K‖₂(‖P‖_F + ‖P′‖_F)) for block-diagonal K.
pub fn graded_residual(k_blocks: &[Mat], k_norm: f64, p: &GradedBlocks, p_prime: &GradedBlocks) -> f64 {
    let mut num = 0.0;
    let mut np = 0.0;
    let mut npp = 0.0;
    for (((o, i), a), ((o2, i2), b)) in p.iter().zip(p_prime) {
        debug_assert_eq!((o, i), (o2, i2));
        let r = &k_blocks[*o] * a - b * &k_blocks[*i];
        num += r.norm_squared();
        np += a.norm_squared();
        npp += b.norm_squared();
    }
    let den = k_norm * (np.sqrt() + npp.sqrt());
    if den == 0.0 {
        num.sqrt()
    } else {
        num.sqrt() / den
    }
}

/// Assembles a block operator into one dense matrix on ⊕_{q≤r_max} 𝐇^{(q)}.
pub fn assemble(basis: &HarmonicBasis, blocks: &GradedBlocks) -> Mat {
    let offsets: Vec<usize> = (0..=basis.max_degree())
        .scan(0, |acc, q| {
            let o = *acc;
            *acc += basis.dim(q);
            Some(o)
        })
        .collect();
    let n: usize = (0..=basis.max_degree()).map(|q| basis.dim(q)).sum();
    let mut m = Mat::zeros(n, n);
    for ((o, i), b) in blocks {
        let mut view = m.view_mut((offsets[*o], offsets[*i]), (b.nrows(), b.ncols()));
        view += b;
    }
    m
}

pub fn laplacian_blocks(basis: &HarmonicBasis) -> GradedBlocks {
    let k = basis.k() as f64;
    (0..=basis.max_degree())
        .map(|q| ((q, q), Mat::identity(basis.dim(q), basis.dim(q)) * -(q as f64 * (q as f64 + k - 2.0))))
        .collect()
}

pub fn derivation_blocks(basis: &HarmonicBasis, f: &Mat) -> GradedBlocks {
    (0..=basis.max_degree()).map(|q| ((q, q), d_op_matrix(basis, f, q))).collect()
}

/// Multiplication by ⟨QX, X⟩ followed by the spherical decomposition,
/// compressed to degrees ≤ r_max.
pub fn multiplication_blocks(basis: &HarmonicBasis, q_form: &Mat) -> Result<GradedBlocks> {
    let mut out = Vec::new();
    for r in 0..=basis.max_degree() {
        let op = mult_project_operator(basis, q_form, r)?;
        for (d, m) in op.blocks {
            out.push(((d, r), m));
        }
    }
    Ok(out)
}

fn combine(parts: &[(f64, &GradedBlocks)]) -> GradedBlocks {
    let mut out: GradedBlocks = Vec::new();
    for (w, blocks) in parts {
        for (key, m) in blocks.iter() {
            match out.iter_mut().find(|(k2, _)| k2 == key) {
                Some((_, acc)) => *acc += m * *w,
                None => out.push((*key, m * *w)),
            }
        }
    }
    out.sort_by_key(|(k, _)| *k);
    out
}

/// Matrices of κ on every degree and the largest deviation from orthogonality.
pub fn kappa_blocks(basis: &HarmonicBasis, kappa: &KappaMap) -> (Vec<Mat>, f64) {
    let blocks: Vec<Mat> = (0..=basis.max_degree()).into_par_iter().map(|q| kappa.matrix(basis, q)).collect();
    let orth = blocks.iter().map(linalg::orth_residual).fold(0.0, f64::max);
    (blocks, orth)
}

fn k_norm(blocks: &[Mat]) -> f64 {
    blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct IntertwiningReport {
    pub k: usize,
    pub l: usize,
    pub r_max: usize,
    pub truncation_dim: usize,
    pub tolerance: f64,
    pub kappa_conjugation_residual: f64,
    pub kappa_orthogonality_residual: f64,
    pub families: Vec<FamilyResidual>,
}

impl IntertwiningReport {
    pub fn pass(&self) -> bool {
        self.families.iter().all(|f| f.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.families.iter().map(|f| f.residual).fold(0.0, f64::max)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResidual> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "intertwining certificate: k = {}, l = {}, degrees ≤ {}", self.k, self.l, self.r_max);
        let _ = writeln!(s, "truncation dimension: {}", self.truncation_dim);
        let _ = writeln!(s, "tolerance: {:.1e}", self.tolerance);
        let _ = writeln!(s, "kappa conjugation residual |φA₀φᵀ − A₀′|: {:.3e}", self.kappa_conjugation_residual);
        let _ = writeln!(s, "kappa orthogonality residual: {:.3e}", self.kappa_orthogonality_residual);
        for f in &self.families {
            let _ = writeln!(s, "family {:<24} residual {:.3e}  {}", f.name, f.residual, if f.pass { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(s, "overall: {}", if self.pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// Builds the operator families of the boundary Laplacian on both spaces
/// over ⊕_{q≤r_max} 𝐇^{(q)} and measures their κ-conjugation residuals.
pub fn verify_intertwining(first: &EndoSpace, second: &EndoSpace, r_max: usize) -> Result<IntertwiningReport> {
    let setup = IntertwiningSetup::new(first, second, None)?;
    let basis = HarmonicBasis::new(first.k(), r_max, r_max + 2)?;
    verify_with(&setup, &basis)
}

pub fn verify_with(setup: &IntertwiningSetup, basis: &HarmonicBasis) -> Result<IntertwiningReport> {
    let (first, second) = (&setup.first, &setup.second);
    let (kb, orth) = kappa_blocks(basis, &setup.kappa);
    let kn = k_norm(&kb);
    let l = first.l();
    let a = setup.a_index;

    let mut jobs: Vec<(String, Mat, Mat, bool)> = Vec::new();
    for alpha in 0..l {
        jobs.push((format!("D[{alpha}]"), first.mat(alpha).clone(), second.mat(alpha).clone(), false));
    }
    let perp: Vec<usize> = (0..l).filter(|&x| x != a).collect();
    for (i, &c) in perp.iter().enumerate() {
        for &d in &perp[i..] {
            let q1 = first.mat(c).transpose() * first.mat(d);
            let q2 = second.mat(c).transpose() * second.mat(d);
            jobs.push((format!("M[{c},{d}]"), q1, q2, true));
        }
    }
    jobs.push((
        "|J_A X|^2".to_string(),
        first.mat(a).transpose() * first.mat(a),
        second.mat(a).transpose() * second.mat(a),
        true,
    ));

    let lap = laplacian_blocks(basis);
    let mut families = vec![FamilyResidual {
        name: "spherical Laplacian".into(),
        residual: graded_residual(&kb, kn, &lap, &lap),
        pass: false,
    }];
    let computed: Vec<Result<FamilyResidual>> = jobs
        .par_iter()
        .map(|(name, m1, m2, mult)| {
            let (p1, p2) = if *mult {
                (multiplication_blocks(basis, m1)?, multiplication_blocks(basis, m2)?)
            } else {
                (derivation_blocks(basis, m1), derivation_blocks(basis, m2))
            };
            Ok(FamilyResidual { name: name.clone(), residual: graded_residual(&kb, kn, &p1, &p2), pass: false })
        })
        .collect();
    for f in computed {
        families.push(f?);
    }
    for f in &mut families {
        f.pass = f.residual <= INTERTWINING_TOL;
    }
    Ok(IntertwiningReport {
        k: first.k(),
        l,
        r_max: basis.max_degree(),
        truncation_dim: (0..=basis.max_degree()).map(|q| basis.dim(q)).sum(),
        tolerance: INTERTWINING_TOL,
        kappa_conjugation_residual: setup.kappa.conjugation_residual,
        kappa_orthogonality_residual: orth,
        families,
    })
}

/// Pointwise coefficients of the angular part of the boundary Laplacian:
/// `scale`·(Δ_S + Σ_α w_α D_α + ¼ Σ_{αβ} w_α w_β ⟨J_αX, J_βX⟩), with
/// w_α the normal shift −𝛎_{Zα} and `scale` = t on the solvable extension
/// (1 on the nilpotent group).
#[derive(Debug, Clone, PartialEq)]
pub struct BundleSample {
    pub scale: f64,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BundleReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// κ-conjugation residual of the combined angular operator at each sample.
/// The multiplication term is Σ w_α w_β ⟨J_αX, J_βX⟩ = |J_w X|² with
/// J_w = Σ w_α J_α.
pub fn verify_bundle(setup: &IntertwiningSetup, basis: &HarmonicBasis, samples: &[BundleSample]) -> Result<BundleReport> {
    let (kb, _) = kappa_blocks(basis, &setup.kappa);
    let kn = k_norm(&kb);
    let lap = laplacian_blocks(basis);
    let residuals: Vec<Result<f64>> = samples
        .par_iter()
        .map(|s| {
            if s.weights.len() != setup.first.l() {
                return Err(Error::DimensionMismatch(format!("{} weights for l = {}", s.weights.len(), setup.first.l())));
            }
            let jw1 = setup.first.j_of(&s.weights);
            let jw2 = setup.second.j_of(&s.weights);
            let d1 = derivation_blocks(basis, &jw1);
            let d2 = derivation_blocks(basis, &jw2);
            let m1 = multiplication_blocks(basis, &(jw1.transpose() * &jw1))?;
            let m2 = multiplication_blocks(basis, &(jw2.transpose() * &jw2))?;
            let p1 = combine(&[(s.scale, &lap), (s.scale, &d1), (0.25 * s.scale, &m1)]);
            let p2 = combine(&[(s.scale, &lap), (s.scale, &d2), (0.25 * s.scale, &m2)]);
            Ok(graded_residual(&kb, kn, &p1, &p2))
        })
        .collect();
    let residuals = residuals.into_iter().collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(BundleReport { residuals, max_residual, tolerance: INTERTWINING_TOL, pass: max_residual <= INTERTWINING_TOL })
}
