//! Invariant block decomposition of the curvature operator for groups
//! built from σ^{(a,b)}-deformed replicated modules, and the set versus
//! multiset comparison of their spectra.
//!
//! The X-space is a product of a + b copies of ℝⁿ in construction order;
//! the first a copies form 𝐯^{(a)}, the last b copies 𝐯^{(b)}. Blocks:
//! mixed boxes F(r,s) = 𝐯_r^{(a)}∧𝐯_s^{(b)}, off-diagonal boxes
//! 𝐯_p∧𝐯_q (p ≠ q on the same side), the diagonal part Dg (each copy
//! wedged with itself, plus 𝐳∧𝐳), and G = 𝐯∧𝐳. On the solvable
//! extension the curvature maps 𝐯∧𝐳 into 𝐯∧𝐭, so G, Dg and 𝐧∧𝐭 form
//! one block there.

use super::SolvGroup;
use crate::algebra::wedge_pairs;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::nilgeom::MetricGroup;
use crate::spectra::{compare_spectra, eigs_sym, CompareMode, SpectrumComparison, SpectrumReport, CLUSTER_TOL};
use rayon::prelude::*;

/// Off-block coupling above this is a construction or convention error.
pub const BLOCK_TOL: f64 = 1e-9;
/// Value-set tolerance of the isotonality verdict.
pub const SET_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxLayout {
    pub module_dim: usize,
    pub a: usize,
    pub b: usize,
}

impl BoxLayout {
    pub fn copies(&self) -> usize {
        self.a + self.b
    }

    fn copy_range(&self, r: usize) -> std::ops::Range<usize> {
        r * self.module_dim..(r + 1) * self.module_dim
    }
}

/// A group together with its box layout; `c` selects the solvable
/// extension.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotonalInput {
    pub group: MetricGroup,
    pub layout: BoxLayout,
    pub c: Option<f64>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpectrum {
    pub name: String,
    pub dim: usize,
    pub off_block_residual: f64,
    pub spectrum: SpectrumReport,
}

/// Mixed-box relation: F-box spectrum {ν_i} against an off-diagonal-box
/// spectrum {μ_i}, fitted as μ_i = −2Q² − ν_i (reflection about −Q²).
#[derive(Debug, Clone, PartialEq)]
pub struct MixedBoxReport {
    pub q_squared: f64,
    /// Max |ν_i + μ_i + 2Q²| after pairing ascending ν with descending μ.
    pub reflection_residual: f64,
    /// Same with Q² = 0 (reflection about the origin).
    pub zero_reflection_residual: f64,
    /// Spread of spectra across all F boxes and across all off-diagonal boxes.
    pub box_uniformity_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpectra {
    pub label: String,
    pub blocks: Vec<BlockSpectrum>,
    pub total: SpectrumReport,
    /// Solvable case: coupling of 𝐯∧𝐳 to its complement.
    pub g_alone_residual: Option<f64>,
    pub mixed_box: Option<MixedBoxReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotonalReport {
    pub first: GroupSpectra,
    pub second: GroupSpectra,
    pub set: SpectrumComparison,
    pub multiset: SpectrumComparison,
    pub ambiguous: bool,
    pub max_block_residual: f64,
}

impl IsotonalReport {
    /// Equal as sets, different as multisets.
    pub fn strictly_isotonal(&self) -> bool {
        self.set.pass && !self.multiset.pass
    }
}

struct Block {
    name: String,
    pairs: Vec<usize>,
}

fn curvature_matrix(input: &IsotonalInput) -> Result<Mat> {
    match input.c {
        None => Ok(input.group.curvature_operator()),
        Some(c) => Ok(SolvGroup::new(input.group.clone(), c)?.curvature_operator_c()),
    }
}

fn build_blocks(layout: &BoxLayout, k: usize, l: usize, solvable: bool) -> (Vec<Block>, Vec<usize>) {
    let n = k + l + usize::from(solvable);
    let pairs = wedge_pairs(n);
    let pos = |i: usize, j: usize| pairs.binary_search(&(i.min(j), i.max(j))).expect("pair exists");
    let cross = |r: usize, s: usize| -> Vec<usize> {
        let mut v = Vec::new();
        for i in layout.copy_range(r) {
            for j in layout.copy_range(s) {
                v.push(pos(i, j));
            }
        }
        v.sort_unstable();
        v
    };
    let mut blocks = Vec::new();
    for r in 0..layout.a {
        for s in layout.a..layout.copies() {
            blocks.push(Block { name: format!("F({r},{s})"), pairs: cross(r, s) });
        }
    }
    for (lo, hi) in [(0, layout.a), (layout.a, layout.copies())] {
        for p in lo..hi {
            for q in (p + 1)..hi {
                blocks.push(Block { name: format!("Dg_perp({p},{q})"), pairs: cross(p, q) });
            }
        }
    }
    let mut dg = Vec::new();
    for r in 0..layout.copies() {
        let range = layout.copy_range(r);
        for i in range.clone() {
            for j in (i + 1)..range.end {
                dg.push(pos(i, j));
            }
        }
    }
    for a in k..(k + l) {
        for b in (a + 1)..(k + l) {
            dg.push(pos(a, b));
        }
    }
    let mut g = Vec::new();
    for i in 0..k {
        for a in k..(k + l) {
            g.push(pos(i, a));
        }
    }
    g.sort_unstable();
    if solvable {
        let t = k + l;
        let mut merged = dg;
        merged.extend(g.iter().copied());
        merged.extend((0..t).map(|i| pos(i, t)));
        merged.sort_unstable();
        blocks.push(Block { name: "Dg+G+n^t".into(), pairs: merged });
    } else {
        dg.sort_unstable();
        blocks.push(Block { name: "Dg".into(), pairs: dg });
        blocks.push(Block { name: "G".into(), pairs: g.clone() });
    }
    (blocks, g)
}

fn off_block_residual(m: &Mat, rows: &[usize]) -> f64 {
    let mut inside = vec![false; m.nrows()];
    for &r in rows {
        inside[r] = true;
    }
    let mut worst: f64 = 0.0;
    for &r in rows {
        for c in 0..m.ncols() {
            if !inside[c] {
                worst = worst.max(m[(r, c)].abs());
            }
        }
    }
    worst
}

fn restrict(m: &Mat, idx: &[usize]) -> Mat {
    Mat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

fn mixed_box_report(blocks: &[BlockSpectrum]) -> Option<MixedBoxReport> {
    let f: Vec<&BlockSpectrum> = blocks.iter().filter(|b| b.name.starts_with("F(")).collect();
    let d: Vec<&BlockSpectrum> = blocks.iter().filter(|b| b.name.starts_with("Dg_perp(")).collect();
    if f.is_empty() || d.is_empty() {
        return None;
    }
    let spread = |group: &[&BlockSpectrum]| -> f64 {
        let base = &group[0].spectrum.raw;
        group
            .iter()
            .flat_map(|b| b.spectrum.raw.iter().zip(base).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    };
    let nu = &f[0].spectrum.raw;
    let mu: Vec<f64> = d[0].spectrum.raw.iter().rev().copied().collect();
    let sums: Vec<f64> = nu.iter().zip(&mu).map(|(a, b)| a + b).collect();
    let q2 = -sums.iter().sum::<f64>() / (2.0 * sums.len() as f64);
    Some(MixedBoxReport {
        q_squared: q2,
        reflection_residual: sums.iter().map(|s| (s + 2.0 * q2).abs()).fold(0.0, f64::max),
        zero_reflection_residual: sums.iter().map(|s| s.abs()).fold(0.0, f64::max),
        box_uniformity_residual: spread(&f).max(spread(&d)),
    })
}

/// Block spectra of one group.
pub fn group_spectra(input: &IsotonalInput) -> Result<GroupSpectra> {
    let (k, l) = (input.group.k(), input.group.l());
    let lay = input.layout;
    if lay.module_dim == 0 || lay.module_dim * lay.copies() != k {
        return Err(Error::DimensionMismatch(format!(
            "layout {}×({}+{}) does not cover k = {k}",
            lay.module_dim, lay.a, lay.b
        )));
    }
    let m = curvature_matrix(input)?;
    let (blocks, g_pairs) = build_blocks(&lay, k, l, input.c.is_some());
    let block_spectra: Vec<BlockSpectrum> = blocks
        .par_iter()
        .map(|b| {
            let sub = restrict(&m, &b.pairs);
            let spectrum = eigs_sym(&sub, &b.name)?;
            Ok(BlockSpectrum {
                name: b.name.clone(),
                dim: b.pairs.len(),
                off_block_residual: off_block_residual(&m, &b.pairs),
                spectrum,
            })
        })
        .collect::<Result<_>>()?;
    let covered: usize = block_spectra.iter().map(|b| b.dim).sum();
    if covered != m.nrows() {
        return Err(Error::DimensionMismatch(format!("blocks cover {covered} of {} 2-vectors", m.nrows())));
    }
    if let Some(bad) = block_spectra.iter().find(|b| b.off_block_residual > BLOCK_TOL) {
        return Err(Error::BlockNotInvariant(bad.off_block_residual));
    }
    let all: Vec<f64> = block_spectra.iter().flat_map(|b| b.spectrum.raw.iter().copied()).collect();
    let total = SpectrumReport::from_eigenvalues(&input.label, all, CLUSTER_TOL);
    let g_alone_residual = input.c.map(|_| off_block_residual(&m, &g_pairs));
    let mixed_box = mixed_box_report(&block_spectra);
    Ok(GroupSpectra { label: input.label.clone(), blocks: block_spectra, total, g_alone_residual, mixed_box })
}

/// Decomposes both curvature operators, checks block invariance and
/// compares the total spectra as sets and as multisets.
pub fn isotonal_decomposition(first: &IsotonalInput, second: &IsotonalInput) -> Result<IsotonalReport> {
    let (s1, s2) = rayon::join(|| group_spectra(first), || group_spectra(second));
    let (s1, s2) = (s1?, s2?);
    let set = compare_spectra(&s1.total, &s2.total, CompareMode::Set, SET_TOL);
    let multiset = compare_spectra(&s1.total, &s2.total, CompareMode::Multiset, SET_TOL);
    let ambiguous = s1.total.is_ambiguous() || s2.total.is_ambiguous();
    let max_block_residual =
        s1.blocks.iter().chain(&s2.blocks).map(|b| b.off_block_residual).fold(0.0, f64::max);
    Ok(IsotonalReport { first: s1, second: s2, set, multiset, ambiguous, max_block_residual })
}

/// Residual of the sign flip τ (−1 on 𝐯^{(b)}∧𝐯^{(b)} and 𝐯^{(b)}∧𝐭,
/// +1 elsewhere) as an intertwiner between the curvature operators of
/// two solvable groups on the listed 2-vector indices.
pub fn sign_flip_residual(m1: &Mat, m2: &Mat, flipped: &[usize], block: &[usize]) -> f64 {
    let n = m1.nrows();
    let mut tau = Mat::identity(n, n);
    for &i in flipped {
        tau[(i, i)] = -1.0;
    }
    let t = restrict(&tau, block);
    let a = restrict(m1, block);
    let b = restrict(m2, block);
    linalg::max_abs(&(&t * a * &t - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::clifford_space;

    fn input(l: usize, a: usize, b: usize, c: Option<f64>) -> IsotonalInput {
        let space = clifford_space(l, a, b).unwrap();
        let n = space.k() / (a + b);
        IsotonalInput {
            group: MetricGroup::new(space),
            layout: BoxLayout { module_dim: n, a, b },
            c,
            label: format!("{l}:{a},{b}"),
        }
    }

    #[test]
    fn identical_groups_agree_as_multisets() {
        let r = isotonal_decomposition(&input(3, 1, 1, None), &input(3, 1, 1, None)).unwrap();
        assert!(r.multiset.pass && r.set.pass);
        assert!(r.max_block_residual <= BLOCK_TOL);
    }

    #[test]
    fn layout_must_cover_x_space() {
        let mut bad = input(3, 1, 1, None);
        bad.layout.module_dim = 3;
        assert!(matches!(group_spectra(&bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn solvable_vz_block_couples_to_vt() {
        let s = group_spectra(&input(3, 1, 1, Some(1.0))).unwrap();
        assert!(s.g_alone_residual.unwrap() > 0.1);
    }
}
