//! Joint normal form of an anticommutator and its perpendicular family.

use super::{is_anticommutator, pauli_blocks, unit_coeffs, EndoSpace, SkewEndo};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

/// Eigenvalue clusters of −A² closer than this are merged.
const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct JordanForm {
    /// Orthogonal matrix whose columns are the adapted basis.
    pub basis_change: Mat,
    /// (a_c, m_c): A acts as a_c·𝐢 on an m_c-dimensional block (m_c/2
    /// consecutive 2×2 blocks).
    pub block_sizes: Vec<(f64, usize)>,
    pub transformed_a: SkewEndo,
    pub transformed_perp: Vec<SkewEndo>,
}

/// Brings the anticommutator `a_index` into block form diag(a_c 𝐢) and
/// every perpendicular basis element into 2×2 blocks j𝐣 + k𝐤.
pub fn jordan_normalize(space: &EndoSpace, a_index: usize) -> Result<JordanForm> {
    let l = space.l();
    if a_index >= l {
        return Err(Error::IndexOutOfRange(a_index));
    }
    let chk = is_anticommutator(space, &unit_coeffs(l, a_index))?;
    if chk.residual > super::STRUCT_TOL {
        return Err(Error::NotAnticommutator(chk.residual));
    }
    let k = space.k();
    let a = space.mat(a_index);
    let (vals, vecs) = linalg::eigh(&(-(a * a)));
    // Group eigenvalues of −A² into clusters (ascending).
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match clusters.last_mut() {
            Some((rep, idx)) if (v - *rep).abs() <= CLUSTER_TOL * (1.0 + rep.abs()) => idx.push(i),
            _ => clusters.push((v, vec![i])),
        }
    }
    // Non-degenerate clusters first in descending a_c, kernel last.
    clusters.reverse();
    let mut columns: Vec<Vector> = Vec::with_capacity(k);
    let mut block_sizes = Vec::new();
    for (rep, idx) in &clusters {
        let ac = rep.max(0.0).sqrt();
        let eig: Vec<Vector> = idx.iter().map(|&i| vecs.column(i).into_owned()).collect();
        if ac <= CLUSTER_TOL.sqrt() {
            columns.extend(linalg::orthonormal_span(&eig, 1e-8));
            block_sizes.push((0.0, idx.len()));
            continue;
        }
        let unit = a / ac;
        let mut local: Vec<Vector> = Vec::new();
        for v in eig {
            let mut w = v;
            for _ in 0..2 {
                for b in &local {
                    let p = b.dot(&w);
                    w -= b * p;
                }
            }
            let nw = w.norm();
            if nw > 1e-6 {
                let w = w / nw;
                let partner = -(&unit * &w);
                local.push(w);
                local.push(partner);
            }
        }
        block_sizes.push((ac, local.len()));
        columns.extend(local);
    }
    if columns.len() != k {
        return Err(Error::SingularTruncation(format!(
            "adapted basis has {} vectors for k = {k}",
            columns.len()
        )));
    }
    let q = linalg::columns_to_mat(&columns, k);
    let transformed_a = SkewEndo::from_trusted(q.transpose() * a * &q);
    let transformed_perp = (0..l)
        .filter(|&b| b != a_index)
        .map(|b| SkewEndo::from_trusted(q.transpose() * space.mat(b) * &q))
        .collect();
    Ok(JordanForm { basis_change: q, block_sizes, transformed_a, transformed_perp })
}

impl JordanForm {
    /// Largest deviation from the block pattern: A must be diag(a_c 𝐢) and
    /// each perpendicular element must have 2×2 blocks in span{𝐣, 𝐤} inside
    /// the non-degenerate clusters and vanish between different clusters.
    pub fn structure_residual(&self) -> f64 {
        let [_, i, j, kk] = pauli_blocks();
        let n = self.transformed_a.dim();
        let mut expect_a = Mat::zeros(n, n);
        let mut owner = vec![0usize; n / 2];
        let mut pos = 0;
        for (c, (ac, m)) in self.block_sizes.iter().enumerate() {
            for _ in 0..*m / 2 {
                expect_a.view_mut((2 * pos, 2 * pos), (2, 2)).copy_from(&(&i * *ac));
                owner[pos] = c;
                pos += 1;
            }
        }
        let mut worst = linalg::max_abs(&(self.transformed_a.mat() - expect_a));
        for f in &self.transformed_perp {
            let fm = f.mat();
            for p in 0..n / 2 {
                for q in 0..n / 2 {
                    let blk = fm.view((2 * p, 2 * q), (2, 2)).into_owned();
                    if owner[p] != owner[q] {
                        worst = worst.max(linalg::max_abs(&blk));
                        continue;
                    }
                    if self.block_sizes[owner[p]].0 == 0.0 {
                        continue;
                    }
                    let cj = (&blk.component_mul(&j)).sum() / 2.0;
                    let ck = (&blk.component_mul(&kk)).sum() / 2.0;
                    let rest = &blk - &j * cj - &kk * ck;
                    worst = worst.max(linalg::max_abs(&rest));
                }
            }
        }
        worst
    }

    /// Maps the normal form back: Q·(transformed)·Qᵀ.
    pub fn reconstruct(&self) -> (Mat, Vec<Mat>) {
        let q = &self.basis_change;
        let a = q * self.transformed_a.mat() * q.transpose();
        let perp = self.transformed_perp.iter().map(|f| q * f.mat() * q.transpose()).collect();
        (a, perp)
    }
}
