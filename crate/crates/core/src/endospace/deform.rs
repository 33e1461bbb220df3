//! σ-deformations of an endomorphism space.

use super::{require_anticommutator, EndoSpace, STRUCT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// σ^{(a,b)} on ℝ^{n(a+b)}: identity on the first a copies of ℝⁿ, minus
/// identity on the last b.
pub fn sigma_ab_matrix(n: usize, a: usize, b: usize) -> Mat {
    let mut m = Mat::identity(n * (a + b), n * (a + b));
    for i in (n * a)..(n * (a + b)) {
        m[(i, i)] = -1.0;
    }
    m
}

/// The space ESW_A^{(a,b)}: every basis element replicated diagonally over
/// a + b copies, with the anticommutator negated on the last b copies.
pub fn sigma_ab_deform(space: &EndoSpace, a_index: usize, a: usize, b: usize) -> Result<EndoSpace> {
    if a + b == 0 {
        return Err(Error::InvalidMultiplicity);
    }
    require_anticommutator(space, a_index)?;
    let mats: Vec<Mat> = (0..space.l())
        .map(|alpha| {
            let m = space.mat(alpha);
            let blocks: Vec<Mat> = (0..a + b)
                .map(|copy| if alpha == a_index && copy >= a { -m } else { m.clone() })
                .collect();
            linalg::block_diag(&blocks)
        })
        .collect();
    let mut out = super::build_endo_space(&mats)?.with_anticommutator(a_index);
    for lab in space.labels() {
        out = out.with_label(lab);
    }
    if b > 0 {
        out = out.with_label("sigma-deformed");
    }
    Ok(out)
}

/// Replaces the anticommutator A by σ∘A, leaving the other basis elements
/// unchanged. σ must be an orthogonal involution commuting with the basis.
pub fn sigma_a_deform(space: &EndoSpace, a_index: usize, sigma: &Mat) -> Result<EndoSpace> {
    let k = space.k();
    if sigma.nrows() != k || sigma.ncols() != k {
        return Err(Error::DimensionMismatch(format!("sigma must be {k}×{k}")));
    }
    require_anticommutator(space, a_index)?;
    let id = Mat::identity(k, k);
    let inv = linalg::max_abs(&(sigma * sigma - &id));
    if inv > STRUCT_TOL {
        return Err(Error::BadSigma(format!("not involutive (residual {inv:.3e})")));
    }
    let orth = linalg::orth_residual(sigma);
    if orth > STRUCT_TOL {
        return Err(Error::BadSigma(format!("not orthogonal (residual {orth:.3e})")));
    }
    for alpha in 0..space.l() {
        let c = linalg::max_abs(&linalg::commutator(sigma, space.mat(alpha)));
        if c > STRUCT_TOL {
            return Err(Error::BadSigma(format!("not commuting with basis element {alpha} (residual {c:.3e})")));
        }
    }
    let deformed = sigma * space.mat(a_index);
    Ok(space.with_replaced(a_index, deformed)?.with_label("sigma-deformed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::clifford_space;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn one_zero_is_an_identical_copy() {
        let s = clifford_space(3, 1, 0).unwrap();
        let d = sigma_ab_deform(&s, 0, 1, 0).unwrap();
        assert_eq!(d.mats(), s.mats());
    }

    #[test]
    fn squares_agree_across_deformations() {
        let base = clifford_space(3, 1, 0).unwrap();
        let s11 = sigma_ab_deform(&base, 0, 1, 2).unwrap();
        let s20 = sigma_ab_deform(&base, 0, 3, 0).unwrap();
        let mut rng = seeded(5);
        for _ in 0..10 {
            let f: Vec<f64> = (0..3).map(|i| if i == 0 { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
            let c: f64 = rng.random_range(-2.0..2.0);
            let mut z = f.clone();
            z[0] = c;
            let m1 = s11.j_of(&z);
            let m2 = s20.j_of(&z);
            assert!(linalg::max_abs(&(&m1 * &m1 - &m2 * &m2)) < 1e-12);
        }
    }

    #[test]
    fn sigma_matrix_maps_replicated_anticommutator() {
        let base = clifford_space(3, 1, 0).unwrap();
        let s21 = sigma_ab_deform(&base, 0, 2, 1).unwrap();
        let s30 = sigma_ab_deform(&base, 0, 3, 0).unwrap();
        let sigma = sigma_ab_matrix(4, 2, 1);
        assert_eq!(&sigma * s30.mat(0), *s21.mat(0));
        let via = sigma_a_deform(&s30, 0, &sigma).unwrap();
        assert_eq!(via.mats(), s21.mats());
    }

    #[test]
    fn identity_and_minus_identity_sigma() {
        let s = clifford_space(3, 1, 1).unwrap();
        let id = Mat::identity(8, 8);
        assert_eq!(sigma_a_deform(&s, 0, &id).unwrap().mats(), s.mats());
        let neg = sigma_a_deform(&s, 0, &(-&id)).unwrap();
        assert_eq!(neg.mat(0), &(-s.mat(0)));
        assert_eq!(neg.mat(1), s.mat(1));
    }

    #[test]
    fn bad_sigma_reasons() {
        let s = clifford_space(3, 1, 1).unwrap();
        let mut not_inv = Mat::identity(8, 8);
        not_inv[(0, 0)] = 2.0;
        assert!(matches!(sigma_a_deform(&s, 0, &not_inv), Err(Error::BadSigma(r)) if r.contains("involutive")));
        let swap = {
            let mut m = Mat::zeros(8, 8);
            for i in 0..4 {
                m[(i, i + 4)] = 1.0;
                m[(i + 4, i)] = 1.0;
            }
            m
        };
        // Swapping the copies is an orthogonal involution that does not
        // commute with the sign-flipped anticommutator.
        assert!(matches!(sigma_a_deform(&s, 0, &swap), Err(Error::BadSigma(r)) if r.contains("commuting")));
    }

    #[test]
    fn swapping_a_and_b_is_a_coordinate_permutation() {
        let base = clifford_space(3, 1, 0).unwrap();
        let s12 = sigma_ab_deform(&base, 0, 1, 2).unwrap();
        let s21 = sigma_ab_deform(&base, 0, 2, 1).unwrap();
        // Negating the Z-axis of A and moving the first copy to the last
        // position maps (A, −A, −A) to (A, A, −A).
        let n = 4;
        let mut perm = Mat::zeros(12, 12);
        let target = [2usize, 0, 1];
        for (src, &dst) in target.iter().enumerate() {
            for i in 0..n {
                perm[(dst * n + i, src * n + i)] = 1.0;
            }
        }
        assert_eq!(&perm * (-s12.mat(0)) * perm.transpose(), *s21.mat(0));
        for alpha in 1..3 {
            assert_eq!(&perm * s12.mat(alpha) * perm.transpose(), *s21.mat(alpha));
        }
    }
}
