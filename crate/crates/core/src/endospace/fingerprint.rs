//! Conjugation-invariant fingerprints of endomorphism spaces.

use super::EndoSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

const RANK_TOL: f64 = 1e-9;
const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprints {
    /// Dimension of the matrix Lie algebra generated by the basis.
    pub lie_algebra_dim: usize,
    /// Sorted eigenvalues of Σ_α J_α².
    pub casimir_spectrum: Vec<f64>,
    /// Sorted eigenvalues of H_𝐯(X,X*) = Σ_α ⟨J_αX, J_αX*⟩.
    pub h_v_spectrum: Vec<f64>,
    /// Sorted eigenvalues of H_𝐳(Z,Z*) = Σ_i ⟨J_Z E_i, J_Z* E_i⟩.
    pub h_z_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    Distinguished,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonconjugacyReport {
    pub verdict: ConjugacyVerdict,
    pub first: Fingerprints,
    pub second: Fingerprints,
    /// Names of the fingerprints that differ.
    pub differing: Vec<&'static str>,
}

fn vectorize(m: &Mat) -> Vector {
    Vector::from_iterator(m.len(), m.iter().copied())
}

/// Closes the basis under commutators and returns the dimension of the
/// generated Lie algebra.
pub fn generated_lie_algebra_dim(space: &EndoSpace) -> usize {
    let k = space.k();
    let mut elems: Vec<Mat> = Vec::new();
    let mut ortho: Vec<Vector> = Vec::new();
    let scale = space.mats().iter().map(linalg::fro).fold(1.0, f64::max);
    let try_add = |m: Mat, elems: &mut Vec<Mat>, ortho: &mut Vec<Vector>| -> bool {
        let mut v = vectorize(&m);
        for _ in 0..2 {
            for b in ortho.iter() {
                let p = b.dot(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > RANK_TOL * scale {
            ortho.push(v / n);
            elems.push(m);
            true
        } else {
            false
        }
    };
    for m in space.mats() {
        try_add(m, &mut elems, &mut ortho);
    }
    let mut frontier = 0;
    while frontier < elems.len() && elems.len() < k * k {
        let current = elems.len();
        for i in frontier..current {
            for j in 0..i {
                let c = linalg::commutator(&elems[i], &elems[j]);
                try_add(c, &mut elems, &mut ortho);
            }
        }
        frontier = current;
    }
    elems.len()
}

pub fn fingerprints(space: &EndoSpace) -> Fingerprints {
    let k = space.k();
    let l = space.l();
    let mut casimir = Mat::zeros(k, k);
    for m in space.mats() {
        casimir += &m * &m;
    }
    let h_v = -&casimir;
    let mut h_z = Mat::zeros(l, l);
    for a in 0..l {
        for b in 0..l {
            h_z[(a, b)] = -(space.mat(a) * space.mat(b)).trace();
        }
    }
    Fingerprints {
        lie_algebra_dim: generated_lie_algebra_dim(space),
        casimir_spectrum: linalg::eigh(&casimir).0,
        h_v_spectrum: linalg::eigh(&h_v).0,
        h_z_spectrum: linalg::eigh(&h_z).0,
    }
}

fn spectra_differ(a: &[f64], b: &[f64]) -> bool {
    a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).abs() > SPECTRUM_TOL * (1.0 + x.abs()))
}

/// One-sided conjugacy test: reports DISTINGUISHED when some invariant
/// differs, INCONCLUSIVE otherwise. It never asserts conjugacy.
pub fn nonconjugacy_certificate(s1: &EndoSpace, s2: &EndoSpace) -> Result<NonconjugacyReport> {
    if s1.k() != s2.k() || s1.l() != s2.l() {
        return Err(Error::DimensionMismatch(format!(
            "(k,l) = ({},{}) vs ({},{})",
            s1.k(),
            s1.l(),
            s2.k(),
            s2.l()
        )));
    }
    let first = fingerprints(s1);
    let second = fingerprints(s2);
    let mut differing = Vec::new();
    if first.lie_algebra_dim != second.lie_algebra_dim {
        differing.push("lie_algebra_dim");
    }
    if spectra_differ(&first.casimir_spectrum, &second.casimir_spectrum) {
        differing.push("casimir_spectrum");
    }
    if spectra_differ(&first.h_v_spectrum, &second.h_v_spectrum) {
        differing.push("h_v_spectrum");
    }
    if spectra_differ(&first.h_z_spectrum, &second.h_z_spectrum) {
        differing.push("h_z_spectrum");
    }
    let verdict = if differing.is_empty() { ConjugacyVerdict::Inconclusive } else { ConjugacyVerdict::Distinguished };
    Ok(NonconjugacyReport { verdict, first, second, differing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::clifford_space;

    #[test]
    fn identical_spaces_are_inconclusive() {
        let s = clifford_space(3, 1, 1).unwrap();
        let r = nonconjugacy_certificate(&s, &s).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::Inconclusive);
        assert_eq!(r.first, r.second);
    }

    #[test]
    fn one_one_and_two_zero_differ_in_generated_algebra() {
        let s11 = clifford_space(3, 1, 1).unwrap();
        let s20 = clifford_space(3, 2, 0).unwrap();
        let r = nonconjugacy_certificate(&s11, &s20).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::Distinguished);
        assert_eq!(r.differing, vec!["lie_algebra_dim"]);
        assert_eq!(r.second.lie_algebra_dim, 3);
        // diag(L_i, ∓L_i), diag(L_j, L_j), diag(L_k, L_k) generate so(3) ⊕ so(3).
        assert_eq!(r.first.lie_algebra_dim, 6);
    }

    #[test]
    fn order_swapped_multiplicities_are_inconclusive() {
        let s12 = clifford_space(3, 1, 2).unwrap();
        let s21 = clifford_space(3, 2, 1).unwrap();
        let r = nonconjugacy_certificate(&s12, &s21).unwrap();
        assert_eq!(r.verdict, ConjugacyVerdict::Inconclusive);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let a = clifford_space(3, 1, 0).unwrap();
        let b = clifford_space(3, 1, 1).unwrap();
        assert!(matches!(nonconjugacy_certificate(&a, &b), Err(Error::DimensionMismatch(_))));
    }
}
