//! Endomorphism spaces with anticommutators: construction, validation,
//! deformations and conjugacy tests.

mod clifford;
mod conjugator;
mod deform;
mod fingerprint;
mod io;
mod jordan;

pub use clifford::{cayley_right_product, clifford_dimension, clifford_space, irreducible_clifford, quaternion_left};
pub use conjugator::{quaternionic_sigma_conjugator, random_unit_instance, unit_endo_conjugator, UnitEndoConjugator};
pub use deform::{sigma_a_deform, sigma_ab_deform, sigma_ab_matrix};
pub use fingerprint::{nonconjugacy_certificate, ConjugacyVerdict, Fingerprints, NonconjugacyReport};
pub use io::{parse_endo_space, write_endo_space};
pub use jordan::{jordan_normalize, JordanForm};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use rand::Rng;

/// Tolerance for skewness of floating input.
pub const SKEW_TOL: f64 = 1e-12;
/// Tolerance for structural identities (anticommutation, involutions).
pub const STRUCT_TOL: f64 = 1e-10;
/// Tolerance for eigenvalue comparisons.
pub const EIGEN_TOL: f64 = 1e-9;

/// A skew-symmetric k×k matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndo {
    mat: Mat,
}

impl SkewEndo {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare(0));
        }
        if linalg::skew_residual(&mat) > SKEW_TOL {
            return Err(Error::NonSkew(0));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix already known to be skew (integer constructors and
    /// internal combinations of skew matrices).
    pub(crate) fn from_trusted(mat: Mat) -> Self {
        debug_assert!(linalg::skew_residual(&mat) <= 1e-9);
        Self { mat }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }
}

/// Basis J₁..J_l of skew endomorphisms on ℝ^k; the basis is declared
/// orthonormal for the Z-space inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoSpace {
    k: usize,
    basis: Vec<SkewEndo>,
    labels: Vec<String>,
    anticommutator: Option<usize>,
}

/// Validates a list of matrices as a basis of skew endomorphisms.
pub fn build_endo_space(mats: &[Mat]) -> Result<EndoSpace> {
    if mats.is_empty() {
        return Err(Error::DimensionMismatch("empty basis".into()));
    }
    let k = mats[0].nrows();
    for (i, m) in mats.iter().enumerate() {
        if m.nrows() != k || m.ncols() != k {
            return Err(Error::NotSquare(i));
        }
        if linalg::skew_residual(m) > SKEW_TOL {
            return Err(Error::NonSkew(i));
        }
    }
    let l = mats.len();
    let mut stacked = Mat::zeros(k * k, l);
    for (j, m) in mats.iter().enumerate() {
        for (r, x) in m.iter().enumerate() {
            stacked[(r, j)] = *x;
        }
    }
    let rank = linalg::rank(&stacked, 1e-10);
    if rank < l {
        return Err(Error::DependentBasis { rank, expected: l });
    }
    let nondegenerate = mats.iter().any(|m| linalg::singular_values(m)[0] > STRUCT_TOL);
    if nondegenerate && k % 2 == 1 {
        return Err(Error::OddDimension(k));
    }
    let basis = mats
        .iter()
        .map(|m| SkewEndo::from_trusted((m - m.transpose()) * 0.5))
        .collect();
    Ok(EndoSpace { k, basis, labels: Vec::new(), anticommutator: None })
}

/// Builds the space from a basis with a non-identity Gram matrix on the
/// Z-space by passing to the orthonormal basis J̃ = Σ (G^{-1/2})_{βα} J_β.
pub fn build_endo_space_with_gram(mats: &[Mat], gram: &Mat) -> Result<EndoSpace> {
    let l = mats.len();
    if gram.nrows() != l || gram.ncols() != l {
        return Err(Error::DimensionMismatch("Gram matrix size differs from basis length".into()));
    }
    let (vals, vecs) = linalg::eigh(gram);
    if vals.first().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::InvalidParameter("Gram matrix not positive definite".into()));
    }
    let inv_sqrt = &vecs
        * Mat::from_diagonal(&Vector::from_iterator(l, vals.iter().map(|v| 1.0 / v.sqrt())))
        * vecs.transpose();
    let k = mats.first().map(|m| m.nrows()).unwrap_or(0);
    let ortho: Vec<Mat> = (0..l)
        .map(|a| {
            let mut acc = Mat::zeros(k, k);
            for (b, m) in mats.iter().enumerate() {
                acc += m * inv_sqrt[(b, a)];
            }
            acc
        })
        .collect();
    build_endo_space(&ortho)
}

impl EndoSpace {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SkewEndo] {
        &self.basis
    }

    pub fn mat(&self, alpha: usize) -> &Mat {
        self.basis[alpha].mat()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn anticommutator_index(&self) -> Option<usize> {
        self.anticommutator
    }

    pub fn with_label(mut self, label: &str) -> Self {
        if !self.labels.iter().any(|x| x == label) {
            self.labels.push(label.to_string());
        }
        self
    }

    pub fn with_anticommutator(mut self, index: usize) -> Self {
        self.anticommutator = Some(index);
        self
    }

    /// J_Z = Σ z_α J_α.
    pub fn j_of(&self, z: &[f64]) -> Mat {
        assert_eq!(z.len(), self.l());
        let mut out = Mat::zeros(self.k, self.k);
        for (zi, b) in z.iter().zip(&self.basis) {
            if *zi != 0.0 {
                out += b.mat() * *zi;
            }
        }
        out
    }

    /// Largest violation of J_Z J_Z* + J_Z* J_Z = −2⟨Z,Z*⟩ Id over basis pairs.
    pub fn heisenberg_residual(&self) -> f64 {
        let id = Mat::identity(self.k, self.k);
        let mut worst: f64 = 0.0;
        for a in 0..self.l() {
            for b in a..self.l() {
                let mut r = linalg::anticommutator(self.mat(a), self.mat(b));
                if a == b {
                    r += &id * 2.0;
                }
                worst = worst.max(linalg::max_abs(&r));
            }
        }
        worst
    }

    pub fn is_heisenberg_type(&self) -> bool {
        self.heisenberg_residual() <= STRUCT_TOL
    }

    /// Applies X ↦ O X to the X-space: J_α ↦ O J_α Oᵀ.
    pub fn conjugated(&self, o: &Mat) -> EndoSpace {
        EndoSpace {
            k: self.k,
            basis: self.basis.iter().map(|b| SkewEndo::from_trusted(o * b.mat() * o.transpose())).collect(),
            labels: self.labels.clone(),
            anticommutator: self.anticommutator,
        }
    }

    /// Replaces the basis element `alpha`.
    pub fn with_replaced(&self, alpha: usize, m: Mat) -> Result<EndoSpace> {
        let mut mats: Vec<Mat> = self.basis.iter().map(|b| b.mat().clone()).collect();
        if alpha >= mats.len() {
            return Err(Error::IndexOutOfRange(alpha));
        }
        mats[alpha] = m;
        let mut out = build_endo_space(&mats)?;
        out.labels = self.labels.clone();
        out.anticommutator = self.anticommutator;
        Ok(out)
    }

    pub fn mats(&self) -> Vec<Mat> {
        self.basis.iter().map(|b| b.mat().clone()).collect()
    }
}

/// The four 2×2 blocks 𝟏, 𝐢, 𝐣, 𝐤.
pub fn pauli_blocks() -> [Mat; 4] {
    [
        Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]),
        Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        Mat::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]),
        Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
    ]
}

/// Outcome of the anticommutator test.
#[derive(Debug, Clone, PartialEq)]
pub struct AnticommutatorCheck {
    pub is_anticommutator: bool,
    pub degenerate: bool,
    pub min_singular_value: f64,
    pub residual: f64,
}

/// Tests whether A = Σ a_α J_α is non-degenerate and anticommutes with a
/// spanning set of its orthogonal complement in the Z-space.
pub fn is_anticommutator(space: &EndoSpace, coeffs: &[f64]) -> Result<AnticommutatorCheck> {
    if coeffs.len() != space.l() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient vector has length {}, space has l = {}",
            coeffs.len(),
            space.l()
        )));
    }
    let a = space.j_of(coeffs);
    let smin = linalg::singular_values(&a)[0];
    let degenerate = smin <= STRUCT_TOL;
    let av = Vector::from_vec(coeffs.to_vec());
    let perp = linalg::orthogonal_complement(&[av], space.l(), 1e-12);
    let mut residual: f64 = 0.0;
    for b in &perp {
        let bm = space.j_of(b.as_slice());
        residual = residual.max(linalg::max_abs(&linalg::anticommutator(&a, &bm)));
    }
    Ok(AnticommutatorCheck {
        is_anticommutator: !degenerate && residual <= STRUCT_TOL,
        degenerate,
        min_singular_value: smin,
        residual,
    })
}

/// Unit vector e_α of the Z-space.
pub fn unit_coeffs(l: usize, alpha: usize) -> Vec<f64> {
    let mut v = vec![0.0; l];
    v[alpha] = 1.0;
    v
}

/// Errors unless basis element `alpha` is an anticommutator.
pub fn require_anticommutator(space: &EndoSpace, alpha: usize) -> Result<()> {
    if alpha >= space.l() {
        return Err(Error::IndexOutOfRange(alpha));
    }
    let chk = is_anticommutator(space, &unit_coeffs(space.l(), alpha))?;
    if chk.degenerate {
        return Err(Error::Degenerate(chk.min_singular_value));
    }
    if !chk.is_anticommutator {
        return Err(Error::NotAnticommutator(chk.residual));
    }
    Ok(())
}

/// Splits a non-degenerate skew A as A = S∘A₀ with S = (−A²)^{1/2}
/// symmetric positive and A₀² = −Id.
pub fn rescale_to_unit(a: &Mat) -> Result<(Mat, Mat)> {
    let smin = linalg::singular_values(a)[0];
    if smin <= STRUCT_TOL {
        return Err(Error::Degenerate(smin));
    }
    let s = linalg::sqrt_psd(&(-(a * a)));
    let s_inv = s.clone().try_inverse().ok_or(Error::Degenerate(smin))?;
    let a0 = s_inv * a;
    Ok((s, (&a0 - a0.transpose()) * 0.5))
}

/// A pair of orthogonal maps (A on the X-space, C on the Z-space).
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatorPair {
    pub a_map: Mat,
    pub c_map: Mat,
}

impl ConjugatorPair {
    pub fn new(a_map: Mat, c_map: Mat) -> Result<Self> {
        for (name, m) in [("A", &a_map), ("C", &c_map)] {
            if m.nrows() != m.ncols() || linalg::orth_residual(m) > STRUCT_TOL {
                return Err(Error::InvalidParameter(format!("{name} is not orthogonal")));
            }
        }
        Ok(Self { a_map, c_map })
    }

    pub fn identity(k: usize, l: usize) -> Self {
        Self { a_map: Mat::identity(k, k), c_map: Mat::identity(l, l) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEquivalenceReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares sorted singular values of J_Z and J′_{C(Z)} on random unit Z.
pub fn verify_spectral_equivalence<R: Rng + ?Sized>(
    s1: &EndoSpace,
    s2: &EndoSpace,
    c_map: &Mat,
    n_samples: usize,
    rng: &mut R,
) -> Result<SpectralEquivalenceReport> {
    if s1.k() != s2.k() || s1.l() != s2.l() {
        return Err(Error::DimensionMismatch(format!(
            "(k,l) = ({},{}) vs ({},{})",
            s1.k(),
            s1.l(),
            s2.k(),
            s2.l()
        )));
    }
    if c_map.nrows() != s1.l() || c_map.ncols() != s1.l() {
        return Err(Error::DimensionMismatch("C map has wrong size".into()));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..n_samples {
        let z = linalg::random_unit_vector(s1.l(), rng);
        let cz = c_map * &z;
        let a = linalg::singular_values(&s1.j_of(z.as_slice()));
        let b = linalg::singular_values(&s2.j_of(cz.as_slice()));
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(SpectralEquivalenceReport { samples: n_samples, max_deviation: worst, pass: worst <= EIGEN_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn rotation_generator_builds_a_space() {
        let s = build_endo_space(&[Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])]).unwrap();
        assert_eq!((s.k(), s.l()), (2, 1));
    }

    #[test]
    fn symmetric_input_is_rejected() {
        let e = build_endo_space(&[Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 0.0])]).unwrap_err();
        assert_eq!(e, Error::NonSkew(0));
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let j = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let e = build_endo_space(&[j.clone(), j * 2.0]).unwrap_err();
        assert!(matches!(e, Error::DependentBasis { rank: 1, expected: 2 }));
    }

    #[test]
    fn quaternion_left_products_form_a_space() {
        let s = build_endo_space(&[quaternion_left(1), quaternion_left(2), quaternion_left(3)]).unwrap();
        assert_eq!((s.k(), s.l()), (4, 3));
        assert!(s.is_heisenberg_type());
    }

    #[test]
    fn pauli_relations() {
        let [one, i, j, k] = pauli_blocks();
        assert_eq!(&i * &i, -&one);
        assert_eq!(&j * &j, one);
        assert_eq!(&k * &k, one);
        assert_eq!(&i * &j, k);
        assert_eq!(&k * &i, j);
        assert_eq!(&k * &j, i);
        assert_eq!(&i * &j, -(&j * &i));
    }

    #[test]
    fn clifford_basis_elements_are_anticommutators() {
        let s = clifford_space(3, 1, 0).unwrap();
        for a in 0..3 {
            assert!(is_anticommutator(&s, &unit_coeffs(3, a)).unwrap().is_anticommutator);
        }
    }

    #[test]
    fn single_nondegenerate_generator_is_vacuously_an_anticommutator() {
        let s = clifford_space(1, 1, 0).unwrap();
        let chk = is_anticommutator(&s, &[1.0]).unwrap();
        assert!(chk.is_anticommutator);
        assert_eq!(chk.residual, 0.0);
    }

    #[test]
    fn commuting_complex_structures_are_not_anticommutators() {
        // Two different commuting complex structures on ℝ⁴: 𝐢 ⊕ 𝐢 and 𝐢 ⊕ −𝐢.
        let [_, i, _, _] = pauli_blocks();
        let a = linalg::block_diag(&[i.clone(), i.clone()]);
        let b = linalg::block_diag(&[i.clone(), -i]);
        let s = build_endo_space(&[a, b]).unwrap();
        let chk = is_anticommutator(&s, &[1.0, 0.0]).unwrap();
        assert!(!chk.is_anticommutator);
        assert!(!chk.degenerate);
        assert!((chk.residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_element_is_reported_separately() {
        let mut m = Mat::zeros(4, 4);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        let s = build_endo_space(&[m]).unwrap();
        let chk = is_anticommutator(&s, &[1.0]).unwrap();
        assert!(chk.degenerate && !chk.is_anticommutator);
        assert!(matches!(require_anticommutator(&s, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rescale_examples() {
        let [_, i, _, _] = pauli_blocks();
        let (s, a0) = rescale_to_unit(&i).unwrap();
        assert!(linalg::max_abs(&(s - Mat::identity(2, 2))) < 1e-14);
        assert!(linalg::max_abs(&(a0 - &i)) < 1e-14);

        let (s2, _) = rescale_to_unit(&(&i * 2.0)).unwrap();
        assert!(linalg::max_abs(&(s2 - Mat::identity(2, 2) * 2.0)) < 1e-13);

        let a = linalg::block_diag(&[i.clone(), &i * 3.0]);
        let (s3, a03) = rescale_to_unit(&a).unwrap();
        let (vals, _) = linalg::eigh(&s3);
        for (v, e) in vals.iter().zip([1.0, 1.0, 3.0, 3.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!(linalg::max_abs(&(&a03 * &a03 + Mat::identity(4, 4))) < 1e-12);
        assert!(linalg::max_abs(&linalg::commutator(&s3, &a03)) < 1e-12);
        assert!(linalg::max_abs(&(&s3 * &a03 - &a)) < 1e-12);
    }

    #[test]
    fn spectral_equivalence_examples() {
        let mut rng = seeded(1);
        let s = clifford_space(3, 1, 1).unwrap();
        let id = Mat::identity(3, 3);
        let r = verify_spectral_equivalence(&s, &s, &id, 20, &mut rng).unwrap();
        assert!(r.pass && r.max_deviation == 0.0);

        let flipped = sigma_a_deform(&s, 0, &(-Mat::identity(8, 8))).unwrap();
        assert!(verify_spectral_equivalence(&s, &flipped, &id, 20, &mut rng).unwrap().pass);

        let scaled = s.with_replaced(1, s.mat(1) * 2.0).unwrap();
        let r = verify_spectral_equivalence(&s, &scaled, &id, 20, &mut rng).unwrap();
        assert!(!r.pass);
        // Singular values of J_Z = z₁J₁ + z₂J₂ + z₃J₃ are |Z|; doubling J₂
        // moves them to (z₁² + 4z₂² + z₃²)^{1/2}, a gap of at most 1.
        assert!(r.max_deviation > 1e-3 && r.max_deviation <= 1.0 + 1e-12);
    }

    #[test]
    fn gram_matrix_input_is_orthonormalized() {
        let q1 = quaternion_left(1);
        let q2 = quaternion_left(2);
        let gram = Mat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        let s = build_endo_space_with_gram(&[&q1 * 2.0, q2.clone()], &gram).unwrap();
        assert!(linalg::max_abs(&(s.mat(0) - &q1)) < 1e-12);
        assert!(linalg::max_abs(&(s.mat(1) - &q2)) < 1e-12);
    }
}
