//! Orthogonal conjugators relating unit-anticommutator deformations to
//! σ-deformations.

use super::{quaternion_left, rescale_to_unit, STRUCT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use rand::Rng;

/// Eigenvalues of the symmetric part of E within this distance of −1 are
/// treated as half-turns.
const HALF_TURN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitEndoConjugator {
    /// Orthogonal square root of D = −A₀B₀ (half-angle rotations).
    pub sqrt_d: Mat,
    /// Symmetric involution with √D B₀ √D⁻¹ = Ŝ A₀.
    pub s_hat: Mat,
    /// Rotation angles α of D on its invariant planes, in [0, π].
    pub angles: Vec<f64>,
    pub residuals: ConjugatorResiduals,
}

/// The five certified identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatorResiduals {
    pub sqrt_d_orthogonal: f64,
    pub conjugation: f64,
    pub s_hat_involution: f64,
    pub s_hat_commutes: f64,
    pub sqrt_d_commutes: f64,
}

impl ConjugatorResiduals {
    pub fn max(&self) -> f64 {
        [
            self.sqrt_d_orthogonal,
            self.conjugation,
            self.s_hat_involution,
            self.s_hat_commutes,
            self.sqrt_d_commutes,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Conjugates the unit anticommutator B₀ into a σ-deformation Ŝ∘A₀ of A₀
/// while fixing every F of the common perpendicular family.
///
/// E = −A₀B₀ is orthogonal and commutes with each F. Its symmetric part
/// S = cos α and skew part K commute; on every S-eigenspace with
/// cos α ≠ −1 the half-angle root is cos(α/2)·Id + K/(2cos(α/2)), and on
/// the half-turn eigenspace (B₀ = −A₀ there) the root is the identity and
/// Ŝ = −Id.
pub fn unit_endo_conjugator(a0: &Mat, b0: &Mat, f_list: &[Mat]) -> Result<UnitEndoConjugator> {
    let k = a0.nrows();
    if b0.nrows() != k || f_list.iter().any(|f| f.nrows() != k) {
        return Err(Error::DimensionMismatch("all endomorphisms must act on the same space".into()));
    }
    let id = Mat::identity(k, k);
    for m in [a0, b0] {
        let r = linalg::max_abs(&(m * m + &id));
        if r > STRUCT_TOL || linalg::skew_residual(m) > STRUCT_TOL {
            return Err(Error::NotUnit(r));
        }
    }
    for f in f_list {
        let r = linalg::max_abs(&linalg::anticommutator(a0, f))
            .max(linalg::max_abs(&linalg::anticommutator(b0, f)));
        if r > STRUCT_TOL {
            return Err(Error::NotAnticommuting(r));
        }
    }
    let e = -(a0 * b0);
    let sym = (&e + e.transpose()) * 0.5;
    let skew = (&e - e.transpose()) * 0.5;
    let (cosines, vecs) = linalg::eigh(&sym);
    let mut f_diag = Vector::zeros(k);
    let mut g_diag = Vector::zeros(k);
    let mut half_turn = Vector::zeros(k);
    let mut angles = Vec::with_capacity(k);
    for (i, &c) in cosines.iter().enumerate() {
        let c = c.clamp(-1.0, 1.0);
        angles.push(c.acos());
        if c < -1.0 + HALF_TURN_TOL {
            f_diag[i] = 1.0;
            half_turn[i] = 1.0;
        } else {
            let f = ((1.0 + c) / 2.0).sqrt();
            f_diag[i] = f;
            g_diag[i] = 1.0 / (2.0 * f);
        }
    }
    let vt = vecs.transpose();
    let sqrt_d = &vecs * Mat::from_diagonal(&f_diag) * &vt + &skew * (&vecs * Mat::from_diagonal(&g_diag) * &vt);
    let p_half = &vecs * Mat::from_diagonal(&half_turn) * &vt;
    let s_hat = &id - p_half * 2.0;

    let sqrt_d_inv = sqrt_d.transpose();
    let mut s_comm = linalg::max_abs(&linalg::commutator(&s_hat, a0));
    let mut d_comm: f64 = 0.0;
    for f in f_list {
        s_comm = s_comm.max(linalg::max_abs(&linalg::commutator(&s_hat, f)));
        d_comm = d_comm.max(linalg::max_abs(&linalg::commutator(&sqrt_d, f)));
    }
    let residuals = ConjugatorResiduals {
        sqrt_d_orthogonal: linalg::orth_residual(&sqrt_d),
        conjugation: linalg::max_abs(&(&sqrt_d * b0 * &sqrt_d_inv - &s_hat * a0)),
        s_hat_involution: linalg::sym_residual(&s_hat).max(linalg::max_abs(&(&s_hat * &s_hat - &id))),
        s_hat_commutes: s_comm,
        sqrt_d_commutes: d_comm,
    };
    angles.sort_by(|a, b| a.total_cmp(b));
    Ok(UnitEndoConjugator { sqrt_d, s_hat, angles, residuals })
}

/// For anticommuting non-degenerate A, F and an orthogonal involution σ
/// commuting with both, the orthogonal map Q = P₊ + F₀P₋ (P± the σ-eigen
/// projections, F₀ the unit part of F) satisfies Q A Q⁻¹ = σA and
/// Q F Q⁻¹ = F.
pub fn quaternionic_sigma_conjugator(a: &Mat, f: &Mat, sigma: &Mat) -> Result<Mat> {
    let k = a.nrows();
    let id = Mat::identity(k, k);
    let r = linalg::max_abs(&linalg::anticommutator(a, f));
    if r > STRUCT_TOL {
        return Err(Error::NotAnticommuting(r));
    }
    if linalg::max_abs(&(sigma * sigma - &id)) > STRUCT_TOL || linalg::orth_residual(sigma) > STRUCT_TOL {
        return Err(Error::BadSigma("not an orthogonal involution".into()));
    }
    let (_, f0) = rescale_to_unit(f)?;
    let p_plus = (&id + sigma) * 0.5;
    let p_minus = (&id - sigma) * 0.5;
    Ok(p_plus + f0 * p_minus)
}

/// Seeded random input for [`unit_endo_conjugator`] on m ∈ {1, 2, 3}
/// quaternionic copies: A = L_i on each copy, B = ±(cos θ L_i + sin θ L_k)
/// per copy, and optionally F = c L_j per copy, all conjugated by one random
/// orthogonal matrix. Returns (A, B, family).
pub fn random_unit_instance<R: Rng + ?Sized>(rng: &mut R) -> (Mat, Mat, Vec<Mat>) {
    let m = rng.random_range(1..=3usize);
    let (li, lj, lk) = (quaternion_left(1), quaternion_left(2), quaternion_left(3));
    let mut a_blocks = Vec::with_capacity(m);
    let mut b_blocks = Vec::with_capacity(m);
    let mut f_blocks = Vec::with_capacity(m);
    for _ in 0..m {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        a_blocks.push(li.clone());
        b_blocks.push((&li * theta.cos() + &lk * theta.sin()) * sign);
        f_blocks.push(&lj * rng.random_range(0.2..2.0));
    }
    let o = linalg::random_orthogonal(4 * m, rng);
    let conj = |blocks: &[Mat]| &o * linalg::block_diag(blocks) * o.transpose();
    let family = if rng.random::<bool>() { vec![conj(&f_blocks)] } else { Vec::new() };
    (conj(&a_blocks), conj(&b_blocks), family)
}
