//! The 2-step nilpotent metric Lie group 𝔫 = 𝐯 ⊕ 𝐳 defined by an
//! endomorphism space: bracket, invariant frame, connection, curvature,
//! Ricci tensor, coordinate metric and isometry checks.

use crate::algebra::{MetricLieAlgebra, RiemannTensor};
use crate::endospace::{ConjugatorPair, EndoSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

/// Tolerance for `verify_isometry`.
pub const ISOMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGroup {
    space: EndoSpace,
}

/// Element X + Z of 𝔫.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgVector {
    pub x: Vector,
    pub z: Vector,
}

impl AlgVector {
    pub fn new(x: Vector, z: Vector) -> Self {
        Self { x, z }
    }

    pub fn zeros(k: usize, l: usize) -> Self {
        Self { x: Vector::zeros(k), z: Vector::zeros(l) }
    }

    pub fn from_x(x: Vector, l: usize) -> Self {
        Self { x, z: Vector::zeros(l) }
    }

    pub fn from_z(k: usize, z: Vector) -> Self {
        Self { x: Vector::zeros(k), z }
    }

    /// Concatenated coordinates (x, z).
    pub fn to_vec(&self) -> Vector {
        let k = self.x.len();
        Vector::from_fn(k + self.z.len(), |i, _| if i < k { self.x[i] } else { self.z[i - k] })
    }

    pub fn from_vec(v: &Vector, k: usize) -> Self {
        Self { x: v.rows(0, k).into_owned(), z: v.rows(k, v.len() - k).into_owned() }
    }

    pub fn dot(&self, other: &AlgVector) -> f64 {
        self.x.dot(&other.x) + self.z.dot(&other.z)
    }

    pub fn add(&self, other: &AlgVector) -> AlgVector {
        AlgVector { x: &self.x + &other.x, z: &self.z + &other.z }
    }

    pub fn sub(&self, other: &AlgVector) -> AlgVector {
        AlgVector { x: &self.x - &other.x, z: &self.z - &other.z }
    }

    pub fn scale(&self, s: f64) -> AlgVector {
        AlgVector { x: &self.x * s, z: &self.z * s }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryReport {
    pub residual: f64,
    pub pass: bool,
}

impl MetricGroup {
    pub fn new(space: EndoSpace) -> Self {
        Self { space }
    }

    pub fn space(&self) -> &EndoSpace {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn l(&self) -> usize {
        self.space.l()
    }

    pub fn dim(&self) -> usize {
        self.k() + self.l()
    }

    pub fn j(&self, z: &Vector) -> Mat {
        self.space.j_of(z.as_slice())
    }

    /// Z-vector with components ⟨J_α X, Y⟩.
    pub fn bracket_x(&self, x: &Vector, y: &Vector) -> Vector {
        Vector::from_fn(self.l(), |a, _| (self.space.mat(a) * x).dot(y))
    }

    pub fn bracket(&self, u: &AlgVector, v: &AlgVector) -> AlgVector {
        AlgVector::from_z(self.k(), self.bracket_x(&u.x, &v.x))
    }

    /// Group product (X, Z)(X′, Z′) = (X + X′, Z + Z′ + ½[X, X′]).
    pub fn multiply(&self, p: &AlgVector, q: &AlgVector) -> AlgVector {
        AlgVector { x: &p.x + &q.x, z: &p.z + &q.z + self.bracket_x(&p.x, &q.x) * 0.5 }
    }

    /// Coefficients of the left-invariant frame at (X, Z) in the
    /// coordinates (x, z); row i is 𝐗_i = ∂_i + ½ Σ_α ⟨J_α X, E_i⟩ ∂_α,
    /// row k + α is 𝐙_α = ∂_α. The frame does not depend on Z.
    pub fn invariant_frame(&self, x: &Vector, _z: &Vector) -> Mat {
        let (k, l) = (self.k(), self.l());
        let mut f = Mat::identity(k + l, k + l);
        for a in 0..l {
            let jx = self.space.mat(a) * x;
            for i in 0..k {
                f[(i, k + a)] = 0.5 * jx[i];
            }
        }
        f
    }

    /// Metric tensor in coordinates (x, z) at X.
    pub fn coordinate_metric(&self, x: &Vector) -> Mat {
        let (k, l) = (self.k(), self.l());
        let jx: Vec<Vector> = (0..l).map(|a| self.space.mat(a) * x).collect();
        let mut g = Mat::identity(k + l, k + l);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] += 0.25 * jx.iter().map(|v| v[i] * v[j]).sum::<f64>();
            }
            for a in 0..l {
                g[(i, k + a)] = -0.5 * jx[a][i];
                g[(k + a, i)] = -0.5 * jx[a][i];
            }
        }
        g
    }

    /// Levi-Civita connection of left-invariant fields:
    /// ∇_X X* = ½[X, X*], ∇_X Z = ∇_Z X = −½ J_Z X, ∇_Z Z* = 0.
    pub fn nabla(&self, p: &AlgVector, q: &AlgVector) -> AlgVector {
        let z_part = self.bracket_x(&p.x, &q.x) * 0.5;
        let x_part = (self.j(&q.z) * &p.x + self.j(&p.z) * &q.x) * -0.5;
        AlgVector { x: x_part, z: z_part }
    }

    /// R(U,V)W assembled from the case formulas
    /// R(X,Y)X* = ½J_{[X,Y]}X* − ¼J_{[Y,X*]}X + ¼J_{[X,X*]}Y,
    /// R(X,Y)Z = −¼[X, J_Z Y] + ¼[Y, J_Z X],
    /// R(X,Z)Y = −¼[X, J_Z Y], R(X,Z)Z* = −¼J_Z J_{Z*} X,
    /// R(Z,Z*)X = −¼J_{Z*}J_Z X + ¼J_Z J_{Z*} X, R(Z₁,Z₂)Z₃ = 0.
    pub fn riemann(&self, u: &AlgVector, v: &AlgVector, w: &AlgVector) -> AlgVector {
        let (k, l) = (self.k(), self.l());
        let mut out = AlgVector::zeros(k, l);
        let br = |a: &Vector, b: &Vector| self.bracket_x(a, b);
        let j = |z: &Vector| self.j(z);

        // R(X,Y)X*
        let (x, y, xs) = (&u.x, &v.x, &w.x);
        out.x += j(&br(x, y)) * xs * 0.5 - j(&br(y, xs)) * x * 0.25 + j(&br(x, xs)) * y * 0.25;

        // R(X,Y)Z
        let jz = j(&w.z);
        out.z += br(x, &(&jz * y)) * -0.25 + br(y, &(&jz * x)) * 0.25;

        // R(X,Z)Y and R(Z,X)Y = −R(X,Z)Y
        out.z += br(&u.x, &(j(&v.z) * &w.x)) * -0.25;
        out.z += br(&v.x, &(j(&u.z) * &w.x)) * 0.25;

        // R(X,Z)Z* and R(Z,X)Z*
        out.x += j(&v.z) * (j(&w.z) * &u.x) * -0.25;
        out.x += j(&u.z) * (j(&w.z) * &v.x) * 0.25;

        // R(Z,Z*)X
        let (jz1, jz2) = (j(&u.z), j(&v.z));
        out.x += (&jz2 * (&jz1 * &w.x)) * -0.25 + (&jz1 * (&jz2 * &w.x)) * 0.25;
        out
    }

    fn basis_vector(&self, i: usize) -> AlgVector {
        let mut v = Vector::zeros(self.dim());
        v[i] = 1.0;
        AlgVector::from_vec(&v, self.k())
    }

    /// ⟨R(e_i, e_j) e_a, e_b⟩ from the case formulas.
    pub fn riemann_tensor(&self) -> RiemannTensor {
        let n = self.dim();
        let basis: Vec<AlgVector> = (0..n).map(|i| self.basis_vector(i)).collect();
        let mut cache = vec![Vector::zeros(n); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    cache[(i * n + j) * n + a] = self.riemann(&basis[i], &basis[j], &basis[a]).to_vec();
                }
            }
        }
        RiemannTensor::from_fn(n, |i, j, a, b| cache[(i * n + j) * n + a][b])
    }

    /// Symmetric matrix of the curvature operator on 2-vectors, basis
    /// e_i∧e_j (i < j) over the coordinate order (x, z).
    pub fn curvature_operator(&self) -> Mat {
        self.riemann_tensor().curvature_operator()
    }

    /// H_𝐯 (k×k) with H_𝐯(X,X*) = Σ_α ⟨J_α X, J_α X*⟩ and H_𝐳 (l×l) with
    /// H_𝐳(Z,Z*) = Σ_i ⟨J_Z E_i, J_Z* E_i⟩.
    pub fn h_tensors(&self) -> (Mat, Mat) {
        let (k, l) = (self.k(), self.l());
        let mats = self.space.mats();
        let mut hv = Mat::zeros(k, k);
        for m in &mats {
            hv += m.transpose() * m;
        }
        let hz = Mat::from_fn(l, l, |a, b| (mats[a].transpose() * &mats[b]).trace());
        (hv, hz)
    }

    /// Ricci tensor: Ric(X,X*) = −½H_𝐯, Ric(Z,Z*) = ¼H_𝐳, Ric(X,Z) = 0.
    pub fn ricci_matrix(&self) -> Mat {
        let (k, l) = (self.k(), self.l());
        let (hv, hz) = self.h_tensors();
        let mut r = Mat::zeros(k + l, k + l);
        r.view_mut((0, 0), (k, k)).copy_from(&(hv * -0.5));
        r.view_mut((k, k), (l, l)).copy_from(&(hz * 0.25));
        r
    }

    pub fn ricci(&self, u: &AlgVector, v: &AlgVector) -> f64 {
        u.to_vec().dot(&(self.ricci_matrix() * v.to_vec()))
    }

    pub fn scalar_curvature(&self) -> f64 {
        self.ricci_matrix().trace()
    }

    /// The same metric Lie algebra as a bare structure-constant table
    /// (orthonormal basis (E_i, e_α)), for independent evaluation.
    pub fn algebra(&self) -> MetricLieAlgebra {
        let k = self.k();
        let mats = self.space.mats();
        MetricLieAlgebra::from_structure(self.dim(), |i, j, m| {
            if i < k && j < k && m >= k {
                mats[m - k][(j, i)]
            } else {
                0.0
            }
        })
    }
}

/// Checks A J_Z A⁻¹ = J′_{C(Z)} on the basis Z = e_α.
pub fn verify_isometry(g1: &MetricGroup, g2: &MetricGroup, pair: &ConjugatorPair) -> Result<IsometryReport> {
    let (k, l) = (g1.k(), g1.l());
    if g2.k() != k || g2.l() != l || pair.a_map.nrows() != k || pair.c_map.nrows() != l {
        return Err(Error::DimensionMismatch(format!(
            "groups ({},{}) and ({},{}) with maps {}×{}, {}×{}",
            k,
            l,
            g2.k(),
            g2.l(),
            pair.a_map.nrows(),
            pair.a_map.ncols(),
            pair.c_map.nrows(),
            pair.c_map.ncols()
        )));
    }
    let a_inv = pair.a_map.transpose();
    let mut worst: f64 = 0.0;
    for alpha in 0..l {
        let lhs = &pair.a_map * g1.space().mat(alpha) * &a_inv;
        let cz = pair.c_map.column(alpha).into_owned();
        let rhs = g2.j(&cz);
        worst = worst.max(linalg::max_abs(&(lhs - rhs)));
    }
    Ok(IsometryReport { residual: worst, pass: worst <= ISOMETRY_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::{build_endo_space, clifford_space};

    fn heisenberg() -> MetricGroup {
        MetricGroup::new(build_endo_space(&[Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])]).unwrap())
    }

    #[test]
    fn heisenberg_bracket_value() {
        let g = heisenberg();
        let ex = AlgVector::from_x(Vector::from_vec(vec![1.0, 0.0]), 1);
        let ey = AlgVector::from_x(Vector::from_vec(vec![0.0, 1.0]), 1);
        assert_eq!(g.bracket(&ex, &ey).z[0], -1.0);
    }

    #[test]
    fn frame_at_unit_x() {
        let g = heisenberg();
        let f = g.invariant_frame(&Vector::from_vec(vec![1.0, 0.0]), &Vector::zeros(1));
        // 𝐗₂ = ∂₂ + ½⟨J₁E₁, E₂⟩∂_z = ∂₂ − ½∂_z
        assert_eq!(f[(1, 2)], -0.5);
        assert_eq!(f[(0, 2)], 0.0);
    }

    #[test]
    fn case_formulas_match_structure_constant_engine() {
        let g = MetricGroup::new(clifford_space(3, 1, 1).unwrap());
        let ours = g.riemann_tensor();
        let oracle = g.algebra().riemann_tensor();
        let n = g.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        worst = worst.max((ours.get(i, j, a, b) - oracle.get(i, j, a, b)).abs());
                    }
                }
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }
}
