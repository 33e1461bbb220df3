//! The solvable extension SN = N × ℝ₊ with algebra 𝐬 = 𝔫 ⊕ 𝐭:
//! group law, invariant frame, connection, curvature operator, Ricci
//! tensor, and the block decomposition behind isotonality.

pub mod isotonal;

pub use isotonal::*;

use crate::algebra::{wedge_pairs, MetricLieAlgebra, RiemannTensor};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::nilgeom::{AlgVector, MetricGroup};

#[derive(Debug, Clone, PartialEq)]
pub struct SolvGroup {
    nil: MetricGroup,
    c: f64,
}

/// Point (X, Z, t) of the half-space, t > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvPoint {
    pub x: Vector,
    pub z: Vector,
    pub t: f64,
}

/// Element X + Z + t·𝐓 of 𝐬, with 𝐓 the unit vector c·∂_t at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvVector {
    pub x: Vector,
    pub z: Vector,
    pub t: f64,
}

impl SolvPoint {
    pub fn new(x: Vector, z: Vector, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
        }
        Ok(Self { x, z, t })
    }

    pub fn identity(k: usize, l: usize) -> Self {
        Self { x: Vector::zeros(k), z: Vector::zeros(l), t: 1.0 }
    }

    /// Coordinates (x, z, t).
    pub fn to_vec(&self) -> Vector {
        let (k, l) = (self.x.len(), self.z.len());
        Vector::from_fn(k + l + 1, |i, _| {
            if i < k {
                self.x[i]
            } else if i < k + l {
                self.z[i - k]
            } else {
                self.t
            }
        })
    }

    pub fn from_vec(v: &Vector, k: usize) -> Self {
        let l = v.len() - k - 1;
        Self { x: v.rows(0, k).into_owned(), z: v.rows(k, l).into_owned(), t: v[k + l] }
    }
}

impl SolvVector {
    pub fn new(x: Vector, z: Vector, t: f64) -> Self {
        Self { x, z, t }
    }

    pub fn zeros(k: usize, l: usize) -> Self {
        Self { x: Vector::zeros(k), z: Vector::zeros(l), t: 0.0 }
    }

    pub fn from_nil(v: &AlgVector) -> Self {
        Self { x: v.x.clone(), z: v.z.clone(), t: 0.0 }
    }

    pub fn nil_part(&self) -> AlgVector {
        AlgVector::new(self.x.clone(), self.z.clone())
    }

    pub fn to_vec(&self) -> Vector {
        SolvPoint { x: self.x.clone(), z: self.z.clone(), t: self.t }.to_vec()
    }

    pub fn from_vec(v: &Vector, k: usize) -> Self {
        let p = SolvPoint::from_vec(v, k);
        Self { x: p.x, z: p.z, t: p.t }
    }

    pub fn dot(&self, o: &SolvVector) -> f64 {
        self.x.dot(&o.x) + self.z.dot(&o.z) + self.t * o.t
    }
}

impl SolvGroup {
    pub fn new(nil: MetricGroup, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("scaling factor c = {c} must be positive")));
        }
        Ok(Self { nil, c })
    }

    pub fn nil(&self) -> &MetricGroup {
        &self.nil
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> usize {
        self.nil.k()
    }

    pub fn l(&self) -> usize {
        self.nil.l()
    }

    pub fn dim(&self) -> usize {
        self.k() + self.l() + 1
    }

    /// (X, Z, t)(X′, Z′, t′) = (X + t^{½}X′, Z + tZ′ + ½t^{½}[X, X′], tt′).
    pub fn multiply(&self, p: &SolvPoint, q: &SolvPoint) -> SolvPoint {
        let st = p.t.sqrt();
        SolvPoint {
            x: &p.x + &q.x * st,
            z: &p.z + &q.z * p.t + self.nil.bracket_x(&p.x, &q.x) * (0.5 * st),
            t: p.t * q.t,
        }
    }

    pub fn inverse(&self, p: &SolvPoint) -> SolvPoint {
        SolvPoint { x: -&p.x / p.t.sqrt(), z: -&p.z / p.t, t: 1.0 / p.t }
    }

    /// Invariant frame at p in coordinates (x, z, t): rows 𝐘_i = t^{½}𝐗_i,
    /// 𝐕_α = t𝐙_α, 𝐓 = ct∂_t.
    pub fn solv_frame(&self, p: &SolvPoint) -> Mat {
        let (k, l) = (self.k(), self.l());
        let n = k + l + 1;
        let nf = self.nil.invariant_frame(&p.x, &p.z);
        let mut f = Mat::zeros(n, n);
        let st = p.t.sqrt();
        for i in 0..k {
            for c in 0..(k + l) {
                f[(i, c)] = st * nf[(i, c)];
            }
        }
        for a in 0..l {
            f[(k + a, k + a)] = p.t;
        }
        f[(k + l, k + l)] = self.c * p.t;
        f
    }

    /// Metric tensor in coordinates (x, z, t) making the frame orthonormal.
    pub fn coordinate_metric(&self, p: &SolvPoint) -> Mat {
        let f = self.solv_frame(p);
        let inv = f.try_inverse().expect("frame is invertible for t > 0");
        &inv * inv.transpose()
    }

    /// Lie bracket on 𝐬: the nilpotent bracket plus [𝐓, X] = (c/2)X and
    /// [𝐓, Z] = cZ.
    pub fn bracket(&self, u: &SolvVector, v: &SolvVector) -> SolvVector {
        let c = self.c;
        let z_n = self.nil.bracket_x(&u.x, &v.x);
        SolvVector {
            x: &v.x * (0.5 * c * u.t) - &u.x * (0.5 * c * v.t),
            z: z_n + &v.z * (c * u.t) - &u.z * (c * v.t),
            t: 0.0,
        }
    }

    /// Connection of invariant fields:
    /// ∇_{X+Z}(X*+Z*) = ∇ᴺ_{X+Z}(X*+Z*) + c(½⟨X,X*⟩ + ⟨Z,Z*⟩)𝐓,
    /// ∇_X 𝐓 = −(c/2)X, ∇_Z 𝐓 = −cZ, ∇_𝐓 = 0.
    pub fn nabla_c(&self, p: &SolvVector, q: &SolvVector) -> SolvVector {
        let c = self.c;
        let nn = self.nil.nabla(&p.nil_part(), &q.nil_part());
        SolvVector {
            x: nn.x - &p.x * (0.5 * c * q.t),
            z: nn.z - &p.z * (c * q.t),
            t: c * (0.5 * p.x.dot(&q.x) + p.z.dot(&q.z)),
        }
    }

    /// Curvature operator on Λ²𝐬 (lexicographic over (x, z, t)), assembled
    /// from the nilpotent curvature operator and the case formulas
    /// R_c(X*∧X) = R(X*∧X) − (c/2)[X*,X]∧𝐓 + (c²/4)X*∧X,
    /// R_c(X∧Z) = R(X∧Z) − (c/4)J_Z X∧𝐓 + (c²/2)X∧Z,
    /// R_c(Z*∧Z) = R(Z*∧Z) + c²Z*∧Z,
    /// R_c((X+Z)∧𝐓) = ¼c Σ_α J_αX∧e_α − ½c J*_Z + c²(¼X + Z)∧𝐓,
    /// where J*_Z = Σ_{i<j} ⟨J_Z E_i, E_j⟩ E_i∧E_j. The X∧𝐓 row carries
    /// ¼c, the value forced by symmetry with the X∧Z row.
    pub fn curvature_operator_c(&self) -> Mat {
        let (k, l) = (self.k(), self.l());
        let n = k + l + 1;
        let t = k + l;
        let c = self.c;
        let pairs = wedge_pairs(n);
        let m = pairs.len();
        let index = |i: usize, j: usize| -> (usize, f64) {
            let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let pos = pairs.binary_search(&(a, b)).expect("pair exists");
            (pos, s)
        };
        let nil_r = self.nil.riemann_tensor();
        let mats = self.nil.space().mats();
        let mut op = Mat::zeros(m, m);
        for (row, &(i, j)) in pairs.iter().enumerate() {
            let mut add = |a: usize, b: usize, v: f64| {
                if a != b && v != 0.0 {
                    let (q, s) = index(a, b);
                    op[(row, q)] += s * v;
                }
            };
            if j < t {
                for (a, b) in wedge_pairs(t) {
                    add(a, b, nil_r.get(i, j, a, b));
                }
            }
            match (i < k, j < k, i < t, j < t) {
                // X* ∧ X with X* = E_i, X = E_j
                (true, true, _, _) => {
                    for al in 0..l {
                        add(k + al, t, -0.5 * c * mats[al][(j, i)]);
                    }
                    add(i, j, 0.25 * c * c);
                }
                // X ∧ Z with X = E_i, Z = e_α
                (true, false, _, true) => {
                    let al = j - k;
                    for r in 0..k {
                        add(r, t, -0.25 * c * mats[al][(r, i)]);
                    }
                    add(i, j, 0.5 * c * c);
                }
                // Z* ∧ Z
                (false, false, true, true) => add(i, j, c * c),
                // (X + Z) ∧ 𝐓
                (_, _, true, false) => {
                    if i < k {
                        for al in 0..l {
                            for r in 0..k {
                                add(r, k + al, 0.25 * c * mats[al][(r, i)]);
                            }
                        }
                        add(i, t, 0.25 * c * c);
                    } else {
                        let al = i - k;
                        for a in 0..k {
                            for b in (a + 1)..k {
                                add(a, b, -0.5 * c * mats[al][(b, a)]);
                            }
                        }
                        add(i, t, c * c);
                    }
                }
                _ => unreachable!("pairs are ordered i < j"),
            }
        }
        op
    }

    /// ⟨R(e_i, e_j) e_a, e_b⟩ read off the curvature operator.
    pub fn riemann_tensor_c(&self) -> RiemannTensor {
        let n = self.dim();
        let op = self.curvature_operator_c();
        let pairs = wedge_pairs(n);
        let entry = |i: usize, j: usize| -> Option<(usize, f64)> {
            if i == j {
                None
            } else if i < j {
                Some((pairs.binary_search(&(i, j)).unwrap(), 1.0))
            } else {
                Some((pairs.binary_search(&(j, i)).unwrap(), -1.0))
            }
        };
        RiemannTensor::from_fn(n, |i, j, a, b| match (entry(i, j), entry(a, b)) {
            (Some((p, s1)), Some((q, s2))) => s1 * s2 * op[(p, q)],
            _ => 0.0,
        })
    }

    /// R(U,V)W from the curvature operator.
    pub fn riemann_c(&self, u: &SolvVector, v: &SolvVector, w: &SolvVector) -> SolvVector {
        let r = self.riemann_tensor_c();
        let n = self.dim();
        let (uu, vv, ww) = (u.to_vec(), v.to_vec(), w.to_vec());
        let out = Vector::from_fn(n, |b, _| {
            let mut e = Vector::zeros(n);
            e[b] = 1.0;
            r.eval(&uu, &vv, &ww, &e)
        });
        SolvVector::from_vec(&out, self.k())
    }

    /// Ricci tensor: the nilpotent Ricci tensor shifted by
    /// −c²(k/4 + l/2) on 𝐯 and −c²(k/2 + l) on 𝐳, and −c²(k/4 + l) on 𝐓.
    pub fn ricci_matrix_c(&self) -> Mat {
        let (k, l) = (self.k(), self.l());
        let (kf, lf) = (k as f64, l as f64);
        let c2 = self.c * self.c;
        let mut r = Mat::zeros(k + l + 1, k + l + 1);
        let rn = self.nil.ricci_matrix();
        r.view_mut((0, 0), (k + l, k + l)).copy_from(&rn);
        for i in 0..k {
            r[(i, i)] -= c2 * (kf / 4.0 + lf / 2.0);
        }
        for a in 0..l {
            r[(k + a, k + a)] -= c2 * (kf / 2.0 + lf);
        }
        r[(k + l, k + l)] = -c2 * (kf / 4.0 + lf);
        r
    }

    pub fn ricci_c(&self, u: &SolvVector, v: &SolvVector) -> f64 {
        u.to_vec().dot(&(self.ricci_matrix_c() * v.to_vec()))
    }

    /// Structure-constant model of 𝐬 in the orthonormal basis (E_i, e_α, 𝐓).
    pub fn algebra(&self) -> MetricLieAlgebra {
        let (k, l) = (self.k(), self.l());
        let t = k + l;
        let c = self.c;
        let mats = self.nil.space().mats();
        MetricLieAlgebra::from_structure(k + l + 1, |i, j, m| {
            if i < k && j < k && m >= k && m < t {
                mats[m - k][(j, i)]
            } else if i == t && j == m && j < k {
                0.5 * c
            } else if j == t && i == m && i < k {
                -0.5 * c
            } else if i == t && j == m && j < t {
                c
            } else if j == t && i == m && i < t {
                -c
            } else {
                0.0
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::clifford_space;

    #[test]
    fn case_formulas_match_structure_constant_engine() {
        let g = SolvGroup::new(MetricGroup::new(clifford_space(3, 1, 1).unwrap()), 0.7).unwrap();
        let ours = g.curvature_operator_c();
        let oracle = g.algebra().riemann_tensor().curvature_operator();
        let diff = &ours - &oracle;
        let worst = diff.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(worst < 1e-12, "{worst}");
    }
}
