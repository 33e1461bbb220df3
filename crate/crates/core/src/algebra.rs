//! Generic metric Lie algebra in an orthonormal basis.
//!
//! Everything here is derived from structure constants alone: the
//! Levi-Civita connection of left-invariant fields by the Koszul formula,
//! the curvature R(U,V) = [∇_U, ∇_V] − ∇_{[U,V]}, Ricci and scalar
//! curvature, and the curvature operator on 2-vectors. The case formulas
//! in `nilgeom` and `solvgeom` are checked against this engine.

use crate::linalg::{Mat, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    n: usize,
    /// c[(i·n + j)·n + m] = ⟨[e_i, e_j], e_m⟩.
    structure: Vec<f64>,
    /// g[(i·n + j)·n + m] = ⟨∇_{e_i} e_j, e_m⟩.
    christoffel: Vec<f64>,
}

impl MetricLieAlgebra {
    /// Builds the algebra from ⟨[e_i, e_j], e_m⟩ supplied by `bracket`.
    pub fn from_structure(n: usize, bracket: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut structure = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    structure[(i * n + j) * n + m] = bracket(i, j, m);
                }
            }
        }
        let c = |i: usize, j: usize, m: usize| structure[(i * n + j) * n + m];
        let mut christoffel = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    christoffel[(i * n + j) * n + m] = 0.5 * (c(i, j, m) - c(j, m, i) + c(m, i, j));
                }
            }
        }
        Self { n, structure, christoffel }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn structure_constant(&self, i: usize, j: usize, m: usize) -> f64 {
        self.structure[(i * self.n + j) * self.n + m]
    }

    pub fn christoffel(&self, i: usize, j: usize, m: usize) -> f64 {
        self.christoffel[(i * self.n + j) * self.n + m]
    }

    fn bilinear(&self, table: &[f64], u: &Vector, v: &Vector) -> Vector {
        let n = self.n;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for m in 0..n {
                    out[m] += w * table[base + m];
                }
            }
        }
        out
    }

    pub fn bracket(&self, u: &Vector, v: &Vector) -> Vector {
        self.bilinear(&self.structure, u, v)
    }

    /// ∇_u v for left-invariant fields.
    pub fn nabla(&self, u: &Vector, v: &Vector) -> Vector {
        self.bilinear(&self.christoffel, u, v)
    }

    /// R(u,v)w = ∇_u∇_v w − ∇_v∇_u w − ∇_{[u,v]} w.
    pub fn riemann(&self, u: &Vector, v: &Vector, w: &Vector) -> Vector {
        let a = self.nabla(u, &self.nabla(v, w));
        let b = self.nabla(v, &self.nabla(u, w));
        let c = self.nabla(&self.bracket(u, v), w);
        a - b - c
    }

    fn unit(&self, i: usize) -> Vector {
        let mut e = Vector::zeros(self.n);
        e[i] = 1.0;
        e
    }

    /// Full tensor R[i][j][a][b] = ⟨R(e_i, e_j) e_a, e_b⟩ (flattened).
    pub fn riemann_tensor(&self) -> RiemannTensor {
        let n = self.n;
        let mut data = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                for a in 0..n {
                    let r = self.riemann(&self.unit(i), &self.unit(j), &self.unit(a));
                    for b in 0..n {
                        data[((i * n + j) * n + a) * n + b] = r[b];
                        data[((j * n + i) * n + a) * n + b] = -r[b];
                    }
                }
            }
        }
        RiemannTensor { n, data }
    }

    /// Ricci form Ric(u,v) = Σ_i ⟨R(e_i, u) v, e_i⟩ as a matrix.
    pub fn ricci_matrix(&self) -> Mat {
        self.riemann_tensor().ricci()
    }

    pub fn scalar_curvature(&self) -> f64 {
        self.ricci_matrix().trace()
    }
}

/// ⟨R(e_i, e_j) e_a, e_b⟩ on an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    n: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        data[((i * n + j) * n + a) * n + b] = f(i, j, a, b);
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        self.data[((i * self.n + j) * self.n + a) * self.n + b]
    }

    /// ⟨R(u,v)w, x⟩ by multilinear contraction.
    pub fn eval(&self, u: &Vector, v: &Vector, w: &Vector, x: &Vector) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                for a in 0..n {
                    let uvw = uv * w[a];
                    if uvw == 0.0 {
                        continue;
                    }
                    let base = ((i * n + j) * n + a) * n;
                    for b in 0..n {
                        acc += uvw * self.data[base + b] * x[b];
                    }
                }
            }
        }
        acc
    }

    pub fn ricci(&self) -> Mat {
        let n = self.n;
        Mat::from_fn(n, n, |u, v| (0..n).map(|i| self.get(i, u, v, i)).sum())
    }

    /// Matrix of the curvature operator on 2-vectors in the lexicographic
    /// basis e_i∧e_j (i < j): M[(ij),(ab)] = ⟨R(e_i, e_j) e_a, e_b⟩. Its
    /// diagonal holds minus the sectional curvatures.
    pub fn curvature_operator(&self) -> Mat {
        let pairs = wedge_pairs(self.n);
        let m = pairs.len();
        Mat::from_fn(m, m, |p, q| {
            let (i, j) = pairs[p];
            let (a, b) = pairs[q];
            self.get(i, j, a, b)
        })
    }

    /// Maximal violation of antisymmetry, pair symmetry and the first
    /// Bianchi identity.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let r = self.get(i, j, a, b);
                        worst = worst.max((r + self.get(j, i, a, b)).abs());
                        worst = worst.max((r + self.get(i, j, b, a)).abs());
                        worst = worst.max((r - self.get(a, b, i, j)).abs());
                        let bianchi = r + self.get(j, a, i, b) + self.get(a, i, j, b);
                        worst = worst.max(bianchi.abs());
                    }
                }
            }
        }
        worst
    }

    /// Transforms the tensor to another orthonormal basis whose vectors are
    /// the columns of `q`.
    pub fn in_basis(&self, q: &Mat) -> RiemannTensor {
        let m = q.ncols();
        let cols: Vec<Vector> = (0..m).map(|c| q.column(c).into_owned()).collect();
        RiemannTensor::from_fn(m, |i, j, a, b| self.eval(&cols[i], &cols[j], &cols[a], &cols[b]))
    }
}

/// Lexicographic index pairs (i, j), i < j, of the 2-vector basis.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Coordinates of u∧v in the lexicographic 2-vector basis.
pub fn wedge(u: &Vector, v: &Vector) -> Vector {
    let n = u.len();
    let pairs = wedge_pairs(n);
    Vector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| u[i] * v[j] - u[j] * v[i]))
}

/// Lie bracket of frame fields from the coordinate coefficient matrix
/// `frame` (row a = field E_a) and its coordinate derivatives
/// `dframe[μ] = ∂_μ frame`, expressed in the frame:
/// [E_a, E_b] = Σ_c C[a][b][c] E_c.
pub fn frame_brackets(frame: &Mat, dframe: &[Mat]) -> Vec<Mat> {
    let n = frame.nrows();
    let inv = frame.clone().try_inverse().expect("frame must be invertible");
    (0..n)
        .map(|a| {
            let mut out = Mat::zeros(n, n);
            for b in 0..n {
                let mut coord = Vector::zeros(n);
                for nu in 0..n {
                    let mut s = 0.0;
                    for (mu, d) in dframe.iter().enumerate() {
                        s += frame[(a, mu)] * d[(b, nu)] - frame[(b, mu)] * d[(a, nu)];
                    }
                    coord[nu] = s;
                }
                // coord = Σ_c C_c frame_row_c  ⇒  C = coordᵀ · frame⁻¹.
                let c = inv.transpose() * coord;
                out.set_row(b, &c.transpose());
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// so(3) with ⟨[e_i,e_j],e_k⟩ = ε_ijk is the round 3-sphere of
    /// radius 2 (sectional curvature 1/4).
    #[test]
    fn so3_has_constant_quarter_curvature() {
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            match (i, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        let g = MetricLieAlgebra::from_structure(3, eps);
        let r = g.riemann_tensor();
        let e = |i| {
            let mut v = Vector::zeros(3);
            v[i] = 1.0;
            v
        };
        let sec = r.eval(&e(0), &e(1), &e(1), &e(0));
        assert!((sec - 0.25).abs() < 1e-14);
        assert!(r.symmetry_residual() < 1e-14);
        assert!((g.scalar_curvature() - 1.5).abs() < 1e-14);
    }
}
