//! Ricci matrices in the adapted basis and the tensor L on the surfaces of
//! H₃^{(a,b)} and SH₃^{(a,b)} (l = 3, Heisenberg type).

use super::{Hypersurface, SurfacePoint};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

/// Tolerance of the block-structure checks.
pub const BLOCK_TOL: f64 = 1e-9;
/// Accepted least-squares residual when decomposing onto the distribution.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// The adapted orthonormal tangent basis at a point.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    /// Columns K̃₁..K̃_{k−3} (the first one is the mixed X/Z[/T] direction).
    pub k_block: Vec<Vector>,
    pub e_i: Vector,
    pub e_j: Vector,
    pub e_k: Vector,
    pub z_j: Vector,
    pub z_k: Vector,
    /// 𝐭 on SN.
    pub t: Option<Vector>,
}

impl AdaptedBasis {
    /// Columns in the order K̃.., Ẽ_𝐢, Ẽ_𝐣, Ẽ_𝐤, 𝐣, 𝐤[, 𝐭].
    pub fn matrix(&self) -> Mat {
        let mut cols = self.k_block.clone();
        cols.extend([self.e_i.clone(), self.e_j.clone(), self.e_k.clone(), self.z_j.clone(), self.z_k.clone()]);
        if let Some(t) = &self.t {
            cols.push(t.clone());
        }
        let n = cols[0].len();
        linalg::columns_to_mat(&cols, n)
    }
}

/// r̃ on the adapted basis with its named entries.
#[derive(Debug, Clone)]
pub struct QuaternionicRicci {
    pub basis: AdaptedBasis,
    pub matrix: Mat,
    /// Largest deviation from the block pattern in which the pure K-block
    /// is εI and the mixed direction K̃₁ couples only with Ẽ_𝐢.
    pub structure_residual: f64,
    /// Largest deviation from the pattern with K̃₁ inside the εI block.
    pub reference_pattern_residual: f64,
    pub epsilon: f64,
    pub e_ll: f64,
    pub e_big_l: f64,
    pub e_zz: f64,
    pub a: f64,
    pub b: f64,
    /// (A² + B² − E_LL·E_z̃z̃)².
    pub criterion: f64,
}

/// The named scalars from their reference closed forms, for comparison with [`QuaternionicRicci`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRicciScalars {
    pub epsilon: f64,
    pub e_ll: f64,
    pub e_big_l: f64,
    pub e_zz: f64,
    pub a: f64,
    pub b: f64,
}

/// r̃ on the solvable adapted basis.
#[derive(Debug, Clone)]
pub struct SolvableRicci {
    pub basis: AdaptedBasis,
    pub matrix: Mat,
    /// Largest deviation from the block pattern in which the pure K-block
    /// is σI and K̃₁, Ẽ_𝐢, 𝐭 form a coupled block.
    pub structure_residual: f64,
    /// Largest deviation from the pattern with K̃₁ inside the σI block.
    pub reference_pattern_residual: f64,
    pub sigma: f64,
    pub s_ll: f64,
    pub s_tt: f64,
    pub s_lt: f64,
    /// min |σ − μ| over the eigenvalues μ of r̃ on the complement of K.
    pub distinctness_margin: f64,
    /// S_ll·S_𝐭𝐭 − S_l𝐭² (the l/𝐭 block determinant after removing σ).
    pub lt_determinant: f64,
}

impl Hypersurface {
    fn require_quaternionic(&self) -> Result<()> {
        let space = self.ambient().nil().space();
        if space.l() != 3 || !space.is_heisenberg_type() {
            return Err(Error::WrongGroupFamily(format!(
                "needs a Heisenberg-type space with l = 3, got l = {} (Heisenberg residual {:.2e})",
                space.l(),
                space.heisenberg_residual()
            )));
        }
        Ok(())
    }

    fn embed_x(&self, x: &Vector) -> Vector {
        let mut v = Vector::zeros(self.dim());
        v.rows_mut(0, self.k()).copy_from(x);
        v
    }

    fn embed_z(&self, z: &Vector) -> Vector {
        let mut v = Vector::zeros(self.dim());
        v.rows_mut(self.k(), self.l()).copy_from(z);
        v
    }

    /// 𝐢 = Z/|Z| and a right-handed completion (𝐣, 𝐤).
    fn z_frame(&self, p: &SurfacePoint) -> Result<(Vector, Vector, Vector)> {
        let zn = p.z.norm();
        if zn < 1e-12 {
            return Err(Error::InvalidParameter("the adapted basis needs Z ≠ 0".into()));
        }
        let i = &p.z / zn;
        let perp = linalg::orthogonal_complement(&[i.clone()], 3, 1e-12);
        let j = perp[0].clone();
        let k = i.cross(&j);
        Ok((i, j, k))
    }

    /// Adapted basis: Ẽ_𝐢 ∝ J_𝐢𝛎_X, Ẽ_𝐣 = J_𝐣X₀, Ẽ_𝐤 = J_𝐤X₀, the
    /// Z-vectors 𝐣, 𝐤, 𝐭 on SN, and K̃ the orthonormal tangent complement.
    pub fn adapted_basis(&self, p: &SurfacePoint) -> Result<AdaptedBasis> {
        self.require_quaternionic()?;
        let (i, j, k) = self.z_frame(p)?;
        let nu = self.normal(p)?;
        let x0 = p.x.normalize();
        let nux = nu.rows(0, self.k()).into_owned();
        let e_i = self.embed_x(&(self.j(&i) * &nux).normalize());
        let e_j = self.embed_x(&(self.j(&j) * &x0));
        let e_k = self.embed_x(&(self.j(&k) * &x0));
        let z_j = self.embed_z(&j);
        let z_k = self.embed_z(&k);
        let t = if self.is_solvable() { Some(self.unit_t(p)?) } else { None };
        let mut named = vec![nu.clone(), e_i.clone(), e_j.clone(), e_k.clone(), z_j.clone(), z_k.clone()];
        if let Some(t) = &t {
            named.push(t.clone());
        }
        // The mixed direction first: tangent, in span{𝛎_X, 𝐢[, 𝐓]}.
        let mut mixed_span = vec![self.embed_x(&nux), self.embed_z(&i)];
        if self.is_solvable() {
            let mut tv = Vector::zeros(self.dim());
            tv[self.dim() - 1] = 1.0;
            mixed_span.push(tv);
        }
        let on = linalg::orthonormal_span(&named, 1e-12);
        let mut k_block = Vec::new();
        let mut acc = on.clone();
        for v in mixed_span.iter().chain((0..self.k()).map(|a| {
            let mut e = Vector::zeros(self.k());
            e[a] = 1.0;
            self.embed_x(&e)
        }).collect::<Vec<_>>().iter())
        {
            let mut r = v.clone();
            for _ in 0..2 {
                for b in &acc {
                    r -= b * b.dot(&r);
                }
            }
            let nr = r.norm();
            if nr > 1e-8 {
                let u = r / nr;
                acc.push(u.clone());
                k_block.push(u);
            }
        }
        let expected = self.dim() - 1 - 5 - usize::from(self.is_solvable());
        if k_block.len() != expected {
            return Err(Error::Degenerate(k_block.len() as f64));
        }
        Ok(AdaptedBasis { k_block, e_i, e_j, e_k, z_j, z_k, t })
    }

    /// r̃ on the adapted basis, its block structure and the named entries
    /// ε, E_ll, E_LL, E_z̃z̃, A, B and the determinant criterion.
    pub fn ricci_matrix_h3(&self, p: &SurfacePoint) -> Result<QuaternionicRicci> {
        if self.is_solvable() {
            return Err(Error::WrongGroupFamily("use the solvable Ricci matrix on SH₃".into()));
        }
        let basis = self.adapted_basis(p)?;
        let m = self.ricci_in_basis(p, &basis.matrix())?;
        let nk = basis.k_block.len();
        let (li, lj, lk, zj) = (nk, nk + 1, nk + 2, nk + 3);
        let epsilon = if nk > 1 { m[(1, 1)] } else { m[(0, 0)] };
        let e_ll = m[(li, li)] - epsilon;
        let e_big_l = m[(lj, lj)] - epsilon;
        let e_zz = m[(zj, zj)] - epsilon;
        let a = m[(lj, zj)];
        let b = m[(lk, zj)];
        let (structure_residual, reference_pattern_residual) = pattern_residuals(&m, nk, epsilon, &[li]);
        Ok(QuaternionicRicci {
            basis,
            matrix: m,
            structure_residual,
            reference_pattern_residual,
            epsilon,
            e_ll,
            e_big_l,
            e_zz,
            a,
            b,
            criterion: (a * a + b * b - e_big_l * e_zz).powi(2),
        })
    }

    /// ε, E_ll, E_LL, E_z̃z̃, A, B from the reference closed forms, with
    /// d₀ = ½D′ + τD″ and Ω = 4(4 + τ(D′)²)^{−1}.
    pub fn reference_ricci_scalars(&self, p: &SurfacePoint) -> Result<ReferenceRicciScalars> {
        self.require_quaternionic()?;
        let jet = self.check(p)?;
        let k = self.k() as f64;
        let tau = p.tau();
        let (d, d1, d2) = (jet.d, jet.d_tau, jet.d_tautau);
        let c2 = 1.0 / (4.0 * d + d1 * d1 * (tau * d + 4.0 * tau));
        let ci = 1.0 / c2.sqrt();
        let omega = 4.0 / (4.0 + tau * d1 * d1);
        let oi = 1.0 / omega;
        let d0 = 0.5 * d1 + tau * d2;
        let sd = d.sqrt();
        Ok(ReferenceRicciScalars {
            epsilon: -1.5 + 2.0 * c2 * (2.0 * (k - 2.0) - d * d1 - d0 * d * omega),
            e_ll: c2
                * (4.0 + (3.0 * d - 4.0) * oi - d0 * d * (2.0 * (k - 3.0) + d * (d0 - d1)) * omega
                    + 2.0 * (d0 * d).powi(2) * omega * omega),
            e_big_l: c2
                * (4.0 + (6.0 * d - 4.0) * oi - 0.5 * d * d1 * (2.0 * (k - 3.0) - 0.5 * d * d1)
                    + 0.5 * d * d * d1 * d0 * omega),
            e_zz: k / 4.0 + 1.5
                - 2.0
                    * c2
                    * (0.5 * d * oi
                        - (1.0 + d1) * (2.0 * (k - 2.0) - d1 * (d - 2.0))
                        - d * (d1 + 1.0) * d0 * omega),
            a: c2
                * sd
                * ((3.0 * ci - sd) * oi / 8.0 + 6.0 * ci + d * (1.0 + d1) * d0 * omega
                    - (2.0 * sd * d1 * (d1 + 2.0) + (1.0 + d1) * (2.0 * (k - 1.0) - d * d1))),
            b: c2 * sd * ci * d1 * tau.sqrt() * (k + 2.0 - 0.5 * d * d1 - 0.5 * d * d0 * omega),
        })
    }

    /// r̃ on the solvable adapted basis with σ, the l/𝐭 coupling block and
    /// the distinctness margin of σ.
    pub fn solv_ricci_matrix(&self, p: &SurfacePoint) -> Result<SolvableRicci> {
        if !self.is_solvable() {
            return Err(Error::WrongGroupFamily("the solvable Ricci matrix needs SH₃".into()));
        }
        let basis = self.adapted_basis(p)?;
        let m = self.ricci_in_basis(p, &basis.matrix())?;
        let nk = basis.k_block.len();
        let (li, ti) = (nk, nk + 5);
        let sigma = if nk > 1 { m[(1, 1)] } else { m[(0, 0)] };
        let (structure_residual, reference_pattern_residual) = pattern_residuals(&m, nk, sigma, &[li, ti]);
        let rest: Vec<usize> = if nk > 1 { std::iter::once(0).chain(nk..m.nrows()).collect() } else { (0..m.nrows()).collect() };
        let sub = Mat::from_fn(rest.len(), rest.len(), |r, c| m[(rest[r], rest[c])]);
        let (vals, _) = linalg::eigh(&sub);
        let distinctness_margin = vals.iter().fold(f64::INFINITY, |acc, v| acc.min((v - sigma).abs()));
        let s_ll = m[(li, li)] - sigma;
        let s_tt = m[(ti, ti)] - sigma;
        let s_lt = m[(li, ti)];
        Ok(SolvableRicci {
            basis,
            matrix: m,
            structure_residual,
            reference_pattern_residual,
            sigma,
            s_ll,
            s_tt,
            s_lt,
            distinctness_margin,
            lt_determinant: s_ll * s_tt - s_lt * s_lt,
        })
    }

    /// Frame coefficients of the distribution ρ ⊕ z̃ (⊕ 𝐭): the X-rotations
    /// x ↦ J_αx, an orthonormal basis of the Z-rotations of Z and, on SN, 𝐭.
    pub fn distribution(&self, p: &SurfacePoint) -> Result<(Vec<Vector>, Vec<Vector>)> {
        self.require_quaternionic()?;
        self.check(p)?;
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let nil = self.ambient().nil();
        let rho: Vec<Vector> = (0..l)
            .map(|a| {
                let mut v = Vector::zeros(n);
                v.rows_mut(0, k).copy_from(&(nil.space().mat(a) * &p.x));
                self.from_coordinates(p, &v)
            })
            .collect();
        let mut rest = Vec::new();
        for (b, c) in [(0, 1), (0, 2), (1, 2)] {
            let mut ez = Vector::zeros(l);
            ez[b] = -p.z[c];
            ez[c] = p.z[b];
            let mut v = Vector::zeros(n);
            v.rows_mut(k, l).copy_from(&ez);
            rest.push(self.from_coordinates(p, &v));
        }
        let mut rest = linalg::orthonormal_span(&rest, 1e-10);
        if self.is_solvable() {
            rest.push(self.unit_t(p)?);
        }
        Ok((rho, rest))
    }

    /// Orthonormal basis of K: the tangent complement of the distribution.
    pub fn k_distribution(&self, p: &SurfacePoint) -> Result<Vec<Vector>> {
        let (rho, rest) = self.distribution(p)?;
        let mut span = vec![self.normal(p)?];
        span.extend(rho);
        span.extend(rest);
        Ok(linalg::orthogonal_complement(&span, self.dim(), 1e-10))
    }

    /// L(U, V): the K-component of [U, V] for U, V in ρ ⊕ z̃ (⊕ 𝐭), in
    /// frame coefficients. Brackets with the Z-rotations and with 𝐭
    /// vanish, and [ρ_α, ρ_β] = (J_βJ_α − J_αJ_β)x.
    pub fn tensor_l(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<Vector> {
        let (rho, rest) = self.distribution(p)?;
        let mut all = rho.clone();
        all.extend(rest);
        let gens = linalg::columns_to_mat(&all, self.dim());
        let coeff = |w: &Vector| -> Result<Vector> {
            let c = linalg::lstsq(&gens, w);
            let r = (&gens * &c - w).norm();
            if r > DISTRIBUTION_TOL * w.norm().max(1.0) {
                return Err(Error::NotInDistribution(r));
            }
            Ok(c)
        };
        let (cu, cv) = (coeff(u)?, coeff(v)?);
        let brackets = self.rho_brackets(p);
        let mut out = Vector::zeros(self.dim());
        for a in 0..3 {
            for b in 0..3 {
                out += &brackets[a * 3 + b] * (cu[a] * cv[b]);
            }
        }
        let kb = self.k_distribution(p)?;
        let mut proj = Vector::zeros(self.dim());
        for e in &kb {
            proj += e * e.dot(&out);
        }
        Ok(proj)
    }

    /// Frame coefficients of [ρ_α, ρ_β], row-major over (α, β).
    fn rho_brackets(&self, p: &SurfacePoint) -> Vec<Vector> {
        let (k, n) = (self.k(), self.dim());
        let nil = self.ambient().nil();
        let mut out = Vec::with_capacity(9);
        for a in 0..3 {
            for b in 0..3 {
                let (ja, jb) = (nil.space().mat(a), nil.space().mat(b));
                let mut v = Vector::zeros(n);
                v.rows_mut(0, k).copy_from(&((jb * ja - ja * jb) * &p.x));
                out.push(self.from_coordinates(p, &v));
            }
        }
        out
    }

    /// Norm of L on an orthonormal basis of the distribution:
    /// (Σ_{a<b} |L(e_a, e_b)|²)^{½}.
    pub fn tensor_l_norm(&self, p: &SurfacePoint) -> Result<f64> {
        let (rho, rest) = self.distribution(p)?;
        let mut all = rho;
        all.extend(rest);
        let on = linalg::orthonormal_span(&all, 1e-10);
        let mut s = 0.0;
        for a in 0..on.len() {
            for b in (a + 1)..on.len() {
                s += self.tensor_l(p, &on[a], &on[b])?.norm_squared();
            }
        }
        Ok(s.sqrt())
    }
}

/// Residuals of r̃ (basis K̃₁, K̃₂.., Ẽ_𝐢, Ẽ_𝐣, Ẽ_𝐤, 𝐣, 𝐤[, 𝐭]) against the
/// block patterns. Both require the pure K-block to be `eig`·I, the
/// L-block (Ẽ_𝐣, Ẽ_𝐤) and the z̃-block (𝐣, 𝐤) to be scalar, their coupling
/// to have the form [[A, −B], [B, A]], and no other couplings except those
/// among `coupled`. The corrected pattern lets K̃₁ couple with `coupled`;
/// the reference one puts K̃₁ into the `eig`·I block.
fn pattern_residuals(m: &Mat, nk: usize, eig: f64, coupled: &[usize]) -> (f64, f64) {
    let (lj, lk, zj, zk) = (nk + 1, nk + 2, nk + 3, nk + 4);
    let build = |mixed_free: bool| -> Mat {
        let mut e = Mat::zeros(m.nrows(), m.ncols());
        for q in 0..nk {
            e[(q, q)] = eig;
        }
        let mut free: Vec<usize> = coupled.to_vec();
        if mixed_free {
            free.push(0);
        }
        for &r in &free {
            for &c in &free {
                e[(r, c)] = m[(r, c)];
            }
        }
        let (ll, zz) = (0.5 * (m[(lj, lj)] + m[(lk, lk)]), 0.5 * (m[(zj, zj)] + m[(zk, zk)]));
        let (a, b) = (0.5 * (m[(lj, zj)] + m[(lk, zk)]), 0.5 * (m[(lk, zj)] - m[(lj, zk)]));
        e[(lj, lj)] = ll;
        e[(lk, lk)] = ll;
        e[(zj, zj)] = zz;
        e[(zk, zk)] = zz;
        for (r, c, v) in [(lj, zj, a), (lj, zk, -b), (lk, zj, b), (lk, zk, a)] {
            e[(r, c)] = v;
            e[(c, r)] = v;
        }
        e
    };
    let dev = |e: &Mat| linalg::max_abs(&(m - e));
    (dev(&build(nk > 1)), dev(&build(false)))
}
