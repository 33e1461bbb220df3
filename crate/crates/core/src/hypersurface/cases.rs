//! Closed case formulas for the second fundamental form, the normal
//! curvature term and the Hopf-hull scalar curvature. They are evaluated
//! exactly as written; the analytic routes in the parent module are the
//! reference they are checked against.

use super::{Hypersurface, ProfileJet, SurfacePoint};
use crate::error::{Error, Result};
use crate::linalg::Vector;

/// Accepted violation of the case-formula preconditions
/// (X̃ ⊥ 𝛎_X, Z̃ ⊥ Z).
pub const CASE_TOL: f64 = 1e-9;

/// A tangent vector split along the case formulas: X̃ ⊥ 𝛎_X, Z̃ ⊥ Z and a
/// multiple of the unit tangent 𝐭 (solvable only).
#[derive(Debug, Clone)]
pub struct CaseSplit {
    pub x: Vector,
    pub z: Vector,
    pub t_coeff: f64,
}

/// Quantities shared by the case formulas at one point.
#[derive(Debug, Clone)]
struct CaseData {
    jet: ProfileJet,
    c_norm: f64,
    nu: Vector,
    t_unit: Option<Vector>,
    x0: Vector,
    tau: f64,
    t: f64,
    c: f64,
}

impl Hypersurface {
    fn case_data(&self, p: &SurfacePoint) -> Result<CaseData> {
        let jet = self.check(p)?;
        let nu = self.normal(p)?;
        let g = self.gradient(p)?;
        let t = if self.is_solvable() { p.t } else { 1.0 };
        Ok(CaseData {
            jet,
            c_norm: 1.0 / g.norm(),
            t_unit: if self.is_solvable() { Some(self.unit_t(p)?) } else { None },
            nu,
            x0: p.x.normalize(),
            tau: p.tau(),
            t,
            c: self.c(),
        })
    }

    /// Unit tangent 𝐭 in span{X/|X|, 𝐓}, oriented with positive 𝐓-part:
    /// ∝ c t^{½} D_t X₀ + 2√D 𝐓.
    pub fn unit_t(&self, p: &SurfacePoint) -> Result<Vector> {
        if !self.is_solvable() {
            return Err(Error::WrongGroupFamily("the unit tangent 𝐭 exists only on the solvable extension".into()));
        }
        let jet = self.check(p)?;
        let (k, n) = (self.k(), self.dim());
        let x0 = p.x.normalize();
        let a = self.c() * p.t.sqrt() * jet.d_t;
        let b = 2.0 * jet.d.sqrt();
        let s = 1.0 / (a * a + b * b).sqrt();
        let mut v = Vector::zeros(n);
        v.rows_mut(0, k).copy_from(&(&x0 * (a * s)));
        v[n - 1] = b * s;
        Ok(v)
    }

    /// Reference form of 𝐭: (4D + (ctD_t)²)^{−½}(ctD_t X₀ + 2D^{½}𝐓).
    pub fn reference_unit_t(&self, p: &SurfacePoint) -> Result<Vector> {
        if !self.is_solvable() {
            return Err(Error::WrongGroupFamily("the unit tangent 𝐭 exists only on the solvable extension".into()));
        }
        let jet = self.check(p)?;
        let (k, n) = (self.k(), self.dim());
        let a = self.c() * p.t * jet.d_t;
        let s = 1.0 / (4.0 * jet.d + a * a).sqrt();
        let mut v = Vector::zeros(n);
        v.rows_mut(0, k).copy_from(&(p.x.normalize() * (a * s)));
        v[n - 1] = 2.0 * jet.d.sqrt() * s;
        Ok(v)
    }

    /// Splits a tangent vector into the pieces the case formulas accept.
    pub fn case_split(&self, p: &SurfacePoint, u: &Vector) -> Result<CaseSplit> {
        let d = self.case_data(p)?;
        self.split_with(p, &d, u)
    }

    fn split_with(&self, p: &SurfacePoint, d: &CaseData, u: &Vector) -> Result<CaseSplit> {
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let mut rest = u.clone();
        let mut t_coeff = 0.0;
        if let Some(tu) = &d.t_unit {
            t_coeff = u[n - 1] / tu[n - 1];
            rest -= tu * t_coeff;
        }
        let x = rest.rows(0, k).into_owned();
        let z = rest.rows(k, l).into_owned();
        let nux = d.nu.rows(0, k).into_owned();
        let rx = if nux.norm() > 0.0 { x.dot(&nux) / nux.norm() } else { 0.0 };
        let rz = if p.z.norm() > 0.0 { z.dot(&p.z) / p.z.norm() } else { 0.0 };
        let r = rx.abs().max(rz.abs());
        if r > CASE_TOL * u.norm().max(1.0) {
            return Err(Error::NotInDistribution(r));
        }
        Ok(CaseSplit { x, z, t_coeff })
    }

    /// Nilpotent X̃/X̃ expression without the factor C:
    /// 2⟨X̃₁,X̃₂⟩ − Σ_β d_β⟨J_βX,X̃₁⟩⟨J_βX,X̃₂⟩ with d₀ = ½D′ + τD″ on
    /// e₀ = Z/|Z| and d_i = ½D′ on its complement.
    fn xx_core(&self, p: &SurfacePoint, jet: &ProfileJet, x1: &Vector, x2: &Vector) -> f64 {
        let nil = self.ambient().nil();
        let mut s = 0.0;
        for a in 0..self.l() {
            let jx = nil.space().mat(a) * &p.x;
            s += jx.dot(x1) * jx.dot(x2);
        }
        let jzx = self.j(&p.z) * &p.x;
        2.0 * x1.dot(x2) - 0.5 * jet.d_tau * s - jet.d_tautau * jzx.dot(x1) * jzx.dot(x2)
    }

    /// M on the case split X̃/X̃, X̃/Z̃, Z̃/Z̃ (and on SN the 𝐭-cases),
    /// extended bilinearly over [`Hypersurface::case_split`]. On SN the
    /// cases are
    /// Z̃₁/Z̃₂: Ct(c²D_t − 2tD_τ)⟨Z̃₁,Z̃₂⟩,
    /// X̃/Z̃: −½⟨J_{Z̃}(𝛎_X + 2Ct^{3/2}D_τX), X̃⟩,
    /// X̃/𝐭: 2cCst^{3/2}(D_t(1 + ¼c²D_t)⟨X₀,X̃⟩ − D√τD_{tτ}⟨J_{Z₀}X₀,X̃⟩),
    /// Z̃/𝐭: −½cCstD_tD_τ√(Dτ)⟨J_{Z₀}X₀, J_{Z̃}X₀⟩,
    /// 𝐭/𝐭: Ct(2(1 + ¼c²D_t)α² − c²tD_{tt}β²),
    /// with 𝐭 = αX₀ + β𝐓 and s = (4D + c²tD_t²)^{−½}.
    pub fn case_second_form(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        self.case_form(p, u, v, false)
    }

    /// The same cases with the uncorrected reference solvable formulas:
    /// Z̃/Z̃ = Ct(c² − 2D_τ), X̃/Z̃ scaled by t^{½}, the 𝐭-cases with
    /// P = 2cCt(4D + (ctD_t)²)^{−½} and 𝐭/𝐭 carrying −c²(tD_t + t²D_{tt}).
    /// On N both versions coincide.
    pub fn reference_case_second_form(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        self.case_form(p, u, v, true)
    }

    fn case_form(&self, p: &SurfacePoint, u: &Vector, v: &Vector, literal: bool) -> Result<f64> {
        let d = self.case_data(p)?;
        let su = self.split_with(p, &d, u)?;
        let sv = self.split_with(p, &d, v)?;
        let jet = &d.jet;
        let cn = d.c_norm;
        let (t, c, tau) = (d.t, d.c, d.tau);
        let nux = d.nu.rows(0, self.k()).into_owned();
        let x_scale = if literal { 1.0 } else { t.powf(1.5) };
        let xz = |x: &Vector, z: &Vector| -> f64 {
            let w = &nux + &p.x * (2.0 * cn * x_scale * jet.d_tau);
            -0.5 * (self.j(z) * w).dot(x)
        };
        if !self.is_solvable() {
            let xx = cn * self.xx_core(p, jet, &su.x, &sv.x);
            let zz = -2.0 * cn * jet.d_tau * su.z.dot(&sv.z);
            return Ok(xx + zz + xz(&su.x, &sv.z) + xz(&sv.x, &su.z));
        }
        let xx = t * cn * self.xx_core(p, jet, &su.x, &sv.x) + 0.5 * c * c * cn * t * jet.d_t * su.x.dot(&sv.x);
        let zz_coeff = if literal { c * c - 2.0 * jet.d_tau } else { c * c * jet.d_t - 2.0 * t * jet.d_tau };
        let zz = cn * t * zz_coeff * su.z.dot(&sv.z);
        let mixed = if literal { t.sqrt() } else { 1.0 } * (xz(&su.x, &sv.z) + xz(&sv.x, &su.z));
        let z0 = if tau > 0.0 { p.z.normalize() } else { Vector::zeros(self.l()) };
        let jz0x0 = self.j(&z0) * &d.x0;
        let tu = d.t_unit.as_ref().expect("solvable case data carries 𝐭");
        let n = self.dim();
        let (alpha, beta) = (tu.rows(0, self.k()).norm(), tu[n - 1]);
        let growth = jet.d_t * (1.0 + 0.25 * c * c * jet.d_t);
        let twist = jet.d * tau.sqrt() * jet.d_ttau;
        let (x_coeff, twist_coeff, z_coeff, tt_val) = if literal {
            let root = 1.0 / (4.0 * jet.d + (c * t * jet.d_t).powi(2)).sqrt();
            let pp = 2.0 * c * cn * t * root;
            let pstar = 0.5 * c * cn * root * t.powf(1.5) * tau.sqrt() * jet.d.sqrt() * jet.d_tau * jet.d_t;
            let tt = cn
                * (2.0 * t * (1.0 + 0.25 * c * c * jet.d_t) * alpha * alpha
                    - c * c * (t * jet.d_t + t * t * jet.d_tt) * beta * beta);
            (pp * t * growth, -pp * twist, pstar, tt)
        } else {
            let s = 1.0 / (4.0 * jet.d + c * c * t * jet.d_t * jet.d_t).sqrt();
            let px = 2.0 * c * cn * s * t.powf(1.5);
            let pz = -0.5 * c * cn * s * t * jet.d_t * jet.d_tau * (jet.d * tau).sqrt();
            let tt = cn * t * (2.0 * (1.0 + 0.25 * c * c * jet.d_t) * alpha * alpha - c * c * t * jet.d_tt * beta * beta);
            (px * growth, -px * twist, pz, tt)
        };
        let xt = |x: &Vector| x_coeff * d.x0.dot(x) + twist_coeff * jz0x0.dot(x);
        let zt = |z: &Vector| z_coeff * jz0x0.dot(&(self.j(z) * &d.x0));
        Ok(xx + zz
            + mixed
            + sv.t_coeff * (xt(&su.x) + zt(&su.z))
            + su.t_coeff * (xt(&sv.x) + zt(&sv.z))
            + su.t_coeff * sv.t_coeff * tt_val)
    }

    /// ⟨R(𝛎,u)v,𝛎⟩ on N from the case formulas
    /// X̃₁/X̃₂: −¾Σ_α⟨X̃₁,J_α𝛎_X⟩⟨X̃₂,J_α𝛎_X⟩ + ¼⟨J_{𝛎_Z}X̃₁,J_{𝛎_Z}X̃₂⟩,
    /// Z̃/X̃: ½⟨(J_{𝛎_Z}J_{Z̃} − ½J_{Z̃}J_{𝛎_Z})X̃, 𝛎_X⟩,
    /// Z̃₁/Z̃₂: ¼⟨J_{Z̃₁}𝛎_X, J_{Z̃₂}𝛎_X⟩,
    /// extended bilinearly over the X- and Z-parts of u and v.
    pub fn case_normal_curvature(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        if self.is_solvable() {
            return Err(Error::WrongGroupFamily("the normal-curvature case formulas concern the nilpotent group".into()));
        }
        let nu = self.normal(p)?;
        let (k, l) = (self.k(), self.l());
        let nil = self.ambient().nil();
        let (nux, nuz) = (nu.rows(0, k).into_owned(), nu.rows(k, l).into_owned());
        let (ux, uz) = (u.rows(0, k).into_owned(), u.rows(k, l).into_owned());
        let (vx, vz) = (v.rows(0, k).into_owned(), v.rows(k, l).into_owned());
        let jnz = self.j(&nuz);
        let mut xx = 0.25 * (&jnz * &ux).dot(&(&jnz * &vx));
        for a in 0..l {
            let jn = nil.space().mat(a) * &nux;
            xx -= 0.75 * ux.dot(&jn) * vx.dot(&jn);
        }
        let zx = |z: &Vector, x: &Vector| -> f64 {
            let jz = self.j(z);
            0.5 * ((&jnz * &jz - &jz * &jnz * 0.5) * x).dot(&nux)
        };
        let zz = 0.25 * (self.j(&uz) * &nux).dot(&(self.j(&vz) * &nux));
        Ok(xx + zx(&uz, &vx) + zx(&vz, &ux) + zz)
    }
}

/// The terms of the Hopf-hull scalar curvature in closed form, for a point
/// with |Z|² = τ whose X lies in a common eigenspace of L₀ = J₀² and
/// L_⊥ = Σ_{i>0} J_i² (eigenvalues λ₀, λ_⊥).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfClosedForm {
    pub kappa: f64,
    pub minus_two_ricci_normal: f64,
    pub trace_b: f64,
    pub minus_trace_b2: f64,
}

impl HopfClosedForm {
    pub fn total(&self) -> f64 {
        self.kappa + self.minus_two_ricci_normal + self.trace_b * self.trace_b + self.minus_trace_b2
    }
}

/// Inputs of the Hopf-hull closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfParams {
    pub k: usize,
    pub l: usize,
    /// Eigenvalue of L₀ = J₀² on X₀.
    pub lambda0: f64,
    /// Eigenvalue of L_⊥ = Σ_{i>0} J_i² on X₀.
    pub lambda_perp: f64,
    pub trace_l0: f64,
    pub trace_lperp: f64,
    /// Σ_{i,j>0} ⟨J_iX₀, J_jX₀⟩².
    pub gram_sq: f64,
}

impl HopfParams {
    /// Values on a Heisenberg-type space: λ₀ = −1, λ_⊥ = −(l−1).
    pub fn heisenberg_type(k: usize, l: usize) -> Self {
        let (kf, lf) = (k as f64, l as f64);
        Self {
            k,
            l,
            lambda0: -1.0,
            lambda_perp: -(lf - 1.0),
            trace_l0: -kf,
            trace_lperp: -kf * (lf - 1.0),
            gram_sq: lf - 1.0,
        }
    }
}

/// The uncorrected reference closed form, term by term from the
/// coefficient list: κ = ¼(λ₀ + Tr L_⊥), C² = (4D − λ₀τD(D′)² + 4τ)^{−1},
/// and the t in the fourth term read as τ.
pub fn hopf_closed_form_reference(par: &HopfParams, tau: f64, jet: &ProfileJet) -> HopfClosedForm {
    let (k, l) = (par.k as f64, par.l as f64);
    let (l0, lp) = (par.lambda0, par.lambda_perp);
    let (d, d1, d2) = (jet.d, jet.d_tau, jet.d_tautau);
    let omega = 4.0 / (4.0 - l0 * tau * d1 * d1);
    let c2 = 1.0 / (4.0 * d - l0 * tau * d * d1 * d1 + 4.0 * tau);
    let c = c2.sqrt();
    let d0 = 0.5 * d1 + tau * d2;
    HopfClosedForm {
        kappa: 0.25 * (l0 + par.trace_lperp),
        minus_two_ricci_normal: c2 * (-4.0 * d * lp + l0 * tau * (-4.0 * d + d1 * d1 * (2.0 + d * (lp + l0)))),
        trace_b: c * (2.0 * (k - 1.0 - d1 * (l - 1.0)) + d * (0.5 * lp * d1 + l0 * d0 * omega)),
        minus_trace_b2: -c2
            * (4.0 * (k - 1.0 + d1 * d1 * (l - 1.0))
                + lp * d * (2.0 * (d1 - (1.0 + d1).powi(2)) + 0.5 * l0 * tau)
                + 4.0 * l0 * d * d0 * omega
                + (l0 * d * d0 * omega).powi(2)),
    }
}

/// The closed form at the Hopf-hull point X = √D·X₀, Z = √τ·Z₀ (Z₀ a unit
/// anticommutator, X₀ a common unit eigenvector of L₀ and L_⊥), with
/// C^{−2} = D(4 − λ₀τ(D′)²) + 4τ(D′)², Ω = 4/(4 − λ₀τ(D′)²), d₀ = ½D′ + τD″.
///
/// The Weingarten map splits into the block on (X₀, J₀X₀)^⊥ ⊕ Z₀^⊥, where
/// it is C(2 − ½DD′Q) ⊕ −2CD′ with couplings C√D(−(1+D′)J_ζX₀ − ½D′√τJ₀J_ζX₀),
/// and the block on the X-tangent ξ ∈ span(X₀, J₀X₀) and the mixed
/// direction m ∈ span(𝛎_X, Z₀):
/// M(ξ,ξ) = C(2 + λ₀Dd₀Ω), M(ξ,m) = −C²D√(−λ₀)(4d₀Ω + 2/Ω),
/// M(m,m) = 8C³(τ(D′)² − 2d₀DΩ).
pub fn hopf_closed_form(par: &HopfParams, tau: f64, jet: &ProfileJet) -> HopfClosedForm {
    let (k, l) = (par.k as f64, par.l as f64);
    let (l0, lp) = (par.lambda0, par.lambda_perp);
    let (d, d1, d2) = (jet.d, jet.d_tau, jet.d_tautau);
    let n2 = 4.0 - l0 * tau * d1 * d1;
    let omega = 4.0 / n2;
    let c2 = 1.0 / (d * n2 + 4.0 * tau * d1 * d1);
    let c = c2.sqrt();
    let d0 = 0.5 * d1 + tau * d2;
    let m_xi = c * (2.0 + l0 * d * d0 * omega);
    let m_cross = -c2 * d * (-l0).sqrt() * (4.0 * d0 * omega + 2.0 / omega);
    let m_mix = 8.0 * c2 * c * (tau * d1 * d1 - 2.0 * d0 * d * omega);
    let first_block_trace = c * (2.0 * (k - 2.0) + 0.5 * d1 * d * lp - 2.0 * d1 * (l - 1.0));
    let first_block_sq = c2
        * (4.0 * (k - 2.0) + 2.0 * d1 * d * lp + 0.25 * d1 * d1 * d * d * par.gram_sq + 4.0 * d1 * d1 * (l - 1.0)
            - 2.0 * d * lp * ((1.0 + d1).powi(2) - 0.25 * l0 * tau * d1 * d1));
    HopfClosedForm {
        kappa: 0.25 * (par.trace_l0 + par.trace_lperp),
        minus_two_ricci_normal: c2 * (-(l0 + lp) * d * n2 + 2.0 * d1 * d1 * tau * par.trace_l0),
        trace_b: first_block_trace + m_xi + m_mix,
        minus_trace_b2: -(first_block_sq + m_xi * m_xi + 2.0 * m_cross * m_cross + m_mix * m_mix),
    }
}
