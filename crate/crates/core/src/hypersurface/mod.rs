//! Sphere-type hypersurfaces |X|² = D(|Z|²[, t]) in N and SN: normals,
//! second fundamental forms, Gauss-equation curvature, Hopf hulls, Ricci
//! matrices on the quaternionic families, geodesic spheres and the tensor L.
//!
//! Tangent and normal vectors are column vectors of coefficients in the
//! orthonormal invariant frame (𝐗_i, 𝐙_α[, 𝐓]) at the point; coordinate
//! vectors (x, z[, t]) appear only where stated.

pub mod cases;
pub mod cayley;
pub mod hull;
pub mod quaternionic;

pub use cases::*;
pub use cayley::*;
pub use hull::*;
pub use quaternionic::*;

use crate::algebra::MetricLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::nilgeom::MetricGroup;
use crate::solvgeom::SolvGroup;

/// Accepted level-set residual |X|² − D, relative to max(1, D).
pub const ON_SURFACE_TOL: f64 = 1e-10;
/// Points with D below this value are rim points.
pub const RIM_EPS: f64 = 1e-8;
/// Accepted normal component of a tangent argument.
pub const TANGENT_TOL: f64 = 1e-9;

/// Supported profile functions D(τ[, t]) with τ = |Z|².
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileForm {
    /// Σ c·τ^i·t^j over (i, j, c).
    Polynomial(Vec<(u32, u32, f64)>),
    /// √(Q − τ) + Q*.
    SqrtShift { q: f64, q_star: f64 },
    /// 4((e^s + e^{−s} + 2)t − τ)^{½} − 4(t + 1).
    GeodesicSphere { s: f64 },
}

/// D and its partial derivatives at (τ, t).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileJet {
    pub d: f64,
    pub d_tau: f64,
    pub d_tautau: f64,
    pub d_t: f64,
    pub d_ttau: f64,
    pub d_tt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    solvable: bool,
    form: ProfileForm,
}

impl Profile {
    /// D(τ) = Σ_i c_i τ^i on the nilpotent group.
    pub fn nilpotent_polynomial(coeffs: &[f64]) -> Self {
        let terms = coeffs.iter().enumerate().map(|(i, &c)| (i as u32, 0, c)).collect();
        Self { solvable: false, form: ProfileForm::Polynomial(terms) }
    }

    /// D(τ, t) = Σ c·τ^i·t^j on the solvable extension.
    pub fn solvable_polynomial(terms: Vec<(u32, u32, f64)>) -> Self {
        Self { solvable: true, form: ProfileForm::Polynomial(terms) }
    }

    /// The Euclidean sphere |X|² + |Z|² = R².
    pub fn euclidean(r2: f64) -> Self {
        Self::nilpotent_polynomial(&[r2, -1.0])
    }

    /// The sphere × torus cylinder |X|² = R².
    pub fn cylinder(r2: f64) -> Self {
        Self::nilpotent_polynomial(&[r2])
    }

    pub fn sqrt_shift(q: f64, q_star: f64) -> Self {
        Self { solvable: false, form: ProfileForm::SqrtShift { q, q_star } }
    }

    /// Level set of the geodesic sphere of radius s around (0, 0, 1).
    pub fn geodesic_sphere(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("geodesic radius s = {s} must be positive")));
        }
        Ok(Self { solvable: true, form: ProfileForm::GeodesicSphere { s } })
    }

    pub fn is_solvable(&self) -> bool {
        self.solvable
    }

    pub fn form(&self) -> &ProfileForm {
        &self.form
    }

    pub fn jet(&self, tau: f64, t: f64) -> ProfileJet {
        match &self.form {
            ProfileForm::Polynomial(terms) => {
                let pw = |x: f64, n: u32| if n == 0 { 1.0 } else { x.powi(n as i32) };
                let mut j = ProfileJet::default();
                for &(i, e, c) in terms {
                    let (fi, fe) = (i as f64, e as f64);
                    j.d += c * pw(tau, i) * pw(t, e);
                    if i >= 1 {
                        j.d_tau += c * fi * pw(tau, i - 1) * pw(t, e);
                        if e >= 1 {
                            j.d_ttau += c * fi * fe * pw(tau, i - 1) * pw(t, e - 1);
                        }
                    }
                    if i >= 2 {
                        j.d_tautau += c * fi * (fi - 1.0) * pw(tau, i - 2) * pw(t, e);
                    }
                    if e >= 1 {
                        j.d_t += c * fe * pw(tau, i) * pw(t, e - 1);
                    }
                    if e >= 2 {
                        j.d_tt += c * fe * (fe - 1.0) * pw(tau, i) * pw(t, e - 2);
                    }
                }
                j
            }
            ProfileForm::SqrtShift { q, q_star } => {
                let u = (q - tau).max(0.0);
                let r = u.sqrt();
                ProfileJet {
                    d: r + q_star,
                    d_tau: -0.5 / r,
                    d_tautau: -0.25 / (r * u),
                    ..Default::default()
                }
            }
            ProfileForm::GeodesicSphere { s } => {
                let q = s.exp() + (-s).exp() + 2.0;
                let u = (q * t - tau).max(0.0);
                let r = u.sqrt();
                let r3 = r * u;
                ProfileJet {
                    d: 4.0 * r - 4.0 * (t + 1.0),
                    d_tau: -2.0 / r,
                    d_tautau: -1.0 / r3,
                    d_t: 2.0 * q / r - 4.0,
                    d_ttau: q / r3,
                    d_tt: -q * q / r3,
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.form {
            ProfileForm::Polynomial(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|(i, e, c)| match (i, e) {
                        (0, 0) => format!("{c}"),
                        (i, 0) => format!("{c}·τ^{i}"),
                        (0, e) => format!("{c}·t^{e}"),
                        (i, e) => format!("{c}·τ^{i}·t^{e}"),
                    })
                    .collect();
                format!("D = {}", parts.join(" + "))
            }
            ProfileForm::SqrtShift { q, q_star } => format!("D = √({q} − τ) + {q_star}"),
            ProfileForm::GeodesicSphere { s } => format!("D = 4((e^s + e^-s + 2)t − τ)^½ − 4(t + 1), s = {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ambient {
    Nilpotent(MetricGroup),
    Solvable(SolvGroup),
}

impl Ambient {
    pub fn nil(&self) -> &MetricGroup {
        match self {
            Ambient::Nilpotent(g) => g,
            Ambient::Solvable(s) => s.nil(),
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, Ambient::Solvable(_))
    }

    /// The scaling c of the solvable extension (0 on N).
    pub fn c(&self) -> f64 {
        match self {
            Ambient::Nilpotent(_) => 0.0,
            Ambient::Solvable(s) => s.c(),
        }
    }

    pub fn dim(&self) -> usize {
        self.nil().dim() + usize::from(self.is_solvable())
    }

    fn algebra(&self) -> MetricLieAlgebra {
        match self {
            Ambient::Nilpotent(g) => g.algebra(),
            Ambient::Solvable(s) => s.algebra(),
        }
    }
}

/// A point (X, Z[, t]); t is ignored (and conventionally 1) on N.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub x: Vector,
    pub z: Vector,
    pub t: f64,
}

impl SurfacePoint {
    pub fn nil(x: Vector, z: Vector) -> Self {
        Self { x, z, t: 1.0 }
    }

    pub fn solv(x: Vector, z: Vector, t: f64) -> Self {
        Self { x, z, t }
    }

    pub fn tau(&self) -> f64 {
        self.z.norm_squared()
    }

    /// The mirror point (X, −Z[, t]).
    pub fn mirrored(&self) -> Self {
        Self { x: self.x.clone(), z: -&self.z, t: self.t }
    }
}

/// Weingarten map on an orthonormal tangent basis.
#[derive(Debug, Clone)]
pub struct Weingarten {
    /// Columns: orthonormal tangent basis in frame coefficients.
    pub basis: Mat,
    pub matrix: Mat,
    pub symmetry_residual: f64,
}

/// Coefficient data of the boundary Laplacian at a point: the normal
/// shifts 𝛎_{Zα}, the Gram matrix ⟨J_αX, J_βX⟩, the derivation directions
/// J_α and the t-terms on SN.
#[derive(Debug, Clone)]
pub struct BoundaryFields {
    pub nu_z: Vector,
    pub nu_t: f64,
    pub jx_gram: Mat,
    pub directions: Vec<Mat>,
    /// Factor of Δ_{S_X} and of the J-terms: t on SN, 1 on N.
    pub x_scale: f64,
    /// Factor of Δ_{S_Z}: t² on SN (the frame 𝐕 = t∂_z), 1 on N.
    pub z_scale: f64,
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct Hypersurface {
    ambient: Ambient,
    profile: Profile,
    algebra: MetricLieAlgebra,
    ricci: Mat,
}

impl Hypersurface {
    pub fn new(ambient: Ambient, profile: Profile) -> Result<Self> {
        if profile.is_solvable() && !ambient.is_solvable() {
            return Err(Error::InvalidParameter("a t-dependent profile needs the solvable extension".into()));
        }
        let algebra = ambient.algebra();
        let ricci = algebra.ricci_matrix();
        Ok(Self { ambient, profile, algebra, ricci })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn algebra(&self) -> &MetricLieAlgebra {
        &self.algebra
    }

    pub fn k(&self) -> usize {
        self.ambient.nil().k()
    }

    pub fn l(&self) -> usize {
        self.ambient.nil().l()
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn is_solvable(&self) -> bool {
        self.ambient.is_solvable()
    }

    pub fn c(&self) -> f64 {
        self.ambient.c()
    }

    pub fn j(&self, z: &Vector) -> Mat {
        self.ambient.nil().j(z)
    }

    fn t_of(&self, p: &SurfacePoint) -> f64 {
        if self.is_solvable() {
            p.t
        } else {
            1.0
        }
    }

    pub fn jet(&self, p: &SurfacePoint) -> ProfileJet {
        self.profile.jet(p.tau(), self.t_of(p))
    }

    /// |X|² − D(|Z|²[, t]).
    pub fn level(&self, p: &SurfacePoint) -> f64 {
        p.x.norm_squared() - self.jet(p).d
    }

    /// Validates p and returns the profile jet there.
    pub fn check(&self, p: &SurfacePoint) -> Result<ProfileJet> {
        if p.x.len() != self.k() || p.z.len() != self.l() {
            return Err(Error::DimensionMismatch(format!(
                "point has (|X|, |Z|) lengths ({}, {}), expected ({}, {})",
                p.x.len(),
                p.z.len(),
                self.k(),
                self.l()
            )));
        }
        if self.is_solvable() && !(p.t > 0.0) {
            return Err(Error::InvalidParameter(format!("t = {} must be positive", p.t)));
        }
        let jet = self.jet(p);
        if !jet.d.is_finite() || jet.d < RIM_EPS {
            return Err(Error::RimPoint(jet.d));
        }
        let res = p.x.norm_squared() - jet.d;
        if res.abs() > ON_SURFACE_TOL * jet.d.max(1.0) {
            return Err(Error::OffSurface(res));
        }
        Ok(jet)
    }

    /// Moves X radially onto the level set over (Z, t).
    pub fn point(&self, x_dir: &Vector, z: &Vector, t: f64) -> Result<SurfacePoint> {
        let t = if self.is_solvable() { t } else { 1.0 };
        let d = self.profile.jet(z.norm_squared(), t).d;
        if !d.is_finite() || d < RIM_EPS {
            return Err(Error::RimPoint(d));
        }
        let n = x_dir.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter("X direction must be non-zero".into()));
        }
        Ok(SurfacePoint { x: x_dir * (d.sqrt() / n), z: z.clone(), t })
    }

    /// Invariant frame at p: row a holds the coordinates of frame vector a.
    pub fn frame(&self, p: &SurfacePoint) -> Mat {
        match &self.ambient {
            Ambient::Nilpotent(g) => g.invariant_frame(&p.x, &p.z),
            Ambient::Solvable(s) => {
                s.solv_frame(&crate::solvgeom::SolvPoint { x: p.x.clone(), z: p.z.clone(), t: p.t })
            }
        }
    }

    /// Derivative of the frame matrix along the coordinate vector u.
    fn frame_derivative(&self, p: &SurfacePoint, u: &Vector) -> Mat {
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let nil = self.ambient.nil();
        let ux = u.rows(0, k).into_owned();
        let mut d = Mat::zeros(n, n);
        for a in 0..l {
            let ju = nil.space().mat(a) * &ux;
            for i in 0..k {
                d[(i, k + a)] = 0.5 * ju[i];
            }
        }
        if let Ambient::Solvable(s) = &self.ambient {
            let ut = u[n - 1];
            let st = p.t.sqrt();
            let base = nil.invariant_frame(&p.x, &p.z);
            for i in 0..k {
                for c in 0..(k + l) {
                    d[(i, c)] = st * d[(i, c)] + 0.5 / st * ut * base[(i, c)];
                }
            }
            for a in 0..l {
                d[(k + a, k + a)] = ut;
            }
            d[(n - 1, n - 1)] = s.c() * ut;
        }
        d
    }

    fn coordinate_gradient(&self, p: &SurfacePoint, jet: &ProfileJet) -> Vector {
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let mut g = Vector::zeros(n);
        g.rows_mut(0, k).copy_from(&(&p.x * 2.0));
        g.rows_mut(k, l).copy_from(&(&p.z * (-2.0 * jet.d_tau)));
        if self.is_solvable() {
            g[n - 1] = -jet.d_t;
        }
        g
    }

    fn coordinate_hessian(&self, p: &SurfacePoint, jet: &ProfileJet) -> Mat {
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let mut h = Mat::zeros(n, n);
        for i in 0..k {
            h[(i, i)] = 2.0;
        }
        for a in 0..l {
            for b in 0..l {
                h[(k + a, k + b)] = -4.0 * jet.d_tautau * p.z[a] * p.z[b];
            }
            h[(k + a, k + a)] -= 2.0 * jet.d_tau;
        }
        if self.is_solvable() {
            for a in 0..l {
                h[(k + a, n - 1)] = -2.0 * jet.d_ttau * p.z[a];
                h[(n - 1, k + a)] = -2.0 * jet.d_ttau * p.z[a];
            }
            h[(n - 1, n - 1)] = -jet.d_tt;
        }
        h
    }

    /// Frame components of the gradient of |X|² − D (not normalized).
    pub fn gradient(&self, p: &SurfacePoint) -> Result<Vector> {
        let jet = self.check(p)?;
        Ok(self.frame(p) * self.coordinate_gradient(p, &jet))
    }

    /// Unit normal from the closed formulas
    /// 𝛎 = C(2X − D′J_Z X) − 2CD′Z on N and
    /// 𝛎 = Ct^{½}(2X − D_τJ_Z X) − 2CtD_τZ − cCtD_t𝐓 on SN.
    pub fn normal(&self, p: &SurfacePoint) -> Result<Vector> {
        let jet = self.check(p)?;
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let jzx = self.j(&p.z) * &p.x;
        let t = self.t_of(p);
        let c = self.c();
        let x2 = p.x.norm_squared();
        let tau = p.tau();
        let cc = if self.is_solvable() {
            1.0 / (t * (4.0 * x2 + jet.d_tau.powi(2) * jzx.norm_squared())
                + t * t * (4.0 * tau * jet.d_tau.powi(2) + c * c * jet.d_t.powi(2)))
            .sqrt()
        } else {
            1.0 / (4.0 * x2 + jet.d_tau.powi(2) * (jzx.norm_squared() + 4.0 * tau)).sqrt()
        };
        let mut nu = Vector::zeros(n);
        nu.rows_mut(0, k).copy_from(&((&p.x * 2.0 - &jzx * jet.d_tau) * (cc * t.sqrt())));
        nu.rows_mut(k, l).copy_from(&(&p.z * (-2.0 * cc * t * jet.d_tau)));
        if self.is_solvable() {
            nu[n - 1] = -c * cc * t * jet.d_t;
        }
        Ok(nu)
    }

    /// Orthonormal tangent basis (columns, frame coefficients).
    pub fn tangent_basis(&self, p: &SurfacePoint) -> Result<Mat> {
        let nu = self.normal(p)?;
        let cols = linalg::orthogonal_complement(&[nu], self.dim(), 1e-12);
        Ok(linalg::columns_to_mat(&cols, self.dim()))
    }

    pub fn check_tangent(&self, p: &SurfacePoint, u: &Vector) -> Result<()> {
        let nu = self.normal(p)?;
        let r = nu.dot(u);
        if r.abs() > TANGENT_TOL * u.norm().max(1.0) {
            return Err(Error::NotTangent(r));
        }
        Ok(())
    }

    /// Coordinate vector of the frame vector u at p.
    pub fn to_coordinates(&self, p: &SurfacePoint, u: &Vector) -> Vector {
        self.frame(p).transpose() * u
    }

    /// Frame coefficients of the coordinate vector v at p.
    pub fn from_coordinates(&self, p: &SurfacePoint, v: &Vector) -> Vector {
        let f = self.frame(p);
        f.transpose().lu().solve(v).expect("invariant frame is invertible")
    }

    /// C·∇_u g for the gradient field g, with C = 1/|g|: the derivative of
    /// the normal up to a multiple of the normal.
    fn shape_vector(&self, p: &SurfacePoint, jet: &ProfileJet, u: &Vector) -> Vector {
        let f = self.frame(p);
        let grad = self.coordinate_gradient(p, jet);
        let g = &f * &grad;
        let uc = f.transpose() * u;
        let dg = self.frame_derivative(p, &uc) * &grad + &f * (self.coordinate_hessian(p, jet) * &uc);
        (dg + self.algebra.nabla(u, &g)) / g.norm()
    }

    /// B(u) = ∇_u 𝛎 for a tangent u.
    pub fn weingarten_vector(&self, p: &SurfacePoint, u: &Vector) -> Result<Vector> {
        let jet = self.check(p)?;
        self.check_tangent(p, u)?;
        let nu = self.normal(p)?;
        let s = self.shape_vector(p, &jet, u);
        Ok(&s - &nu * nu.dot(&s))
    }

    /// M(u, v) = ⟨B(u), v⟩.
    pub fn second_fundamental_form(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        self.check_tangent(p, v)?;
        Ok(self.weingarten_vector(p, u)?.dot(v))
    }

    pub fn weingarten(&self, p: &SurfacePoint) -> Result<Weingarten> {
        let jet = self.check(p)?;
        let basis = self.tangent_basis(p)?;
        let m = basis.ncols();
        let images: Vec<Vector> =
            (0..m).map(|i| self.shape_vector(p, &jet, &basis.column(i).into_owned())).collect();
        let raw = Mat::from_fn(m, m, |i, j| basis.column(i).dot(&images[j]));
        let symmetry_residual = linalg::max_abs(&(&raw - raw.transpose()));
        Ok(Weingarten { basis, matrix: (&raw + raw.transpose()) * 0.5, symmetry_residual })
    }

    /// Ambient Ricci form.
    pub fn ambient_ricci(&self, u: &Vector, v: &Vector) -> f64 {
        u.dot(&(&self.ricci * v))
    }

    pub fn ambient_scalar_curvature(&self) -> f64 {
        self.ricci.trace()
    }

    /// ⟨R(𝛎, u)v, 𝛎⟩ from the curvature engine.
    pub fn normal_curvature(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        let nu = self.normal(p)?;
        Ok(self.algebra.riemann(&nu, u, v).dot(&nu))
    }

    /// B and the tangent projector as n×n matrices on the frame.
    fn shape_operator(&self, p: &SurfacePoint) -> Result<(Mat, Weingarten)> {
        let w = self.weingarten(p)?;
        let b = &w.basis * &w.matrix * w.basis.transpose();
        Ok((b, w))
    }

    /// r̃(u, v) = r(u, v) − ⟨R(𝛎, u)v, 𝛎⟩ + ⟨u, ((Tr B)B − B²)v⟩.
    pub fn induced_ricci(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        self.check_tangent(p, u)?;
        self.check_tangent(p, v)?;
        let (b, w) = self.shape_operator(p)?;
        let tr = w.matrix.trace();
        let bv = &b * v;
        Ok(self.ambient_ricci(u, v) - self.normal_curvature(p, u, v)? + u.dot(&(&bv * tr - &b * &bv)))
    }

    /// Σ_i ⟨R̃(e_i, u)v, e_i⟩ with R̃ from the Gauss equation
    /// R̃(V,Y)W = R(V,Y)W − ⟨R(V,Y)W,𝛎⟩𝛎 + M(Y,W)B(V) − M(V,W)B(Y).
    pub fn induced_ricci_gauss(&self, p: &SurfacePoint, u: &Vector, v: &Vector) -> Result<f64> {
        self.check_tangent(p, u)?;
        self.check_tangent(p, v)?;
        let (b, w) = self.shape_operator(p)?;
        let muv = u.dot(&(&b * v));
        let mut acc = 0.0;
        for i in 0..w.basis.ncols() {
            let e = w.basis.column(i).into_owned();
            let be = &b * &e;
            acc += self.algebra.riemann(&e, u, v).dot(&e) + muv * be.dot(&e) - be.dot(v) * (&b * u).dot(&e);
        }
        Ok(acc)
    }

    /// Matrix of r̃ on the given orthonormal tangent columns.
    pub fn ricci_in_basis(&self, p: &SurfacePoint, basis: &Mat) -> Result<Mat> {
        let (b, w) = self.shape_operator(p)?;
        let tr = w.matrix.trace();
        let nu = self.normal(p)?;
        let m = basis.ncols();
        let cols: Vec<Vector> = (0..m).map(|i| basis.column(i).into_owned()).collect();
        for c in &cols {
            let r = nu.dot(c);
            if r.abs() > TANGENT_TOL {
                return Err(Error::NotTangent(r));
            }
        }
        let corr = &b * tr - &b * &b;
        let mut out = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.ambient_ricci(&cols[i], &cols[j]) - self.algebra.riemann(&nu, &cols[i], &cols[j]).dot(&nu)
                    + cols[i].dot(&(&corr * &cols[j]));
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        Ok(out)
    }

    /// Matrix of r̃ on the standard orthonormal tangent basis.
    pub fn ricci_matrix(&self, p: &SurfacePoint) -> Result<(Mat, Mat)> {
        let basis = self.tangent_basis(p)?;
        let r = self.ricci_in_basis(p, &basis)?;
        Ok((basis, r))
    }

    /// κ̃ = κ − 2Ric(𝛎, 𝛎) + (Tr B)² − Tr(B²).
    pub fn scalar_curvature(&self, p: &SurfacePoint) -> Result<f64> {
        let parts = self.scalar_parts(p)?;
        Ok(parts.total())
    }

    /// κ̃ as the trace of the Gauss-assembled Ricci matrix.
    pub fn scalar_curvature_trace(&self, p: &SurfacePoint) -> Result<f64> {
        Ok(self.ricci_matrix(p)?.1.trace())
    }

    pub fn scalar_parts(&self, p: &SurfacePoint) -> Result<ScalarParts> {
        let nu = self.normal(p)?;
        let w = self.weingarten(p)?;
        Ok(ScalarParts {
            kappa: self.ambient_scalar_curvature(),
            minus_two_ricci_normal: -2.0 * self.ambient_ricci(&nu, &nu),
            trace_b: w.matrix.trace(),
            minus_trace_b2: -(&w.matrix * &w.matrix).trace(),
        })
    }

    pub fn boundary_fields(&self, p: &SurfacePoint) -> Result<BoundaryFields> {
        let nu = self.normal(p)?;
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let nil = self.ambient.nil();
        let jx: Vec<Vector> = (0..l).map(|a| nil.space().mat(a) * &p.x).collect();
        let t = self.t_of(p);
        Ok(BoundaryFields {
            nu_z: nu.rows(k, l).into_owned(),
            nu_t: if self.is_solvable() { nu[n - 1] } else { 0.0 },
            jx_gram: Mat::from_fn(l, l, |a, b| jx[a].dot(&jx[b])),
            directions: nil.space().mats(),
            x_scale: t,
            z_scale: t * t,
            c: self.c(),
        })
    }
}

/// The four terms of κ̃ = κ − 2Ric(𝛎,𝛎) + (Tr B)² − Tr(B²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParts {
    pub kappa: f64,
    pub minus_two_ricci_normal: f64,
    pub trace_b: f64,
    pub minus_trace_b2: f64,
}

impl ScalarParts {
    pub fn total(&self) -> f64 {
        self.kappa + self.minus_two_ricci_normal + self.trace_b * self.trace_b + self.minus_trace_b2
    }
}
