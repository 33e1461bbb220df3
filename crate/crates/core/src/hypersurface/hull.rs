//! Hopf hulls: the intersection of the surface with the subgroup generated
//! by span{X₀, J₀X₀, Z₀} (and 𝐓 on SN), its total-geodesic check, and the
//! Hopf curvature of a profile on the 3-dimensional Heisenberg model.

use super::{Ambient, Hypersurface, Profile, SurfacePoint, RIM_EPS};
use crate::endospace::build_endo_space;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::nilgeom::MetricGroup;
use crate::solvgeom::SolvGroup;
use rayon::prelude::*;

/// Tolerance of the total-geodesic checks.
pub const HULL_TOL: f64 = 1e-8;
/// Accepted residual of the eigenvector condition J₀²X₀ = λ₀X₀.
pub const EIGEN_TOL: f64 = 1e-9;
/// Largest τ searched for the rim.
pub const TAU_CAP: f64 = 16.0;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const PLASTIC: f64 = 0.754_877_666_246_692_7;

/// i-th point of a one-dimensional low-discrepancy sequence in (0, 1).
pub fn low_discrepancy(i: usize) -> f64 {
    (0.5 + i as f64 * GOLDEN).fract()
}

fn low_discrepancy_2(i: usize) -> f64 {
    (0.5 + i as f64 * PLASTIC).fract()
}

/// Smallest τ > 0 at which the profile reaches the rim (or leaves its
/// domain), capped at [`TAU_CAP`]. `None` if D(0, t) is already at the rim.
pub fn rim_tau(profile: &Profile, t: f64) -> Option<f64> {
    let inside = |tau: f64| {
        let j = profile.jet(tau, t);
        j.d > RIM_EPS && j.d.is_finite() && j.d_tau.is_finite() && j.d_tautau.is_finite()
    };
    if !inside(0.0) {
        return None;
    }
    let steps = 4096;
    let h = TAU_CAP / steps as f64;
    let mut lo = 0.0;
    for i in 1..=steps {
        let tau = i as f64 * h;
        if !inside(tau) {
            let mut hi = tau;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(lo);
        }
        lo = tau;
    }
    Some(TAU_CAP)
}

/// Hull samples and the total-geodesic verdict.
#[derive(Debug, Clone)]
pub struct HopfHullReport {
    pub lambda0: f64,
    /// ⟨L_⊥X₀, X₀⟩ and the residual of X₀ as an L_⊥-eigenvector.
    pub lambda_perp: f64,
    pub perp_eigen_residual: f64,
    /// max |{J₀, J_β}| over β ⊥ Z₀.
    pub anticommutator_residual: f64,
    /// max |P_{𝔱⊥} ∇_a b| over a, b in the hull algebra 𝔱.
    pub subalgebra_residual: f64,
    /// max |P_{𝔱⊥} 𝛎| over the samples.
    pub normal_residual: f64,
    /// max |P_{𝔱⊥} ∇_U V| over the samples and unit hull tangents U, V.
    pub geodesic_residual: f64,
    pub samples: Vec<SurfacePoint>,
    pub tolerance: f64,
    pub pass: bool,
}

impl HopfHullReport {
    pub fn to_text(&self) -> String {
        format!(
            "hopf hull\n  lambda0 = {:.12e}\n  lambda_perp = {:.12e}\n  perp eigen residual = {:.3e}\n  \
             anticommutator residual = {:.3e}\n  subalgebra residual = {:.3e}\n  normal residual = {:.3e}\n  \
             geodesic residual = {:.3e}\n  samples = {}\n  tolerance = {:.1e}\n  verdict = {}\n",
            self.lambda0,
            self.lambda_perp,
            self.perp_eigen_residual,
            self.anticommutator_residual,
            self.subalgebra_residual,
            self.normal_residual,
            self.geodesic_residual,
            self.samples.len(),
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

impl Hypersurface {
    /// Frame coefficient vectors of X₀, J₀X₀, Z₀ (and 𝐓) for unit X₀, Z₀.
    fn hull_algebra(&self, z0: &Vector, x0: &Vector) -> Vec<Vector> {
        let (k, l, n) = (self.k(), self.l(), self.dim());
        let embed_x = |x: &Vector| {
            let mut v = Vector::zeros(n);
            v.rows_mut(0, k).copy_from(x);
            v
        };
        let mut zv = Vector::zeros(n);
        zv.rows_mut(k, l).copy_from(z0);
        let mut out = vec![embed_x(x0), embed_x(&(self.j(z0) * x0)), zv];
        if self.is_solvable() {
            let mut t = Vector::zeros(n);
            t[n - 1] = 1.0;
            out.push(t);
        }
        linalg::orthonormal_span(&out, 1e-12)
    }

    /// Samples the Hopf hull through the Hopf circle of X₀ over the line
    /// of Z₀ and checks that it is totally geodesic.
    ///
    /// X₀ must be an eigenvector of J₀²; a Z₀ that is not an anticommutator
    /// is reported through the residuals and a FAIL verdict.
    pub fn hopf_hull(&self, z0: &Vector, x0: &Vector, samples: usize) -> Result<HopfHullReport> {
        let (k, l) = (self.k(), self.l());
        if z0.len() != l || x0.len() != k {
            return Err(Error::DimensionMismatch("Z₀ or X₀ has the wrong length".into()));
        }
        let z0 = z0.normalize();
        let x0 = x0.normalize();
        let j0 = self.j(&z0);
        let l0m = &j0 * &j0;
        let lambda0 = x0.dot(&(&l0m * &x0));
        let eig_res = (&l0m * &x0 - &x0 * lambda0).norm();
        if eig_res > EIGEN_TOL {
            return Err(Error::NotEigenvector(eig_res));
        }
        if !(lambda0 < 0.0) {
            return Err(Error::Degenerate(lambda0));
        }
        let nil = self.ambient().nil();
        let perp = linalg::orthogonal_complement(&[z0.clone()], l, 1e-12);
        let mut lperp = Mat::zeros(k, k);
        let mut anti: f64 = 0.0;
        for b in &perp {
            let jb = nil.j(b);
            lperp += &jb * &jb;
            anti = anti.max(linalg::max_abs(&linalg::anticommutator(&j0, &jb)));
        }
        let lambda_perp = x0.dot(&(&lperp * &x0));
        let perp_eigen_residual = (&lperp * &x0 - &x0 * lambda_perp).norm();

        let tb = self.hull_algebra(&z0, &x0);
        let proj_perp = |v: &Vector| -> f64 {
            let mut r = v.clone();
            for b in &tb {
                r -= b * b.dot(v);
            }
            r.norm()
        };
        let mut subalgebra_residual: f64 = 0.0;
        for a in &tb {
            for b in &tb {
                subalgebra_residual = subalgebra_residual.max(proj_perp(&self.algebra().nabla(a, b)));
            }
        }

        let points = self.hull_points(&z0, &x0, samples)?;
        let per_point: Vec<Result<(f64, f64)>> = points
            .par_iter()
            .map(|p| {
                let nu = self.normal(p)?;
                let tangents: Vec<Vector> = tb.iter().map(|b| b - &nu * nu.dot(b)).collect();
                let hull_t = linalg::orthonormal_span(&tangents, 1e-10);
                let mut g: f64 = 0.0;
                for u in &hull_t {
                    for v in &hull_t {
                        g = g.max(proj_perp(&self.algebra().nabla(u, v)));
                    }
                }
                Ok((proj_perp(&nu), g))
            })
            .collect();
        let mut normal_residual: f64 = 0.0;
        let mut geodesic_residual: f64 = 0.0;
        for r in per_point {
            let (a, b) = r?;
            normal_residual = normal_residual.max(a);
            geodesic_residual = geodesic_residual.max(b);
        }
        let pass = subalgebra_residual <= HULL_TOL && normal_residual <= HULL_TOL && geodesic_residual <= HULL_TOL;
        Ok(HopfHullReport {
            lambda0,
            lambda_perp,
            perp_eigen_residual,
            anticommutator_residual: anti,
            subalgebra_residual,
            normal_residual,
            geodesic_residual,
            samples: points,
            tolerance: HULL_TOL,
            pass,
        })
    }

    /// Points (√D(cos θ X₀ + sin θ Ŷ₀), ±√τ Z₀[, t]) with Ŷ₀ = J₀X₀/|J₀X₀|,
    /// τ on a low-discrepancy grid strictly inside the rim.
    pub fn hull_points(&self, z0: &Vector, x0: &Vector, samples: usize) -> Result<Vec<SurfacePoint>> {
        let z0 = z0.normalize();
        let x0 = x0.normalize();
        let y = self.j(&z0) * &x0;
        let yn = y.norm();
        if yn == 0.0 {
            return Err(Error::Degenerate(0.0));
        }
        let y0 = y / yn;
        let t_range = self.hull_t_range()?;
        let mut out = Vec::with_capacity(samples);
        for i in 0..samples {
            let t = if self.is_solvable() {
                let (a, b) = t_range;
                (a.ln() + (0.1 + 0.8 * low_discrepancy_2(i)) * (b.ln() - a.ln())).exp()
            } else {
                1.0
            };
            let tau_max = rim_tau(self.profile(), t).ok_or(Error::RimPoint(self.profile().jet(0.0, t).d))?;
            let tau = (0.02 + 0.9 * low_discrepancy(i)) * tau_max;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let theta = std::f64::consts::TAU * low_discrepancy_2(i + 7);
            let dir = &x0 * theta.cos() + &y0 * theta.sin();
            let z = &z0 * (sign * tau.sqrt());
            out.push(self.point(&dir, &z, t)?);
        }
        Ok(out)
    }

    /// Range of t over which D(0, t) lies above the rim (t = 1 on N).
    fn hull_t_range(&self) -> Result<(f64, f64)> {
        if !self.is_solvable() {
            return Ok((1.0, 1.0));
        }
        let grid: Vec<f64> = (0..=2000).map(|i| (-8.0 + 16.0 * i as f64 / 2000.0).exp()).collect();
        let inside: Vec<bool> = grid.iter().map(|&t| self.profile().jet(0.0, t).d > RIM_EPS).collect();
        let first = inside.iter().position(|&b| b).ok_or(Error::RimPoint(0.0))?;
        let last = first + inside[first..].iter().take_while(|&&b| b).count() - 1;
        Ok((grid[first], grid[last]))
    }

    /// Scalar curvature along the Hopf-hull line θ = 0 at the given τ values.
    pub fn hull_line(&self, z0: &Vector, x0: &Vector, taus: &[f64], t: f64) -> Result<Vec<(SurfacePoint, f64)>> {
        let z0 = z0.normalize();
        let x0 = x0.normalize();
        taus.par_iter()
            .map(|&tau| {
                let p = self.point(&x0, &(&z0 * tau.sqrt()), t)?;
                let s = self.scalar_curvature(&p)?;
                Ok((p, s))
            })
            .collect()
    }
}

/// Verdict on the hypothesis that κ̃′ is non-zero almost everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopfHypothesis {
    /// Non-zero at every sample with the given margin min |κ̃′|.
    Nonvanishing { margin: f64 },
    /// D′ vanishes at every sample: the profile is degenerate.
    Degenerate,
    /// κ̃ is constant along the samples (relative spread given).
    Constant { relative_std: f64 },
    /// Some sample has |κ̃′| below the resolution.
    VanishingAtSamples { count: usize },
}

#[derive(Debug, Clone)]
pub struct HopfCurvatureReport {
    pub taus: Vec<f64>,
    /// t of each sample (1 on the nilpotent model).
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub sign_changes: usize,
    pub hypothesis: HopfHypothesis,
}

impl HopfCurvatureReport {
    pub fn to_text(&self) -> String {
        let mut s = String::from("hopf curvature\n");
        s += &format!("  samples = {}\n  derivative sign changes = {}\n", self.taus.len(), self.sign_changes);
        s += &format!("  hypothesis = {:?}\n", self.hypothesis);
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,t,kappa,dkappa_dtau\n");
        for i in 0..self.taus.len() {
            s += &format!("{:.12e},{:.12e},{:.12e},{:.12e}\n", self.taus[i], self.ts[i], self.values[i], self.derivatives[i]);
        }
        s
    }
}

/// Resolution below which a derivative sample counts as zero.
pub const DERIVATIVE_EPS: f64 = 1e-7;
/// Relative spread below which κ̃ counts as constant.
pub const CONSTANCY_TOL: f64 = 1e-7;

/// Standard 3-dimensional Heisenberg group (k = 2, l = 1, J = rotation).
pub fn heisenberg3() -> MetricGroup {
    let j = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    MetricGroup::new(build_endo_space(&[j]).expect("rotation generator is a valid skew basis").with_anticommutator(0))
}

/// Hopf curvature of a profile: the scalar curvature of its surface in the
/// Heisenberg group H₃ (solvable profiles: in SH₃ with c = 1), sampled at
/// `samples` points of a low-discrepancy τ-grid, with κ̃′ from a
/// Richardson-extrapolated central difference in τ.
pub fn hopf_curvature(profile: &Profile, samples: usize) -> Result<HopfCurvatureReport> {
    let ambient = if profile.is_solvable() {
        Ambient::Solvable(SolvGroup::new(heisenberg3(), 1.0)?)
    } else {
        Ambient::Nilpotent(heisenberg3())
    };
    let hs = Hypersurface::new(ambient, profile.clone())?;
    let z0 = Vector::from_vec(vec![1.0]);
    let x0 = Vector::from_vec(vec![1.0, 0.0]);
    let t_range = hs.hull_t_range()?;
    let eval = |tau: f64, t: f64| -> Result<f64> {
        let p = hs.point(&x0, &(&z0 * tau.sqrt()), t)?;
        hs.scalar_curvature(&p)
    };
    let rows: Vec<Result<(f64, f64, f64, f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = if profile.is_solvable() {
                let (a, b) = t_range;
                (0.5 * (a.ln() + b.ln())).exp()
            } else {
                1.0
            };
            let tau_max = rim_tau(profile, t).ok_or(Error::RimPoint(profile.jet(0.0, t).d))?;
            let tau = (0.05 + 0.85 * (i as f64 + 0.5) / samples as f64) * tau_max;
            let h = 1e-3 * tau_max;
            let d1 = (eval(tau + h, t)? - eval(tau - h, t)?) / (2.0 * h);
            let d2 = (eval(tau + 0.5 * h, t)? - eval(tau - 0.5 * h, t)?) / h;
            let deriv = (4.0 * d2 - d1) / 3.0;
            Ok((tau, t, eval(tau, t)?, deriv, profile.jet(tau, t).d_tau))
        })
        .collect();
    let rows: Vec<(f64, f64, f64, f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let taus: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let derivatives: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let sign_changes = derivatives.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len().max(1) as f64;
    let relative_std = var.sqrt() / mean.abs().max(1e-300);
    let margin = derivatives.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    let hypothesis = if rows.iter().all(|r| r.4 == 0.0) {
        HopfHypothesis::Degenerate
    } else if relative_std <= CONSTANCY_TOL {
        HopfHypothesis::Constant { relative_std }
    } else if margin > DERIVATIVE_EPS {
        HopfHypothesis::Nonvanishing { margin }
    } else {
        HopfHypothesis::VanishingAtSamples { count: derivatives.iter().filter(|d| d.abs() <= DERIVATIVE_EPS).count() }
    };
    Ok(HopfCurvatureReport { taus, ts, values, derivatives, sign_changes, hypothesis })
}
