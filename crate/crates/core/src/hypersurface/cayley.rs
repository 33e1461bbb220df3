//! Cayley transform between the unit ball of 𝔫 ⊕ 𝔞 and the solvable
//! extension of a Heisenberg-type group, and sampling of geodesic spheres.
//!
//! Ball points are (X, Z, u) with u the 𝔞-coordinate of the ball; group
//! points are (X, Z, t) with t > 0.

use super::{Ambient, Hypersurface, Profile, SurfacePoint};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rng::seeded;
use crate::solvgeom::SolvGroup;

/// A point of the ball model.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    pub x: Vector,
    pub z: Vector,
    pub u: f64,
}

impl BallPoint {
    pub fn radius_squared(&self) -> f64 {
        self.x.norm_squared() + self.z.norm_squared() + self.u * self.u
    }
}

/// The Cayley transform of a Heisenberg-type solvable extension with c = 1.
#[derive(Debug, Clone)]
pub struct Cayley {
    group: SolvGroup,
}

impl Cayley {
    pub fn new(group: SolvGroup) -> Result<Self> {
        if !group.nil().space().is_heisenberg_type() {
            return Err(Error::WrongGroupFamily("the Cayley transform needs a Heisenberg-type space".into()));
        }
        if (group.c() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "the Cayley transform is normalized for c = 1, got c = {}",
                group.c()
            )));
        }
        Ok(Self { group })
    }

    pub fn group(&self) -> &SolvGroup {
        &self.group
    }

    /// C(X, Z, u) = ((1−u)² + |Z|²)^{−1}(2(1 − u + J_Z)X, 2Z, 1 − r²).
    pub fn forward(&self, b: &BallPoint) -> Result<SurfacePoint> {
        let r2 = b.radius_squared();
        if !(r2 < 1.0) {
            return Err(Error::OutsideBall(r2.sqrt()));
        }
        let w = 1.0 - b.u;
        let d = w * w + b.z.norm_squared();
        let jz = self.group.nil().j(&b.z);
        let x = (&b.x * w + jz * &b.x) * (2.0 / d);
        Ok(SurfacePoint::solv(x, &b.z * (2.0 / d), (1.0 - r2) / d))
    }

    /// Inverse of [`Cayley::forward`]: with a = 1 + t + |X|²/4 and
    /// d = 4/(a² + |Z|²), the ball point is u = 1 − da/2, Z_b = dZ/2,
    /// X_b = (1 − u − J_{Z_b})X/2.
    pub fn inverse(&self, p: &SurfacePoint) -> Result<BallPoint> {
        if !(p.t > 0.0) {
            return Err(Error::InvalidParameter(format!("t = {} must be positive", p.t)));
        }
        let a = 1.0 + p.t + 0.25 * p.x.norm_squared();
        let d = 4.0 / (a * a + p.z.norm_squared());
        let u = 1.0 - 0.5 * d * a;
        let z = &p.z * (0.5 * d);
        let w = 1.0 - u;
        let jz = self.group.nil().j(&z);
        let x = (&p.x * w - jz * &p.x) * 0.5;
        Ok(BallPoint { x, z, u })
    }

    /// Image of a uniformly distributed point of the Euclidean sphere of
    /// radius tanh(s/2), which is the geodesic sphere of radius s around
    /// the identity (0, 0, 1).
    pub fn sphere_point(&self, s: f64, direction: &Vector) -> Result<SurfacePoint> {
        let (k, l) = (self.group.k(), self.group.l());
        if direction.len() != k + l + 1 {
            return Err(Error::DimensionMismatch(format!(
                "direction has length {}, expected {}",
                direction.len(),
                k + l + 1
            )));
        }
        let v = direction.normalize() * (0.5 * s).tanh();
        self.forward(&BallPoint { x: v.rows(0, k).into_owned(), z: v.rows(k, l).into_owned(), u: v[k + l] })
    }

    /// `count` seeded random points on the geodesic sphere of radius s.
    pub fn sphere_points(&self, s: f64, count: usize, seed: u64) -> Result<Vec<SurfacePoint>> {
        let n = self.group.k() + self.group.l() + 1;
        let mut rng = seeded(seed);
        (0..count).map(|_| self.sphere_point(s, &linalg::random_unit_vector(n, &mut rng))).collect()
    }
}

/// The level set |X|² = 4((e^s + e^{−s} + 2)t − |Z|²)^{½} − 4(t + 1).
pub fn geodesic_sphere_profile(s: f64) -> Result<Profile> {
    Profile::geodesic_sphere(s)
}

/// The geodesic sphere of radius s of a Heisenberg-type extension (c = 1).
pub fn geodesic_sphere(group: SolvGroup, s: f64) -> Result<Hypersurface> {
    Cayley::new(group.clone())?;
    Hypersurface::new(Ambient::Solvable(group), geodesic_sphere_profile(s)?)
}

/// The two t-axis points (X = Z = 0) of the level set: the roots of
/// t² − (e^s + e^{−s})t + 1 = 0.
pub fn t_axis_intersections(s: f64) -> (f64, f64) {
    let b = s.exp() + (-s).exp();
    let disc = (b * b - 4.0).max(0.0).sqrt();
    let hi = 0.5 * (b + disc);
    (1.0 / hi, hi)
}
