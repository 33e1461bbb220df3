use isospec::endospace::{build_endo_space, clifford_space, EndoSpace};
use isospec::hypersurface::*;
use isospec::linalg::{self, Mat, Vector};
use isospec::nilgeom::MetricGroup;
use isospec::rng::seeded;
use isospec::solvgeom::SolvGroup;
use isospec::Error;
use proptest::prelude::*;
use rand::Rng;

fn random_space(k: usize, l: usize, seed: u64) -> EndoSpace {
    let mut rng = seeded(seed);
    let mats: Vec<Mat> = (0..l).map(|_| linalg::random_skew(k, &mut rng)).collect();
    build_endo_space(&mats).unwrap()
}

fn h3(a: usize, b: usize) -> MetricGroup {
    MetricGroup::new(clifford_space(3, a, b).unwrap())
}

fn sh3(a: usize, b: usize) -> SolvGroup {
    SolvGroup::new(h3(a, b), 1.0).unwrap()
}

fn nil_surface(g: MetricGroup, profile: Profile) -> Hypersurface {
    Hypersurface::new(Ambient::Nilpotent(g), profile).unwrap()
}

fn solv_surface(g: SolvGroup, profile: Profile) -> Hypersurface {
    Hypersurface::new(Ambient::Solvable(g), profile).unwrap()
}

fn solv_polynomial() -> Profile {
    Profile::solvable_polynomial(vec![(0, 0, 1.5), (1, 0, -0.6), (0, 1, 0.4), (1, 1, 0.1), (2, 0, 0.05), (0, 2, -0.1)])
}

/// A random point with |Z| = z_norm (and t on SN).
fn random_point(hs: &Hypersurface, z_norm: f64, t: f64, rng: &mut impl Rng) -> SurfacePoint {
    let z = linalg::random_unit_vector(hs.l(), rng) * z_norm;
    hs.point(&linalg::gaussian_vector(hs.k(), rng), &z, t).unwrap()
}

fn random_tangent(hs: &Hypersurface, p: &SurfacePoint, rng: &mut impl Rng) -> Vector {
    let nu = hs.normal(p).unwrap();
    let v = linalg::gaussian_vector(hs.dim(), rng);
    &v - &nu * nu.dot(&v)
}

fn embed(hs: &Hypersurface, x: Option<&Vector>, z: Option<&Vector>) -> Vector {
    let mut v = Vector::zeros(hs.dim());
    if let Some(x) = x {
        v.rows_mut(0, hs.k()).copy_from(x);
    }
    if let Some(z) = z {
        v.rows_mut(hs.k(), hs.l()).copy_from(z);
    }
    v
}

fn shifted(p: &SurfacePoint, coords: &Vector, k: usize, l: usize) -> SurfacePoint {
    let t = if coords.len() > k + l { p.t + coords[k + l] } else { p.t };
    SurfacePoint::solv(&p.x + coords.rows(0, k), &p.z + coords.rows(k, l), t)
}

/// Five-point central difference of a scalar function of one variable.
fn d5(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
}

/// Hessian of the level function by differencing: (U(Vf) − (∇_U V)f)/|grad f|,
/// with frame fields extended left-invariantly, coordinate derivatives by
/// nested finite differences and ∇_U V from the algebra connection.
fn hessian_oracle(hs: &Hypersurface, p: &SurfacePoint, u: &Vector, v: &Vector) -> f64 {
    let (k, l, n) = (hs.k(), hs.l(), hs.dim());
    let level_at = |q: &SurfacePoint| q.x.norm_squared() - hs.profile().jet(q.z.norm_squared(), q.t).d;
    let frame_derivative = |q: &SurfacePoint, w: &Vector| -> f64 {
        let dir = hs.frame(q).transpose() * w;
        d5(|s| level_at(&shifted(q, &(&dir * s), k, l)), 1e-3)
    };
    let udir = hs.frame(p).transpose() * u;
    let uvf = d5(|s| frame_derivative(&shifted(p, &(&udir * s), k, l), v), 2e-3);
    let grad = Vector::from_iterator(
        n,
        (0..n).map(|a| {
            let mut e = Vector::zeros(n);
            e[a] = 1.0;
            frame_derivative(p, &e)
        }),
    );
    (uvf - grad.dot(&hs.algebra().nabla(u, v))) / grad.norm()
}

#[test]
fn normal_is_normalized_gradient_and_orthogonal_to_tangents() {
    let mut rng = seeded(1);
    let surfaces = [
        nil_surface(MetricGroup::new(random_space(4, 2, 2)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2])),
        nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3)),
        solv_surface(SolvGroup::new(MetricGroup::new(random_space(4, 2, 3)), 0.7).unwrap(), solv_polynomial()),
    ];
    for hs in &surfaces {
        for _ in 0..5 {
            let p = random_point(hs, 0.4, 0.9, &mut rng);
            let nu = hs.normal(&p).unwrap();
            assert!((nu.norm() - 1.0).abs() < 1e-12);
            assert!((&nu - hs.gradient(&p).unwrap().normalize()).norm() < 1e-12);
            let tb = hs.tangent_basis(&p).unwrap();
            assert_eq!(tb.ncols(), hs.dim() - 1);
            for _ in 0..10 {
                let w = linalg::gaussian_vector(tb.ncols(), &mut rng);
                assert!(nu.dot(&(&tb * w)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn cylinder_normal_is_radial() {
    let mut rng = seeded(4);
    let hs = nil_surface(h3(1, 1), Profile::cylinder(2.0));
    for _ in 0..5 {
        let p = random_point(&hs, 0.7, 1.0, &mut rng);
        let nu = hs.normal(&p).unwrap();
        let radial = embed(&hs, Some(&p.x.normalize()), None);
        assert!((&nu - &radial).norm() < 1e-12);
        assert!(hs.boundary_fields(&p).unwrap().nu_z.norm() < 1e-12);
    }
}

#[test]
fn euclidean_normal_is_radial_on_the_eye() {
    let mut rng = seeded(5);
    let hs = nil_surface(h3(2, 0), Profile::euclidean(2.0));
    let p = random_point(&hs, 0.0, 1.0, &mut rng);
    let radial = embed(&hs, Some(&p.x.normalize()), None);
    assert!((hs.normal(&p).unwrap() - radial).norm() < 1e-12);
}

#[test]
fn point_validation_errors() {
    let hs = nil_surface(h3(1, 1), Profile::euclidean(2.0));
    let mut x = Vector::zeros(8);
    x[0] = 1.0;
    let z = Vector::zeros(3);
    assert!(matches!(hs.normal(&SurfacePoint::nil(x.clone(), z.clone())), Err(Error::OffSurface(_))));
    let mut zr = Vector::zeros(3);
    zr[0] = 2.0f64.sqrt();
    assert!(matches!(hs.point(&x, &zr, 1.0), Err(Error::RimPoint(_))));
    assert!(matches!(hs.normal(&SurfacePoint::nil(Vector::zeros(8), zr)), Err(Error::RimPoint(_))));
    let p = hs.point(&x, &z, 1.0).unwrap();
    let nu = hs.normal(&p).unwrap();
    assert!(matches!(hs.second_fundamental_form(&p, &nu, &nu), Err(Error::NotTangent(_))));
    assert!(Hypersurface::new(Ambient::Nilpotent(h3(1, 1)), solv_polynomial()).is_err());
}

#[test]
fn second_form_matches_hessian_oracle() {
    let mut rng = seeded(6);
    let surfaces = [
        nil_surface(MetricGroup::new(random_space(4, 2, 7)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2])),
        nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3)),
        solv_surface(SolvGroup::new(MetricGroup::new(random_space(4, 2, 8)), 0.7).unwrap(), solv_polynomial()),
        solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap()),
    ];
    for hs in &surfaces {
        for _ in 0..3 {
            let p = random_point(hs, 0.3, 1.2, &mut rng);
            let (u, v) = (random_tangent(hs, &p, &mut rng), random_tangent(hs, &p, &mut rng));
            let m = hs.second_fundamental_form(&p, &u, &v).unwrap();
            let oracle = hessian_oracle(hs, &p, &u, &v);
            assert!((m - oracle).abs() < 1e-8, "M {m} vs oracle {oracle}");
        }
    }
}

#[test]
fn weingarten_map_is_self_adjoint() {
    let mut rng = seeded(9);
    let hs = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    let p = random_point(&hs, 0.2, 1.0, &mut rng);
    let w = hs.weingarten(&p).unwrap();
    assert!(w.symmetry_residual < 1e-12);
    assert!(linalg::orth_residual(&w.basis) < 1e-12);
}

#[test]
fn z_tangents_have_second_form_minus_two_c_dprime() {
    let mut rng = seeded(10);
    let hs = nil_surface(MetricGroup::new(random_space(4, 3, 11)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2]));
    let p = random_point(&hs, 0.5, 1.0, &mut rng);
    let jet = hs.jet(&p);
    let c = 1.0 / hs.gradient(&p).unwrap().norm();
    let perp = linalg::orthogonal_complement(&[p.z.clone()], hs.l(), 1e-12);
    for a in &perp {
        for b in &perp {
            let m = hs.second_fundamental_form(&p, &embed(&hs, None, Some(a)), &embed(&hs, None, Some(b))).unwrap();
            assert!((m + 2.0 * c * jet.d_tau * a.dot(b)).abs() < 1e-12);
        }
    }
}

/// X̃ ⊥ 𝛎_X, Z̃ ⊥ Z and (on SN) 𝐭: the three case directions.
fn case_vectors(hs: &Hypersurface, p: &SurfacePoint, rng: &mut impl Rng) -> Vec<Vector> {
    let nu = hs.normal(p).unwrap();
    let nux = nu.rows(0, hs.k()).into_owned();
    let mut x = linalg::gaussian_vector(hs.k(), rng);
    x -= &nux * (nux.dot(&x) / nux.norm_squared());
    let mut z = linalg::gaussian_vector(hs.l(), rng);
    z -= &p.z * (p.z.dot(&z) / p.z.norm_squared());
    let mut out = vec![embed(hs, Some(&x), None), embed(hs, None, Some(&z))];
    if hs.is_solvable() {
        out.push(hs.unit_t(p).unwrap());
    }
    out
}

#[test]
fn case_formulas_agree_with_the_analytic_second_form() {
    let mut rng = seeded(12);
    let surfaces = [
        nil_surface(MetricGroup::new(random_space(6, 2, 13)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2])),
        solv_surface(SolvGroup::new(MetricGroup::new(random_space(6, 2, 14)), 0.7).unwrap(), solv_polynomial()),
        solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap()),
    ];
    for hs in &surfaces {
        for t in [0.6, 1.0, 1.4] {
            let p = random_point(hs, 0.25, t, &mut rng);
            let cases = case_vectors(hs, &p, &mut rng);
            for u in &cases {
                for v in &cases {
                    let m = hs.second_fundamental_form(&p, u, v).unwrap();
                    assert!((hs.case_second_form(&p, u, v).unwrap() - m).abs() < 1e-12);
                }
            }
            let mixed = &cases[0] * 0.3 - &cases[1] * 1.1 + cases.last().unwrap() * 0.7;
            let m = hs.second_fundamental_form(&p, &mixed, &cases[0]).unwrap();
            assert!((hs.case_second_form(&p, &mixed, &cases[0]).unwrap() - m).abs() < 1e-12);
        }
    }
}

#[test]
fn reference_solvable_cases_deviate_off_the_unit_level() {
    let mut rng = seeded(15);
    let hs = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    let p = random_point(&hs, 0.25, 1.4, &mut rng);
    let cases = case_vectors(&hs, &p, &mut rng);
    let m = hs.second_fundamental_form(&p, &cases[1], &cases[1]).unwrap();
    let reference = hs.reference_case_second_form(&p, &cases[1], &cases[1]).unwrap();
    assert!((m - reference).abs() > 1e-3);
    let nil = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
    let q = random_point(&nil, 0.25, 1.0, &mut rng);
    let c = case_vectors(&nil, &q, &mut rng);
    let a = nil.case_second_form(&q, &c[0], &c[1]).unwrap();
    assert_eq!(a, nil.reference_case_second_form(&q, &c[0], &c[1]).unwrap());
}

#[test]
fn case_split_rejects_vectors_outside_the_cases() {
    let mut rng = seeded(16);
    let hs = nil_surface(h3(1, 1), Profile::euclidean(2.0));
    let p = random_point(&hs, 0.5, 1.0, &mut rng);
    let nu = hs.normal(&p).unwrap();
    let nux = nu.rows(0, hs.k()).into_owned();
    let e = embed(&hs, Some(&nux), None);
    let bad = &e - &nu * nu.dot(&e);
    assert!(matches!(hs.case_split(&p, &bad), Err(Error::NotInDistribution(_))));
}

#[test]
fn t_cases_vanish_at_anticommutator_points() {
    let mut rng = seeded(17);
    let hs = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    for _ in 0..5 {
        let p = random_point(&hs, 0.3, 1.1, &mut rng);
        let tu = hs.unit_t(&p).unwrap();
        let zt = linalg::orthogonal_complement(&[p.z.clone()], 3, 1e-12)[0].clone();
        let jx = hs.j(&zt) * &p.x;
        for u in [embed(&hs, None, Some(&zt)), embed(&hs, Some(&jx), None)] {
            assert!(hs.second_fundamental_form(&p, &u, &tu).unwrap().abs() < 1e-12);
            assert!(hs.case_second_form(&p, &u, &tu).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn unit_t_is_a_unit_tangent() {
    let mut rng = seeded(18);
    let hs = solv_surface(SolvGroup::new(h3(1, 1), 0.8).unwrap(), solv_polynomial());
    let p = random_point(&hs, 0.3, 1.7, &mut rng);
    let tu = hs.unit_t(&p).unwrap();
    assert!((tu.norm() - 1.0).abs() < 1e-12);
    assert!(hs.normal(&p).unwrap().dot(&tu).abs() < 1e-12);
    assert!(hs.check_tangent(&p, &hs.reference_unit_t(&p).unwrap()).is_err());
}

#[test]
fn normal_curvature_case_formulas() {
    let mut rng = seeded(19);
    let hs = nil_surface(MetricGroup::new(random_space(6, 3, 20)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2]));
    for _ in 0..5 {
        let p = random_point(&hs, 0.4, 1.0, &mut rng);
        let (u, v) = (linalg::gaussian_vector(hs.dim(), &mut rng), linalg::gaussian_vector(hs.dim(), &mut rng));
        let engine = hs.normal_curvature(&p, &u, &v).unwrap();
        assert!((hs.case_normal_curvature(&p, &u, &v).unwrap() - engine).abs() < 1e-12);
    }
    let sh = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    let p = random_point(&sh, 0.2, 1.0, &mut rng);
    let u = random_tangent(&sh, &p, &mut rng);
    assert!(matches!(sh.case_normal_curvature(&p, &u, &u), Err(Error::WrongGroupFamily(_))));
}

#[test]
fn scalar_curvature_routes_agree() {
    let mut rng = seeded(21);
    let surfaces = [
        nil_surface(MetricGroup::new(random_space(4, 2, 22)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2])),
        nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3)),
        solv_surface(SolvGroup::new(MetricGroup::new(random_space(4, 2, 23)), 0.7).unwrap(), solv_polynomial()),
        solv_surface(sh3(2, 0), Profile::geodesic_sphere(1.0).unwrap()),
    ];
    for hs in &surfaces {
        for _ in 0..4 {
            let p = random_point(hs, 0.3, 1.1, &mut rng);
            let a = hs.scalar_curvature(&p).unwrap();
            let b = hs.scalar_curvature_trace(&p).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
            let (u, v) = (random_tangent(hs, &p, &mut rng), random_tangent(hs, &p, &mut rng));
            let r = hs.induced_ricci(&p, &u, &v).unwrap();
            assert!((r - hs.induced_ricci_gauss(&p, &u, &v).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn mirror_isometry_preserves_scalars() {
    let mut rng = seeded(24);
    let surfaces = [
        nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3)),
        nil_surface(MetricGroup::new(clifford_space(2, 1, 0).unwrap()), Profile::euclidean(1.5)),
        solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap()),
    ];
    for hs in &surfaces {
        for z_norm in [0.0, 0.35] {
            let p = random_point(hs, z_norm, 1.1, &mut rng);
            let q = p.mirrored();
            let (a, b) = (hs.scalar_curvature(&p).unwrap(), hs.scalar_curvature(&q).unwrap());
            assert!((a - b).abs() < 1e-10);
            let wa = linalg::fro(&hs.weingarten(&p).unwrap().matrix);
            let wb = linalg::fro(&hs.weingarten(&q).unwrap().matrix);
            assert!((wa - wb).abs() < 1e-10);
        }
    }
}

#[test]
fn mirror_is_not_an_isometry_of_a_generic_space() {
    let mut rng = seeded(42);
    let hs = nil_surface(MetricGroup::new(random_space(4, 3, 43)), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2]));
    let p = random_point(&hs, 0.4, 1.0, &mut rng);
    let (a, b) = (hs.scalar_curvature(&p).unwrap(), hs.scalar_curvature(&p.mirrored()).unwrap());
    assert!((a - b).abs() > 1e-3);
}

/// Hull point over Z₀ = e₀, X₀ = e₀ with |Z|² = τ.
fn hull_point(hs: &Hypersurface, tau: f64) -> SurfacePoint {
    let mut z = Vector::zeros(hs.l());
    z[0] = tau.sqrt();
    let mut x = Vector::zeros(hs.k());
    x[0] = 1.0;
    hs.point(&x, &z, 1.0).unwrap()
}

#[test]
fn hopf_closed_form_matches_gauss_assembly() {
    let groups = [
        (h3(1, 1), 8, 3),
        (h3(2, 0), 8, 3),
        (MetricGroup::new(clifford_space(1, 1, 0).unwrap()), 2, 1),
        (MetricGroup::new(clifford_space(7, 1, 0).unwrap()), 8, 7),
    ];
    let profiles = [Profile::euclidean(2.0), Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2, -0.05]), Profile::sqrt_shift(2.0, 0.3)];
    for (g, k, l) in groups {
        let par = HopfParams::heisenberg_type(k, l);
        for profile in &profiles {
            let hs = nil_surface(g.clone(), profile.clone());
            let rim = rim_tau(profile, 1.0).unwrap_or(TAU_CAP);
            for i in 0..50 {
                let tau = rim * (0.02 + 0.96 * low_discrepancy(i));
                let p = hull_point(&hs, tau);
                let parts = hs.scalar_parts(&p).unwrap();
                let cf = hopf_closed_form(&par, tau, &hs.jet(&p));
                assert!((parts.total() - cf.total()).abs() < 1e-8, "τ {tau}: {} vs {}", parts.total(), cf.total());
                assert!((parts.trace_b - cf.trace_b).abs() < 1e-8);
                assert!((parts.minus_two_ricci_normal - cf.minus_two_ricci_normal).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn reference_hopf_closed_form_differs_from_the_assembly() {
    let hs = nil_surface(h3(1, 1), Profile::euclidean(2.0));
    let p = hull_point(&hs, 0.5);
    let reference = hopf_closed_form_reference(&HopfParams::heisenberg_type(8, 3), 0.5, &hs.jet(&p));
    assert!((reference.total() - hs.scalar_curvature(&p).unwrap()).abs() > 1e-2);
}

#[test]
fn heisenberg_type_hulls_are_totally_geodesic() {
    let mut rng = seeded(26);
    let hs = nil_surface(h3(2, 0), Profile::sqrt_shift(2.0, 0.3));
    for _ in 0..3 {
        let z0 = linalg::random_unit_vector(3, &mut rng);
        let x0 = linalg::random_unit_vector(8, &mut rng);
        let rep = hs.hopf_hull(&z0, &x0, 20).unwrap();
        assert!((rep.lambda0 + 1.0).abs() < 1e-12);
        assert!(rep.pass, "{}", rep.to_text());
    }
}

#[test]
fn hull_through_the_distinguished_anticommutator_passes() {
    let hs = nil_surface(h3(1, 1), Profile::euclidean(2.0));
    let mut z0 = Vector::zeros(3);
    z0[0] = 1.0;
    let mut x0 = Vector::zeros(8);
    x0[1] = 1.0;
    let rep = hs.hopf_hull(&z0, &x0, 20).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.samples.len(), 20);
    assert!(rep.to_text().contains("PASS"));
    let sh = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    assert!(sh.hopf_hull(&z0, &x0, 10).unwrap().pass);
}

/// A, J₁, J₂ on ℝ⁴ with A a complex structure and J_i = ½(S_i + AS_iA):
/// A anticommutes with J₁ and J₂, which do not anticommute with each other.
fn non_cliffordian_space(seed: u64) -> EndoSpace {
    let mut rng = seeded(seed);
    let mut a = Mat::zeros(4, 4);
    for (i, j) in [(0, 1), (2, 3)] {
        a[(j, i)] = 1.0;
        a[(i, j)] = -1.0;
    }
    let mut mats = vec![a.clone()];
    for _ in 0..2 {
        let s = linalg::random_skew(4, &mut rng);
        mats.push((&s + &a * &s * &a) * 0.5);
    }
    build_endo_space(&mats).unwrap()
}

#[test]
fn hull_through_a_non_anticommutator_fails() {
    let space = non_cliffordian_space(27);
    let anti = linalg::anticommutator(space.mat(1), space.mat(2));
    assert!(linalg::max_abs(&anti) > 1e-3);
    let hs = nil_surface(MetricGroup::new(space.clone()), Profile::euclidean(2.0));
    let mut z0 = Vector::zeros(3);
    z0[1] = 1.0;
    let (_, vecs) = linalg::eigh(&(space.mat(1) * space.mat(1)));
    let rep = hs.hopf_hull(&z0, &vecs.column(0).into_owned(), 20).unwrap();
    assert!(!rep.pass);
    assert!(rep.anticommutator_residual > 1e-3);
    assert!(rep.subalgebra_residual.max(rep.geodesic_residual) > 1e-3);
    let mut a0 = Vector::zeros(3);
    a0[0] = 1.0;
    let mut x0 = Vector::zeros(4);
    x0[0] = 1.0;
    let control = hs.hopf_hull(&a0, &x0, 20).unwrap();
    assert!(control.pass, "{}", control.to_text());
}

#[test]
fn hull_rejects_non_eigenvectors() {
    let space = random_space(4, 2, 28);
    let hs = nil_surface(MetricGroup::new(space), Profile::euclidean(2.0));
    let mut z0 = Vector::zeros(2);
    z0[0] = 1.0;
    let x0 = Vector::from_vec(vec![1.0, 0.3, -0.2, 0.5]);
    assert!(matches!(hs.hopf_hull(&z0, &x0, 5), Err(Error::NotEigenvector(_))));
}

#[test]
fn hopf_curvature_hypothesis() {
    let eu = hopf_curvature(&Profile::euclidean(2.0), 50).unwrap();
    assert!(matches!(eu.hypothesis, HopfHypothesis::Nonvanishing { margin } if margin > 0.0), "{:?}", eu.hypothesis);
    assert_eq!(eu.values.len(), 50);
    assert!(eu.values.iter().any(|v| (v - eu.values[0]).abs() > 1e-3));
    let cyl = hopf_curvature(&Profile::cylinder(2.0), 50).unwrap();
    assert_eq!(cyl.hypothesis, HopfHypothesis::Degenerate);
    assert!(eu.to_csv().lines().count() > 50);
}

#[test]
fn cayley_transform_basics() {
    let cay = Cayley::new(sh3(1, 1)).unwrap();
    let origin = BallPoint { x: Vector::zeros(8), z: Vector::zeros(3), u: 0.0 };
    let p = cay.forward(&origin).unwrap();
    assert!(p.x.norm() == 0.0 && p.z.norm() == 0.0 && (p.t - 1.0).abs() < 1e-15);
    let mut rng = seeded(29);
    for _ in 0..100 {
        let v = linalg::random_unit_vector(12, &mut rng) * (0.99 * rng.random::<f64>());
        let b = BallPoint { x: v.rows(0, 8).into_owned(), z: v.rows(8, 3).into_owned(), u: v[11] };
        let back = cay.inverse(&cay.forward(&b).unwrap()).unwrap();
        let err = (&back.x - &b.x).norm() + (&back.z - &b.z).norm() + (back.u - b.u).abs();
        assert!(err < 1e-10);
    }
    let outside = BallPoint { x: Vector::zeros(8), z: Vector::zeros(3), u: 1.0 };
    assert!(matches!(cay.forward(&outside), Err(Error::OutsideBall(_))));
    assert!(Cayley::new(SolvGroup::new(h3(1, 1), 0.5).unwrap()).is_err());
    assert!(Cayley::new(SolvGroup::new(MetricGroup::new(random_space(4, 2, 30)), 1.0).unwrap()).is_err());
}

#[test]
fn cayley_spheres_are_geodesic_spheres() {
    for (a, b) in [(2, 0), (1, 1)] {
        let cay = Cayley::new(sh3(a, b)).unwrap();
        for s in [0.5, 1.0, 2.0] {
            let hs = geodesic_sphere(sh3(a, b), s).unwrap();
            for p in cay.sphere_points(s, 20, 31).unwrap() {
                assert!(hs.level(&p).abs() < 1e-9);
            }
            let (lo, hi) = t_axis_intersections(s);
            assert!((lo - (-s).exp()).abs() < 1e-10 && (hi - s.exp()).abs() < 1e-10);
            for t in [lo, hi] {
                let q = SurfacePoint::solv(Vector::zeros(8), Vector::zeros(3), t);
                assert!(hs.level(&q).abs() < 1e-10);
            }
            let mut up = Vector::zeros(12);
            up[11] = 1.0;
            assert!((cay.sphere_point(s, &up).unwrap().t - s.exp()).abs() < 1e-10);
        }
    }
}

#[test]
fn geodesic_sphere_profile_shrinks_to_a_point() {
    let profile = geodesic_sphere_profile(1e-4).unwrap();
    assert!(profile.jet(0.0, 1.0).d < 1e-7);
    assert!(profile.jet(0.0, 1.1).d < 0.0 && profile.jet(0.0, 0.9).d < 0.0);
    assert!(geodesic_sphere_profile(0.0).is_err());
}

#[test]
fn geodesic_sphere_has_constant_scalar_curvature_on_the_symmetric_space() {
    let cay = Cayley::new(sh3(2, 0)).unwrap();
    let hs = geodesic_sphere(sh3(2, 0), 1.0).unwrap();
    let ks: Vec<f64> = cay.sphere_points(1.0, 30, 32).unwrap().iter().map(|p| hs.scalar_curvature(p).unwrap()).collect();
    let mean = ks.iter().sum::<f64>() / 30.0;
    let std = (ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / 30.0).sqrt();
    assert!(std <= 1e-7 * mean.abs(), "mean {mean} std {std}");
}

/// A point of H₃^{(1,1)} whose X mixes the two ℝ⁴ copies by angle θ.
fn mixed_point(hs: &Hypersurface, theta: f64) -> SurfacePoint {
    let mut x = Vector::zeros(8);
    x[0] = theta.cos() * 0.8;
    x[1] = theta.cos() * 0.6;
    x[5] = theta.sin() * 0.6;
    x[6] = -theta.sin() * 0.8;
    let z = Vector::from_vec(vec![0.3, -0.2, 0.25]);
    hs.point(&x, &z, 1.0).unwrap()
}

#[test]
fn tensor_l_vanishes_on_the_quaternionic_hopf_fibration() {
    let mut rng = seeded(33);
    let hs = nil_surface(h3(2, 0), Profile::sqrt_shift(2.0, 0.3));
    for _ in 0..10 {
        let p = random_point(&hs, 0.4, 1.0, &mut rng);
        assert!(hs.tensor_l_norm(&p).unwrap() < 1e-10);
    }
    let cay = Cayley::new(sh3(2, 0)).unwrap();
    let sh = geodesic_sphere(sh3(2, 0), 1.0).unwrap();
    for p in cay.sphere_points(1.0, 30, 34).unwrap() {
        assert!(sh.tensor_l_norm(&p).unwrap() < 1e-10);
    }
}

#[test]
fn tensor_l_detects_mixed_points() {
    let hs = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
    assert!(hs.tensor_l_norm(&mixed_point(&hs, 0.0)).unwrap() < 1e-12);
    assert!(hs.tensor_l_norm(&mixed_point(&hs, std::f64::consts::FRAC_PI_2)).unwrap() < 1e-12);
    assert!(hs.tensor_l_norm(&mixed_point(&hs, 0.7)).unwrap() > 0.1);
    let small = hs.tensor_l_norm(&mixed_point(&hs, 1e-3)).unwrap();
    let double = hs.tensor_l_norm(&mixed_point(&hs, 2e-3)).unwrap();
    assert!((double / small - 2.0).abs() < 1e-2, "ratio {}", double / small);

    let cay = Cayley::new(sh3(1, 1)).unwrap();
    let sh = geodesic_sphere(sh3(1, 1), 1.0).unwrap();
    let margin = cay.sphere_points(1.0, 30, 35).unwrap().iter().map(|p| sh.tensor_l_norm(p).unwrap()).fold(f64::INFINITY, f64::min);
    assert!(margin > 1e-3, "margin {margin}");
    let mut x = Vector::zeros(8);
    x[2] = 1.0;
    let pure = sh.point(&x, &Vector::from_vec(vec![0.1, 0.2, -0.1]), 1.1).unwrap();
    assert!(sh.tensor_l_norm(&pure).unwrap() < 1e-12);
}

#[test]
fn tensor_l_is_antisymmetric_and_bilinear() {
    let hs = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
    let p = mixed_point(&hs, 0.6);
    let (rho, rest) = hs.distribution(&p).unwrap();
    let (u, v, w) = (&rho[0] + &rest[0] * 0.5, &rho[1] - &rho[2] * 2.0, &rho[2] + &rest[1]);
    let l_uv = hs.tensor_l(&p, &u, &v).unwrap();
    assert!(l_uv.norm() > 1e-3);
    assert!((&l_uv + hs.tensor_l(&p, &v, &u).unwrap()).norm() < 1e-12);
    let lin = hs.tensor_l(&p, &(&u * 2.0 + &w * 3.0), &v).unwrap();
    let expect = &l_uv * 2.0 + hs.tensor_l(&p, &w, &v).unwrap() * 3.0;
    assert!((lin - expect).norm() < 1e-12);
    let nu = hs.normal(&p).unwrap();
    for e in hs.k_distribution(&p).unwrap() {
        assert!(e.dot(&nu).abs() < 1e-12);
    }
    let outside = hs.k_distribution(&p).unwrap()[0].clone();
    assert!(matches!(hs.tensor_l(&p, &outside, &u), Err(Error::NotInDistribution(_))));
}

#[test]
fn quaternionic_ricci_structure() {
    let mut rng = seeded(36);
    let hs = nil_surface(h3(2, 0), Profile::sqrt_shift(2.0, 0.3));
    for _ in 0..10 {
        let p = random_point(&hs, 0.4, 1.0, &mut rng);
        let q = hs.ricci_matrix_h3(&p).unwrap();
        assert!(q.structure_residual <= BLOCK_TOL, "{}", q.structure_residual);
        let oracle = hs.ricci_in_basis(&p, &q.basis.matrix()).unwrap();
        assert!(linalg::max_abs(&(&oracle - &q.matrix)) < 1e-9);
        let kb = q.basis.k_block.len();
        for i in 1..kb {
            assert!((q.matrix[(i, i)] - q.epsilon).abs() < 1e-9);
        }
    }
    let pure = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
    assert!(pure.ricci_matrix_h3(&mixed_point(&pure, 0.0)).unwrap().structure_residual <= BLOCK_TOL);
    assert!(pure.ricci_matrix_h3(&mixed_point(&pure, 0.7)).unwrap().structure_residual > 1e-3);
    let not_h3 = nil_surface(MetricGroup::new(random_space(4, 2, 37)), Profile::euclidean(2.0));
    let p = random_point(&not_h3, 0.3, 1.0, &mut rng);
    assert!(matches!(not_h3.ricci_matrix_h3(&p), Err(Error::WrongGroupFamily(_))));
}

#[test]
fn determinant_criterion_is_nonzero_for_the_sqrt_profile() {
    let hs = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
    let rim = rim_tau(hs.profile(), 1.0).unwrap();
    for i in 0..50 {
        let tau = rim * (0.02 + 0.96 * low_discrepancy(i));
        let mut z = Vector::zeros(3);
        z[0] = tau.sqrt();
        let mut x = Vector::zeros(8);
        x[3] = 1.0;
        let p = hs.point(&x, &z, 1.0).unwrap();
        let q = hs.ricci_matrix_h3(&p).unwrap();
        assert!(q.criterion > 1e-8, "τ {tau}: {}", q.criterion);
        let expect = (q.a * q.a + q.b * q.b - q.e_big_l * q.e_zz).powi(2);
        assert!((q.criterion - expect).abs() < 1e-12 * expect.max(1.0));
    }
}

#[test]
fn solvable_ricci_eigenvalue_is_distinct_on_the_mixed_sphere() {
    let cay = Cayley::new(sh3(1, 1)).unwrap();
    let hs = geodesic_sphere(sh3(1, 1), 1.0).unwrap();
    for p in cay.sphere_points(1.0, 50, 38).unwrap() {
        let r = hs.solv_ricci_matrix(&p).unwrap();
        assert!(r.distinctness_margin > 1e-6, "margin {}", r.distinctness_margin);
        assert!(r.lt_determinant.abs() > 1e-9);
    }
    let sym = geodesic_sphere(sh3(2, 0), 1.0).unwrap();
    let cay = Cayley::new(sh3(2, 0)).unwrap();
    for p in cay.sphere_points(1.0, 10, 39).unwrap() {
        let r = sym.solv_ricci_matrix(&p).unwrap();
        assert!(r.structure_residual <= BLOCK_TOL);
        let kb = r.basis.k_block.len();
        for i in 1..kb {
            assert!(r.matrix.row(i).iter().enumerate().all(|(j, x)| j == i || x.abs() < 1e-9));
        }
    }
}

#[test]
fn boundary_fields_at_anticommutator_points() {
    let mut rng = seeded(40);
    let hs = nil_surface(MetricGroup::new(non_cliffordian_space(41)), Profile::euclidean(2.0));
    for _ in 0..5 {
        let p = random_point(&hs, 0.4, 1.0, &mut rng);
        let f = hs.boundary_fields(&p).unwrap();
        assert!(f.jx_gram[(0, 1)].abs() < 1e-12 && f.jx_gram[(0, 2)].abs() < 1e-12);
        assert!(f.jx_gram[(1, 2)].abs() > 1e-6);
        assert!((&f.nu_z - hs.normal(&p).unwrap().rows(4, 3)).norm() == 0.0);
    }
    let sh = solv_surface(sh3(1, 1), Profile::geodesic_sphere(1.0).unwrap());
    let p = random_point(&sh, 0.3, 1.3, &mut rng);
    let f = sh.boundary_fields(&p).unwrap();
    assert!((f.x_scale - 1.3).abs() < 1e-15 && (f.z_scale - 1.69).abs() < 1e-14);
    assert!(f.nu_t != 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_is_unit_and_orthogonal(seed in 0u64..10_000, z_norm in 0.0f64..0.9, t in 0.4f64..2.0) {
        let mut rng = seeded(seed);
        let hs = solv_surface(SolvGroup::new(MetricGroup::new(random_space(4, 2, seed)), 0.9).unwrap(), solv_polynomial());
        let z = linalg::random_unit_vector(2, &mut rng) * z_norm;
        if let Ok(p) = hs.point(&linalg::gaussian_vector(4, &mut rng), &z, t) {
            let nu = hs.normal(&p).unwrap();
            prop_assert!((nu.norm() - 1.0).abs() < 1e-12);
            let tb = hs.tangent_basis(&p).unwrap();
            prop_assert!((tb.transpose() * nu).amax() < 1e-10);
        }
    }

    #[test]
    fn second_form_is_symmetric(seed in 0u64..10_000, z_norm in 0.0f64..0.8) {
        let mut rng = seeded(seed);
        let hs = nil_surface(h3(1, 1), Profile::sqrt_shift(2.0, 0.3));
        let p = random_point(&hs, z_norm, 1.0, &mut rng);
        let (u, v) = (random_tangent(&hs, &p, &mut rng), random_tangent(&hs, &p, &mut rng));
        let (a, b) = (hs.second_fundamental_form(&p, &u, &v).unwrap(), hs.second_fundamental_form(&p, &v, &u).unwrap());
        prop_assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn mirror_preserves_scalar_curvature(seed in 0u64..10_000, z_norm in 0.0f64..0.8, family in 0usize..3) {
        let mut rng = seeded(seed);
        let g = [h3(1, 1), h3(2, 0), MetricGroup::new(clifford_space(2, 1, 0).unwrap())][family].clone();
        let hs = nil_surface(g, Profile::nilpotent_polynomial(&[1.5, -0.7, 0.2]));
        let p = random_point(&hs, z_norm, 1.0, &mut rng);
        let (a, b) = (hs.scalar_curvature(&p).unwrap(), hs.scalar_curvature(&p.mirrored()).unwrap());
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
}
