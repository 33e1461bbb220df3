use isospec::endospace::{build_endo_space, clifford_space, quaternion_left, EndoSpace};
use isospec::harmonics::*;
use isospec::linalg::{self, CMat, Mat};
use isospec::rng::seeded;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_poly(k: usize, d: usize, seed: u64) -> GradedPoly {
    let mut rng = seeded(seed);
    let mb = MonomialBasis::new(k, d);
    let v = linalg::gaussian_vector(mb.len(), &mut rng);
    GradedPoly::from_terms(k, mb.exps.iter().cloned().zip(v.iter().map(|x| c(*x))))
}

fn close(p: &GradedPoly, q: &GradedPoly, tol: f64) -> bool {
    p.sub(q).max_coeff() <= tol
}

fn quaternion_pair() -> (EndoSpace, EndoSpace) {
    let f = quaternion_left(2) * 0.6;
    let theta = 0.7_f64;
    let b0 = quaternion_left(1) * theta.cos() + quaternion_left(3) * theta.sin();
    let s1 = build_endo_space(&[quaternion_left(1), f.clone()]).unwrap().with_anticommutator(0);
    let s2 = build_endo_space(&[b0, f]).unwrap().with_anticommutator(0);
    (s1, s2)
}

#[test]
fn theta_is_an_eigenfunction_of_the_anticommutator() {
    let a = quaternion_left(1);
    let t = theta(&[1.0, 0.0, 0.0, 0.0], &a).unwrap();
    assert!(t.laplacian().is_zero());
    let i = Complex64::new(0.0, 1.0);
    assert!(close(&t.d_op_apply(&a), &t.scale(i), 1e-14));
}

#[test]
fn perpendicular_derivation_conjugates_theta() {
    let a = quaternion_left(1);
    let jc = quaternion_left(2);
    let q = [0.3, -0.5, 0.8, 0.1];
    let jq: Vec<f64> = (&jc * linalg::Vector::from_column_slice(&q)).iter().copied().collect();
    let lhs = theta(&q, &a).unwrap().d_op_apply(&jc);
    let rhs = theta(&jq, &a).unwrap().conj().scale(c(-1.0));
    assert!(close(&lhs, &rhs, 1e-14));
}

#[test]
fn theta_rejects_non_unit_structures() {
    assert!(matches!(theta(&[1.0, 0.0, 0.0, 0.0], &(quaternion_left(1) * 2.0)), Err(isospec::Error::NotUnit(_))));
    assert!(matches!(theta(&[1.0, 0.0], &quaternion_left(1)), Err(isospec::Error::DimensionMismatch(_))));
}

#[test]
fn mixed_products_of_theta() {
    let a = quaternion_left(1);
    let q = [1.0, 0.2, 0.0, -0.4];
    let p = [0.0, 0.5, 1.0, 0.3];
    let tq = theta(&q, &a).unwrap();
    let tp = theta(&p, &a).unwrap();
    assert!(tq.mul(&tp).laplacian().max_coeff() < 1e-14);
    let qv = linalg::Vector::from_column_slice(&q);
    let pv = linalg::Vector::from_column_slice(&p);
    let expect = Complex64::new(4.0 * qv.dot(&pv), 4.0 * (&a * &qv).dot(&pv));
    let lap = tq.mul(&tp.conj()).laplacian();
    assert!((lap.coeff(&[0, 0, 0, 0]) - expect).norm() < 1e-14);
    assert_eq!(lap.degree(), 0);
}

#[test]
fn derivations_commute_with_the_laplacian() {
    let mut rng = seeded(70);
    let f = linalg::random_skew(5, &mut rng);
    let p = random_poly(5, 4, 71);
    assert!(close(&p.d_op_apply(&f).laplacian(), &p.laplacian().d_op_apply(&f), 1e-12));
}

#[test]
fn projection_of_a_squared_linear_form() {
    let k = 5;
    let q = [1.0, -2.0, 0.5, 0.0, 1.5];
    let qn: f64 = q.iter().map(|x| x * x).sum();
    let lin = GradedPoly::linear(&q.iter().map(|&x| c(x)).collect::<Vec<_>>());
    let h = harmonic_project(&lin.pow(2)).unwrap();
    let expect = lin.pow(2).sub(&GradedPoly::norm_squared(k).scale(c(qn / k as f64)));
    assert!(close(&h, &expect, 1e-13));
}

#[test]
fn projection_of_a_cubed_linear_form() {
    let k = 4;
    let q = [0.5, 1.0, -1.0, 2.0];
    let qn: f64 = q.iter().map(|x| x * x).sum();
    let lin = GradedPoly::linear(&q.iter().map(|&x| c(x)).collect::<Vec<_>>());
    let h = harmonic_project(&lin.pow(3)).unwrap();
    let expect = lin.pow(3).sub(&GradedPoly::norm_squared(k).mul(&lin).scale(c(3.0 * qn / (k as f64 + 2.0))));
    assert!(close(&h, &expect, 1e-12));
}

#[test]
fn dimension_aware_recursion_is_harmonic_where_the_dimension_free_one_is_not() {
    for (k, d) in [(4usize, 4usize), (8, 6)] {
        let cmp = compare_recursions(&random_poly(k, d, 72 + k as u64)).unwrap();
        assert!(cmp.dimension_aware < 1e-10, "{cmp:?}");
        assert!(cmp.dimension_free > 1e-2, "{cmp:?}");
    }
}

#[test]
fn harmonic_dimensions_match_the_basis() {
    for k in [4usize, 8] {
        let basis = HarmonicBasis::new(k, 6, 6).unwrap();
        for q in 0..=6 {
            assert_eq!(basis.dim(q), harmonic_dimension(k, q));
            assert!(basis.laplacian_residual(q) < 1e-10);
            assert!(basis.orthonormality_residual(q) < 1e-10);
        }
    }
    assert_eq!(harmonic_dimension(8, 6), 1386);
    assert_eq!(harmonic_dimension(4, 3), 16);
}

#[test]
fn zonal_kernel_reproduces_and_is_radial() {
    let k = 4;
    let basis = HarmonicBasis::new(k, 3, 3).unwrap();
    let u = [0.6, 0.0, 0.8, 0.0];
    let z = zonal_kernel(3, &u, &basis).unwrap();
    for j in 0..basis.dim(3) {
        let h = basis.element(3, j);
        let lhs = sphere_inner(&h, &z);
        assert!((lhs - h.eval(&u)).norm() < 1e-10);
    }
    // Two unit vectors with the same inner product against u.
    let x1 = [0.0, 1.0, 0.0, 0.0];
    let x2 = [0.0, 0.0, 0.0, 1.0];
    assert!((z.eval(&x1) - z.eval(&x2)).norm() < 1e-10);
    let expect = harmonic_dimension(k, 3) as f64 / sphere_volume(k);
    assert!((z.eval(&u).re - expect).abs() < 1e-10);
}

#[test]
fn eigen_split_of_linear_forms() {
    let basis = HarmonicBasis::new(8, 2, 2).unwrap();
    let a0 = clifford_space(3, 1, 0).unwrap().mat(0).clone();
    let a0 = linalg::block_diag(&[a0.clone(), a0]);
    let s = hq_split(&basis, 1, &a0).unwrap();
    assert_eq!(s.dims(), vec![(0, 4), (1, 4)]);
    assert!(s.max_eigen_deviation < 1e-9 && s.eigen_residual < 1e-9);
    let s2 = hq_split(&basis, 2, &a0).unwrap();
    assert_eq!(s2.dims().iter().map(|(_, d)| d).sum::<usize>(), basis.dim(2));
    assert!(s2.eigen_residual < 1e-9);
}

#[test]
fn eigen_split_rejects_non_unit_structures() {
    let basis = HarmonicBasis::new(4, 1, 1).unwrap();
    assert!(matches!(hq_split(&basis, 1, &(quaternion_left(1) * 1.5)), Err(isospec::Error::NotUnit(_))));
}

#[test]
fn sphere_decomposition_round_trips_and_commutes_with_derivations() {
    let p = random_poly(4, 4, 73);
    let parts = t_apply(&p).unwrap();
    assert_eq!(parts.len(), 3);
    for h in &parts {
        assert!(h.laplacian().max_coeff() < 1e-10);
    }
    assert!(close(&t_invert(&parts, 4).unwrap(), &p, 1e-10));
    let f = quaternion_left(2);
    let moved = t_apply(&p.d_op_apply(&f)).unwrap();
    for (a, b) in moved.iter().zip(&parts) {
        assert!(close(a, &b.d_op_apply(&f), 1e-10));
    }
}

#[test]
fn sphere_recomposition_rejects_non_harmonic_parts() {
    let p = random_poly(4, 2, 74);
    assert!(matches!(t_invert(&[p], 2), Err(isospec::Error::SingularTruncation(_))));
}

#[test]
fn kappa_is_the_identity_without_deformation() {
    let a = quaternion_left(1);
    let k = KappaMap::new(&a, &a, &[quaternion_left(2)], None).unwrap();
    assert!(linalg::max_abs(&(&k.phi - Mat::identity(4, 4))) < 1e-12);
    let p = random_poly(4, 3, 75);
    assert!(close(&k.kappa_star(&p), &p, 1e-12));
}

#[test]
fn kappa_moves_the_eigen_split() {
    let (s1, s2) = quaternion_pair();
    let km = KappaMap::new(s1.mat(0), s2.mat(0), &[s1.mat(1).clone()], None).unwrap();
    assert!(km.conjugation_residual < 1e-12);
    let basis = HarmonicBasis::new(4, 3, 3).unwrap();
    for q in 1..=3 {
        let kq = linalg::to_complex(&km.matrix(&basis, q));
        let first = hq_split(&basis, q, s1.mat(0)).unwrap();
        let second = hq_split(&basis, q, s2.mat(0)).unwrap();
        for ((s, b), (s2i, b2)) in first.parts.iter().zip(&second.parts) {
            assert_eq!(s, s2i);
            let moved: CMat = &kq * b;
            let inside = b2 * (b2.adjoint() * &moved);
            assert!(linalg::cfro(&(moved - inside)) < 1e-9, "q = {q}, s = {s}");
        }
    }
}

#[test]
fn kappa_matches_its_polynomial_definition() {
    let (s1, s2) = quaternion_pair();
    let km = KappaMap::new(s1.mat(0), s2.mat(0), &[s1.mat(1).clone()], None).unwrap();
    let basis = HarmonicBasis::new(4, 2, 2).unwrap();
    let kq = km.matrix(&basis, 2);
    for j in 0..basis.dim(2) {
        let image = km.kappa(&basis.element(2, j)).unwrap();
        let mut expect = GradedPoly::zero(4);
        for i in 0..basis.dim(2) {
            expect = expect.add(&basis.element(2, i).scale(c(kq[(i, j)])));
        }
        assert!(close(&image, &expect, 1e-10));
    }
}

#[test]
fn like_pairings_vanish_for_perpendicular_pairs() {
    let a0 = quaternion_left(1);
    let (jc, jd) = (quaternion_left(2), quaternion_left(3));
    let (j1, j2) = cd_expansion(&a0, &jc, &jd);
    assert!(j2.max_coeff() < 1e-14);
    let q = jc.transpose() * &jd;
    let full = GradedPoly::quadratic(&((&q + q.transpose()) * 0.5));
    assert!(close(&j1, &full, 1e-14));
    let (_, j2_same) = cd_expansion(&a0, &jc, &jc);
    assert!(j2_same.max_coeff() < 1e-14);
}

#[test]
fn certificate_of_a_space_against_itself() {
    let s = clifford_space(3, 1, 1).unwrap();
    let rep = verify_intertwining(&s, &s, 3).unwrap();
    assert!(rep.pass(), "{}", rep.to_text());
    assert!(rep.max_residual() < 1e-12);
    assert!(rep.to_text().contains("overall: PASS"));
}

#[test]
fn certificate_rejects_a_scaled_anticommutator() {
    let s = clifford_space(3, 2, 0).unwrap();
    let scaled = s.with_replaced(0, s.mat(0) * 1.1).unwrap();
    let rep = verify_intertwining(&s, &scaled, 3).unwrap();
    assert!(!rep.pass());
    assert!(rep.family("|J_A X|^2").unwrap().residual >= 1e-2);
}

#[test]
fn certificate_on_the_deformed_pair_matches_the_anticommutator_family() {
    let rep = verify_intertwining(&clifford_space(3, 1, 1).unwrap(), &clifford_space(3, 2, 0).unwrap(), 2).unwrap();
    assert!(rep.kappa_conjugation_residual < 1e-12);
    assert!(rep.family("D[0]").unwrap().pass);
    assert!(rep.family("spherical Laplacian").unwrap().pass);
    assert!(rep.family("|J_A X|^2").unwrap().pass);
}

#[test]
fn certificate_requires_a_shared_perpendicular_family() {
    let (s1, _) = quaternion_pair();
    let other = s1.with_replaced(1, quaternion_left(3)).unwrap();
    assert!(matches!(verify_intertwining(&s1, &other, 1), Err(isospec::Error::InvalidParameter(_))));
}

#[test]
fn bundle_certificate_of_a_space_against_itself() {
    let s = clifford_space(3, 1, 0).unwrap();
    let setup = IntertwiningSetup::new(&s, &s, None).unwrap();
    let basis = HarmonicBasis::new(4, 2, 4).unwrap();
    let samples = vec![
        BundleSample { scale: 1.0, weights: vec![0.3, -0.2, 0.5] },
        BundleSample { scale: 0.4, weights: vec![0.0, 1.0, 0.0] },
    ];
    let rep = verify_bundle(&setup, &basis, &samples).unwrap();
    assert!(rep.pass && rep.residuals.len() == 2);
    let bad = [BundleSample { scale: 1.0, weights: vec![1.0] }];
    assert!(verify_bundle(&setup, &basis, &bad).is_err());
}

#[test]
fn assembled_laplacian_block_is_diagonal() {
    let basis = HarmonicBasis::new(4, 2, 2).unwrap();
    let m = assemble(&basis, &laplacian_blocks(&basis));
    assert_eq!(m.nrows(), 1 + 4 + 9);
    assert_eq!(m[(13, 13)], -8.0);
    assert_eq!(m[(1, 1)], -3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_harmonic_and_idempotent(seed in 0u64..10_000, d in 2usize..6) {
        let p = random_poly(4, d, seed);
        let h = harmonic_project(&p).unwrap();
        prop_assert!(h.laplacian().max_coeff() < 1e-9 * p.max_coeff().max(1.0));
        prop_assert!(close(&harmonic_project(&h).unwrap(), &h, 1e-9));
    }

    #[test]
    fn derivations_preserve_harmonicity(seed in 0u64..10_000) {
        let mut rng = seeded(seed);
        let f = linalg::random_skew(4, &mut rng);
        let h = harmonic_project(&random_poly(4, 3, seed + 1)).unwrap();
        prop_assert!(h.d_op_apply(&f).laplacian().max_coeff() < 1e-9);
    }

    #[test]
    fn kappa_blocks_are_orthogonal(theta in 0.1f64..3.0) {
        let a = quaternion_left(1);
        let b = quaternion_left(1) * theta.cos() + quaternion_left(3) * theta.sin();
        let km = KappaMap::new(&a, &b, &[quaternion_left(2)], None).unwrap();
        let basis = HarmonicBasis::new(4, 3, 3).unwrap();
        for q in 0..=3 {
            prop_assert!(linalg::orth_residual(&km.matrix(&basis, q)) < 1e-9);
        }
    }
}
