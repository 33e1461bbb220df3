//! The subcommands. Each returns the report text and its verdict; library
//! errors propagate to `main`, which maps them to exit code 2.

use crate::report::{sci, Report, Verdict};
use crate::input::{self, FamilySpec};
use isospec::endospace::{is_anticommutator, random_unit_instance, unit_coeffs, unit_endo_conjugator, write_endo_space, EndoSpace};
use isospec::harmonics::verify_intertwining;
use isospec::hypersurface::*;
use isospec::linalg::Vector;
use isospec::nilgeom::MetricGroup;
use isospec::rng::seeded;
use isospec::solvgeom::{isotonal_decomposition, BoxLayout, IsotonalInput, SolvGroup};
use isospec::spectra::{compare_windows, exact_equivalence};
use isospec::{Error, Result};
use std::fmt::Write as _;

pub struct Output {
    pub text: String,
    pub verdict: Verdict,
}

fn space_summary(r: &mut Report, space: &EndoSpace) -> Result<()> {
    r.section("space").kv("k", space.k()).kv("l", space.l()).kv("heisenberg_type", space.is_heisenberg_type());
    r.kv("heisenberg_residual", sci(space.heisenberg_residual()));
    r.section("anticommutator table");
    for alpha in 0..space.l() {
        let chk = is_anticommutator(space, &unit_coeffs(space.l(), alpha))?;
        r.kv(
            &format!("J[{alpha}]"),
            format!(
                "{} (min singular value {}, residual {})",
                chk.is_anticommutator,
                sci(chk.min_singular_value),
                sci(chk.residual)
            ),
        );
    }
    Ok(())
}

/// Builds or loads a space, validates it and returns (report, serialized space).
pub fn construct(source: &str, space: EndoSpace, seed: u64) -> Result<(Output, String)> {
    let mut r = Report::new("construct", seed);
    r.section("source").kv("spec", source);
    space_summary(&mut r, &space)?;
    let serialized = write_endo_space(&space);
    Ok((Output { text: r.finish(Verdict::Pass), verdict: Verdict::Pass }, serialized))
}

pub fn intertwine(first: &str, second: &str, r_max: usize, seed: u64) -> Result<Output> {
    let s1 = input::load_space(first)?;
    let s2 = input::load_space(second)?;
    let rep = verify_intertwining(&s1, &s2, r_max)?;
    let mut r = Report::new("verify intertwine", seed);
    r.section("pair").kv("first", first).kv("second", second).kv("rmax", r_max);
    r.section("certificate").block(&rep.to_text());
    r.kv("max_residual", sci(rep.max_residual()));
    let verdict = Verdict::from_bool(rep.pass());
    Ok(Output { text: r.finish(verdict), verdict })
}

fn isotonal_input(name: &str, c: f64) -> Result<IsotonalInput> {
    let f = input::family(name)?;
    Ok(IsotonalInput {
        group: MetricGroup::new(f.space()?),
        layout: BoxLayout { module_dim: f.module_dim()?, a: f.a, b: f.b },
        c: f.solvable.then_some(c),
        label: name.to_string(),
    })
}

fn spectrum_line(values: &[f64], mult: &[usize]) -> String {
    values.iter().zip(mult).map(|(v, m)| format!("{v:.9} (×{m})")).collect::<Vec<_>>().join(", ")
}

pub fn isotonal(first: &str, second: &str, c: f64, seed: u64) -> Result<Output> {
    let (i1, i2) = (isotonal_input(first, c)?, isotonal_input(second, c)?);
    if i1.c.is_some() != i2.c.is_some() {
        return Err(Error::InvalidParameter("compare two nilpotent or two solvable groups".into()));
    }
    let rep = isotonal_decomposition(&i1, &i2)?;
    let mut r = Report::new("verify isotonal", seed);
    r.section("pair").kv("first", first).kv("second", second);
    if i1.c.is_some() {
        r.kv("c", c);
    }
    for s in [&rep.first, &rep.second] {
        r.section(&format!("spectrum {}", s.label));
        r.kv("total", spectrum_line(&s.total.values, &s.total.multiplicities));
        for b in &s.blocks {
            r.kv(
                &format!("block {}", b.name),
                format!("dim {}, off-block residual {}", b.dim, sci(b.off_block_residual)),
            );
        }
    }
    r.section("comparison");
    r.kv("set_hausdorff", sci(rep.set.deviation)).kv("set_equal", rep.set.pass);
    r.kv("multiset_deviation", sci(rep.multiset.deviation)).kv("multiset_equal", rep.multiset.pass);
    r.kv("containment", format!("{:?}", rep.set.containment));
    r.kv("strictly_isotonal", rep.strictly_isotonal()).kv("ambiguous_clusters", rep.ambiguous);
    r.kv("max_block_residual", sci(rep.max_block_residual));
    let verdict = Verdict::from_bool(rep.set.pass && rep.max_block_residual <= isospec::solvgeom::BLOCK_TOL);
    Ok(Output { text: r.finish(verdict), verdict })
}

pub fn conjugator(instances: usize, tol: f64, seed: u64) -> Result<Output> {
    let mut rng = seeded(seed);
    let names = ["sqrt_d_orthogonal", "conjugation", "s_hat_involution", "s_hat_commutes", "sqrt_d_commutes"];
    let mut worst = [0.0_f64; 5];
    for _ in 0..instances {
        let (a, b, f) = random_unit_instance(&mut rng);
        let c = unit_endo_conjugator(&a, &b, &f)?;
        let res = &c.residuals;
        let vals = [res.sqrt_d_orthogonal, res.conjugation, res.s_hat_involution, res.s_hat_commutes, res.sqrt_d_commutes];
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
    }
    let mut r = Report::new("verify conjugator", seed);
    r.section("instances").kv("count", instances).kv("tolerance", sci(tol));
    r.section("max residuals");
    for (n, w) in names.iter().zip(worst) {
        r.kv(n, sci(w));
    }
    let verdict = Verdict::from_bool(worst.iter().all(|w| *w <= tol));
    Ok(Output { text: r.finish(verdict), verdict })
}

fn quaternionic_solvable(name: &str) -> Result<(FamilySpec, SolvGroup)> {
    let f = input::family(name)?;
    if f.l != 3 {
        return Err(Error::WrongGroupFamily(format!("'{name}': the sphere certificates need l = 3")));
    }
    Ok((f.clone(), SolvGroup::new(MetricGroup::new(f.space()?), 1.0)?))
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
}

struct SpherePoint {
    point: SurfacePoint,
    kappa: f64,
    l_norm: f64,
    ricci_margin: f64,
    ricci_structure: f64,
}

fn sphere_samples(group: &str, s: f64, points: usize, seed: u64) -> Result<(FamilySpec, Vec<SpherePoint>)> {
    if points == 0 {
        return Err(Error::InvalidParameter("need at least one sphere point".into()));
    }
    let (f, g) = quaternionic_solvable(group)?;
    let cay = Cayley::new(g.clone())?;
    let hs = geodesic_sphere(g, s)?;
    let out = cay
        .sphere_points(s, points, seed)?
        .into_iter()
        .map(|p| {
            let ricci = hs.solv_ricci_matrix(&p)?;
            Ok(SpherePoint {
                kappa: hs.scalar_curvature(&p)?,
                l_norm: hs.tensor_l_norm(&p)?,
                ricci_margin: ricci.distinctness_margin,
                ricci_structure: ricci.structure_residual,
                point: p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((f, out))
}

/// Tensor L of a geodesic sphere vanishes identically when every copy
/// carries the same sign (a·b = 0); otherwise it must be nonzero.
const L_ZERO_TOL: f64 = 1e-10;

pub fn geosphere(group: &str, s: f64, points: usize, seed: u64) -> Result<Output> {
    let (f, samples) = sphere_samples(group, s, points, seed)?;
    let kappas: Vec<f64> = samples.iter().map(|p| p.kappa).collect();
    let (mean, std) = mean_std(&kappas);
    let rel = std / mean.abs().max(f64::MIN_POSITIVE);
    let l_min = samples.iter().map(|p| p.l_norm).fold(f64::INFINITY, f64::min);
    let l_max = samples.iter().map(|p| p.l_norm).fold(0.0, f64::max);
    let margin = samples.iter().map(|p| p.ricci_margin).fold(f64::INFINITY, f64::min);
    let structure = samples.iter().map(|p| p.ricci_structure).fold(0.0, f64::max);
    let (lo, hi) = t_axis_intersections(s);
    let symmetric = f.a * f.b == 0;

    let mut r = Report::new("verify geosphere", seed);
    r.section("sphere").kv("group", group).kv("s", s).kv("points", points);
    r.kv("t_axis", format!("{} {}", sci(lo), sci(hi)));
    r.section("scalar curvature").kv("mean", sci(mean)).kv("std", sci(std)).kv("relative_std", sci(rel));
    r.kv("constant", rel <= CONSTANCY_TOL);
    r.section("tensor L").kv("min_norm", sci(l_min)).kv("max_norm", sci(l_max));
    r.section("ricci").kv("min_distinctness_margin", sci(margin)).kv("max_structure_residual", sci(structure));
    r.section("homogeneity");
    let verdict = if symmetric {
        r.kv("expected", "tensor L ≡ 0 and constant scalar curvature");
        Verdict::from_bool(l_max <= L_ZERO_TOL && rel <= CONSTANCY_TOL)
    } else {
        r.kv("expected", "tensor L nonzero at generic points");
        Verdict::from_bool(l_min > L_ZERO_TOL)
    };
    Ok(Output { text: r.finish(verdict), verdict })
}

pub struct FourierArgs<'a> {
    pub first: &'a str,
    pub second: &'a str,
    pub beta: &'a str,
    pub n: usize,
    pub count: usize,
    pub exact_n: usize,
    pub scale: Option<f64>,
}

pub fn fourier(a: &FourierArgs, seed: u64) -> Result<Output> {
    let g1 = MetricGroup::new(input::load_space(a.first)?);
    let g2 = MetricGroup::new(input::load_space(a.second)?);
    let beta = input::vector(a.beta)?;
    let mut r = Report::new("verify fourier", seed);
    r.section("pair").kv("first", a.first).kv("second", a.second).kv("beta", a.beta);
    r.section("exact route").kv("truncation", a.exact_n);
    let exact_pass = match exact_equivalence(&g1, &g2, &beta, a.exact_n, a.scale.unwrap_or(1.0), 1e-8) {
        Ok(e) => {
            r.kv("conjugacy_residual", sci(e.conjugacy_residual)).kv("operator_residual", sci(e.operator_residual));
            e.pass
        }
        Err(Error::InvalidParameter(msg)) => {
            r.kv("not_conjugate", msg);
            false
        }
        Err(e) => return Err(e),
    };
    r.kv("pass", exact_pass);
    let w = compare_windows(&g1, &g2, &beta, a.n, a.count, a.scale)?;
    r.section("numeric window").kv("truncation", a.n).kv("count", a.count);
    let mut rows = String::new();
    for i in 0..w.deviations.len() {
        let _ = writeln!(
            rows,
            "{} {} deviation {} tolerance {}",
            sci(w.first.eigenvalues[i]),
            sci(w.second.eigenvalues[i]),
            sci(w.deviations[i]),
            sci(w.tolerances[i])
        );
    }
    r.block(&rows).kv("pass", w.pass);
    let verdict = Verdict::from_bool(exact_pass && w.pass);
    Ok(Output { text: r.finish(verdict), verdict })
}

/// Short machine-readable name of an error (its variant).
pub fn reason(e: &Error) -> String {
    let s = e.to_string();
    s.split(':').next().unwrap_or(&s).to_string()
}

pub fn scan_hopf(profile: &str, samples: usize, seed: u64) -> Result<String> {
    let p = input::profile(profile)?;
    let rep = hopf_curvature(&p, samples)?;
    Ok(format!("# isospec scan hopf, profile = {profile}, seed = {seed}\n# {:?}\n{}", rep.hypothesis, rep.to_csv()))
}

pub fn scan_hull(group: &str, profile: &str, tau_max: f64, samples: usize, seed: u64) -> Result<String> {
    let f = input::family(group)?;
    let p = input::profile(profile)?;
    if p.is_solvable() || f.solvable {
        return Err(Error::InvalidParameter("hull scans run on the nilpotent model".into()));
    }
    if !(tau_max > 0.0) || samples == 0 {
        return Err(Error::InvalidParameter("need tau-max > 0 and at least one sample".into()));
    }
    let space = f.space()?;
    let (k, l) = (space.k(), space.l());
    let hs = Hypersurface::new(Ambient::Nilpotent(MetricGroup::new(space)), p)?;
    let par = HopfParams::heisenberg_type(k, l);
    let mut out = format!("# isospec scan hull, group = {group}, profile = {profile}, seed = {seed}\n");
    out += "tau,status,kappa,closed_form,determinant_criterion\n";
    for i in 0..samples {
        let tau = tau_max * (i as f64 + 0.5) / samples as f64;
        let mut z = Vector::zeros(l);
        z[0] = tau.sqrt();
        let row = (|| -> Result<String> {
            let mut x = Vector::zeros(k);
            x[0] = 1.0;
            let pt = hs.point(&x, &z, 1.0)?;
            let kappa = hs.scalar_parts(&pt)?.total();
            let closed = hopf_closed_form(&par, tau, &hs.jet(&pt)).total();
            let crit = if l == 3 && k >= 4 {
                let mut x = Vector::zeros(k);
                x[3] = 1.0;
                sci(hs.ricci_matrix_h3(&hs.point(&x, &z, 1.0)?)?.criterion)
            } else {
                String::new()
            };
            Ok(format!("{},ok,{},{},{crit}", sci(tau), sci(kappa), sci(closed)))
        })();
        out += &match row {
            Ok(line) => line,
            Err(e) => format!("{},{},,,", sci(tau), reason(&e)),
        };
        out.push('\n');
    }
    Ok(out)
}

pub fn scan_geosphere(group: &str, s: f64, points: usize, seed: u64) -> Result<String> {
    let (_, samples) = sphere_samples(group, s, points, seed)?;
    let mut out = format!("# isospec scan geosphere, group = {group}, s = {s}, seed = {seed}\n");
    out += "index,t,tau,x_norm,kappa,tensor_l_norm,ricci_margin\n";
    for (i, p) in samples.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            sci(p.point.t),
            sci(p.point.tau()),
            sci(p.point.x.norm()),
            sci(p.kappa),
            sci(p.l_norm),
            sci(p.ricci_margin)
        );
    }
    Ok(out)
}
