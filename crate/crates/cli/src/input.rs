//! Parsing of group, space and profile specifications given on the command line.

use isospec::endospace::{build_endo_space, clifford_dimension, clifford_space, parse_endo_space, quaternion_left, EndoSpace};
use isospec::hypersurface::Profile;
use isospec::linalg::Vector;
use isospec::{Error, Result};
use std::path::Path;

/// A named Clifford family member: `h3_11`, `n3_13`, `sh3_20`, `sn3_22`, or
/// with separators for larger multiplicities, `h7_1_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub l: usize,
    pub a: usize,
    pub b: usize,
    pub solvable: bool,
}

impl FamilySpec {
    pub fn parse(name: &str) -> Option<Self> {
        let (solvable, rest) = if let Some(r) = name.strip_prefix("sh").or_else(|| name.strip_prefix("sn")) {
            (true, r)
        } else if let Some(r) = name.strip_prefix('h').or_else(|| name.strip_prefix('n')) {
            (false, r)
        } else {
            return None;
        };
        let (l, ab) = rest.split_once('_')?;
        let l = l.parse().ok()?;
        let (a, b) = match ab.split_once('_') {
            Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
            None if ab.len() == 2 && ab.chars().all(|c| c.is_ascii_digit()) => {
                (ab[..1].parse().ok()?, ab[1..].parse().ok()?)
            }
            None => return None,
        };
        Some(Self { l, a, b, solvable })
    }

    pub fn space(&self) -> Result<EndoSpace> {
        clifford_space(self.l, self.a, self.b)
    }

    /// Dimension of the irreducible module each copy lives on.
    pub fn module_dim(&self) -> Result<usize> {
        clifford_dimension(self.l).ok_or(Error::UnsupportedL(self.l))
    }
}

/// A = L_i with F = 0.6 L_j on the quaternions (`k4_base`), and the same
/// family with A rotated to cos 0.7 L_i + sin 0.7 L_k (`k4_rotated`).
fn builtin(name: &str) -> Option<Result<EndoSpace>> {
    let f = quaternion_left(2) * 0.6;
    match name {
        "k4_base" => Some(build_endo_space(&[quaternion_left(1), f])),
        "k4_rotated" => {
            let a = quaternion_left(1) * 0.7_f64.cos() + quaternion_left(3) * 0.7_f64.sin();
            Some(build_endo_space(&[a, f]))
        }
        _ => None,
    }
}

/// Resolves a family name, a built-in name, or a space file.
pub fn load_space(spec: &str) -> Result<EndoSpace> {
    if let Some(f) = FamilySpec::parse(spec) {
        return f.space();
    }
    if let Some(s) = builtin(spec) {
        return s;
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("'{spec}' is neither a known group name nor a readable file: {e}")))?;
    parse_endo_space(&text)
}

pub fn family(spec: &str) -> Result<FamilySpec> {
    FamilySpec::parse(spec).ok_or_else(|| Error::Parse(format!("'{spec}' is not a group name such as h3_11 or sh3_20")))
}

fn numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{s}' is not a number"))))
        .collect()
}

pub fn vector(text: &str) -> Result<Vector> {
    Ok(Vector::from_vec(numbers(text)?))
}

/// `euclid:R2` (D = R² − τ), `poly:c0,c1,…` (D = Σ cᵢτⁱ), `sqrt:Q,Q*`
/// (D = √(Q − τ) + Q*) or `sphere:s` (geodesic sphere of radius s).
pub fn profile(text: &str) -> Result<Profile> {
    let (kind, args) = text.split_once(':').ok_or_else(|| Error::Parse(format!("profile '{text}' needs the form kind:values")))?;
    let vals = numbers(args)?;
    let want = |n: usize| {
        if vals.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!("profile kind '{kind}' takes {n} value(s), got {}", vals.len())))
        }
    };
    match kind {
        "euclid" => {
            want(1)?;
            Ok(Profile::euclidean(vals[0]))
        }
        "poly" if !vals.is_empty() => Ok(Profile::nilpotent_polynomial(&vals)),
        "sqrt" => {
            want(2)?;
            Ok(Profile::sqrt_shift(vals[0], vals[1]))
        }
        "sphere" => {
            want(1)?;
            Profile::geodesic_sphere(vals[0])
        }
        _ => Err(Error::Parse(format!("unknown profile '{text}'"))),
    }
}

/// `l=3 a=1 b=1` in any order.
pub fn clifford_triple(items: &[String]) -> Result<(usize, usize, usize)> {
    let (mut l, mut a, mut b) = (None, None, None);
    for item in items {
        let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse(format!("'{item}' should be key=value")))?;
        let v: usize = value.parse().map_err(|_| Error::Parse(format!("'{value}' is not a non-negative integer")))?;
        match key {
            "l" => l = Some(v),
            "a" => a = Some(v),
            "b" => b = Some(v),
            _ => return Err(Error::Parse(format!("unknown key '{key}' (expected l, a, b)"))),
        }
    }
    match (l, a, b) {
        (Some(l), Some(a), b) => Ok((l, a, b.unwrap_or(0))),
        _ => Err(Error::Parse("--clifford needs l=… and a=…".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names() {
        assert_eq!(FamilySpec::parse("h3_11"), Some(FamilySpec { l: 3, a: 1, b: 1, solvable: false }));
        assert_eq!(FamilySpec::parse("sn3_22"), Some(FamilySpec { l: 3, a: 2, b: 2, solvable: true }));
        assert_eq!(FamilySpec::parse("h7_10_2"), Some(FamilySpec { l: 7, a: 10, b: 2, solvable: false }));
        assert_eq!(FamilySpec::parse("h3_1"), None);
        assert_eq!(FamilySpec::parse("x3_11"), None);
    }

    #[test]
    fn profiles() {
        assert!(profile("euclid:2").is_ok());
        assert!(profile("poly:1.5,-0.7").is_ok());
        assert!(profile("sphere:1").unwrap().is_solvable());
        assert!(profile("sphere:-1").is_err());
        assert!(profile("sqrt:2").is_err());
        assert!(profile("cone:1").is_err());
    }

    #[test]
    fn clifford_keys() {
        let items: Vec<String> = ["b=1", "l=3", "a=2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(clifford_triple(&items).unwrap(), (3, 2, 1));
        assert!(clifford_triple(&["l=3".to_string()]).is_err());
    }
}
