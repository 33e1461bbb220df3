//! Spectra of symmetric operators: clustered reports, multiset and set
//! comparison, intertwining residuals, and Z-Fourier reduced operators.

pub mod fourier;

pub use fourier::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat};
use std::fmt::Write as _;

/// Relative gap that separates two eigenvalue clusters.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Clusters wider than this make a report ambiguous.
pub const AMBIGUITY_DIAMETER: f64 = 1e-8;
/// Symmetry tolerance accepted by `eigs_sym`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Ascending eigenvalues grouped into clusters of numerically equal values.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub label: String,
    /// All eigenvalues, ascending, with repetition.
    pub raw: Vec<f64>,
    /// Cluster means, ascending.
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub cluster_diameters: Vec<f64>,
    pub cluster_tolerance: f64,
}

impl SpectrumReport {
    /// Clusters sorted-or-unsorted eigenvalues: consecutive values closer
    /// than `tol · max(1, |λ|)` share a cluster.
    pub fn from_eigenvalues(label: &str, mut eigenvalues: Vec<f64>, tol: f64) -> Self {
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        let mut values = Vec::new();
        let mut multiplicities = Vec::new();
        let mut cluster_diameters = Vec::new();
        let mut start = 0;
        for i in 1..=eigenvalues.len() {
            let split = i == eigenvalues.len() || {
                let (a, b) = (eigenvalues[i - 1], eigenvalues[i]);
                b - a > tol * a.abs().max(b.abs()).max(1.0)
            };
            if split {
                let chunk = &eigenvalues[start..i];
                values.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
                multiplicities.push(chunk.len());
                cluster_diameters.push(chunk[chunk.len() - 1] - chunk[0]);
                start = i;
            }
        }
        Self { label: label.to_string(), raw: eigenvalues, values, multiplicities, cluster_diameters, cluster_tolerance: tol }
    }

    pub fn dim(&self) -> usize {
        self.raw.len()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.cluster_diameters.iter().any(|&d| d >= AMBIGUITY_DIAMETER)
    }

    pub fn max_cluster_diameter(&self) -> f64 {
        self.cluster_diameters.iter().copied().fold(0.0, f64::max)
    }

    /// Structured text: a header followed by `value multiplicity
    /// cluster_diameter` rows in ascending order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spectrum");
        let _ = writeln!(out, "label = {}", self.label);
        let _ = writeln!(out, "dimension = {}", self.dim());
        let _ = writeln!(out, "cluster_tolerance = {:e}", self.cluster_tolerance);
        let _ = writeln!(out, "ambiguous = {}", self.is_ambiguous());
        let _ = writeln!(out, "# value multiplicity cluster_diameter");
        for ((v, m), d) in self.values.iter().zip(&self.multiplicities).zip(&self.cluster_diameters) {
            let _ = writeln!(out, "{v:.15e} {m} {d:.3e}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,multiplicity,cluster_diameter\n");
        for ((v, m), d) in self.values.iter().zip(&self.multiplicities).zip(&self.cluster_diameters) {
            let _ = writeln!(out, "{v:.15e},{m},{d:.3e}");
        }
        out
    }
}

/// Full spectrum of a real symmetric matrix.
pub fn eigs_sym(m: &Mat, label: &str) -> Result<SpectrumReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows()));
    }
    let r = linalg::sym_residual(m);
    if r > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(r));
    }
    let sym = (m + m.transpose()) * 0.5;
    Ok(SpectrumReport::from_eigenvalues(label, linalg::eigh(&sym).0, CLUSTER_TOL))
}

/// Full spectrum of a complex Hermitian matrix.
pub fn eigs_herm(m: &CMat, label: &str) -> Result<SpectrumReport> {
    let r = linalg::hermitian_residual(m);
    if r > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(r));
    }
    Ok(SpectrumReport::from_eigenvalues(label, linalg::eigvalsh_hermitian(m), CLUSTER_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Multiset,
    Set,
}

/// Containment of the clustered value sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Equal,
    /// Every value of the first spectrum occurs in the second (subtonal).
    FirstInSecond,
    SecondInFirst,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    pub mode: CompareMode,
    /// Multiset: max sorted deviation (∞ on dimension mismatch).
    /// Set: Hausdorff distance of the value sets.
    pub deviation: f64,
    pub containment: Containment,
    pub pass: bool,
}

fn one_sided(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn compare_spectra(r1: &SpectrumReport, r2: &SpectrumReport, mode: CompareMode, tol: f64) -> SpectrumComparison {
    let d12 = one_sided(&r1.values, &r2.values);
    let d21 = one_sided(&r2.values, &r1.values);
    let containment = match (d12 <= tol, d21 <= tol) {
        (true, true) => Containment::Equal,
        (true, false) => Containment::FirstInSecond,
        (false, true) => Containment::SecondInFirst,
        (false, false) => Containment::Neither,
    };
    let deviation = match mode {
        CompareMode::Multiset => {
            if r1.raw.len() != r2.raw.len() {
                f64::INFINITY
            } else {
                r1.raw.iter().zip(&r2.raw).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            }
        }
        CompareMode::Set => d12.max(d21),
    };
    SpectrumComparison { mode, deviation, containment, pass: deviation <= tol }
}

/// ‖K P − P′ K‖_F / (‖K‖₂ (‖P‖_F + ‖P′‖_F)). The operator norm of K keeps
/// the residual independent of the dimension for orthogonal K.
pub fn conjugation_residual(p: &Mat, p_prime: &Mat, k: &Mat) -> Result<f64> {
    if k.ncols() != p.nrows() || p.nrows() != p.ncols() || k.nrows() != p_prime.nrows() || p_prime.nrows() != p_prime.ncols()
    {
        return Err(Error::ShapeMismatch(format!(
            "P {}×{}, P′ {}×{}, K {}×{}",
            p.nrows(),
            p.ncols(),
            p_prime.nrows(),
            p_prime.ncols(),
            k.nrows(),
            k.ncols()
        )));
    }
    let num = linalg::fro(&(k * p - p_prime * k));
    let den = linalg::spectral_norm(k) * (linalg::fro(p) + linalg::fro(p_prime));
    Ok(if den == 0.0 { num } else { num / den })
}

/// Complex version of `conjugation_residual`.
pub fn conjugation_residual_c(p: &CMat, p_prime: &CMat, k: &CMat) -> Result<f64> {
    if k.ncols() != p.nrows() || p.nrows() != p.ncols() || k.nrows() != p_prime.nrows() || p_prime.nrows() != p_prime.ncols()
    {
        return Err(Error::ShapeMismatch(format!(
            "P {}×{}, P′ {}×{}, K {}×{}",
            p.nrows(),
            p.ncols(),
            p_prime.nrows(),
            p_prime.ncols(),
            k.nrows(),
            k.ncols()
        )));
    }
    let num = linalg::cfro(&(k * p - p_prime * k));
    let den = linalg::cspectral_norm(k) * (linalg::cfro(p) + linalg::cfro(p_prime));
    Ok(if den == 0.0 { num } else { num / den })
}
