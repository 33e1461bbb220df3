//! Structured-text serialization of endomorphism spaces.
//!
//! ```text
//! endo_space
//! k = 2
//! l = 1
//! anticommutator = 0
//! labels = clifford
//! basis 0
//! 0 1
//! -1 0
//! ```
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! parsing a written file reproduces every entry exactly.

use super::{build_endo_space, EndoSpace};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use std::fmt::Write as _;

pub fn write_endo_space(space: &EndoSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "endo_space");
    let _ = writeln!(out, "k = {}", space.k());
    let _ = writeln!(out, "l = {}", space.l());
    if let Some(a) = space.anticommutator_index() {
        let _ = writeln!(out, "anticommutator = {a}");
    }
    if !space.labels().is_empty() {
        let _ = writeln!(out, "labels = {}", space.labels().join(","));
    }
    for alpha in 0..space.l() {
        let _ = writeln!(out, "basis {alpha}");
        let m = space.mat(alpha);
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|c| format!("{}", m[(r, c)] + 0.0)).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|_| Error::Parse(format!("{key}: expected a non-negative integer, got '{value}'")))
}

pub fn parse_endo_space(text: &str) -> Result<EndoSpace> {
    let mut lines = text.lines().map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#'));
    match lines.next() {
        Some("endo_space") => {}
        other => return Err(Error::Parse(format!("expected header 'endo_space', got {other:?}"))),
    }
    let mut k = None;
    let mut l = None;
    let mut anticommutator = None;
    let mut labels: Vec<String> = Vec::new();
    let mut mats: Vec<Mat> = Vec::new();
    let mut pending: Option<Vec<f64>> = None;
    let flush = |pending: &mut Option<Vec<f64>>, mats: &mut Vec<Mat>, k: Option<usize>| -> Result<()> {
        if let Some(vals) = pending.take() {
            let k = k.ok_or_else(|| Error::Parse("basis before k".into()))?;
            if vals.len() != k * k {
                return Err(Error::Parse(format!("basis {} has {} entries, expected {}", mats.len(), vals.len(), k * k)));
            }
            mats.push(Mat::from_row_slice(k, k, &vals));
        }
        Ok(())
    };
    for line in lines {
        if let Some(rest) = line.strip_prefix("basis") {
            flush(&mut pending, &mut mats, k)?;
            let idx = parse_usize("basis", rest)?;
            if idx != mats.len() {
                return Err(Error::Parse(format!("basis index {idx} out of order")));
            }
            pending = Some(Vec::new());
        } else if let Some((key, value)) = line.split_once('=') {
            match key.trim() {
                "k" => k = Some(parse_usize("k", value)?),
                "l" => l = Some(parse_usize("l", value)?),
                "anticommutator" => anticommutator = Some(parse_usize("anticommutator", value)?),
                "labels" => labels = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        } else if let Some(buf) = pending.as_mut() {
            for tok in line.split_whitespace() {
                buf.push(tok.parse().map_err(|_| Error::Parse(format!("bad number '{tok}'")))?);
            }
        } else {
            return Err(Error::Parse(format!("unexpected line '{line}'")));
        }
    }
    flush(&mut pending, &mut mats, k)?;
    let l = l.ok_or_else(|| Error::Parse("missing l".into()))?;
    if mats.len() != l {
        return Err(Error::Parse(format!("declared l = {l} but found {} basis matrices", mats.len())));
    }
    let mut space = build_endo_space(&mats)?;
    if let Some(a) = anticommutator {
        if a >= l {
            return Err(Error::IndexOutOfRange(a));
        }
        space = space.with_anticommutator(a);
    }
    for lab in labels {
        space = space.with_label(&lab);
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endospace::clifford_space;

    #[test]
    fn integer_space_round_trips_exactly() {
        let s = clifford_space(3, 1, 1).unwrap();
        let text = write_endo_space(&s);
        let back = parse_endo_space(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn non_skew_file_is_rejected() {
        let text = "endo_space\nk = 2\nl = 1\nbasis 0\n1 0\n0 1\n";
        assert_eq!(parse_endo_space(text).unwrap_err(), Error::NonSkew(0));
    }

    #[test]
    fn malformed_numbers_are_parse_errors() {
        let text = "endo_space\nk = 2\nl = 1\nbasis 0\n0 x\n-1 0\n";
        assert!(matches!(parse_endo_space(text), Err(Error::Parse(_))));
    }
}
