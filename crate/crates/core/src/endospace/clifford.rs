//! Irreducible Clifford modules (Heisenberg-type endomorphism spaces).

use super::{build_endo_space, pauli_blocks, sigma_ab_deform, EndoSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

type Quat = [f64; 4];

fn qmul(p: Quat, q: Quat) -> Quat {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

fn qconj(q: Quat) -> Quat {
    [q[0], -q[1], -q[2], -q[3]]
}

fn unit_quat(i: usize) -> Quat {
    let mut q = [0.0; 4];
    q[i] = 1.0;
    q
}

/// Matrix of left multiplication by the imaginary unit `unit` ∈ {1,2,3}
/// (𝐢, 𝐣, 𝐤) on ℍ = ℝ⁴ with basis (1, 𝐢, 𝐣, 𝐤).
pub fn quaternion_left(unit: usize) -> Mat {
    assert!((1..=3).contains(&unit));
    let u = unit_quat(unit);
    let mut m = Mat::zeros(4, 4);
    for c in 0..4 {
        let img = qmul(u, unit_quat(c));
        for r in 0..4 {
            m[(r, c)] = img[r];
        }
    }
    m
}

/// Right product R_Z by an imaginary Cayley number Z ∈ ℝ⁷ on 𝐂𝐚 = ℍ², in
/// the form R_Z(v₁,v₂) = (v₁Φ(Z), −v₂Φ(Z)) + (Ψ(Z)v₂, −Ψ̄(Z)v₁) with
/// Φ(Z) = Z₁𝐢 + Z₂𝐣 + Z₃𝐤 and Ψ(Z) = Z₄ + Z₅𝐢 + Z₆𝐣 + Z₇𝐤.
pub fn cayley_right_product(z: &[f64; 7]) -> Mat {
    let phi = [0.0, z[0], z[1], z[2]];
    let psi = [z[3], z[4], z[5], z[6]];
    let mut m = Mat::zeros(8, 8);
    for c in 0..8 {
        let mut v1 = [0.0; 4];
        let mut v2 = [0.0; 4];
        if c < 4 {
            v1[c] = 1.0;
        } else {
            v2[c - 4] = 1.0;
        }
        let a = qmul(v1, phi);
        let b = qmul(v2, phi);
        let p2 = qmul(psi, v2);
        let p1 = qmul(qconj(psi), v1);
        for r in 0..4 {
            m[(r, c)] = a[r] + p2[r];
            m[(r + 4, c)] = -b[r] - p1[r];
        }
    }
    m
}

/// n_l: dimension of an irreducible module for l anticommuting complex
/// structures, periodic with factor 16 under l ↦ l + 8.
pub fn clifford_dimension(l: usize) -> Option<usize> {
    if l == 0 {
        return None;
    }
    let p = (l / 8) as u32;
    let exp = match l % 8 {
        0 => 0,
        1 => 1,
        2 | 3 => 2,
        _ => 3,
    };
    Some(1usize << (4 * p + exp))
}

/// Adds one generator: J_α ↦ J_α ⊗ 𝐣, plus Id ⊗ 𝐢.
fn double_module(gens: &[Mat], n: usize) -> Vec<Mat> {
    let [_, i, j, _] = pauli_blocks();
    let mut out: Vec<Mat> = gens.iter().map(|g| linalg::kron(g, &j)).collect();
    out.push(linalg::kron(&Mat::identity(n, n), &i));
    out
}

fn cayley_generators(count: usize) -> Vec<Mat> {
    (0..count)
        .map(|a| {
            let mut z = [0.0; 7];
            z[a] = 1.0;
            cayley_right_product(&z)
        })
        .collect()
}

/// Generators of an irreducible module for l anticommuting unit complex
/// structures. Native constructions for l ≤ 7 (complex, quaternionic and
/// Cayley products); for l ≥ 8 the module for l − 8 is tensored with the
/// 16-dimensional module of eight generators through its volume element.
pub fn irreducible_clifford(l: usize) -> Result<Vec<Mat>> {
    let gens = match l {
        0 => return Err(Error::UnsupportedL(0)),
        1 => vec![pauli_blocks()[1].clone()],
        2 => vec![quaternion_left(1), quaternion_left(2)],
        3 => vec![quaternion_left(1), quaternion_left(2), quaternion_left(3)],
        4..=7 => cayley_generators(l),
        _ => {
            let eight = double_module(&cayley_generators(7), 8);
            let mut omega = Mat::identity(16, 16);
            for g in &eight {
                omega = omega * g;
            }
            let id16 = Mat::identity(16, 16);
            if linalg::sym_residual(&omega) > 1e-12 || linalg::max_abs(&(&omega * &omega - &id16)) > 1e-12 {
                return Err(Error::UnsupportedL(l));
            }
            let (base, n) = if l == 8 {
                (Vec::new(), 1)
            } else {
                let b = irreducible_clifford(l - 8)?;
                let n = b[0].nrows();
                (b, n)
            };
            let mut out: Vec<Mat> = base.iter().map(|g| linalg::kron(g, &omega)).collect();
            out.extend(eight.iter().map(|k| linalg::kron(&Mat::identity(n, n), k)));
            out
        }
    };
    let n = gens[0].nrows();
    if Some(n) != clifford_dimension(l) {
        return Err(Error::UnsupportedL(l));
    }
    Ok(gens)
}

/// The Heisenberg-type space J_l^{(a,b)} on ℝ^{n_l(a+b)}: the irreducible
/// module replicated a + b times with the first generator (the
/// distinguished anticommutator) sign-flipped on the last b copies.
pub fn clifford_space(l: usize, a: usize, b: usize) -> Result<EndoSpace> {
    if a + b == 0 {
        return Err(Error::InvalidMultiplicity);
    }
    let gens = irreducible_clifford(l)?;
    let base = build_endo_space(&gens)?.with_anticommutator(0).with_label("clifford");
    let space = sigma_ab_deform(&base, 0, a, b)?;
    if !space.is_heisenberg_type() {
        return Err(Error::UnsupportedL(l));
    }
    Ok(space)
}
