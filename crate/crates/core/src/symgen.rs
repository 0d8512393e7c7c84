//! Explicit point permutations realizing the known symmetries of the model.
//!
//! Each generator is described by its effect on the main-effect columns
//! (the pullback `x ∘ p`). Because levels `±1` multiply exactly when their bits
//! XOR, a column map `x_j ↦ x_i ⊙ x_j` is the point map that XORs bit `i` into
//! bit `j`. That is how [`rho_perm`] is built.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::check_factors;
use crate::perm::Permutation;

fn check_factor(i: usize, k: usize) -> Result<()> {
    check_factors(k)?;
    if i == 0 || i > k {
        return Err(Error::domain(format!("factor {i} outside 1..={k}")));
    }
    Ok(())
}

/// Negates main effect `x_i`: toggles bit `i - 1` of every point.
pub fn sign_flip_perm(i: usize, k: usize) -> Result<Permutation> {
    check_factor(i, k)?;
    Permutation::from_fn(1 << k, |p| p ^ 1 << (i - 1))
}

/// Exchanges main effects `x_i` and `x_j`: swaps bits `i - 1` and `j - 1`.
pub fn factor_swap_perm(i: usize, j: usize, k: usize) -> Result<Permutation> {
    check_factor(i, k)?;
    check_factor(j, k)?;
    if i >= j {
        return Err(Error::domain(format!("factor swap needs i < j, got ({i}, {j})")));
    }
    let (a, b) = (i - 1, j - 1);
    Permutation::from_fn(1 << k, |p| {
        let (ba, bb) = (p >> a & 1, p >> b & 1);
        if ba == bb {
            p
        } else {
            p ^ (1 << a | 1 << b)
        }
    })
}

/// Fixes `x_i` and sends every other `x_j` to `x_{i,j}`: XORs bit `i - 1` into all
/// other bits.
pub fn rho_perm(i: usize, k: usize) -> Result<Permutation> {
    check_factor(i, k)?;
    let bit = i - 1;
    let rest = ((1usize << k) - 1) & !(1 << bit);
    Permutation::from_fn(1 << k, |p| if p >> bit & 1 == 1 { p ^ rest } else { p })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Signed factor permutations, `S_2 wr S_k`.
    Wreath,
    /// Signed factor permutations plus `ρ_1`, `S_2^k ⋊ S_{k+1}`.
    Strength2,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wreath" => Ok(GeneratorKind::Wreath),
            "strength2" => Ok(GeneratorKind::Strength2),
            _ => Err(Error::domain(format!("unknown generator kind `{s}`"))),
        }
    }
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GeneratorKind::Wreath => "wreath",
            GeneratorKind::Strength2 => "strength2",
        })
    }
}

/// A generating set together with the order its group is expected to have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub k: usize,
    pub kind: GeneratorKind,
    pub perms: Vec<Permutation>,
    pub claimed_order: BigUint,
}

impl GeneratorSet {
    pub fn degree(&self) -> usize {
        1 << self.k
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// `sign_flip(1)` and the adjacent swaps `(i, i+1)`; claimed order `2^k k!`.
pub fn wreath_generators(k: usize) -> Result<GeneratorSet> {
    check_factors(k)?;
    let mut perms = vec![sign_flip_perm(1, k)?];
    for i in 1..k {
        perms.push(factor_swap_perm(i, i + 1, k)?);
    }
    Ok(GeneratorSet {
        k,
        kind: GeneratorKind::Wreath,
        perms,
        claimed_order: (BigUint::from(1u32) << k) * factorial(k),
    })
}

/// Wreath generators plus `ρ_1`; claimed order `2^k (k+1)!`.
pub fn strength2_generators(k: usize) -> Result<GeneratorSet> {
    if k < 2 {
        return Err(Error::domain(format!("strength-2 generators need k >= 2, got {k}")));
    }
    let mut set = wreath_generators(k)?;
    set.perms.push(rho_perm(1, k)?);
    set.kind = GeneratorKind::Strength2;
    set.claimed_order = (BigUint::from(1u32) << k) * factorial(k + 1);
    Ok(set)
}

pub fn generators(kind: GeneratorKind, k: usize) -> Result<GeneratorSet> {
    match kind {
        GeneratorKind::Wreath => wreath_generators(k),
        GeneratorKind::Strength2 => strength2_generators(k),
    }
}
