//! Exhaustive enumeration of orthogonal-array frequency vectors with
//! orbit-based isomorph rejection.
//!
//! Entries of `f` are assigned in ascending point order, and each entry tries
//! its smallest value first, so solutions come out in lexicographic order. A
//! partial assignment is abandoned when some row of `M f = J` can no longer be
//! met. The test uses the row's partial sum, the remaining capacity `N - Σ f`,
//! and the smallest and largest coefficient left in the row's suffix.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::{check_factors, FrequencyVector};
use crate::group::{group_order, vector_orbit};
use crate::model::{build_j, build_m, counts_feasible, gram_projection};
use crate::perm::Permutation;

pub const ENUM_MAX_K: usize = 5;
pub const ENUM_MAX_N: u64 = 32;
pub const DEFAULT_ENUM_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone)]
pub struct EnumResult {
    pub n: u64,
    pub k: usize,
    pub t: usize,
    pub total_solutions: u64,
    /// Lexicographically least member of each orbit, in ascending order.
    pub orbit_representatives: Vec<FrequencyVector>,
    /// Orbit size of each representative.
    pub orbit_sizes: Vec<u64>,
    pub group_order_used: BigUint,
    /// Every solution, in lexicographic order.
    pub solutions: Vec<Vec<i64>>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumSummary {
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    pub t: usize,
    pub solutions: u64,
    pub orbits: usize,
}

impl EnumResult {
    pub fn summary(&self) -> EnumSummary {
        EnumSummary {
            n: self.n,
            k: self.k,
            t: self.t,
            solutions: self.total_solutions,
            orbits: self.orbit_representatives.len(),
        }
    }

    /// Sum of orbit sizes; equals `total_solutions` for a consistent result.
    pub fn reconstructed_total(&self) -> u64 {
        self.orbit_sizes.iter().sum()
    }
}

fn check_inputs(n: u64, k: usize, t: usize) -> Result<()> {
    check_factors(k)?;
    if k > ENUM_MAX_K {
        return Err(Error::domain(format!("enumeration supports k <= {ENUM_MAX_K}, got {k}")));
    }
    if t == 0 || t > k {
        return Err(Error::domain(format!("strength must satisfy 1 <= t <= k, got t={t}")));
    }
    if n == 0 || n > ENUM_MAX_N {
        return Err(Error::domain(format!("enumeration supports 1 <= N <= {ENUM_MAX_N}, got {n}")));
    }
    if !n.is_multiple_of(1 << t) {
        return Err(Error::domain(format!("N={n} is not a multiple of 2^t = {}", 1u64 << t)));
    }
    Ok(())
}

struct Dfs {
    rows: Vec<Vec<i64>>,
    /// `suffix_min[r][p]`, `suffix_max[r][p]`: extreme coefficients of row `r` over points `p..`.
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    target: Vec<i64>,
    f: Vec<i64>,
    sums: Vec<i64>,
    solutions: Vec<Vec<i64>>,
    nodes: u64,
    budget: u64,
}

impl Dfs {
    fn feasible_suffix(&self, pos: usize, remaining: i64) -> bool {
        (1..self.rows.len()).all(|r| {
            let need = self.target[r] - self.sums[r];
            remaining * self.suffix_min[r][pos] <= need && need <= remaining * self.suffix_max[r][pos]
        })
    }

    fn run(&mut self, pos: usize, remaining: i64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::resource(format!(
                "enumeration node budget {} exhausted after {} solutions",
                self.budget,
                self.solutions.len()
            )));
        }
        let last = self.f.len() - 1;
        if pos == last {
            let ok = (1..self.rows.len()).all(|r| self.sums[r] + self.rows[r][last] * remaining == self.target[r]);
            if ok {
                self.f[last] = remaining;
                self.solutions.push(self.f.clone());
                self.f[last] = 0;
            }
            return Ok(());
        }
        for v in 0..=remaining {
            self.f[pos] = v;
            for r in 1..self.rows.len() {
                self.sums[r] += self.rows[r][pos] * v;
            }
            if self.feasible_suffix(pos + 1, remaining - v) {
                self.run(pos + 1, remaining - v)?;
            }
            for r in 1..self.rows.len() {
                self.sums[r] -= self.rows[r][pos] * v;
            }
        }
        self.f[pos] = 0;
        Ok(())
    }
}

/// Checks that every generator has degree `2^k` and preserves `Row(M)`.
fn check_group(gens: &[Permutation], k: usize, t: usize) -> Result<()> {
    let gram = gram_projection(k, t)?;
    for g in gens {
        if !gram.preserved_by(g)? {
            return Err(Error::domain(format!(
                "generator {g} does not preserve the row space for k={k}, t={t}"
            )));
        }
    }
    Ok(())
}

/// Every nonnegative integral `f` with `M f = J`, in lexicographic order.
pub fn enumerate_solutions(n: u64, k: usize, t: usize, budget: u64) -> Result<(Vec<Vec<i64>>, u64)> {
    check_inputs(n, k, t)?;
    let m = build_m(k, t)?;
    let rows: Vec<Vec<i64>> = m.rows().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    let len = 1usize << k;
    let suffix = |pick: fn(i64, i64) -> i64, init: i64| -> Vec<Vec<i64>> {
        rows.iter()
            .map(|row| {
                let mut out = vec![init; len + 1];
                for p in (0..len).rev() {
                    out[p] = pick(out[p + 1], row[p]);
                }
                out
            })
            .collect()
    };
    let (suffix_min, suffix_max) = (suffix(i64::min, i64::MAX), suffix(i64::max, i64::MIN));
    let n_rows = rows.len();
    let mut dfs = Dfs {
        target: build_j(n, k, t)?.values,
        rows,
        suffix_min,
        suffix_max,
        f: vec![0; len],
        sums: vec![0; n_rows],
        solutions: Vec::new(),
        nodes: 0,
        budget,
    };
    dfs.run(0, n as i64)?;
    Ok((dfs.solutions, dfs.nodes))
}

pub fn enumerate_oa(n: u64, k: usize, t: usize, group: Option<&[Permutation]>) -> Result<EnumResult> {
    enumerate_oa_with_budget(n, k, t, group, DEFAULT_ENUM_BUDGET)
}

pub fn enumerate_oa_with_budget(
    n: u64,
    k: usize,
    t: usize,
    group: Option<&[Permutation]>,
    budget: u64,
) -> Result<EnumResult> {
    check_inputs(n, k, t)?;
    let gens = group.unwrap_or(&[]);
    check_group(gens, k, t)?;
    let (solutions, nodes) = enumerate_solutions(n, k, t, budget)?;

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for s in &solutions {
        if seen.contains(s) {
            continue;
        }
        let orbit = vector_orbit(s, gens, solutions.len().max(1))?;
        if orbit.representative() != s.as_slice() {
            return Err(Error::Internal(format!(
                "orbit of {s:?} has an unvisited smaller member"
            )));
        }
        sizes.push(orbit.len() as u64);
        reps.push(FrequencyVector::from_integers(k, s)?);
        seen.extend(orbit.members);
    }
    Ok(EnumResult {
        n,
        k,
        t,
        total_solutions: solutions.len() as u64,
        orbit_representatives: reps,
        orbit_sizes: sizes,
        group_order_used: group_order(gens)?,
        solutions,
        nodes,
    })
}

/// Whether every generator maps every representative to a feasible vector that
/// is among the result's solutions.
pub fn verify_group_action(result: &EnumResult, gens: &[Permutation]) -> Result<bool> {
    let m = build_m(result.k, result.t)?;
    let rhs = build_j(result.n, result.k, result.t)?;
    let solutions: HashSet<&[i64]> = result.solutions.iter().map(Vec::as_slice).collect();
    for f in &result.orbit_representatives {
        let Some(counts) = f.to_integers() else {
            return Ok(false);
        };
        if !counts_feasible(&m, &rhs, &counts) {
            return Ok(false);
        }
        for g in gens {
            if g.degree() != counts.len() {
                return Err(Error::DegreeMismatch {
                    expected: counts.len(),
                    found: g.degree(),
                });
            }
            let image = g.act_on(&counts);
            if !counts_feasible(&m, &rhs, &image) || !solutions.contains(image.as_slice()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgen::{strength2_generators, wreath_generators};

    #[test]
    fn half_fractions_form_one_orbit() {
        let gens = strength2_generators(3).unwrap().perms;
        let r = enumerate_oa(4, 3, 2, Some(&gens)).unwrap();
        assert_eq!(r.total_solutions, 2);
        assert_eq!(r.orbit_representatives.len(), 1);
        assert_eq!(r.orbit_sizes, vec![2]);
        assert_eq!(r.solutions, vec![vec![0, 1, 1, 0, 1, 0, 0, 1], vec![1, 0, 0, 1, 0, 1, 1, 0]]);
        assert!(verify_group_action(&r, &gens).unwrap());
    }

    #[test]
    fn without_group_every_solution_is_a_representative() {
        let r = enumerate_oa(2, 2, 1, None).unwrap();
        assert_eq!(r.total_solutions, 2);
        assert_eq!(r.orbit_representatives.len(), 2);
        assert_eq!(r.group_order_used, BigUint::from(1u32));
        let gens = wreath_generators(2).unwrap().perms;
        let r = enumerate_oa(2, 2, 1, Some(&gens)).unwrap();
        assert_eq!(r.orbit_representatives.len(), 1);
        assert_eq!(r.summary().orbits, 1);
    }

    #[test]
    fn corrupted_representative_fails_verification() {
        let mut r = enumerate_oa(4, 3, 2, None).unwrap();
        assert!(verify_group_action(&r, &[]).unwrap());
        let mut c = r.orbit_representatives[0].to_integers().unwrap();
        let from = c.iter().position(|&x| x > 0).unwrap();
        c[from] -= 1;
        c[(from + 1) % 8] += 1;
        r.orbit_representatives[0] = FrequencyVector::from_integers(3, &c).unwrap();
        assert!(!verify_group_action(&r, &[]).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(enumerate_oa(6, 3, 2, None).is_err());
        assert!(enumerate_oa(64, 3, 2, None).is_err());
        assert!(enumerate_oa(8, 6, 1, None).is_err());
        assert!(enumerate_oa(8, 3, 0, None).is_err());
        let swap = crate::symgen::factor_swap_perm(1, 2, 3).unwrap();
        assert!(enumerate_oa(8, 3, 1, Some(&[crate::symgen::rho_perm(1, 3).unwrap()])).is_err());
        assert!(enumerate_oa(8, 3, 3, Some(&[swap])).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_oa_with_budget(16, 4, 1, None, 10),
            Err(Error::Resource(_))
        ));
    }
}
