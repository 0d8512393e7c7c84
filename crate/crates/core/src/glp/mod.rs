//! The LP-relaxation permutation symmetry group computed from first principles.
//!
//! A coordinate permutation maps LP-feasible points to LP-feasible points exactly
//! when it preserves `Row(M)`, which for permutation matrices is the same as
//! preserving the Gram matrix `Q = Mᵀ M` entrywise. Both searches here look for
//! permutations of that kind: [`brute_force_glp`] by listing `S_{2^k}` outright
//! (feasible for `k <= 3`), [`refine_automorphisms`] by individualization and
//! refinement on the weighted graph `Q`.

mod forms;
mod halfcombo;
mod refine;

use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::model::gram_projection;
use crate::perm::Permutation;

pub use forms::{verify_basis_forms, BasisImage, FormReport};
pub use halfcombo::{
    canonical_case_name, classify_half_combinations, evaluate_combination, parse_case_name,
    HalfCombo, HalfComboCase, HalfComboReport,
};
pub use refine::{refine_automorphisms, refine_automorphisms_with_budget, DEFAULT_NODE_BUDGET};

/// Largest `k` for which [`brute_force_glp`] will enumerate `S_{2^k}`.
pub const BRUTE_FORCE_MAX_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Brute,
    Refine,
}

impl FromStr for SearchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(SearchMethod::Brute),
            "refine" => Ok(SearchMethod::Refine),
            _ => Err(Error::domain(format!("unknown search method `{s}`"))),
        }
    }
}

impl std::fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMethod::Brute => "brute",
            SearchMethod::Refine => "refine",
        })
    }
}

#[derive(Debug, Clone)]
pub struct AutSearchResult {
    pub k: usize,
    pub t: usize,
    pub order: BigUint,
    pub generators: Vec<Permutation>,
    pub method: SearchMethod,
    /// Permutations tested (brute force) or search-tree nodes visited (refinement).
    pub node_count: u64,
}

impl AutSearchResult {
    pub fn group(&self) -> PermGroup {
        PermGroup::new(1 << self.k, self.generators.clone()).expect("generators share degree 2^k")
    }
}

/// Visits every permutation of `0..n` in lexicographic order.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut p: Vec<u32> = (0..n as u32).collect();
    loop {
        visit(&p);
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// All permutations of `S_{2^k}` that preserve `Row(M)`, in lexicographic order.
pub fn brute_force_elements(k: usize, t: usize) -> Result<Vec<Permutation>> {
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::resource(format!(
            "brute force over S_{{2^{k}}} is out of reach; use the refine method for k > {BRUTE_FORCE_MAX_K}"
        )));
    }
    let gram = gram_projection(k, t)?;
    let n = 1 << k;
    let mut kept = Vec::new();
    for_each_permutation(n, |img| {
        let ok = (0..n).all(|i| {
            let pi = img[i] as usize;
            (i + 1..n).all(|j| gram.entry(pi, img[j] as usize) == gram.entry(i, j))
        });
        if ok {
            kept.push(Permutation::from_images(img.to_vec()).expect("valid permutation"));
        }
    });
    Ok(kept)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn brute_force_glp(k: usize, t: usize) -> Result<AutSearchResult> {
    let elements = brute_force_elements(k, t)?;
    // keep an element as a generator only if the group so far misses it
    let n = 1 << k;
    let mut generators = Vec::new();
    let mut group = PermGroup::trivial(n);
    for g in &elements {
        if !group.contains(g)? {
            generators.push(g.clone());
            group = PermGroup::new(n, generators.clone())?;
        }
    }
    let order = group.order();
    debug_assert_eq!(order, BigUint::from(elements.len()));
    Ok(AutSearchResult {
        k,
        t,
        order,
        generators,
        method: SearchMethod::Brute,
        node_count: factorial(n),
    })
}

pub fn search_glp(k: usize, t: usize, method: SearchMethod, budget: u64) -> Result<AutSearchResult> {
    match method {
        SearchMethod::Brute => brute_force_glp(k, t),
        SearchMethod::Refine => refine_automorphisms_with_budget(k, t, budget),
    }
}
