//! The reproduction suite behind `oasym check`: each check recomputes one
//! published or derived fact and reports whether it held within its time limit.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerate::{enumerate_oa, verify_group_action};
use crate::error::Result;
use crate::factorial::FrequencyVector;
use crate::glp::{brute_force_glp, classify_half_combinations, refine_automorphisms, verify_basis_forms};
use crate::group::PermGroup;
use crate::model::{build_m, gram_projection, is_feasible};
use crate::perm::Permutation;
use crate::symgen::{factor_swap_perm, rho_perm, strength2_generators, wreath_generators};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn timed(
    id: usize,
    name: &'static str,
    limit: Duration,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CheckOutcome {
    let start = Instant::now();
    let (ok, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let within = elapsed <= limit;
    let detail = if within {
        detail
    } else {
        format!("{detail}; took {elapsed:?}, limit {limit:?}")
    };
    CheckOutcome {
        id,
        name,
        passed: ok && within,
        detail,
        elapsed_ms: elapsed.as_millis(),
    }
}

fn glp_generators(k: usize, t: usize) -> Result<Vec<Permutation>> {
    Ok(if k <= 3 {
        brute_force_glp(k, t)?.generators
    } else {
        refine_automorphisms(k, t)?.generators
    })
}

const ENUM_TRIPLES: [(u64, usize, usize); 4] = [(4, 3, 2), (8, 3, 2), (8, 4, 3), (8, 4, 2)];

pub fn wreath_orders() -> CheckOutcome {
    timed(1, "signed factor permutations have order 2^k k!", Duration::from_secs(6), || {
        let mut found = Vec::new();
        let mut ok = true;
        for k in 1..=6u64 {
            let start = Instant::now();
            let order = crate::group::group_order(&wreath_generators(k as usize)?.perms)?;
            ok &= order == (big(1) << k) * factorial(k) && start.elapsed() < Duration::from_secs(1);
            found.push(order.to_string());
        }
        Ok((ok, format!("k=1..6: {}", found.join(", "))))
    })
}

pub fn strength2_orders() -> CheckOutcome {
    timed(2, "strength-2 generators have order 2^k (k+1)!", Duration::from_secs(5), || {
        let mut found = Vec::new();
        let mut ok = true;
        for k in 4..=6u64 {
            let order = crate::group::group_order(&strength2_generators(k as usize)?.perms)?;
            ok &= order == (big(1) << k) * factorial(k + 1);
            found.push(order.to_string());
        }
        Ok((ok, format!("k=4..6: {}", found.join(", "))))
    })
}

pub fn brute_force_orders() -> CheckOutcome {
    timed(3, "brute-force G^LP orders", Duration::from_secs(10), || {
        let a = brute_force_glp(2, 1)?.order;
        let b = brute_force_glp(3, 1)?.order;
        let c = brute_force_glp(3, 2)?;
        let ok = a == big(8) && b == big(48) && c.order == big(1152) && c.node_count == 40320;
        Ok((ok, format!("{a}, {b}, {} ({} permutations tested)", c.order, c.node_count)))
    })
}

pub fn refine_matches() -> CheckOutcome {
    timed(4, "refinement search reproduces the full groups", Duration::from_secs(60), || {
        let mut ok = true;
        for k in 1..=3 {
            for t in 1..=k {
                let brute = brute_force_glp(k, t)?;
                let refined = refine_automorphisms(k, t)?;
                let (gb, gr) = (brute.group(), refined.group());
                ok &= brute.order == refined.order;
                for g in &refined.generators {
                    ok &= gb.contains(g)?;
                }
                for g in &brute.generators {
                    ok &= gr.contains(g)?;
                }
            }
        }
        let mut found = Vec::new();
        for (k, t, want) in [(4, 1, 384u64), (4, 2, 1920), (5, 2, 23040)] {
            let order = refine_automorphisms(k, t)?.order;
            ok &= order == big(want);
            found.push(format!("k={k},t={t}: {order}"));
        }
        Ok((ok, format!("k<=3 agree with brute force; {}", found.join(", "))))
    })
}

pub fn k3_exception() -> CheckOutcome {
    timed(5, "k=3 strength-2 generators give a proper subgroup", Duration::from_secs(10), || {
        let big_group = brute_force_glp(3, 2)?.group();
        let small = PermGroup::new(8, strength2_generators(3)?.perms)?;
        let elements = small.elements(1000)?;
        let mut ok = elements.len() == 192 && big_group.order() > big(192);
        for g in &elements {
            ok &= big_group.contains(g)?;
        }
        Ok((ok, format!("{} elements inside a group of order {}", elements.len(), big_group.order())))
    })
}

pub fn rho_relations() -> CheckOutcome {
    timed(6, "rho involutions conjugate to factor swaps", Duration::from_secs(5), || {
        let mut ok = true;
        let mut pairs = 0;
        for k in 2..=6 {
            for i in 1..=k {
                let ri = rho_perm(i, k)?;
                ok &= ri.compose(&ri)?.is_identity();
                for j in i + 1..=k {
                    let rj = rho_perm(j, k)?;
                    ok &= ri.compose(&rj)?.compose(&ri)? == factor_swap_perm(i, j, k)?;
                    pairs += 1;
                }
            }
        }
        Ok((ok, format!("{pairs} pairs checked")))
    })
}

pub fn half_combinations() -> CheckOutcome {
    timed(7, "viable half combinations are exactly the three-factor family", Duration::from_secs(30), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 3..=5 {
            let r = classify_half_combinations(k)?;
            let family = r.family();
            let signs_ok = r.family_sign_rule_holds(&family) && r.rule_disagreements == 0;
            let mut outside: Vec<String> = r.viable_outside_family().map(|c| c.case_name()).collect();
            outside.sort();
            outside.dedup();
            ok &= signs_ok && outside.is_empty();
            parts.push(if outside.is_empty() {
                format!("k={k}: {} viable, all in family", r.viable.len())
            } else {
                format!(
                    "k={k}: {} of {} viable outside family ({})",
                    r.viable_outside_family().count(),
                    r.viable.len(),
                    outside.join(" ")
                )
            });
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn basis_forms() -> CheckOutcome {
    timed(8, "basis images have the signed or four-term form", Duration::from_secs(30), || {
        let r4 = verify_basis_forms(4, 2)?;
        let r3 = verify_basis_forms(3, 2)?;
        let ok = r4.only_signed() && r3.forms_hold() && r3.four_term > 0;
        Ok((
            ok,
            format!(
                "k=4,t=2: {} images, {} signed; k=3,t=2: {} four-term images",
                r4.images_checked, r4.signed, r3.four_term
            ),
        ))
    })
}

pub fn feasibility_transport() -> CheckOutcome {
    timed(9, "symmetries map OA frequency vectors to feasible vectors", Duration::from_secs(30), || {
        let mut ok = true;
        let mut checked = 0;
        for (n, k, t) in ENUM_TRIPLES {
            let gens = glp_generators(k, t)?;
            for s in &enumerate_oa(n, k, t, None)?.solutions {
                for g in &gens {
                    ok &= is_feasible(&FrequencyVector::from_integers(k, &g.act_on(s))?, n, k, t)?;
                    checked += 1;
                }
            }
        }
        Ok((ok, format!("{checked} images feasible")))
    })
}

pub fn enumeration_counts() -> CheckOutcome {
    timed(10, "orbit sizes reconstruct unpruned counts", Duration::from_secs(30), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (n, k, t) in ENUM_TRIPLES {
            let plain = enumerate_oa(n, k, t, None)?;
            let gens = glp_generators(k, t)?;
            let pruned = enumerate_oa(n, k, t, Some(&gens))?;
            ok &= pruned.reconstructed_total() == plain.total_solutions && verify_group_action(&pruned, &gens)?;
            parts.push(format!(
                "({n},{k},{t}): {}/{}",
                plain.total_solutions,
                pruned.orbit_representatives.len()
            ));
            match (n, k, t) {
                (4, 3, 2) => ok &= plain.total_solutions == 2 && pruned.orbit_representatives.len() == 1,
                (8, 3, 2) => ok &= plain.total_solutions == 3 && pruned.orbit_representatives.len() == 2,
                _ => {}
            }
        }
        Ok((ok, format!("solutions/orbits {}", parts.join(", "))))
    })
}

pub fn model_invariants() -> CheckOutcome {
    timed(11, "model rows orthogonal and Q^2 = 2^k Q", Duration::from_secs(30), || {
        let mut ok = true;
        for k in 1..=6 {
            let n = 1i64 << k;
            for t in 1..=k {
                let m = build_m(k, t)?;
                for (a, ra) in m.rows().iter().enumerate() {
                    for (b, rb) in m.rows().iter().enumerate().skip(a) {
                        let dot: i64 = ra.iter().zip(rb).map(|(&x, &y)| (x * y) as i64).sum();
                        ok &= dot == if a == b { n } else { 0 };
                    }
                }
                let q = gram_projection(k, t)?.to_dense();
                for i in 0..q.len() {
                    for j in 0..q.len() {
                        let qq: i64 = (0..q.len()).map(|l| q[i][l] * q[l][j]).sum();
                        ok &= qq == n * q[i][j];
                    }
                }
            }
        }
        Ok((ok, "1 <= t <= k <= 6".to_string()))
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        wreath_orders(),
        strength2_orders(),
        brute_force_orders(),
        refine_matches(),
        k3_exception(),
        rho_relations(),
        half_combinations(),
        basis_forms(),
        feasibility_transport(),
        enumeration_counts(),
        model_invariants(),
    ]
}
