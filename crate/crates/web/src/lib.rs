//! Browser bindings for the static demo in `www/`.
//!
//! Every exported function returns a JSON string; errors come back as a thrown
//! string. The `*_json` functions hold the logic so it can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use oasym::enumerate::enumerate_oa_with_budget;
use oasym::glp::{classify_half_combinations, refine_automorphisms_with_budget};
use oasym::model::gram_projection;
use oasym::{design_from_freq, generators, group_order, GeneratorKind, LevelEncoding, Permutation};

/// Largest `k` the page offers; the Gram matrix then has 64 x 64 cells.
pub const MAX_K: usize = 6;
const NODE_BUDGET: u64 = 5_000_000;
const ENUM_BUDGET: u64 = 20_000_000;

#[derive(Serialize)]
struct GramView {
    k: usize,
    t: usize,
    degree: usize,
    values: Vec<i64>,
    /// Row-major `Q[i][j]`.
    matrix: Vec<i64>,
    glp_order: String,
    wreath_order: String,
    strength2_order: Option<String>,
}

#[derive(Serialize)]
struct AppendixRow {
    case: String,
    support: usize,
    label_sets: usize,
    signs: [i8; 4],
    viable: bool,
}

#[derive(Serialize)]
struct AppendixView {
    k: usize,
    combinations: usize,
    viable: usize,
    viable_outside_family: usize,
    rows: Vec<AppendixRow>,
}

#[derive(Serialize)]
struct EnumView {
    #[serde(rename = "N")]
    n: u64,
    k: usize,
    t: usize,
    solutions: u64,
    orbits: usize,
    group_order: String,
    orbit_sizes: Vec<u64>,
    designs: Vec<String>,
}

fn check_k(k: usize) -> Result<(), String> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(format!("k must be between 1 and {MAX_K}"))
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn gram_json(k: usize, t: usize) -> Result<String, String> {
    check_k(k)?;
    let gram = gram_projection(k, t).map_err(|e| e.to_string())?;
    let n = gram.degree();
    let matrix = (0..n * n).map(|x| gram.entry(x / n, x % n)).collect();
    let glp = refine_automorphisms_with_budget(k, t, NODE_BUDGET).map_err(|e| e.to_string())?;
    let order_of = |kind| -> Option<String> {
        let set = generators(kind, k).ok()?;
        Some(group_order(&set.perms).ok()?.to_string())
    };
    Ok(to_json(&GramView {
        k,
        t,
        degree: n,
        values: gram.distinct_values(),
        matrix,
        glp_order: glp.order.to_string(),
        wreath_order: order_of(GeneratorKind::Wreath).unwrap_or_default(),
        strength2_order: order_of(GeneratorKind::Strength2),
    }))
}

pub fn appendix_json(k: usize) -> Result<String, String> {
    if k > 5 {
        return Err("the page classifies k = 3, 4, 5".to_string());
    }
    let r = classify_half_combinations(k).map_err(|e| e.to_string())?;
    let rows = r
        .cases
        .iter()
        .flat_map(|c| {
            c.patterns.iter().map(move |(signs, viable)| AppendixRow {
                case: c.name.clone(),
                support: c.support,
                label_sets: c.label_sets,
                signs: *signs,
                viable: *viable,
            })
        })
        .collect();
    Ok(to_json(&AppendixView {
        k,
        combinations: r.combos,
        viable: r.viable.len(),
        viable_outside_family: r.viable_outside_family().count(),
        rows,
    }))
}

pub fn enumerate_json(n: u64, k: usize, t: usize, group: &str) -> Result<String, String> {
    check_k(k)?;
    let gens: Vec<Permutation> = match group {
        "none" => Vec::new(),
        "glp" => refine_automorphisms_with_budget(k, t, NODE_BUDGET).map_err(|e| e.to_string())?.generators,
        other => {
            let kind: GeneratorKind = other.parse().map_err(|e: oasym::Error| e.to_string())?;
            generators(kind, k).map_err(|e| e.to_string())?.perms
        }
    };
    let r = enumerate_oa_with_budget(n, k, t, Some(&gens), ENUM_BUDGET).map_err(|e| e.to_string())?;
    let designs = r
        .orbit_representatives
        .iter()
        .map(|f| design_from_freq(f).map(|d| d.to_text(LevelEncoding::PlusMinus)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(to_json(&EnumView {
        n,
        k,
        t,
        solutions: r.total_solutions,
        orbits: r.orbit_representatives.len(),
        group_order: r.group_order_used.to_string(),
        orbit_sizes: r.orbit_sizes,
        designs,
    }))
}

/// Gram matrix `Q` with its symmetry-group orders.
#[wasm_bindgen]
pub fn gram(k: usize, t: usize) -> Result<String, JsValue> {
    gram_json(k, t).map_err(|e| JsValue::from_str(&e))
}

/// Half-combination classification table.
#[wasm_bindgen]
pub fn appendix(k: usize) -> Result<String, JsValue> {
    appendix_json(k).map_err(|e| JsValue::from_str(&e))
}

/// Orthogonal arrays up to symmetry; `group` is `none`, `wreath`, `strength2` or `glp`.
#[wasm_bindgen]
pub fn enumerate(n: u32, k: usize, t: usize, group: &str) -> Result<String, JsValue> {
    enumerate_json(n as u64, k, t, group).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn gram_view() {
        let v = parse(&gram_json(3, 2).unwrap());
        assert_eq!(v["degree"], 8);
        assert_eq!(v["matrix"].as_array().unwrap().len(), 64);
        assert_eq!(v["matrix"][0], 7);
        assert_eq!(v["glp_order"], "1152");
        assert_eq!(v["strength2_order"], "192");
        assert!(gram_json(7, 2).is_err());
        assert!(gram_json(3, 4).is_err());
    }

    #[test]
    fn appendix_view() {
        let v = parse(&appendix_json(3).unwrap());
        assert_eq!(v["combinations"], 120);
        assert_eq!(v["viable"], 12);
        assert!(appendix_json(6).is_err());
    }

    #[test]
    fn enumerate_view() {
        let v = parse(&enumerate_json(8, 3, 2, "glp").unwrap());
        assert_eq!(v["solutions"], 3);
        assert_eq!(v["orbits"], 2);
        assert_eq!(v["designs"].as_array().unwrap().len(), 2);
        let v = parse(&enumerate_json(8, 3, 2, "none").unwrap());
        assert_eq!(v["orbits"], 3);
        assert!(enumerate_json(8, 3, 2, "cyclic").is_err());
    }
}
