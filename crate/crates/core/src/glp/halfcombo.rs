//! Exhaustive classification of `±0.5` combinations of four model columns.
//!
//! A combination `v = ½ Σ s_i x_{l_i}` over four distinct main effects or
//! two-factor interactions can be the image of a basis column under a coordinate
//! permutation only if every entry of `v` is `±1`. This module enumerates every
//! such combination for a given `k`. It evaluates each one both entrywise and with
//! the min/max rule (`min = -1` and `max = +1`), and groups them into classes up
//! to relabeling of the factors.
//!
//! Labels inside a combination are kept in a fixed order: two-factor
//! interactions first, then main effects, each sorted by factor list. The first
//! sign is normalized to `+`. The remaining three signs run over
//! `expand.grid(c(1,-1), c(1,-1), c(1,-1))` order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factorial::{check_factors, parity_sign, SubsetLabel};

/// Largest `k` accepted by [`classify_half_combinations`].
pub const CLASSIFY_MAX_K: usize = 6;

type LabelKey = (std::cmp::Reverse<usize>, Vec<usize>);

fn label_key(l: SubsetLabel) -> LabelKey {
    (std::cmp::Reverse(l.order()), l.factors())
}

fn sort_labels(labels: &mut [SubsetLabel]) {
    labels.sort_by_key(|&l| label_key(l));
}

/// Entries of `½ Σ s_i x_{l_i}`; the sum of four `±1` terms is always even.
pub fn evaluate_combination(k: usize, labels: &[SubsetLabel], signs: &[i8]) -> Vec<i64> {
    (0..1usize << k)
        .map(|p| {
            let sum: i64 = labels
                .iter()
                .zip(signs)
                .map(|(l, &s)| (s * parity_sign(p, l.mask())) as i64)
                .sum();
            sum / 2
        })
        .collect()
}

/// A signed combination of four distinct main effects or two-factor
/// interactions, at least one of them an interaction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfCombo {
    k: usize,
    labels: [SubsetLabel; 4],
    signs: [i8; 4],
}

impl HalfCombo {
    /// Validates the labels and signs and puts the labels in canonical order.
    /// The signs follow their labels through that reordering, and the whole
    /// combination is negated if needed so the first sign is `+`.
    pub fn new(k: usize, labels: [SubsetLabel; 4], signs: [i8; 4]) -> Result<Self> {
        check_factors(k)?;
        for l in labels {
            SubsetLabel::new(l.mask(), k)?;
            if !(1..=2).contains(&l.order()) {
                return Err(Error::domain(format!("{l} is neither a main effect nor a two-factor interaction")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::domain("signs must be +1 or -1"));
        }
        let mut pairs: Vec<(SubsetLabel, i8)> = labels.into_iter().zip(signs).collect();
        pairs.sort_by_key(|&(l, _)| label_key(l));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("labels must be distinct"));
        }
        if pairs.iter().all(|(l, _)| l.order() == 1) {
            return Err(Error::domain("at least one two-factor interaction is required"));
        }
        let flip = pairs[0].1;
        Ok(HalfCombo {
            k,
            labels: std::array::from_fn(|i| pairs[i].0),
            signs: std::array::from_fn(|i| pairs[i].1 * flip),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[SubsetLabel; 4] {
        &self.labels
    }

    pub fn signs(&self) -> &[i8; 4] {
        &self.signs
    }

    pub fn vector(&self) -> Vec<i64> {
        evaluate_combination(self.k, &self.labels, &self.signs)
    }

    /// Every entry is `±1`.
    pub fn is_viable(&self) -> bool {
        self.vector().iter().all(|v| v.abs() == 1)
    }

    /// The min/max rule: smallest entry `-1` and largest `+1`.
    pub fn is_viable_minmax(&self) -> bool {
        let v = self.vector();
        v.iter().min() == Some(&-1) && v.iter().max() == Some(&1)
    }

    /// `(a, b, c)` if the labels are `{x_{a,b}, x_{a,c}, x_b, x_c}` with `b < c`.
    pub fn three_factor_family(&self) -> Option<(usize, usize, usize)> {
        let [ab, ac, b, c] = self.labels;
        if ab.order() != 2 || ac.order() != 2 || b.order() != 1 || c.order() != 1 {
            return None;
        }
        let shared = ab.mask() & ac.mask();
        if shared.count_ones() != 1 {
            return None;
        }
        if ab.mask() ^ shared != b.mask() || ac.mask() ^ shared != c.mask() {
            return None;
        }
        let a = shared.trailing_zeros() as usize + 1;
        Some((a, b.factors()[0], c.factors()[0]))
    }

    /// Within the three-factor family: `(s_b = s_ab and s_c = -s_ac)` or
    /// `(s_b = -s_ab and s_c = s_ac)`.
    pub fn satisfies_family_sign_rule(&self) -> bool {
        let [s1, s2, s3, s4] = self.signs;
        (s3 == s1 && s4 == -s2) || (s3 == -s1 && s4 == s2)
    }

    pub fn case_name(&self) -> String {
        canonical_case_name(self.k, &self.labels)
    }
}

fn label_name(l: SubsetLabel) -> String {
    l.factors().iter().map(|f| f.to_string()).collect()
}

fn plain_name(labels: &[SubsetLabel]) -> String {
    labels.iter().map(|&l| label_name(l)).collect::<Vec<_>>().join(".")
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn relabel(l: SubsetLabel, sigma: &[usize]) -> SubsetLabel {
    let mask = (0..sigma.len())
        .filter(|&i| l.mask() >> i & 1 == 1)
        .fold(0u32, |m, i| m | 1 << sigma[i]);
    SubsetLabel::new(mask, sigma.len()).expect("relabeled mask in range")
}

/// Lexicographically least relabeling of a label set, in canonical label order.
fn canonical_labels(labels: &[SubsetLabel], perms: &[Vec<usize>]) -> Vec<SubsetLabel> {
    perms
        .iter()
        .map(|sigma| {
            let mut mapped: Vec<SubsetLabel> = labels.iter().map(|&l| relabel(l, sigma)).collect();
            sort_labels(&mut mapped);
            mapped
        })
        .min_by_key(|m| m.iter().map(|&l| label_key(l)).collect::<Vec<_>>())
        .unwrap_or_else(|| labels.to_vec())
}

/// Name of the relabeling class of a label set, e.g. `12.13.2.3`.
pub fn canonical_case_name(k: usize, labels: &[SubsetLabel]) -> String {
    plain_name(&canonical_labels(labels, &all_permutations(k)))
}

/// Parses a dotted case name such as `12.34.1.5` (single-digit factors).
pub fn parse_case_name(name: &str, k: usize) -> Result<Vec<SubsetLabel>> {
    name.split('.')
        .map(|part| {
            let factors: Vec<usize> = part
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::domain(format!("bad case name `{name}`"))))
                .collect::<Result<_>>()?;
            SubsetLabel::from_factors(&factors, k)
        })
        .collect()
}

/// One relabeling class of label sets with its eight sign patterns.
#[derive(Debug, Clone)]
pub struct HalfComboCase {
    pub name: String,
    /// Canonical label set of the class.
    pub labels: [SubsetLabel; 4],
    /// Number of distinct factors involved.
    pub support: usize,
    /// Label sets in the class (for this `k`).
    pub label_sets: usize,
    /// The eight sign patterns on the canonical labels, with entrywise viability.
    pub patterns: Vec<([i8; 4], bool)>,
}

impl HalfComboCase {
    pub fn viable_patterns(&self) -> usize {
        self.patterns.iter().filter(|(_, v)| *v).count()
    }
}

#[derive(Debug, Clone)]
pub struct HalfComboReport {
    pub k: usize,
    /// Label sets (each with eight sign patterns).
    pub label_sets: usize,
    pub combos: usize,
    pub viable: Vec<HalfCombo>,
    /// Combinations where the min/max rule and the entrywise test disagree.
    pub rule_disagreements: usize,
    pub cases: Vec<HalfComboCase>,
}

impl HalfComboReport {
    pub fn viable_in_family(&self) -> impl Iterator<Item = &HalfCombo> {
        self.viable.iter().filter(|c| c.three_factor_family().is_some())
    }

    pub fn viable_outside_family(&self) -> impl Iterator<Item = &HalfCombo> {
        self.viable.iter().filter(|c| c.three_factor_family().is_none())
    }

    /// Whether the viable set is exactly the three-factor family.
    pub fn only_family_viable(&self) -> bool {
        self.viable_outside_family().next().is_none()
    }

    /// Whether, inside the family, viability coincides with the sign rule.
    pub fn family_sign_rule_holds(&self, all_family: &[HalfCombo]) -> bool {
        all_family
            .iter()
            .all(|c| c.is_viable() == c.satisfies_family_sign_rule())
    }
}

/// Signs `(+, s2, s3, s4)` with `(s2, s3, s4)` in `expand.grid` order.
pub(crate) fn sign_patterns() -> [[i8; 4]; 8] {
    std::array::from_fn(|i| {
        let s = |bit: usize| if i >> bit & 1 == 0 { 1 } else { -1 };
        [1, s(0), s(1), s(2)]
    })
}

/// All label sets for `k`: four distinct columns of order one or two, at least
/// one of order two, each in canonical order.
pub(crate) fn label_sets(k: usize) -> Vec<[SubsetLabel; 4]> {
    let mut candidates: Vec<SubsetLabel> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            candidates.push(SubsetLabel::new(1 << a | 1 << b, k).unwrap());
        }
    }
    for a in 0..k {
        candidates.push(SubsetLabel::new(1 << a, k).unwrap());
    }
    let m = candidates.len();
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let mut set = [candidates[a], candidates[b], candidates[c], candidates[d]];
                    if set.iter().all(|l| l.order() == 1) {
                        continue;
                    }
                    sort_labels(&mut set);
                    out.push(set);
                }
            }
        }
    }
    out
}

pub fn classify_half_combinations(k: usize) -> Result<HalfComboReport> {
    if !(3..=CLASSIFY_MAX_K).contains(&k) {
        return Err(Error::domain(format!(
            "half-combination classification needs 3 <= k <= {CLASSIFY_MAX_K}, got {k}"
        )));
    }
    let perms = all_permutations(k);
    let sets = label_sets(k);
    let mut viable = Vec::new();
    let mut rule_disagreements = 0;
    let mut classes: BTreeMap<Vec<LabelKey>, (Vec<SubsetLabel>, usize)> = BTreeMap::new();
    for set in &sets {
        for signs in sign_patterns() {
            let combo = HalfCombo::new(k, *set, signs)?;
            let ok = combo.is_viable();
            if ok != combo.is_viable_minmax() {
                rule_disagreements += 1;
            }
            if ok {
                viable.push(combo);
            }
        }
        let canon = canonical_labels(set, &perms);
        let key = canon.iter().map(|&l| label_key(l)).collect();
        classes.entry(key).or_insert((canon, 0)).1 += 1;
    }
    let cases = classes
        .into_values()
        .map(|(labels, count)| {
            let labels: [SubsetLabel; 4] = labels.try_into().expect("four labels");
            let support = labels.iter().fold(0u32, |m, l| m | l.mask()).count_ones() as usize;
            let patterns = sign_patterns()
                .into_iter()
                .map(|s| (s, evaluate_combination(k, &labels, &s).iter().all(|v| v.abs() == 1)))
                .collect();
            HalfComboCase {
                name: plain_name(&labels),
                labels,
                support,
                label_sets: count,
                patterns,
            }
        })
        .collect();
    Ok(HalfComboReport {
        k,
        label_sets: sets.len(),
        combos: sets.len() * 8,
        viable,
        rule_disagreements,
        cases,
    })
}

/// Every combination in the three-factor family for `k`, all sign patterns.
pub(crate) fn family_combos(k: usize) -> Vec<HalfCombo> {
    label_sets(k)
        .into_iter()
        .flat_map(|set| sign_patterns().map(move |s| HalfCombo::new(k, set, s).unwrap()))
        .filter(|c| c.three_factor_family().is_some())
        .collect()
}

impl HalfComboReport {
    pub fn family(&self) -> Vec<HalfCombo> {
        family_combos(self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(k: usize, name: &str) -> [SubsetLabel; 4] {
        parse_case_name(name, k).unwrap().try_into().unwrap()
    }

    #[test]
    fn documented_examples() {
        let l = labels(3, "12.13.2.3");
        let c = HalfCombo::new(3, l, [1, 1, 1, -1]).unwrap();
        assert!(c.is_viable());
        assert_eq!(c.three_factor_family(), Some((1, 2, 3)));
        // x1 = +1 half: v = x2; x1 = -1 half: v = -x3
        for p in 0..8usize {
            let expected = if p & 1 == 0 {
                crate::factorial::level(p, 1)
            } else {
                -crate::factorial::level(p, 2)
            };
            assert_eq!(c.vector()[p], expected as i64);
        }
        let c = HalfCombo::new(3, l, [1, 1, 1, 1]).unwrap();
        assert!(!c.is_viable());
        assert!(c.vector().contains(&0));
    }

    #[test]
    fn four_main_effects_reach_two() {
        let mains = parse_case_name("1.2.3.4", 4).unwrap();
        assert!(HalfCombo::new(4, mains.clone().try_into().unwrap(), [1; 4]).is_err());
        for s in sign_patterns() {
            let v = evaluate_combination(4, &mains, &s);
            assert!(v.iter().any(|x| x.abs() == 2));
        }
    }

    #[test]
    fn disjoint_interactions_never_viable() {
        for name in ["12.34.1.2", "12.34.1.3", "12.34.1.5", "12.34.5.6", "12.34.56.1", "12.34.56.7", "12.34.56.78"] {
            let k = 8;
            let l = parse_case_name(name, k).unwrap();
            for s in sign_patterns() {
                let v = evaluate_combination(k, &l, &s);
                assert!(!v.iter().all(|x| x.abs() == 1), "{name} {s:?}");
            }
        }
    }

    #[test]
    fn constructor_normalizes() {
        let l = labels(3, "2.3.12.13");
        let c = HalfCombo::new(3, l, [-1, 1, 1, 1]).unwrap();
        assert_eq!(plain_name(c.labels()), "12.13.2.3");
        assert_eq!(c.signs(), &[1, 1, -1, 1]);
        assert!(HalfCombo::new(3, labels(3, "12.12.2.3"), [1; 4]).is_err());
        let bad = [SubsetLabel::new(0b111, 3).unwrap(), l[1], l[2], l[3]];
        assert!(HalfCombo::new(3, bad, [1; 4]).is_err());
    }

    #[test]
    fn canonical_names() {
        assert_eq!(canonical_case_name(5, &parse_case_name("45.35.4.3", 5).unwrap()), "12.13.2.3");
        assert_eq!(canonical_case_name(6, &parse_case_name("12.13.45.5", 6).unwrap()), "12.13.45.4");
        assert_eq!(canonical_case_name(4, &parse_case_name("34.12.24.13", 4).unwrap()), "12.13.24.34");
    }

    #[test]
    fn counts_for_k3() {
        let r = classify_half_combinations(3).unwrap();
        // 6 candidate columns, C(6,4) = 15 sets, one of them all main effects... only 3 mains, so none
        assert_eq!(r.label_sets, 15);
        assert_eq!(r.combos, 120);
        assert_eq!(r.rule_disagreements, 0);
        assert!(r.only_family_viable());
        assert!(classify_half_combinations(2).is_err());
        assert!(classify_half_combinations(7).is_err());
    }
}
