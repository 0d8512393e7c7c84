//! Shapes of basis-column images under the symmetry group.
//!
//! For each group element `g` and each non-intercept column `x` of `M`, the image
//! `g·x` is expanded in the orthogonal basis of all `2^k` interaction columns.
//! Every image is expected to be either a signed basis column or a four-term
//! `±½` combination from the family `{x_{a,b}, x_{a,c}, x_b, x_c}`.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive};

use super::halfcombo::HalfCombo;
use super::{brute_force_glp, refine_automorphisms, BRUTE_FORCE_MAX_K};
use crate::error::{Error, Result};
use crate::factorial::{interaction_column, SubsetLabel};
use crate::model::{interaction_coefficients, model_labels, nonzero_support};

/// Largest `k` accepted by [`verify_basis_forms`].
pub const FORMS_MAX_K: usize = 4;

/// Groups up to this order are checked element by element; larger ones by generators.
const ELEMENT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisImage {
    /// `±x_l`.
    Signed { label: SubsetLabel, sign: i8 },
    /// Four `±½` terms from the three-factor family.
    FourTerm(HalfCombo),
    /// Anything else, with its nonzero coefficients.
    Other(Vec<(SubsetLabel, Rational64)>),
}

impl BasisImage {
    pub fn classify(v: &[i64], k: usize) -> Result<Self> {
        let support: Vec<(SubsetLabel, Rational64)> = nonzero_support(&interaction_coefficients(v, k)?)
            .into_iter()
            .map(|(mask, c)| (SubsetLabel::new(mask as u32, k).expect("mask below 2^k"), c))
            .collect();
        let half = Rational64::new(1, 2);
        if let [(label, c)] = support[..] {
            if c.abs().is_one() {
                return Ok(BasisImage::Signed {
                    label,
                    sign: c.to_integer() as i8,
                });
            }
        }
        if support.len() == 4 && support.iter().all(|(_, c)| c.abs() == half) {
            let labels: [SubsetLabel; 4] = std::array::from_fn(|i| support[i].0);
            let signs: [i8; 4] = std::array::from_fn(|i| (support[i].1 * 2).to_integer() as i8);
            if let Ok(combo) = HalfCombo::new(k, labels, signs) {
                if combo.three_factor_family().is_some() {
                    return Ok(BasisImage::FourTerm(combo));
                }
            }
        }
        Ok(BasisImage::Other(support))
    }
}

#[derive(Debug, Clone)]
pub struct FormReport {
    pub k: usize,
    pub t: usize,
    pub group_order: BigUint,
    /// True when every group element was examined, false when only generators were.
    pub all_elements: bool,
    pub elements_checked: usize,
    pub images_checked: usize,
    pub signed: usize,
    pub four_term: usize,
    pub violations: Vec<(SubsetLabel, Vec<(SubsetLabel, Rational64)>)>,
    /// Some element maps a main effect outside `±` main effects.
    pub main_effect_leaves_main_effects: bool,
    /// A witness `(x, g·x)` of the four-term form, if one occurred.
    pub four_term_example: Option<(SubsetLabel, HalfCombo)>,
}

impl FormReport {
    pub fn only_signed(&self) -> bool {
        self.four_term == 0 && self.violations.is_empty()
    }

    pub fn forms_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_basis_forms(k: usize, t: usize) -> Result<FormReport> {
    if k == 0 || k > FORMS_MAX_K || t == 0 || t > k {
        return Err(Error::domain(format!(
            "form verification needs 1 <= t <= k <= {FORMS_MAX_K}, got k={k}, t={t}"
        )));
    }
    let search = if k <= BRUTE_FORCE_MAX_K {
        brute_force_glp(k, t)?
    } else {
        refine_automorphisms(k, t)?
    };
    let group = search.group();
    let all_elements = search.order.to_usize().is_some_and(|n| n <= ELEMENT_CAP);
    let elements = if all_elements {
        group.elements(ELEMENT_CAP)?
    } else {
        search.generators.clone()
    };

    let basis: Vec<SubsetLabel> = model_labels(k, t).into_iter().filter(|l| !l.is_empty()).collect();
    let columns: Vec<Vec<i64>> = basis
        .iter()
        .map(|&l| interaction_column(k, l).map(|c| c.into_iter().map(i64::from).collect()))
        .collect::<Result<_>>()?;

    let mut report = FormReport {
        k,
        t,
        group_order: search.order,
        all_elements,
        elements_checked: elements.len(),
        images_checked: 0,
        signed: 0,
        four_term: 0,
        violations: Vec::new(),
        main_effect_leaves_main_effects: false,
        four_term_example: None,
    };
    for g in &elements {
        for (&label, col) in basis.iter().zip(&columns) {
            report.images_checked += 1;
            let image = BasisImage::classify(&g.act_on(col), k)?;
            let main_to_main = matches!(image, BasisImage::Signed { label: l, .. } if l.order() == 1);
            if label.order() == 1 && !main_to_main {
                report.main_effect_leaves_main_effects = true;
            }
            match image {
                BasisImage::Signed { .. } => report.signed += 1,
                BasisImage::FourTerm(combo) => {
                    report.four_term += 1;
                    report.four_term_example.get_or_insert((label, combo));
                }
                BasisImage::Other(support) => report.violations.push((label, support)),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_shapes() {
        let k = 3;
        let col = |f: &[usize]| -> Vec<i64> {
            interaction_column(k, SubsetLabel::from_factors(f, k).unwrap())
                .unwrap()
                .into_iter()
                .map(i64::from)
                .collect()
        };
        let x2 = col(&[2]);
        let neg: Vec<i64> = x2.iter().map(|v| -v).collect();
        assert_eq!(
            BasisImage::classify(&neg, k).unwrap(),
            BasisImage::Signed {
                label: SubsetLabel::from_factors(&[2], k).unwrap(),
                sign: -1
            }
        );
        // x2 on the x1=+1 half, -x3 on the other
        let (x1, x3) = (col(&[1]), col(&[3]));
        let mixed: Vec<i64> = (0..8).map(|p| if x1[p] == 1 { x2[p] } else { -x3[p] }).collect();
        match BasisImage::classify(&mixed, k).unwrap() {
            BasisImage::FourTerm(c) => assert_eq!(c.three_factor_family(), Some((1, 2, 3))),
            other => panic!("{other:?}"),
        }
        let sum: Vec<i64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
        assert!(matches!(BasisImage::classify(&sum, k).unwrap(), BasisImage::Other(_)));
    }

    #[test]
    fn strength_one_keeps_main_effects() {
        let r = verify_basis_forms(3, 1).unwrap();
        assert!(r.all_elements);
        assert_eq!(r.elements_checked, 48);
        assert!(!r.main_effect_leaves_main_effects);
        assert!(r.only_signed());
    }

    #[test]
    fn k3_t2_has_four_term_images() {
        let r = verify_basis_forms(3, 2).unwrap();
        assert_eq!(r.elements_checked, 1152);
        assert!(r.forms_hold());
        assert!(r.four_term > 0);
        assert!(r.four_term_example.is_some());
        assert!(r.main_effect_leaves_main_effects);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(verify_basis_forms(5, 2).is_err());
        assert!(verify_basis_forms(3, 0).is_err());
    }
}
