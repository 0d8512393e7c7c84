//! The OA-defining integer program `M f = J, f >= 0, f integral`.
//!
//! The rows of `M` are the interaction columns `x_l` for every factor subset with
//! `|l| <= t`. They are pairwise orthogonal with squared norm `2^k`, so
//! `Q = Mᵀ M` equals `2^k` times the orthogonal projector onto `Row(M)`. Every
//! row-space question below is answered with exact integer arithmetic on `Q`.
//!
//! `Q[i][j]` depends only on `i XOR j`, so [`GramProjection`] stores one row of it.

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::{check_factors, parity_sign, FrequencyVector, SubsetLabel};
use crate::perm::Permutation;

fn check_model(k: usize, t: usize) -> Result<()> {
    check_factors(k)?;
    if t == 0 || t > k {
        return Err(Error::domain(format!("strength t={t} outside 1..={k}")));
    }
    Ok(())
}

/// Labels with `|l| <= t`, ordered by size and then lexicographically by factor list.
pub fn model_labels(k: usize, t: usize) -> Vec<SubsetLabel> {
    let mut out = Vec::new();
    for size in 0..=t.min(k) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u32, |m, &i| m | 1 << i);
            out.push(SubsetLabel::new(mask, k).expect("mask within k bits"));
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&i| combo[i] < k - size + i) else {
                break;
            };
            combo[pos] += 1;
            for j in pos + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Number of rows of `M`: `sum_{i<=t} C(k, i)`.
pub fn row_count(k: usize, t: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    for i in 0..=t.min(k) {
        total += binom;
        binom = binom * (k - i) / (i + 1);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMatrix {
    k: usize,
    t: usize,
    labels: Vec<SubsetLabel>,
    rows: Vec<Vec<i8>>,
}

/// Serialized form of [`ModelMatrix`].
#[derive(Debug, Clone, Serialize)]
pub struct ModelDoc {
    pub k: usize,
    pub t: usize,
    pub labels: Vec<Vec<usize>>,
    pub rows: Vec<Vec<i8>>,
}

impl ModelMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn labels(&self) -> &[SubsetLabel] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        1 << self.k
    }

    /// `M v` over any integer-like entries.
    pub fn mul_vec<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Clone + Zero + std::ops::Neg<Output = T>,
    {
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(T::zero(), |acc, (&s, x)| {
                    if s > 0 {
                        acc + x.clone()
                    } else {
                        acc + -x.clone()
                    }
                })
            })
            .collect()
    }

    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            k: self.k,
            t: self.t,
            labels: self.labels.iter().map(|l| l.factors()).collect(),
            rows: self.rows.clone(),
        }
    }

    /// Human-readable listing: one row per line, prefixed with its label.
    pub fn to_text(&self) -> String {
        let mut out = format!("M: {} x {} (k={}, t={})\n", self.n_rows(), self.n_cols(), self.k, self.t);
        for (label, row) in self.labels.iter().zip(&self.rows) {
            let cells: Vec<&str> = row.iter().map(|&v| if v > 0 { " 1" } else { "-1" }).collect();
            out.push_str(&format!("{:>8} | {}\n", label.to_string(), cells.join(" ")));
        }
        out
    }
}

pub fn build_m(k: usize, t: usize) -> Result<ModelMatrix> {
    check_model(k, t)?;
    let labels = model_labels(k, t);
    let rows = labels
        .iter()
        .map(|l| (0..1usize << k).map(|p| parity_sign(p, l.mask())).collect())
        .collect();
    Ok(ModelMatrix { k, t, labels, rows })
}

/// Right-hand side `J = (N, 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhsVector {
    #[serde(rename = "N")]
    pub n: u64,
    pub values: Vec<i64>,
}

pub fn build_j(n: u64, k: usize, t: usize) -> Result<RhsVector> {
    check_model(k, t)?;
    if n == 0 {
        return Err(Error::domain("run count N must be positive"));
    }
    let mut values = vec![0i64; row_count(k, t)];
    values[0] = n as i64;
    Ok(RhsVector { n, values })
}

/// LP-relaxation feasibility: `M f = J` and `f >= 0`. Integrality is not required.
pub fn is_feasible(f: &FrequencyVector, n: u64, k: usize, t: usize) -> Result<bool> {
    check_model(k, t)?;
    if f.k() != k {
        return Err(Error::DegreeMismatch {
            expected: 1 << k,
            found: f.len(),
        });
    }
    if !f.is_nonnegative() {
        return Ok(false);
    }
    let m = build_m(k, t)?;
    let j = build_j(n, k, t)?;
    let mf: Vec<Rational64> = m.mul_vec(f.counts());
    Ok(mf
        .iter()
        .zip(&j.values)
        .all(|(a, &b)| *a == Rational64::from_integer(b)))
}

/// Feasibility for the integer program: LP-feasible and integral.
pub fn is_ilp_feasible(f: &FrequencyVector, n: u64, k: usize, t: usize) -> Result<bool> {
    Ok(f.is_integral() && is_feasible(f, n, k, t)?)
}

/// Integer-vector feasibility without building a [`FrequencyVector`].
pub(crate) fn counts_feasible(m: &ModelMatrix, rhs: &RhsVector, counts: &[i64]) -> bool {
    counts.iter().all(|&c| c >= 0) && m.mul_vec(counts) == rhs.values
}

/// `Q = Mᵀ M`, stored as its first row since `Q[i][j] = kernel[i ^ j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramProjection {
    k: usize,
    t: usize,
    kernel: Vec<i64>,
}

impl GramProjection {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn degree(&self) -> usize {
        1 << self.k
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.kernel[i ^ j]
    }

    pub fn kernel(&self) -> &[i64] {
        &self.kernel
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let n = self.degree();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }

    pub fn trace(&self) -> i64 {
        self.kernel[0] * self.degree() as i64
    }

    /// `Q v`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.degree();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) * v[j]).sum())
            .collect()
    }

    /// `v ∈ Row(M)` iff `Q v = 2^k v`.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: v.len(),
            });
        }
        let scale = self.degree() as i64;
        Ok(self.apply(v).iter().zip(v).all(|(qv, &x)| *qv == scale * x))
    }

    /// A coordinate permutation preserves `Row(M)` iff it commutes with the
    /// projector, i.e. `Q[p(i)][p(j)] = Q[i][j]` for all `i, j`.
    pub fn preserved_by(&self, p: &Permutation) -> Result<bool> {
        let n = self.degree();
        if p.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: p.degree(),
            });
        }
        Ok((0..n).all(|i| {
            let pi = p.apply(i);
            (i + 1..n).all(|j| self.entry(pi, p.apply(j)) == self.entry(i, j))
        }))
    }

    /// Distinct values taken by `Q`, ascending.
    pub fn distinct_values(&self) -> Vec<i64> {
        let mut vals = self.kernel.clone();
        vals.sort_unstable();
        vals.dedup();
        vals
    }
}

pub fn gram_projection(k: usize, t: usize) -> Result<GramProjection> {
    let m = build_m(k, t)?;
    // first row of Mᵀ M: sum over rows of row[0] * row[d], and row[0] = +1
    let kernel = (0..m.n_cols())
        .map(|d| m.rows().iter().map(|r| r[d] as i64).sum())
        .collect();
    Ok(GramProjection { k, t, kernel })
}

pub fn rowspace_member(v: &[i64], k: usize, t: usize) -> Result<bool> {
    gram_projection(k, t)?.contains(v)
}

pub fn perm_preserves_rowspace(p: &Permutation, k: usize, t: usize) -> Result<bool> {
    gram_projection(k, t)?.preserved_by(p)
}

/// Exact coefficients of `v` in the orthogonal basis of all `2^k` interaction
/// columns: `c_l = <v, x_l> / 2^k`, indexed by label mask.
pub fn interaction_coefficients(v: &[i64], k: usize) -> Result<Vec<Rational64>> {
    check_factors(k)?;
    if v.len() != 1 << k {
        return Err(Error::DegreeMismatch {
            expected: 1 << k,
            found: v.len(),
        });
    }
    let mut c: Vec<Rational64> = v.iter().map(|&x| Rational64::from_integer(x)).collect();
    crate::factorial::walsh_transform(&mut c);
    let scale = Rational64::from_integer(1 << k);
    Ok(c.into_iter().map(|x| x / scale).collect())
}

pub(crate) fn nonzero_support(coeffs: &[Rational64]) -> Vec<(usize, Rational64)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, *c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorial::interaction_column;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn label_order() {
        let names: Vec<String> = model_labels(4, 2).iter().map(|l| l.to_string()).collect();
        assert_eq!(
            names,
            ["1", "x1", "x2", "x3", "x4", "x1,2", "x1,3", "x1,4", "x2,3", "x2,4", "x3,4"]
        );
        assert_eq!(model_labels(3, 3).last().unwrap().to_string(), "x1,2,3");
    }

    #[test]
    fn build_m_examples() {
        let m = build_m(2, 1).unwrap();
        assert_eq!(
            m.rows(),
            &[vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1]]
        );
        let m = build_m(4, 2).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (11, 16));
        let m = build_m(3, 2).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (7, 8));
        assert!(build_m(2, 3).is_err());
        assert!(build_m(2, 0).is_err());
        assert!(build_m(17, 1).is_err());
    }

    #[test]
    fn build_j_examples() {
        assert_eq!(build_j(8, 3, 2).unwrap().values, vec![8, 0, 0, 0, 0, 0, 0]);
        assert_eq!(build_j(4, 2, 1).unwrap().values, vec![4, 0, 0]);
        for k in 1..=6 {
            for t in 1..=k {
                assert_eq!(build_j(1, k, t).unwrap().values.len(), row_count(k, t));
            }
        }
        assert!(build_j(0, 2, 1).is_err());
    }

    #[test]
    fn feasibility() {
        // f* = N / 2^k everywhere
        let uniform = FrequencyVector::new(3, vec![Rational64::new(5, 8); 8]).unwrap();
        assert!(is_feasible(&uniform, 5, 3, 2).unwrap());
        assert!(!is_ilp_feasible(&uniform, 5, 3, 2).unwrap());

        let half = FrequencyVector::from_integers(3, &[1, 0, 0, 1, 0, 1, 1, 0]).unwrap();
        assert!(is_feasible(&half, 4, 3, 2).unwrap());
        assert!(is_ilp_feasible(&half, 4, 3, 2).unwrap());
        assert!(!is_feasible(&half, 4, 3, 3).unwrap());

        let neg = FrequencyVector::new_unchecked(2, vec![r(2), r(-1), r(1), r(2)]).unwrap();
        assert!(!is_feasible(&neg, 4, 2, 1).unwrap());

        assert!(is_feasible(&half, 4, 2, 1).is_err());
    }

    #[test]
    fn gram_examples() {
        let q = gram_projection(2, 1).unwrap();
        assert_eq!(
            q.to_dense(),
            vec![
                vec![3, 1, 1, -1],
                vec![1, 3, -1, 1],
                vec![1, -1, 3, 1],
                vec![-1, 1, 1, 3]
            ]
        );
        for k in 1..=5 {
            let q = gram_projection(k, k).unwrap();
            let n = 1i64 << k;
            for (i, row) in q.to_dense().iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, if i == j { n } else { 0 });
                }
            }
        }
    }

    #[test]
    fn gram_kernel_matches_dense_product() {
        for k in 1..=4 {
            for t in 1..=k {
                let m = build_m(k, t).unwrap();
                let q = gram_projection(k, t).unwrap();
                let n = m.n_cols();
                for i in 0..n {
                    for j in 0..n {
                        let dense: i64 = m.rows().iter().map(|r| (r[i] * r[j]) as i64).sum();
                        assert_eq!(q.entry(i, j), dense);
                    }
                }
                assert_eq!(q.trace(), (n * m.n_rows()) as i64);
            }
        }
    }

    #[test]
    fn rowspace_examples() {
        for row in build_m(3, 2).unwrap().rows() {
            let v: Vec<i64> = row.iter().map(|&x| x as i64).collect();
            assert!(rowspace_member(&v, 3, 2).unwrap());
        }
        let l123 = SubsetLabel::from_factors(&[1, 2, 3], 3).unwrap();
        let x123: Vec<i64> = interaction_column(3, l123).unwrap().iter().map(|&x| x as i64).collect();
        assert!(!rowspace_member(&x123, 3, 2).unwrap());
        assert!(rowspace_member(&[0; 8], 3, 2).unwrap());
        assert!(rowspace_member(&[0; 4], 3, 2).is_err());
    }

    #[test]
    fn rowspace_preservation_examples() {
        assert!(perm_preserves_rowspace(&Permutation::identity(8), 3, 2).unwrap());
        let swap01 = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        assert!(!perm_preserves_rowspace(&swap01, 3, 2).unwrap());
        assert!(perm_preserves_rowspace(&Permutation::identity(4), 3, 2).is_err());
    }

    #[test]
    fn coefficients_of_columns() {
        let l = SubsetLabel::from_factors(&[1, 3], 3).unwrap();
        let v: Vec<i64> = interaction_column(3, l).unwrap().iter().map(|&x| -(x as i64)).collect();
        let c = interaction_coefficients(&v, 3).unwrap();
        assert_eq!(nonzero_support(&c), vec![(0b101, r(-1))]);
    }
}
