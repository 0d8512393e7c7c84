//! Two-level full factorial designs, interaction columns and J-characteristics.
//!
//! Factor-level combinations are encoded as point indices in `[0, 2^k)`: bit `i`
//! holds the level of factor `i + 1`, with a clear bit meaning level `+1` and a
//! set bit meaning level `-1`. The first factor therefore varies fastest, which is
//! the row order of R's `expand.grid(c(1,-1), c(1,-1), ...)`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported factor count; point indices fit a `u32` and `2^k` vectors fit memory.
pub const MAX_FACTORS: usize = 16;

pub(crate) fn check_factors(k: usize) -> Result<()> {
    if (1..=MAX_FACTORS).contains(&k) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "factor count k={k} outside 1..={MAX_FACTORS}"
        )))
    }
}

/// Level (`+1` or `-1`) of zero-based factor `factor` at point `point`.
#[inline]
pub fn level(point: usize, factor: usize) -> i8 {
    if point >> factor & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the interaction column for `mask` at `point`: the product of the levels
/// of all factors in `mask`.
#[inline]
pub(crate) fn parity_sign(point: usize, mask: u32) -> i8 {
    if (point as u32 & mask).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A subset of factors, stored as a bitmask (bit `i` is factor `i + 1`).
///
/// The empty subset labels the all-ones column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetLabel(u32);

impl SubsetLabel {
    pub const EMPTY: SubsetLabel = SubsetLabel(0);

    pub fn new(mask: u32, k: usize) -> Result<Self> {
        check_factors(k)?;
        if (mask as u64) < 1u64 << k {
            Ok(SubsetLabel(mask))
        } else {
            Err(Error::domain(format!("label mask {mask:#b} invalid for k={k}")))
        }
    }

    /// Builds a label from one-based factor numbers.
    pub fn from_factors(factors: &[usize], k: usize) -> Result<Self> {
        check_factors(k)?;
        let mut mask = 0u32;
        for &f in factors {
            if f == 0 || f > k {
                return Err(Error::domain(format!("factor {f} outside 1..={k}")));
            }
            mask |= 1 << (f - 1);
        }
        Ok(SubsetLabel(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Number of factors in the subset.
    pub fn order(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// One-based factor numbers in ascending order.
    pub fn factors(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors().iter().map(|x| x.to_string()).collect();
        write!(f, "x{}", parts.join(","))
    }
}

/// An `N x k` array over `{+1, -1}`; rows are runs, columns are factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    n_factors: usize,
    entries: Vec<i8>,
}

/// Symbol alphabet used by the design text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelEncoding {
    /// Levels written as `1` and `-1`.
    #[default]
    PlusMinus,
    /// Levels written as `0` (for `+1`) and `1` (for `-1`).
    Binary,
}

impl Design {
    /// Builds a design from row-major entries.
    pub fn new(n_factors: usize, entries: Vec<i8>) -> Result<Self> {
        check_factors(n_factors)?;
        if entries.is_empty() || !entries.len().is_multiple_of(n_factors) {
            return Err(Error::domain(format!(
                "{} entries do not form a non-empty array with {n_factors} columns",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::domain(format!("design entry {bad} is not +1 or -1")));
        }
        Ok(Design { n_factors, entries })
    }

    pub fn from_runs(runs: &[Vec<i8>]) -> Result<Self> {
        let k = runs.first().map_or(0, Vec::len);
        if runs.iter().any(|r| r.len() != k) {
            return Err(Error::domain("runs have differing lengths"));
        }
        Design::new(k, runs.concat())
    }

    pub fn n_runs(&self) -> usize {
        self.entries.len() / self.n_factors
    }

    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    pub fn run(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n_factors..(i + 1) * self.n_factors]
    }

    pub fn runs(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n_factors)
    }

    /// Point index of run `i`.
    pub fn point_of_run(&self, i: usize) -> usize {
        self.run(i)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    /// Writes the design text format: a header line `N k` followed by one run per line.
    pub fn to_text(&self, encoding: LevelEncoding) -> String {
        let mut out = format!("{} {}\n", self.n_runs(), self.n_factors);
        for run in self.runs() {
            let cells: Vec<&str> = run
                .iter()
                .map(|&v| match (encoding, v) {
                    (LevelEncoding::PlusMinus, 1) => "1",
                    (LevelEncoding::PlusMinus, _) => "-1",
                    (LevelEncoding::Binary, 1) => "0",
                    (LevelEncoding::Binary, _) => "1",
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, encoding: LevelEncoding) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hline + 1,
                msg: format!("bad header: {e}"),
            })?;
        let [n, k] = dims[..] else {
            return Err(Error::Parse {
                line: hline + 1,
                msg: "header must be `N k`".into(),
            });
        };
        let mut entries = Vec::with_capacity(n * k);
        let mut rows = 0;
        for (idx, line) in lines {
            let before = entries.len();
            for tok in line.split_whitespace() {
                let v = match (encoding, tok) {
                    (LevelEncoding::PlusMinus, "1" | "+1") => 1,
                    (LevelEncoding::PlusMinus, "-1") => -1,
                    (LevelEncoding::Binary, "0") => 1,
                    (LevelEncoding::Binary, "1") => -1,
                    _ => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: format!("unexpected level `{tok}`"),
                        })
                    }
                };
                entries.push(v);
            }
            if entries.len() - before != k {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {k} values"),
                });
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header declares {n} runs, found {rows}"),
            });
        }
        Design::new(k, entries)
    }
}

/// The `2^k`-run full factorial, first factor varying fastest.
pub fn full_factorial(k: usize) -> Result<Design> {
    check_factors(k)?;
    let entries = (0..1usize << k)
        .flat_map(|p| (0..k).map(move |i| level(p, i)))
        .collect();
    Design::new(k, entries)
}

/// The column `x_l`: entrywise product of the main-effect columns in `l` over the
/// full factorial. The empty label gives the all-ones column.
pub fn interaction_column(k: usize, label: SubsetLabel) -> Result<Vec<i8>> {
    check_factors(k)?;
    SubsetLabel::new(label.mask(), k)?;
    Ok((0..1usize << k)
        .map(|p| parity_sign(p, label.mask()))
        .collect())
}

pub fn j_characteristic(design: &Design, label: SubsetLabel) -> i64 {
    let factors: Vec<usize> = label.factors().iter().map(|f| f - 1).collect();
    design
        .runs()
        .map(|run| factors.iter().map(|&j| run[j] as i64).product::<i64>())
        .sum()
}

/// Counts of each factor-level combination, indexed by point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencyVector {
    k: usize,
    counts: Vec<Rational64>,
}

impl FrequencyVector {
    pub fn new(k: usize, counts: Vec<Rational64>) -> Result<Self> {
        let fv = Self::new_unchecked(k, counts)?;
        if !fv.is_nonnegative() {
            return Err(Error::domain("frequency vector has a negative entry"));
        }
        Ok(fv)
    }

    /// Checks only the length; entries may be negative.
    pub(crate) fn new_unchecked(k: usize, counts: Vec<Rational64>) -> Result<Self> {
        check_factors(k)?;
        if counts.len() != 1 << k {
            return Err(Error::DegreeMismatch {
                expected: 1 << k,
                found: counts.len(),
            });
        }
        Ok(FrequencyVector { k, counts })
    }

    pub fn from_integers(k: usize, counts: &[i64]) -> Result<Self> {
        Self::new(k, counts.iter().map(|&c| Rational64::from_integer(c)).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[Rational64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.counts.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.counts.iter().all(|c| c.is_integer())
    }

    /// Integer counts, or `None` if some entry is fractional.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.counts
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn total(&self) -> Rational64 {
        self.counts.iter().sum()
    }
}

pub fn freq_from_design(design: &Design) -> FrequencyVector {
    let k = design.n_factors();
    let mut counts = vec![0i64; 1 << k];
    for i in 0..design.n_runs() {
        counts[design.point_of_run(i)] += 1;
    }
    FrequencyVector::from_integers(k, &counts).expect("counts are nonnegative")
}

/// Expands a frequency vector into runs, in ascending point order.
pub fn design_from_freq(f: &FrequencyVector) -> Result<Design> {
    let counts = f
        .to_integers()
        .ok_or_else(|| Error::domain("frequency vector has a non-integral entry"))?;
    if !f.is_nonnegative() {
        return Err(Error::domain("frequency vector has a negative entry"));
    }
    let k = f.k();
    let mut entries = Vec::new();
    for (p, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            entries.extend((0..k).map(|i| level(p, i)));
        }
    }
    if entries.is_empty() {
        return Err(Error::domain("frequency vector has no runs"));
    }
    Design::new(k, entries)
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `out[l] = sum_p data[p] * (-1)^{|p & l|}`.
pub fn walsh_transform<T>(data: &mut [T])
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let n = data.len();
    assert!(n.is_power_of_two(), "transform length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (a.clone(), b.clone());
                *a = x.clone() + y.clone();
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// All `2^k` J-characteristics of `f`, indexed by label mask.
pub fn j_vector_full(f: &FrequencyVector) -> Vec<Rational64> {
    let mut jv = f.counts().to_vec();
    walsh_transform(&mut jv);
    jv
}

/// Inverse of [`j_vector_full`]. The result may be negative or fractional when
/// `jv` is not the spectrum of a design.
pub fn freq_from_full_j(jv: &[Rational64], k: usize) -> Result<FrequencyVector> {
    check_factors(k)?;
    if jv.len() != 1 << k {
        return Err(Error::DegreeMismatch {
            expected: 1 << k,
            found: jv.len(),
        });
    }
    let mut counts = jv.to_vec();
    walsh_transform(&mut counts);
    let scale = Rational64::from_integer(1 << k);
    counts.iter_mut().for_each(|c| *c /= scale);
    FrequencyVector::new_unchecked(k, counts)
}

/// Largest `t` with `J_l = 0` for every label of size `1..=t`.
pub fn strength(design: &Design) -> usize {
    let k = design.n_factors();
    let jv = j_vector_full(&freq_from_design(design));
    let first_nonzero = jv
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, j)| !j.is_zero())
        .map(|(mask, _)| mask.count_ones() as usize)
        .min();
    match first_nonzero {
        Some(order) => order - 1,
        None => k,
    }
}
