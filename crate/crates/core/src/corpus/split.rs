//! Seeded train/dev/test splitting.
//!
//! The procedure is fixed so that a seed reproduces the same partition on
//! every platform:
//!
//! 1. Generator: SplitMix64. State `s` starts at the seed; each draw does
//!    `s += 0x9E3779B97F4A7C15` (wrapping), then `z = s`,
//!    `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
//!    `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`, and returns
//!    `z ^ (z >> 31)` (all multiplications wrapping).
//! 2. Bounded draw in `[0, r)`: Lemire's multiply-and-reject. Draw `x`, let
//!    `m = x * r` as a 128-bit product and `l` its low 64 bits. If
//!    `l < r`, compute `t = (2^64 - r) mod r` and redraw while `l < t`.
//!    The result is the high 64 bits of `m`.
//! 3. Fisher–Yates over the unit ids `0..n`: for `i` from `n - 1` down to
//!    `1`, draw `j` in `[0, i + 1)` and swap positions `i` and `j`.
//! 4. Slice the shuffled ids at `floor(n * train)` and
//!    `floor(n * (train + dev))`, computed exactly over the rational
//!    fractions.
//!
//! Each output memory lists its units in ascending original-id order and
//! is renumbered densely from zero.

use std::str::FromStr;

use super::TranslationMemory;
use crate::error::{Error, Result};

/// Deterministic SplitMix64 generator (see module docs for the exact
/// recurrence).
#[derive(Debug, Clone)]
pub struct SplitRng {
    state: u64,
}

impl SplitRng {
    pub fn new(seed: u64) -> Self {
        SplitRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, range)`. `range` must be non-zero.
    pub fn below(&mut self, range: u64) -> u64 {
        debug_assert!(range > 0);
        let mut m = u128::from(self.next_u64()) * u128::from(range);
        let mut low = m as u64;
        if low < range {
            let threshold = range.wrapping_neg() % range;
            while low < threshold {
                m = u128::from(self.next_u64()) * u128::from(range);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// A non-negative rational, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidSplit("zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    fn add(self, other: Fraction) -> Result<Fraction> {
        let den = u128::from(self.den) * u128::from(other.den);
        let num = u128::from(self.num) * u128::from(other.den) + u128::from(other.num) * u128::from(self.den);
        let g = gcd128(num, den);
        let (num, den) = (num / g, den / g);
        match (u64::try_from(num), u64::try_from(den)) {
            (Ok(n), Ok(d)) => Fraction::new(n, d),
            _ => Err(Error::InvalidSplit("fraction overflow".into())),
        }
    }

    /// `floor(n * self)`.
    pub fn floor_mul(self, n: usize) -> usize {
        (n as u128 * u128::from(self.num) / u128::from(self.den)) as usize
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Parses decimals (`0.7`), integers, or `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSplit(format!("cannot parse fraction `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return Fraction::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(bad)?;
        Fraction::new(num, den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: Fraction,
    pub dev: Fraction,
    pub test: Fraction,
    pub seed: u64,
    /// Fail instead of returning an empty split.
    pub require_nonempty: bool,
}

impl SplitSpec {
    pub fn new(train: Fraction, dev: Fraction, test: Fraction, seed: u64) -> Result<Self> {
        let spec = SplitSpec {
            train,
            dev,
            test,
            seed,
            require_nonempty: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `"0.7,0.2,0.1"`.
    pub fn parse_ratios(ratios: &str, seed: u64) -> Result<Self> {
        let parts: Vec<Fraction> = ratios
            .split(',')
            .map(str::parse)
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [a, b, c] => SplitSpec::new(*a, *b, *c, seed),
            _ => Err(Error::InvalidSplit(format!(
                "expected three comma-separated ratios, got `{ratios}`"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for f in [self.train, self.dev, self.test] {
            if f.num > f.den {
                return Err(Error::InvalidSplit(format!(
                    "fraction {}/{} exceeds 1",
                    f.num, f.den
                )));
            }
        }
        let sum = self.train.add(self.dev)?.add(self.test)?;
        if sum != (Fraction { num: 1, den: 1 }) {
            return Err(Error::InvalidSplit(format!(
                "fractions sum to {}/{}, not 1",
                sum.num, sum.den
            )));
        }
        Ok(())
    }
}

/// The three memories plus the original ids each one holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splits {
    pub train: TranslationMemory,
    pub dev: TranslationMemory,
    pub test: TranslationMemory,
    pub train_ids: Vec<u32>,
    pub dev_ids: Vec<u32>,
    pub test_ids: Vec<u32>,
}

pub fn split_corpus(tm: &TranslationMemory, spec: &SplitSpec) -> Result<Splits> {
    spec.validate()?;
    if tm.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let n = tm.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    SplitRng::new(spec.seed).shuffle(&mut order);

    let cut_train = spec.train.floor_mul(n);
    let cut_dev = spec.train.add(spec.dev)?.floor_mul(n);

    let mut parts = [
        order[..cut_train].to_vec(),
        order[cut_train..cut_dev].to_vec(),
        order[cut_dev..].to_vec(),
    ];
    if spec.require_nonempty {
        for (name, part) in ["train", "dev", "test"].iter().zip(&parts) {
            if part.is_empty() {
                return Err(Error::InvalidSplit(format!(
                    "{name} split is empty for {n} units"
                )));
            }
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    let build = |ids: &[u32]| {
        TranslationMemory::from_units(
            ids.iter().map(|&id| tm.units()[id as usize].clone()),
            tm.src_lang().clone(),
            tm.tgt_lang().clone(),
        )
    };
    let [train_ids, dev_ids, test_ids] = parts;
    Ok(Splits {
        train: build(&train_ids),
        dev: build(&dev_ids),
        test: build(&test_ids),
        train_ids,
        dev_ids,
        test_ids,
    })
}
