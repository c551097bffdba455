//! Arithmetic in the cyclic group `Z_n`: elements, sequences of distinct
//! nonzero elements, their partial sums, and the distinctness checks used by
//! the three ordering conjectures.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u64),
    #[error("element {value} is not reduced modulo {modulus}")]
    Unreduced { value: u64, modulus: u64 },
    #[error("sequence contains 0")]
    ZeroEntry,
    #[error("sequence repeats {0}")]
    Repeated(u64),
}

/// An element of `Z_n`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicElement {
    value: u64,
    modulus: u64,
}

impl CyclicElement {
    pub fn new(value: u64, modulus: u64) -> Result<Self, GroupError> {
        if modulus < 2 {
            return Err(GroupError::Modulus(modulus));
        }
        if value >= modulus {
            return Err(GroupError::Unreduced { value, modulus });
        }
        Ok(CyclicElement { value, modulus })
    }

    /// Reduces an arbitrary signed integer into `Z_n`.
    pub fn reduce(value: i64, modulus: u64) -> Result<Self, GroupError> {
        if modulus < 2 {
            return Err(GroupError::Modulus(modulus));
        }
        let value = value.rem_euclid(modulus as i64) as u64;
        Ok(CyclicElement { value, modulus })
    }

    pub fn zero(modulus: u64) -> Self {
        CyclicElement { value: 0, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// True for nonzero elements sharing a factor with the modulus.
    pub fn is_zero_divisor(self) -> bool {
        self.value != 0 && self.value.gcd(&self.modulus) > 1
    }

    pub fn is_unit(self) -> bool {
        self.value.gcd(&self.modulus) == 1
    }

    pub fn inverse(self) -> Option<Self> {
        let egcd = (self.value as i64).extended_gcd(&(self.modulus as i64));
        (egcd.gcd == 1).then(|| CyclicElement {
            value: egcd.x.rem_euclid(self.modulus as i64) as u64,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for CyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for CyclicElement {
    type Output = CyclicElement;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        CyclicElement {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for CyclicElement {
    type Output = CyclicElement;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CyclicElement {
    type Output = CyclicElement;
    fn neg(self) -> Self {
        CyclicElement {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for CyclicElement {
    type Output = CyclicElement;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        CyclicElement {
            value: value as u64,
            modulus: self.modulus,
        }
    }
}

/// An ordering of distinct nonzero elements of `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    modulus: u64,
    entries: Vec<u64>,
}

impl Sequence {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Result<Self, GroupError> {
        if modulus < 2 {
            return Err(GroupError::Modulus(modulus));
        }
        let mut seen = vec![false; modulus as usize];
        for &value in &entries {
            if value >= modulus {
                return Err(GroupError::Unreduced { value, modulus });
            }
            if value == 0 {
                return Err(GroupError::ZeroEntry);
            }
            if std::mem::replace(&mut seen[value as usize], true) {
                return Err(GroupError::Repeated(value));
            }
        }
        Ok(Sequence { modulus, entries })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = CyclicElement> + '_ {
        self.entries.iter().map(|&value| CyclicElement {
            value,
            modulus: self.modulus,
        })
    }

    /// Multiplies every entry by `factor`, which must be a unit.
    pub fn scaled(&self, factor: u64) -> Result<Self, GroupError> {
        let factor = factor % self.modulus;
        let entries = self
            .entries
            .iter()
            .map(|&e| ((e as u128 * factor as u128) % self.modulus as u128) as u64)
            .collect();
        Sequence::new(self.modulus, entries)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `s_0 = 0` followed by the running sums of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSumProfile {
    pub modulus: u64,
    pub sums: Vec<u64>,
}

impl PartialSumProfile {
    /// Entry `j` of the generating sequence, recovered as `s_j - s_{j-1}`.
    pub fn step(&self, j: usize) -> u64 {
        (self.sums[j] + self.modulus - self.sums[j - 1]) % self.modulus
    }
}

pub fn partial_sums(seq: &Sequence) -> PartialSumProfile {
    PartialSumProfile {
        modulus: seq.modulus,
        sums: running_sums(seq.modulus, &seq.entries),
    }
}

fn running_sums(modulus: u64, entries: &[u64]) -> Vec<u64> {
    let mut sums = Vec::with_capacity(entries.len() + 1);
    let mut acc = 0u64;
    sums.push(0);
    for &e in entries {
        acc = (acc + e % modulus) % modulus;
        sums.push(acc);
    }
    sums
}

/// Which pairs of partial sums must be distinct, together with the
/// hypotheses placed on the underlying set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `s_0, ..., s_k` distinct; the full sum must be nonzero.
    Alspach,
    /// `s_1, ..., s_k` distinct.
    Archdeacon,
    /// As `Archdeacon`, for sets containing no pair `{x, -x}`.
    Costa,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Alspach, Variant::Archdeacon, Variant::Costa];

    /// Index of the first partial sum taking part in the distinctness check.
    pub fn first_checked_sum(self) -> usize {
        match self {
            Variant::Alspach => 0,
            Variant::Archdeacon | Variant::Costa => 1,
        }
    }

    /// Checks the set-level hypothesis of the variant for a full ordering of
    /// `set`. Returns a description of the violated hypothesis.
    pub fn set_hypothesis(self, modulus: u64, set: &[u64]) -> Result<(), String> {
        match self {
            Variant::Alspach => {
                let total = set.iter().fold(0u64, |acc, &x| (acc + x) % modulus);
                if total == 0 {
                    return Err("sum of the set is 0".into());
                }
            }
            Variant::Archdeacon => {}
            Variant::Costa => {
                let mut present = vec![false; modulus as usize];
                for &x in set {
                    present[(x % modulus) as usize] = true;
                }
                for &x in set {
                    let neg = (modulus - x % modulus) % modulus;
                    if present[neg as usize] {
                        return Err(format!("set contains {{x, -x}} with x = {x}"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Alspach => "alspach",
            Variant::Archdeacon => "archdeacon",
            Variant::Costa => "costa",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "alspach" => Ok(Variant::Alspach),
            "archdeacon" => Ok(Variant::Archdeacon),
            "costa" => Ok(Variant::Costa),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// Outcome of checking one ordering against a variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub modulus: u64,
    pub variant: Variant,
    pub entries: Vec<u64>,
    pub partial_sums: Vec<u64>,
    pub valid: bool,
    /// Index pairs `(i, j)`, `i < j`, with `s_i = s_j`.
    pub violations: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub fn check_ordering(seq: &Sequence, variant: Variant) -> OrderingReport {
    check_entries(seq.modulus, &seq.entries, variant)
}

/// Like [`check_ordering`] for unvalidated input; malformed sequences give
/// an invalid report with a reason instead of an error.
pub fn check_entries(modulus: u64, entries: &[u64], variant: Variant) -> OrderingReport {
    let mut report = OrderingReport {
        modulus,
        variant,
        entries: entries.to_vec(),
        partial_sums: Vec::new(),
        valid: false,
        violations: Vec::new(),
        reason: None,
    };
    if let Err(e) = Sequence::new(modulus, entries.to_vec()) {
        report.reason = Some(e.to_string());
        return report;
    }
    let sums = running_sums(modulus, entries);
    let first = variant.first_checked_sum();
    for j in first..sums.len() {
        for i in first..j {
            if sums[i] == sums[j] {
                report.violations.push((i, j));
            }
        }
    }
    report.partial_sums = sums;
    report.valid = report.violations.is_empty();
    if !report.valid {
        let (i, j) = report.violations[0];
        report.reason = Some(format!("s_{i} = s_{j}"));
    }
    report
}

/// True iff no two distinct elements of `set` differ by a zero-divisor.
pub fn condition_d(set: &[u64], modulus: u64) -> bool {
    let mut values: Vec<u64> = set.iter().map(|x| x % modulus).collect();
    values.sort_unstable();
    values.dedup();
    values.iter().enumerate().all(|(idx, &a)| {
        values[idx + 1..]
            .iter()
            .all(|&b| (b - a).gcd(&modulus) == 1)
    })
}

/// Smallest prime factor of `n`: the largest size of a Condition-D set in `Z_n`.
pub fn max_condition_d_size(n: u64) -> u64 {
    assert!(n >= 2, "modulus must be at least 2");
    smallest_prime_factor(n)
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 2;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}
