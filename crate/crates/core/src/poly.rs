//! Exact products of linear forms over the integers.
//!
//! The encoding polynomials are products of factors `x_j - x_i` and
//! `x_i + ... + x_j`. Two operations are provided on such products:
//! full expansion (small `k` only) and extraction of a single monomial's
//! coefficient, where intermediate monomials that can no longer reach the
//! target are discarded after every factor.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest variable count accepted by [`expand`].
pub const MAX_EXPAND_VARS: usize = 7;

/// Intermediate term counts above which factor application is sharded
/// across threads.
const PARALLEL_THRESHOLD: usize = 1 << 13;
const SHARDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("need at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("full expansion is limited to {MAX_EXPAND_VARS} variables, got {0}")]
    ExpansionTooLarge(usize),
    #[error("target has total degree {found} but the product has degree {expected}")]
    DegreeMismatch { expected: u64, found: u64 },
    #[error("expected {expected} variables, got {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("linear form is identically zero")]
    ZeroForm,
    #[error("unknown polynomial family `{0}`")]
    UnknownFamily(String),
}

/// Exponents of a monomial `x_1^{e_1} ... x_k^{e_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(k: usize) -> Self {
        ExponentVector(vec![0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A homogeneous linear form `sum_i c_i x_i` with small integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coefficients: Vec<i64>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>) -> Result<Self, PolyError> {
        if coefficients.iter().all(|&c| c == 0) {
            return Err(PolyError::ZeroForm);
        }
        Ok(LinearForm { coefficients })
    }

    /// `x_j - x_i` in `k` variables (0-based indices).
    pub fn difference(k: usize, i: usize, j: usize) -> Self {
        let mut coefficients = vec![0; k];
        coefficients[j] += 1;
        coefficients[i] -= 1;
        LinearForm::new(coefficients).expect("i != j")
    }

    /// `x_i + x_{i+1} + ... + x_j` in `k` variables (0-based, inclusive).
    pub fn interval_sum(k: usize, i: usize, j: usize) -> Self {
        let mut coefficients = vec![0; k];
        coefficients[i..=j].iter_mut().for_each(|c| *c = 1);
        LinearForm { coefficients }
    }

    pub fn variables(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (v, c))
    }

    pub fn contains(&self, var: usize) -> bool {
        self.coefficients.get(var).is_some_and(|&c| c != 0)
    }

    pub fn highest_variable(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|&c| c != 0)
            .expect("nonzero form")
    }

    /// The same form in `k >= self.variables()` variables.
    pub fn widened(&self, k: usize) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.resize(k, 0);
        LinearForm { coefficients }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.support() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}x{}", v + 1)?;
            } else {
                write!(f, "{sign}{mag}x{}", v + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// The product families used for the certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Every difference and every interval sum except `x_1 + ... + x_k`.
    /// Nonzero exactly at orderings with `s_0, ..., s_k` distinct, given a
    /// nonzero total.
    #[serde(rename = "F")]
    Alspach,
    /// Every difference, and interval sums starting at index 2.
    #[serde(rename = "f")]
    Archdeacon,
    /// Every difference and every interval sum.
    #[serde(rename = "g")]
    Full,
    /// Factors of [`Family::Full`] involving `x_k`.
    #[serde(rename = "h")]
    Layer,
    /// Differences `x_k - x_i`.
    #[serde(rename = "p")]
    LayerDifferences,
    /// Interval sums ending at `x_k`.
    #[serde(rename = "q")]
    LayerSums,
    /// [`Family::Archdeacon`] without the two-term sums `x_i + x_{i+1}`.
    #[serde(rename = "costa")]
    Costa,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Alspach,
        Family::Archdeacon,
        Family::Full,
        Family::Layer,
        Family::LayerDifferences,
        Family::LayerSums,
        Family::Costa,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Family::Alspach => "F",
            Family::Archdeacon => "f",
            Family::Full => "g",
            Family::Layer => "h",
            Family::LayerDifferences => "p",
            Family::LayerSums => "q",
            Family::Costa => "costa",
        }
    }

    /// Number of factors (= total degree) for `k` variables.
    pub fn degree(self, k: usize) -> usize {
        match self {
            Family::Alspach => k * (k - 1) - 1,
            Family::Archdeacon => (k - 1) * (k - 1),
            Family::Full => k * (k - 1),
            Family::Layer => 2 * k - 2,
            Family::LayerDifferences | Family::LayerSums => k - 1,
            Family::Costa => (k - 1) * (k - 1) - (k - 2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Family {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        Family::ALL
            .into_iter()
            .find(|f| f.token() == s)
            .ok_or_else(|| PolyError::UnknownFamily(s.to_string()))
    }
}

/// An unexpanded product of linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    k: usize,
    family: Option<Family>,
    factors: Vec<LinearForm>,
}

impl FactorList {
    pub fn build(family: Family, k: usize) -> Result<Self, PolyError> {
        if k < 2 {
            return Err(PolyError::TooFewVariables(k));
        }
        let mut factors = Vec::with_capacity(family.degree(k));
        let last = k - 1;
        match family {
            Family::Alspach | Family::Archdeacon | Family::Full | Family::Costa => {
                for i in 0..k {
                    for j in i + 1..k {
                        factors.push(LinearForm::difference(k, i, j));
                    }
                }
                for i in 0..k {
                    for j in i + 1..k {
                        let keep = match family {
                            Family::Alspach => !(i == 0 && j == last),
                            Family::Archdeacon => i >= 1,
                            Family::Costa => i >= 1 && j != i + 1,
                            _ => true,
                        };
                        if keep {
                            factors.push(LinearForm::interval_sum(k, i, j));
                        }
                    }
                }
            }
            Family::Layer | Family::LayerDifferences | Family::LayerSums => {
                if family != Family::LayerSums {
                    factors.extend((0..last).map(|i| LinearForm::difference(k, i, last)));
                }
                if family != Family::LayerDifferences {
                    factors.extend((0..last).map(|i| LinearForm::interval_sum(k, i, last)));
                }
            }
        }
        debug_assert_eq!(factors.len(), family.degree(k));
        Ok(FactorList {
            k,
            family: Some(family),
            factors,
        })
    }

    /// A product of arbitrary forms, all in `k` variables.
    pub fn from_forms(k: usize, factors: Vec<LinearForm>) -> Result<Self, PolyError> {
        if let Some(bad) = factors.iter().find(|f| f.variables() != k) {
            return Err(PolyError::VariableCount {
                expected: k,
                found: bad.variables(),
            });
        }
        Ok(FactorList {
            k,
            family: None,
            factors,
        })
    }

    pub fn variables(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn factors(&self) -> &[LinearForm] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// The same product viewed in `k >= self.variables()` variables.
    pub fn widened(&self, k: usize) -> Self {
        FactorList {
            k,
            family: None,
            factors: self.factors.iter().map(|f| f.widened(k)).collect(),
        }
    }

    /// Concatenation of two products in the same variables.
    pub fn times(&self, other: &FactorList) -> Result<Self, PolyError> {
        if other.k != self.k {
            return Err(PolyError::VariableCount {
                expected: self.k,
                found: other.k,
            });
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(FactorList {
            k: self.k,
            family: None,
            factors,
        })
    }

    /// Factors sorted by their highest variable, ascending (stable).
    fn scheduled(&self) -> Vec<&LinearForm> {
        let mut order: Vec<&LinearForm> = self.factors.iter().collect();
        order.sort_by_key(|f| f.highest_variable());
        order
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, form) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({form})")?;
        }
        Ok(())
    }
}

/// Multivariate polynomial with arbitrary-precision integer coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    k: usize,
    terms: HashMap<ExponentVector, BigInt>,
}

impl SparsePolynomial {
    pub fn zero(k: usize) -> Self {
        SparsePolynomial {
            k,
            terms: HashMap::new(),
        }
    }

    pub fn one(k: usize) -> Self {
        let mut p = SparsePolynomial::zero(k);
        p.terms.insert(ExponentVector::zero(k), BigInt::one());
        p
    }

    pub fn from_terms(
        k: usize,
        terms: impl IntoIterator<Item = (ExponentVector, BigInt)>,
    ) -> Result<Self, PolyError> {
        let mut p = SparsePolynomial::zero(k);
        for (e, c) in terms {
            if e.len() != k {
                return Err(PolyError::VariableCount {
                    expected: k,
                    found: e.len(),
                });
            }
            p.accumulate(e, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, e: ExponentVector, c: BigInt) {
        use std::collections::hash_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    pub fn variables(&self) -> usize {
        self.k
    }

    /// Number of nonzero terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    /// Total degrees present, ascending.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.terms.keys().map(ExponentVector::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous_of_degree(&self, degree: u64) -> bool {
        self.terms.keys().all(|e| e.degree() == degree)
    }

    /// The same polynomial in `k >= self.variables()` variables.
    pub fn widened(&self, k: usize) -> Self {
        assert!(k >= self.k);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = e.0.clone();
                v.resize(k, 0);
                (ExponentVector(v), c.clone())
            })
            .collect();
        SparsePolynomial { k, terms }
    }

    pub fn mul(&self, other: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        if self.k != other.k {
            return Err(PolyError::VariableCount {
                expected: self.k,
                found: other.k,
            });
        }
        let mut out = SparsePolynomial::zero(self.k);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.accumulate(ExponentVector(e), ca * cb);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let constant = e.degree() == 0;
            if !mag.is_one() || constant {
                write!(f, "{mag}")?;
            }
            let mut first = mag.is_one();
            for (v, &p) in e.0.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if p == 1 {
                    write!(f, "x{}", v + 1)?;
                } else {
                    write!(f, "x{}^{p}", v + 1)?;
                }
            }
        }
        Ok(())
    }
}

pub fn coefficient_of(poly: &SparsePolynomial, monomial: &ExponentVector) -> BigInt {
    poly.terms.get(monomial).cloned().unwrap_or_default()
}

/// Full expansion of a product. Limited to [`MAX_EXPAND_VARS`] variables.
pub fn expand(factors: &FactorList) -> Result<SparsePolynomial, PolyError> {
    let k = factors.variables();
    if k > MAX_EXPAND_VARS {
        return Err(PolyError::ExpansionTooLarge(k));
    }
    let order = factors.scheduled();
    let terms: Vec<(ExponentVector, BigInt)> = if factors.degree() <= Packed::MAX_EXPONENT as usize
    {
        multiply::<Packed>(k, &order, None)
            .into_iter()
            .map(|(m, c)| (m.to_vector(k), c))
            .collect()
    } else {
        multiply::<Wide>(k, &order, None)
            .into_iter()
            .map(|(m, c)| (m.to_vector(k), c))
            .collect()
    };
    SparsePolynomial::from_terms(k, terms)
}

/// How [`pruned_coefficient_with`] schedules factor application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorOrder {
    /// Group factors by their highest variable, in increasing order.
    #[default]
    ByHighestVariable,
    /// Apply factors in list order.
    AsGiven,
}

/// Coefficient of `target` in the expanded product.
pub fn pruned_coefficient(
    factors: &FactorList,
    target: &ExponentVector,
) -> Result<BigInt, PolyError> {
    pruned_coefficient_with(factors, target, FactorOrder::default())
}

pub fn pruned_coefficient_with(
    factors: &FactorList,
    target: &ExponentVector,
    order: FactorOrder,
) -> Result<BigInt, PolyError> {
    let k = factors.variables();
    if target.len() != k {
        return Err(PolyError::VariableCount {
            expected: k,
            found: target.len(),
        });
    }
    if target.degree() != factors.degree() as u64 {
        return Err(PolyError::DegreeMismatch {
            expected: factors.degree() as u64,
            found: target.degree(),
        });
    }
    let order = match order {
        FactorOrder::ByHighestVariable => factors.scheduled(),
        FactorOrder::AsGiven => factors.factors.iter().collect(),
    };
    let t = target.as_slice();
    let result = if k <= Packed::MAX_VARS && target.max_exponent() <= Packed::MAX_EXPONENT {
        multiply::<Packed>(k, &order, Some(t)).remove(&Packed::from_slice(t))
    } else {
        multiply::<Wide>(k, &order, Some(t)).remove(&Wide::from_slice(t))
    };
    Ok(result.unwrap_or_default())
}

/// Monomial keys used inside the multiplication loop.
trait Monomial: Clone + Eq + Hash + Send + Sync {
    fn zero(k: usize) -> Self;
    fn from_slice(e: &[u32]) -> Self;
    fn get(&self, var: usize) -> u32;
    fn bumped(&self, var: usize) -> Self;
    fn to_vector(&self, k: usize) -> ExponentVector;
}

/// Up to 16 exponents of at most 255, one byte each.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Packed(u128);

impl Packed {
    const MAX_VARS: usize = 16;
    const MAX_EXPONENT: u32 = 255;
}

impl Monomial for Packed {
    fn zero(_: usize) -> Self {
        Packed(0)
    }
    fn from_slice(e: &[u32]) -> Self {
        Packed(
            e.iter()
                .enumerate()
                .fold(0u128, |acc, (v, &x)| acc | ((x as u128) << (8 * v))),
        )
    }
    #[inline]
    fn get(&self, var: usize) -> u32 {
        ((self.0 >> (8 * var)) & 0xff) as u32
    }
    #[inline]
    fn bumped(&self, var: usize) -> Self {
        Packed(self.0 + (1u128 << (8 * var)))
    }
    fn to_vector(&self, k: usize) -> ExponentVector {
        ExponentVector((0..k).map(|v| self.get(v)).collect())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Wide(Box<[u32]>);

impl Monomial for Wide {
    fn zero(k: usize) -> Self {
        Wide(vec![0; k].into_boxed_slice())
    }
    fn from_slice(e: &[u32]) -> Self {
        Wide(e.into())
    }
    fn get(&self, var: usize) -> u32 {
        self.0[var]
    }
    fn bumped(&self, var: usize) -> Self {
        let mut e = self.0.clone();
        e[var] += 1;
        Wide(e)
    }
    fn to_vector(&self, _: usize) -> ExponentVector {
        ExponentVector(self.0.to_vec())
    }
}

type Terms<M> = FxHashMap<M, BigInt>;

/// Per-factor pruning data: the factor's support and, for each variable,
/// how many factors after this one still contain it.
struct Step<'a> {
    support: Vec<(usize, i64)>,
    target: Option<&'a [u32]>,
    remaining: Vec<u32>,
}

impl Step<'_> {
    /// Pushes every surviving product of `(m, c)` with this factor.
    #[inline]
    fn apply<M: Monomial>(&self, m: &M, c: &BigInt, mut emit: impl FnMut(M, BigInt)) {
        let mut forced = None;
        if let Some(t) = self.target {
            // A variable that can no longer reach its target even if every
            // remaining factor supplies it must be taken from this factor.
            for &(u, _) in &self.support {
                if m.get(u) + self.remaining[u] < t[u] {
                    if forced.is_some() {
                        return;
                    }
                    forced = Some(u);
                }
            }
        }
        for &(v, a) in &self.support {
            if forced.is_some_and(|u| u != v) {
                continue;
            }
            if let Some(t) = self.target {
                if m.get(v) + 1 > t[v] {
                    continue;
                }
            }
            let coef = match a {
                1 => c.clone(),
                -1 => -c,
                _ => c * a,
            };
            emit(m.bumped(v), coef);
        }
    }
}

fn add_into<M: Monomial>(map: &mut Terms<M>, m: M, c: BigInt) {
    *map.entry(m).or_default() += c;
}

fn multiply<M: Monomial>(k: usize, order: &[&LinearForm], target: Option<&[u32]>) -> Terms<M> {
    let mut remaining = vec![0u32; k];
    for f in order {
        for (v, _) in f.support() {
            remaining[v] += 1;
        }
    }
    let mut shards: Vec<Terms<M>> = vec![Terms::default()];
    if let Some(t) = target {
        if (0..k).any(|v| remaining[v] < t[v]) {
            return Terms::default();
        }
    }
    shards[0].insert(M::zero(k), BigInt::one());

    for form in order {
        let support: Vec<(usize, i64)> = form.support().collect();
        for &(v, _) in &support {
            remaining[v] -= 1;
        }
        let step = Step {
            support,
            target,
            remaining: remaining.clone(),
        };
        let size: usize = shards.iter().map(|s| s.len()).sum();
        shards = if size < PARALLEL_THRESHOLD {
            let mut next = Terms::default();
            for shard in shards {
                for (m, c) in shard {
                    step.apply(&m, &c, |m2, c2| add_into(&mut next, m2, c2));
                }
            }
            next.retain(|_, c| !c.is_zero());
            vec![next]
        } else {
            apply_sharded(shards, &step)
        };
        if shards.iter().all(|s| s.is_empty()) {
            return Terms::default();
        }
    }
    let mut out = Terms::default();
    for shard in shards {
        out.extend(shard);
    }
    out
}

fn shard_of<M: Monomial>(m: &M) -> usize {
    use std::hash::{BuildHasher, BuildHasherDefault};
    let h = BuildHasherDefault::<rustc_hash::FxHasher>::default().hash_one(m);
    (h >> 32) as usize % SHARDS
}

/// One factor application with the term set split into hash shards: each
/// input shard scatters its products into per-destination buckets, then
/// each destination shard is coalesced independently.
fn apply_sharded<M: Monomial>(shards: Vec<Terms<M>>, step: &Step<'_>) -> Vec<Terms<M>> {
    let buckets: Vec<Vec<Vec<(M, BigInt)>>> = shards
        .into_par_iter()
        .flat_map_iter(|shard| {
            let items: Vec<(M, BigInt)> = shard.into_iter().collect();
            items
                .chunks(PARALLEL_THRESHOLD / 4)
                .map(|chunk| {
                    let mut out: Vec<Vec<(M, BigInt)>> = vec![Vec::new(); SHARDS];
                    for (m, c) in chunk {
                        step.apply(m, c, |m2, c2| {
                            let s = shard_of(&m2);
                            out[s].push((m2, c2));
                        });
                    }
                    out
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut by_dest: Vec<Vec<Vec<(M, BigInt)>>> = (0..SHARDS).map(|_| Vec::new()).collect();
    for per_src in buckets {
        for (s, bucket) in per_src.into_iter().enumerate() {
            if !bucket.is_empty() {
                by_dest[s].push(bucket);
            }
        }
    }
    by_dest
        .into_par_iter()
        .map(|lists| {
            let mut map = Terms::default();
            for list in lists {
                for (m, c) in list {
                    add_into(&mut map, m, c);
                }
            }
            map.retain(|_, c| !c.is_zero());
            map
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn poly(k: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(k, terms.iter().map(|(e, c)| (ev(e), BigInt::from(*c))))
            .unwrap()
    }

    #[test]
    fn build_small_families() {
        let f2 = FactorList::build(Family::Alspach, 2).unwrap();
        assert_eq!(f2.to_string(), "(-x1+x2)");
        let f3 = FactorList::build(Family::Archdeacon, 3).unwrap();
        assert_eq!(f3.to_string(), "(-x1+x2) (-x1+x3) (-x2+x3) (x2+x3)");
        assert_eq!(FactorList::build(Family::Full, 3).unwrap().degree(), 6);
        assert_eq!(
            FactorList::build(Family::Alspach, 1),
            Err(PolyError::TooFewVariables(1))
        );
    }

    #[test]
    fn family_degrees_match_factor_counts() {
        for k in 2..=9 {
            for fam in Family::ALL {
                let fl = FactorList::build(fam, k).unwrap();
                assert_eq!(fl.degree(), fam.degree(k), "{fam} k={k}");
            }
        }
    }

    #[test]
    fn costa_drops_adjacent_pair_sums() {
        let c = FactorList::build(Family::Costa, 4).unwrap();
        assert!(c
            .factors()
            .iter()
            .all(
                |f| f.coefficients().iter().filter(|&&x| x == 1).count() != 2
                    || f.coefficients().contains(&-1)
            ));
        assert_eq!(c.degree(), 9 - 2);
    }

    #[test]
    fn expand_examples() {
        let f2 = expand(&FactorList::build(Family::Archdeacon, 2).unwrap()).unwrap();
        assert_eq!(f2, poly(2, &[(&[0, 1], 1), (&[1, 0], -1)]));
        let big_f2 = expand(&FactorList::build(Family::Alspach, 2).unwrap()).unwrap();
        assert_eq!(big_f2, f2);
        let g2 = expand(&FactorList::build(Family::Full, 2).unwrap()).unwrap();
        assert_eq!(g2, poly(2, &[(&[0, 2], 1), (&[2, 0], -1)]));
        assert_eq!(g2.to_string(), "-x1^2 + x2^2");
        assert_eq!(
            expand(&FactorList::build(Family::Full, 8).unwrap()),
            Err(PolyError::ExpansionTooLarge(8))
        );
    }

    #[test]
    fn coefficient_lookup() {
        let p = poly(2, &[(&[0, 1], 1), (&[1, 0], -1)]);
        assert_eq!(coefficient_of(&p, &ev(&[1, 0])), BigInt::from(-1));
        assert_eq!(coefficient_of(&p, &ev(&[0, 1])), BigInt::from(1));
        let g = poly(2, &[(&[0, 2], 1), (&[2, 0], -1)]);
        assert_eq!(coefficient_of(&g, &ev(&[1, 1])), BigInt::zero());
    }

    #[test]
    fn pruned_examples() {
        let f = FactorList::build(Family::Alspach, 2).unwrap();
        assert_eq!(
            pruned_coefficient(&f, &ev(&[0, 1])).unwrap(),
            BigInt::from(1)
        );
        let f = FactorList::build(Family::Archdeacon, 3).unwrap();
        assert_eq!(
            pruned_coefficient(&f, &ev(&[2, 0, 2])).unwrap(),
            BigInt::from(1)
        );
        let g = FactorList::build(Family::Full, 3).unwrap();
        assert_eq!(
            pruned_coefficient(&g, &ev(&[0, 2, 4])).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn pruned_rejects_bad_targets() {
        let g = FactorList::build(Family::Full, 3).unwrap();
        assert_eq!(
            pruned_coefficient(&g, &ev(&[0, 2, 3])),
            Err(PolyError::DegreeMismatch {
                expected: 6,
                found: 5
            })
        );
        assert!(matches!(
            pruned_coefficient(&g, &ev(&[2, 4])),
            Err(PolyError::VariableCount { .. })
        ));
    }

    #[test]
    fn unreachable_target_is_zero() {
        // x_3 appears in only 4 factors of g_3.
        let g = FactorList::build(Family::Full, 3).unwrap();
        assert!(pruned_coefficient(&g, &ev(&[0, 1, 5])).unwrap().is_zero());
    }

    #[test]
    fn packed_and_wide_keys_agree() {
        let e = [3u32, 0, 255, 17];
        let p = Packed::from_slice(&e);
        let w = Wide::from_slice(&e);
        for v in 0..4 {
            assert_eq!(p.get(v), w.get(v));
            assert_eq!(p.bumped(1).get(v), w.bumped(1).get(v));
        }
    }

    #[test]
    fn wide_path_matches_packed_path() {
        let fl = FactorList::build(Family::Full, 5).unwrap();
        let order = fl.scheduled();
        let target = [0u32, 2, 4, 7, 7];
        let a = multiply::<Packed>(5, &order, Some(&target)).remove(&Packed::from_slice(&target));
        let b = multiply::<Wide>(5, &order, Some(&target)).remove(&Wide::from_slice(&target));
        assert_eq!(a, b);
    }

    #[test]
    fn family_tokens_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.token().parse::<Family>().unwrap(), f);
        }
        assert!("G".parse::<Family>().is_err());
    }
}
