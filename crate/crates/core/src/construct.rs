//! Explicit orderings from graceful permutations.
//!
//! A graceful permutation of `1..=r` folds into a directed rotational
//! terrace of `Z_{2r+1}`; the terrace's difference sequence (a rotational
//! sequencing) lists every nonzero element, and any run of consecutive
//! entries of it has distinct nonzero partial sums. Dropping one or two
//! adjacent entries therefore orders `Z_n` minus those elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{check_ordering, is_prime, CyclicElement, GroupError, Sequence, Variant};

/// Pairs `(d, r)` for which no graceful permutation of length `r` has first
/// absolute difference `d`.
pub const IMPOSSIBLE_FIRST_DIFFERENCES: [(usize, usize); 3] = [(2, 4), (2, 5), (2, 8)];

/// Explicit permutations for first differences not reached by the general
/// constructions, keyed by `(d, r)`.
pub const SPORADIC_PERMUTATIONS: [(usize, usize, &[usize]); 14] = [
    (2, 7, &[4, 6, 1, 7, 3, 2, 5]),
    (2, 10, &[6, 8, 1, 10, 2, 7, 4, 5, 9, 3]),
    (3, 8, &[4, 1, 8, 2, 7, 3, 5, 6]),
    (3, 11, &[4, 7, 1, 11, 2, 10, 3, 8, 6, 5, 9]),
    (4, 10, &[5, 1, 10, 2, 9, 3, 8, 6, 7, 4]),
    (4, 11, &[5, 1, 11, 2, 10, 3, 9, 4, 7, 6, 8]),
    (4, 14, &[5, 9, 1, 14, 2, 13, 3, 12, 6, 11, 4, 7, 8, 10]),
    (5, 13, &[6, 1, 13, 2, 12, 3, 11, 4, 10, 7, 5, 9, 8]),
    (5, 14, &[6, 1, 14, 2, 13, 3, 12, 4, 11, 5, 9, 8, 10, 7]),
    (
        5,
        17,
        &[5, 10, 1, 17, 2, 16, 3, 15, 4, 14, 6, 13, 7, 8, 12, 9, 11],
    ),
    (
        6,
        16,
        &[7, 1, 16, 2, 15, 3, 14, 4, 13, 5, 12, 8, 10, 9, 6, 11],
    ),
    (
        7,
        19,
        &[
            8, 1, 19, 2, 18, 3, 17, 4, 16, 5, 15, 6, 14, 9, 13, 7, 10, 12, 11,
        ],
    ),
    (
        8,
        22,
        &[
            9, 1, 22, 2, 21, 3, 20, 4, 19, 5, 18, 6, 17, 7, 16, 10, 15, 8, 12, 13, 11, 14,
        ],
    ),
    (
        9,
        25,
        &[
            10, 1, 25, 2, 24, 3, 23, 4, 22, 5, 21, 6, 20, 7, 19, 8, 18, 11, 15, 9, 17, 12, 13, 16,
            14,
        ],
    ),
];

/// Node limit for a single backtracking search.
const SEARCH_NODE_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("{0:?} is not a permutation of 1..=r")]
    NotPermutation(Vec<usize>),
    #[error("{0:?} repeats an absolute difference")]
    NotGraceful(Vec<usize>),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("no graceful permutation of length {r} has first absolute difference {d}")]
    Impossible { d: usize, r: usize },
    #[error("no graceful permutation found: {0}")]
    NotFound(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid terrace: {0}")]
    Terrace(String),
    #[error("construction failed validation: {0}")]
    Internal(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// True iff `entries` is a permutation of `1..=r` with pairwise distinct
/// absolute differences between neighbours.
pub fn is_graceful(entries: &[usize]) -> bool {
    let r = entries.len();
    let mut seen = vec![false; r + 1];
    for &x in entries {
        if x == 0 || x > r || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    let mut diff_seen = vec![false; r];
    entries
        .windows(2)
        .all(|w| !std::mem::replace(&mut diff_seen[w[0].abs_diff(w[1])], true))
}

/// A permutation of `1..=r` whose neighbouring absolute differences are
/// exactly `1..r-1`, each once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GracefulPermutation {
    entries: Vec<usize>,
}

impl GracefulPermutation {
    pub fn new(entries: Vec<usize>) -> Result<Self, ConstructError> {
        let r = entries.len();
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if r == 0 || sorted.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return Err(ConstructError::NotPermutation(entries));
        }
        if !is_graceful(&entries) {
            return Err(ConstructError::NotGraceful(entries));
        }
        Ok(GracefulPermutation { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn first(&self) -> usize {
        self.entries[0]
    }

    pub fn last(&self) -> usize {
        self.entries[self.entries.len() - 1]
    }

    pub fn differences(&self) -> Vec<usize> {
        self.entries
            .windows(2)
            .map(|w| w[0].abs_diff(w[1]))
            .collect()
    }

    pub fn first_difference(&self) -> Option<usize> {
        (self.len() >= 2).then(|| self.entries[0].abs_diff(self.entries[1]))
    }

    pub fn reversed(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        GracefulPermutation { entries }
    }
}

impl TryFrom<Vec<usize>> for GracefulPermutation {
    type Error = ConstructError;
    fn try_from(v: Vec<usize>) -> Result<Self, ConstructError> {
        GracefulPermutation::new(v)
    }
}

impl From<GracefulPermutation> for Vec<usize> {
    fn from(p: GracefulPermutation) -> Vec<usize> {
        p.entries
    }
}

impl fmt::Display for GracefulPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every constructor validates before returning; a failure here is a bug in
/// the construction, not a user error.
fn validated(entries: Vec<usize>, what: &str) -> Result<GracefulPermutation, ConstructError> {
    GracefulPermutation::new(entries).map_err(|e| ConstructError::Internal(format!("{what}: {e}")))
}

/// `(1, r, 2, r-1, ...)`.
pub fn walecki(r: usize) -> GracefulPermutation {
    assert!(r >= 1, "length must be positive");
    let entries = (0..r)
        .map(|i| if i % 2 == 0 { i / 2 + 1 } else { r - i / 2 })
        .collect();
    GracefulPermutation { entries }
}

/// Entry-wise reflection `x -> r + 1 - x`.
pub fn complement(p: &GracefulPermutation) -> GracefulPermutation {
    let r = p.len();
    GracefulPermutation {
        entries: p.entries.iter().map(|&x| r + 1 - x).collect(),
    }
}

/// Walecki with successive 3-blocks reversed, finished by a tail fixed by
/// `r mod 6`.
pub fn three_twizzler(r: usize) -> Result<GracefulPermutation, ConstructError> {
    if r < 3 {
        return Err(ConstructError::Range(format!(
            "3-twizzler needs r >= 3, got {r}"
        )));
    }
    let w = walecki(r);
    let tail: Vec<usize> = match r % 6 {
        0 | 3 => vec![],
        1 => vec![(r + 3) / 2, r.div_ceil(2), (r + 5) / 2, (r - 1) / 2],
        2 => vec![(r + 2) / 2, r / 2],
        4 => vec![r / 2, (r + 2) / 2, (r - 2) / 2, (r + 4) / 2],
        5 => vec![r.div_ceil(2), (r + 3) / 2],
        _ => unreachable!(),
    };
    let prefix = r - tail.len();
    let mut entries: Vec<usize> = w.entries[..prefix]
        .chunks(3)
        .flat_map(|c| c.iter().rev().copied())
        .collect();
    entries.extend(tail);
    validated(entries, "3-twizzler")
}

/// Reverse of the first `r-d+1` Walecki entries, then a shifted graceful
/// permutation of length `d-1`. Absolute differences start `d, d+1, ..., r-1`.
pub fn imperfect_twizzler(d: usize, r: usize) -> Result<GracefulPermutation, ConstructError> {
    let third = r.div_ceil(3);
    if !(third < d && d < r) {
        return Err(ConstructError::Range(format!(
            "imperfect twizzler needs ceil(r/3) < d < r, got d = {d}, r = {r}"
        )));
    }
    let head_len = r - d + 1;
    let shift = head_len.div_ceil(2);
    let mut entries: Vec<usize> = walecki(r).entries[..head_len]
        .iter()
        .rev()
        .copied()
        .collect();
    let inner = graceful_with_first_element(d - shift, d - 1)?;
    entries.extend(inner.entries.iter().map(|&x| x + shift));
    validated(entries, "imperfect twizzler")
}

/// Depth-first search for a graceful permutation extending `prefix`,
/// placing the largest unused difference first. With `split = Some(t)`
/// positions alternate between values above `t` and values at most `t`,
/// starting above.
struct Search {
    len: usize,
    split: Option<usize>,
    last: Option<usize>,
    used: Vec<bool>,
    used_diff: Vec<bool>,
    path: Vec<usize>,
    nodes: u64,
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    LimitHit,
}

impl Search {
    fn run(len: usize, prefix: &[usize], split: Option<usize>) -> Outcome {
        Search::run_ending(len, prefix, split, None)
    }

    /// As `run`, with the final entry fixed to `last`.
    fn run_ending(
        len: usize,
        prefix: &[usize],
        split: Option<usize>,
        last: Option<usize>,
    ) -> Outcome {
        let mut s = Search {
            len,
            split,
            last,
            used: vec![false; len + 1],
            used_diff: vec![false; len.max(1)],
            path: Vec::with_capacity(len),
            nodes: 0,
        };
        for (pos, &x) in prefix.iter().enumerate() {
            if x == 0 || x > len || s.used[x] || !s.allowed(pos, x) {
                return Outcome::Exhausted;
            }
            if let Some(&prev) = s.path.last() {
                let dd = prev.abs_diff(x);
                if s.used_diff[dd] {
                    return Outcome::Exhausted;
                }
                s.used_diff[dd] = true;
            }
            s.used[x] = true;
            s.path.push(x);
        }
        if !s.feasible() {
            return Outcome::Exhausted;
        }
        match s.extend() {
            Some(true) => Outcome::Found(s.path),
            Some(false) => Outcome::Exhausted,
            None => Outcome::LimitHit,
        }
    }

    fn allowed(&self, pos: usize, v: usize) -> bool {
        if let Some(last) = self.last {
            if (v == last) != (pos + 1 == self.len) {
                return false;
            }
        }
        match self.split {
            None => true,
            Some(t) if pos.is_multiple_of(2) => v > t,
            Some(t) => v <= t,
        }
    }

    fn available(&self, v: usize) -> bool {
        !self.used[v] || Some(&v) == self.path.last()
    }

    /// Every unused difference still has a pair of available values at that
    /// distance.
    fn feasible(&self) -> bool {
        (1..self.len)
            .rev()
            .filter(|&d| !self.used_diff[d])
            .all(|d| {
                (1..=self.len - d).any(|a| {
                    self.available(a)
                        && self.available(a + d)
                        && self.split.is_none_or(|t| a <= t && t < a + d)
                })
            })
    }

    fn extend(&mut self) -> Option<bool> {
        if self.path.len() == self.len {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_LIMIT {
            return None;
        }
        let cur = *self.path.last().expect("nonempty prefix");
        let pos = self.path.len();
        for delta in (1..self.len).rev() {
            if self.used_diff[delta] {
                continue;
            }
            let up = cur + delta;
            let down = cur.checked_sub(delta);
            for cand in [Some(up), down].into_iter().flatten() {
                if cand == 0 || cand > self.len || self.used[cand] || !self.allowed(pos, cand) {
                    continue;
                }
                self.used[cand] = true;
                self.used_diff[delta] = true;
                self.path.push(cand);
                if self.feasible() && self.extend()? {
                    return Some(true);
                }
                self.path.pop();
                self.used_diff[delta] = false;
                self.used[cand] = false;
            }
        }
        Some(false)
    }
}

fn first_element_cache() -> &'static RwLock<HashMap<(usize, usize), GracefulPermutation>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), GracefulPermutation>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// A graceful permutation of length `len` beginning with `first`, found by
/// memoized search.
pub fn graceful_with_first_element(
    first: usize,
    len: usize,
) -> Result<GracefulPermutation, ConstructError> {
    if first == 0 || first > len {
        return Err(ConstructError::Range(format!(
            "first element {first} outside 1..={len}"
        )));
    }
    if let Some(p) = first_element_cache().read().unwrap().get(&(first, len)) {
        return Ok(p.clone());
    }
    let found = match Search::run(len, &[first], None) {
        Outcome::Found(v) => validated(v, "first-element search")?,
        Outcome::Exhausted => {
            return Err(ConstructError::NotFound(format!(
                "length {len} starting with {first}"
            )))
        }
        Outcome::LimitHit => {
            return Err(ConstructError::NotFound(format!(
                "search limit reached for length {len} starting with {first}"
            )))
        }
    };
    first_element_cache()
        .write()
        .unwrap()
        .insert((first, len), found.clone());
    Ok(found)
}

/// Appends a length-`2t` block to `gamma` so the absolute differences of the
/// result begin with those of `gamma`. Needs `1 <= last(gamma) <= t`.
pub fn ak90_extend(
    gamma: &GracefulPermutation,
    t: usize,
) -> Result<GracefulPermutation, ConstructError> {
    let last = gamma.last();
    if t == 0 || last > t {
        return Err(ConstructError::Range(format!(
            "extension needs 1 <= last = {last} <= t = {t}"
        )));
    }
    let alpha = alternating_block(t, last);
    let entries = splice(&gamma.entries, &alpha, t);
    validated(entries, "extension")
}

/// `gamma + t` followed by `alpha` with the entries at odd positions raised
/// by `len(gamma)`.
fn splice(gamma: &[usize], alpha: &[usize], t: usize) -> Vec<usize> {
    let ell = gamma.len();
    let mut entries: Vec<usize> = gamma.iter().map(|&g| g + t).collect();
    for (i, &a) in alpha.iter().enumerate() {
        entries.push(if i % 2 == 0 { a + ell } else { a });
    }
    entries
}

/// Reverse, then `x -> len + 1 - x`. Preserves gracefulness and the
/// alternation of an even-length block.
fn reflect(entries: &[usize]) -> Vec<usize> {
    let n = entries.len();
    entries.iter().rev().map(|&x| n + 1 - x).collect()
}

/// `(2t, 1, 2t-1, 2, ..., t+1, t)`.
fn zigzag(t: usize) -> Vec<usize> {
    complement(&walecki(2 * t)).entries
}

/// Graceful permutation of `1..=2t` starting at `t + s` whose odd positions
/// hold the values above `t`; it ends at a value at most `t`.
///
/// Built by recursion on `t`, using that splicing and reflecting keep the
/// alternation:
/// - `s = t`: the zigzag.
/// - `2s <= t`: the zigzag of half-length `s` spliced with a block for
///   `(t - s, s)`.
/// - `2s >= t + 2`: reflect a block for `(s - 1, 2s - t - 1)` (it then ends
///   at `t + 1 - s`), splice with the zigzag of half-length `t + 1 - s`,
///   and reflect again.
/// - `2s = t + 1`: an inward spiral on the middle values followed by an
///   outward zigzag on the rest.
fn alternating_block(t: usize, s: usize) -> Vec<usize> {
    debug_assert!(1 <= s && s <= t);
    if s == t {
        zigzag(t)
    } else if 2 * s <= t {
        splice(&zigzag(s), &alternating_block(t - s, s), t - s)
    } else if 2 * s >= t + 2 {
        let head = reflect(&alternating_block(s - 1, 2 * s - t - 1));
        let tail = t + 1 - s;
        reflect(&splice(&head, &zigzag(tail), tail))
    } else {
        let m = s;
        let inner = (0..2 * m - 1).map(|i| {
            if i % 2 == 0 {
                3 * m - 1 - i / 2
            } else {
                m + 1 + i / 2
            }
        });
        let outer = (0..2 * m - 1).map(|i| {
            if i % 2 == 0 {
                i / 2 + 1
            } else {
                4 * m - 2 - i / 2
            }
        });
        inner.chain(outer).collect()
    }
}

/// Graceful permutation of length `3d` with first absolute difference `d`.
pub fn r_eq_3d(d: usize) -> GracefulPermutation {
    assert!(d >= 1, "d must be positive");
    let mut entries = vec![d + 1];
    for i in 1..=d {
        entries.push(i);
        entries.push(3 * d + 1 - i);
    }
    let (mut lo, mut hi) = (d + 2, 2 * d);
    let mut take_low = true;
    while lo <= hi {
        if take_low {
            entries.push(lo);
            lo += 1;
        } else {
            entries.push(hi);
            hi -= 1;
        }
        take_low = !take_low;
    }
    validated(entries, "r = 3d").expect("r = 3d construction is graceful")
}

/// Which construction produced a permutation with a prescribed first difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    ReversedWalecki,
    ExtendedWalecki,
    ExtendedTwizzler,
    ImperfectTwizzler,
    TripleLength,
    ReversedTwizzler,
    Table,
    Search,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::ReversedWalecki => "reversed-walecki",
            Branch::ExtendedWalecki => "extended-walecki",
            Branch::ExtendedTwizzler => "extended-twizzler",
            Branch::ImperfectTwizzler => "imperfect-twizzler",
            Branch::TripleLength => "triple-length",
            Branch::ReversedTwizzler => "reversed-twizzler",
            Branch::Table => "table",
            Branch::Search => "search",
        })
    }
}

pub fn sporadic_lookup(d: usize, r: usize) -> Option<GracefulPermutation> {
    SPORADIC_PERMUTATIONS
        .iter()
        .find(|(td, tr, _)| *td == d && *tr == r)
        .map(|(_, _, p)| GracefulPermutation::new(p.to_vec()).expect("table rows are graceful"))
}

/// A graceful permutation of length `r` whose first absolute difference is
/// `d`, together with the branch that produced it.
pub fn graceful_with_first_diff(
    d: usize,
    r: usize,
) -> Result<(GracefulPermutation, Branch), ConstructError> {
    if !(1 <= d && d < r) {
        return Err(ConstructError::Range(format!(
            "need 1 <= d < r, got d = {d}, r = {r}"
        )));
    }
    if IMPOSSIBLE_FIRST_DIFFERENCES.contains(&(d, r)) {
        return Err(ConstructError::Impossible { d, r });
    }
    let accept =
        |p: GracefulPermutation, b: Branch| (p.first_difference() == Some(d)).then_some((p, b));

    if d == 1 {
        if let Some(hit) = accept(walecki(r).reversed(), Branch::ReversedWalecki) {
            return Ok(hit);
        }
    }
    if (r - d) % 2 == 1 && 2 * d + 4 < r {
        let ell = d + 1;
        if let Ok(p) = ak90_extend(&walecki(ell), (r - d - 1) / 2) {
            if let Some(hit) = accept(p, Branch::ExtendedWalecki) {
                return Ok(hit);
            }
        }
    }
    if (r - d).is_multiple_of(2) && 2 * d + 8 <= r {
        // A length-4 core cannot start with difference 2, so d = 2 uses the
        // reversed length-6 twizzler, which does.
        let core = if d == 2 {
            three_twizzler(6).map(|p| p.reversed())
        } else {
            three_twizzler(d + 2)
        };
        if let Ok(core) = core {
            let t = (r - core.len()) / 2;
            if let Ok(p) = ak90_extend(&core, t) {
                if let Some(hit) = accept(p, Branch::ExtendedTwizzler) {
                    return Ok(hit);
                }
            }
        }
    }
    if d > r.div_ceil(3) {
        if let Ok(p) = imperfect_twizzler(d, r) {
            if let Some(hit) = accept(p, Branch::ImperfectTwizzler) {
                return Ok(hit);
            }
        }
    }
    if r == 3 * d {
        if let Some(hit) = accept(r_eq_3d(d), Branch::TripleLength) {
            return Ok(hit);
        }
    }
    if r >= 3 {
        if let Ok(p) = three_twizzler(r) {
            if let Some(hit) = accept(p.reversed(), Branch::ReversedTwizzler) {
                return Ok(hit);
            }
        }
    }
    if let Some(p) = sporadic_lookup(d, r) {
        return Ok((p, Branch::Table));
    }
    search_first_diff(d, r).map(|p| (p, Branch::Search))
}

fn search_first_diff(d: usize, r: usize) -> Result<GracefulPermutation, ConstructError> {
    let mut limited = false;
    for first in 1..=r {
        if first + d > r {
            break;
        }
        match Search::run(r, &[first, first + d], None) {
            Outcome::Found(v) => return validated(v, "first-difference search"),
            Outcome::Exhausted => {}
            Outcome::LimitHit => limited = true,
        }
    }
    // Reflection covers prefixes (first + d, first).
    if limited {
        Err(ConstructError::NotFound(format!(
            "search limit reached for d = {d}, r = {r}"
        )))
    } else {
        Err(ConstructError::Impossible { d, r })
    }
}

/// Cyclic arrangement of the nonzero elements of `Z_n` with pairwise
/// distinct cyclic differences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationalTerrace {
    modulus: u64,
    entries: Vec<u64>,
}

fn cyclic_differences(modulus: u64, entries: &[u64]) -> Vec<u64> {
    let len = entries.len();
    (0..len)
        .map(|i| (entries[(i + 1) % len] + modulus - entries[i]) % modulus)
        .collect()
}

fn is_nonzero_permutation(modulus: u64, entries: &[u64]) -> bool {
    if entries.len() as u64 != modulus - 1 {
        return false;
    }
    let mut seen = vec![false; modulus as usize];
    entries
        .iter()
        .all(|&x| x != 0 && x < modulus && !std::mem::replace(&mut seen[x as usize], true))
}

impl RotationalTerrace {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Result<Self, ConstructError> {
        if modulus < 3 {
            return Err(ConstructError::Terrace(format!(
                "modulus {modulus} too small"
            )));
        }
        if !is_nonzero_permutation(modulus, &entries) {
            return Err(ConstructError::Terrace(
                "entries are not the nonzero residues".into(),
            ));
        }
        let diffs = cyclic_differences(modulus, &entries);
        if !is_nonzero_permutation(modulus, &diffs) {
            return Err(ConstructError::Terrace("cyclic differences repeat".into()));
        }
        Ok(RotationalTerrace { modulus, entries })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }
}

impl fmt::Display for RotationalTerrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "({}) in Z_{}", parts.join(","), self.modulus)
    }
}

/// Difference sequence `b_i = a_{i+1} - a_i` of a terrace, read cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationalSequencing {
    modulus: u64,
    entries: Vec<u64>,
}

impl RotationalSequencing {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Rotation starting at position `start`.
    pub fn rotated(&self, start: usize) -> RotationalSequencing {
        let mut entries = self.entries.clone();
        entries.rotate_left(start % self.entries.len());
        RotationalSequencing {
            modulus: self.modulus,
            entries,
        }
    }

    /// Terrace recovered from the partial sums, starting at `a_1`.
    pub fn terrace_from(&self, start: u64) -> Result<RotationalTerrace, ConstructError> {
        let mut a = Vec::with_capacity(self.entries.len());
        let mut cur = start % self.modulus;
        for &b in &self.entries {
            a.push(cur);
            cur = (cur + b) % self.modulus;
        }
        RotationalTerrace::new(self.modulus, a)
    }
}

/// `(a_1, ..., a_r, a_r + r, ..., a_1 + r)` in `Z_{2r+1}`.
pub fn fgm_terrace(p: &GracefulPermutation) -> RotationalTerrace {
    let r = p.len();
    let n = (2 * r + 1) as u64;
    let mut entries: Vec<u64> = p.entries.iter().map(|&x| x as u64).collect();
    entries.extend(p.entries.iter().rev().map(|&x| ((x + r) as u64) % n));
    RotationalTerrace::new(n, entries).expect("graceful permutations fold into terraces")
}

pub fn sequencing_of(t: &RotationalTerrace) -> RotationalSequencing {
    RotationalSequencing {
        modulus: t.modulus,
        entries: cyclic_differences(t.modulus, &t.entries),
    }
}

fn ensure_alspach(seq: Sequence, what: &str) -> Result<Sequence, ConstructError> {
    let report = check_ordering(&seq, Variant::Alspach);
    if report.valid {
        Ok(seq)
    } else {
        Err(ConstructError::Internal(format!(
            "{what} produced {seq}: {}",
            report.reason.unwrap_or_default()
        )))
    }
}

/// Ordering of `Z_n \ {0, x}` with distinct nonzero partial sums, `n` odd.
pub fn ordering_n_minus_2(n: u64, x: u64) -> Result<Sequence, ConstructError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(ConstructError::Hypothesis(format!(
            "n must be odd and at least 3, got {n}"
        )));
    }
    let x = x % n;
    if x == 0 {
        return Err(ConstructError::Hypothesis("x must be nonzero".into()));
    }
    let r = ((n - 1) / 2) as usize;
    let b = sequencing_of(&fgm_terrace(&walecki(r)));
    let pos = b
        .entries
        .iter()
        .position(|&v| v == x)
        .expect("sequencing lists every nonzero element");
    let rotated = b.rotated(pos + 1);
    let entries = rotated.entries[..rotated.entries.len() - 1].to_vec();
    ensure_alspach(Sequence::new(n, entries)?, "k = n - 2 construction")
}

/// Ordering of `Z_p \ {0, x, y}` with distinct nonzero partial sums, for an
/// odd prime `p` and `x != +-y`.
pub fn ordering_n_minus_3(p: u64, x: u64, y: u64) -> Result<Sequence, ConstructError> {
    if !is_prime(p) || p < 5 {
        return Err(ConstructError::Hypothesis(format!(
            "p must be a prime >= 5, got {p}"
        )));
    }
    ordering_without_pair(p, x, y)
}

/// Same construction for any odd `n`, provided `x` or `y` is a unit; the
/// result is validated before it is returned.
pub fn ordering_without_pair(n: u64, x: u64, y: u64) -> Result<Sequence, ConstructError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(ConstructError::Hypothesis(format!(
            "n must be odd and at least 5, got {n}"
        )));
    }
    let (x, y) = (x % n, y % n);
    if x == 0 || y == 0 {
        return Err(ConstructError::Hypothesis("x and y must be nonzero".into()));
    }
    if x == y {
        return Err(ConstructError::Hypothesis(
            "x and y must be distinct".into(),
        ));
    }
    if (x + y) % n == 0 {
        return Err(ConstructError::Hypothesis(
            "y = -x (the remaining elements sum to 0)".into(),
        ));
    }
    let mut last_err = None;
    for (u, v) in [(x, y), (y, x)] {
        if u.gcd(&n) != 1 {
            continue;
        }
        match remove_pair_with_unit(n, u, v) {
            Ok(seq) => return Ok(seq),
            Err(e) => last_err = Some(e),
        }
    }
    let Some(err) = last_err else {
        return Err(ConstructError::Hypothesis(format!(
            "neither {x} nor {y} is a unit modulo {n}"
        )));
    };
    // Both roles can land on an impossible first difference (r = 8,
    // y = +-4x); look for the pair adjacent anywhere in some sequencing.
    let r = ((n - 1) / 2) as usize;
    if r <= ADJACENT_PAIR_MAX_R {
        if let Some(seq) = remove_adjacent_pair(n, x, y)? {
            return Ok(seq);
        }
    }
    Err(err)
}

/// Largest `r` for which every graceful permutation is scanned for an
/// adjacent pair in ratio `y / x`.
const ADJACENT_PAIR_MAX_R: usize = 12;

/// Calls `visit` on each graceful permutation of length `r` until it
/// returns true.
pub fn for_each_graceful(r: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn rec(
        r: usize,
        path: &mut Vec<usize>,
        used: &mut [bool],
        used_diff: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if path.len() == r {
            return visit(path);
        }
        for v in 1..=r {
            if used[v] {
                continue;
            }
            let d = path.last().map(|&p| p.abs_diff(v));
            if d.is_some_and(|d| used_diff[d]) {
                continue;
            }
            used[v] = true;
            if let Some(d) = d {
                used_diff[d] = true;
            }
            path.push(v);
            let stop = rec(r, path, used, used_diff, visit);
            path.pop();
            if let Some(d) = d {
                used_diff[d] = false;
            }
            used[v] = false;
            if stop {
                return true;
            }
        }
        false
    }
    if r == 0 {
        return;
    }
    let mut used = vec![false; r + 1];
    let mut used_diff = vec![false; r];
    rec(
        r,
        &mut Vec::with_capacity(r),
        &mut used,
        &mut used_diff,
        &mut visit,
    );
}

fn remove_adjacent_pair(n: u64, x: u64, y: u64) -> Result<Option<Sequence>, ConstructError> {
    let r = ((n - 1) / 2) as usize;
    let mut found = None;
    for_each_graceful(r, |alpha| {
        let p = GracefulPermutation {
            entries: alpha.to_vec(),
        };
        let b = sequencing_of(&fgm_terrace(&p));
        let len = b.entries.len();
        for i in 0..len {
            let (u, v) = (b.entries[i], b.entries[(i + 1) % len]);
            for (first, second) in [(x, y), (y, x)] {
                // Scale c with u * c = first and v * c = second.
                let Some(u_inv) = CyclicElement::new(u, n).ok().and_then(|e| e.inverse()) else {
                    continue;
                };
                let c = (CyclicElement::new(first, n).expect("reduced") * u_inv).value();
                if c.gcd(&n) != 1 || (v as u128 * c as u128 % n as u128) as u64 != second {
                    continue;
                }
                let kept = b.rotated(i + 2).entries[..len - 2].to_vec();
                if let Ok(seq) = Sequence::new(n, kept).and_then(|s| s.scaled(c)) {
                    found = Some(seq);
                    return true;
                }
            }
        }
        false
    });
    found
        .map(|seq| ensure_alspach(seq, "adjacent-pair construction"))
        .transpose()
}

/// Scales so that `unit` maps to `r + 1`, builds the sequencing with `r + 1`
/// next to the image of `other`, and scales back.
fn remove_pair_with_unit(n: u64, unit: u64, other: u64) -> Result<Sequence, ConstructError> {
    let r = (n - 1) / 2;
    let half = CyclicElement::new(r + 1, n)?;
    let u = CyclicElement::new(unit, n)?;
    let nu = half * u.inverse().expect("unit");
    let z = (CyclicElement::new(other, n)? * nu).value();
    let d = z.min(n - z) as usize;
    let r_us = r as usize;
    let (alpha, _) = graceful_with_first_diff(d, r_us)?;
    let alpha = if alpha.entries[1] > alpha.entries[0] {
        alpha
    } else {
        complement(&alpha)
    };
    let b = sequencing_of(&fgm_terrace(&alpha)).entries;
    let len = b.len();
    debug_assert_eq!(b[0], d as u64);
    debug_assert_eq!(b[len - 1], r + 1);
    debug_assert_eq!(b[len - 2], n - d as u64);
    let kept = if z == d as u64 {
        b[1..len - 1].to_vec()
    } else {
        b[..len - 2].to_vec()
    };
    let back = nu.inverse().expect("unit").value();
    let seq = Sequence::new(n, kept)?.scaled(back)?;
    ensure_alspach(seq, "k = n - 3 construction")
}
