//! Exhaustive search over orderings. Independent of the polynomial and
//! constructive paths, and used to check both.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{is_prime, GroupError, Sequence, Variant};

/// Largest modulus accepted by [`verify_conjecture`].
pub const MAX_VERIFY_MODULUS: u64 = 16;

/// Largest set accepted by [`find_ordering`].
pub const MAX_SEARCH_SET: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("{what} = {value} exceeds the search guard {max}")]
    Budget {
        what: &'static str,
        value: u64,
        max: u64,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One search instance: choose `length` distinct elements of `set` whose
/// partial sums are distinct in the sense of `variant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTask {
    modulus: u64,
    set: Vec<u64>,
    variant: Variant,
    length: usize,
}

impl SearchTask {
    pub fn new(
        modulus: u64,
        set: &[u64],
        variant: Variant,
        length: usize,
    ) -> Result<Self, OracleError> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        // Validates modulus, range and nonzero-ness.
        Sequence::new(modulus, set.clone())?;
        if set.len() > MAX_SEARCH_SET {
            return Err(OracleError::Budget {
                what: "|A|",
                value: set.len() as u64,
                max: MAX_SEARCH_SET as u64,
            });
        }
        if length > set.len() {
            return Err(OracleError::Hypothesis(format!(
                "length {length} exceeds |A| = {}",
                set.len()
            )));
        }
        let check = match variant {
            Variant::Alspach => length == set.len(),
            Variant::Costa => true,
            Variant::Archdeacon => false,
        };
        if check {
            variant
                .set_hypothesis(modulus, &set)
                .map_err(OracleError::Hypothesis)?;
        }
        Ok(SearchTask {
            modulus,
            set,
            variant,
            length,
        })
    }

    /// Task ordering all of `set`.
    pub fn full(modulus: u64, set: &[u64], variant: Variant) -> Result<Self, OracleError> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        let len = s.len();
        SearchTask::new(modulus, &s, variant, len)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn set(&self) -> &[u64] {
        &self.set
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

/// Depth-first search trying candidates in ascending order; the first
/// ordering found is returned.
pub fn find_ordering(task: &SearchTask) -> Option<Sequence> {
    let n = task.modulus as usize;
    let mut seen = vec![false; n];
    if task.variant == Variant::Alspach {
        seen[0] = true;
    }
    let mut used = vec![false; task.set.len()];
    let mut path = Vec::with_capacity(task.length);
    if dfs(task, 0, &mut seen, &mut used, &mut path) {
        Some(Sequence::new(task.modulus, path).expect("search yields distinct nonzero entries"))
    } else {
        None
    }
}

fn dfs(
    task: &SearchTask,
    sum: u64,
    seen: &mut [bool],
    used: &mut [bool],
    path: &mut Vec<u64>,
) -> bool {
    if path.len() == task.length {
        return true;
    }
    for idx in 0..task.set.len() {
        if used[idx] {
            continue;
        }
        let x = task.set[idx];
        let next = (sum + x) % task.modulus;
        if seen[next as usize] {
            continue;
        }
        seen[next as usize] = true;
        used[idx] = true;
        path.push(x);
        if dfs(task, next, seen, used, path) {
            return true;
        }
        path.pop();
        used[idx] = false;
        seen[next as usize] = false;
    }
    false
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// For prime moduli, check one subset per orbit under multiplication
    /// by units.
    pub reduce_automorphisms: bool,
    /// Restrict to subsets of exactly this size.
    pub size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub modulus: u64,
    pub variant: Variant,
    /// Admissible subsets searched.
    pub checked: u64,
    /// Subsets skipped because they violate the variant's hypothesis.
    pub skipped: u64,
    pub counterexamples: Vec<Vec<u64>>,
    #[serde(with = "millis")]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.counterexamples {
            let items: Vec<String> = c.iter().map(u64::to_string).collect();
            writeln!(
                f,
                "{} {} {{{}}}",
                self.modulus,
                self.variant,
                items.join(",")
            )?;
        }
        write!(
            f,
            "n={} variant={} checked={} skipped={} counterexamples={} time={:.3}s",
            self.modulus,
            self.variant,
            self.checked,
            self.skipped,
            self.counterexamples.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

fn mask_to_set(mask: u32) -> Vec<u64> {
    (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b as u64 + 1)
        .collect()
}

fn set_to_mask(set: &[u64]) -> u32 {
    set.iter().fold(0, |m, &x| m | 1 << (x - 1))
}

/// Smallest mask in the orbit of `mask` under `x -> u x`.
fn is_orbit_minimum(mask: u32, n: u64) -> bool {
    let set = mask_to_set(mask);
    (2..n).all(|u| {
        let image: Vec<u64> = set.iter().map(|&x| x * u % n).collect();
        set_to_mask(&image) >= mask
    })
}

/// Searches every admissible subset of `Z_n \ {0}` for an ordering of the
/// whole subset.
pub fn verify_conjecture(n: u64, variant: Variant) -> Result<VerificationReport, OracleError> {
    verify_conjecture_with(n, variant, VerifyOptions::default())
}

pub fn verify_conjecture_with(
    n: u64,
    variant: Variant,
    options: VerifyOptions,
) -> Result<VerificationReport, OracleError> {
    if n < 2 {
        return Err(GroupError::Modulus(n).into());
    }
    if n > MAX_VERIFY_MODULUS {
        return Err(OracleError::Budget {
            what: "n",
            value: n,
            max: MAX_VERIFY_MODULUS,
        });
    }
    let start = Instant::now();
    let reduce = options.reduce_automorphisms && is_prime(n);
    let outcomes: Vec<Option<Result<(), Vec<u64>>>> = (1u32..1 << (n - 1))
        .into_par_iter()
        .filter(|m| options.size.is_none_or(|s| m.count_ones() as usize == s))
        .filter(|&m| !reduce || is_orbit_minimum(m, n))
        .map(|mask| {
            let set = mask_to_set(mask);
            if variant.set_hypothesis(n, &set).is_err() {
                return None;
            }
            let task = SearchTask::full(n, &set, variant).expect("admissible subset");
            Some(match find_ordering(&task) {
                Some(_) => Ok(()),
                None => Err(set),
            })
        })
        .collect();
    let mut report = VerificationReport {
        modulus: n,
        variant,
        checked: 0,
        skipped: 0,
        counterexamples: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for o in outcomes {
        match o {
            None => report.skipped += 1,
            Some(r) => {
                report.checked += 1;
                if let Err(set) = r {
                    report.counterexamples.push(set);
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Smallest `m` such that every `m`-subset of `Z_n \ {0}` contains `k`
/// distinct elements with distinct partial sums `s_1, ..., s_k`.
/// `None` if even the full set fails.
pub fn min_subset_order(n: u64, k: usize) -> Result<Option<usize>, OracleError> {
    if n < 2 {
        return Err(GroupError::Modulus(n).into());
    }
    if k == 0 || k as u64 > n - 1 {
        return Err(OracleError::Hypothesis(format!(
            "need 1 <= k <= n - 1, got k = {k}, n = {n}"
        )));
    }
    if n > MAX_VERIFY_MODULUS {
        return Err(OracleError::Budget {
            what: "n",
            value: n,
            max: MAX_VERIFY_MODULUS,
        });
    }
    let mut answer = None;
    for m in (k..n as usize).rev() {
        let all = (1u32..1 << (n - 1))
            .into_par_iter()
            .filter(|mask| mask.count_ones() as usize == m)
            .all(|mask| {
                let task = SearchTask::new(n, &mask_to_set(mask), Variant::Archdeacon, k)
                    .expect("valid subset");
                find_ordering(&task).is_some()
            });
        if !all {
            break;
        }
        answer = Some(m);
    }
    Ok(answer)
}

/// Largest subset of `Z_n` with no two elements differing by a zero-divisor,
/// found by exhaustive branch and bound.
pub fn max_condition_d_set(n: u64) -> Vec<u64> {
    use num_integer::Integer;
    let n_us = n as usize;
    let compatible = |a: usize, b: usize| {
        let d = (a as u64).abs_diff(b as u64);
        d.gcd(&n) == 1
    };
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn grow(
        current: &mut Vec<usize>,
        candidates: &[usize],
        best: &mut Vec<usize>,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for (i, &c) in candidates.iter().enumerate() {
            if current.len() + (candidates.len() - i) <= best.len() {
                return;
            }
            let rest: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&x| compatible(c, x))
                .collect();
            current.push(c);
            grow(current, &rest, best, compatible);
            current.pop();
        }
    }
    let all: Vec<usize> = (0..n_us).collect();
    grow(&mut current, &all, &mut best, &compatible);
    best.into_iter().map(|x| x as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{check_ordering, condition_d, max_condition_d_size};

    #[test]
    fn find_examples() {
        let t = SearchTask::full(5, &[1, 2, 3], Variant::Alspach).unwrap();
        assert_eq!(find_ordering(&t).unwrap().entries(), &[2, 1, 3]);
        let t = SearchTask::full(5, &[1, 4], Variant::Archdeacon).unwrap();
        assert_eq!(find_ordering(&t).unwrap().entries(), &[1, 4]);
        assert!(matches!(
            SearchTask::full(5, &[1, 4], Variant::Alspach),
            Err(OracleError::Hypothesis(_))
        ));
    }

    #[test]
    fn task_validation() {
        assert!(SearchTask::full(5, &[0, 1], Variant::Archdeacon).is_err());
        assert!(SearchTask::full(5, &[6], Variant::Archdeacon).is_err());
        assert!(SearchTask::new(5, &[1, 2], Variant::Archdeacon, 3).is_err());
        assert!(SearchTask::full(7, &[1, 6], Variant::Costa).is_err());
        let big: Vec<u64> = (1..=19).collect();
        assert!(matches!(
            SearchTask::full(23, &big, Variant::Archdeacon),
            Err(OracleError::Budget { .. })
        ));
    }

    #[test]
    fn none_when_impossible() {
        // {1, 2} in Z_3: either order revisits a partial sum when s_0 counts.
        let t = SearchTask::new(3, &[1, 2], Variant::Alspach, 2);
        assert!(t.is_err());
        // Length 2 from {1, 2} in Z_3 under Archdeacon: (1, 2) -> sums 1, 0.
        let t = SearchTask::new(3, &[1, 2], Variant::Archdeacon, 2).unwrap();
        assert!(find_ordering(&t).is_some());
    }

    #[test]
    fn verify_small() {
        let r = verify_conjecture(5, Variant::Alspach).unwrap();
        assert!(r.holds());
        assert!(r.checked > 0);
        let r = verify_conjecture(8, Variant::Archdeacon).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked, 127);
        for v in Variant::ALL {
            let r = verify_conjecture(2, v).unwrap();
            assert!(r.holds());
        }
        assert!(verify_conjecture(17, Variant::Alspach).is_err());
    }

    #[test]
    fn automorphism_reduction_agrees() {
        let full = verify_conjecture(11, Variant::Alspach).unwrap();
        let reduced = verify_conjecture_with(
            11,
            Variant::Alspach,
            VerifyOptions {
                reduce_automorphisms: true,
                size: None,
            },
        )
        .unwrap();
        assert!(full.holds() && reduced.holds());
        assert!(reduced.checked < full.checked);
    }

    #[test]
    fn report_format() {
        let r = VerificationReport {
            modulus: 6,
            variant: Variant::Archdeacon,
            checked: 3,
            skipped: 0,
            counterexamples: vec![vec![1, 5]],
            elapsed: Duration::from_millis(1500),
        };
        let s = r.to_string();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "6 archdeacon {1,5}");
        assert!(
            lines[1].starts_with("n=6 variant=archdeacon checked=3 skipped=0 counterexamples=1")
        );
    }

    #[test]
    fn min_subset_order_examples() {
        assert_eq!(min_subset_order(7, 2).unwrap(), Some(2));
        assert!(min_subset_order(11, 3).unwrap().unwrap() <= 3);
        assert!(min_subset_order(13, 4).unwrap().unwrap() <= 5);
        assert!(min_subset_order(7, 7).is_err());
    }

    #[test]
    fn found_orderings_check_out() {
        for n in 3..12u64 {
            for mask in 1u32..1 << (n - 1) {
                let set = mask_to_set(mask);
                for v in Variant::ALL {
                    if let Ok(t) = SearchTask::full(n, &set, v) {
                        if let Some(s) = find_ordering(&t) {
                            assert!(check_ordering(&s, v).valid);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn condition_d_maximum_small() {
        for n in 2..=30 {
            let best = max_condition_d_set(n);
            assert_eq!(best.len() as u64, max_condition_d_size(n), "n={n}");
            assert!(condition_d(&best, n));
        }
    }
}
