//! Nullstellensatz certificates from exact coefficients.
//!
//! A nonzero coefficient on a monomial whose exponents are all below `k`
//! shows, for every modulus not dividing it, that some point of `A^k`
//! avoids every factor's zero set. Intersecting the divisor sets of several
//! such coefficients leaves the moduli that no monomial rules out.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::{CacheError, CoefficientCache};
use crate::poly::{pruned_coefficient, ExponentVector, FactorList, Family, PolyError};

/// Largest `k` for which [`Certifier::compute_c`] will run. A single
/// coefficient at `k = 11` takes tens of seconds.
pub const MAX_ALSPACH_K: usize = 11;

/// Largest `k` for the structured targets (warm-up and gap monomials),
/// whose extractions stay small.
pub const MAX_STRUCTURED_K: usize = 16;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("k = {k} exceeds the compute budget (max {max})")]
    Budget { k: usize, max: usize },
    #[error("need k >= 2, got {0}")]
    SmallK(usize),
    #[error("index j = {j} out of range 1..={k}")]
    Index { k: usize, j: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

/// `x_j` to the power `k - 2`, every other variable to `k - 1`.
pub fn alspach_monomial(k: usize, j: usize) -> Result<ExponentVector, CertifyError> {
    if k < 2 {
        return Err(CertifyError::SmallK(k));
    }
    if j == 0 || j > k {
        return Err(CertifyError::Index { k, j });
    }
    let mut e = vec![(k - 1) as u32; k];
    e[j - 1] -= 1;
    Ok(ExponentVector::new(e))
}

/// `(k-1, 0, 2, 4, ..., 2k-4)`.
pub fn warmup_monomial(k: usize) -> Result<ExponentVector, CertifyError> {
    if k < 2 {
        return Err(CertifyError::SmallK(k));
    }
    let mut e = vec![(k - 1) as u32];
    e.extend((0..k - 1).map(|i| 2 * i as u32));
    Ok(ExponentVector::new(e))
}

/// Gap monomial in `k` variables for gap parameter `d`: exponents
/// `0, 2, ..., 2(k-d+1)` on the first `k-d+2` variables, then `2k-d+1` on
/// each of the remaining `d-2`.
pub fn mkd_monomial(k: usize, d: usize) -> Result<ExponentVector, CertifyError> {
    if d <= 3 {
        return Err(CertifyError::Hypothesis(format!("need d > 3, got d = {d}")));
    }
    if k < d {
        return Err(CertifyError::Hypothesis(format!(
            "need k > d - 1, got k = {k}, d = {d}"
        )));
    }
    if 8 * k <= d * d {
        return Err(CertifyError::Hypothesis(format!(
            "need k > d^2/8, got k = {k}, d = {d}"
        )));
    }
    let low = k - d + 2;
    let mut e: Vec<u32> = (0..low).map(|i| 2 * i as u32).collect();
    e.extend(std::iter::repeat_n((2 * k - d + 1) as u32, d - 2));
    Ok(ExponentVector::new(e))
}

/// Which rings the certificate speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// `Z_p` for primes `p > k`.
    Primes,
    /// `Z_n` for integers `n > k`, restricted to Condition-D sets.
    Moduli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Covered,
    NotCovered,
    ZeroCoefficient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Covered => "COVERED",
            Verdict::NotCovered => "NOT_COVERED",
            Verdict::ZeroCoefficient => "ZERO_COEFFICIENT",
        })
    }
}

/// One monomial and its exact coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub target: ExponentVector,
    #[serde(with = "decimal")]
    pub coefficient: BigInt,
}

/// A surviving modulus that cannot carry a Condition-D set of size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discharge {
    #[serde(with = "decimal")]
    pub modulus: BigUint,
    #[serde(with = "decimal")]
    pub condition_d_bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: Family,
    pub k: usize,
    pub scope: Scope,
    pub witnesses: Vec<Witness>,
    /// Primes (or moduli) greater than `k` dividing every nonzero witness.
    #[serde(with = "decimal_list")]
    pub excluded: Vec<BigUint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discharged: Vec<Discharge>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn from_witnesses(family: Family, k: usize, scope: Scope, witnesses: Vec<Witness>) -> Self {
        let nonzero: Vec<&BigInt> = witnesses
            .iter()
            .map(|w| &w.coefficient)
            .filter(|c| !c.is_zero())
            .collect();
        if nonzero.is_empty() {
            return Certificate {
                family,
                k,
                scope,
                witnesses,
                excluded: Vec::new(),
                discharged: Vec::new(),
                verdict: Verdict::ZeroCoefficient,
            };
        }
        // Divisible by everything in the intersection <=> divides the gcd.
        let gcd = nonzero
            .iter()
            .fold(BigUint::zero(), |g, c| g.gcd(c.magnitude()));
        let factors = factorize(&gcd);
        let bound = BigUint::from(k);
        let excluded: Vec<BigUint> = match scope {
            Scope::Primes => factors
                .iter()
                .map(|(p, _)| p.clone())
                .filter(|p| *p > bound)
                .collect(),
            Scope::Moduli => divisors(&factors)
                .into_iter()
                .filter(|m| *m > bound)
                .collect(),
        };
        let mut discharged = Vec::new();
        if scope == Scope::Moduli {
            for m in &excluded {
                let smallest = factorize(m)
                    .into_iter()
                    .map(|(p, _)| p)
                    .min()
                    .expect("modulus > 1");
                if smallest < bound {
                    discharged.push(Discharge {
                        modulus: m.clone(),
                        condition_d_bound: smallest,
                    });
                }
            }
        }
        let verdict = if excluded.len() == discharged.len() {
            Verdict::Covered
        } else {
            Verdict::NotCovered
        };
        Certificate {
            family,
            k,
            scope,
            witnesses,
            excluded,
            discharged,
            verdict,
        }
    }

    /// Excluded moduli not discharged by the Condition-D size bound.
    pub fn undischarged(&self) -> Vec<&BigUint> {
        self.excluded
            .iter()
            .filter(|m| !self.discharged.iter().any(|d| &d.modulus == *m))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}", self.family)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(
            f,
            "scope: {}",
            match self.scope {
                Scope::Primes => "primes",
                Scope::Moduli => "moduli",
            }
        )?;
        for w in &self.witnesses {
            writeln!(
                f,
                "witness: j={} target={} coefficient={}",
                w.index, w.target, w.coefficient
            )?;
        }
        let excluded: Vec<String> = self.excluded.iter().map(|m| m.to_string()).collect();
        writeln!(f, "excluded: {{{}}}", excluded.join(", "))?;
        for d in &self.discharged {
            writeln!(
                f,
                "discharged: {} (largest Condition-D set has size {})",
                d.modulus, d.condition_d_bound
            )?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

/// Prime factorization, ascending.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, usize)> {
    if n.is_zero() || n.is_one() {
        return Vec::new();
    }
    if let Some(small) = n.to_u64() {
        return num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    num_prime::nt_funcs::factorize(n.clone())
        .into_iter()
        .collect()
}

/// All divisors greater than 1, ascending.
fn divisors(factors: &[(BigUint, usize)]) -> Vec<BigUint> {
    let mut all = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(all.len() * (e + 1));
        for d in &all {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..*e {
                power *= p;
                next.push(power.clone());
            }
        }
        all = next;
    }
    let set: BTreeSet<BigUint> = all.into_iter().filter(|d| !d.is_one()).collect();
    set.into_iter().collect()
}

/// Exact samples of the gap-monomial coefficient in the full product, for
/// one gap parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSeries {
    pub d: usize,
    #[serde(with = "decimal_pairs")]
    pub samples: Vec<(usize, BigInt)>,
}

impl AlphaSeries {
    /// Degree bound `(d-3)(d-2)(d-1)/6` of the coefficient as a polynomial in `k`.
    pub fn degree_bound(&self) -> usize {
        (self.d - 3) * (self.d - 2) * (self.d - 1) / 6
    }

    /// Forward differences of the given order over consecutive samples.
    pub fn finite_differences(&self, order: usize) -> Vec<BigInt> {
        let mut values: Vec<BigInt> = self.samples.iter().map(|(_, a)| a.clone()).collect();
        for _ in 0..order {
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        values
    }

    pub fn consecutive(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].0 == w[0].0 + 1)
    }
}

/// Entries `j = 1..=ceil(k/2)` of one row of the coefficient table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    #[serde(with = "decimal_list")]
    pub values: Vec<BigInt>,
}

/// Computes coefficients through an optional persistent cache.
#[derive(Debug, Default)]
pub struct Certifier {
    cache: CoefficientCache,
}

impl Certifier {
    pub fn new() -> Self {
        Certifier::default()
    }

    pub fn with_cache(cache: CoefficientCache) -> Self {
        Certifier { cache }
    }

    pub fn cache(&self) -> &CoefficientCache {
        &self.cache
    }

    /// Coefficient of `target` in the `family` product on `target.len()` variables.
    pub fn coefficient(
        &self,
        family: Family,
        target: &ExponentVector,
    ) -> Result<BigInt, CertifyError> {
        if let Some(c) = self.cache.get(family, target) {
            return Ok(c);
        }
        let factors = FactorList::build(family, target.len())?;
        let c = pruned_coefficient(&factors, target)?;
        self.cache.insert(family, target, &c)?;
        Ok(c)
    }

    pub fn compute_c(&self, k: usize, j: usize) -> Result<BigInt, CertifyError> {
        if k > MAX_ALSPACH_K {
            return Err(CertifyError::Budget {
                k,
                max: MAX_ALSPACH_K,
            });
        }
        self.coefficient(Family::Alspach, &alspach_monomial(k, j)?)
    }

    fn alspach_witnesses(&self, k: usize) -> Result<Vec<Witness>, CertifyError> {
        if k < 2 {
            return Err(CertifyError::SmallK(k));
        }
        if k > MAX_ALSPACH_K {
            return Err(CertifyError::Budget {
                k,
                max: MAX_ALSPACH_K,
            });
        }
        (1..=k)
            .into_par_iter()
            .map(|j| {
                Ok(Witness {
                    index: j,
                    target: alspach_monomial(k, j)?,
                    coefficient: self.compute_c(k, j)?,
                })
            })
            .collect()
    }

    /// Certificate for every prime `p > k`.
    pub fn certify_primes(&self, k: usize) -> Result<Certificate, CertifyError> {
        let w = self.alspach_witnesses(k)?;
        Ok(Certificate::from_witnesses(
            Family::Alspach,
            k,
            Scope::Primes,
            w,
        ))
    }

    /// Certificate for every modulus `n > k`, for Condition-D sets.
    pub fn certify_moduli(&self, k: usize) -> Result<Certificate, CertifyError> {
        let w = self.alspach_witnesses(k)?;
        Ok(Certificate::from_witnesses(
            Family::Alspach,
            k,
            Scope::Moduli,
            w,
        ))
    }

    pub fn warmup_coefficient(&self, k: usize) -> Result<BigInt, CertifyError> {
        if k > MAX_STRUCTURED_K {
            return Err(CertifyError::Budget {
                k,
                max: MAX_STRUCTURED_K,
            });
        }
        self.coefficient(Family::Archdeacon, &warmup_monomial(k)?)
    }

    /// Whether the warm-up coefficient equals `(-1)^(k-1)`.
    pub fn verify_warmup(&self, k: usize) -> Result<bool, CertifyError> {
        let expected = if k.is_multiple_of(2) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Ok(self.warmup_coefficient(k)? == expected)
    }

    pub fn alpha(&self, k: usize, d: usize) -> Result<BigInt, CertifyError> {
        if k > MAX_STRUCTURED_K {
            return Err(CertifyError::Budget {
                k,
                max: MAX_STRUCTURED_K,
            });
        }
        self.coefficient(Family::Full, &mkd_monomial(k, d)?)
    }

    pub fn alpha_series(
        &self,
        d: usize,
        ks: impl IntoIterator<Item = usize>,
    ) -> Result<AlphaSeries, CertifyError> {
        let ks: Vec<usize> = ks.into_iter().collect();
        let samples = ks
            .into_par_iter()
            .map(|k| Ok((k, self.alpha(k, d)?)))
            .collect::<Result<Vec<_>, CertifyError>>()?;
        Ok(AlphaSeries { d, samples })
    }

    /// Rows `2..=k_max`, entries `1..=ceil(k/2)`.
    pub fn table1(&self, k_max: usize) -> Result<Vec<TableRow>, CertifyError> {
        if k_max < 2 {
            return Err(CertifyError::SmallK(k_max));
        }
        (2..=k_max)
            .map(|k| {
                let values = (1..=k.div_ceil(2))
                    .into_par_iter()
                    .map(|j| self.compute_c(k, j))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(TableRow { k, values })
            })
            .collect()
    }
}

/// Index paired with `j` by reversing the variables.
pub fn mirror_index(k: usize, j: usize) -> usize {
    k + 1 - j
}

/// Serde adapters writing big integers as decimal strings.
pub mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub mod decimal_list {
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

pub mod decimal_pairs {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(usize, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(k, a)| (*k, a.to_string()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, BigInt)>, D::Error> {
        Vec::<(usize, String)>::deserialize(d)?
            .into_iter()
            .map(|(k, s)| Ok((k, s.parse().map_err(D::Error::custom)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn monomials() {
        assert_eq!(alspach_monomial(2, 1).unwrap(), ev(&[0, 1]));
        assert_eq!(alspach_monomial(3, 2).unwrap(), ev(&[2, 1, 2]));
        let m = alspach_monomial(5, 3).unwrap();
        assert_eq!(m, ev(&[4, 4, 3, 4, 4]));
        assert_eq!(m.degree(), 19);
        assert!(matches!(
            alspach_monomial(3, 4),
            Err(CertifyError::Index { .. })
        ));
        assert!(matches!(
            alspach_monomial(3, 0),
            Err(CertifyError::Index { .. })
        ));

        assert_eq!(warmup_monomial(3).unwrap(), ev(&[2, 0, 2]));
        assert_eq!(warmup_monomial(4).unwrap(), ev(&[3, 0, 2, 4]));
        assert_eq!(warmup_monomial(5).unwrap().degree(), 16);

        let m = mkd_monomial(5, 4).unwrap();
        assert_eq!(m, ev(&[0, 2, 4, 7, 7]));
        assert_eq!(m.degree(), 20);
        assert_eq!(mkd_monomial(6, 4).unwrap(), ev(&[0, 2, 4, 6, 9, 9]));
        assert_eq!(mkd_monomial(7, 5).unwrap(), ev(&[0, 2, 4, 6, 10, 10, 10]));
    }

    #[test]
    fn mkd_requires_both_hypotheses() {
        assert!(mkd_monomial(5, 3).is_err());
        // 8 > 64/8 fails.
        assert!(mkd_monomial(8, 8).is_err());
        // k > d - 1 fails although k > d^2/8 holds.
        assert!(mkd_monomial(4, 5).is_err());
        // k > d - 1 holds but k > d^2/8 fails.
        assert!(mkd_monomial(12, 10).is_err());
        assert!(mkd_monomial(13, 10).is_ok());
    }

    #[test]
    fn mkd_degree_is_full_degree() {
        for d in 4..9 {
            for k in d..16 {
                if let Ok(m) = mkd_monomial(k, d) {
                    assert_eq!(m.degree(), (k * (k - 1)) as u64);
                }
            }
        }
    }

    #[test]
    fn small_table_values() {
        let c = Certifier::new();
        assert_eq!(c.compute_c(2, 1).unwrap(), big(1));
        assert_eq!(c.compute_c(3, 1).unwrap(), big(-1));
        assert_eq!(c.compute_c(3, 2).unwrap(), big(0));
        assert_eq!(c.compute_c(5, 1).unwrap(), big(4));
        assert_eq!(c.compute_c(7, 4).unwrap(), big(0));
        assert!(matches!(
            c.compute_c(12, 1),
            Err(CertifyError::Budget { .. })
        ));
    }

    #[test]
    fn certificates_small_k() {
        let c = Certifier::new();
        let cert = c.certify_primes(3).unwrap();
        assert_eq!(cert.verdict, Verdict::Covered);
        assert!(cert.excluded.is_empty());
        let cert = c.certify_primes(5).unwrap();
        assert_eq!(cert.verdict, Verdict::Covered);
        let m = c.certify_moduli(5).unwrap();
        assert_eq!(m.verdict, Verdict::Covered);
        assert!(m.excluded.is_empty());
    }

    #[test]
    fn excluded_set_logic() {
        let w = |i, c: i64| Witness {
            index: i,
            target: ev(&[0]),
            coefficient: big(c),
        };
        // gcd 12 = 2^2 * 3; with k = 2 the prime 3 survives.
        let cert = Certificate::from_witnesses(
            Family::Alspach,
            2,
            Scope::Primes,
            vec![w(1, 24), w(2, -36), w(3, 0)],
        );
        assert_eq!(cert.excluded, vec![BigUint::from(3u32)]);
        assert_eq!(cert.verdict, Verdict::NotCovered);
        // moduli > 3 dividing 12: 4, 6, 12; smallest prime factor 2 < 3 for all.
        let cert = Certificate::from_witnesses(
            Family::Alspach,
            3,
            Scope::Moduli,
            vec![w(1, 24), w(2, -36)],
        );
        let ex: Vec<u32> = cert.excluded.iter().map(|m| m.to_u32().unwrap()).collect();
        assert_eq!(ex, vec![4, 6, 12]);
        assert_eq!(cert.discharged.len(), 3);
        assert_eq!(cert.verdict, Verdict::Covered);
        let cert = Certificate::from_witnesses(Family::Alspach, 3, Scope::Primes, vec![w(1, 0)]);
        assert_eq!(cert.verdict, Verdict::ZeroCoefficient);
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = Certifier::new().certify_moduli(6).unwrap();
        let json = cert.to_json();
        assert!(json.contains("\"coefficient\": \"-28\""));
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn warmup_small() {
        let c = Certifier::new();
        assert_eq!(c.warmup_coefficient(2).unwrap(), big(-1));
        assert_eq!(c.warmup_coefficient(3).unwrap(), big(1));
        assert!(c.verify_warmup(6).unwrap());
    }

    #[test]
    fn mirror_symmetry_small_k() {
        let c = Certifier::new();
        for k in 2..=6 {
            for j in 1..=k {
                let a = c.compute_c(k, j).unwrap();
                let b = c.compute_c(k, mirror_index(k, j)).unwrap();
                assert_eq!(a.abs(), b.abs(), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn finite_differences() {
        let s = AlphaSeries {
            d: 4,
            samples: (1..6).map(|k| (k, big((k * k) as i64))).collect(),
        };
        assert_eq!(s.finite_differences(2), vec![big(2); 3]);
        assert!(s.finite_differences(3).iter().all(Zero::is_zero));
        assert_eq!(s.degree_bound(), 1);
        assert!(s.consecutive());
    }

    #[test]
    fn divisors_of_twelve() {
        let f = factorize(&BigUint::from(12u32));
        let d: Vec<u32> = divisors(&f).iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(d, vec![2, 3, 4, 6, 12]);
    }
}
