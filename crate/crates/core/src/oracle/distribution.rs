use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Distribution over the outcomes `0..domain_size` with exact rational
/// probabilities; outcomes absent from the map have probability zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDistribution {
    domain_size: u128,
    probs: BTreeMap<u64, BigRational>,
}

impl FiniteDistribution {
    pub fn new(domain_size: u128, probs: BTreeMap<u64, BigRational>) -> Result<Self> {
        let mut total = BigRational::zero();
        let mut clean = BTreeMap::new();
        for (a, p) in probs {
            if (a as u128) >= domain_size {
                return Err(Error::InvalidDistribution(format!("outcome {a} outside a domain of {domain_size}")));
            }
            if p.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative probability at {a}")));
            }
            total += &p;
            if !p.is_zero() {
                clean.insert(a, p);
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { domain_size, probs: clean })
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_weights<I: IntoIterator<Item = (u64, u64)>>(domain_size: u128, weights: I) -> Result<Self> {
        let weights: Vec<(u64, u64)> = weights.into_iter().collect();
        let total: u128 = weights.iter().map(|&(_, w)| w as u128).sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let mut probs = BTreeMap::new();
        for (a, w) in weights {
            *probs.entry(a).or_insert_with(BigRational::zero) += BigRational::new(BigInt::from(w), BigInt::from(total));
        }
        Self::new(domain_size, probs)
    }

    pub fn uniform_over<I: IntoIterator<Item = u64>>(domain_size: u128, support: I) -> Result<Self> {
        Self::from_weights(domain_size, support.into_iter().map(|a| (a, 1)))
    }

    /// Uniform over the whole domain; the domain must be small enough to list.
    pub fn uniform(domain_size: u64) -> Result<Self> {
        Self::uniform_over(domain_size as u128, 0..domain_size)
    }

    pub fn point_mass(domain_size: u128, a: u64) -> Result<Self> {
        Self::from_weights(domain_size, [(a, 1)])
    }

    pub fn domain_size(&self) -> u128 {
        self.domain_size
    }

    pub fn prob(&self, a: u64) -> BigRational {
        self.probs.get(&a).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Outcomes with positive probability, ascending.
    pub fn support(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.probs.iter().map(|(&a, p)| (a, p))
    }

    pub fn max_prob(&self) -> BigRational {
        self.probs.values().max().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Pushes the distribution through `f` into a domain of `domain_size`.
    pub fn map<F: Fn(u64) -> u64>(&self, domain_size: u128, f: F) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (&a, p) in &self.probs {
            *out.entry(f(a)).or_insert_with(BigRational::zero) += p;
        }
        Self::new(domain_size, out)
    }
}

/// `(1/2) Σ |A(a) - B(a)|`.
pub fn stat_distance(a: &FiniteDistribution, b: &FiniteDistribution) -> Result<BigRational> {
    if a.domain_size != b.domain_size {
        return Err(Error::DimensionMismatch(format!(
            "domains of size {} and {}",
            a.domain_size, b.domain_size
        )));
    }
    let mut sum = BigRational::zero();
    for (x, p) in &a.probs {
        sum += (p - b.prob(*x)).abs();
    }
    for (x, q) in &b.probs {
        if !a.probs.contains_key(x) {
            sum += q;
        }
    }
    Ok(sum / BigRational::from_integer(BigInt::from(2)))
}

/// `min_a -log2 D(a)` over the support, in bits.
pub fn min_entropy(d: &FiniteDistribution) -> Result<f64> {
    if d.probs.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    Ok(super::neg_log2(&d.max_prob()))
}

/// Distance from `d` to the nearest distribution on the same domain with
/// min-entropy at least `kappa`: `Σ_a max(D(a) - 2^-κ, 0)`. The excess mass
/// above the cap can always be moved to outcomes below it, since the domain
/// has at least `2^κ` outcomes.
pub fn distance_to_min_entropy(d: &FiniteDistribution, kappa: u32) -> Result<BigRational> {
    if kappa >= 128 || d.domain_size < (1u128 << kappa) {
        return Err(Error::InvalidParameters(format!(
            "no distribution on {} outcomes has {kappa} bits of min-entropy",
            d.domain_size
        )));
    }
    let cap = BigRational::new(BigInt::one(), BigInt::one() << kappa as usize);
    let mut sum = BigRational::zero();
    for p in d.probs.values() {
        if *p > cap {
            sum += p - &cap;
        }
    }
    Ok(sum)
}
