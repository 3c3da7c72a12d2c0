use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::distribution::FiniteDistribution;
use crate::error::{Error, Result};

/// Joint distribution `Pr[x, s]` of an `x_bits`-bit source and a classical
/// side-information symbol `s < s_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTable {
    x_bits: u32,
    s_size: usize,
    /// Row-major, entry `x * s_size + s`.
    probs: Vec<BigRational>,
}

impl JointTable {
    pub fn new(x_bits: u32, s_size: usize, probs: Vec<BigRational>) -> Result<Self> {
        if x_bits > 20 || s_size == 0 {
            return Err(Error::InvalidDistribution(format!(
                "table needs x_bits <= 20 and at least one side symbol (got {x_bits}, {s_size})"
            )));
        }
        if probs.len() != (1usize << x_bits) * s_size {
            return Err(Error::InvalidDistribution(format!(
                "expected {} entries, got {}",
                (1usize << x_bits) * s_size,
                probs.len()
            )));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution("negative entry".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { x_bits, s_size, probs })
    }

    /// Normalizes nonnegative integer weights laid out like [`Self::new`].
    pub fn from_weights(x_bits: u32, s_size: usize, weights: &[u64]) -> Result<Self> {
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let probs = weights
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        Self::new(x_bits, s_size, probs)
    }

    /// `Pr[x, s] = Pr[x] · Pr[s | x]` with `channel(x)` giving the
    /// conditional distribution of `s` as weights.
    pub fn from_channel<F: Fn(u64) -> Vec<u64>>(
        px: &FiniteDistribution,
        s_size: usize,
        channel: F,
    ) -> Result<Self> {
        let x_bits = px.domain_size().trailing_zeros();
        if px.domain_size() != 1u128 << x_bits {
            return Err(Error::InvalidDistribution("source domain must be a power of two".into()));
        }
        let mut probs = vec![BigRational::zero(); (1usize << x_bits) * s_size];
        for (x, p) in px.support() {
            let w = channel(x);
            if w.len() != s_size {
                return Err(Error::DimensionMismatch(format!("channel row has {} entries, need {s_size}", w.len())));
            }
            let total: u128 = w.iter().map(|&v| v as u128).sum();
            if total == 0 {
                return Err(Error::InvalidDistribution(format!("channel row {x} is all zero")));
            }
            for (s, &ws) in w.iter().enumerate() {
                probs[x as usize * s_size + s] = p * BigRational::new(BigInt::from(ws), BigInt::from(total));
            }
        }
        Self::new(x_bits, s_size, probs)
    }

    pub fn x_bits(&self) -> u32 {
        self.x_bits
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn get(&self, x: u64, s: usize) -> &BigRational {
        &self.probs[x as usize * self.s_size + s]
    }

    pub fn x_marginal(&self) -> FiniteDistribution {
        let probs = (0..1u64 << self.x_bits)
            .map(|x| (x, (0..self.s_size).map(|s| self.get(x, s)).sum::<BigRational>()))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        FiniteDistribution::new(1u128 << self.x_bits, probs).expect("marginal of a valid table")
    }

    pub fn s_marginal(&self) -> Vec<BigRational> {
        (0..self.s_size)
            .map(|s| (0..1u64 << self.x_bits).map(|x| self.get(x, s)).sum())
            .collect()
    }

    /// Optimal probability of guessing `x` from `s`: `Σ_s max_x Pr[x, s]`.
    pub fn guessing_probability(&self) -> BigRational {
        (0..self.s_size)
            .map(|s| {
                (0..1u64 << self.x_bits)
                    .map(|x| self.get(x, s))
                    .max()
                    .cloned()
                    .unwrap_or_else(BigRational::zero)
            })
            .sum()
    }

    /// Table of `(low p bits of x, s)`, summing out the high bits.
    pub fn prefix_table(&self, p: u32) -> Result<JointTable> {
        if p > self.x_bits {
            return Err(Error::InvalidParameters(format!(
                "prefix of {p} bits from a {}-bit source",
                self.x_bits
            )));
        }
        let mask = (1u64 << p) - 1;
        let mut probs = vec![BigRational::zero(); (1usize << p) * self.s_size];
        for x in 0..1u64 << self.x_bits {
            for s in 0..self.s_size {
                probs[(x & mask) as usize * self.s_size + s] += self.get(x, s);
            }
        }
        JointTable::new(p, self.s_size, probs)
    }
}

/// `-log2 Σ_s max_x Pr[x, s]` in bits.
pub fn cond_min_entropy_classical(j: &JointTable) -> f64 {
    super::neg_log2(&j.guessing_probability())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::min_entropy;

    #[test]
    fn independent_side_info_changes_nothing() {
        let px = FiniteDistribution::from_weights(8, [(0, 3), (2, 1), (5, 4)]).unwrap();
        let j = JointTable::from_channel(&px, 3, |_| vec![1, 2, 5]).unwrap();
        assert_eq!(j.guessing_probability(), px.max_prob());
        assert_eq!(cond_min_entropy_classical(&j), min_entropy(&px).unwrap());
    }

    #[test]
    fn full_copy_is_zero() {
        let px = FiniteDistribution::uniform(4).unwrap();
        let j = JointTable::from_channel(&px, 4, |x| (0..4).map(|s| (s == x) as u64).collect()).unwrap();
        assert_eq!(cond_min_entropy_classical(&j), 0.0);
    }

    #[test]
    fn first_bit_leak() {
        // x uniform on 2 bits, s = bit 0: Σ_s max = 2 · 1/4 = 1/2
        let px = FiniteDistribution::uniform(4).unwrap();
        let j = JointTable::from_channel(&px, 2, |x| if x & 1 == 0 { vec![1, 0] } else { vec![0, 1] }).unwrap();
        assert_eq!(j.guessing_probability(), BigRational::new(1.into(), 2.into()));
        assert_eq!(cond_min_entropy_classical(&j), 1.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(JointTable::from_weights(1, 2, &[1, 1, 1]).is_err());
        assert!(JointTable::from_weights(1, 2, &[0, 0, 0, 0]).is_err());
        let half = BigRational::new(1.into(), 2.into());
        assert!(JointTable::new(1, 1, vec![half.clone(), half.clone() * BigRational::from_integer(3.into())]).is_err());
    }
}
