//! Toeplitz hashing, the seed-length-`O(n)` baseline extractor.
//!
//! The seed holds the `n + m - 1` diagonals of an `m × n` Toeplitz matrix
//! over GF(2): `T[i][j] = seed[i - j + n - 1]`. Output is `T·x`.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::{SeededFunction, WordFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToeplitzSpec {
    pub n: usize,
    pub m: usize,
}

impl ToeplitzSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidParameters(format!(
                "toeplitz hashing needs 1 <= m <= n (got n={n}, m={m})"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn seed_len(&self) -> usize {
        self.n + self.m - 1
    }

    /// Packed view for `n + m - 1 <= 64`.
    pub fn words(&self) -> Result<ToeplitzWords> {
        if self.seed_len() > 64 {
            return Err(Error::ResourceLimit(format!(
                "packed toeplitz view needs n + m - 1 <= 64, got {}",
                self.seed_len()
            )));
        }
        Ok(ToeplitzWords(*self))
    }
}

pub fn toeplitz_extract(spec: &ToeplitzSpec, x: &BitString, seed: &BitString) -> Result<BitString> {
    spec.apply(x, seed)
}

impl SeededFunction for ToeplitzSpec {
    fn input_len(&self) -> usize {
        self.n
    }
    fn seed_len(&self) -> usize {
        ToeplitzSpec::seed_len(self)
    }
    fn output_len(&self) -> usize {
        self.m
    }

    fn apply_unchecked(&self, x: &BitString, seed: &BitString) -> BitString {
        let n = self.n;
        let ones: Vec<usize> = (0..n).filter(|&j| x.bit(j)).collect();
        (0..self.m)
            .map(|i| ones.iter().fold(false, |acc, &j| acc ^ seed.bit(i + n - 1 - j)))
            .collect()
    }
}

/// Word-level Toeplitz map: with `x` reversed into `r` (`r` bit `n-1-j` =
/// `x_j`), output bit `i` is the parity of `(seed >> i) & r`.
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzWords(ToeplitzSpec);

impl WordFunction for ToeplitzWords {
    type Prepared = u64;

    fn input_bits(&self) -> usize {
        self.0.n
    }
    fn seed_bits(&self) -> usize {
        self.0.seed_len()
    }
    fn output_bits(&self) -> usize {
        self.0.m
    }

    fn prepare(&self, x: u64) -> u64 {
        let n = self.0.n as u32;
        if n == 0 {
            0
        } else {
            x.reverse_bits() >> (64 - n)
        }
    }

    #[inline]
    fn eval(&self, reversed: &u64, seed: u64) -> u64 {
        (0..self.0.m).fold(0u64, |acc, i| {
            acc | ((((seed >> i) & reversed).count_ones() as u64) & 1) << i
        })
    }
}
