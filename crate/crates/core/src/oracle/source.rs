use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::distribution::FiniteDistribution;
use crate::error::{Error, Result};

/// Environment variable capping oracle memory, in bytes.
pub const MAX_MEM_ENV: &str = "EXTRACTORFORGE_MAX_MEM";

/// Uniform distribution over an explicit set of `2^k` strings of `n` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSource {
    n: u32,
    k: u32,
    support: Vec<u64>,
}

impl FlatSource {
    pub fn new(n: u32, k: u32, mut support: Vec<u64>) -> Result<Self> {
        if n > 63 || k > n {
            return Err(Error::InvalidParameters(format!("flat source needs k <= n <= 63 (got n={n}, k={k})")));
        }
        support.sort_unstable();
        support.dedup();
        if support.len() as u64 != 1u64 << k {
            return Err(Error::InvalidDistribution(format!(
                "{} distinct points, a flat source with k={k} needs {}",
                support.len(),
                1u64 << k
            )));
        }
        if support.last().is_some_and(|&x| x >> n != 0) {
            return Err(Error::InvalidDistribution(format!("support point outside {{0,1}}^{n}")));
        }
        Ok(Self { n, k, support })
    }

    /// All of `{0,1}^n`.
    pub fn full(n: u32) -> Result<Self> {
        Self::new(n, n, (0..1u64 << n).collect())
    }

    /// `2^k` distinct points drawn without replacement.
    pub fn sample(n: u32, k: u32, rng: &mut ChaCha8Rng) -> Result<Self> {
        if n > 40 || k > n {
            return Err(Error::InvalidParameters(format!("sampling needs k <= n <= 40 (got n={n}, k={k})")));
        }
        let picks = index::sample(rng, 1usize << n, 1usize << k);
        Self::new(n, k, picks.into_iter().map(|i| i as u64).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn to_distribution(&self) -> FiniteDistribution {
        FiniteDistribution::uniform_over(1u128 << self.n, self.support.iter().copied()).expect("nonempty support")
    }
}

/// `count` flat sources from ChaCha8 seeded with `seed`; source `i` uses
/// stream `i`, so each one is reproducible on its own.
pub fn sample_flat_sources(n: u32, k: u32, count: usize, seed: u64) -> Result<Vec<FlatSource>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            FlatSource::sample(n, k, &mut rng)
        })
        .collect()
}

/// Limits on a single enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of function evaluations.
    pub max_evaluations: u128,
    pub max_memory_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_evaluations: 1 << 36,
            max_memory_bytes: 1 << 30,
        }
    }
}

impl Budget {
    /// Default budget with the memory cap taken from [`MAX_MEM_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Self::default();
        if let Ok(v) = std::env::var(MAX_MEM_ENV) {
            b.max_memory_bytes = v
                .trim()
                .parse()
                .ok()
                .filter(|&m: &u64| m > 0)
                .ok_or_else(|| Error::InvalidParameters(format!("{MAX_MEM_ENV}={v:?} is not a positive byte count")))?;
        }
        Ok(b)
    }

    pub fn with_evaluations(mut self, max: u128) -> Self {
        self.max_evaluations = max;
        self
    }

    pub(crate) fn check_evaluations(&self, required: u128) -> Result<()> {
        if required > self.max_evaluations {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.max_evaluations,
                unit: "evaluations",
            });
        }
        Ok(())
    }

    pub(crate) fn check_memory(&self, required: u128) -> Result<()> {
        if required > self.max_memory_bytes as u128 {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.max_memory_bytes as u128,
                unit: "bytes",
            });
        }
        Ok(())
    }
}
