//! Block composition, condense-then-extract, and the end-to-end builders.
//!
//! [`BlockComposed`] runs `E(x, y) = E1(x1, E2(x2, y))` on the two halves
//! of `x`. [`CondenseExtract`] runs `E((C(x, y1), y1), y2)`.
//!
//! [`build_high_entropy_extractor`] instantiates the block composition with
//! two Trevisan extractors: `E1` with the polynomial design on `n/2` bits
//! and `m1 = ceil((n/2 - b) / 2)` outputs, `E2` with the weak design on the
//! other `n/2` bits and exactly as many outputs as `E1` has seed bits.
//!
//! [`build_pipeline`] condenses an `(n, k)` source and feeds the strong
//! form into that extractor. The source of the inner extractor has
//! `N = d + n'` bits and is credited with `d + floor((1-β)k)` bits of
//! min-entropy, so its deficiency is `N - d - floor((1-β)k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::condenser::{build_condenser, CondenserSpec, GuvCondenser};
use crate::error::{Error, Result};
use crate::extractor::SeededFunction;
use crate::trevisan::{build_trevisan, ExtractorSpec, Preset, TrevisanExtractor};

/// `E(x1 ∥ x2, y) = E1(x1, E2(x2, y))`.
#[derive(Debug, Clone)]
pub struct BlockComposed<A, B> {
    e1: A,
    e2: B,
}

impl<A: SeededFunction, B: SeededFunction> BlockComposed<A, B> {
    pub fn new(e1: A, e2: B) -> Result<Self> {
        if e1.input_len() != e2.input_len() {
            return Err(Error::DimensionMismatch(format!(
                "blocks must have equal input lengths, got {} and {}",
                e1.input_len(),
                e2.input_len()
            )));
        }
        if e2.output_len() != e1.seed_len() {
            return Err(Error::DimensionMismatch(format!(
                "second block outputs {} bits but the first block needs a {}-bit seed",
                e2.output_len(),
                e1.seed_len()
            )));
        }
        Ok(Self { e1, e2 })
    }

    pub fn first(&self) -> &A {
        &self.e1
    }

    pub fn second(&self) -> &B {
        &self.e2
    }

    /// The seed handed to the first block, `E2(x2, y)`.
    pub fn intermediate_seed(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.check(x, y)?;
        let half = self.e1.input_len();
        Ok(self.e2.apply_unchecked(&x.slice(half, 2 * half)?, y))
    }

    fn check(&self, x: &BitString, y: &BitString) -> Result<()> {
        crate::extractor::check_len("source", self.input_len(), x)?;
        crate::extractor::check_len("seed", self.seed_len(), y)
    }
}

impl<A: SeededFunction, B: SeededFunction> SeededFunction for BlockComposed<A, B> {
    fn input_len(&self) -> usize {
        2 * self.e1.input_len()
    }
    fn seed_len(&self) -> usize {
        self.e2.seed_len()
    }
    fn output_len(&self) -> usize {
        self.e1.output_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        let half = self.e1.input_len();
        let x1 = x.slice(0, half).expect("length checked");
        let x2 = x.slice(half, 2 * half).expect("length checked");
        let seed1 = self.e2.apply_unchecked(&x2, y);
        self.e1.apply_unchecked(&x1, &seed1)
    }
}

pub fn block_compose<A: SeededFunction, B: SeededFunction>(e1: A, e2: B) -> Result<BlockComposed<A, B>> {
    BlockComposed::new(e1, e2)
}

/// `EC(x, y1 ∥ y2) = E(C(x, y1) ∥ y1, y2)`.
#[derive(Debug, Clone)]
pub struct CondenseExtract<C, E> {
    condenser: C,
    extractor: E,
}

impl<C: SeededFunction, E: SeededFunction> CondenseExtract<C, E> {
    pub fn new(condenser: C, extractor: E) -> Result<Self> {
        let strong = condenser.output_len() + condenser.seed_len();
        if extractor.input_len() != strong {
            return Err(Error::DimensionMismatch(format!(
                "extractor takes {} bits but the condenser's strong form has {strong}",
                extractor.input_len()
            )));
        }
        Ok(Self { condenser, extractor })
    }

    pub fn condenser(&self) -> &C {
        &self.condenser
    }

    pub fn extractor(&self) -> &E {
        &self.extractor
    }

    /// Runs with the two seed parts passed separately.
    pub fn extract_split(&self, x: &BitString, y1: &BitString, y2: &BitString) -> Result<BitString> {
        crate::extractor::check_len("condenser seed", self.condenser.seed_len(), y1)?;
        crate::extractor::check_len("extractor seed", self.extractor.seed_len(), y2)?;
        let condensed = self.condenser.apply(x, y1)?.concat(y1);
        self.extractor.apply(&condensed, y2)
    }
}

impl<C: SeededFunction, E: SeededFunction> SeededFunction for CondenseExtract<C, E> {
    fn input_len(&self) -> usize {
        self.condenser.input_len()
    }
    fn seed_len(&self) -> usize {
        self.condenser.seed_len() + self.extractor.seed_len()
    }
    fn output_len(&self) -> usize {
        self.extractor.output_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        let d = self.condenser.seed_len();
        let y1 = y.slice(0, d).expect("length checked");
        let y2 = y.slice(d, y.len()).expect("length checked");
        let condensed = self.condenser.apply_unchecked(x, &y1).concat(&y1);
        self.extractor.apply_unchecked(&condensed, &y2)
    }
}

pub fn condense_extract<C: SeededFunction, E: SeededFunction>(c: C, e: E) -> Result<CondenseExtract<C, E>> {
    CondenseExtract::new(c, e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HighEntropySpec {
    pub n: usize,
    /// Entropy deficiency: the source has at least `n - b` bits.
    pub b: usize,
    pub epsilon: f64,
    /// Entropy required of `x2` given a good prefix, `n/2 - b - log2(1/ε)`.
    pub block_entropy: f64,
    pub e1: ExtractorSpec,
    pub e2: ExtractorSpec,
    pub error_budget: f64,
}

impl HighEntropySpec {
    pub fn seed_len(&self) -> usize {
        self.e2.t
    }
    pub fn output_len(&self) -> usize {
        self.e1.m
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

pub type HighEntropyExtractor = BlockComposed<TrevisanExtractor, TrevisanExtractor>;

pub fn build_high_entropy_extractor(n: usize, b: usize, epsilon: f64) -> Result<HighEntropySpec> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("source length must be even and positive, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameters(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let half = n / 2;
    let block_entropy = half as f64 - b as f64 - (1.0 / epsilon).log2();
    if block_entropy <= 0.0 {
        return Err(Error::Infeasible(format!(
            "need b < n/2 - log2(1/epsilon): n/2 - b - log2(1/epsilon) = {block_entropy}"
        )));
    }
    let m1 = (half - b).div_ceil(2);
    let e1 = build_trevisan(Preset::Thm42, half, m1, epsilon)?;
    let e2 = build_trevisan(Preset::Thm43, half, e1.t, epsilon)?;
    Ok(HighEntropySpec {
        n,
        b,
        epsilon,
        block_entropy,
        e1,
        e2,
        error_budget: 3.0 * epsilon,
    })
}

pub fn high_entropy_extractor(spec: &HighEntropySpec) -> Result<HighEntropyExtractor> {
    let e1 = TrevisanExtractor::new(spec.e1.clone())?;
    let e2 = TrevisanExtractor::new(spec.e2.clone())?;
    if e1.input_len() * 2 != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "blocks of {} bits do not split a {}-bit source",
            e1.input_len(),
            spec.n
        )));
    }
    BlockComposed::new(e1, e2)
}

/// The bound `2^(n/2) · 2^k / 2^(n-b)` on the probability of a bad prefix,
/// with `k = n/2 - b - L` and `ε = 2^-L`. Exact; `n` must be even.
pub fn prefix_bad_bound(n: u32, b: u32, log_inv_eps: u32) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let pow2 = |e: i64| -> BigRational {
        if e >= 0 {
            Pow::pow(&two, e as u64)
        } else {
            BigRational::one() / Pow::pow(&two, (-e) as u64)
        }
    };
    let half = n as i64 / 2;
    let k = half - b as i64 - log_inv_eps as i64;
    pow2(half) * pow2(k) / pow2(n as i64 - b as i64)
}

/// `ζ = (1 - 1/(2(1-β))) / 2`.
pub fn default_zeta(beta: f64) -> f64 {
    0.5 * (1.0 - 1.0 / (2.0 * (1.0 - beta)))
}

/// `α = 2(1-β)(1-ζ) - 1`.
pub fn pipeline_alpha(beta: f64, zeta: f64) -> f64 {
    2.0 * (1.0 - beta) * (1.0 - zeta) - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineSpec {
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub zeta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub condenser: CondenserSpec,
    pub extractor: HighEntropySpec,
    /// Total seed, condenser seed followed by extractor seed.
    pub t: usize,
    pub m: usize,
    pub error_total: f64,
    /// `2^(-k^β)`; runs below it are outside the asymptotic regime.
    pub epsilon_floor: f64,
    pub epsilon_in_regime: bool,
    pub roundings: Vec<String>,
}

impl PipelineSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

pub type PipelineExtractor = CondenseExtract<GuvCondenser, HighEntropyExtractor>;

pub fn build_pipeline(n: usize, k: usize, beta: f64, epsilon: f64) -> Result<PipelineSpec> {
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::InvalidParameters(format!("beta must satisfy 0 <= beta < 1/2, got {beta}")));
    }
    let zeta = default_zeta(beta);
    let alpha = pipeline_alpha(beta, zeta);
    let mut roundings = Vec::new();
    let mut condenser = build_condenser(n, k, epsilon, alpha)?;
    let d = condenser.seed_len();
    if (d + condenser.output_len()) % 2 == 1 {
        if condenser.output_symbols == condenser.message_symbols {
            return Err(Error::Infeasible(format!(
                "strong form has odd length {} and no spare output symbol",
                d + condenser.output_len()
            )));
        }
        condenser.output_symbols += 1;
        roundings.push(format!(
            "output symbols raised to {} so the strong form splits into equal halves",
            condenser.output_symbols
        ));
    }
    let big_n = d + condenser.output_len();
    let kept = ((1.0 - beta) * k as f64).floor() as usize;
    roundings.push(format!("(1-beta)k = {} rounded down to {kept}", (1.0 - beta) * k as f64));
    let deficiency = big_n - d - kept;
    roundings.push(format!(
        "inner source of {big_n} bits credited with {} bits, deficiency {deficiency}",
        d + kept
    ));
    let extractor = build_high_entropy_extractor(big_n, deficiency, epsilon).map_err(|e| match e {
        Error::Infeasible(msg) => Error::Infeasible(format!("inner extractor on {big_n} bits: {msg}")),
        other => other,
    })?;
    roundings.push(format!(
        "first-block output ceil(({} - {deficiency}) / 2) = {}",
        big_n / 2,
        extractor.e1.m
    ));
    let epsilon_floor = 2f64.powf(-(k as f64).powf(beta));
    Ok(PipelineSpec {
        n,
        k,
        beta,
        zeta,
        alpha,
        epsilon,
        t: d + extractor.seed_len(),
        m: extractor.output_len(),
        condenser,
        extractor,
        error_total: 5.0 * epsilon,
        epsilon_floor,
        epsilon_in_regime: epsilon >= epsilon_floor,
        roundings,
    })
}

pub fn pipeline_extractor(spec: &PipelineSpec) -> Result<PipelineExtractor> {
    CondenseExtract::new(
        GuvCondenser::new(spec.condenser.clone())?,
        high_entropy_extractor(&spec.extractor)?,
    )
}
