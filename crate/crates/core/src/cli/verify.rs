//! Verification suites behind `verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::codes::{code_distance, CodeSpec};
use crate::compose::{pipeline_extractor, PipelineSpec};
use crate::condenser::GuvCondenser;
use crate::designs::{verify_design, Design, DesignReport};
use crate::error::{Error, Result};
use crate::extractor::{SeededFunction, WordFunction};
use crate::oracle::{
    approx, extractor_distance, injective_fraction, inner_product_probe, lemma_suite, output_distance_to_min_entropy,
    random_joint_table, Budget, FiniteDistribution, FlatSource, JointTable, LemmaReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 4,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DesignVerdict {
    pub status: Status,
    pub m: usize,
    pub t: usize,
    pub l: usize,
    pub report: DesignReport,
}

pub fn verify_design_doc(d: &Design) -> DesignVerdict {
    let report = verify_design(d);
    DesignVerdict {
        status: Status::from_bool(report.valid),
        m: d.m(),
        t: d.t,
        l: d.l,
        report,
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CodeVerdict {
    pub status: Status,
    pub field_width: u32,
    pub message_symbols: usize,
    pub codeword_bits: u64,
    pub min_weight: u64,
    pub designed_distance: String,
}

/// Exhaustive minimum codeword weight; by linearity this is the minimum
/// distance.
pub fn verify_code(spec: &CodeSpec, budget: &Budget) -> Result<CodeVerdict> {
    let bits = spec.message_bits();
    if bits > 40 || spec.index_bits() > 26 {
        return Err(Error::ResourceLimit(format!("{bits}-bit messages with 2^{} codeword bits", spec.index_bits())));
    }
    budget.check_evaluations((1u128 << bits) << spec.index_bits())?;
    let mut min_weight = u64::MAX;
    for msg in 1..1u64 << bits {
        let words = spec.message(&BitString::from_u64(msg, bits))?.codeword_words()?;
        let weight: u64 = words.iter().map(|w| w.count_ones() as u64).sum();
        min_weight = min_weight.min(weight);
    }
    let len = 1u64 << spec.index_bits();
    let designed = code_distance(spec);
    // min_weight / len >= numer / denom
    let ok = bits == 0 || (min_weight as u128) * (*designed.denom() as u128) >= (*designed.numer() as u128) * len as u128;
    Ok(CodeVerdict {
        status: Status::from_bool(ok),
        field_width: spec.field_width,
        message_symbols: spec.message_symbols,
        codeword_bits: len,
        min_weight,
        designed_distance: designed.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractorVerdict {
    pub status: Status,
    pub epsilon: f64,
    pub sources: usize,
    pub k: u32,
    pub max_distance: String,
    pub max_distance_approx: f64,
    pub distances: Vec<f64>,
}

/// Exact distance on every source; passes when none exceeds `epsilon`.
pub fn verify_extractor<F: WordFunction>(
    f: &F,
    sources: &[FlatSource],
    epsilon: f64,
    budget: &Budget,
) -> Result<ExtractorVerdict> {
    let mut worst = BigRational::zero();
    let mut distances = Vec::with_capacity(sources.len());
    for s in sources {
        let d = extractor_distance(f, s, budget)?;
        distances.push(approx(&d));
        if d > worst {
            worst = d;
        }
    }
    let eps = BigRational::from_float(epsilon).ok_or_else(|| Error::InvalidParameters(format!("epsilon {epsilon}")))?;
    Ok(ExtractorVerdict {
        status: Status::from_bool(worst <= eps),
        epsilon,
        sources: sources.len(),
        k: sources.first().map_or(0, |s| s.k()),
        max_distance: worst.to_string(),
        max_distance_approx: approx(&worst),
        distances,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CondenserVerdict {
    pub status: Status,
    pub epsilon: f64,
    pub sources: usize,
    pub k: usize,
    pub min_injective_fraction: f64,
    pub max_distance_to_min_entropy: f64,
}

/// Unique-neighbor fraction `>= 1 - ε` and distance to `d + k` bits of
/// min-entropy `<= ε` on every source.
pub fn verify_condenser(c: &GuvCondenser, sources: &[FlatSource], budget: &Budget) -> Result<CondenserVerdict> {
    let spec = c.spec();
    let words = c.strong_words()?;
    let eps = BigRational::from_float(spec.epsilon).ok_or_else(|| Error::InvalidParameters("epsilon".into()))?;
    let kappa = (spec.seed_len() + spec.target_entropy) as u32;
    let mut min_inj = BigRational::one();
    let mut max_dist = BigRational::zero();
    for s in sources {
        if s.k() as usize > spec.target_entropy {
            return Err(Error::InvalidParameters(format!(
                "source with k={} exceeds the condenser's {}",
                s.k(),
                spec.target_entropy
            )));
        }
        let inj = injective_fraction(&words, s, budget)?;
        let dist = output_distance_to_min_entropy(&words, s, kappa, budget)?;
        min_inj = min_inj.min(inj);
        max_dist = max_dist.max(dist);
    }
    let ok = min_inj >= BigRational::one() - &eps && max_dist <= eps;
    Ok(CondenserVerdict {
        status: Status::from_bool(ok),
        epsilon: spec.epsilon,
        sources: sources.len(),
        k: spec.target_entropy,
        min_injective_fraction: approx(&min_inj),
        max_distance_to_min_entropy: approx(&max_dist),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaVerdict {
    pub status: Status,
    pub tables: usize,
    pub violations: usize,
    pub reports: Vec<LemmaReport>,
}

/// Hand-built tables over 3-bit sources: full copy of a uniform source,
/// independent side information, and a one-bit leak.
pub fn adversarial_tables() -> Vec<JointTable> {
    let uniform = FiniteDistribution::uniform(8).expect("small domain");
    let skewed = FiniteDistribution::from_weights(8, (0..8).map(|x| (x, 1 + (x % 4)))).expect("positive weights");
    vec![
        JointTable::from_channel(&uniform, 8, |x| (0..8).map(|s| (s == x) as u64).collect()).expect("valid"),
        JointTable::from_channel(&skewed, 3, |_| vec![2, 1, 1]).expect("valid"),
        JointTable::from_channel(&skewed, 2, |x| if x & 1 == 0 { vec![1, 0] } else { vec![0, 1] }).expect("valid"),
    ]
}

/// Lemma suite on the hand-built tables plus `random` random tables with
/// sources of 3 or 4 bits and up to 4 side symbols.
pub fn verify_lemmas(random: usize, test_seed: u64, budget: &Budget) -> Result<LemmaVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(test_seed);
    let mut tables = adversarial_tables();
    for _ in 0..random {
        let x_bits = rng.gen_range(3..=4);
        let s_size = rng.gen_range(1..=4);
        tables.push(random_joint_table(x_bits, s_size, &mut rng));
    }
    let mut reports = Vec::with_capacity(tables.len());
    for (i, j) in tables.iter().enumerate() {
        let p = (i as u32) % (j.x_bits() + 1);
        reports.push(lemma_suite(j, p, &inner_product_probe(j.x_bits() as usize), budget)?);
    }
    let violations = reports.iter().filter(|r| !r.all_pass).count();
    Ok(LemmaVerdict {
        status: Status::from_bool(violations == 0),
        tables: reports.len(),
        violations,
        reports,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineVerdict {
    pub status: Status,
    pub inputs: usize,
    pub mismatches: usize,
    pub n: usize,
    pub t: usize,
    pub m: usize,
}

/// Dimension chain plus bit-exact replay of condense-then-extract against
/// running the pieces by hand on `inputs` random inputs.
pub fn verify_pipeline(spec: &PipelineSpec, inputs: usize, test_seed: u64) -> Result<PipelineVerdict> {
    let e = pipeline_extractor(spec)?;
    let c = e.condenser();
    let inner = e.extractor();
    let mut rng = ChaCha8Rng::seed_from_u64(test_seed);
    let mut mismatches = 0;
    for _ in 0..inputs {
        let x = random_bits(&mut rng, spec.n);
        let y1 = random_bits(&mut rng, c.seed_len());
        let y2 = random_bits(&mut rng, inner.seed_len());
        let direct = e.apply(&x, &y1.concat(&y2))?;
        let condensed = c.strong_form(&x, &y1)?;
        let half = inner.first().input_len();
        let mid = inner.second().apply(&condensed.slice(half, 2 * half)?, &y2)?;
        let manual = inner.first().apply(&condensed.slice(0, half)?, &mid)?;
        if direct != manual || direct.len() != spec.m {
            mismatches += 1;
        }
    }
    Ok(PipelineVerdict {
        status: Status::from_bool(mismatches == 0),
        inputs,
        mismatches,
        n: spec.n,
        t: spec.t,
        m: spec.m,
    })
}

pub(crate) fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitString {
    let mut bytes = vec![0u8; len.div_ceil(8)];
    rng.fill(&mut bytes[..]);
    BitString::from_bytes(&bytes, len).expect("enough bytes")
}

/// `2^k` as an exact rational, for callers comparing against powers of two.
pub fn pow2(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::FnWord;
    use crate::oracle::sample_flat_sources;

    #[test]
    fn constant_stub_fails_at_one_half() {
        let stub = FnWord::new(8, 4, 1, |_, _| 0);
        let sources = sample_flat_sources(8, 4, 3, 1).unwrap();
        let v = verify_extractor(&stub, &sources, 0.25, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Fail);
        assert_eq!(v.max_distance, "1/2");
        assert_eq!(v.status.exit_code(), 1);
    }

    #[test]
    fn small_codes_pass() {
        for (w, n) in [(2, 1), (2, 3), (3, 2)] {
            let v = verify_code(&CodeSpec::new(w, n).unwrap(), &Budget::default()).unwrap();
            assert_eq!(v.status, Status::Pass, "{v:?}");
        }
    }

    #[test]
    fn lemma_suite_passes_small_batch() {
        let v = verify_lemmas(5, 1, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Pass);
        assert_eq!(v.tables, 8);
    }
}
