use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{extractor_distance_weighted, WeightedSource};
use super::joint::JointTable;
use super::source::Budget;
use super::approx;
use crate::error::{Error, Result};
use crate::extractor::{FnWord, WordFunction};

/// Both sides of one inequality `lhs <= rhs`, exact and approximate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub lhs_approx: f64,
    pub rhs_approx: f64,
    pub slack: f64,
    pub pass: bool,
}

impl LemmaCheck {
    fn new(name: &str, lhs: &BigRational, rhs: &BigRational) -> Self {
        Self {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            lhs_approx: approx(lhs),
            rhs_approx: approx(rhs),
            slack: approx(&(rhs - lhs)),
            pass: lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaReport {
    pub x_bits: u32,
    pub side_symbols: usize,
    pub prefix_bits: u32,
    pub checks: Vec<LemmaCheck>,
    pub all_pass: bool,
}

fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << e as usize)
}

/// `E(x, y) = <x, y>` over GF(2), one output bit and an `n`-bit seed.
pub fn inner_product_probe(n: usize) -> FnWord<impl Fn(u64, u64) -> u64 + Sync> {
    FnWord::new(n, n, 1, |x, y| ((x & y).count_ones() & 1) as u64)
}

/// Checks the classical min-entropy inequalities on `j`, with `x` split
/// into its low `p` bits `x1` and the remaining bits `x2`:
///
/// * storage bound: `Σ_s max_x Pr[x,s] <= 2^b · max_x Pr[x]` with
///   `b = ceil(log2 |S|)`;
/// * cutting a suffix: guessing `x1` from `s` succeeds with probability at
///   most `2^(n-p)` times the probability of guessing `x`;
/// * bad prefixes: for every threshold `g` reached by the conditional
///   guessing probability `G(x1)` of `x2` given `x1` and `s`,
///   `Pr[G(X1) >= g] · g <= 2^p · Σ_s max_x Pr[x,s]`;
/// * convexity: the probe's distance on `j` is at most the weighted sum of
///   its distances on the flat layers of the source.
pub fn lemma_suite<F: WordFunction>(j: &JointTable, p: u32, probe: &F, budget: &Budget) -> Result<LemmaReport> {
    let n = j.x_bits();
    if p > n {
        return Err(Error::InvalidParameters(format!("prefix of {p} bits from a {n}-bit source")));
    }
    if probe.input_bits() != n as usize {
        return Err(Error::DimensionMismatch(format!(
            "probe takes {} bits, table has {n}",
            probe.input_bits()
        )));
    }
    let guess = j.guessing_probability();
    let px = j.x_marginal();
    let mut checks = Vec::new();

    let b = (j.s_size() as u64).next_power_of_two().trailing_zeros();
    checks.push(LemmaCheck::new("storage bound", &guess, &(pow2(b) * px.max_prob())));

    let prefix = j.prefix_table(p)?;
    checks.push(LemmaCheck::new(
        "cutting a suffix",
        &prefix.guessing_probability(),
        &(pow2(n - p) * &guess),
    ));

    checks.push(bad_prefix_check(j, p, &guess));
    checks.push(convexity_check(j, probe, budget)?);

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(LemmaReport {
        x_bits: n,
        side_symbols: j.s_size(),
        prefix_bits: p,
        checks,
        all_pass,
    })
}

fn bad_prefix_check(j: &JointTable, p: u32, guess: &BigRational) -> LemmaCheck {
    let n = j.x_bits();
    let mask = (1u64 << p) - 1;
    // (Pr[x1], G(x1)) for prefixes with positive mass
    let mut prefixes: Vec<(BigRational, BigRational)> = Vec::new();
    for x1 in 0..1u64 << p {
        let mass: BigRational = (0..1u64 << (n - p))
            .flat_map(|x2| (0..j.s_size()).map(move |s| (x2, s)))
            .map(|(x2, s)| j.get(x1 | (x2 << p), s))
            .sum();
        if mass.is_zero() {
            continue;
        }
        let best: BigRational = (0..j.s_size())
            .map(|s| {
                (0..1u64 << (n - p))
                    .map(|x2| j.get((x1 & mask) | (x2 << p), s))
                    .max()
                    .cloned()
                    .unwrap_or_else(BigRational::zero)
            })
            .sum();
        let g = best / &mass;
        prefixes.push((mass, g));
    }
    let rhs = pow2(p) * guess;
    let mut worst = BigRational::zero();
    for (_, g) in &prefixes {
        let bad: BigRational = prefixes.iter().filter(|(_, h)| h >= g).map(|(m, _)| m).sum();
        let lhs = bad * g;
        if lhs > worst {
            worst = lhs;
        }
    }
    LemmaCheck::new("bad prefixes", &worst, &rhs)
}

fn convexity_check<F: WordFunction>(j: &JointTable, probe: &F, budget: &Budget) -> Result<LemmaCheck> {
    let n = j.x_bits();
    let px = j.x_marginal();
    let mut levels: Vec<BigRational> = px.support().map(|(_, q)| q.clone()).collect();
    levels.sort();
    levels.dedup();
    levels.reverse();
    let whole = extractor_distance_weighted(probe, &WeightedSource::from_joint(j)?, budget)?;
    let mut mixed = BigRational::zero();
    for (i, level) in levels.iter().enumerate() {
        let next = levels.get(i + 1).cloned().unwrap_or_else(BigRational::zero);
        let layer: Vec<u64> = px.support().filter(|(_, q)| *q >= level).map(|(x, _)| x).collect();
        let size = BigRational::from_integer(BigInt::from(layer.len()));
        let alpha = (level - &next) * &size;
        let mut probs = vec![BigRational::zero(); (1usize << n) * j.s_size()];
        for &x in &layer {
            let px_x = px.prob(x);
            for s in 0..j.s_size() {
                probs[x as usize * j.s_size() + s] = j.get(x, s) / &px_x / &size;
            }
        }
        let component = JointTable::new(n, j.s_size(), probs)?;
        let d = extractor_distance_weighted(probe, &WeightedSource::from_joint(&component)?, budget)?;
        mixed += alpha * d;
    }
    Ok(LemmaCheck::new("convexity", &whole, &mixed))
}

/// Table with small random integer weights, about a third of them zero.
pub fn random_joint_table(x_bits: u32, s_size: usize, rng: &mut ChaCha8Rng) -> JointTable {
    loop {
        let weights: Vec<u64> = (0..(1usize << x_bits) * s_size)
            .map(|_| if rng.gen_bool(1.0 / 3.0) { 0 } else { rng.gen_range(1..=9) })
            .collect();
        if let Ok(t) = JointTable::from_weights(x_bits, s_size, &weights) {
            return t;
        }
    }
}
