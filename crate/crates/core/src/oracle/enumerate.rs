use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::distribution::FiniteDistribution;
use super::joint::JointTable;
use super::source::{Budget, FlatSource};
use crate::designs::BitGather;
use crate::error::{Error, Result};
use crate::extractor::WordFunction;

/// Seeds per work unit of the distance sweep.
const SEED_BLOCK: u64 = 1 << 12;

/// Source with integer weights, split by side-information symbol: group `s`
/// lists `(x, weight)` with weight proportional to `Pr[x, s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSource {
    pub n: u32,
    pub groups: Vec<Vec<(u64, u64)>>,
}

impl WeightedSource {
    pub fn from_flat(x: &FlatSource) -> Self {
        Self {
            n: x.n(),
            groups: vec![x.support().iter().map(|&v| (v, 1)).collect()],
        }
    }

    pub fn from_distribution(n: u32, d: &FiniteDistribution) -> Result<Self> {
        let entries: Vec<(u64, &BigRational)> = d.support().collect();
        let weights = integer_weights(entries.iter().map(|(_, p)| *p))?;
        Ok(Self {
            n,
            groups: vec![entries.iter().map(|(x, _)| *x).zip(weights).collect()],
        })
    }

    pub fn from_joint(j: &JointTable) -> Result<Self> {
        let cells: Vec<(u64, usize, &BigRational)> = (0..1u64 << j.x_bits())
            .flat_map(|x| (0..j.s_size()).map(move |s| (x, s)))
            .map(|(x, s)| (x, s, j.get(x, s)))
            .filter(|(_, _, p)| !p.is_zero())
            .collect();
        let weights = integer_weights(cells.iter().map(|(_, _, p)| *p))?;
        let mut groups = vec![Vec::new(); j.s_size()];
        for ((x, s, _), w) in cells.iter().zip(weights) {
            groups[*s].push((*x, w));
        }
        Ok(Self { n: j.x_bits(), groups })
    }

    pub fn total_weight(&self) -> u128 {
        self.groups.iter().flatten().map(|&(_, w)| w as u128).sum()
    }

    fn points(&self) -> u128 {
        self.groups.iter().map(|g| g.len() as u128).sum()
    }
}

/// Scales probabilities by the lcm of their denominators.
fn integer_weights<'a, I: Iterator<Item = &'a BigRational> + Clone>(probs: I) -> Result<Vec<u64>> {
    let lcm = probs.clone().fold(BigInt::from(1), |acc, p| acc.lcm(p.denom()));
    probs
        .map(|p| {
            (p.numer() * (&lcm / p.denom()))
                .to_u64()
                .ok_or_else(|| Error::ResourceLimit("probabilities need weights beyond 64 bits".into()))
        })
        .collect()
}

/// Exact distance of `(Y, E(X, Y), S)` from `(U, U, S)`, where `Y` ranges
/// over the seed positions `f` depends on.
pub fn extractor_distance_weighted<F: WordFunction>(f: &F, src: &WeightedSource, budget: &Budget) -> Result<BigRational> {
    if src.n as usize != f.input_bits() {
        return Err(Error::DimensionMismatch(format!(
            "source has {} bits, function takes {}",
            src.n,
            f.input_bits()
        )));
    }
    let ts = f.seed_support().len() as u32;
    let m = f.output_bits() as u32;
    if ts > 40 || m > 20 {
        return Err(Error::ResourceLimit(format!(
            "enumeration over {ts} seed bits with {m} output bits"
        )));
    }
    let total = src.total_weight();
    if total == 0 || total >= 1 << 63 {
        return Err(Error::InvalidDistribution(format!("total source weight {total}")));
    }
    budget.check_evaluations(src.points() << ts)?;
    let seeds = 1u64 << ts;
    let block = SEED_BLOCK.min(seeds);
    let per_worker = (block << m) as u128 * 8;
    budget.check_memory(per_worker * rayon::current_num_threads() as u128)?;

    let mut numerator = BigInt::zero();
    for group in &src.groups {
        if group.is_empty() {
            continue;
        }
        let ws: u128 = group.iter().map(|&(_, w)| w as u128).sum();
        let prepared: Vec<(F::Prepared, u64)> = group.iter().map(|&(x, w)| (f.prepare(x), w)).collect();
        let part: u128 = (0..seeds / block)
            .into_par_iter()
            .map(|b| {
                let y0 = b * block;
                let mut counts = vec![0u64; (block as usize) << m];
                for (p, w) in &prepared {
                    for dy in 0..block {
                        let e = f.eval(p, y0 + dy);
                        counts[((dy as usize) << m) | e as usize] += w;
                    }
                }
                counts
                    .iter()
                    .map(|&c| ((c as u128) << m).abs_diff(ws))
                    .sum::<u128>()
            })
            .sum();
        numerator += BigInt::from(part);
    }
    let denom = (BigInt::from(2u8) * BigInt::from(total)) << (ts + m) as usize;
    Ok(BigRational::new(numerator, denom))
}

/// Exact distance of `(Y, E(X, Y))` from uniform for a flat source.
pub fn extractor_distance<F: WordFunction>(f: &F, x: &FlatSource, budget: &Budget) -> Result<BigRational> {
    extractor_distance_weighted(f, &WeightedSource::from_flat(x), budget)
}

/// As [`extractor_distance`], jointly with the side information of `j`,
/// whose source marginal must be the flat source.
pub fn extractor_distance_with_side_info<F: WordFunction>(
    f: &F,
    x: &FlatSource,
    j: Option<&JointTable>,
    budget: &Budget,
) -> Result<BigRational> {
    match j {
        None => extractor_distance(f, x, budget),
        Some(j) => {
            if j.x_bits() != x.n() || j.x_marginal() != x.to_distribution() {
                return Err(Error::DimensionMismatch(
                    "side-information table does not have the flat source as its marginal".into(),
                ));
            }
            extractor_distance_weighted(f, &WeightedSource::from_joint(j)?, budget)
        }
    }
}

/// Outputs of `f` on every `(x, y)` in `X × {0,1}^t`, sorted.
fn sorted_outputs<F: WordFunction>(f: &F, x: &FlatSource, budget: &Budget) -> Result<Vec<u64>> {
    if x.n() as usize != f.input_bits() {
        return Err(Error::DimensionMismatch(format!(
            "source has {} bits, function takes {}",
            x.n(),
            f.input_bits()
        )));
    }
    let t = f.seed_bits();
    if t > 40 {
        return Err(Error::ResourceLimit(format!("enumeration over {t} seed bits")));
    }
    let pairs = (x.support().len() as u128) << t;
    budget.check_evaluations(pairs)?;
    budget.check_memory(pairs * 8)?;
    let support = f.seed_support();
    let full = support.len() == t && support.iter().enumerate().all(|(i, &p)| i == p);
    let gather = (!full).then(|| BitGather::new(&support));
    let mut out: Vec<u64> = x
        .support()
        .par_iter()
        .flat_map_iter(|&v| {
            let p = f.prepare(v);
            let gather = gather.clone();
            (0..1u64 << t)
                .map(move |y| f.eval(&p, gather.as_ref().map_or(y, |g| g.gather_word(y))))
                .collect::<Vec<_>>()
        })
        .collect();
    out.par_sort_unstable();
    Ok(out)
}

fn run_lengths(sorted: &[u64]) -> impl Iterator<Item = (u64, u64)> + '_ {
    sorted
        .chunk_by(|a, b| a == b)
        .map(|run| (run[0], run.len() as u64))
}

/// Distribution of `f(X, U_t)` over `{0,1}^m`.
pub fn output_distribution<F: WordFunction>(f: &F, x: &FlatSource, budget: &Budget) -> Result<FiniteDistribution> {
    let m = f.output_bits() as u32;
    if m > 64 {
        return Err(Error::ResourceLimit(format!("{m} output bits")));
    }
    let sorted = sorted_outputs(f, x, budget)?;
    FiniteDistribution::from_weights(1u128 << m, run_lengths(&sorted))
}

/// Fraction of `X × {0,1}^t` whose image under `f` has no other preimage in
/// `X × {0,1}^t`.
pub fn injective_fraction<F: WordFunction>(f: &F, x: &FlatSource, budget: &Budget) -> Result<BigRational> {
    let sorted = sorted_outputs(f, x, budget)?;
    let unique = run_lengths(&sorted).filter(|&(_, c)| c == 1).count();
    Ok(BigRational::new(BigInt::from(unique), BigInt::from(sorted.len())))
}

/// Distance of `f(X, U_t)` from the nearest distribution with `kappa` bits
/// of min-entropy.
pub fn output_distance_to_min_entropy<F: WordFunction>(
    f: &F,
    x: &FlatSource,
    kappa: u32,
    budget: &Budget,
) -> Result<BigRational> {
    if kappa as usize > f.output_bits() || kappa > 100 {
        return Err(Error::InvalidParameters(format!(
            "{kappa} bits of min-entropy in {} output bits",
            f.output_bits()
        )));
    }
    let sorted = sorted_outputs(f, x, budget)?;
    let total = sorted.len() as u128;
    let excess: u128 = run_lengths(&sorted)
        .map(|(_, c)| ((c as u128) << kappa).saturating_sub(total))
        .sum();
    Ok(BigRational::new(BigInt::from(excess), BigInt::from(total) << kappa as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::FnWord;
    use crate::hashing::ToeplitzSpec;
    use crate::oracle::{distance_to_min_entropy, stat_distance};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Independent reference: build both joint distributions explicitly and
    /// take their statistical distance.
    fn reference_distance(n: u32, t: u32, m: u32, f: impl Fn(u64, u64) -> u64, x: &FlatSource) -> BigRational {
        let joint = FiniteDistribution::from_weights(
            1u128 << (t + m),
            x.support()
                .iter()
                .flat_map(|&v| (0..1u64 << t).map(move |y| (y, v)))
                .map(|(y, v)| ((y << m) | f(v, y), 1)),
        )
        .unwrap();
        let _ = n;
        let uniform = FiniteDistribution::uniform(1u64 << (t + m)).unwrap();
        stat_distance(&joint, &uniform).unwrap()
    }

    #[test]
    fn constant_zero_is_half() {
        let f = FnWord::new(4, 3, 1, |_, _| 0);
        let x = FlatSource::new(4, 2, vec![1, 5, 9, 12]).unwrap();
        assert_eq!(extractor_distance(&f, &x, &Budget::default()).unwrap(), r(1, 2));
    }

    #[test]
    fn seed_bit_output_is_half() {
        let f = FnWord::new(4, 3, 1, |_, y| y & 1);
        let x = FlatSource::full(4).unwrap();
        assert_eq!(extractor_distance(&f, &x, &Budget::default()).unwrap(), r(1, 2));
    }

    /// Toeplitz on the full cube: a seed whose matrix has rank `r` leaves the
    /// output `2^(m - r)`-to-one on `2^r` values, so the seed contributes
    /// `1 - 2^(r - m)` and the distance is the average over seeds.
    #[test]
    fn toeplitz_full_cube_matches_rank_formula() {
        for (n, m) in [(3u32, 1u32), (3, 2), (4, 2), (5, 3)] {
            let spec = ToeplitzSpec::new(n as usize, m as usize).unwrap();
            let words = spec.words().unwrap();
            let t = spec.seed_len() as u32;
            let mut expected = BigRational::zero();
            for seed in 0..1u64 << t {
                let images: std::collections::BTreeSet<u64> =
                    (0..1u64 << n).map(|x| words.eval(&words.prepare(x), seed)).collect();
                let rank = images.len().trailing_zeros();
                expected += r(1, 1) - BigRational::new(1.into(), BigInt::from(1u64 << (m - rank)));
            }
            expected /= BigRational::from_integer(BigInt::from(1u64 << t));
            let got = extractor_distance(&words, &FlatSource::full(n).unwrap(), &Budget::default()).unwrap();
            assert_eq!(got, expected, "n={n} m={m}");
        }
    }

    #[test]
    fn agrees_with_explicit_joint_distribution() {
        let x = FlatSource::new(5, 3, vec![0, 3, 7, 8, 17, 21, 29, 30]).unwrap();
        let g = |v: u64, y: u64| ((v * 7 + y * 3) ^ (v >> 2)) & 3;
        let f = FnWord::new(5, 4, 2, g);
        assert_eq!(
            extractor_distance(&f, &x, &Budget::default()).unwrap(),
            reference_distance(5, 4, 2, g, &x)
        );
    }

    #[test]
    fn independent_side_info_changes_nothing() {
        let x = FlatSource::new(4, 2, vec![2, 3, 11, 14]).unwrap();
        let f = FnWord::new(4, 4, 1, |v, y| ((v & y).count_ones() & 1) as u64);
        let j = JointTable::from_channel(&x.to_distribution(), 3, |_| vec![1, 1, 2]).unwrap();
        let b = Budget::default();
        assert_eq!(
            extractor_distance_with_side_info(&f, &x, Some(&j), &b).unwrap(),
            extractor_distance(&f, &x, &b).unwrap()
        );
        let full_copy = JointTable::from_channel(&x.to_distribution(), 16, |v| {
            (0..16).map(|s| (s == v) as u64).collect()
        })
        .unwrap();
        // with x revealed, the output is determined by (x, y): distance 1/2
        assert_eq!(extractor_distance_with_side_info(&f, &x, Some(&full_copy), &b).unwrap(), r(1, 2));
    }

    #[test]
    fn partial_seed_support_factors_out() {
        struct LowBits;
        impl WordFunction for LowBits {
            type Prepared = u64;
            fn input_bits(&self) -> usize {
                4
            }
            fn seed_bits(&self) -> usize {
                6
            }
            fn output_bits(&self) -> usize {
                1
            }
            fn seed_support(&self) -> Vec<usize> {
                vec![1, 4]
            }
            fn prepare(&self, x: u64) -> u64 {
                x
            }
            fn eval(&self, x: &u64, y: u64) -> u64 {
                ((x & y) ^ (x >> 2) & y).count_ones() as u64 & 1
            }
        }
        let full = FnWord::new(4, 6, 1, |x, y| {
            let c = ((y >> 1) & 1) | (((y >> 4) & 1) << 1);
            ((x & c) ^ (x >> 2) & c).count_ones() as u64 & 1
        });
        let x = FlatSource::new(4, 2, vec![1, 6, 7, 13]).unwrap();
        let b = Budget::default();
        assert_eq!(extractor_distance(&LowBits, &x, &b).unwrap(), extractor_distance(&full, &x, &b).unwrap());
        assert_eq!(
            output_distribution(&LowBits, &x, &b).unwrap(),
            output_distribution(&full, &x, &b).unwrap()
        );
    }

    #[test]
    fn injectivity_examples() {
        let x = FlatSource::new(3, 2, vec![0, 2, 5, 7]).unwrap();
        let b = Budget::default();
        let injective = FnWord::new(3, 2, 5, |v, y| v | (y << 3));
        assert_eq!(injective_fraction(&injective, &x, &b).unwrap(), r(1, 1));
        let constant = FnWord::new(3, 2, 5, |_, _| 9);
        assert_eq!(injective_fraction(&constant, &x, &b).unwrap(), r(0, 1));
        // half the pairs collide in pairs
        let halving = FnWord::new(3, 2, 5, |v, y| if y == 0 { 0 } else { v | (y << 3) });
        assert_eq!(injective_fraction(&halving, &x, &b).unwrap(), r(3, 4));
    }

    #[test]
    fn capped_distance_matches_distribution_path() {
        let x = FlatSource::new(3, 2, vec![0, 2, 5, 7]).unwrap();
        let b = Budget::default();
        let f = FnWord::new(3, 2, 4, |v, y| (v * y + y) & 15);
        for kappa in 0..=4 {
            let d = output_distribution(&f, &x, &b).unwrap();
            assert_eq!(
                output_distance_to_min_entropy(&f, &x, kappa, &b).unwrap(),
                distance_to_min_entropy(&d, kappa).unwrap()
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = FnWord::new(4, 10, 1, |_, _| 0);
        let x = FlatSource::full(4).unwrap();
        let tight = Budget::default().with_evaluations(1000);
        assert!(matches!(extractor_distance(&f, &x, &tight), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(injective_fraction(&f, &x, &tight), Err(Error::BudgetExceeded { .. })));
    }
}
