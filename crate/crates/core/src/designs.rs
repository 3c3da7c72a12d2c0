//! Set families driving Trevisan's extractor.
//!
//! A design is a list of `m` subsets of `[t]`, each of size `l`. Standard
//! designs bound every pairwise intersection; weak designs bound, for every
//! set `S_i`, the sum `sum_{j<i} 2^|S_i ∩ S_j|` by `rho * (m - 1)`.
//!
//! Two constructions are provided. [`build_poly_design`] is the classic
//! construction from low-degree polynomials over GF(q): two distinct
//! polynomials of degree `< c` agree on at most `c - 1` points, so their
//! graphs share at most `c - 1` elements. [`build_greedy_weak_design`] adds
//! sets one at a time, each chosen element-by-element to minimise the growth
//! of the weak-design sum, and doubles the universe when it gets stuck.
//!
//! Every design carries the overlap statistic its builder measured, and
//! [`verify_design`] recomputes it from scratch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::field::Gf2m;

/// Seed of the choice sequence used by the greedy weak-design builder.
/// Stream `t` of this generator is used for universe size `t`.
pub const WEAK_DESIGN_SEED: u64 = 0x7e75_a11d_0000_0001;

/// Candidate orderings tried per set before the universe is doubled.
pub const WEAK_DESIGN_TRIALS: usize = 8;

/// Universe doublings allowed before giving up.
pub const WEAK_DESIGN_MAX_DOUBLINGS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Standard,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Design {
    /// Universe size.
    pub t: usize,
    /// Size of every set.
    pub l: usize,
    pub kind: DesignKind,
    /// Sorted index lists.
    pub sets: Vec<Vec<usize>>,
    /// Standard: max pairwise overlap. Weak: max weak sum divided by `m - 1`.
    pub certified_overlap: f64,
}

impl Design {
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("design serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DesignReport {
    pub max_overlap: usize,
    pub max_weak_sum: u128,
    pub max_weak_sum_ratio: f64,
    pub valid: bool,
    pub reason: Option<String>,
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(t: usize, set: &[usize]) -> Self {
        let mut words = vec![0u64; t.div_ceil(64)];
        for &i in set {
            words[i / 64] |= 1 << (i % 64);
        }
        Self(words)
    }

    fn overlap(&self, other: &Bitset) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

fn weak_ratio(max_sum: u128, m: usize) -> f64 {
    if m <= 1 {
        0.0
    } else {
        max_sum as f64 / (m - 1) as f64
    }
}

/// `(max pairwise overlap, max_i sum_{j<i} 2^|S_i ∩ S_j|)`.
fn overlap_statistics(t: usize, sets: &[Vec<usize>]) -> (usize, u128) {
    let bits: Vec<Bitset> = sets.iter().map(|s| Bitset::new(t, s)).collect();
    let mut max_overlap = 0;
    let mut max_sum = 0u128;
    for i in 0..bits.len() {
        let mut sum = 0u128;
        for j in 0..i {
            let o = bits[i].overlap(&bits[j]);
            max_overlap = max_overlap.max(o);
            sum += 1u128 << o;
        }
        max_sum = max_sum.max(sum);
    }
    (max_overlap, max_sum)
}

fn pow_at_least(q: u64, m: usize) -> u32 {
    let mut c = 1;
    let mut reach = q as u128;
    while reach < m as u128 {
        reach *= q as u128;
        c += 1;
    }
    c
}

/// Polynomial design: `q` is the smallest power of two `>= max(l, 2)`, `c` the
/// smallest degree bound with `q^c >= m`. Set `i` is the graph of the
/// polynomial whose base-`q` digits (lowest first) are the digits of `i`,
/// restricted to the evaluation points `0..l`, with `(b, p(b))` encoded as
/// `b*q + p(b)`. Pairwise overlaps are at most `c - 1`.
pub fn build_poly_design(m: usize, l: usize) -> Result<Design> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParameters(format!(
            "poly design needs m >= 1 and l >= 1 (got m={m}, l={l})"
        )));
    }
    let q = (l.max(2) as u64).next_power_of_two();
    let width = q.trailing_zeros();
    if width > 16 {
        return Err(Error::ResourceLimit(format!(
            "set size {l} needs a universe of {q}^2 positions"
        )));
    }
    let field = Gf2m::new(width)?;
    let c = pow_at_least(q, m);
    let t = (q * q) as usize;
    let sets: Vec<Vec<usize>> = (0..m as u64)
        .map(|i| {
            let mut coeffs = Vec::with_capacity(c as usize);
            let mut rest = i;
            for _ in 0..c {
                coeffs.push((rest % q) as u32);
                rest /= q;
            }
            (0..l as u32)
                .map(|b| {
                    let v = coeffs.iter().rev().fold(0u32, |acc, &a| field.mul(acc, b) ^ a);
                    (b as u64 * q + v as u64) as usize
                })
                .collect()
        })
        .collect();
    let (max_overlap, _) = overlap_statistics(t, &sets);
    debug_assert!(max_overlap < c as usize || m == 1);
    Ok(Design {
        t,
        l,
        kind: DesignKind::Standard,
        sets,
        certified_overlap: max_overlap as f64,
    })
}

/// Degree bound `c` that [`build_poly_design`] uses for `(m, l)`.
pub fn poly_design_degree(m: usize, l: usize) -> u32 {
    pow_at_least((l.max(2) as u64).next_power_of_two(), m)
}

/// Greedy weak design with `sum_{j<i} 2^|S_i ∩ S_j| <= rho * (m - 1)` for all `i`.
///
/// Each set is grown one element at a time, always taking the unused
/// position whose inclusion increases the weak sum least; ties go to the
/// earlier position in a pseudorandom ordering drawn from [`WEAK_DESIGN_SEED`].
/// A finished set is kept only if its weak sum meets the bound. After
/// [`WEAK_DESIGN_TRIALS`] rejected orderings the universe doubles and
/// construction restarts.
pub fn build_greedy_weak_design(m: usize, l: usize, rho: f64, t_initial: usize) -> Result<Design> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParameters(format!(
            "weak design needs m >= 1 and l >= 1 (got m={m}, l={l})"
        )));
    }
    if rho.is_nan() || rho < 1.0 {
        return Err(Error::InvalidParameters(format!("rho must be >= 1, got {rho}")));
    }
    if l > 120 {
        return Err(Error::ResourceLimit(format!("set size {l} too large")));
    }
    let bound = rho * (m - 1) as f64;
    let mut t = t_initial.max(l);
    for _ in 0..=WEAK_DESIGN_MAX_DOUBLINGS {
        if let Some(sets) = greedy_attempt(m, l, t, bound) {
            let (_, max_sum) = overlap_statistics(t, &sets);
            return Ok(Design {
                t,
                l,
                kind: DesignKind::Weak,
                sets,
                certified_overlap: weak_ratio(max_sum, m),
            });
        }
        t *= 2;
    }
    Err(Error::ResourceLimit(format!(
        "no weak design with m={m}, l={l}, rho={rho} after {WEAK_DESIGN_MAX_DOUBLINGS} universe doublings"
    )))
}

fn greedy_attempt(m: usize, l: usize, t: usize, bound: f64) -> Option<Vec<Vec<usize>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(WEAK_DESIGN_SEED);
    rng.set_stream(t as u64);
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(m);
    // sets_at[p] = indices of accepted sets containing position p
    let mut sets_at: Vec<Vec<u32>> = vec![Vec::new(); t];
    let mut order: Vec<usize> = (0..t).collect();
    for i in 0..m {
        let mut accepted = None;
        for _ in 0..WEAK_DESIGN_TRIALS {
            order.shuffle(&mut rng);
            let (set, sum) = grow_set(l, i, &order, &sets_at);
            if sum as f64 <= bound {
                accepted = Some(set);
                break;
            }
        }
        let mut set = accepted?;
        set.sort_unstable();
        for &p in &set {
            sets_at[p].push(i as u32);
        }
        sets.push(set);
    }
    Some(sets)
}

fn grow_set(l: usize, existing: usize, order: &[usize], sets_at: &[Vec<u32>]) -> (Vec<usize>, u128) {
    let mut overlaps = vec![0u32; existing];
    let mut taken = vec![false; order.len()];
    let mut set = Vec::with_capacity(l);
    for _ in 0..l {
        let mut best: Option<(u128, usize)> = None;
        for &p in order {
            if taken[p] {
                continue;
            }
            let cost: u128 = sets_at[p].iter().map(|&j| 1u128 << overlaps[j as usize]).sum();
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, p));
                if cost == 0 {
                    break;
                }
            }
        }
        let (_, p) = best.expect("universe has at least l positions");
        taken[p] = true;
        for &j in &sets_at[p] {
            overlaps[j as usize] += 1;
        }
        set.push(p);
    }
    let sum = overlaps.iter().map(|&o| 1u128 << o).sum();
    (set, sum)
}

/// Recomputes overlap statistics from scratch and checks them against the
/// certified value and the structural invariants.
pub fn verify_design(d: &Design) -> DesignReport {
    let mut reason = None;
    for (i, s) in d.sets.iter().enumerate() {
        if s.len() != d.l {
            reason = Some(format!("set {i} has {} elements, expected {}", s.len(), d.l));
        } else if s.windows(2).any(|w| w[0] >= w[1]) {
            reason = Some(format!("set {i} is not strictly increasing"));
        } else if s.last().is_some_and(|&x| x >= d.t) {
            reason = Some(format!("set {i} has an index outside [0, {})", d.t));
        }
        if reason.is_some() {
            break;
        }
    }
    if reason.is_some() {
        return DesignReport {
            max_overlap: 0,
            max_weak_sum: 0,
            max_weak_sum_ratio: 0.0,
            valid: false,
            reason,
        };
    }
    let (max_overlap, max_sum) = overlap_statistics(d.t, &d.sets);
    let ratio = weak_ratio(max_sum, d.m());
    let recomputed = match d.kind {
        DesignKind::Standard => max_overlap as f64,
        DesignKind::Weak => ratio,
    };
    if recomputed != d.certified_overlap {
        reason = Some(format!(
            "certified overlap {} does not match recomputed {}",
            d.certified_overlap, recomputed
        ));
    }
    DesignReport {
        max_overlap,
        max_weak_sum: max_sum,
        max_weak_sum_ratio: ratio,
        valid: reason.is_none(),
        reason,
    }
}

/// Bits of `y` at the positions of `set`, in ascending position order,
/// packed LSB-first: the bit at `set[0]` becomes bit 0 of the result.
pub fn restrict_seed(y: &BitString, set: &[usize]) -> Result<u64> {
    if set.len() > 64 {
        return Err(Error::InvalidParameters(format!(
            "set of size {} does not fit a 64-bit index",
            set.len()
        )));
    }
    let mut idx = 0u64;
    for (k, &p) in set.iter().enumerate() {
        if y.get(p)? {
            idx |= 1 << k;
        }
    }
    Ok(idx)
}

/// Precomputed gather of a fixed list of bit positions out of a byte
/// buffer, one 256-entry table per touched byte.
#[derive(Debug, Clone)]
pub struct BitGather {
    tables: Vec<(usize, Box<[u64; 256]>)>,
}

impl BitGather {
    /// `positions[k]` is moved to bit `k` of the gathered word.
    pub fn new(positions: &[usize]) -> Self {
        assert!(positions.len() <= 64);
        let mut tables: Vec<(usize, Box<[u64; 256]>)> = Vec::new();
        for (k, &p) in positions.iter().enumerate() {
            let byte = p / 8;
            let slot = match tables.iter().position(|(b, _)| *b == byte) {
                Some(i) => i,
                None => {
                    tables.push((byte, Box::new([0u64; 256])));
                    tables.len() - 1
                }
            };
            let table = &mut tables[slot].1;
            for (v, entry) in table.iter_mut().enumerate() {
                if (v >> (p % 8)) & 1 == 1 {
                    *entry |= 1 << k;
                }
            }
        }
        Self { tables }
    }

    #[inline]
    pub fn gather_bytes(&self, bytes: &[u8]) -> u64 {
        self.tables
            .iter()
            .fold(0, |acc, (b, t)| acc | t[bytes[*b] as usize])
    }

    #[inline]
    pub fn gather_word(&self, word: u64) -> u64 {
        let bytes = word.to_le_bytes();
        self.tables
            .iter()
            .fold(0, |acc, (b, t)| acc | t[bytes[*b] as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent intersection count on sorted lists.
    fn overlap_naive(a: &[usize], b: &[usize]) -> usize {
        a.iter().filter(|x| b.contains(x)).count()
    }

    #[test]
    fn constant_polynomials_give_disjoint_sets() {
        let d = build_poly_design(4, 4).unwrap();
        assert_eq!(d.t, 16);
        for i in 0..4 {
            for j in 0..i {
                assert_eq!(overlap_naive(&d.sets[i], &d.sets[j]), 0);
            }
        }
        assert_eq!(d.certified_overlap, 0.0);
    }

    #[test]
    fn poly_design_q4_c2() {
        let d = build_poly_design(16, 4).unwrap();
        assert_eq!(poly_design_degree(16, 4), 2);
        let mut max = 0;
        for i in 0..16 {
            assert_eq!(d.sets[i].len(), 4);
            for j in 0..i {
                max = max.max(overlap_naive(&d.sets[i], &d.sets[j]));
            }
        }
        assert!(max <= 1);
        let r = verify_design(&d);
        assert!(r.valid, "{r:?}");
        assert_eq!(r.max_overlap, max);
    }

    #[test]
    fn poly_design_uses_first_l_points_when_q_exceeds_l() {
        let d = build_poly_design(3, 3).unwrap();
        assert_eq!(d.t, 16);
        // polynomial 1 is the constant 1: points (b, 1) for b < 3
        assert_eq!(d.sets[1], vec![1, 5, 9]);
    }

    #[test]
    fn verify_detects_tampering() {
        let mut d = build_poly_design(16, 4).unwrap();
        d.sets[3] = d.sets[2].clone();
        let r = verify_design(&d);
        assert!(!r.valid);
        assert_eq!(r.max_overlap, 4);

        let mut d = build_poly_design(4, 4).unwrap();
        d.sets[0].push(99);
        assert!(!verify_design(&d).valid);

        let mut d = build_poly_design(4, 4).unwrap();
        d.sets[0] = vec![3, 2, 1, 0];
        assert!(!verify_design(&d).valid);
    }

    #[test]
    fn identical_sets_overlap_fully() {
        let d = Design {
            t: 8,
            l: 3,
            kind: DesignKind::Standard,
            sets: vec![vec![0, 1, 2], vec![0, 1, 2]],
            certified_overlap: 3.0,
        };
        let r = verify_design(&d);
        assert!(r.valid);
        assert_eq!(r.max_overlap, 3);
    }

    #[test]
    fn weak_design_single_set() {
        let d = build_greedy_weak_design(1, 5, 1.0, 5).unwrap();
        assert_eq!(d.sets.len(), 1);
        assert_eq!(d.certified_overlap, 0.0);
        assert!(verify_design(&d).valid);
    }

    #[test]
    fn weak_design_large_universe_is_disjoint() {
        let d = build_greedy_weak_design(6, 4, 1.0, 24).unwrap();
        assert_eq!(d.t, 24);
        for i in 0..6 {
            for j in 0..i {
                assert_eq!(overlap_naive(&d.sets[i], &d.sets[j]), 0);
            }
        }
        // weak sum of set i is exactly i
        assert_eq!(d.certified_overlap, 1.0);
    }

    #[test]
    fn weak_design_m8_l4_rho2() {
        let d = build_greedy_weak_design(8, 4, 2.0, 16).unwrap();
        let mut worst = 0u128;
        for i in 0..8 {
            let sum: u128 = (0..i).map(|j| 1u128 << overlap_naive(&d.sets[i], &d.sets[j])).sum();
            worst = worst.max(sum);
        }
        assert!(worst as f64 <= 2.0 * 7.0);
        let r = verify_design(&d);
        assert!(r.valid);
        assert_eq!(r.max_weak_sum, worst);
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(build_poly_design(40, 6).unwrap(), build_poly_design(40, 6).unwrap());
        assert_eq!(
            build_greedy_weak_design(30, 6, 2.0, 24).unwrap(),
            build_greedy_weak_design(30, 6, 2.0, 24).unwrap()
        );
    }

    #[test]
    fn bad_arguments() {
        assert!(build_poly_design(0, 3).is_err());
        assert!(build_greedy_weak_design(3, 3, 0.5, 9).is_err());
        assert!(build_greedy_weak_design(3, 0, 2.0, 9).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let d = build_greedy_weak_design(10, 4, 2.0, 16).unwrap();
        let s = d.to_json();
        assert!(s.contains("\"certifiedOverlap\""));
        assert_eq!(Design::from_json(&s).unwrap(), d);
    }

    #[test]
    fn restrict_examples() {
        let zero = BitString::zeros(8);
        assert_eq!(restrict_seed(&zero, &[1, 4, 6]).unwrap(), 0);
        let ones = BitString::ones(8);
        assert_eq!(restrict_seed(&ones, &[0, 3, 7]).unwrap(), 7);
        // positions 1 and 3 set
        let y = BitString::from_u64(0b1010, 8);
        assert_eq!(restrict_seed(&y, &[0, 1, 2]).unwrap(), 0b010);
        assert!(restrict_seed(&y, &[0, 8]).is_err());
    }

    #[test]
    fn gather_matches_restrict() {
        let set = [0usize, 5, 9, 17, 18, 40, 63];
        let g = BitGather::new(&set);
        for seed in [0u64, u64::MAX, 0x0123_4567_89ab_cdef, 0xdead_beef_f00d_cafe] {
            let y = BitString::from_u64(seed, 64);
            let expect = restrict_seed(&y, &set).unwrap();
            assert_eq!(g.gather_word(seed), expect);
            assert_eq!(g.gather_bytes(y.as_bytes()), expect);
        }
    }

    #[test]
    fn restriction_ignores_bits_outside_set() {
        let set = [2usize, 3, 11];
        let y = BitString::from_u64(0xa5a5, 16);
        let base = restrict_seed(&y, &set).unwrap();
        for p in (0..16).filter(|p| !set.contains(p)) {
            let flipped = y.with_bit(p, !y.get(p).unwrap()).unwrap();
            assert_eq!(restrict_seed(&flipped, &set).unwrap(), base);
        }
    }
}
