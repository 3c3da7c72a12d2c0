//! Traits shared by every seeded construction.
//!
//! [`SeededFunction`] is the bit-string interface used for extraction and
//! composition. [`WordFunction`] is a packed view used by the exhaustive
//! oracle: inputs, seeds and outputs are at most 64 bits and the oracle calls
//! `prepare` once per source element before sweeping seeds.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A map `{0,1}^n × {0,1}^t → {0,1}^m`.
pub trait SeededFunction {
    fn input_len(&self) -> usize;
    fn seed_len(&self) -> usize;
    fn output_len(&self) -> usize;

    /// Evaluates on arguments whose lengths are already known to match.
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString;

    fn apply(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        check_len("source", self.input_len(), x)?;
        check_len("seed", self.seed_len(), y)?;
        Ok(self.apply_unchecked(x, y))
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, s: &BitString) -> Result<()> {
    if s.len() != expected {
        return Err(Error::LengthMismatch {
            what,
            expected,
            actual: s.len(),
        });
    }
    Ok(())
}

impl<T: SeededFunction + ?Sized> SeededFunction for &T {
    fn input_len(&self) -> usize {
        (**self).input_len()
    }
    fn seed_len(&self) -> usize {
        (**self).seed_len()
    }
    fn output_len(&self) -> usize {
        (**self).output_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        (**self).apply_unchecked(x, y)
    }
}

impl<T: SeededFunction + ?Sized> SeededFunction for Box<T> {
    fn input_len(&self) -> usize {
        (**self).input_len()
    }
    fn seed_len(&self) -> usize {
        (**self).seed_len()
    }
    fn output_len(&self) -> usize {
        (**self).output_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        (**self).apply_unchecked(x, y)
    }
}

/// Packed view of a seeded function for exhaustive enumeration.
///
/// The function declares the seed positions its output can depend on
/// ([`seed_support`](Self::seed_support)); the oracle enumerates only those
/// and passes them as a compact word whose bit `j` is seed bit
/// `seed_support()[j]`. Positions outside the support are irrelevant to the
/// output, so the remaining seed bits factor out of every distance exactly.
pub trait WordFunction: Sync {
    type Prepared: Send + Sync;

    fn input_bits(&self) -> usize;
    fn seed_bits(&self) -> usize;
    fn output_bits(&self) -> usize;

    /// Ascending seed positions the output depends on.
    fn seed_support(&self) -> Vec<usize> {
        (0..self.seed_bits()).collect()
    }

    fn prepare(&self, x: u64) -> Self::Prepared;

    fn eval(&self, prepared: &Self::Prepared, compact_seed: u64) -> u64;
}

/// Closure-backed [`WordFunction`] with full seed support.
pub struct FnWord<F> {
    n: usize,
    t: usize,
    m: usize,
    f: F,
}

impl<F: Fn(u64, u64) -> u64 + Sync> FnWord<F> {
    pub fn new(n: usize, t: usize, m: usize, f: F) -> Self {
        Self { n, t, m, f }
    }
}

impl<F: Fn(u64, u64) -> u64 + Sync> WordFunction for FnWord<F> {
    type Prepared = u64;

    fn input_bits(&self) -> usize {
        self.n
    }
    fn seed_bits(&self) -> usize {
        self.t
    }
    fn output_bits(&self) -> usize {
        self.m
    }
    fn prepare(&self, x: u64) -> u64 {
        x
    }
    fn eval(&self, x: &u64, y: u64) -> u64 {
        (self.f)(*x, y)
    }
}

/// Packed view of any [`SeededFunction`] with `n, t, m <= 64`, at the cost
/// of a bit-string round trip per call.
pub struct Packed<'a, S: ?Sized>(pub &'a S);

impl<S: SeededFunction + Sync + ?Sized> WordFunction for Packed<'_, S> {
    type Prepared = BitString;

    fn input_bits(&self) -> usize {
        self.0.input_len()
    }
    fn seed_bits(&self) -> usize {
        self.0.seed_len()
    }
    fn output_bits(&self) -> usize {
        self.0.output_len()
    }
    fn prepare(&self, x: u64) -> BitString {
        BitString::from_u64(x, self.0.input_len())
    }
    fn eval(&self, x: &BitString, y: u64) -> u64 {
        let y = BitString::from_u64(y, self.0.seed_len());
        self.0
            .apply_unchecked(x, &y)
            .to_u64()
            .expect("output fits 64 bits")
    }
}
