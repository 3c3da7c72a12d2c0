//! Immutable bit strings.
//!
//! Bit `i` of a string lives in byte `i / 8` at bit position `i % 8`, with
//! bit 0 the least-significant bit of the byte. Every conversion to and from
//! integers and raw bytes in this crate follows that convention.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self {
            bytes: vec![0xff; len.div_ceil(8)],
            len,
        };
        s.clear_padding();
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut bytes = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 8 == 0 {
                bytes.push(0);
            }
            if b {
                bytes[len / 8] |= 1 << (len % 8);
            }
            len += 1;
        }
        Self { bytes, len }
    }

    /// Takes the first `len` bits of `bytes`. Fails if `bytes` is too short.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        let need = len.div_ceil(8);
        if bytes.len() < need {
            return Err(Error::LengthMismatch {
                what: "byte buffer",
                expected: need,
                actual: bytes.len(),
            });
        }
        let mut s = Self {
            bytes: bytes[..need].to_vec(),
            len,
        };
        s.clear_padding();
        Ok(s)
    }

    /// Low `len` bits of `value`; `len` may not exceed 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let bytes = value.to_le_bytes()[..len.div_ceil(8)].to_vec();
        let mut s = Self { bytes, len };
        s.clear_padding();
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> Result<bool> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        Ok(self.bit(index))
    }

    /// Unchecked read; callers guarantee `index < len`.
    #[inline]
    pub(crate) fn bit(&self, index: usize) -> bool {
        (self.bytes[index >> 3] >> (index & 7)) & 1 == 1
    }

    /// Copy with bit `index` replaced.
    pub fn with_bit(&self, index: usize, value: bool) -> Result<Self> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        let mut out = self.clone();
        let mask = 1u8 << (index & 7);
        if value {
            out.bytes[index >> 3] |= mask;
        } else {
            out.bytes[index >> 3] &= !mask;
        }
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        if self.len.is_multiple_of(8) {
            let mut bytes = self.bytes.clone();
            bytes.extend_from_slice(&other.bytes);
            return BitString {
                bytes,
                len: self.len + other.len,
            };
        }
        BitString::from_bits(self.iter().chain(other.iter()))
    }

    /// Bits `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Result<BitString> {
        if start > end || end > self.len {
            return Err(Error::IndexOutOfRange {
                index: end.max(start),
                len: self.len,
            });
        }
        if start.is_multiple_of(8) {
            return BitString::from_bytes(&self.bytes[start / 8..], end - start);
        }
        Ok(BitString::from_bits((start..end).map(|i| self.bit(i))))
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                what: "xor operand",
                expected: self.len,
                actual: other.len,
            });
        }
        let bytes = self
            .bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitString {
            bytes,
            len: self.len,
        })
    }

    /// Packs the string into a word; fails above 64 bits.
    pub fn to_u64(&self) -> Result<u64> {
        if self.len > 64 {
            return Err(Error::LengthMismatch {
                what: "u64 conversion (max 64 bits)",
                expected: 64,
                actual: self.len,
            });
        }
        let mut buf = [0u8; 8];
        buf[..self.bytes.len()].copy_from_slice(&self.bytes);
        Ok(u64::from_le_bytes(buf))
    }

    /// Reads `width <= 64` bits starting at `start` as an LSB-first word.
    /// Bits past the end read as zero.
    pub(crate) fn word_at(&self, start: usize, width: usize) -> u64 {
        debug_assert!(width <= 64);
        let mut v = 0u64;
        for j in 0..width {
            let i = start + j;
            if i < self.len && self.bit(i) {
                v |= 1 << j;
            }
        }
        v
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 8;
        if rem != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= (1u8 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString[{}](", self.len)?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString::from_bits(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lsb_first_layout() {
        let s = BitString::from_bytes(&[0b0000_0101], 3).unwrap();
        assert_eq!(s.get(0), Ok(true));
        assert_eq!(s.get(1), Ok(false));
        assert_eq!(s.get(2), Ok(true));
        assert_eq!(s.to_u64().unwrap(), 5);
    }

    #[test]
    fn out_of_range_is_error() {
        let s = BitString::zeros(5);
        assert_eq!(s.get(5), Err(Error::IndexOutOfRange { index: 5, len: 5 }));
        assert!(s.slice(2, 6).is_err());
        assert!(s.with_bit(9, true).is_err());
    }

    #[test]
    fn from_bytes_masks_padding() {
        let s = BitString::from_bytes(&[0xff], 3).unwrap();
        assert_eq!(s.as_bytes(), &[0b111]);
        assert_eq!(BitString::ones(3), s);
        assert!(BitString::from_bytes(&[0xff], 9).is_err());
    }

    #[test]
    fn empty_string() {
        let e = BitString::zeros(0);
        assert!(e.is_empty());
        assert_eq!(e.concat(&e).len(), 0);
        assert_eq!(e.to_u64().unwrap(), 0);
    }

    proptest! {
        #[test]
        fn concat_then_slice_recovers_parts(a in proptest::collection::vec(any::<bool>(), 0..40),
                                            b in proptest::collection::vec(any::<bool>(), 0..40)) {
            let sa = BitString::from_bits(a.clone());
            let sb = BitString::from_bits(b.clone());
            let c = sa.concat(&sb);
            prop_assert_eq!(c.len(), a.len() + b.len());
            prop_assert_eq!(c.slice(0, a.len()).unwrap(), sa);
            prop_assert_eq!(c.slice(a.len(), c.len()).unwrap(), sb);
        }

        #[test]
        fn u64_roundtrip(v in any::<u64>(), len in 0usize..=64) {
            let masked = if len == 64 { v } else { v & ((1u64 << len) - 1) };
            let s = BitString::from_u64(v, len);
            prop_assert_eq!(s.to_u64().unwrap(), masked);
            prop_assert_eq!(s.word_at(0, len), masked);
        }
    }
}
