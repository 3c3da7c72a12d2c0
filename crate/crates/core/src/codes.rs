//! Reed–Solomon concatenated with Hadamard, with random access to single
//! codeword bits.
//!
//! A message of `ñ·w` bits is read as a polynomial `p` of degree `< ñ` over
//! GF(2^w), symbol `i` occupying bits `[i·w, (i+1)·w)` LSB-first. Codeword
//! position `idx < 2^(2w)` splits into an evaluation point `α = idx >> w` and
//! a mask `z = idx mod 2^w`, and the bit there is the parity of `p(α) & z`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::field::Gf2m;
use crate::poly::FieldPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CodeSpec {
    pub field_width: u32,
    pub message_symbols: usize,
}

impl CodeSpec {
    pub fn new(field_width: u32, message_symbols: usize) -> Result<Self> {
        let spec = Self {
            field_width,
            message_symbols,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        Gf2m::new(self.field_width)?;
        if self.message_symbols == 0 {
            return Err(Error::InvalidParameters("code needs at least one message symbol".into()));
        }
        if self.message_symbols as u64 > 1u64 << self.field_width {
            return Err(Error::InvalidParameters(format!(
                "{} message symbols exceed the field size 2^{}",
                self.message_symbols, self.field_width
            )));
        }
        Ok(())
    }

    pub fn message_bits(&self) -> usize {
        self.message_symbols * self.field_width as usize
    }

    /// Bits needed to address a codeword position, `2w`.
    pub fn index_bits(&self) -> u32 {
        2 * self.field_width
    }

    pub fn codeword_len(&self) -> u128 {
        1u128 << self.index_bits()
    }

    pub fn field(&self) -> Gf2m {
        Gf2m::new(self.field_width).expect("validated width")
    }

    /// Parses a message into its polynomial. Fails on a length mismatch.
    pub fn message(&self, x: &BitString) -> Result<EncodedMessage> {
        if x.len() != self.message_bits() {
            return Err(Error::LengthMismatch {
                what: "code message",
                expected: self.message_bits(),
                actual: x.len(),
            });
        }
        Ok(EncodedMessage {
            spec: *self,
            poly: FieldPoly::from_bits(self.field(), x, self.message_symbols),
        })
    }
}

/// Message already parsed into its polynomial, for repeated bit access.
#[derive(Debug, Clone)]
pub struct EncodedMessage {
    spec: CodeSpec,
    poly: FieldPoly,
}

impl EncodedMessage {
    #[inline]
    pub fn bit(&self, idx: u64) -> bool {
        let w = self.spec.field_width;
        let mask = (1u64 << w) - 1;
        let alpha = ((idx >> w) & mask) as u32;
        let z = (idx & mask) as u32;
        (self.poly.eval_raw(alpha) & z).count_ones() & 1 == 1
    }

    pub fn poly(&self) -> &FieldPoly {
        &self.poly
    }

    /// Whole codeword as packed 64-bit words, bit `idx` of the codeword at
    /// word `idx / 64`, bit `idx % 64`. Limited to `2w <= 26`.
    pub fn codeword_words(&self) -> Result<Vec<u64>> {
        let w = self.spec.field_width;
        if self.spec.index_bits() > 26 {
            return Err(Error::ResourceLimit(format!(
                "full codeword of 2^{} bits",
                self.spec.index_bits()
            )));
        }
        let q = 1u64 << w;
        let len = 1usize << (2 * w);
        let mut words = vec![0u64; len.div_ceil(64)];
        for alpha in 0..q as u32 {
            let v = self.poly.eval_raw(alpha);
            if v == 0 {
                continue;
            }
            let base = (alpha as usize) << w;
            for z in 0..q as u32 {
                if (v & z).count_ones() & 1 == 1 {
                    let i = base + z as usize;
                    words[i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(words)
    }
}

pub fn encode_bit(spec: &CodeSpec, x: &BitString, idx: u64) -> Result<bool> {
    if idx as u128 >= spec.codeword_len() {
        return Err(Error::IndexOutOfRange {
            index: idx as usize,
            len: spec.codeword_len().min(usize::MAX as u128) as usize,
        });
    }
    Ok(spec.message(x)?.bit(idx))
}

/// Full codeword as a bit string (`2w <= 26`).
pub fn codeword(spec: &CodeSpec, x: &BitString) -> Result<BitString> {
    let words = spec.message(x)?.codeword_words()?;
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    BitString::from_bytes(&bytes, 1usize << spec.index_bits())
}

/// Designed relative distance `(1 - (ñ-1)/2^w) / 2`.
pub fn code_distance(spec: &CodeSpec) -> Ratio<u64> {
    let q = 1u64 << spec.field_width;
    Ratio::new(q - (spec.message_symbols as u64 - 1), 2 * q)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Codeword built straight from the definition, one `encode_bit` per position.
    fn codeword_by_definition(spec: &CodeSpec, x: &BitString) -> Vec<bool> {
        (0..spec.codeword_len() as u64)
            .map(|i| encode_bit(spec, x, i).unwrap())
            .collect()
    }

    #[test]
    fn zero_mask_and_zero_message() {
        let spec = CodeSpec::new(3, 4).unwrap();
        let x = BitString::from_u64(0xabc, 12);
        for alpha in 0..8u64 {
            assert!(!encode_bit(&spec, &x, alpha << 3).unwrap());
        }
        let zero = BitString::zeros(12);
        assert!(codeword_by_definition(&spec, &zero).iter().all(|b| !b));
    }

    #[test]
    fn w2_hand_table() {
        // ñ = 2, x = symbols [0b10, 0b01] → p(Z) = 2 + Z over GF(4), modulus z^2+z+1.
        let spec = CodeSpec::new(2, 2).unwrap();
        let x = BitString::from_bits([false, true, true, false]);
        // p(0)=2, p(1)=3, p(2)=0, p(3)=1
        let values = [2u32, 3, 0, 1];
        let expected: Vec<bool> = (0..16)
            .map(|i| {
                let v = values[i >> 2];
                ((v & (i as u32 & 3)).count_ones() & 1) == 1
            })
            .collect();
        assert_eq!(codeword_by_definition(&spec, &x), expected);
        let cw = codeword(&spec, &x).unwrap();
        assert_eq!(cw.iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(code_distance(&CodeSpec::new(4, 1).unwrap()), Ratio::new(1, 2));
        assert_eq!(code_distance(&CodeSpec::new(2, 2).unwrap()), Ratio::new(3, 8));
    }

    #[test]
    fn w2_n2_distance_is_exact() {
        let spec = CodeSpec::new(2, 2).unwrap();
        let words: Vec<Vec<bool>> = (0..16u64)
            .map(|m| codeword_by_definition(&spec, &BitString::from_u64(m, 4)))
            .collect();
        let mut min = usize::MAX;
        for a in 0..16 {
            for b in 0..a {
                let d = words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count();
                min = min.min(d);
            }
        }
        // 3/8 of 16 positions
        assert_eq!(min, 6);
    }

    #[test]
    fn rejects_bad_specs_and_inputs() {
        assert!(CodeSpec::new(2, 5).is_err());
        assert!(CodeSpec::new(2, 0).is_err());
        assert!(CodeSpec::new(0, 1).is_err());
        let spec = CodeSpec::new(2, 2).unwrap();
        assert!(encode_bit(&spec, &BitString::zeros(5), 0).is_err());
        assert!(encode_bit(&spec, &BitString::zeros(4), 16).is_err());
    }

    #[test]
    fn json_field_names() {
        let s = serde_json::to_string(&CodeSpec::new(3, 4).unwrap()).unwrap();
        assert_eq!(s, r#"{"fieldWidth":3,"messageSymbols":4}"#);
    }
}
