//! Trevisan's strong extractor.
//!
//! Output bit `i` is the codeword bit of the (zero-padded) source at the
//! position spelled out by the seed bits indexed by design set `S_i`. The
//! inner code is [`codes`](crate::codes)' RS∘Hadamard code, whose positions
//! take `2w` bits, so every design set has `l = 2w` elements.
//!
//! # Parameter resolution
//!
//! [`build_trevisan`] picks the field width `w` as the smallest `w` with
//! `2^w >= ceil(n / w)` (the message fits a degree `< 2^w` polynomial) and
//! `2^(2w) >= ceil(4m^2 / ε^2)` (codeword length at least `(2m/ε)^2`).
//! Then `ñ = ceil(n / w)`, `l = 2w`, and:
//!
//! * [`Preset::Thm42`] uses the polynomial design for `(m, l)`, so `t = q^2`
//!   with `q` the smallest power of two `>= l`;
//! * [`Preset::Thm43`] uses the greedy weak design with `rho = 2` and an
//!   initial universe of `4l` positions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codes::{CodeSpec, EncodedMessage};
use crate::designs::{build_greedy_weak_design, build_poly_design, BitGather, Design};
use crate::error::{Error, Result};
use crate::extractor::{SeededFunction, WordFunction};

/// Weak-design parameter used by the logarithmic-seed preset.
pub const WEAK_DESIGN_RHO: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Standard polynomial design, seed `O(log^2(n/ε))`.
    Thm42,
    /// Weak design, seed `O(log(n/ε))`.
    Thm43,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractorSpec {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub design: Design,
    pub code: CodeSpec,
    pub preset: Preset,
    pub epsilon_target: f64,
}

/// Field width chosen for `(n, m, ε)`; see the module docs.
pub fn resolve_field_width(n: usize, m: usize, epsilon: f64) -> Result<u32> {
    let need_len = (4.0 * (m as f64) * (m as f64) / (epsilon * epsilon)).ceil();
    (1..=32u32)
        .find(|&w| {
            let q = (1u64 << w) as f64;
            q >= n.div_ceil(w as usize) as f64 && q * q >= need_len
        })
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "no field width <= 32 fits n={n}, m={m}, epsilon={epsilon}"
            ))
        })
}

pub fn build_trevisan(preset: Preset, n: usize, m: usize, epsilon: f64) -> Result<ExtractorSpec> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameters(format!(
            "trevisan needs n >= 1 and m >= 1 (got n={n}, m={m})"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let w = resolve_field_width(n, m, epsilon)?;
    let code = CodeSpec::new(w, n.div_ceil(w as usize))?;
    let l = code.index_bits() as usize;
    let design = match preset {
        Preset::Thm42 => build_poly_design(m, l)?,
        Preset::Thm43 => build_greedy_weak_design(m, l, WEAK_DESIGN_RHO, 4 * l)?,
        Preset::Custom => {
            return Err(Error::InvalidParameters(
                "custom specs are assembled with ExtractorSpec::custom".into(),
            ))
        }
    };
    Ok(ExtractorSpec {
        n,
        t: design.t,
        m,
        design,
        code,
        preset,
        epsilon_target: epsilon,
    })
}

impl ExtractorSpec {
    pub fn custom(n: usize, m: usize, design: Design, code: CodeSpec, epsilon_target: f64) -> Result<Self> {
        let spec = Self {
            n,
            t: design.t,
            m,
            design,
            code,
            preset: Preset::Custom,
            epsilon_target,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Structural consistency between design, code and lengths.
    pub fn validate(&self) -> Result<()> {
        self.code.validate()?;
        let l = self.code.index_bits() as usize;
        let bad = |msg: String| Err(Error::DimensionMismatch(msg));
        if self.design.l != l {
            return bad(format!("design set size {} != code index width {l}", self.design.l));
        }
        if self.design.t != self.t {
            return bad(format!("design universe {} != seed length {}", self.design.t, self.t));
        }
        if self.design.m() < self.m {
            return bad(format!("design has {} sets, need {}", self.design.m(), self.m));
        }
        if self.n == 0 || self.code.message_symbols != self.n.div_ceil(self.code.field_width as usize) {
            return bad(format!(
                "code carries {} symbols of {} bits, source has {} bits",
                self.code.message_symbols, self.code.field_width, self.n
            ));
        }
        for (i, s) in self.design.sets.iter().take(self.m).enumerate() {
            if s.len() != l || s.iter().any(|&p| p >= self.t) || s.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("design set {i} is malformed"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Ready-to-run extractor for a validated [`ExtractorSpec`].
#[derive(Debug, Clone)]
pub struct TrevisanExtractor {
    spec: ExtractorSpec,
    gathers: Vec<BitGather>,
}

impl TrevisanExtractor {
    pub fn new(spec: ExtractorSpec) -> Result<Self> {
        spec.validate()?;
        let gathers = spec.design.sets[..spec.m]
            .iter()
            .map(|s| BitGather::new(s))
            .collect();
        Ok(Self { spec, gathers })
    }

    pub fn spec(&self) -> &ExtractorSpec {
        &self.spec
    }

    fn padded(&self, x: &BitString) -> BitString {
        let total = self.spec.code.message_bits();
        if x.len() == total {
            x.clone()
        } else {
            x.concat(&BitString::zeros(total - x.len()))
        }
    }

    pub fn extract(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.apply(x, y)
    }

    /// Packed view for the exhaustive oracle; needs `n <= 64`, `m <= 64`
    /// and at most 64 seed positions in the union of the used sets.
    pub fn words(&self) -> Result<TrevisanWords<'_>> {
        let mut support: Vec<usize> = self.spec.design.sets[..self.spec.m].iter().flatten().copied().collect();
        support.sort_unstable();
        support.dedup();
        if self.spec.n > 64 || self.spec.m > 64 || support.len() > 64 {
            return Err(Error::ResourceLimit(format!(
                "packed view needs n, m and seed support <= 64 (n={}, m={}, support={})",
                self.spec.n,
                self.spec.m,
                support.len()
            )));
        }
        let gathers = self.spec.design.sets[..self.spec.m]
            .iter()
            .map(|s| {
                let compact: Vec<usize> = s
                    .iter()
                    .map(|p| support.binary_search(p).expect("set lies in support"))
                    .collect();
                BitGather::new(&compact)
            })
            .collect();
        Ok(TrevisanWords {
            ext: self,
            support,
            gathers,
        })
    }
}

impl SeededFunction for TrevisanExtractor {
    fn input_len(&self) -> usize {
        self.spec.n
    }
    fn seed_len(&self) -> usize {
        self.spec.t
    }
    fn output_len(&self) -> usize {
        self.spec.m
    }

    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        let msg = self
            .spec
            .code
            .message(&self.padded(x))
            .expect("padded to the message length");
        let seed = y.as_bytes();
        let bit = |g: &BitGather| msg.bit(g.gather_bytes(seed));
        if self.spec.m >= 256 {
            let bits: Vec<bool> = self.gathers.par_iter().map(bit).collect();
            BitString::from_bits(bits)
        } else {
            self.gathers.iter().map(bit).collect()
        }
    }
}

pub struct TrevisanWords<'a> {
    ext: &'a TrevisanExtractor,
    support: Vec<usize>,
    gathers: Vec<BitGather>,
}

pub enum PreparedMessage {
    /// Whole codeword, for index widths up to 26 bits.
    Table(Vec<u64>),
    Poly(EncodedMessage),
}

impl WordFunction for TrevisanWords<'_> {
    type Prepared = PreparedMessage;

    fn input_bits(&self) -> usize {
        self.ext.spec.n
    }
    fn seed_bits(&self) -> usize {
        self.ext.spec.t
    }
    fn output_bits(&self) -> usize {
        self.ext.spec.m
    }
    fn seed_support(&self) -> Vec<usize> {
        self.support.clone()
    }

    fn prepare(&self, x: u64) -> PreparedMessage {
        let spec = &self.ext.spec;
        let bits = BitString::from_u64(x, spec.n);
        let msg = spec.code.message(&self.ext.padded(&bits)).expect("padded");
        match msg.codeword_words() {
            Ok(words) => PreparedMessage::Table(words),
            Err(_) => PreparedMessage::Poly(msg),
        }
    }

    #[inline]
    fn eval(&self, prepared: &PreparedMessage, compact_seed: u64) -> u64 {
        let mut out = 0u64;
        for (i, g) in self.gathers.iter().enumerate() {
            let idx = g.gather_word(compact_seed);
            let b = match prepared {
                PreparedMessage::Table(words) => (words[(idx >> 6) as usize] >> (idx & 63)) & 1 == 1,
                PreparedMessage::Poly(msg) => msg.bit(idx),
            };
            out |= (b as u64) << i;
        }
        out
    }
}
