//! Strong lossless condenser built from multi-power polynomial evaluation.
//!
//! The source is read as a polynomial `f` of degree `< ñ` over GF(2^w) and
//! the seed as a field element `y`. With an irreducible `E` of degree `ñ`,
//! the output is the `m'` symbols `f_i(y)` where `f_0 = f` and
//! `f_{i+1} = f_i^h mod E`.
//!
//! # Parameter resolution
//!
//! [`build_condenser`] scans `w = 1, 2, ...` and stops at the first width
//! that satisfies its own requirement:
//!
//! * `ñ = ceil(n / w)`,
//! * `h = 2^ceil(log2(2ñ/ε))` (at least 2),
//! * accept when `w >= ceil(log2(ñ·h²/ε))`.
//!
//! Then `m' = ceil((k + 2·log2(1/ε)) / w) + 1`, clamped to `ñ`, and the
//! build fails when `m'·w > (1+α)k + w`. The modulus `E` is the first monic
//! irreducible of degree `ñ` in lexicographic order of the coefficient
//! vector `(c_0, c_1, ..., c_{ñ-1})`, so the top coefficient varies fastest.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::extractor::{SeededFunction, WordFunction};
use crate::field::Gf2m;
use crate::poly::{is_irreducible, FieldPoly, IrreduciblePoly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CondenserSpec {
    /// Source length in bits; zero-padded to `ñ·w` before parsing.
    pub n: usize,
    pub field_width: u32,
    pub message_symbols: usize,
    pub power: u64,
    pub output_symbols: usize,
    /// Coefficients of `E`, constant term first, leading 1 included.
    pub modulus_e: Vec<u32>,
    pub target_entropy: usize,
    pub epsilon: f64,
    pub alpha: f64,
}

/// Smallest `e` with `2^e >= x`.
fn ceil_log2(x: f64) -> u32 {
    (0..=127u32).find(|&e| 2f64.powi(e as i32) >= x).unwrap_or(128)
}

/// The first monic irreducible polynomial of degree `degree` in the search
/// order described in the module docs.
pub fn smallest_irreducible(field: Gf2m, degree: usize) -> Result<IrreduciblePoly> {
    if degree == 0 {
        return Err(Error::InvalidParameters("modulus degree must be positive".into()));
    }
    let q = field.order();
    // coeffs[0] is the most significant digit of the search counter and
    // coeffs[degree - 1] the least; coeffs[degree] is the leading 1.
    let mut coeffs = vec![0u32; degree + 1];
    coeffs[degree] = 1;
    if degree >= 2 {
        // every candidate with a zero constant term is divisible by Z
        coeffs[0] = 1;
    }
    loop {
        let p = FieldPoly::new(field, coeffs.clone())?;
        if is_irreducible(&p) {
            return IrreduciblePoly::new(p);
        }
        let mut i = degree;
        loop {
            if i == 0 {
                return Err(Error::Infeasible(format!(
                    "no irreducible of degree {degree} over GF(2^{})",
                    field.width()
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if (coeffs[i] as u64) < q {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// `(w, ñ, h)` for an `n`-bit source at error `epsilon`.
pub fn resolve_condenser_width(n: usize, epsilon: f64) -> Result<(u32, usize, u64)> {
    (1..=32u32)
        .find_map(|w| {
            let n_sym = n.div_ceil(w as usize);
            let h = 1u64 << ceil_log2(2.0 * n_sym as f64 / epsilon).max(1);
            let need = ceil_log2(n_sym as f64 * (h as f64) * (h as f64) / epsilon);
            (w >= need).then_some((w, n_sym, h))
        })
        .ok_or_else(|| Error::Infeasible(format!("no field width <= 32 for n={n}, epsilon={epsilon}")))
}

pub fn build_condenser(n: usize, k: usize, epsilon: f64, alpha: f64) -> Result<CondenserSpec> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!("condenser needs 0 < k <= n (got n={n}, k={k})")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameters(format!("alpha must be positive, got {alpha}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameters(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let (w, n_sym, h) = resolve_condenser_width(n, epsilon)?;
    let num = k as f64 + 2.0 * (1.0 / epsilon).log2();
    let out_sym = ((num / w as f64).ceil() as usize + 1).min(n_sym);
    let limit = (1.0 + alpha) * k as f64 + w as f64;
    if (out_sym * w as usize) as f64 > limit {
        return Err(Error::Infeasible(format!(
            "output m'·w = {}·{} exceeds (1+alpha)k + w = {limit}; alpha too small for the rounding at n={n}, k={k}",
            out_sym, w
        )));
    }
    let field = Gf2m::new(w)?;
    let e = smallest_irreducible(field, n_sym)?;
    Ok(CondenserSpec {
        n,
        field_width: w,
        message_symbols: n_sym,
        power: h,
        output_symbols: out_sym,
        modulus_e: e.poly().coeffs().to_vec(),
        target_entropy: k,
        epsilon,
        alpha,
    })
}

impl CondenserSpec {
    pub fn seed_len(&self) -> usize {
        self.field_width as usize
    }

    pub fn output_len(&self) -> usize {
        self.output_symbols * self.field_width as usize
    }

    pub fn field(&self) -> Result<Gf2m> {
        Gf2m::new(self.field_width)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A condenser ready to run, with `E` certified irreducible.
#[derive(Debug, Clone)]
pub struct GuvCondenser {
    spec: CondenserSpec,
    field: Gf2m,
    modulus: IrreduciblePoly,
}

impl GuvCondenser {
    pub fn new(spec: CondenserSpec) -> Result<Self> {
        let field = spec.field()?;
        let w = spec.field_width as usize;
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if spec.n == 0 || spec.message_symbols != spec.n.div_ceil(w) {
            return bad(format!(
                "{} symbols of {w} bits do not match a {}-bit source",
                spec.message_symbols, spec.n
            ));
        }
        if spec.power < 2 || !spec.power.is_power_of_two() {
            return bad(format!("power must be a power of two >= 2, got {}", spec.power));
        }
        if spec.output_symbols == 0 || spec.output_symbols > spec.message_symbols {
            return bad(format!(
                "output symbols must lie in 1..={}, got {}",
                spec.message_symbols, spec.output_symbols
            ));
        }
        if spec.output_len() < spec.target_entropy {
            return bad(format!(
                "output of {} bits cannot hold {} bits of entropy",
                spec.output_len(),
                spec.target_entropy
            ));
        }
        let e = FieldPoly::new(field, spec.modulus_e.clone())?;
        if e.degree() != Some(spec.message_symbols) || e.coeff(spec.message_symbols) != 1 {
            return bad(format!("modulus must be monic of degree {}", spec.message_symbols));
        }
        let modulus = IrreduciblePoly::new(e)?;
        Ok(Self { spec, field, modulus })
    }

    pub fn spec(&self) -> &CondenserSpec {
        &self.spec
    }

    /// The residues `f_0, ..., f_{m'-1}` for source `x`; they do not depend
    /// on the seed.
    pub fn powers(&self, x: &BitString) -> Vec<FieldPoly> {
        let sym = self.spec.message_symbols;
        let w = self.spec.field_width as usize;
        let padded = if x.len() == sym * w {
            x.clone()
        } else {
            x.concat(&BitString::zeros(sym * w - x.len()))
        };
        let mut f = FieldPoly::from_bits(self.field, &padded, sym);
        let mut out = Vec::with_capacity(self.spec.output_symbols);
        for i in 0..self.spec.output_symbols {
            if i > 0 {
                f = self.modulus.pow_mod(&f, self.spec.power).expect("same field");
            }
            out.push(f.clone());
        }
        out
    }

    fn symbols_word(&self, powers: &[FieldPoly], y: u32) -> Vec<u32> {
        powers.iter().map(|p| p.eval_raw(y)).collect()
    }

    pub fn condense(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        self.apply(x, y)
    }

    /// `C(x, y) ∥ y`.
    pub fn strong_form(&self, x: &BitString, y: &BitString) -> Result<BitString> {
        Ok(self.condense(x, y)?.concat(y))
    }

    /// Packed strong form for the oracle; needs `n <= 64` and
    /// `n' + d <= 64`.
    pub fn strong_words(&self) -> Result<StrongWords<'_>> {
        if self.spec.n > 64 || self.spec.output_len() + self.seed_len() > 64 {
            return Err(Error::ResourceLimit(format!(
                "packed strong form needs n <= 64 and n' + d <= 64 (n={}, n'+d={})",
                self.spec.n,
                self.spec.output_len() + self.seed_len()
            )));
        }
        Ok(StrongWords(self))
    }
}

impl SeededFunction for GuvCondenser {
    fn input_len(&self) -> usize {
        self.spec.n
    }
    fn seed_len(&self) -> usize {
        self.spec.seed_len()
    }
    fn output_len(&self) -> usize {
        self.spec.output_len()
    }

    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        let w = self.spec.field_width as usize;
        let y = y.word_at(0, w) as u32;
        let symbols = self.symbols_word(&self.powers(x), y);
        symbols
            .iter()
            .flat_map(|&s| (0..w).map(move |j| (s >> j) & 1 == 1))
            .collect()
    }
}

/// Seeded function `(x, y) ↦ C(x, y) ∥ y`.
#[derive(Debug, Clone, Copy)]
pub struct StrongForm<'a>(pub &'a GuvCondenser);

impl SeededFunction for StrongForm<'_> {
    fn input_len(&self) -> usize {
        self.0.input_len()
    }
    fn seed_len(&self) -> usize {
        self.0.seed_len()
    }
    fn output_len(&self) -> usize {
        self.0.output_len() + self.0.seed_len()
    }
    fn apply_unchecked(&self, x: &BitString, y: &BitString) -> BitString {
        self.0.apply_unchecked(x, y).concat(y)
    }
}

pub struct StrongWords<'a>(&'a GuvCondenser);

impl WordFunction for StrongWords<'_> {
    type Prepared = Vec<FieldPoly>;

    fn input_bits(&self) -> usize {
        self.0.spec.n
    }
    fn seed_bits(&self) -> usize {
        self.0.spec.seed_len()
    }
    fn output_bits(&self) -> usize {
        self.0.spec.output_len() + self.0.spec.seed_len()
    }

    fn prepare(&self, x: u64) -> Vec<FieldPoly> {
        self.0.powers(&BitString::from_u64(x, self.0.spec.n))
    }

    fn eval(&self, powers: &Vec<FieldPoly>, y: u64) -> u64 {
        let w = self.0.spec.field_width;
        let mut out = 0u64;
        for (i, p) in powers.iter().enumerate() {
            out |= (p.eval_raw(y as u32) as u64) << (i as u32 * w);
        }
        out | (y << self.0.spec.output_len())
    }
}

pub fn guv_condense(spec: &CondenserSpec, x: &BitString, y: &BitString) -> Result<BitString> {
    GuvCondenser::new(spec.clone())?.condense(x, y)
}

pub fn strong_form(spec: &CondenserSpec, x: &BitString, y: &BitString) -> Result<BitString> {
    GuvCondenser::new(spec.clone())?.strong_form(x, y)
}
