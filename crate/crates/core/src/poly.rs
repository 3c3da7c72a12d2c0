//! Polynomials over GF(2^w).

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2m};

/// Polynomial with coefficients in one field, lowest degree first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldPoly {
    field: Gf2m,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:x?}", self.field, self.coeffs)
    }
}

impl FieldPoly {
    pub fn new(field: Gf2m, coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c as u64)) {
            return Err(Error::ValueOutOfField {
                value: c as u64,
                width: field.width(),
            });
        }
        let mut p = Self { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_elements(field: Gf2m, coeffs: &[FieldElement]) -> Result<Self> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.width() != field.width() {
                return Err(Error::WidthMismatch {
                    left: field.width(),
                    right: c.width(),
                });
            }
            raw.push(c.value());
        }
        Self::new(field, raw)
    }

    /// Reads `symbols` coefficients of `w` bits each from `bits`, symbol `i`
    /// at bit offset `i*w`, LSB-first. Bits past the end of `bits` read as zero.
    pub fn from_bits(field: Gf2m, bits: &BitString, symbols: usize) -> Self {
        let w = field.width() as usize;
        let coeffs = (0..symbols)
            .map(|i| bits.word_at(i * w, w) as u32)
            .collect();
        let mut p = Self { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: Gf2m) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: Gf2m, c: u32) -> Self {
        Self::new(field, vec![c]).expect("constant must lie in the field")
    }

    /// The polynomial `Z`.
    pub fn identity(field: Gf2m) -> Self {
        Self {
            field,
            coeffs: vec![0, 1],
        }
    }

    pub fn field(&self) -> Gf2m {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `Z^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn check_field(&self, other: &Gf2m) -> Result<()> {
        if self.field != *other {
            return Err(Error::WidthMismatch {
                left: self.field.width(),
                right: other.width(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(&other.field)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) ^ other.coeff(i)).collect();
        let mut p = Self {
            field: self.field,
            coeffs,
        };
        p.trim();
        Ok(p)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(&other.field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] ^= f.mul(a, b);
            }
        }
        let mut p = Self {
            field: f,
            coeffs: out,
        };
        p.trim();
        Ok(p)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_field(&divisor.field)?;
        let dd = divisor
            .degree()
            .ok_or(Error::DivisionByZero(self.field.width()))?;
        let f = self.field;
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![0u32; qlen];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[i - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] ^= f.mul(factor, dc);
            }
        }
        rem.truncate(dd);
        let mut q = Self {
            field: f,
            coeffs: quot,
        };
        let mut r = Self {
            field: f,
            coeffs: rem,
        };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(&other.field)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Horner evaluation on raw field words.
    #[inline]
    pub fn eval_raw(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| f.mul(acc, x) ^ c)
    }

    pub fn eval(&self, at: &FieldElement) -> Result<FieldElement> {
        if at.width() != self.field.width() {
            return Err(Error::WidthMismatch {
                left: self.field.width(),
                right: at.width(),
            });
        }
        FieldElement::new(self.eval_raw(at.value()) as u64, self.field.width())
    }

    /// Writes the first `symbols` coefficients as `w`-bit LSB-first words.
    pub fn to_bits(&self, symbols: usize) -> BitString {
        let w = self.field.width() as usize;
        BitString::from_bits((0..symbols).flat_map(|i| {
            let c = self.coeff(i);
            (0..w).map(move |b| (c >> b) & 1 == 1)
        }))
    }
}

pub fn poly_eval(p: &FieldPoly, at: &FieldElement) -> Result<FieldElement> {
    p.eval(at)
}

/// Polynomial certified irreducible over its field at construction time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IrreduciblePoly(FieldPoly);

impl fmt::Debug for IrreduciblePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Irreducible({:?})", self.0)
    }
}

impl IrreduciblePoly {
    pub fn new(p: FieldPoly) -> Result<Self> {
        match p.degree() {
            None => Err(Error::InvalidModulus("zero polynomial".into())),
            Some(0) => Err(Error::InvalidModulus("constant polynomial".into())),
            Some(_) if !is_irreducible(&p) => Err(Error::InvalidModulus(format!(
                "{p:?} is reducible"
            ))),
            Some(_) => Ok(Self(p)),
        }
    }

    pub fn poly(&self) -> &FieldPoly {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().expect("nonzero by construction")
    }

    pub fn field(&self) -> Gf2m {
        self.0.field
    }

    pub fn mul_mod(&self, a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly> {
        a.mul(b)?.rem(&self.0)
    }

    /// `f^e mod self` by square-and-multiply.
    pub fn pow_mod(&self, f: &FieldPoly, mut e: u64) -> Result<FieldPoly> {
        let mut base = f.rem(&self.0)?;
        let mut acc = FieldPoly::constant(self.field(), 1).rem(&self.0)?;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base)?;
            }
            e >>= 1;
            if e != 0 {
                base = self.mul_mod(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

pub fn poly_pow_mod(f: &FieldPoly, e: u64, modulus: &IrreduciblePoly) -> Result<FieldPoly> {
    modulus.pow_mod(f, e)
}

/// `Z^(q^j) mod m` for `j = 0..=upto`, where `q` is the field order.
fn frobenius_powers(m: &FieldPoly, upto: usize) -> Result<Vec<FieldPoly>> {
    let w = m.field.width();
    let mut out = Vec::with_capacity(upto + 1);
    let mut cur = FieldPoly::identity(m.field).rem(m)?;
    out.push(cur.clone());
    for _ in 0..upto {
        for _ in 0..w {
            cur = cur.mul(&cur)?.rem(m)?;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// Rabin irreducibility test over GF(q): a degree-`d` polynomial is
/// irreducible iff `Z^(q^d) = Z (mod f)` and `gcd(Z^(q^(d/p)) - Z, f) = 1`
/// for every prime `p | d`.
pub fn is_irreducible(f: &FieldPoly) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f.coeff(0) == 0 {
        return false;
    }
    let z = FieldPoly::identity(f.field);
    let Ok(frob) = frobenius_powers(f, d) else {
        return false;
    };
    if frob[d] != z {
        return false;
    }
    let mut n = d;
    let mut p = 2;
    let mut primes = Vec::new();
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes.into_iter().all(|p| {
        let h = frob[d / p].add(&z).expect("same field");
        matches!(f.gcd(&h).map(|g| g.degree()), Ok(Some(0)))
    })
}
