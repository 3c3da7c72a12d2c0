//! Binary extension fields GF(2^w), 1 <= w <= 32.
//!
//! Polynomials over GF(2) are packed into integers with bit `i` holding the
//! coefficient of `z^i`. The modulus for width `w` is the numerically smallest
//! irreducible degree-`w` polynomial with a constant term, found by exhaustive search and a
//! gcd-based irreducibility test, so any implementation recovers the same field.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_WIDTH: u32 = 32;

/// Carry-less product of two GF(2)[z] polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let a = a as u128;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

pub fn gf2_degree(p: u128) -> Option<u32> {
    (p != 0).then(|| 127 - p.leading_zeros())
}

/// Remainder of `a` modulo `m` in GF(2)[z]; `m` must be nonzero.
pub fn gf2_rem(mut a: u128, m: u128) -> u128 {
    let dm = gf2_degree(m).expect("nonzero modulus");
    while let Some(da) = gf2_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

pub fn gf2_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn gf2_mulmod(a: u64, b: u64, m: u64) -> u64 {
    gf2_rem(clmul(a, b), m as u128) as u64
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `d` is irreducible over GF(2) iff
/// `z^(2^d) = z (mod f)` and `gcd(z^(2^(d/p)) - z, f) = 1` for every prime `p | d`.
pub fn is_irreducible_gf2(f: u64) -> bool {
    let Some(d) = gf2_degree(f as u128) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let z = 0b10u64;
    // frob[j] = z^(2^j) mod f
    let mut frob = Vec::with_capacity(d as usize + 1);
    let mut cur = gf2_rem(z as u128, f as u128) as u64;
    frob.push(cur);
    for _ in 0..d {
        cur = gf2_mulmod(cur, cur, f);
        frob.push(cur);
    }
    if frob[d as usize] != z {
        return false;
    }
    prime_factors(d).into_iter().all(|p| {
        let h = frob[(d / p) as usize] ^ z;
        gf2_gcd(f as u128, h as u128) == 1
    })
}

/// Smallest irreducible degree-`w` polynomial over GF(2) with a nonzero
/// constant term, as a `(w+1)`-bit integer. The constant-term condition only
/// matters for `w = 1`, where it selects `z + 1` over `z`.
pub fn field_modulus(w: u32) -> Result<u64> {
    if !(1..=MAX_WIDTH).contains(&w) {
        return Err(Error::UnsupportedWidth(w));
    }
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        (1..=MAX_WIDTH)
            .map(|w| {
                let lo = 1u64 << w;
                (lo..lo << 1)
                    .find(|&f| f & 1 == 1 && is_irreducible_gf2(f))
                    .expect("irreducible polynomials exist in every degree")
            })
            .collect()
    });
    Ok(table[(w - 1) as usize])
}

/// GF(2^w) with its canonical modulus. Elements are raw `u32` words below `2^w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2m {
    width: u32,
    modulus: u64,
}

impl fmt::Debug for Gf2m {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#b})", self.width, self.modulus)
    }
}

impl Gf2m {
    pub fn new(width: u32) -> Result<Self> {
        Ok(Self {
            width,
            modulus: field_modulus(width)?,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `2^w`.
    pub fn order(&self) -> u64 {
        1u64 << self.width
    }

    pub fn mask(&self) -> u32 {
        (self.order() - 1) as u32
    }

    pub fn contains(&self, v: u64) -> bool {
        v < self.order()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let top = 1u64 << self.width;
        let mut a = a as u64;
        let mut b = b;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc as u32
    }

    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^w - 2)`; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.order() - 2))
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        FieldElement::new(value, self.width)
    }
}

/// Width-tagged element of GF(2^w). Arithmetic between different widths fails.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    width: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}@GF(2^{})", self.value, self.width)
    }
}

impl FieldElement {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&width) {
            return Err(Error::UnsupportedWidth(width));
        }
        if value >> width != 0 {
            return Err(Error::ValueOutOfField { value, width });
        }
        Ok(Self {
            value: value as u32,
            width,
        })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn one(width: u32) -> Result<Self> {
        Self::new(1, width)
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn field(&self) -> Gf2m {
        Gf2m::new(self.width).expect("width validated at construction")
    }

    fn same_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }

    /// Addition is XOR.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            value: self.value ^ other.value,
            width: self.width,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            value: self.field().mul(self.value, other.value),
            width: self.width,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self
            .field()
            .inv(self.value)
            .ok_or(Error::DivisionByZero(self.width))?;
        Ok(Self {
            value: v,
            width: self.width,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        Self {
            value: self.field().pow(self.value, e),
            width: self.width,
        }
    }
}

pub fn gf_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

pub fn gf_inv(a: &FieldElement) -> Result<FieldElement> {
    a.inv()
}
