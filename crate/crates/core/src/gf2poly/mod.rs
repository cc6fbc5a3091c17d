//! Dense GF(2)[x] arithmetic packed into 64-bit words.
//!
//! Bit `k` of word `k / 64` holds the coefficient of `x^k`. The word vector
//! never has trailing zero words, so equal polynomials compare equal.

mod factor;
mod order;

pub use factor::{gf2_factor, gf2_factor_seeded, Gf2Factorization, DEFAULT_FACTOR_SEED};
pub use order::{mersenne_prime_factors, x_order_mod};

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Hard ceiling on polynomial degree (about 1 MiB of packed words).
pub const DEGREE_CAP: usize = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { words: vec![1] }
    }

    pub fn x() -> Self {
        Gf2Poly { words: vec![2] }
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        assert!(k <= DEGREE_CAP, "monomial degree over cap");
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        Gf2Poly { words }
    }

    /// XOR of x^e over the listed exponents; repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &e in exps {
            assert!(e <= DEGREE_CAP, "exponent over cap");
            p.toggle(e);
        }
        p
    }

    /// x^n + 1
    pub fn xn_plus_1(n: usize) -> Self {
        let mut p = Gf2Poly::monomial(n);
        p.toggle(0);
        p
    }

    fn normalize(&mut self) {
        while matches!(self.words.last(), Some(0)) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .map_or(false, |w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn toggle(&mut self, k: usize) {
        let wi = k / 64;
        if wi >= self.words.len() {
            self.words.resize(wi + 1, 0);
        }
        self.words[wi] ^= 1u64 << (k % 64);
        self.normalize();
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Largest k with x^k dividing self; None for zero.
    pub fn x_valuation(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    /// self += other << shift_bits
    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let (wsh, bsh) = (shift / 64, shift % 64);
        let need = other.words.len() + wsh + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        if bsh == 0 {
            for (i, &w) in other.words.iter().enumerate() {
                self.words[i + wsh] ^= w;
            }
        } else {
            let mut carry = 0u64;
            for (i, &w) in other.words.iter().enumerate() {
                self.words[i + wsh] ^= (w << bsh) | carry;
                carry = w >> (64 - bsh);
            }
            self.words[other.words.len() + wsh] ^= carry;
        }
        self.normalize();
    }

    pub fn shl(&self, shift: usize) -> Gf2Poly {
        if let Some(d) = self.degree() {
            assert!(d + shift <= DEGREE_CAP, "shift degree over cap");
        }
        let mut out = Gf2Poly::zero();
        out.xor_shifted(self, shift);
        out
    }

    /// Quotient by x^shift; lower coefficients are dropped.
    pub fn shr(&self, shift: usize) -> Gf2Poly {
        let (wsh, bsh) = (shift / 64, shift % 64);
        if wsh >= self.words.len() {
            return Gf2Poly::zero();
        }
        let mut words: Vec<u64> = self.words[wsh..].to_vec();
        if bsh != 0 {
            for i in 0..words.len() {
                words[i] >>= bsh;
                if i + 1 < self.words.len() - wsh {
                    words[i] |= self.words[wsh + i + 1] << (64 - bsh);
                }
            }
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let dsum = self.degree().unwrap() + other.degree().unwrap();
        assert!(dsum <= DEGREE_CAP, "product degree over cap");
        let (a, b) = if self.term_count() <= other.term_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Gf2Poly {
            words: vec![0; dsum / 64 + 1],
        };
        for (wi, &w) in a.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out.xor_shifted(b, wi * 64 + bit);
            }
        }
        out.normalize();
        out
    }

    /// GF(2) squaring: spread every bit to an even position.
    pub fn square(&self) -> Gf2Poly {
        if let Some(d) = self.degree() {
            assert!(2 * d <= DEGREE_CAP, "square degree over cap");
        }
        let mut words = vec![0u64; self.words.len() * 2];
        for (i, &w) in self.words.iter().enumerate() {
            words[2 * i] = spread_bits(w as u32);
            words[2 * i + 1] = spread_bits((w >> 32) as u32);
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    /// Inverse of `square`; None unless all coefficients sit at even degrees.
    pub fn sqrt(&self) -> Option<Gf2Poly> {
        const ODD: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        let mut words = vec![0u64; self.words.len() / 2 + 1];
        for (i, &w) in self.words.iter().enumerate() {
            if w & ODD != 0 {
                return None;
            }
            let half = compress_bits(w) as u64;
            if i % 2 == 0 {
                words[i / 2] |= half;
            } else {
                words[i / 2] |= half << 32;
            }
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        Some(p)
    }

    /// Formal derivative over GF(2): only odd-degree terms survive.
    pub fn derivative(&self) -> Gf2Poly {
        const ODD: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        let mut p = Gf2Poly {
            words: self.words.iter().map(|w| w & ODD).collect(),
        };
        p.normalize();
        p.shr(1)
    }

    /// (quotient, remainder); panics on zero divisor.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            quot.toggle(shift);
            rem.xor_shifted(divisor, shift);
        }
        (quot, rem)
    }

    pub fn rem(&self, modulus: &Gf2Poly) -> Gf2Poly {
        self.div_rem(modulus).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Gf2Poly) -> Gf2Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn mul_mod(&self, other: &Gf2Poly, modulus: &Gf2Poly) -> Gf2Poly {
        self.mul(other).rem(modulus)
    }

    /// self^(2) mod m, then repeated: self^(2^k) mod m.
    pub fn repeated_square_mod(&self, k: u32, modulus: &Gf2Poly) -> Gf2Poly {
        let mut cur = self.rem(modulus);
        for _ in 0..k {
            cur = cur.square().rem(modulus);
        }
        cur
    }

    /// Hex form of the coefficient bits read as one big integer, lowercase, no prefix.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let mut started = false;
        for &w in self.words.iter().rev() {
            if started {
                s.push_str(&format!("{w:016x}"));
            } else if w != 0 {
                s.push_str(&format!("{w:x}"));
                started = true;
            }
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!("bad hex polynomial: {s:?}")));
        }
        if s.len() > DEGREE_CAP / 4 + 1 {
            return Err(Error::limit("hex polynomial over degree cap"));
        }
        let mut words = Vec::new();
        let bytes = s.as_bytes();
        let mut pos = bytes.len();
        while pos > 0 {
            let start = pos.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..pos]).unwrap();
            words.push(u64::from_str_radix(chunk, 16).map_err(|e| Error::Parse(e.to_string()))?);
            pos = start;
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        Ok(p)
    }
}

/// Euclidean gcd; gcd(0, b) = b.
pub fn gf2_gcd(a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::invalid("gcd of two zero polynomials"));
    }
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a)
}

/// x^e mod f by square-and-multiply.
pub fn x_pow_mod(e: u64, f: &Gf2Poly) -> Gf2Poly {
    assert!(!f.is_zero());
    let mut result = Gf2Poly::one().rem(f);
    let mut base = Gf2Poly::x().rem(f);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_mod(&base, f);
        }
        base = base.square().rem(f);
        e >>= 1;
    }
    result
}

/// Multiplicity of (x+1): the number of times x+1 divides p.
pub fn xpow1_valuation(p: &Gf2Poly) -> Result<u32> {
    if p.is_zero() {
        return Err(Error::invalid("(x+1)-valuation of the zero polynomial"));
    }
    let xp1 = Gf2Poly::xn_plus_1(1);
    let mut v = 0;
    let mut cur = p.clone();
    loop {
        let (q, r) = cur.div_rem(&xp1);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        cur = q;
    }
}

fn spread_bits(w: u32) -> u64 {
    let mut x = w as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Gather the even-position bits of w into the low 32 bits.
fn compress_bits(w: u64) -> u32 {
    let mut x = w & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for k in (0..=d).rev() {
            if !self.coeff(k) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Gf2Poly::zero());
        }
        let mut p = Gf2Poly::zero();
        for term in s.split('+') {
            let term = term.trim();
            let exp: usize = if term == "1" {
                0
            } else if term == "x" {
                1
            } else if let Some(rest) = term.strip_prefix("x^") {
                rest.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in term {term:?}")))?
            } else {
                return Err(Error::Parse(format!("bad term {term:?}")));
            };
            if exp > DEGREE_CAP {
                return Err(Error::limit(format!("exponent {exp} over degree cap")));
            }
            if p.coeff(exp) {
                return Err(Error::Parse(format!("repeated term x^{exp}")));
            }
            p.toggle(exp);
        }
        Ok(p)
    }
}

/// A GF(2) Laurent polynomial stored as x^shift * body with body(0) = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentGf2 {
    pub shift: i64,
    pub body: Gf2Poly,
}

/// Collapse (exponent, coefficient) pairs into canonical shifted form.
/// Repeated exponents cancel in pairs.
pub fn laurent_normalize(terms: &[(i64, bool)]) -> LaurentGf2 {
    use std::collections::BTreeMap;
    let mut coeffs: BTreeMap<i64, bool> = BTreeMap::new();
    for &(e, c) in terms {
        if c {
            let v = coeffs.entry(e).or_insert(false);
            *v = !*v;
        }
    }
    coeffs.retain(|_, v| *v);
    let Some((&min, _)) = coeffs.iter().next() else {
        return LaurentGf2 {
            shift: 0,
            body: Gf2Poly::zero(),
        };
    };
    let mut body = Gf2Poly::zero();
    for (&e, _) in &coeffs {
        body.toggle((e - min) as usize);
    }
    LaurentGf2 { shift: min, body }
}
