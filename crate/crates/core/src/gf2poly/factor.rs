//! Complete factorization over GF(2): squarefree split, then distinct-degree,
//! then randomized equal-degree splitting with a fixed seed.

use super::{gf2_gcd, Gf2Poly};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f2f2_0001;

/// Factorization of a nonzero polynomial: x^x_exponent times the listed
/// irreducible factors, sorted by (degree, coefficient bits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Factorization {
    pub x_exponent: u32,
    pub factors: Vec<(Gf2Poly, u32)>,
}

impl Gf2Factorization {
    /// Multiply everything back together (test oracle).
    pub fn reassemble(&self) -> Gf2Poly {
        let mut acc = Gf2Poly::monomial(self.x_exponent as usize);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }

    /// Largest multiplicity over all factors, x included; 0 for units.
    pub fn max_multiplicity(&self) -> u32 {
        self.factors
            .iter()
            .map(|&(_, m)| m)
            .chain(std::iter::once(self.x_exponent))
            .max()
            .unwrap_or(0)
    }

    pub fn is_irreducible(&self) -> bool {
        self.x_exponent == 0 && self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Factor with the default deterministic seed.
pub fn gf2_factor(p: &Gf2Poly) -> Result<Gf2Factorization> {
    gf2_factor_seeded(p, DEFAULT_FACTOR_SEED)
}

/// Factor completely; the seed only drives equal-degree splitting and any
/// seed yields the same sorted factor list.
pub fn gf2_factor_seeded(p: &Gf2Poly, seed: u64) -> Result<Gf2Factorization> {
    if p.is_zero() {
        return Err(Error::invalid("cannot factor the zero polynomial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_exponent = p.x_valuation().unwrap() as u32;
    let body = p.shr(x_exponent as usize);
    let mut factors: Vec<(Gf2Poly, u32)> = Vec::new();
    for (sf_part, mult) in squarefree_parts(&body) {
        for (prod, d) in distinct_degree(&sf_part) {
            for irr in equal_degree(prod, d, &mut rng) {
                match factors.iter_mut().find(|(f, _)| *f == irr) {
                    Some((_, m)) => *m += mult,
                    None => factors.push((irr, mult)),
                }
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.to_hex().len().cmp(&b.to_hex().len()))
            .then_with(|| a.to_hex().cmp(&b.to_hex()))
    });
    Ok(Gf2Factorization {
        x_exponent,
        factors,
    })
}

/// Squarefree decomposition: pairs (g, m) with the g pairwise coprime,
/// squarefree, and the product of g^m equal to the input.
fn squarefree_parts(f: &Gf2Poly) -> Vec<(Gf2Poly, u32)> {
    let mut out = Vec::new();
    if f.is_one() || f.is_zero() {
        return out;
    }
    let fp = f.derivative();
    if fp.is_zero() {
        let g = f.sqrt().expect("zero derivative implies a perfect square");
        for (fac, m) in squarefree_parts(&g) {
            out.push((fac, 2 * m));
        }
        return out;
    }
    let mut c = gf2_gcd(f, &fp).unwrap();
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = gf2_gcd(&w, &c).unwrap();
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let g = c.sqrt().expect("leftover of squarefree split is a square");
        for (fac, m) in squarefree_parts(&g) {
            out.push((fac, 2 * m));
        }
    }
    out
}

/// Split a squarefree f (coprime to x) into products of same-degree irreducibles.
fn distinct_degree(f: &Gf2Poly) -> Vec<(Gf2Poly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = Gf2Poly::x();
    let mut d = 0usize;
    while f.degree().unwrap_or(0) >= 1 {
        d += 1;
        if 2 * d > f.degree().unwrap() {
            let deg = f.degree().unwrap();
            out.push((f, deg));
            break;
        }
        h = h.square().rem(&f);
        let g = gf2_gcd(&f, &h.add(&Gf2Poly::x())).unwrap();
        if !g.is_one() {
            f = f.div_exact(&g);
            h = h.rem(&f);
            out.push((g, d));
        }
    }
    out
}

/// Cantor-Zassenhaus for GF(2): split a product of degree-d irreducibles
/// using random trace polynomials.
fn equal_degree(f: Gf2Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Gf2Poly> {
    let deg = f.degree().unwrap();
    if deg == d {
        return vec![f];
    }
    loop {
        let mut r = Gf2Poly::zero();
        for k in 0..deg {
            if rng.gen::<bool>() {
                r.toggle(k);
            }
        }
        if r.is_zero() {
            continue;
        }
        // trace map T(r) = r + r^2 + ... + r^(2^(d-1)) mod f
        let mut acc = r.clone();
        let mut cur = r;
        for _ in 0..d - 1 {
            cur = cur.square().rem(&f);
            acc = acc.add(&cur);
        }
        let g = gf2_gcd(&f, &acc).unwrap();
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let other = f.div_exact(&g);
            let mut out = equal_degree(g, d, rng);
            out.extend(equal_degree(other, d, rng));
            return out;
        }
    }
}
