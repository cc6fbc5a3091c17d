//! Multiplicative order of x modulo an irreducible polynomial.
//!
//! The order divides 2^d - 1 for degree d, so the prime factorizations of
//! 2^d - 1 for d <= 64 are embedded below and checked by a unit test that
//! multiplies them back together.

use super::{gf2_factor, x_pow_mod, Gf2Poly};
use crate::error::{Error, Result};

/// MERSENNE_FACTORS[d - 1] lists (prime, exponent) pairs of 2^d - 1.
pub const MERSENNE_FACTORS: [&[(u64, u32)]; 64] = [
    &[],
    &[(3, 1)],
    &[(7, 1)],
    &[(3, 1), (5, 1)],
    &[(31, 1)],
    &[(3, 2), (7, 1)],
    &[(127, 1)],
    &[(3, 1), (5, 1), (17, 1)],
    &[(7, 1), (73, 1)],
    &[(3, 1), (11, 1), (31, 1)],
    &[(23, 1), (89, 1)],
    &[(3, 2), (5, 1), (7, 1), (13, 1)],
    &[(8191, 1)],
    &[(3, 1), (43, 1), (127, 1)],
    &[(7, 1), (31, 1), (151, 1)],
    &[(3, 1), (5, 1), (17, 1), (257, 1)],
    &[(131071, 1)],
    &[(3, 3), (7, 1), (19, 1), (73, 1)],
    &[(524287, 1)],
    &[(3, 1), (5, 2), (11, 1), (31, 1), (41, 1)],
    &[(7, 2), (127, 1), (337, 1)],
    &[(3, 1), (23, 1), (89, 1), (683, 1)],
    &[(47, 1), (178481, 1)],
    &[(3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (241, 1)],
    &[(31, 1), (601, 1), (1801, 1)],
    &[(3, 1), (2731, 1), (8191, 1)],
    &[(7, 1), (73, 1), (262657, 1)],
    &[(3, 1), (5, 1), (29, 1), (43, 1), (113, 1), (127, 1)],
    &[(233, 1), (1103, 1), (2089, 1)],
    &[(3, 2), (7, 1), (11, 1), (31, 1), (151, 1), (331, 1)],
    &[(2147483647, 1)],
    &[(3, 1), (5, 1), (17, 1), (257, 1), (65537, 1)],
    &[(7, 1), (23, 1), (89, 1), (599479, 1)],
    &[(3, 1), (43691, 1), (131071, 1)],
    &[(31, 1), (71, 1), (127, 1), (122921, 1)],
    &[(3, 3), (5, 1), (7, 1), (13, 1), (19, 1), (37, 1), (73, 1), (109, 1)],
    &[(223, 1), (616318177, 1)],
    &[(3, 1), (174763, 1), (524287, 1)],
    &[(7, 1), (79, 1), (8191, 1), (121369, 1)],
    &[(3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (61681, 1)],
    &[(13367, 1), (164511353, 1)],
    &[(3, 2), (7, 2), (43, 1), (127, 1), (337, 1), (5419, 1)],
    &[(431, 1), (9719, 1), (2099863, 1)],
    &[(3, 1), (5, 1), (23, 1), (89, 1), (397, 1), (683, 1), (2113, 1)],
    &[(7, 1), (31, 1), (73, 1), (151, 1), (631, 1), (23311, 1)],
    &[(3, 1), (47, 1), (178481, 1), (2796203, 1)],
    &[(2351, 1), (4513, 1), (13264529, 1)],
    &[
        (3, 2),
        (5, 1),
        (7, 1),
        (13, 1),
        (17, 1),
        (97, 1),
        (241, 1),
        (257, 1),
        (673, 1),
    ],
    &[(127, 1), (4432676798593, 1)],
    &[
        (3, 1),
        (11, 1),
        (31, 1),
        (251, 1),
        (601, 1),
        (1801, 1),
        (4051, 1),
    ],
    &[(7, 1), (103, 1), (2143, 1), (11119, 1), (131071, 1)],
    &[
        (3, 1),
        (5, 1),
        (53, 1),
        (157, 1),
        (1613, 1),
        (2731, 1),
        (8191, 1),
    ],
    &[(6361, 1), (69431, 1), (20394401, 1)],
    &[(3, 4), (7, 1), (19, 1), (73, 1), (87211, 1), (262657, 1)],
    &[(23, 1), (31, 1), (89, 1), (881, 1), (3191, 1), (201961, 1)],
    &[
        (3, 1),
        (5, 1),
        (17, 1),
        (29, 1),
        (43, 1),
        (113, 1),
        (127, 1),
        (15790321, 1),
    ],
    &[(7, 1), (32377, 1), (524287, 1), (1212847, 1)],
    &[
        (3, 1),
        (59, 1),
        (233, 1),
        (1103, 1),
        (2089, 1),
        (3033169, 1),
    ],
    &[(179951, 1), (3203431780337, 1)],
    &[
        (3, 2),
        (5, 2),
        (7, 1),
        (11, 1),
        (13, 1),
        (31, 1),
        (41, 1),
        (61, 1),
        (151, 1),
        (331, 1),
        (1321, 1),
    ],
    &[(2305843009213693951, 1)],
    &[(3, 1), (715827883, 1), (2147483647, 1)],
    &[(7, 2), (73, 1), (127, 1), (337, 1), (92737, 1), (649657, 1)],
    &[
        (3, 1),
        (5, 1),
        (17, 1),
        (257, 1),
        (641, 1),
        (65537, 1),
        (6700417, 1),
    ],
];

/// (prime, exponent) pairs of 2^d - 1 for 1 <= d <= 64.
pub fn mersenne_prime_factors(d: u32) -> Result<&'static [(u64, u32)]> {
    if d == 0 || d > 64 {
        return Err(Error::limit(format!(
            "factor table covers degrees 1 to 64, got {d}"
        )));
    }
    Ok(MERSENNE_FACTORS[(d - 1) as usize])
}

/// Multiplicative order of x in GF(2)[x]/(f) for irreducible f != x.
pub fn x_order_mod(f: &Gf2Poly) -> Result<u64> {
    let d = f
        .degree()
        .ok_or_else(|| Error::invalid("order modulo the zero polynomial"))?;
    if d == 0 {
        return Err(Error::invalid("order modulo a constant"));
    }
    if d > 64 {
        return Err(Error::limit(format!(
            "order table covers degrees up to 64, got {d}"
        )));
    }
    if !f.coeff(0) {
        return Err(Error::invalid("x divides the modulus"));
    }
    let fac = gf2_factor(f)?;
    if !fac.is_irreducible() {
        return Err(Error::invalid(format!("modulus {f} is reducible")));
    }
    let n: u64 = if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    };
    let mut k = n;
    for &(p, _) in MERSENNE_FACTORS[d - 1] {
        while k % p == 0 && x_pow_mod(k / p, f).is_one() {
            k /= p;
        }
    }
    debug_assert!(x_pow_mod(k, f).is_one());
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn table_products_reconstruct() {
        for (i, entry) in MERSENNE_FACTORS.iter().enumerate() {
            let d = (i + 1) as u32;
            let expect: u128 = (1u128 << d) - 1;
            let mut prod: u128 = 1;
            let mut prev = 0u64;
            for &(prime, e) in *entry {
                assert!(prime > prev, "table row {d} not ascending");
                prev = prime;
                assert!(is_prime_u64(prime), "{prime} in row {d} is composite");
                for _ in 0..e {
                    prod = prod.checked_mul(prime as u128).unwrap();
                }
            }
            assert_eq!(prod, expect, "row {d} product mismatch");
        }
    }

    /// Deterministic Miller-Rabin, valid for all u64.
    fn is_prime_u64(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n % q == 0 {
                return n == q;
            }
        }
        let mut d = n - 1;
        let mut s = 0;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = mod_pow(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 0..s - 1 {
                x = mod_mul(x, x, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
        ((a as u128 * b as u128) % m as u128) as u64
    }

    fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
        let mut r = 1u64;
        a %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = mod_mul(r, a, m);
            }
            a = mod_mul(a, a, m);
            e >>= 1;
        }
        r
    }

    #[test]
    fn known_orders() {
        assert_eq!(x_order_mod(&p("x+1")).unwrap(), 1);
        assert_eq!(x_order_mod(&p("x^2+x+1")).unwrap(), 3);
        assert_eq!(x_order_mod(&p("x^3+x+1")).unwrap(), 7);
        assert_eq!(x_order_mod(&p("x^6+x^3+1")).unwrap(), 9);
        assert_eq!(x_order_mod(&p("x^8+x^5+x^4+x^3+1")).unwrap(), 17);
        assert_eq!(x_order_mod(&p("x^8+x^7+x^6+x^4+x^2+x+1")).unwrap(), 17);
        // primitive polynomial: full order
        assert_eq!(x_order_mod(&p("x^4+x+1")).unwrap(), 15);
        // non-primitive degree 4: order 5
        assert_eq!(x_order_mod(&p("x^4+x^3+x^2+x+1")).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(x_order_mod(&p("x")).is_err());
        assert!(x_order_mod(&p("x^2+1")).is_err());
        assert!(x_order_mod(&p("1")).is_err());
        assert!(x_order_mod(&p("x^3+x")).is_err());
    }

    #[test]
    fn order_divides_group_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 60 {
            let d = rng.gen_range(1..=16);
            let mut f = Gf2Poly::monomial(d);
            for k in 0..d {
                if rng.gen::<bool>() {
                    f.toggle(k);
                }
            }
            if !f.coeff(0) || !gf2_factor(&f).unwrap().is_irreducible() {
                continue;
            }
            found += 1;
            let ord = x_order_mod(&f).unwrap();
            let group = (1u64 << d) - 1;
            assert_eq!(group % ord, 0);
            assert!(x_pow_mod(ord, &f).is_one());
            // minimality across prime divisors of ord
            for &(q, _) in MERSENNE_FACTORS[d - 1] {
                if ord % q == 0 {
                    assert!(!x_pow_mod(ord / q, &f).is_one());
                }
            }
        }
    }
}
