//! Randomized invariants tying the independent computation routes together.

use proptest::collection::btree_set;
use proptest::prelude::*;
use rsboole_core::{
    alpharec_identity, classify_balance, gf2_factor, gf2_gcd, period, plateau_v, truth_table,
    v_value, walsh_transform, BalanceClass, FieldF2n, Gf2Poly, QuadRsFunction,
};

fn arb_offsets(max_j: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    btree_set(1..=max_j, 1..=max_len).prop_map(|s| s.into_iter().collect())
}

fn arb_gf2_poly(max_deg: usize) -> impl Strategy<Value = Gf2Poly> {
    btree_set(0..=max_deg, 1..=12).prop_map(|exps| {
        let v: Vec<usize> = exps.into_iter().collect();
        Gf2Poly::from_exponents(&v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_of_x_power_sums(a in 1u64..200, b in 1u64..200) {
        // gcd(x^a + 1, x^b + 1) = x^gcd(a,b) + 1
        let pa = Gf2Poly::xn_plus_1(a as usize);
        let pb = Gf2Poly::xn_plus_1(b as usize);
        let g = gf2_gcd(&pa, &pb).unwrap();
        let expect = Gf2Poly::xn_plus_1(num_integer::gcd(a, b) as usize);
        prop_assert_eq!(g, expect);
    }

    #[test]
    fn factorization_recombines(p in arb_gf2_poly(64)) {
        let fact = gf2_factor(&p).unwrap();
        let mut prod = Gf2Poly::one().shl(fact.x_exponent as usize);
        for (f, mult) in &fact.factors {
            for _ in 0..*mult {
                prod = prod.mul(f);
            }
        }
        prop_assert_eq!(prod, p);
    }

    #[test]
    fn walsh_parseval_and_weight(idx in arb_offsets(7, 4), extra in 0u32..3) {
        let q = QuadRsFunction::new(idx).unwrap();
        let n = 2 * q.max_index() + 1 + extra;
        prop_assume!(n <= 16);
        let tt = truth_table(&q, n).unwrap();
        let spectrum = walsh_transform(&tt);
        let total: i128 = spectrum.values().iter().map(|&w| i128::from(w) * i128::from(w)).sum();
        prop_assert_eq!(total, 1i128 << (2 * n));
        // the zero coefficient recovers the weight
        let w0 = spectrum.values()[0];
        prop_assert_eq!(w0, (1i64 << n) - 2 * tt.weight() as i64);
    }

    #[test]
    fn weights_stay_in_the_plateau_set(idx in arb_offsets(7, 4), extra in 0u32..3) {
        let q = QuadRsFunction::new(idx).unwrap();
        let n = 2 * q.max_index() + 1 + extra;
        prop_assume!(n <= 16);
        let tt = truth_table(&q, n).unwrap();
        let w = tt.weight();
        let half = 1u64 << (n - 1);
        let ok = if w == half {
            true
        } else {
            let dev = half.abs_diff(w);
            // 2^j with n/2 - 1 <= j <= n - 2
            dev.is_power_of_two()
                && dev.trailing_zeros() >= n / 2 - 1 + (n % 2)
                && dev.trailing_zeros() <= n - 2
        };
        prop_assert!(ok, "weight {} at n={}", w, n);
        // balance class matches the raw comparison
        let class = classify_balance(&tt);
        prop_assert_eq!(class == BalanceClass::Balanced, w == half);
    }

    #[test]
    fn v_sequence_symmetry_inside_period(idx in arb_offsets(4, 4), i in 1u64..3, r_seed in 1u64..200) {
        let q = QuadRsFunction::new(idx).unwrap();
        let rep = period(&q).unwrap();
        let v_big = rep.period;
        let lo = u64::from(2 * q.max_index() + 1);
        let r = 1 + r_seed % (v_big.max(2) - 1);
        let center = v_big * i;
        prop_assume!(center >= r + lo && center + r <= 4000);
        let left = v_value(&q, (center - r) as u32).unwrap();
        let right = v_value(&q, (center + r) as u32).unwrap();
        prop_assert_eq!(left, right, "period {} center {} r {}", v_big, center, r);
    }

    #[test]
    fn v_sequence_period_is_exact(idx in arb_offsets(4, 4)) {
        let q = QuadRsFunction::new(idx).unwrap();
        let rep = period(&q).unwrap();
        let v_big = rep.period;
        prop_assume!(v_big <= 600);
        let lo = 2 * q.max_index() + 1;
        // repeats with period V
        for n in lo..(lo + v_big as u32) {
            prop_assert_eq!(
                v_value(&q, n).unwrap(),
                v_value(&q, n + v_big as u32).unwrap()
            );
        }
        // the maximum 2J is hit exactly once per window, at multiples of V
        let hits: Vec<u32> = (lo..(lo + v_big as u32))
            .filter(|&n| v_value(&q, n).unwrap() == 2 * q.max_index())
            .collect();
        prop_assert_eq!(hits.len(), 1);
        prop_assert_eq!(u64::from(hits[0]) % v_big, 0);
    }

    #[test]
    fn alpharec_identity_holds(n_pick in 0usize..3, alpha_seed in 0u64..u64::MAX, k in 1u32..=10) {
        let n = [2u32, 4, 8][n_pick];
        let f = FieldF2n::new(n, None).unwrap();
        let alpha = alpha_seed & f.element_mask();
        let (lhs, rhs) = alpharec_identity(&f, alpha, k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn spectral_and_gcd_v_agree(idx in arb_offsets(6, 3), extra in 0u32..4) {
        let q = QuadRsFunction::new(idx).unwrap();
        let n = 2 * q.max_index() + 1 + extra;
        prop_assume!(n <= 16);
        let spectral = plateau_v(&walsh_transform(&truth_table(&q, n).unwrap())).unwrap();
        prop_assert_eq!(v_value(&q, n).unwrap(), spectral);
    }
}
