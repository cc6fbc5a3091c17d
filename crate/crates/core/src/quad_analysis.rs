//! Weight periodicity for quadratic rotation-symmetric functions: the
//! associated GF(2) polynomials, v-values by gcd, exact periods of the
//! v-sequence, closed forms for one- and two-offset functions, and weight
//! prediction with explicit sign oracles.

use crate::boolfn::{self, QuadRsFunction};
use crate::error::{Error, Result};
use crate::gf2poly::{
    gf2_factor, gf2_gcd, x_pow_mod, xpow1_valuation, Gf2Poly, LaurentGf2,
};
use crate::rules_matrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDetail {
    pub factor: String,
    pub multiplicity: u32,
    pub order: u64,
}

/// Least period of the v-value sequence, with the factorization evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    #[serde(rename = "V")]
    pub period: u64,
    /// odd part: lcm of the x-orders of the distinct irreducible factors
    pub m: u64,
    /// least t with 2^t covering every multiplicity
    pub t: u32,
    pub factors: Vec<FactorDetail>,
    /// largest v-value ever attained, twice the top offset
    pub max_v: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BalanceKind {
    Friendly,
    Refractory,
    Unknown,
}

/// Which n make the function balanced, when a closed form applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub kind: BalanceKind,
    pub nu: Option<u32>,
    pub residue: Option<u64>,
    pub modulus: Option<u64>,
    pub method: String,
}

impl BalanceReport {
    /// Balanced verdict for a specific n, when the report decides it.
    pub fn balanced_at(&self, n: u32) -> Option<bool> {
        match self.kind {
            BalanceKind::Friendly => {
                Some(u64::from(n) % self.modulus? == self.residue?)
            }
            BalanceKind::Refractory => Some(false),
            BalanceKind::Unknown => None,
        }
    }
}

/// A_n = sum of x^i + x^(n-i), defined for n at least 2J+1.
pub fn build_a_n(q: &QuadRsFunction, n: u32) -> Result<Gf2Poly> {
    if n < 2 * q.max_index() + 1 {
        return Err(Error::invalid(format!(
            "n={n} below 2J+1={}",
            2 * q.max_index() + 1
        )));
    }
    Ok(build_a_n_reduced(q, n)?)
}

/// Same construction with offsets reduced mod n, mirroring the truth-table
/// orbit semantics: the pair {i mod n, n - i mod n} is toggled as a set, so
/// the half-length offset contributes the single term x^(n/2).
fn build_a_n_reduced(q: &QuadRsFunction, n: u32) -> Result<Gf2Poly> {
    use std::collections::BTreeSet;
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &i in q.indices() {
        let r = i % n;
        if r == 0 {
            return Err(Error::invalid(format!("offset {i} collapses mod n={n}")));
        }
        let pair = (r.min(n - r), r.max(n - r));
        if !pairs.remove(&pair) {
            pairs.insert(pair);
        }
    }
    let mut p = Gf2Poly::zero();
    for (a, b) in pairs {
        p.toggle(a as usize);
        if b != a {
            p.toggle(b as usize);
        }
    }
    Ok(p)
}

/// Laurent form: sum of x^i + x^(-i) over the offsets.
pub fn build_a(q: &QuadRsFunction) -> LaurentGf2 {
    let terms: Vec<(i64, bool)> = q
        .indices()
        .iter()
        .flat_map(|&i| [(i as i64, true), (-(i as i64), true)])
        .collect();
    crate::gf2poly::laurent_normalize(&terms)
}

/// The shifted polynomial x^(2J) + sum over lower offsets of
/// x^(J+a) + x^(J-a), plus 1. Equals x^J times the Laurent form.
pub fn build_a_i(q: &QuadRsFunction) -> Gf2Poly {
    let j = q.max_index();
    let mut p = Gf2Poly::zero();
    p.toggle(2 * j as usize);
    p.toggle(0);
    for &a in q.indices() {
        if a != j {
            p.toggle((j + a) as usize);
            p.toggle((j - a) as usize);
        }
    }
    p
}

/// v(n): degree of gcd(x^n + 1, A_n).
pub fn v_value(q: &QuadRsFunction, n: u32) -> Result<u32> {
    let a_n = build_a_n(q, n)?;
    v_from(&a_n, n)
}

/// Escape hatch below 2J+1; uses the orbit-reduced A_n, which keeps the gcd
/// value aligned with the spectral plateau parameter even for short
/// functions.
pub fn v_value_allow_short(q: &QuadRsFunction, n: u32) -> Result<u32> {
    if n < 2 {
        return Err(Error::invalid("need at least 2 variables"));
    }
    let a_n = build_a_n_reduced(q, n)?;
    v_from(&a_n, n)
}

fn v_from(a_n: &Gf2Poly, n: u32) -> Result<u32> {
    let modulus = Gf2Poly::xn_plus_1(n as usize);
    let g = gf2_gcd(&modulus, a_n)?;
    Ok(g.degree().unwrap_or(0) as u32)
}

/// Exact period of the v-value sequence. The factor-based computation is
/// re-verified against the divisibility definition before returning.
pub fn period(q: &QuadRsFunction) -> Result<PeriodReport> {
    let a_i = build_a_i(q);
    let fact = gf2_factor(&a_i)?;
    debug_assert_eq!(fact.x_exponent, 0);

    let mut m: u64 = 1;
    let mut max_mult: u32 = 0;
    let mut primes: Vec<u64> = vec![];
    let mut factors = Vec::new();
    for (f, mult) in &fact.factors {
        let order = crate::gf2poly::x_order_mod(f)?;
        let wide = (u128::from(m) / u128::from(m.gcd(&order))) * u128::from(order);
        m = u64::try_from(wide)
            .map_err(|_| Error::limit("period exceeds 64 bits"))?;
        let deg = f.degree().unwrap() as u32;
        for &(p, _) in crate::gf2poly::mersenne_prime_factors(deg)? {
            if order % p == 0 && !primes.contains(&p) {
                primes.push(p);
            }
        }
        max_mult = max_mult.max(*mult);
        factors.push(FactorDetail {
            factor: f.to_string(),
            multiplicity: *mult,
            order,
        });
    }
    let t = max_mult.next_power_of_two().trailing_zeros();
    if t > 0 {
        primes.push(2);
    }
    let period: u64 = m
        .checked_shl(t)
        .filter(|p| p >> t == m)
        .ok_or_else(|| Error::limit("period exceeds 64 bits"))?;

    if !x_pow_mod(period, &a_i).is_one() {
        return Err(Error::Inconsistency(format!(
            "computed period {period} fails the divisibility definition"
        )));
    }
    for &p in &primes {
        if x_pow_mod(period / p, &a_i).is_one() {
            return Err(Error::Inconsistency(format!(
                "period {period} is not minimal: {} also works",
                period / p
            )));
        }
    }

    Ok(PeriodReport {
        period,
        m,
        t,
        factors,
        max_v: 2 * q.max_index(),
    })
}

/// Closed form for the two-offset period: 2 lcm(i+j, i-j).
pub fn binomial_period(i: u32, j: u32) -> Result<u64> {
    if j == 0 || j >= i {
        return Err(Error::invalid(format!("need i > j >= 1, got ({i},{j})")));
    }
    let (s, d) = (u64::from(i + j), u64::from(i - j));
    Ok(2 * s.lcm(&d))
}

/// Period of the offset pair {1, i}: (i+1)(i-1), doubled when i is even.
pub fn gi_period(i: u32) -> Result<u64> {
    if i < 2 {
        return Err(Error::invalid("need i >= 2"));
    }
    let base = u64::from(i + 1) * u64::from(i - 1);
    Ok(if i % 2 == 0 { 2 * base } else { base })
}

/// (x+1)-adic valuation of the associated polynomial; needs an even number
/// of offsets.
pub fn d_q(q: &QuadRsFunction) -> Result<u32> {
    if q.indices().len() % 2 != 0 {
        return Err(Error::Unsupported(
            "the valuation analysis assumes an even number of offsets".into(),
        ));
    }
    xpow1_valuation(&build_a_i(q))
}

/// The power of 2 at which two-offset balancing turns: 2^(max(v2(i+j), v2(i-j)) + 1).
pub fn critical_n(i: u32, j: u32) -> Result<u64> {
    if j == 0 || j >= i {
        return Err(Error::invalid(format!("need i > j >= 1, got ({i},{j})")));
    }
    let hi = (i + j).trailing_zeros().max((i - j).trailing_zeros());
    Ok(1u64 << (hi + 1))
}

fn friendly(nu: u32, method: &str) -> BalanceReport {
    BalanceReport {
        kind: BalanceKind::Friendly,
        nu: Some(nu),
        residue: Some(1u64 << (nu + 1)),
        modulus: Some(1u64 << (nu + 2)),
        method: method.into(),
    }
}

/// Two offsets are occasionally balanced exactly when their 2-adic
/// valuations differ; then balance happens at n = 2^(nu+1) mod 2^(nu+2).
pub fn balance_predict_binomial(i: u32, j: u32) -> Result<BalanceReport> {
    if j == 0 || j >= i {
        return Err(Error::invalid(format!("need i > j >= 1, got ({i},{j})")));
    }
    let method = "two-offset 2-adic valuation split";
    let (vi, vj) = (i.trailing_zeros(), j.trailing_zeros());
    if vi == vj {
        Ok(BalanceReport {
            kind: BalanceKind::Refractory,
            nu: None,
            residue: None,
            modulus: None,
            method: method.into(),
        })
    } else {
        Ok(friendly(vi.min(vj), method))
    }
}

/// When the minimal 2-adic valuation over the offsets is attained exactly
/// once, the same residue rule applies; otherwise undecided here.
pub fn balance_predict_uniqmin(q: &QuadRsFunction) -> Result<BalanceReport> {
    if q.indices().len() % 2 != 0 {
        return Err(Error::Unsupported(
            "the valuation analysis assumes an even number of offsets".into(),
        ));
    }
    let method = "unique minimal 2-adic valuation";
    let vals: Vec<u32> = q.indices().iter().map(|i| i.trailing_zeros()).collect();
    let min = *vals.iter().min().unwrap();
    if vals.iter().filter(|&&v| v == min).count() == 1 {
        Ok(friendly(min, method))
    } else {
        Ok(BalanceReport {
            kind: BalanceKind::Unknown,
            nu: None,
            residue: None,
            modulus: None,
            method: method.into(),
        })
    }
}

/// Single offset t over n variables: (balanced, v). Balanced except when
/// 2^(v2(t)+1) divides n; v always equals gcd(n, 2t), which the gcd route
/// reproduces.
pub fn monomial_facts(t: u32, n: u32) -> Result<(bool, u32)> {
    if t == 0 {
        return Err(Error::invalid("offset must be at least 1"));
    }
    if n < 2 * t + 1 {
        return Err(Error::invalid(format!("n={n} below 2t+1={}", 2 * t + 1)));
    }
    let balanced = n % (1u32 << (t.trailing_zeros() + 1)) != 0;
    let q = QuadRsFunction::new(vec![t])?;
    let v = v_value(&q, n)?;
    debug_assert_eq!(v, n.gcd(&(2 * t)));
    Ok((balanced, v))
}

/// Strategy for fixing the sign in the unbalanced weight formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignOracle {
    /// matrix trace when the offsets admit one, else truth table, else error
    Auto,
    BruteForce,
    MatrixTrace,
}

fn balance_prediction(q: &QuadRsFunction, n: u32) -> Result<Option<bool>> {
    if let [t] = q.indices() {
        return Ok(Some(monomial_facts(*t, n)?.0));
    }
    if let [j, i] = q.indices() {
        return Ok(balance_predict_binomial(*i, *j)?.balanced_at(n));
    }
    if q.indices().len() % 2 == 0 {
        return Ok(balance_predict_uniqmin(q)?.balanced_at(n));
    }
    Ok(None)
}

fn weight_by_trace(q: &QuadRsFunction, n: u32) -> Result<u64> {
    let r = rules_matrix::rules_matrix_for(q)?;
    let tr = r.pow(u64::from(n))?.trace()?;
    let full = BigInt::one() << n as usize;
    let twice = full - tr;
    let (wt, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(Error::Inconsistency(format!(
            "trace of the power matrix has the wrong parity at n={n}"
        )));
    }
    wt.to_u64()
        .ok_or_else(|| Error::Inconsistency("trace-derived weight out of range".into()))
}

/// Weight by the plateau formula, 2^(n-1) or 2^(n-1) +- 2^((n+v)/2-1), with
/// the sign settled by the chosen oracle.
pub fn predicted_weight(q: &QuadRsFunction, n: u32, oracle: SignOracle) -> Result<u64> {
    if n < 2 * q.max_index() + 1 {
        return Err(Error::invalid(format!(
            "n={n} below 2J+1={}",
            2 * q.max_index() + 1
        )));
    }
    let v = v_value(q, n)?;
    let half = 1u64 << (n - 1);
    let dev = 1u64 << ((n + v) / 2 - 1);
    let (low, high) = (half - dev, half + dev);

    if balance_prediction(q, n)? == Some(true) {
        return Ok(half);
    }

    let observed = match oracle {
        SignOracle::BruteForce => boolfn::truth_table(q, n)?.weight(),
        SignOracle::MatrixTrace => weight_by_trace(q, n)?,
        SignOracle::Auto => {
            let by_trace = if q.indices().len() <= 2 {
                weight_by_trace(q, n).ok()
            } else {
                None
            };
            match by_trace {
                Some(w) => w,
                None => match boolfn::truth_table(q, n) {
                    Ok(t) => t.weight(),
                    Err(_) => return Err(Error::SignUndetermined { low, high }),
                },
            }
        }
    };
    if observed == half || observed == low || observed == high {
        Ok(observed)
    } else {
        Err(Error::Inconsistency(format!(
            "oracle weight {observed} is outside the plateau set {{{low}, {half}, {high}}}"
        )))
    }
}

/// Count of affine classes among single-offset functions on n variables:
/// the divisor count of n, less one.
pub fn affine_class_count_monomial(n: u32) -> Result<u64> {
    if n < 3 {
        return Err(Error::invalid("need n >= 3"));
    }
    let mut tau = 0u64;
    for d in 1..=n {
        if n % d == 0 {
            tau += 1;
        }
    }
    Ok(tau - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{classify_balance, plateau_v, truth_table, walsh_transform, BalanceClass};

    fn q(v: &[u32]) -> QuadRsFunction {
        QuadRsFunction::new(v.to_vec()).unwrap()
    }

    fn poly(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn a_polynomials() {
        assert_eq!(build_a_n(&q(&[1]), 5).unwrap(), poly("x^4+x"));
        assert_eq!(build_a_n(&q(&[1, 3]), 8).unwrap(), poly("x^7+x^5+x^3+x"));
        assert_eq!(
            build_a_n(&q(&[7, 4, 1]), 15).unwrap(),
            poly("x^14+x^11+x^8+x^7+x^4+x")
        );
        assert!(build_a_n(&q(&[3]), 6).is_err());

        assert_eq!(build_a(&q(&[1])).body, poly("x^2+1"));
        assert_eq!(build_a(&q(&[1])).shift, -1);
        assert_eq!(build_a(&q(&[1, 2])).body, poly("x^4+x^3+x+1"));
        let prod = poly("x^3+1").mul(&poly("x+1"));
        assert_eq!(build_a(&q(&[1, 2])).body, prod);

        assert_eq!(
            build_a_i(&q(&[7, 4, 1])),
            poly("x^14+x^11+x^8+x^6+x^3+1")
        );
        assert_eq!(
            build_a_i(&q(&[5, 3, 2, 1])),
            poly("x^10+x^8+x^7+x^6+x^4+x^3+x^2+1")
        );
        assert_eq!(build_a_i(&q(&[6, 2, 1])), poly("x^12+x^8+x^7+x^5+x^4+1"));
    }

    #[test]
    fn a_i_is_shifted_laurent_body() {
        for idx in [vec![1u32], vec![1, 3], vec![7, 4, 1], vec![5, 4, 2], vec![2, 5, 9]] {
            let f = q(&idx);
            assert_eq!(build_a_i(&f), build_a(&f).body);
        }
    }

    #[test]
    fn v_values() {
        assert_eq!(v_value(&q(&[1]), 4).unwrap(), 2);
        assert_eq!(v_value(&q(&[1, 2]), 5).unwrap(), 1);
        assert_eq!(v_value(&q(&[1, 3]), 8).unwrap(), 6);
    }

    #[test]
    fn v_matches_spectrum_small() {
        for idx in [vec![1u32], vec![2], vec![1, 2], vec![1, 3], vec![1, 2, 3]] {
            let f = q(&idx);
            for n in (2 * f.max_index() + 1)..=12 {
                let spectral = plateau_v(&walsh_transform(&truth_table(&f, n).unwrap())).unwrap();
                assert_eq!(v_value(&f, n).unwrap(), spectral, "Q={idx:?} n={n}");
            }
        }
    }

    #[test]
    fn v_allow_short_matches_spectrum() {
        // below 2J+1 the orbit-reduced construction still tracks the spectrum
        for idx in [vec![2u32], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]] {
            let f = q(&idx);
            for n in 2..(2 * f.max_index() + 1) {
                if f.indices().iter().any(|i| i % n == 0) {
                    continue;
                }
                let spectral = plateau_v(&walsh_transform(&truth_table(&f, n).unwrap())).unwrap();
                assert_eq!(
                    v_value_allow_short(&f, n).unwrap(),
                    spectral,
                    "Q={idx:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn worked_periods() {
        let r = period(&q(&[7, 4, 1])).unwrap();
        assert_eq!((r.period, r.m, r.t, r.max_v), (72, 9, 3, 14));
        assert_eq!(r.factors.len(), 2);
        assert_eq!(r.factors[0].factor, "x+1");
        assert_eq!(r.factors[0].multiplicity, 8);
        assert_eq!(r.factors[1].factor, "x^6+x^3+1");
        assert_eq!(r.factors[1].order, 9);

        assert_eq!(period(&q(&[5, 3, 2, 1])).unwrap().period, 34);
        assert_eq!(period(&q(&[5, 4, 2])).unwrap().period, 34);
        assert_eq!(period(&q(&[6, 2, 1])).unwrap().period, 102);
        assert_eq!(period(&q(&[1])).unwrap().period, 2);
    }

    #[test]
    fn period_json_shape() {
        let r = period(&q(&[7, 4, 1])).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"V":72,"m":9,"t":3,"factors":"#));
        assert!(json.contains(r#""max_v":14"#));
        let back: PeriodReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn closed_form_periods() {
        assert_eq!(binomial_period(2, 1).unwrap(), 6);
        assert_eq!(binomial_period(3, 1).unwrap(), 8);
        assert_eq!(binomial_period(7, 4).unwrap(), 66);
        assert!(binomial_period(3, 3).is_err());
        for i in 2..=8u32 {
            for j in 1..i {
                assert_eq!(
                    binomial_period(i, j).unwrap(),
                    period(&q(&[j, i])).unwrap().period,
                    "({i},{j})"
                );
            }
        }
        assert_eq!(gi_period(2).unwrap(), 6);
        assert_eq!(gi_period(3).unwrap(), 8);
        assert_eq!(gi_period(4).unwrap(), 30);
        assert!(gi_period(1).is_err());
        for i in 2..=12 {
            assert_eq!(gi_period(i).unwrap(), binomial_period(i, 1).unwrap());
        }
    }

    #[test]
    fn valuation_and_critical() {
        assert_eq!(d_q(&q(&[1, 3])).unwrap(), 6);
        assert_eq!(d_q(&q(&[1, 2])).unwrap(), 2);
        assert_eq!(d_q(&q(&[2, 6])).unwrap(), 12);
        assert!(d_q(&q(&[1, 2, 3])).is_err());
        for i in 2..=7u32 {
            for j in 1..i {
                let expect =
                    (1u32 << (i + j).trailing_zeros()) + (1 << (i - j).trailing_zeros());
                assert_eq!(d_q(&q(&[j, i])).unwrap(), expect, "({i},{j})");
            }
        }
        assert_eq!(critical_n(3, 1).unwrap(), 8);
        assert_eq!(critical_n(2, 1).unwrap(), 2);
        assert_eq!(critical_n(5, 3).unwrap(), 16);
    }

    #[test]
    fn balance_predictions() {
        let r = balance_predict_binomial(2, 1).unwrap();
        assert_eq!(r.kind, BalanceKind::Friendly);
        assert_eq!((r.nu, r.residue, r.modulus), (Some(0), Some(2), Some(4)));
        assert_eq!(r.balanced_at(6), Some(true));
        assert_eq!(r.balanced_at(8), Some(false));

        assert_eq!(
            balance_predict_binomial(3, 1).unwrap().kind,
            BalanceKind::Refractory
        );
        let r = balance_predict_binomial(4, 2).unwrap();
        assert_eq!((r.kind, r.residue, r.modulus), (BalanceKind::Friendly, Some(4), Some(8)));

        let r = balance_predict_uniqmin(&q(&[1, 2])).unwrap();
        assert_eq!((r.kind, r.residue), (BalanceKind::Friendly, Some(2)));
        let r = balance_predict_uniqmin(&q(&[1, 2, 4, 6])).unwrap();
        assert_eq!((r.kind, r.residue, r.modulus), (BalanceKind::Friendly, Some(2), Some(4)));
        assert_eq!(
            balance_predict_uniqmin(&q(&[1, 3])).unwrap().kind,
            BalanceKind::Unknown
        );
        assert!(balance_predict_uniqmin(&q(&[1, 2, 3])).is_err());
    }

    #[test]
    fn monomial_fact_pairs() {
        assert_eq!(monomial_facts(1, 5).unwrap(), (true, 1));
        assert_eq!(monomial_facts(1, 4).unwrap(), (false, 2));
        let (balanced, v) = monomial_facts(2, 8).unwrap();
        assert!(!balanced);
        assert_eq!(v, v_value(&q(&[2]), 8).unwrap());
        assert!(monomial_facts(2, 4).is_err());
        // v = gcd(n, 2t) throughout; balance matches the truth table
        for t in 1..=4u32 {
            for n in (2 * t + 1)..=14 {
                let (balanced, v) = monomial_facts(t, n).unwrap();
                assert_eq!(v, n.gcd(&(2 * t)), "t={t} n={n}");
                let tt = truth_table(&q(&[t]), n).unwrap();
                assert_eq!(
                    balanced,
                    classify_balance(&tt) == BalanceClass::Balanced,
                    "t={t} n={n}"
                );
            }
        }
    }

    #[test]
    fn weight_predictions() {
        assert_eq!(predicted_weight(&q(&[1]), 4, SignOracle::BruteForce).unwrap(), 4);
        assert_eq!(predicted_weight(&q(&[1, 3]), 8, SignOracle::BruteForce).unwrap(), 64);
        assert_eq!(predicted_weight(&q(&[1, 2]), 6, SignOracle::BruteForce).unwrap(), 32);
        assert_eq!(predicted_weight(&q(&[1]), 4, SignOracle::MatrixTrace).unwrap(), 4);
        assert_eq!(predicted_weight(&q(&[1, 3]), 8, SignOracle::MatrixTrace).unwrap(), 64);
        for idx in [vec![1u32], vec![2], vec![1, 2], vec![1, 3], vec![1, 2, 3]] {
            let f = q(&idx);
            for n in (2 * f.max_index() + 1)..=13 {
                let want = truth_table(&f, n).unwrap().weight();
                assert_eq!(predicted_weight(&f, n, SignOracle::Auto).unwrap(), want);
                assert_eq!(predicted_weight(&f, n, SignOracle::BruteForce).unwrap(), want);
            }
        }
        assert!(predicted_weight(&q(&[1, 2, 3]), 9, SignOracle::MatrixTrace).is_err());
    }

    #[test]
    fn affine_class_counts() {
        assert_eq!(affine_class_count_monomial(12).unwrap(), 5);
        assert_eq!(affine_class_count_monomial(3).unwrap(), 1);
        assert_eq!(affine_class_count_monomial(16).unwrap(), 4);
        assert!(affine_class_count_monomial(2).is_err());
        // brute-force comparison: distinct (weight, nonlinearity) pairs over
        // the single-offset functions with 1 <= t <= n/2
        for n in [8u32, 12] {
            let mut classes = std::collections::BTreeSet::new();
            for t in 1..=n / 2 {
                let tt = truth_table(&q(&[t]), n).unwrap();
                let nl = crate::boolfn::nonlinearity(&walsh_transform(&tt));
                classes.insert((tt.weight(), nl));
            }
            assert_eq!(classes.len() as u64, affine_class_count_monomial(n).unwrap());
        }
    }

    #[test]
    fn balance_scaling_reductions() {
        // scaling every offset by d scales the balanced n the same way
        for (idx, n) in [(vec![1u32, 2], 6u32), (vec![1, 2], 8), (vec![1, 4], 10)] {
            let base = q(&idx);
            let b0 = classify_balance(&truth_table(&base, n).unwrap()) == BalanceClass::Balanced;
            for d in 2..=3u32 {
                if d * n > 20 {
                    continue;
                }
                let scaled = q(&idx.iter().map(|i| i * d).collect::<Vec<_>>());
                let b1 = classify_balance(&truth_table(&scaled, d * n).unwrap())
                    == BalanceClass::Balanced;
                assert_eq!(b0, b1, "Q={idx:?} n={n} d={d}");
            }
        }
        // multiplying offsets by a unit mod n preserves balance
        for (idx, n) in [(vec![1u32, 2], 9u32), (vec![1, 3], 10), (vec![1, 2], 10)] {
            let base = q(&idx);
            let b0 = classify_balance(&truth_table(&base, n).unwrap()) == BalanceClass::Balanced;
            for k in 2..n {
                if k.gcd(&n) != 1 {
                    continue;
                }
                let mapped: Vec<u32> = idx
                    .iter()
                    .map(|i| {
                        let r = (i * k) % n;
                        r.min(n - r)
                    })
                    .collect();
                let b1 = classify_balance(&truth_table(&q(&mapped), n).unwrap())
                    == BalanceClass::Balanced;
                assert_eq!(b0, b1, "Q={idx:?} n={n} k={k}");
            }
        }
    }
}
