//! Recursion matrices for quadratic rotation-symmetric weight sequences:
//! block constructions from the 2x2 Hadamard seeds, exact characteristic
//! polynomials, scaled-order verdicts, and trace-vs-weight comparisons.

use crate::boolfn::{truth_table, QuadRsFunction};
use crate::error::{Error, Result};
use crate::intmatrix::IntMatrix;
use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

/// Largest matrix the builders will produce (2^10 square).
pub const DEFAULT_MATRIX_CAP: usize = 1 << 10;
/// Exact characteristic polynomials get expensive beyond this size.
pub const CHAR_POLY_CAP: usize = 64;

pub fn h0() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap()
}

pub fn h1() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 1], vec![-1, 1]]).unwrap()
}

/// Insert k zero columns after each column; width becomes width*(k+1).
pub fn pad_columns(m: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zero(m.rows(), m.cols() * (k + 1));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            *out.get_mut(r, c * (k + 1)) = m.get(r, c).clone();
        }
    }
    out
}

/// Cyclically shift every row right by k (negative k shifts left).
pub fn rotate_rows(m: &IntMatrix, k: i64) -> IntMatrix {
    let w = m.cols();
    if w == 0 {
        return m.clone();
    }
    let s = k.rem_euclid(w as i64) as usize;
    let mut out = IntMatrix::zero(m.rows(), w);
    for r in 0..m.rows() {
        for c in 0..w {
            *out.get_mut(r, (c + s) % w) = m.get(r, c).clone();
        }
    }
    out
}

fn build_r_blocks(i: u32, pick: impl Fn(u64) -> IntMatrix) -> Result<IntMatrix> {
    if i == 0 {
        return Err(Error::invalid("index must be at least 1"));
    }
    let size = 1u64 << i;
    if size as usize > DEFAULT_MATRIX_CAP {
        return Err(Error::limit(format!(
            "matrix size 2^{i} exceeds cap {DEFAULT_MATRIX_CAP}"
        )));
    }
    let half = 1u64 << (i - 1);
    let pad = half as usize - 1;
    let blocks: Vec<IntMatrix> = (0..half)
        .map(|r| rotate_rows(&pad_columns(&pick(r), pad), r as i64))
        .collect();
    IntMatrix::stack(&blocks)
}

/// 2^i x 2^i recursion matrix for the single-offset function.
pub fn build_r_mono(i: u32) -> Result<IntMatrix> {
    build_r_blocks(i, |_| h0())
}

/// Two-offset variant: block r takes the sign-flipped seed whenever
/// floor(r / 2^(j-1)) is odd.
pub fn build_r_binom(i: u32, j: u32) -> Result<IntMatrix> {
    if j == 0 || j >= i {
        return Err(Error::invalid(format!("need i > j >= 1, got ({i},{j})")));
    }
    build_r_blocks(i, |r| {
        if (r >> (j - 1)) & 1 == 1 {
            h1()
        } else {
            h0()
        }
    })
}

pub fn char_poly(m: &IntMatrix) -> Result<IntPoly> {
    if m.rows() > CHAR_POLY_CAP {
        return Err(Error::limit(format!(
            "characteristic polynomial cap is {CHAR_POLY_CAP}, matrix is {}",
            m.rows()
        )));
    }
    m.char_poly()
}

/// All entries +-1 and rows mutually orthogonal.
pub fn is_hadamard(m: &IntMatrix) -> bool {
    if !m.is_square() || m.rows() == 0 {
        return false;
    }
    let n = m.rows();
    let one = BigInt::one();
    for r in 0..n {
        for c in 0..n {
            if m.get(r, c).magnitude() != one.magnitude() {
                return false;
            }
        }
    }
    let gram = m.mul(&m.transpose()).unwrap();
    gram == IntMatrix::identity(n).mul_scalar(&BigInt::from(n as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledOrderVerdict {
    pub k_claim: u64,
    pub satisfies: bool,
    pub minimal: bool,
}

/// Does M^K equal 2^(K/2) * Id, and is K the least even exponent doing so?
/// A false verdict is a finding, not an error.
pub fn scaled_order_check(m: &IntMatrix, k_claim: u64) -> Result<ScaledOrderVerdict> {
    if !m.is_square() {
        return Err(Error::invalid("order check needs a square matrix"));
    }
    if k_claim == 0 || k_claim % 2 != 0 {
        return Err(Error::invalid("claimed order must be a positive even number"));
    }
    let scaled_identity_power = |k: u64| -> Result<bool> {
        let target = IntMatrix::identity(m.rows())
            .mul_scalar(&(BigInt::one() << (k / 2) as usize));
        Ok(m.pow(k)? == target)
    };
    let satisfies = scaled_identity_power(k_claim)?;
    let mut minimal = satisfies;
    if satisfies {
        for k in (2..k_claim).step_by(2) {
            if k_claim % k == 0 && scaled_identity_power(k)? {
                minimal = false;
                break;
            }
        }
    }
    Ok(ScaledOrderVerdict {
        k_claim,
        satisfies,
        minimal,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EccTraceRow {
    pub n: u32,
    /// trace of R^n, decimal
    pub trace: String,
    /// 2^n - 2*weight, decimal
    pub expected: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EccTraceReport {
    pub indices: Vec<u32>,
    pub matrix_size: usize,
    /// false for single offsets (proven case), true for pairs
    pub conjectural: bool,
    pub rows: Vec<EccTraceRow>,
    pub all_equal: bool,
}

/// The recursion matrix attached to a one- or two-offset function.
pub fn rules_matrix_for(q: &QuadRsFunction) -> Result<IntMatrix> {
    match q.indices() {
        [t] => build_r_mono(*t),
        [j, i] => build_r_binom(*i, *j),
        _ => Err(Error::Unsupported(
            "recursion matrices are built for one or two offsets only".into(),
        )),
    }
}

/// Compare trace(R^n) against 2^n - 2*weight over a range of n.
pub fn ecc_trace_check(q: &QuadRsFunction, ns: RangeInclusive<u32>) -> Result<EccTraceReport> {
    let r = rules_matrix_for(q)?;
    let (lo, hi) = (*ns.start(), *ns.end());
    if lo == 0 || lo > hi {
        return Err(Error::invalid("empty or zero-based range"));
    }
    let mut power = r.pow(lo as u64)?;
    let mut rows = Vec::new();
    for n in lo..=hi {
        if n > lo {
            power = power.mul(&r)?;
        }
        let tr = power.trace()?;
        let wt = truth_table(q, n)?.weight();
        let expected: BigInt = (BigInt::one() << n as usize) - (BigInt::from(wt) << 1u32);
        rows.push(EccTraceRow {
            n,
            trace: tr.to_string(),
            expected: expected.to_string(),
            equal: tr == expected,
        });
    }
    let all_equal = rows.iter().all(|row| row.equal);
    Ok(EccTraceReport {
        indices: q.indices().to_vec(),
        matrix_size: r.rows(),
        conjectural: q.indices().len() == 2,
        rows,
        all_equal,
    })
}

/// Check that the weight sequence satisfies the linear recurrence with the
/// given characteristic polynomial at every window inside the range.
pub fn weight_recurrence_check(
    q: &QuadRsFunction,
    poly: &IntPoly,
    ns: RangeInclusive<u32>,
) -> Result<bool> {
    let Some(d) = poly.degree() else {
        return Err(Error::invalid("zero recurrence polynomial"));
    };
    let (lo, hi) = (*ns.start(), *ns.end());
    if d == 0 || lo == 0 || lo > hi || ((hi - lo) as usize) < d {
        return Err(Error::invalid(format!(
            "range {lo}..={hi} too short for a degree-{d} recurrence"
        )));
    }
    let weights: Vec<BigInt> = (lo..=hi)
        .map(|n| Ok(BigInt::from(truth_table(q, n)?.weight())))
        .collect::<Result<_>>()?;
    for base in 0..=(weights.len() - 1 - d) {
        let mut acc = BigInt::zero();
        for (k, c) in poly.coeffs().iter().enumerate() {
            acc += c * &weights[base + k];
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[u32]) -> QuadRsFunction {
        QuadRsFunction::new(v.to_vec()).unwrap()
    }

    fn rows_of(m: &IntMatrix) -> Vec<Vec<i64>> {
        (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| {
                        let s = m.get(r, c).to_string();
                        s.parse::<i64>().unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn pad_and_rotate() {
        assert_eq!(pad_columns(&h0(), 0), h0());
        let p = pad_columns(&h0(), 1);
        assert_eq!(rows_of(&p), vec![vec![1, 0, 1, 0], vec![1, 0, -1, 0]]);
        let p3 = pad_columns(&h0(), 3);
        assert_eq!(p3.cols(), 8);
        let row = IntMatrix::from_rows(&[vec![1, 0, 1, 0]]).unwrap();
        assert_eq!(
            rows_of(&rotate_rows(&row, 1)),
            vec![vec![0, 1, 0, 1]]
        );
        assert_eq!(rotate_rows(&rotate_rows(&row, 1), -1), row);
        assert_eq!(rotate_rows(&row, 0), row);
        assert_eq!(rotate_rows(&row, 4), row);
    }

    #[test]
    fn builders_match_direct_construction() {
        assert_eq!(build_r_mono(1).unwrap(), h0());
        assert_eq!(
            rows_of(&build_r_mono(2).unwrap()),
            vec![
                vec![1, 0, 1, 0],
                vec![1, 0, -1, 0],
                vec![0, 1, 0, 1],
                vec![0, 1, 0, -1],
            ]
        );
        assert_eq!(
            rows_of(&build_r_binom(2, 1).unwrap()),
            vec![
                vec![1, 0, 1, 0],
                vec![1, 0, -1, 0],
                vec![0, 1, 0, 1],
                vec![0, -1, 0, 1],
            ]
        );
        // seed pattern along blocks: (3,1) alternates every block, (3,2) in pairs
        let r31 = build_r_binom(3, 1).unwrap();
        let r32 = build_r_binom(3, 2).unwrap();
        assert_eq!(*r31.get(3, 1), BigInt::from(-1)); // block 1 sign-flipped
        assert_eq!(*r32.get(3, 1), BigInt::from(1)); // block 1 unflipped
        assert_eq!(r31.rows(), 8);
        assert!(build_r_binom(2, 2).is_err());
        assert!(build_r_binom(1, 0).is_err());
        // every row has exactly two nonzero entries, both +-1
        for m in [&r31, &r32, &build_r_mono(4).unwrap()] {
            for r in 0..m.rows() {
                let nz: Vec<String> = (0..m.cols())
                    .map(|c| m.get(r, c).to_string())
                    .filter(|s| s != "0")
                    .collect();
                assert_eq!(nz.len(), 2);
                assert!(nz.iter().all(|s| s == "1" || s == "-1"));
            }
        }
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(
            char_poly(&h0()).unwrap(),
            IntPoly::parse("x^2-2").unwrap()
        );
        assert_eq!(
            char_poly(&build_r_mono(2).unwrap()).unwrap(),
            IntPoly::parse("x^4-4").unwrap()
        );
        assert_eq!(
            char_poly(&build_r_binom(2, 1).unwrap()).unwrap(),
            IntPoly::parse("x^4-2x^3+2x^2-4x+4").unwrap()
        );
        assert_eq!(
            char_poly(&build_r_mono(3).unwrap()).unwrap(),
            IntPoly::parse("x^8-2x^6-8x^2+16").unwrap()
        );
    }

    #[test]
    fn hadamard_powers() {
        assert!(is_hadamard(&h0()));
        assert!(is_hadamard(&h1()));
        assert!(!is_hadamard(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap()));
        assert!(!is_hadamard(&IntMatrix::identity(2)));
        for i in 2..=4u32 {
            let ri = build_r_mono(i).unwrap();
            assert!(is_hadamard(&ri.pow(i as u64).unwrap()), "R({i})^{i}");
            for j in 1..i {
                let rij = build_r_binom(i, j).unwrap();
                assert!(is_hadamard(&rij.pow(i as u64).unwrap()), "R({i},{j})^{i}");
            }
        }
        // the squared two-offset 4x4 case, written out
        let sq = build_r_binom(2, 1).unwrap().pow(2).unwrap();
        assert_eq!(
            rows_of(&sq),
            vec![
                vec![1, 1, 1, 1],
                vec![1, -1, 1, -1],
                vec![1, -1, -1, 1],
                vec![-1, -1, 1, 1],
            ]
        );
    }

    #[test]
    fn determinant_pattern() {
        for i in 2..=4u32 {
            for j in 1..i {
                let det = build_r_binom(i, j).unwrap().det().unwrap();
                let expect = BigInt::one() << (1usize << (i - 1));
                assert!(det == expect || det == -expect.clone(), "det R({i},{j}) = {det}");
            }
        }
    }

    #[test]
    fn scaled_order_verdicts() {
        let v = scaled_order_check(&h0(), 8).unwrap();
        assert!(v.satisfies && !v.minimal);
        let v = scaled_order_check(&IntMatrix::identity(3), 2).unwrap();
        assert!(!v.satisfies);
        assert!(scaled_order_check(&h0(), 7).is_err());
        let v = scaled_order_check(&build_r_binom(2, 1).unwrap(), 24).unwrap();
        assert!(v.satisfies && v.minimal);
        let v = scaled_order_check(&build_r_binom(3, 1).unwrap(), 8).unwrap();
        assert!(v.satisfies && v.minimal);
    }

    #[test]
    fn trace_identity_monomials() {
        for t in 1..=2u32 {
            let report = ecc_trace_check(&q(&[t]), (2 * t + 1)..=14).unwrap();
            assert!(!report.conjectural);
            assert!(report.all_equal, "offset {t}: {:?}", report.rows);
        }
        let report = ecc_trace_check(&q(&[1, 2]), 5..=12).unwrap();
        assert!(report.conjectural);
        assert!(report.all_equal);
        assert!(ecc_trace_check(&q(&[1, 2, 3]), 7..=9).is_err());
    }

    #[test]
    fn recurrence_windows() {
        let p = IntPoly::parse("x-2")
            .unwrap()
            .mul(&IntPoly::parse("x^2-2").unwrap());
        assert!(weight_recurrence_check(&q(&[1]), &p, 3..=16).unwrap());
        assert!(!weight_recurrence_check(&q(&[1]), &IntPoly::parse("x-3").unwrap(), 3..=16).unwrap());
        let p2 = IntPoly::parse("x-2")
            .unwrap()
            .mul(&IntPoly::parse("x^4-4").unwrap());
        assert!(weight_recurrence_check(&q(&[2]), &p2, 5..=16).unwrap());
        assert!(weight_recurrence_check(&q(&[1]), &p, 3..=4).is_err());
    }

    #[test]
    fn minimal_recurrences_for_monomials() {
        // the degree-(2t+1) recurrence holds, and no factor can be dropped
        let cases: [(u32, &[&str]); 3] = [
            (1, &["x-2", "x^2-2"]),
            (2, &["x-2", "x^2-2", "x^2+2"]),
            (3, &["x-2", "x^2-2", "x^4+2x^2+4"]),
        ];
        for (t, factors) in cases {
            let polys: Vec<IntPoly> =
                factors.iter().map(|s| IntPoly::parse(s).unwrap()).collect();
            let full = polys.iter().fold(IntPoly::one(), |acc, p| acc.mul(p));
            let lo = 2 * t + 1;
            assert!(weight_recurrence_check(&q(&[t]), &full, lo..=16).unwrap());
            for drop in 0..polys.len() {
                let reduced = polys
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != drop)
                    .fold(IntPoly::one(), |acc, (_, p)| acc.mul(p));
                assert!(
                    !weight_recurrence_check(&q(&[t]), &reduced, lo..=16).unwrap(),
                    "offset {t} without factor {}",
                    factors[drop]
                );
            }
        }
    }
}
