//! Rotation-symmetric quadratic Boolean functions, their truth tables and
//! Walsh spectra.
//!
//! A function is given by a set of offsets I: for each i in I take every
//! distinct cyclic shift of the monomial x_0 x_i on n variables and XOR the
//! lot together. Offsets are reduced mod n, so an offset above n/2 names the
//! same orbit as its mirror n - i, and two such terms cancel.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Default ceiling on truth-table size (2^26 bits; the spectrum is 512 MiB).
pub const DEFAULT_TABLE_CAP: u32 = 26;

/// Offset set of a quadratic rotation-symmetric function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadRsFunction {
    indices: Vec<u32>,
}

impl QuadRsFunction {
    /// Indices are sorted; duplicates and zeros are rejected.
    pub fn new(mut indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("offset set must be nonempty"));
        }
        indices.sort_unstable();
        if indices[0] == 0 {
            return Err(Error::invalid("offsets must be at least 1"));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("repeated offset"));
        }
        Ok(QuadRsFunction { indices })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Largest offset.
    pub fn max_index(&self) -> u32 {
        *self.indices.last().unwrap()
    }

    pub fn is_monomial(&self) -> bool {
        self.indices.len() == 1
    }

    pub fn is_binomial(&self) -> bool {
        self.indices.len() == 2
    }
}

impl fmt::Display for QuadRsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Packed truth table: bit r of the vector is f at input r, with variable
/// x_0 on the least significant bit of r.
#[derive(Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u32,
    bits: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BalanceClass {
    Balanced,
    Underbalanced,
    Overbalanced,
}

/// Walsh spectrum W(y) = sum over x of (-1)^(f(x) + x.y), indexed by y.
#[derive(Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i64>,
}

/// The distinct shift-orbit of the pair {0, i mod n}, as sorted index pairs.
fn orbit(i: u32, n: u32) -> BTreeSet<(u32, u32)> {
    let im = i % n;
    let mut set = BTreeSet::new();
    for k in 0..n {
        let a = k;
        let b = (k + im) % n;
        set.insert((a.min(b), a.max(b)));
    }
    set
}

/// XOR of the offset orbits: the monomial support of the function.
fn monomial_support(q: &QuadRsFunction, n: u32) -> Result<BTreeSet<(u32, u32)>> {
    let mut support = BTreeSet::new();
    for &i in q.indices() {
        if i % n == 0 {
            return Err(Error::invalid(format!(
                "offset {i} collapses mod n={n}: x_k x_k is not quadratic"
            )));
        }
        for pair in orbit(i, n) {
            if !support.remove(&pair) {
                support.insert(pair);
            }
        }
    }
    Ok(support)
}

pub fn truth_table(q: &QuadRsFunction, n: u32) -> Result<TruthTable> {
    truth_table_with_cap(q, n, DEFAULT_TABLE_CAP)
}

pub fn truth_table_with_cap(q: &QuadRsFunction, n: u32, cap: u32) -> Result<TruthTable> {
    if n < 2 {
        return Err(Error::invalid("need at least 2 variables"));
    }
    if n > cap {
        return Err(Error::limit(format!("truth table for n={n} over cap {cap}")));
    }
    let support = monomial_support(q, n)?;
    let words = 1usize << n.saturating_sub(6);
    let mut bits = vec![0u64; words];
    for &(a, b) in &support {
        for (w, word) in bits.iter_mut().enumerate() {
            *word ^= var_mask(a, w) & var_mask(b, w);
        }
    }
    if n < 6 {
        bits[0] &= (1u64 << (1 << n)) - 1;
    }
    Ok(TruthTable { n, bits })
}

/// Word w of the bit-sliced table of variable v (bit r of the slice = bit v of r).
fn var_mask(v: u32, w: usize) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if v < 6 {
        PATTERNS[v as usize]
    } else if (w >> (v - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

impl TruthTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, r: u64) -> bool {
        (self.bits[(r / 64) as usize] >> (r % 64)) & 1 == 1
    }

    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Little-endian byte dump: input r lands in byte r/8, bit r%8.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = ((1u64 << self.n) as usize).div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.bits {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn from_bytes(n: u32, bytes: &[u8]) -> Result<Self> {
        let nbytes = ((1u64 << n) as usize).div_ceil(8);
        if bytes.len() != nbytes {
            return Err(Error::invalid(format!(
                "expected {nbytes} bytes for n={n}, got {}",
                bytes.len()
            )));
        }
        let words = 1usize << n.saturating_sub(6);
        let mut bits = vec![0u64; words];
        for (i, b) in bytes.iter().enumerate() {
            bits[i / 8] |= (*b as u64) << (8 * (i % 8));
        }
        Ok(TruthTable { n, bits })
    }

    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(n: u32, s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::Parse("odd-length hex truth table".into()));
        }
        let bytes: Result<Vec<u8>> = (0..s.len() / 2)
            .map(|i| {
                u8::from_str_radix(&s[2 * i..2 * i + 2], 16)
                    .map_err(|e| Error::Parse(e.to_string()))
            })
            .collect();
        Self::from_bytes(n, &bytes?)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.to_hex())
    }
}

pub fn weight(q: &QuadRsFunction, n: u32) -> Result<u64> {
    Ok(truth_table(q, n)?.weight())
}

/// In-place fast Walsh-Hadamard butterfly, O(n 2^n) additions.
pub fn walsh_transform(table: &TruthTable) -> WalshSpectrum {
    let len = 1usize << table.n;
    let mut v: Vec<i64> = (0..len as u64)
        .map(|r| if table.get(r) { -1 } else { 1 })
        .collect();
    let mut h = 1usize;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for k in start..start + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
    WalshSpectrum {
        n: table.n,
        values: v,
    }
}

impl WalshSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn max_abs(&self) -> u64 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap()
    }

    /// CSV lines "y,W" with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("y,W\n");
        for (y, w) in self.values.iter().enumerate() {
            s.push_str(&format!("{y},{w}\n"));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.values).unwrap()
    }
}

impl fmt::Debug for WalshSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WalshSpectrum(n={}, max|W|={})", self.n, self.max_abs())
    }
}

pub fn nonlinearity(spectrum: &WalshSpectrum) -> u64 {
    (1u64 << (spectrum.n - 1)) - spectrum.max_abs() / 2
}

/// For a plateaued spectrum (all nonzero |W| equal to 2^((n+v)/2)) return v.
pub fn plateau_v(spectrum: &WalshSpectrum) -> Result<u32> {
    let mut mags: Vec<u64> = spectrum
        .values
        .iter()
        .filter(|v| **v != 0)
        .map(|v| v.unsigned_abs())
        .collect();
    mags.sort_unstable();
    mags.dedup();
    if mags.len() != 1 {
        return Err(Error::NotPlateaued(mags));
    }
    let m = mags[0];
    if !m.is_power_of_two() {
        return Err(Error::NotPlateaued(mags));
    }
    let log = m.trailing_zeros();
    if 2 * log < spectrum.n {
        return Err(Error::NotPlateaued(mags));
    }
    Ok(2 * log - spectrum.n)
}

pub fn classify_balance(table: &TruthTable) -> BalanceClass {
    let half = 1u64 << (table.n - 1);
    match table.weight().cmp(&half) {
        std::cmp::Ordering::Equal => BalanceClass::Balanced,
        std::cmp::Ordering::Less => BalanceClass::Underbalanced,
        std::cmp::Ordering::Greater => BalanceClass::Overbalanced,
    }
}

/// Quadratic functions are affine-equivalent exactly when weight and
/// nonlinearity both agree.
pub fn affine_equiv_quad(f: &TruthTable, g: &TruthTable) -> Result<bool> {
    if f.n != g.n {
        return Err(Error::invalid(format!(
            "variable counts differ: {} vs {}",
            f.n, g.n
        )));
    }
    if f.weight() != g.weight() {
        return Ok(false);
    }
    let nf = nonlinearity(&walsh_transform(f));
    let ng = nonlinearity(&walsh_transform(g));
    Ok(nf == ng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[u32]) -> QuadRsFunction {
        QuadRsFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constructor_contract() {
        assert!(QuadRsFunction::new(vec![]).is_err());
        assert!(QuadRsFunction::new(vec![0, 1]).is_err());
        assert!(QuadRsFunction::new(vec![2, 2]).is_err());
        assert_eq!(q(&[3, 1]).indices(), &[1, 3]);
        assert_eq!(q(&[3, 1]).to_string(), "{1,3}");
    }

    #[test]
    fn known_weights() {
        assert_eq!(weight(&q(&[1]), 2).unwrap(), 1);
        assert_eq!(weight(&q(&[2]), 4).unwrap(), 6);
        assert_eq!(weight(&q(&[1]), 4).unwrap(), 4);
        assert_eq!(weight(&q(&[1]), 5).unwrap(), 16);
        assert_eq!(weight(&q(&[1]), 6).unwrap(), 24);
        assert_eq!(weight(&q(&[1, 3]), 8).unwrap(), 64);
        // mirrored offsets name the same orbit and cancel
        assert_eq!(weight(&q(&[1, 2]), 3).unwrap(), 0);
    }

    #[test]
    fn orbit_sizes() {
        // generic offset: n monomials; the half-length offset: n/2
        assert_eq!(monomial_support(&q(&[1]), 7).unwrap().len(), 7);
        assert_eq!(monomial_support(&q(&[2]), 4).unwrap().len(), 2);
        assert_eq!(monomial_support(&q(&[3]), 6).unwrap().len(), 3);
        assert!(monomial_support(&q(&[3]), 3).is_err());
    }

    #[test]
    fn truth_table_matches_direct_eval() {
        for (idx, n) in [(vec![1u32], 7u32), (vec![1, 3], 8), (vec![2], 6), (vec![1, 2, 3], 9)] {
            let f = q(&idx);
            let tt = truth_table(&f, n).unwrap();
            let support = monomial_support(&f, n).unwrap();
            for r in 0..(1u64 << n) {
                let mut v = false;
                for &(a, b) in &support {
                    v ^= ((r >> a) & (r >> b)) & 1 == 1;
                }
                assert_eq!(tt.get(r), v, "Q={idx:?} n={n} r={r}");
            }
        }
    }

    #[test]
    fn walsh_frozen_values() {
        let tt = truth_table(&q(&[1]), 5).unwrap();
        let sp = walsh_transform(&tt);
        assert_eq!(sp.values()[0], 0); // balanced
        assert_eq!(sp.max_abs(), 8); // plateau 2^((5+1)/2)
        assert_eq!(nonlinearity(&sp), 12);
        assert_eq!(plateau_v(&sp).unwrap(), 1);

        // bent short function at n = 2i
        let tt = truth_table(&q(&[2]), 4).unwrap();
        let sp = walsh_transform(&tt);
        assert_eq!(sp.max_abs(), 4);
        assert_eq!(nonlinearity(&sp), 6);
        assert_eq!(plateau_v(&sp).unwrap(), 0);
    }

    #[test]
    fn parseval_and_weight_identity() {
        for (idx, n) in [(vec![1u32], 6u32), (vec![1, 3], 8), (vec![2, 3], 9)] {
            let f = q(&idx);
            let tt = truth_table(&f, n).unwrap();
            let sp = walsh_transform(&tt);
            let sum: i128 = sp.values().iter().map(|&v| (v as i128) * (v as i128)).sum();
            assert_eq!(sum, 1i128 << (2 * n));
            assert_eq!(sp.values()[0], (1i64 << n) - 2 * tt.weight() as i64);
        }
    }

    #[test]
    fn balance_classes() {
        let tt = truth_table(&q(&[1]), 5).unwrap();
        assert_eq!(classify_balance(&tt), BalanceClass::Balanced);
        let tt = truth_table(&q(&[1]), 4).unwrap();
        assert_eq!(classify_balance(&tt), BalanceClass::Underbalanced);
        let tt = truth_table(&q(&[1, 2]), 8).unwrap();
        assert_eq!(classify_balance(&tt), BalanceClass::Overbalanced);
    }

    #[test]
    fn affine_equivalence_cases() {
        let tt = |idx: &[u32], n| truth_table(&q(idx), n).unwrap();
        assert!(affine_equiv_quad(&tt(&[1], 5), &tt(&[1], 5)).unwrap());
        assert!(affine_equiv_quad(&tt(&[1], 5), &tt(&[2], 5)).unwrap());
        assert!(!affine_equiv_quad(&tt(&[1], 4), &tt(&[2], 4)).unwrap());
        assert!(!affine_equiv_quad(&tt(&[1], 6), &tt(&[3], 6)).unwrap());
        assert!(affine_equiv_quad(&tt(&[1], 5), &tt(&[1], 6)).is_err());
    }

    #[test]
    fn rotation_invariance() {
        for (idx, n) in [(vec![1u32], 7u32), (vec![1, 3], 8), (vec![2, 3], 9)] {
            let tt = truth_table(&q(&idx), n).unwrap();
            for r in 0..(1u64 << n) {
                let rot = ((r << 1) | (r >> (n - 1))) & ((1u64 << n) - 1);
                assert_eq!(tt.get(r), tt.get(rot));
            }
        }
    }

    #[test]
    fn export_round_trips() {
        let tt = truth_table(&q(&[1, 3]), 8).unwrap();
        let hex = tt.to_hex();
        assert_eq!(TruthTable::from_hex(8, &hex).unwrap(), tt);
        let bytes = tt.to_bytes();
        assert_eq!(bytes.len(), 32);
        assert_eq!(TruthTable::from_bytes(8, &bytes).unwrap(), tt);
        // small n: sub-byte table
        let tt = truth_table(&q(&[1]), 2).unwrap();
        assert_eq!(tt.to_bytes().len(), 1);
        assert_eq!(TruthTable::from_hex(2, &tt.to_hex()).unwrap(), tt);

        let sp = walsh_transform(&truth_table(&q(&[1]), 2).unwrap());
        assert!(sp.to_csv().starts_with("y,W\n0,"));
        assert_eq!(sp.to_json(), "[2,2,2,-2]");
    }

    #[test]
    fn table_cap_respected() {
        assert!(matches!(
            truth_table_with_cap(&q(&[1]), 20, 18),
            Err(Error::ResourceLimit(_))
        ));
    }
}
