//! Binary fields F_{2^n} on u64 element words, with the trace-form view of
//! quadratic rotation-symmetric functions: evaluation, weight by scan,
//! Frobenius kernel subspaces, and the recursive root identity behind the
//! vanishing argument.

use crate::boolfn::{classify_balance, truth_table, BalanceClass, QuadRsFunction};
use crate::error::{Error, Result};
use crate::gf2poly::{gf2_factor, Gf2Poly};

/// Construction cap on the extension degree.
pub const DEFAULT_FIELD_CAP: u32 = 24;
/// Full-field scans stop at 2^SCAN_CAP elements.
pub const SCAN_CAP: u32 = 24;

const HARD_DEGREE_CAP: u32 = 63;

/// F_{2^n} as GF(2)[x] modulo an irreducible degree-n polynomial, elements
/// packed into the low n bits of a u64.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldF2n {
    n: u32,
    modulus_bits: u64,
    trace_mask: u64,
}

fn poly_to_bits(p: &Gf2Poly) -> Result<u64> {
    match p.degree() {
        Some(d) if d <= HARD_DEGREE_CAP as usize => {
            let mut bits = 0u64;
            for k in 0..=d {
                if p.coeff(k) {
                    bits |= 1 << k;
                }
            }
            Ok(bits)
        }
        Some(d) => Err(Error::limit(format!("modulus degree {d} over 63"))),
        None => Err(Error::invalid("zero polynomial")),
    }
}

fn bits_to_poly(bits: u64) -> Gf2Poly {
    let exps: Vec<usize> = (0..64).filter(|k| (bits >> k) & 1 == 1).map(|k| k as usize).collect();
    Gf2Poly::from_exponents(&exps)
}

/// Least irreducible degree-n polynomial in the integer-bitmask order.
pub fn default_modulus(n: u32) -> Result<Gf2Poly> {
    if n == 0 || n > HARD_DEGREE_CAP {
        return Err(Error::invalid(format!("degree {n} outside 1..=63")));
    }
    let top = 1u64 << n;
    let mut c = 1u64;
    while c < top {
        let p = bits_to_poly(top | c);
        if gf2_factor(&p)?.is_irreducible() {
            return Ok(p);
        }
        c += 2;
    }
    unreachable!("an irreducible polynomial of each degree exists")
}

impl FieldF2n {
    pub fn new(n: u32, modulus: Option<Gf2Poly>) -> Result<Self> {
        Self::with_cap(n, modulus, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(n: u32, modulus: Option<Gf2Poly>, cap: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        if n > cap.min(HARD_DEGREE_CAP) {
            return Err(Error::limit(format!(
                "extension degree {n} over cap {}",
                cap.min(HARD_DEGREE_CAP)
            )));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.degree() != Some(n as usize) {
                    return Err(Error::invalid(format!(
                        "modulus degree {:?} does not match n={n}",
                        m.degree()
                    )));
                }
                if !gf2_factor(&m)?.is_irreducible() {
                    return Err(Error::invalid(format!("modulus {m} is reducible")));
                }
                m
            }
            None => default_modulus(n)?,
        };
        let mut field = FieldF2n {
            n,
            modulus_bits: poly_to_bits(&modulus)?,
            trace_mask: 0,
        };
        let mut mask = 0u64;
        for j in 0..n {
            if field.trace_slow(1 << j) {
                mask |= 1 << j;
            }
        }
        field.trace_mask = mask;
        Ok(field)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> Gf2Poly {
        bits_to_poly(self.modulus_bits)
    }

    pub fn element_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let mut acc: u128 = 0;
        let mut a = a;
        let mut shift = 0u32;
        while a != 0 {
            if a & 1 == 1 {
                acc ^= (b as u128) << shift;
            }
            a >>= 1;
            shift += 1;
        }
        self.reduce(acc)
    }

    fn reduce(&self, mut acc: u128) -> u64 {
        let n = self.n;
        let m = self.modulus_bits as u128;
        while acc >> n != 0 {
            let k = 127 - acc.leading_zeros();
            acc ^= m << (k - n);
        }
        acc as u64
    }

    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    /// a^(2^k); Frobenius iterated k times, reduced mod the order n.
    pub fn frobenius_pow(&self, a: u64, k: u32) -> u64 {
        let mut x = a;
        for _ in 0..(k % self.n) {
            x = self.square(x);
        }
        x
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::invalid("inverse of zero"));
        }
        let e = if self.n == 63 {
            (1u64 << 63) - 2
        } else {
            (1u64 << self.n) - 2
        };
        Ok(self.pow(a, e))
    }

    fn trace_slow(&self, a: u64) -> bool {
        let mut acc = a;
        let mut cur = a;
        for _ in 1..self.n {
            cur = self.square(cur);
            acc ^= cur;
        }
        debug_assert!(acc <= 1);
        acc == 1
    }

    /// Absolute trace down to GF(2), via the precomputed basis traces.
    pub fn trace(&self, a: u64) -> bool {
        (a & self.trace_mask).count_ones() % 2 == 1
    }

    pub fn element_to_hex(&self, a: u64) -> String {
        format!("{a:x}")
    }

    pub fn element_from_hex(&self, s: &str) -> Result<u64> {
        let a = u64::from_str_radix(s.trim(), 16)
            .map_err(|e| Error::Parse(format!("bad element {s:?}: {e}")))?;
        if a > self.element_mask() {
            return Err(Error::invalid(format!("element {s} outside the field")));
        }
        Ok(a)
    }
}

/// Sum over the offsets i of Tr(a^(2^i + 1)).
pub fn trace_form_eval(f: &FieldF2n, q: &QuadRsFunction, a: u64) -> bool {
    let mut acc = false;
    for &i in q.indices() {
        let b = f.frobenius_pow(a, i);
        acc ^= f.trace(f.mul(b, a));
    }
    acc
}

pub fn trace_form_weight(f: &FieldF2n, q: &QuadRsFunction) -> Result<u64> {
    trace_form_weight_with_cap(f, q, SCAN_CAP)
}

pub fn trace_form_weight_with_cap(f: &FieldF2n, q: &QuadRsFunction, cap: u32) -> Result<u64> {
    if f.n > cap {
        return Err(Error::limit(format!(
            "full scan of 2^{} elements over cap 2^{cap}",
            f.n
        )));
    }
    let mut w = 0u64;
    for a in 0..=f.element_mask() {
        if trace_form_eval(f, q, a) {
            w += 1;
        }
    }
    Ok(w)
}

/// GF(2)-linearly independent vectors spanning a subspace of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub field: FieldF2n,
    pub vectors: Vec<u64>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

fn rank_of(vectors: &[u64]) -> usize {
    let mut rows: Vec<u64> = vectors.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        if let Some(r) = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1) {
            rows.swap(rank, r);
            for rr in 0..rows.len() {
                if rr != rank && (rows[rr] >> bit) & 1 == 1 {
                    rows[rr] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Kernel of N as column-major bit matrix: n columns, column j holding the
/// image of the j-th basis vector.
fn kernel_basis(cols: &[u64], n: u32) -> Vec<u64> {
    let n = n as usize;
    let mut rows: Vec<u64> = (0..n)
        .map(|r| {
            let mut m = 0u64;
            for (j, c) in cols.iter().enumerate() {
                if (c >> r) & 1 == 1 {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0usize;
    for col in 0..n {
        if let Some(r) = (rank..rows.len()).find(|&r| (rows[r] >> col) & 1 == 1) {
            rows.swap(rank, r);
            for rr in 0..rows.len() {
                if rr != rank && (rows[rr] >> col) & 1 == 1 {
                    rows[rr] ^= rows[rank];
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
    }
    let mut basis = vec![];
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = 1u64 << free;
        for col in 0..n {
            if let Some(pr) = pivot_of_col[col] {
                if (rows[pr] >> free) & 1 == 1 {
                    v |= 1 << col;
                }
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = target for column-major M with `cols.len()` unknowns and
/// `rows` equations; any particular solution.
fn solve_linear(cols: &[u64], target: u64, rows: u32) -> Option<u64> {
    let width = cols.len();
    let mut eqs: Vec<(u64, u64)> = (0..rows as usize)
        .map(|r| {
            let mut m = 0u64;
            for (j, c) in cols.iter().enumerate() {
                if (c >> r) & 1 == 1 {
                    m |= 1 << j;
                }
            }
            (m, (target >> r) & 1)
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut rank = 0usize;
    for col in 0..width {
        if let Some(r) = (rank..eqs.len()).find(|&r| (eqs[r].0 >> col) & 1 == 1) {
            eqs.swap(rank, r);
            for rr in 0..eqs.len() {
                if rr != rank && (eqs[rr].0 >> col) & 1 == 1 {
                    eqs[rr].0 ^= eqs[rank].0;
                    eqs[rr].1 ^= eqs[rank].1;
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
    }
    if eqs[rank..].iter().any(|&(m, b)| m == 0 && b == 1) {
        return None;
    }
    let mut x = 0u64;
    for col in 0..width {
        if let Some(pr) = pivot_of_col[col] {
            if eqs[pr].1 == 1 {
                x |= 1 << col;
            }
        }
    }
    Some(x)
}

/// Basis of ker (F + id)^k where F is the Frobenius a -> a^2. The dimension
/// is min(k, 2^v) with v the 2-adic valuation of n: F + id is nilpotent only
/// on the 2-part of the extension.
pub fn frobenius_kernel_power(f: &FieldF2n, k: u32) -> Result<SubspaceBasis> {
    let n = f.n;
    let base_cols: Vec<u64> = (0..n).map(|j| f.square(1 << j) ^ (1 << j)).collect();
    let mul_cols = |a: &[u64], b: &[u64]| -> Vec<u64> {
        b.iter()
            .map(|&bc| {
                let mut out = 0u64;
                let mut bits = bc;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    out ^= a[j];
                    bits &= bits - 1;
                }
                out
            })
            .collect()
    };
    let mut acc: Vec<u64> = (0..n).map(|j| 1u64 << j).collect();
    let mut base = base_cols;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_cols(&base, &acc);
        }
        base = mul_cols(&base.clone(), &base);
        e >>= 1;
    }
    let vectors = kernel_basis(&acc, n);
    let expect = (k as usize).min(1 << n.trailing_zeros());
    if rank_of(&vectors) != vectors.len() || vectors.len() != expect {
        return Err(Error::Inconsistency(format!(
            "kernel dimension {} with rank {}, expected {expect}",
            vectors.len(),
            rank_of(&vectors)
        )));
    }
    Ok(SubspaceBasis {
        field: f.clone(),
        vectors,
    })
}

/// Does the trace form vanish on every element of the spanned subspace?
pub fn vanishes_on(f: &FieldF2n, q: &QuadRsFunction, s: &SubspaceBasis) -> Result<bool> {
    let dim = s.vectors.len();
    if dim > SCAN_CAP as usize {
        return Err(Error::limit(format!(
            "span enumeration of 2^{dim} elements over cap 2^{SCAN_CAP}"
        )));
    }
    let mut elem = 0u64;
    if trace_form_eval(f, q, elem) {
        return Ok(false);
    }
    for g in 1u64..(1 << dim) {
        elem ^= s.vectors[g.trailing_zeros() as usize];
        if trace_form_eval(f, q, elem) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn artin_schreier_solve(f: &FieldF2n, target: u64) -> Option<u64> {
    let cols: Vec<u64> = (0..f.n).map(|j| f.square(1 << j) ^ (1 << j)).collect();
    solve_linear(&cols, target, f.n)
}

struct Embedding {
    big: FieldF2n,
    beta_pows: Vec<u64>,
}

impl Embedding {
    /// Deterministic embedding of F_{2^n} into F_{2^2n}: the subfield fixed
    /// by Frobenius^n is found by kernel computation, then scanned for the
    /// least root of the small modulus.
    fn build(small: &FieldF2n) -> Result<Embedding> {
        let n = small.n;
        if 2 * n > 20 {
            return Err(Error::limit(format!(
                "quadratic extension of degree {n} over the embedding cap"
            )));
        }
        let big = FieldF2n::new(2 * n, None)?;
        let frob_n_cols: Vec<u64> = (0..2 * n)
            .map(|j| big.frobenius_pow(1 << j, n) ^ (1 << j))
            .collect();
        let subfield = kernel_basis(&frob_n_cols, 2 * n);
        if subfield.len() != n as usize {
            return Err(Error::Inconsistency(format!(
                "fixed subfield of Frobenius^{n} has dimension {}",
                subfield.len()
            )));
        }
        let small_mod = small.modulus_bits;
        let eval_small_mod = |x: u64| -> u64 {
            let mut acc = 0u64;
            for k in (0..=n).rev() {
                acc = big.mul(acc, x);
                if (small_mod >> k) & 1 == 1 {
                    acc ^= 1;
                }
            }
            acc
        };
        let mut beta = None;
        let mut elem = 0u64;
        let mut seen = vec![0u64];
        for g in 1u64..(1 << n) {
            elem ^= subfield[g.trailing_zeros() as usize];
            seen.push(elem);
        }
        seen.sort_unstable();
        for &cand in &seen {
            if eval_small_mod(cand) == 0 {
                beta = Some(cand);
                break;
            }
        }
        let beta = beta.ok_or_else(|| {
            Error::Inconsistency("the small modulus has no root in the subfield".into())
        })?;
        let mut beta_pows = Vec::with_capacity(n as usize);
        let mut p = 1u64;
        for _ in 0..n {
            beta_pows.push(p);
            p = big.mul(p, beta);
        }
        Ok(Embedding { big, beta_pows })
    }

    fn embed(&self, a: u64) -> u64 {
        let mut out = 0u64;
        let mut bits = a;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            out ^= self.beta_pows[j];
            bits &= bits - 1;
        }
        out
    }

    fn pull_back(&self, e: u64) -> Option<u64> {
        solve_linear(&self.beta_pows, e, self.big.n)
    }
}

/// Solve u^2 + u = alpha (in the field, or its quadratic extension when the
/// trace obstruction forces it) and return the pair
/// (u^(2^k+1) + v^(2^k+1), 1 + alpha + alpha^2 + alpha^4 + ... + alpha^(2^(k-1)))
/// where v = u + 1. The two agree identically.
pub fn alpharec_identity(f: &FieldF2n, alpha: u64, k: u32) -> Result<(u64, u64)> {
    if k == 0 {
        return Err(Error::invalid("need k >= 1"));
    }
    if alpha > f.element_mask() {
        return Err(Error::invalid("alpha outside the field"));
    }
    let mut rhs = 1u64;
    let mut cur = alpha;
    for _ in 0..k {
        rhs ^= cur;
        cur = f.square(cur);
    }

    if !f.trace(alpha) {
        let u = artin_schreier_solve(f, alpha)
            .ok_or_else(|| Error::Inconsistency("trace-zero element with no root".into()))?;
        let v = u ^ 1;
        let lhs = f.mul(f.frobenius_pow(u, k), u) ^ f.mul(f.frobenius_pow(v, k), v);
        return Ok((lhs, rhs));
    }

    let emb = Embedding::build(f)?;
    let target = emb.embed(alpha);
    let u = artin_schreier_solve(&emb.big, target)
        .ok_or_else(|| Error::Inconsistency("no root in the quadratic extension".into()))?;
    let v = u ^ 1;
    let big = &emb.big;
    let lhs_big = big.mul(big.frobenius_pow(u, k), u) ^ big.mul(big.frobenius_pow(v, k), v);
    let lhs = emb
        .pull_back(lhs_big)
        .ok_or_else(|| Error::Inconsistency("identity value left the small field".into()))?;
    Ok((lhs, rhs))
}

/// Balance class on the truth-table side and on the trace-form side, which
/// need not agree.
pub fn balance_transfer_check(q: &QuadRsFunction, n: u32) -> Result<(BalanceClass, BalanceClass)> {
    let table_class = classify_balance(&truth_table(q, n)?);
    let f = FieldF2n::new(n, None)?;
    let w = trace_form_weight(&f, q)?;
    let half = 1u64 << (n - 1);
    let field_class = match w.cmp(&half) {
        std::cmp::Ordering::Equal => BalanceClass::Balanced,
        std::cmp::Ordering::Less => BalanceClass::Underbalanced,
        std::cmp::Ordering::Greater => BalanceClass::Overbalanced,
    };
    Ok((table_class, field_class))
}
