//! Scaled cyclotomic polynomials over Z and their factorization into a
//! product P(x) P(-x). The factor oracle is exact: roots are tracked as
//! exponents of a single root of unity, the square root of the scaling
//! constant is a product of Gauss sums, Galois orbits decide the grouping,
//! and candidate factors are verified by integer polynomial multiplication
//! before being reported.

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Cap on the index for cyclotomic polynomial construction.
pub const CYCLO_CAP: u32 = 200;
/// Cap on the degree accepted by the split oracle.
pub const SPLIT_DEGREE_CAP: usize = 80;

fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1u64;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Moebius function; 0 on non-squarefree input.
fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// The n-th cyclotomic polynomial by iterated exact division of x^n - 1.
pub fn cyclotomic_z(n: u32) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::invalid("cyclotomic index must be at least 1"));
    }
    if n > CYCLO_CAP {
        return Err(Error::limit(format!("cyclotomic index {n} over cap {CYCLO_CAP}")));
    }
    let mut memo: Vec<Option<IntPoly>> = vec![None; n as usize + 1];
    Ok(cyclo_memo(n as usize, &mut memo))
}

fn cyclo_memo(n: usize, memo: &mut Vec<Option<IntPoly>>) -> IntPoly {
    if let Some(p) = &memo[n] {
        return p.clone();
    }
    let mut num = IntPoly::monomial(BigInt::one(), n);
    num = num.sub(&IntPoly::one());
    for d in 1..n {
        if n % d == 0 {
            let q = cyclo_memo(d, memo);
            num = num.div_exact(&q).expect("cyclotomic division is exact");
        }
    }
    memo[n] = Some(num.clone());
    num
}

/// A pair (n, d) with d squarefree, naming d^e Phi(x^2 / d) style scalings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledCycloInput {
    pub n: u32,
    pub d: i64,
    /// odd part of n
    pub n_odd: u32,
    pub phi_n: u32,
    /// field discriminant of Q(sqrt d): d itself when d = 1 mod 4, else 4d
    pub discriminant: i64,
}

impl ScaledCycloInput {
    pub fn new(n: u32, d: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("index must be at least 1"));
        }
        if !is_squarefree(d) {
            return Err(Error::invalid(format!("d={d} is not squarefree and nonzero")));
        }
        let n_odd = n >> n.trailing_zeros();
        let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(ScaledCycloInput {
            n,
            d,
            n_odd,
            phi_n: euler_phi(u64::from(n)) as u32,
            discriminant,
        })
    }
}

/// The scaled polynomial: for 4 | n substitute x/sqrt(d) into Phi_n and
/// clear denominators; otherwise substitute x^2/d into the cyclotomic
/// polynomial of the odd part. Always monic and even.
pub fn phi_tilde(inp: &ScaledCycloInput) -> Result<IntPoly> {
    let d = BigInt::from(inp.d);
    let out = if inp.n % 4 == 0 {
        let phi = cyclotomic_z(inp.n)?;
        let deg = phi.degree().unwrap();
        if !phi.is_even_poly() {
            return Err(Error::Inconsistency(format!(
                "cyclotomic polynomial of {} is not even",
                inp.n
            )));
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (k, c) in coeffs.iter_mut().enumerate().step_by(2) {
            *c = phi.coeff(k) * d.pow(((deg - k) / 2) as u32);
        }
        IntPoly::from_coeffs(coeffs)
    } else {
        let phi = cyclotomic_z(inp.n_odd)?;
        let deg = phi.degree().unwrap();
        let mut coeffs = vec![BigInt::zero(); 2 * deg + 1];
        for k in 0..=deg {
            coeffs[2 * k] = phi.coeff(k) * d.pow((deg - k) as u32);
        }
        IntPoly::from_coeffs(coeffs)
    };
    debug_assert!(out.is_monic() && out.is_even_poly());
    Ok(out)
}

/// Closed-form reducibility test for the scaled polynomial.
pub fn reducibility_criterion(inp: &ScaledCycloInput) -> bool {
    let (n, d) = (u64::from(inp.n), inp.d);
    let abs_d = d.unsigned_abs();
    match d.rem_euclid(4) {
        2 | 3 => n % (4 * abs_d) == 0 && (n / (4 * abs_d)) % 2 == 1,
        1 => n % abs_d == 0 && n % 4 != 0,
        _ => false,
    }
}

/// Remainder of p modulo a monic divisor.
fn rem_by_monic(p: &IntPoly, m: &IntPoly) -> IntPoly {
    debug_assert!(m.is_monic());
    let md = m.degree().unwrap();
    let mut rem: Vec<BigInt> = p.coeffs().to_vec();
    while rem.len() > md {
        let lead = rem.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = rem.len() - md;
        for k in 0..md {
            let delta = &lead * &m.coeff(k);
            rem[shift + k] -= delta;
        }
    }
    IntPoly::from_coeffs(rem)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Dense element of Z[z]/(z^M - 1), coefficient per exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ring {
    c: Vec<i64>,
}

impl Ring {
    fn zero(m: usize) -> Ring {
        Ring { c: vec![0; m] }
    }

    fn one(m: usize) -> Ring {
        let mut r = Ring::zero(m);
        r.c[0] = 1;
        r
    }

    fn m(&self) -> usize {
        self.c.len()
    }

    fn add_assign(&mut self, other: &Ring) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    fn sub_assign(&mut self, other: &Ring) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a -= b;
        }
    }

    /// multiply by z^e: cyclic rotation
    fn rot(&self, e: usize) -> Ring {
        let m = self.m();
        let mut out = Ring::zero(m);
        for (i, &v) in self.c.iter().enumerate() {
            out.c[(i + e) % m] = v;
        }
        out
    }

    fn mul(&self, other: &Ring) -> Ring {
        let m = self.m();
        let mut out = Ring::zero(m);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if b != 0 {
                    out.c[(i + j) % m] += a * b;
                }
            }
        }
        out
    }

    /// Galois action z -> z^a.
    fn galois(&self, a: usize) -> Ring {
        let m = self.m();
        let mut out = Ring::zero(m);
        for (i, &v) in self.c.iter().enumerate() {
            out.c[(i * a) % m] += v;
        }
        out
    }

    fn to_intpoly(&self) -> IntPoly {
        IntPoly::from_coeffs(self.c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// canonical representative modulo the M-th cyclotomic polynomial
    fn reduced(&self, phi_m: &IntPoly) -> IntPoly {
        rem_by_monic(&self.to_intpoly(), phi_m)
    }
}

/// sqrt of d inside Z[z]/(z^M - 1) as a product of Gauss sums, exact-checked.
fn sqrt_in_ring(m: usize, d: i64, phi_m: &IntPoly) -> Result<Ring> {
    let mut t = Ring::one(m);
    let mut rest = d.unsigned_abs();
    if rest % 2 == 0 {
        debug_assert_eq!(m % 8, 0);
        let mut s = Ring::zero(m);
        s.c[m / 8] += 1;
        s.c[m - m / 8] += 1;
        t = t.mul(&s);
        rest /= 2;
    }
    let mut p = 3u64;
    while rest > 1 {
        if rest % p == 0 {
            debug_assert_eq!(m as u64 % p, 0);
            let step = m / p as usize;
            let mut s = Ring::zero(m);
            for a in 1..p {
                s.c[a as usize * step % m] += legendre(a, p);
            }
            t = t.mul(&s);
            rest /= p;
        } else {
            p += 2;
        }
    }
    let square = t.mul(&t).reduced(phi_m);
    let want = IntPoly::constant(BigInt::from(d));
    if square == want {
        return Ok(t);
    }
    if square == want.neg() {
        debug_assert_eq!(m % 4, 0);
        let adjusted = t.rot(m / 4);
        if adjusted.mul(&adjusted).reduced(phi_m) == want {
            return Ok(adjusted);
        }
    }
    Err(Error::Inconsistency(format!(
        "Gauss sum square for d={d} came out as {square}"
    )))
}

/// Exponents e with the roots of the scaled polynomial being t z^e.
fn root_exponents(inp: &ScaledCycloInput, m: usize) -> Vec<usize> {
    let n = inp.n as usize;
    let mut out = vec![];
    if n % 4 == 0 {
        let step = m / n;
        for k in 1..n {
            if k.gcd(&n) == 1 {
                out.push(k * step % m);
            }
        }
    } else {
        let no = inp.n_odd as usize;
        let step = m / (2 * no);
        for k in 0..no {
            if k.gcd(&no) == 1 {
                let e = (no + 1) * k * step % m;
                out.push(e);
                out.push((e + m / 2) % m);
            }
        }
    }
    out.sort_unstable();
    out
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Rational integer represented by a ring element modulo the M-th
/// cyclotomic polynomial, extracted through the trace form.
fn trace_constant(r: &Ring, trace_table: &[i64], phi_m_val: i64) -> Result<i64> {
    let mut s: i128 = 0;
    for (e, &v) in r.c.iter().enumerate() {
        if v != 0 {
            s += i128::from(v) * i128::from(trace_table[e]);
        }
    }
    let phi = i128::from(phi_m_val);
    if s % phi != 0 {
        return Err(Error::Inconsistency(
            "trace of a supposed rational constant is not divisible by phi(M)".into(),
        ));
    }
    i64::try_from(s / phi)
        .map_err(|_| Error::Inconsistency("extracted coefficient out of range".into()))
}

/// Wrap a monic candidate so the mirrored variant with the same product is
/// considered too, picking the one whose lowest differing coefficient is
/// positive.
fn canonical_mirror(p: IntPoly) -> IntPoly {
    let deg = p.degree().unwrap_or(0);
    let mut mirror = p.substitute_neg_x();
    if deg % 2 == 1 {
        mirror = mirror.neg();
    }
    for k in 0..=deg {
        let (a, b) = (p.coeff(k), mirror.coeff(k));
        if a != b {
            return if a > b { p } else { mirror };
        }
    }
    p
}

/// The split oracle: Some(P) with P(x) P(-x) = +-Phi~ when the scaled
/// polynomial factors that way over Z, None when it does not.
pub fn split_scaled(inp: &ScaledCycloInput) -> Result<Option<IntPoly>> {
    let target = phi_tilde(inp)?;
    let deg = target.degree().unwrap();
    if deg > SPLIT_DEGREE_CAP {
        return Err(Error::limit(format!(
            "degree {deg} over the split cap {SPLIT_DEGREE_CAP}"
        )));
    }
    let base = if inp.n % 4 == 0 {
        u64::from(inp.n)
    } else {
        2 * u64::from(inp.n_odd)
    };
    let m4 = 4 * inp.d.unsigned_abs();
    let m_big = base.lcm(&m4) as usize;
    let m4 = m4 as usize;

    // the square root of d lives in the small subring generated by z^(M/M4)
    let phi_m4 = cyclotomic_z(m4 as u32)?;
    let t_small = sqrt_in_ring(m4, inp.d, &phi_m4)?;
    let t_small_red = t_small.reduced(&phi_m4);
    let t_small_neg = t_small_red.neg();

    // sign character of the Galois action on sqrt(d), indexed mod M4
    let mut chi = vec![None::<bool>; m4];
    for a in (1..m4).filter(|a| a.gcd(&m4) == 1) {
        let image = t_small.galois(a).reduced(&phi_m4);
        let flip = if image == t_small_red {
            false
        } else if image == t_small_neg {
            true
        } else {
            return Err(Error::Inconsistency(format!(
                "Galois image of sqrt({}) is not +-sqrt({})",
                inp.d, inp.d
            )));
        };
        chi[a] = Some(flip);
    }

    let exps = root_exponents(inp, m_big);
    debug_assert_eq!(exps.len(), deg);
    let mut index_of = vec![usize::MAX; m_big];
    for (i, &e) in exps.iter().enumerate() {
        index_of[e] = i;
    }
    let lookup = |e: usize| -> Result<usize> {
        let i = index_of[e];
        if i == usize::MAX {
            return Err(Error::Inconsistency(format!(
                "Galois action left the root set at exponent {e}"
            )));
        }
        Ok(i)
    };

    let mut dsu = DisjointSet::new(exps.len());
    for a in (1..m_big).filter(|a| a.gcd(&m_big) == 1) {
        let flip = chi[a % m4].expect("units mod M restrict to units mod M4");
        for (i, &e) in exps.iter().enumerate() {
            let mut e2 = e * a % m_big;
            if flip {
                e2 = (e2 + m_big / 2) % m_big;
            }
            dsu.union(i, lookup(e2)?);
        }
    }

    let mut orbits: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &e) in exps.iter().enumerate() {
        orbits.entry(dsu.find(i)).or_default().push(e);
    }
    let orbits: Vec<Vec<usize>> = orbits.into_values().collect();

    // pair orbits through negation; a self-paired orbit blocks the split
    let orbit_id_of_root = {
        let mut map = vec![usize::MAX; m_big];
        for (oi, o) in orbits.iter().enumerate() {
            for &e in o {
                map[e] = oi;
            }
        }
        map
    };
    let mut chosen: Vec<usize> = vec![];
    let mut seen = vec![false; orbits.len()];
    for (oi, o) in orbits.iter().enumerate() {
        if seen[oi] {
            continue;
        }
        let partner = orbit_id_of_root[(o[0] + m_big / 2) % m_big];
        if partner == usize::MAX {
            return Err(Error::Inconsistency("root set not closed under negation".into()));
        }
        if partner == oi {
            return Ok(None);
        }
        seen[oi] = true;
        seen[partner] = true;
        chosen.push(if orbits[oi][0] <= orbits[partner][0] {
            oi
        } else {
            partner
        });
    }

    // expand prod (x - z^e) over the chosen exponents, coefficients in the ring
    let mut u: Vec<Ring> = vec![Ring::one(m_big)];
    for &oi in &chosen {
        for &e in &orbits[oi] {
            let mut next = vec![Ring::zero(m_big); u.len() + 1];
            for (i, coeff) in u.iter().enumerate() {
                next[i + 1].add_assign(coeff);
                next[i].sub_assign(&coeff.rot(e));
            }
            u = next;
        }
    }
    let half = u.len() - 1;
    debug_assert_eq!(half, deg / 2);

    // trace table: Tr(z^e) = mu(q) phi(M) / phi(q) with q = M / gcd(e, M)
    let phi_m_val = euler_phi(m_big as u64) as i64;
    let trace_table: Vec<i64> = (0..m_big)
        .map(|e| {
            let q = m_big as u64 / (e as u64).gcd(&(m_big as u64));
            moebius(q) * phi_m_val / euler_phi(q) as i64
        })
        .collect();

    // lift sqrt(d) into the big ring for the odd powers; it stays sparse
    let scale = m_big / m4;
    let t_terms: Vec<(usize, i64)> = t_small
        .c
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0)
        .map(|(e, &v)| (e * scale, v))
        .collect();
    let mul_by_t = |r: &Ring| -> Ring {
        let mut out = Ring::zero(m_big);
        for &(e, v) in &t_terms {
            for (i, &a) in r.c.iter().enumerate() {
                if a != 0 {
                    out.c[(i + e) % m_big] += v * a;
                }
            }
        }
        out
    };

    let d_big = BigInt::from(inp.d);
    let mut coeffs = vec![BigInt::zero(); half + 1];
    for (k, uk) in u.iter().enumerate() {
        let j = half - k;
        let raw = if j % 2 == 0 {
            trace_constant(uk, &trace_table, phi_m_val)?
        } else {
            trace_constant(&mul_by_t(uk), &trace_table, phi_m_val)?
        };
        coeffs[k] = BigInt::from(raw) * d_big.pow((j / 2) as u32);
    }
    let p = canonical_mirror(IntPoly::from_coeffs(coeffs));

    let product = p.mul(&p.substitute_neg_x());
    if product != target && product != target.neg() {
        return Err(Error::Inconsistency(
            "candidate factor fails the exact product check".into(),
        ));
    }
    Ok(Some(p))
}

fn exact_root(value: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if value.is_negative() && k % 2 == 0 {
        return None;
    }
    let mag = value.abs().nth_root(k);
    let candidate = if value.is_negative() { -mag } else { mag };
    if candidate.pow(k) == *value {
        Some(candidate)
    } else {
        None
    }
}

/// Recognize a monic even-degree polynomial as a scaled cyclotomic object
/// and run the split oracle on it. Non-even polynomials never split this
/// way; polynomials outside the family are unsupported.
pub fn split_product(poly: &IntPoly) -> Result<Option<IntPoly>> {
    let Some(deg) = poly.degree() else {
        return Err(Error::invalid("zero polynomial"));
    };
    if !poly.is_monic() {
        return Err(Error::invalid("polynomial must be monic"));
    }
    if deg == 0 || deg % 2 != 0 {
        return Err(Error::invalid("need positive even degree"));
    }
    if deg > SPLIT_DEGREE_CAP {
        return Err(Error::limit(format!(
            "degree {deg} over the split cap {SPLIT_DEGREE_CAP}"
        )));
    }
    if !poly.is_even_poly() {
        // any P(x) P(-x) product is even, so an uneven input cannot split
        return Ok(None);
    }
    let g0 = poly.coeff(0);
    let deg_u64 = deg as u64;
    // phi(n) >= sqrt(n / 2), so matching indices are bounded
    let n_bound = (2 * deg_u64 * deg_u64 + 4).min(u64::from(CYCLO_CAP)) as u32;
    for n in 1..=n_bound {
        let n_odd = n >> n.trailing_zeros();
        // constant term: d^(deg/2) when 4 | n, else Phi_odd(0) d^(deg/2)
        // where Phi_1(0) = -1 flips the sign
        let root_exp = if n % 4 == 0 {
            if euler_phi(u64::from(n)) as usize != deg {
                continue;
            }
            (deg / 2) as u32
        } else {
            let po = euler_phi(u64::from(n_odd));
            if 2 * po as usize != deg {
                continue;
            }
            po as u32
        };
        let base_const = if n % 4 != 0 && n_odd == 1 {
            -g0.clone()
        } else {
            g0.clone()
        };
        let mut d_candidates = vec![];
        if let Some(r) = exact_root(&base_const, root_exp) {
            d_candidates.push(r.clone());
            if root_exp % 2 == 0 {
                d_candidates.push(-r);
            }
        }
        for d_cand in d_candidates {
            let Ok(d_small) = i64::try_from(&d_cand) else {
                continue;
            };
            if !is_squarefree(d_small) {
                continue;
            }
            let inp = ScaledCycloInput::new(n, d_small)?;
            if phi_tilde(&inp)? == *poly {
                return split_scaled(&inp);
            }
        }
    }
    Err(Error::Unsupported(
        "not recognized as a scaled cyclotomic polynomial".into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloGridRow {
    pub n: u32,
    pub d: i64,
    pub criterion: bool,
    pub oracle: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloGridReport {
    pub rows: Vec<CycloGridRow>,
    pub all_agree: bool,
}

impl CycloGridReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,d,criterion,oracle,agree\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n, r.d, r.criterion, r.oracle, r.agree
            ));
        }
        out
    }
}

/// Closed-form criterion against the factorization oracle over a grid.
pub fn criterion_vs_oracle(n_max: u32, d_set: &[i64]) -> Result<CycloGridReport> {
    let mut rows = vec![];
    let mut all_agree = true;
    for &d in d_set {
        for n in 1..=n_max {
            let inp = ScaledCycloInput::new(n, d)?;
            let criterion = reducibility_criterion(&inp);
            let oracle = split_scaled(&inp)?.is_some();
            let agree = criterion == oracle;
            all_agree &= agree;
            rows.push(CycloGridRow {
                n,
                d,
                criterion,
                oracle,
                agree,
            });
        }
    }
    Ok(CycloGridReport { rows, all_agree })
}
