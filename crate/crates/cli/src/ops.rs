use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rsboole_core::{
    alpharec_identity, balance_predict_binomial, balance_predict_uniqmin, binomial_period,
    char_poly, classify_balance, criterion_vs_oracle, ecc_trace_check, is_hadamard,
    monomial_facts, nonlinearity, period as least_period, phi_tilde, plateau_v,
    reducibility_criterion, rules_matrix_for, scaled_order_check, split_scaled, trace_form_weight,
    trace_form_weight_with_cap, truth_table_with_cap, v_value, v_value_allow_short,
    walsh_transform, BalanceClass, BalanceKind, CycloGridReport, EccTraceReport, Error, FieldF2n,
    IntPoly, PeriodReport, QuadRsFunction, Result, ScaledCycloInput, ScaledOrderVerdict,
    CHAR_POLY_CAP,
};

use crate::RunConfig;

fn class_name(c: BalanceClass) -> &'static str {
    match c {
        BalanceClass::Balanced => "balanced",
        BalanceClass::Underbalanced => "underbalanced",
        BalanceClass::Overbalanced => "overbalanced",
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub terms: Vec<u32>,
    pub n: u32,
    pub weight: u64,
    pub w0: i64,
    pub max_abs_walsh: u64,
    pub nonlinearity: u64,
    pub v: u32,
    pub balance: String,
}

pub fn analyze(cfg: &RunConfig, terms: &[u32], n: u32) -> Result<AnalyzeReport> {
    let q = QuadRsFunction::new(terms.to_vec())?;
    let table = truth_table_with_cap(&q, n, cfg.max_table_n)?;
    let spectrum = walsh_transform(&table);
    let spectral = plateau_v(&spectrum)?;
    let by_gcd = v_value_allow_short(&q, n)?;
    if spectral != by_gcd {
        return Err(Error::Inconsistency(format!(
            "plateau parameter differs between routes: spectrum {spectral}, gcd {by_gcd}"
        )));
    }
    Ok(AnalyzeReport {
        terms: q.indices().to_vec(),
        n,
        weight: table.weight(),
        w0: spectrum.values()[0],
        max_abs_walsh: spectrum.max_abs(),
        nonlinearity: nonlinearity(&spectrum),
        v: spectral,
        balance: class_name(classify_balance(&table)).into(),
    })
}

#[derive(Serialize)]
pub struct PeriodOut {
    pub terms: Vec<u32>,
    #[serde(flatten)]
    pub report: PeriodReport,
    /// closed form for two offsets, cross-checked against the factor route
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<u64>,
}

pub fn period(terms: &[u32]) -> Result<PeriodOut> {
    let q = QuadRsFunction::new(terms.to_vec())?;
    let report = least_period(&q)?;
    let closed_form = match q.indices() {
        [j, i] => {
            let closed = binomial_period(*i, *j)?;
            if closed != report.period {
                return Err(Error::Inconsistency(format!(
                    "closed form {closed} disagrees with the factor route {}",
                    report.period
                )));
            }
            Some(closed)
        }
        _ => None,
    };
    Ok(PeriodOut {
        terms: q.indices().to_vec(),
        report,
        closed_form,
    })
}

#[derive(Serialize)]
pub struct BalanceRow {
    pub n: u32,
    pub predicted: Option<bool>,
    pub actual: Option<bool>,
    pub agree: Option<bool>,
}

#[derive(Serialize)]
pub struct BalanceOut {
    pub terms: Vec<u32>,
    pub kind: String,
    pub method: String,
    pub nu: Option<u32>,
    pub residue: Option<u64>,
    pub modulus: Option<u64>,
    pub rows: Vec<BalanceRow>,
    pub all_agree: bool,
}

fn predict(q: &QuadRsFunction, n: u32) -> Result<Option<bool>> {
    match q.indices() {
        [t] => Ok(Some(monomial_facts(*t, n)?.0)),
        [j, i] => Ok(balance_predict_binomial(*i, *j)?.balanced_at(n)),
        idx if idx.len() % 2 == 0 => Ok(balance_predict_uniqmin(q)?.balanced_at(n)),
        _ => Ok(None),
    }
}

pub fn balance(
    cfg: &RunConfig,
    terms: &[u32],
    n: Option<u32>,
    n_max: Option<u32>,
    check: bool,
) -> Result<BalanceOut> {
    let q = QuadRsFunction::new(terms.to_vec())?;
    let lo = 2 * q.max_index() + 1;
    let ns: Vec<u32> = match (n, n_max) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => {
            if m < lo {
                return Err(Error::invalid(format!("--n-max {m} is below 2J+1 = {lo}")));
            }
            (lo..=m).collect()
        }
        (None, None) => vec![],
        _ => unreachable!("flags conflict"),
    };
    let kind_name = |k: BalanceKind| match k {
        BalanceKind::Friendly => "friendly",
        BalanceKind::Refractory => "refractory",
        BalanceKind::Unknown => "unknown",
    };
    let (kind, method, nu, residue, modulus) = match q.indices() {
        [t] => {
            let nu = t.trailing_zeros();
            (
                "single-offset".to_string(),
                "unbalanced exactly when 2^(nu+1) divides n".to_string(),
                Some(nu),
                Some(0),
                Some(1u64 << (nu + 1)),
            )
        }
        [j, i] => {
            let r = balance_predict_binomial(*i, *j)?;
            (kind_name(r.kind).into(), r.method, r.nu, r.residue, r.modulus)
        }
        idx if idx.len() % 2 == 0 => {
            let r = balance_predict_uniqmin(&q)?;
            (kind_name(r.kind).into(), r.method, r.nu, r.residue, r.modulus)
        }
        _ => (
            "unknown".to_string(),
            "no closed form for an odd offset count above one".to_string(),
            None,
            None,
            None,
        ),
    };
    let mut rows = Vec::with_capacity(ns.len());
    let mut mismatches = vec![];
    for n in ns {
        let predicted = predict(&q, n)?;
        let actual = if check {
            let table = truth_table_with_cap(&q, n, cfg.max_table_n)?;
            Some(classify_balance(&table) == BalanceClass::Balanced)
        } else {
            None
        };
        let agree = match (predicted, actual) {
            (Some(p), Some(a)) => {
                if p != a {
                    mismatches.push(n);
                }
                Some(p == a)
            }
            _ => None,
        };
        rows.push(BalanceRow {
            n,
            predicted,
            actual,
            agree,
        });
    }
    if !mismatches.is_empty() {
        return Err(Error::Inconsistency(format!(
            "prediction disagrees with the exhaustive weight at n = {mismatches:?}"
        )));
    }
    Ok(BalanceOut {
        terms: q.indices().to_vec(),
        kind,
        method,
        nu,
        residue,
        modulus,
        rows,
        all_agree: true,
    })
}

#[derive(Serialize)]
pub struct TraceOut {
    pub terms: Vec<u32>,
    pub n: u32,
    pub field_weight: u64,
    pub field_class: String,
    pub table_weight: Option<u64>,
    pub table_class: Option<String>,
    pub balanced_agree: Option<bool>,
}

pub fn trace(cfg: &RunConfig, terms: &[u32], n: u32) -> Result<TraceOut> {
    let q = QuadRsFunction::new(terms.to_vec())?;
    let field = FieldF2n::with_cap(n, None, cfg.max_field_n)?;
    let field_weight = trace_form_weight_with_cap(&field, &q, cfg.max_field_n)?;
    let half = 1u64 << (n - 1);
    let field_class = if field_weight == half {
        BalanceClass::Balanced
    } else if field_weight < half {
        BalanceClass::Underbalanced
    } else {
        BalanceClass::Overbalanced
    };
    let (table_weight, table_class) = if n <= cfg.max_table_n {
        let table = truth_table_with_cap(&q, n, cfg.max_table_n)?;
        (Some(table.weight()), Some(classify_balance(&table)))
    } else {
        (None, None)
    };
    let balanced_agree = table_class
        .map(|tc| (tc == BalanceClass::Balanced) == (field_class == BalanceClass::Balanced));
    if balanced_agree == Some(false) {
        return Err(Error::Inconsistency(format!(
            "balancedness differs between the field and table routes at n={n}"
        )));
    }
    Ok(TraceOut {
        terms: q.indices().to_vec(),
        n,
        field_weight,
        field_class: class_name(field_class).into(),
        table_weight,
        table_class: table_class.map(|c| class_name(c).into()),
        balanced_agree,
    })
}

#[derive(Serialize)]
pub struct RulesOut {
    pub terms: Vec<u32>,
    pub size: usize,
    /// present only while the matrix fits the dense characteristic solver
    pub char_poly: Option<String>,
    pub det: Option<String>,
    pub hadamard_exponent: u32,
    pub hadamard: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_check: Option<ScaledOrderVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_identity: Option<EccTraceReport>,
}

pub fn rules(
    cfg: &RunConfig,
    i: u32,
    j: Option<u32>,
    n_max: Option<u32>,
    check: Option<u64>,
) -> Result<RulesOut> {
    if let Some(j) = j {
        if j == 0 || j >= i {
            return Err(Error::invalid(format!("need i > j >= 1, got ({i},{j})")));
        }
    }
    if i == 0 {
        return Err(Error::invalid("offset must be at least 1"));
    }
    if i >= 32 || (1u64 << i) > cfg.max_matrix_size as u64 {
        return Err(Error::limit(format!(
            "matrix size 2^{i} exceeds the configured cap {}",
            cfg.max_matrix_size
        )));
    }
    let terms = match j {
        Some(j) => vec![j, i],
        None => vec![i],
    };
    let q = QuadRsFunction::new(terms)?;
    let r = rules_matrix_for(&q)?;
    let size = r.rows();
    let (cp, det) = if size <= CHAR_POLY_CAP {
        (
            Some(char_poly(&r)?.to_string()),
            Some(r.det()?.to_string()),
        )
    } else {
        (None, None)
    };
    let hadamard = is_hadamard(&r.pow(u64::from(i))?);
    let order_check = match check {
        Some(k) => Some(scaled_order_check(&r, k)?),
        None => None,
    };
    let trace_identity = match n_max {
        Some(m) => {
            let lo = 2 * q.max_index() + 1;
            if m < lo {
                return Err(Error::invalid(format!("--n-max {m} is below 2J+1 = {lo}")));
            }
            if m > cfg.max_table_n {
                return Err(Error::limit(format!(
                    "--n-max {m} exceeds the table cap {}",
                    cfg.max_table_n
                )));
            }
            let rep = ecc_trace_check(&q, lo..=m)?;
            if !rep.all_equal && !rep.conjectural {
                return Err(Error::Inconsistency(
                    "trace identity failed for a single-offset function".into(),
                ));
            }
            Some(rep)
        }
        None => None,
    };
    Ok(RulesOut {
        terms: q.indices().to_vec(),
        size,
        char_poly: cp,
        det,
        hadamard_exponent: i,
        hadamard,
        order_check,
        trace_identity,
    })
}

#[derive(Serialize)]
pub struct CycloCell {
    pub n: u32,
    pub d: i64,
    pub criterion: bool,
    pub poly: String,
    pub split: Option<String>,
    pub agree: bool,
}

pub fn cyclo_single(n: u32, d: i64) -> Result<CycloCell> {
    let inp = ScaledCycloInput::new(n, d)?;
    let criterion = reducibility_criterion(&inp);
    let poly = phi_tilde(&inp)?.to_string();
    let split = split_scaled(&inp)?.map(|p| p.to_string());
    if criterion != split.is_some() {
        return Err(Error::Inconsistency(format!(
            "criterion says {criterion} but the factor oracle disagrees at n={n}, d={d}"
        )));
    }
    Ok(CycloCell {
        n,
        d,
        criterion,
        poly,
        split,
        agree: true,
    })
}

pub fn cyclo_grid(n_max: u32, d: &[i64]) -> Result<CycloGridReport> {
    let report = criterion_vs_oracle(n_max, d)?;
    if !report.all_agree {
        let bad: Vec<String> = report
            .rows
            .iter()
            .filter(|r| !r.agree)
            .map(|r| format!("(n={}, d={})", r.n, r.d))
            .collect();
        return Err(Error::Inconsistency(format!(
            "criterion and oracle disagree at {}",
            bad.join(", ")
        )));
    }
    Ok(report)
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct SelftestOut {
    pub seed: u64,
    pub checks: Vec<CheckRow>,
    pub all_pass: bool,
}

fn push(checks: &mut Vec<CheckRow>, name: &'static str, r: std::result::Result<String, String>) {
    let (pass, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    checks.push(CheckRow { name, pass, detail });
}

pub fn selftest(cfg: &RunConfig) -> SelftestOut {
    let mut checks = vec![];
    let qf = |v: &[u32]| QuadRsFunction::new(v.to_vec()).unwrap();

    push(&mut checks, "worked periods", (|| {
        for (idx, want) in [
            (vec![7u32, 4, 1], 72u64),
            (vec![5, 3, 2, 1], 34),
            (vec![5, 4, 2], 34),
            (vec![6, 2, 1], 102),
        ] {
            let got = least_period(&qf(&idx)).map_err(|e| e.to_string())?.period;
            if got != want {
                return Err(format!("{idx:?}: got {got}, want {want}"));
            }
        }
        Ok("4 offset sets".into())
    })());

    push(&mut checks, "scaled cyclotomic splits", (|| {
        let s82 = split_scaled(&ScaledCycloInput::new(8, 2).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .ok_or("n=8, d=2 must split")?;
        if s82 != IntPoly::parse("x^2+2x+2").unwrap() {
            return Err(format!("n=8, d=2 split {s82}"));
        }
        let s162 = split_scaled(&ScaledCycloInput::new(16, 2).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if s162.is_some() {
            return Err("n=16, d=2 must stay irreducible".into());
        }
        Ok("split and non-split cases".into())
    })());

    push(&mut checks, "trace-form weights", (|| {
        for (n, want) in [(4u32, 12u64), (6, 24), (2, 0)] {
            let f = FieldF2n::new(n, None).map_err(|e| e.to_string())?;
            let w = trace_form_weight(&f, &qf(&[1])).map_err(|e| e.to_string())?;
            if w != want {
                return Err(format!("degree {n}: weight {w}, want {want}"));
            }
        }
        Ok("3 field weights".into())
    })());

    push(&mut checks, "recursion matrix", (|| {
        let r = rules_matrix_for(&qf(&[3])).map_err(|e| e.to_string())?;
        let cp = char_poly(&r).map_err(|e| e.to_string())?;
        if cp != IntPoly::parse("x^8-2x^6-8x^2+16").unwrap() {
            return Err(format!("char poly {cp}"));
        }
        if !is_hadamard(&r.pow(3).map_err(|e| e.to_string())?) {
            return Err("cube is not Hadamard".into());
        }
        Ok("char poly and Hadamard cube".into())
    })());

    push(&mut checks, "spectrum worked examples", (|| {
        let t15 = truth_table_with_cap(&qf(&[1]), 5, cfg.max_table_n).map_err(|e| e.to_string())?;
        let s15 = walsh_transform(&t15);
        let v15 = plateau_v(&s15).map_err(|e| e.to_string())?;
        if t15.weight() != 16 || nonlinearity(&s15) != 12 || v15 != 1 {
            return Err("offsets {1}, n=5".into());
        }
        let t24 = truth_table_with_cap(&qf(&[2]), 4, cfg.max_table_n).map_err(|e| e.to_string())?;
        let s24 = walsh_transform(&t24);
        let v24 = plateau_v(&s24).map_err(|e| e.to_string())?;
        if nonlinearity(&s24) != 6 || v24 != 0 {
            return Err("offsets {2}, n=4".into());
        }
        Ok("two spectra".into())
    })());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    push(&mut checks, "random spectra", (|| {
        for trial in 0..25 {
            let len = rng.gen_range(1..=3usize);
            let mut idx: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=5u32)).collect();
            idx.sort_unstable();
            idx.dedup();
            let q = qf(&idx);
            let n = rng.gen_range(2 * q.max_index() + 1..=12.max(2 * q.max_index() + 1));
            let table = truth_table_with_cap(&q, n, cfg.max_table_n).map_err(|e| e.to_string())?;
            let sp = walsh_transform(&table);
            let total: i128 = sp.values().iter().map(|&w| i128::from(w) * i128::from(w)).sum();
            if total != 1i128 << (2 * n) {
                return Err(format!("trial {trial}: energy off for {idx:?}, n={n}"));
            }
            if sp.values()[0] != (1i64 << n) - 2 * table.weight() as i64 {
                return Err(format!("trial {trial}: zero coefficient off"));
            }
            let a = plateau_v(&sp).map_err(|e| e.to_string())?;
            let b = v_value(&q, n).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("trial {trial}: plateau {a} vs gcd {b}"));
            }
        }
        Ok("25 samples".into())
    })());

    push(&mut checks, "random root identities", (|| {
        for trial in 0..25 {
            let n = [4u32, 8][rng.gen_range(0..2)];
            let f = FieldF2n::new(n, None).map_err(|e| e.to_string())?;
            let alpha = rng.gen::<u64>() & f.element_mask();
            let k = rng.gen_range(1..=8u32);
            let (lhs, rhs) = alpharec_identity(&f, alpha, k).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("trial {trial}: n={n} alpha={alpha} k={k}"));
            }
        }
        Ok("25 samples".into())
    })());

    let all_pass = checks.iter().all(|c| c.pass);
    SelftestOut {
        seed: cfg.seed,
        checks,
        all_pass,
    }
}
