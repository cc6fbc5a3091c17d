//! Algebraic toolkit for quadratic rotation-symmetric Boolean functions:
//! GF(2) polynomial arithmetic, truth tables and Walsh spectra, weight
//! periodicity, trace forms over binary fields, recursion matrices, and
//! scaled cyclotomic polynomials.

pub mod boolfn;
pub mod error;
pub mod gf2field;
pub mod gf2poly;
pub mod intmatrix;
pub mod intpoly;
pub mod quad_analysis;
pub mod rules_matrix;
pub mod zcyclo;

pub use boolfn::{
    affine_equiv_quad, classify_balance, nonlinearity, plateau_v, truth_table,
    truth_table_with_cap, walsh_transform, weight, BalanceClass, QuadRsFunction, TruthTable,
    WalshSpectrum, DEFAULT_TABLE_CAP,
};
pub use error::{Error, Result};
pub use gf2field::{
    alpharec_identity, balance_transfer_check, default_modulus, frobenius_kernel_power,
    trace_form_eval, trace_form_weight, trace_form_weight_with_cap, vanishes_on, FieldF2n,
    SubspaceBasis, DEFAULT_FIELD_CAP, SCAN_CAP,
};
pub use gf2poly::{
    gf2_factor, gf2_factor_seeded, gf2_gcd, laurent_normalize, mersenne_prime_factors,
    x_order_mod, x_pow_mod, xpow1_valuation, Gf2Factorization, Gf2Poly, LaurentGf2, DEGREE_CAP,
};
pub use intmatrix::IntMatrix;
pub use intpoly::IntPoly;
pub use quad_analysis::{
    affine_class_count_monomial, balance_predict_binomial, balance_predict_uniqmin, binomial_period,
    build_a, build_a_i, build_a_n, critical_n, d_q, gi_period, monomial_facts, period,
    predicted_weight, v_value, v_value_allow_short, BalanceKind, BalanceReport, FactorDetail,
    PeriodReport, SignOracle,
};
pub use rules_matrix::{
    build_r_binom, build_r_mono, char_poly, ecc_trace_check, h0, h1, is_hadamard, pad_columns,
    rotate_rows, rules_matrix_for, scaled_order_check, weight_recurrence_check, EccTraceReport,
    EccTraceRow, ScaledOrderVerdict, CHAR_POLY_CAP, DEFAULT_MATRIX_CAP,
};
pub use zcyclo::{
    criterion_vs_oracle, cyclotomic_z, phi_tilde, reducibility_criterion, split_product,
    split_scaled, CycloGridReport, CycloGridRow, ScaledCycloInput, CYCLO_CAP, SPLIT_DEGREE_CAP,
};
