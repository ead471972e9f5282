//! Numerical verification of the length-function lemmas, the probability
//! inequalities and the case analyses behind the expansion factors
//! 2.0821 (Δδ) and 2.0386 (ν).
//!
//! Notation, for `x = P(1)`:
//!
//! ```text
//! C_n  = (1 + 1/n)(1 - 1/n)^(n-1)
//! D(x) = c1 / (c2 - log₂(1-x))
//! J(x) = D log₂C_L + x [1 + D (log₂x - log₂C_L)]
//! R(x) = 3 + D (log₂(1-x) + Σ_{n=2}^{L-1} log₂C_n - (L-1) log₂C_L)
//! Q(x, p2) = J(x) + p2 R(x)
//! ```
//!
//! Every case bounds the expansion ratio by `f(x) = Q(x, p2) + D(x)` with
//! `p2` one of `0`, `x`, `1 - x`, or by a linear recipe near `x = 1`.
//! Evaluation is in `f64`.

mod lemmas;
mod tables;
mod verify;

use thiserror::Error;

pub use lemmas::{
    abel_sum, c_n_strictly_decreasing, check_distribution, weighted_a_sides, tail_log_sides,
    lemma_length_check, lemma_prob_check, LengthCheckReport, LengthViolation, ProbCheckReport,
    ProbViolation, ABEL_REL_TOL, TAIL_LOG_LS, LEMMA_SLACK, P1_GRID,
};
pub use tables::{
    case_table, lemma_clauses, zero_points, CaseSpec, Coef, Endpoint, LemmaClause, LengthBound,
    P2Choice, Recipe, Relation, Shape, Witness, ZeroKind, ZeroPoint,
};
pub use verify::{
    compute_zero_points, verify_cases, CaseReport, CaseResult, ConstantCheck, ZeroResult,
    ZeroValues, BOUND_TOL, EXACT_TOL, R_SIGN_TOL, ZERO_POINT_TOL,
};

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("{what} = {value} outside its domain")]
    Domain { what: &'static str, value: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no case analysis exists for {0}")]
    UnsupportedCode(crate::codes::CodeId),
    #[error("grid step {0} is coarser than 1e-3")]
    GridTooCoarse(f64),
    #[error("{0} is referenced before it is computed")]
    UnresolvedPoint(String),
    #[error("lemma clause {clause} does not exist for {code}")]
    NoSuchClause {
        code: crate::codes::CodeId,
        clause: usize,
    },
}

/// `x log₂ x`, zero at `x = 0`.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn c_n(n: u64) -> f64 {
    assert!(n >= 2, "C_n needs n >= 2");
    log2_c_n(n).exp2()
}

/// `log₂ C_n`, through `ln_1p` so that neighbouring values stay ordered
/// for large `n`.
pub fn log2_c_n(n: u64) -> f64 {
    assert!(n >= 2, "C_n needs n >= 2");
    let u = 1.0 / n as f64;
    (u.ln_1p() + (n - 1) as f64 * (-u).ln_1p()) / std::f64::consts::LN_2
}

fn check_unit(what: &'static str, x: f64, lo_closed: bool) -> Result<(), BoundsError> {
    let ok = if lo_closed {
        (0.0..1.0).contains(&x)
    } else {
        x > 0.0 && x < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(BoundsError::Domain { what, value: x })
    }
}

/// `c1 / (c2 - log₂(1-p1)) · (log₂a - log₂(1-p1))`.
pub fn g(c1: f64, c2: f64, a: f64, p1: f64) -> Result<f64, BoundsError> {
    check_unit("p1", p1, false)?;
    if a < 1.0 {
        return Err(BoundsError::Domain {
            what: "a",
            value: a,
        });
    }
    Ok(g_log(c1, c2, a.log2(), p1))
}

/// `g` with `log₂a` supplied, for symbols beyond `f64` range.
pub(crate) fn g_log(c1: f64, c2: f64, log2_a: f64, p1: f64) -> f64 {
    let l = (-p1).ln_1p() / std::f64::consts::LN_2;
    c1 / (c2 - l) * (log2_a - l)
}

/// `(c1/(c2+x) - 1) t + c1 x/(c2+x) - 1`.
pub fn h(c1: f64, c2: f64, t: f64, x: f64) -> f64 {
    (c1 / (c2 + x) - 1.0) * t + c1 * x / (c2 + x) - 1.0
}

/// `D` on `0 <= p1 < 1`; the value at 0 is the limit `c1 / c2`.
pub fn d(c1: f64, c2: f64, p1: f64) -> Result<f64, BoundsError> {
    check_unit("p1", p1, true)?;
    Ok(d_raw(c1, c2, p1))
}

fn d_raw(c1: f64, c2: f64, p1: f64) -> f64 {
    c1 / (c2 - (-p1).ln_1p() / std::f64::consts::LN_2)
}

pub fn j(c1: f64, c2: f64, p1: f64, l: u64) -> Result<f64, BoundsError> {
    check_unit("p1", p1, true)?;
    Ok(j_raw(c1, c2, p1, l))
}

fn j_raw(c1: f64, c2: f64, p1: f64, l: u64) -> f64 {
    let dd = d_raw(c1, c2, p1);
    let lc = log2_c_n(l);
    // x (1 + D (log₂x - log₂C_L)) with 0 log 0 = 0
    dd * lc + p1 + dd * (xlog2x(p1) - p1 * lc)
}

pub fn r(c1: f64, c2: f64, p1: f64, l: u64) -> Result<f64, BoundsError> {
    check_unit("p1", p1, true)?;
    Ok(r_raw(c1, c2, p1, l))
}

fn r_raw(c1: f64, c2: f64, p1: f64, l: u64) -> f64 {
    let lc = log2_c_n(l);
    let partial: f64 = (2..l).map(log2_c_n).sum();
    let log1m = (-p1).ln_1p() / std::f64::consts::LN_2;
    3.0 + d_raw(c1, c2, p1) * (log1m + partial - (l - 1) as f64 * lc)
}

/// `Q = J + p2 R`, with `0 <= p2 <= min(p1, 1 - p1)`.
pub fn q(c1: f64, c2: f64, p1: f64, p2: f64, l: u64) -> Result<f64, BoundsError> {
    check_unit("p1", p1, true)?;
    if !(0.0..=p1.min(1.0 - p1) + 1e-15).contains(&p2) {
        return Err(BoundsError::Domain {
            what: "p2",
            value: p2,
        });
    }
    Ok(j_raw(c1, c2, p1, l) + p2 * r_raw(c1, c2, p1, l))
}

/// Tolerance on the bracket width of [`find_zero`].
pub const ZERO_TOL: f64 = 1e-9;

/// Bisection for a sign change of `f` on `[lo, hi]`, to bracket width `tol`.
pub fn find_zero(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64, BoundsError> {
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(BoundsError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Step of the central difference used by [`argmax`].
pub const DERIVATIVE_STEP: f64 = 1e-7;

/// Interior maximum of a unimodal `f` on `[lo, hi]`: the sign change of its
/// central-difference derivative.
pub fn argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64, BoundsError> {
    let hstep = DERIVATIVE_STEP;
    let lo = lo + hstep;
    let hi = hi - hstep;
    find_zero(|x| f(x + hstep) - f(x - hstep), lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG2_3: f64 = 1.584_962_500_721_156_2;

    #[test]
    fn g_examples() {
        for p in [0.01, 0.2, 0.4] {
            assert!((g(5.0, LOG2_3, 3.0, p).unwrap() - 5.0).abs() < 1e-12);
            assert!((g(6.0, 2.0, 4.0, p).unwrap() - 6.0).abs() < 1e-12);
        }
        assert!((g(8.0, 3.0, 8.0, 0.5).unwrap() - 8.0).abs() < 1e-12);
        assert!(g(8.0, 3.0, 8.0, 1.0).is_err());
        assert!(g(8.0, 3.0, 8.0, 0.0).is_err());
    }

    #[test]
    fn h_pivot_identities() {
        for k in 0..100 {
            let x = 0.01 + k as f64 * 0.1;
            assert!((h(8.0, 3.0, 3.0, x) - 4.0).abs() < 1e-12);
            assert!((h(14.0, 7.0, 7.0, x) - 6.0).abs() < 1e-12);
            assert!((h(24.0, 15.0, 15.0, x) - 8.0).abs() < 1e-12);
            assert!((h(42.0, 31.0, 31.0, x) - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn c_n_examples() {
        assert!((c_n(2) - 0.75).abs() < 1e-15);
        assert!((c_n(3) - 16.0 / 27.0).abs() < 1e-15);
        assert!(c_n(1000) > (-1f64).exp());
    }

    #[test]
    fn notation_examples() {
        for p in [0.3, 0.6, 0.9] {
            assert_eq!(q(8.0, 3.0, p, 0.0, 2).unwrap(), j(8.0, 3.0, p, 2).unwrap());
            let want = 3.0 + d(8.0, 3.0, p).unwrap() * ((1.0 - p).log2() - 0.75f64.log2());
            assert!((r(8.0, 3.0, p, 2).unwrap() - want).abs() < 1e-12);
        }
        let x5 = find_zero(|x| r_raw(8.0, 3.0, x, 2), 0.5, 0.84, ZERO_TOL).unwrap();
        assert!((x5 - 0.81876).abs() < 1e-3);
        assert!(q(8.0, 3.0, 0.7, 0.5, 2).is_err());
        assert!(d(8.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn find_zero_linear() {
        let z = find_zero(|x| x - 0.5, 0.0, 1.0, ZERO_TOL).unwrap();
        assert!((z - 0.5).abs() < 1e-9);
        assert!(matches!(
            find_zero(|x| x + 1.0, 0.0, 1.0, ZERO_TOL),
            Err(BoundsError::NoSignChange { .. })
        ));
    }

    #[test]
    fn argmax_of_parabola() {
        let m = argmax(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, ZERO_TOL).unwrap();
        assert!((m - 0.3).abs() < 1e-6);
    }
}
