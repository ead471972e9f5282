use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tables::{lemma_clauses, LemmaClause, LengthBound};
use super::{g_log, log2_c_n, BoundsError};
use crate::codes::{code_length, CodeId, SymbolIndex};
use crate::dist::{entropy_of, random_decreasing};

/// Slack on the lemma inequalities; several hold with equality.
pub const LEMMA_SLACK: f64 = 1e-9;
/// Relative agreement required of the two sides of Abel's formula.
pub const ABEL_REL_TOL: f64 = 1e-10;
/// `p1` samples per clause interval.
pub const P1_GRID: usize = 25;
/// Distance by which open interval endpoints are approached.
const ENDPOINT_INSET: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LengthViolation {
    pub a: BigUint,
    pub p1: f64,
    pub lhs: u64,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LengthCheckReport {
    pub clause: LemmaClause,
    pub p1_grid: Vec<f64>,
    pub checked: usize,
    /// Smallest `rhs - lhs` seen, with its symbol and `p1`.
    pub tightest: (BigUint, f64, f64),
    pub violations: Vec<LengthViolation>,
}

impl LengthCheckReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn clause_grid(clause: &LemmaClause) -> Vec<f64> {
    let lo = clause.lo.value() + ENDPOINT_INSET;
    let hi = clause.hi.value().min(1.0 - ENDPOINT_INSET);
    let step = (hi - lo) / (P1_GRID - 1) as f64;
    (0..P1_GRID)
        .map(|i| {
            if i == P1_GRID - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Checks `L(a) <= bound(a, p1)` for every `a` in `[3, 2^12]`, for
/// `a = 2^t` with `t` in `[12, 256]` (the shortest symbol of each block,
/// where the bound is weakest), and for 25 `p1` values across the clause.
pub fn lemma_length_check(code: CodeId, clause: usize) -> Result<LengthCheckReport, BoundsError> {
    let clauses = lemma_clauses(code).ok_or(BoundsError::UnsupportedCode(code))?;
    let spec = *clause
        .checked_sub(1)
        .and_then(|i| clauses.get(i))
        .ok_or(BoundsError::NoSuchClause { code, clause })?;
    let grid = clause_grid(&spec);

    let small = (3u64..=1 << 12).map(|a| (BigUint::from(a), (a as f64).log2()));
    let large = (12u64..=256).map(|t| (BigUint::from(1u8) << t, t as f64));

    let mut checked = 0;
    let mut tightest = (BigUint::from(0u8), 0.0, f64::INFINITY);
    let mut violations = Vec::new();
    for (a, log2_a) in small.chain(large) {
        let lhs = code_length(code, &SymbolIndex::new(a.clone()).expect("a >= 3"));
        let bounds: Vec<(f64, f64)> = match spec.bound {
            LengthBound::G { c1, c2 } => grid
                .iter()
                .map(|&p1| (p1, g_log(c1 as f64, c2.value(), log2_a, p1)))
                .collect(),
            // independent of p1
            LengthBound::Linear { offset, slope } => {
                let rhs = to_f64(offset) + to_f64(slope) * log2_a;
                grid.iter().map(|&p1| (p1, rhs)).collect()
            }
        };
        for (p1, rhs) in bounds {
            checked += 1;
            let slack = rhs - lhs as f64;
            if slack < tightest.2 {
                tightest = (a.clone(), p1, slack);
            }
            if slack < -LEMMA_SLACK {
                violations.push(LengthViolation {
                    a: a.clone(),
                    p1,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(LengthCheckReport {
        clause: spec,
        p1_grid: grid,
        checked,
        tightest,
        violations,
    })
}

fn to_f64(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `P(n)` for 1-based `n`, zero past the support.
fn p(probs: &[f64], n: usize) -> f64 {
    probs.get(n - 1).copied().unwrap_or(0.0)
}

/// `A_n` for every `n >= 2` with `P(n) > 0`.
fn a_terms(probs: &[f64]) -> Vec<f64> {
    let tail = (1.0 - probs[0]).log2();
    (2..=probs.len())
        .take_while(|&n| p(probs, n) > 0.0)
        .map(|n| p(probs, n).log2() - tail + (n as f64).log2())
        .collect()
}

fn vacuous(probs: &[f64]) -> bool {
    probs.is_empty() || probs[0] >= 1.0
}

/// `(Σ_{n>=2} P(n) A_n, P(2) + Σ_{n>=2} P(n+1) log₂C_n)`; `None` when
/// `P(1) = 1`.
pub fn weighted_a_sides(probs: &[f64]) -> Option<(f64, f64)> {
    if vacuous(probs) {
        return None;
    }
    let lhs = a_terms(probs)
        .iter()
        .enumerate()
        .map(|(i, a)| p(probs, i + 2) * a)
        .sum();
    let rhs = p(probs, 2)
        + (2..probs.len())
            .map(|n| p(probs, n + 1) * log2_c_n(n as u64))
            .sum::<f64>();
    Some((lhs, rhs))
}

/// Both sides of the probability inequality with parameter `L`:
///
/// ```text
/// Σ_{n>=3} P(n)[log₂n - log₂(1-P(1))]
///   <= H + log₂C_L + P(1)(log₂P(1) - log₂C_L)
///      + P(2)[log₂(1-P(1)) + Σ_{n=2}^{L-1} log₂C_n - (L-1) log₂C_L]
/// ```
pub fn tail_log_sides(probs: &[f64], l: u64) -> Option<(f64, f64)> {
    assert!(l >= 2, "L must be at least 2");
    if vacuous(probs) {
        return None;
    }
    let (p1, p2) = (probs[0], p(probs, 2));
    let tail = (1.0 - p1).log2();
    let lhs = (3..=probs.len())
        .filter(|&n| p(probs, n) > 0.0)
        .map(|n| p(probs, n) * ((n as f64).log2() - tail))
        .sum();
    let lc = log2_c_n(l);
    let partial: f64 = (2..l).map(log2_c_n).sum();
    let rhs = entropy_of(probs)
        + lc
        + p1 * (p1.log2() - lc)
        + p2 * (tail + partial - (l - 1) as f64 * lc);
    Some((lhs, rhs))
}

/// `Σ a_i b_i` directly and by summation by parts,
/// `a_m B_m + Σ_{i<m} (a_i - a_{i+1}) B_i` with `B_i = b_1 + … + b_i`.
pub fn abel_sum(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "sequences differ in length");
    let direct = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let partial: Vec<f64> = b
        .iter()
        .scan(0.0, |s, y| {
            *s += y;
            Some(*s)
        })
        .collect();
    let Some(m) = a.len().checked_sub(1) else {
        return (0.0, 0.0);
    };
    let by_parts = a[m] * partial[m] + (0..m).map(|i| (a[i] - a[i + 1]) * partial[i]).sum::<f64>();
    (direct, by_parts)
}

/// Magnitude against which the two Abel sides are compared.
fn abel_scale(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    let mut s = 0.0f64;
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        s += y;
        let next = a.get(i + 1).copied().unwrap_or(0.0);
        acc += (x * y).abs() + ((x - next) * s).abs();
    }
    acc
}

/// Parameters of the tail log bound exercised by [`lemma_prob_check`].
pub const TAIL_LOG_LS: [u64; 4] = [2, 4, 8, 16];

#[derive(Debug, Clone, PartialEq)]
pub struct ProbViolation {
    pub trial: usize,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct ProbCheckReport {
    pub trials: usize,
    /// Distributions with `P(1) = 1`, for which every sum is empty.
    pub skipped: usize,
    pub inequalities_checked: usize,
    pub max_abel_rel_err: f64,
    pub violations: Vec<ProbViolation>,
}

impl ProbCheckReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the probability lemmas and Abel's formula on one decreasing
/// distribution, appending to `report`.
pub fn check_distribution(trial: usize, probs: &[f64], report: &mut ProbCheckReport) {
    let mut fail = |check: String, lhs: f64, rhs: f64| {
        report.violations.push(ProbViolation {
            trial,
            check,
            lhs,
            rhs,
            probs: probs.to_vec(),
        })
    };
    let Some((lhs, rhs)) = weighted_a_sides(probs) else {
        report.skipped += 1;
        return;
    };
    let mut checked = 1;
    if lhs > rhs + LEMMA_SLACK {
        fail("weighted A_n bound".into(), lhs, rhs);
    }
    for l in TAIL_LOG_LS {
        let (lhs, rhs) = tail_log_sides(probs, l).expect("non-vacuous");
        checked += 1;
        if lhs > rhs + LEMMA_SLACK {
            fail(format!("tail log bound (L = {l})"), lhs, rhs);
        }
    }
    let a = a_terms(probs);
    let weights = &probs[1..=a.len()];
    let (direct, by_parts) = abel_sum(weights, &a);
    let scale = abel_scale(weights, &a);
    let rel = if scale > 0.0 {
        (direct - by_parts).abs() / scale
    } else {
        0.0
    };
    if rel > ABEL_REL_TOL {
        fail("abel".into(), direct, by_parts);
    }
    report.max_abel_rel_err = report.max_abel_rel_err.max(rel);
    report.inequalities_checked += checked;
    report.trials += 1;
}

/// Runs [`check_distribution`] on `trials` seeded random decreasing
/// distributions with support in `[2, support_max]`.
pub fn lemma_prob_check(trials: usize, support_max: usize, seed: u64) -> ProbCheckReport {
    assert!(
        trials >= 1 && support_max >= 2,
        "need at least one trial on support >= 2"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbCheckReport::default();
    for trial in 0..trials {
        let support = rng.gen_range(2..=support_max);
        let d = random_decreasing(rng.gen(), support);
        let probs = d.to_probs().expect("explicit distribution");
        check_distribution(trial, &probs, &mut report);
    }
    // skipped trials count toward the total requested
    report.trials += report.skipped;
    report
}

/// `Err(n)` at the first `n` with `C_{n+1} >= C_n`.
pub fn c_n_strictly_decreasing(n_max: u64) -> Result<(), u64> {
    let mut prev = log2_c_n(2);
    for n in 3..=n_max {
        let cur = log2_c_n(n);
        if cur >= prev {
            return Err(n - 1);
        }
        prev = cur;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_length_clauses_hold() {
        for (code, n) in [(CodeId::DeltaDelta, 6), (CodeId::Nu, 11)] {
            for clause in 1..=n {
                let r = lemma_length_check(code, clause).unwrap();
                assert!(
                    r.pass(),
                    "{code} clause {clause}: {:?}",
                    &r.violations[..r.violations.len().min(3)]
                );
                assert_eq!(r.p1_grid.len(), P1_GRID);
            }
            assert!(matches!(
                lemma_length_check(code, n + 1),
                Err(BoundsError::NoSuchClause { .. })
            ));
            assert!(matches!(
                lemma_length_check(code, 0),
                Err(BoundsError::NoSuchClause { .. })
            ));
        }
        assert!(matches!(
            lemma_length_check(CodeId::Gamma, 1),
            Err(BoundsError::UnsupportedCode(_))
        ));
    }

    #[test]
    fn equality_cases_are_tight() {
        let r = lemma_length_check(CodeId::DeltaDelta, 1).unwrap();
        assert_eq!(r.tightest.0, BigUint::from(3u8));
        assert!(r.tightest.2.abs() < 1e-9);
        let r = lemma_length_check(CodeId::Nu, 2).unwrap();
        assert_eq!(r.tightest.0, BigUint::from(4u8));
        assert!(r.tightest.2.abs() < 1e-9);
    }

    #[test]
    fn nu_linear_clause_at_255() {
        let lhs = code_length(CodeId::Nu, &SymbolIndex::try_from(255u64).unwrap());
        assert_eq!(lhs, 13);
        assert!((lhs as f64) < 833.0 / 64.0 + 65.0 / 64.0 * 255f64.log2());
    }

    #[test]
    fn weighted_a_on_dyadic_example() {
        let probs = [0.5, 0.25, 0.125, 0.125];
        let (lhs, rhs) = weighted_a_sides(&probs).unwrap();
        // A_2 = -2 + 1 + 1, A_3 = A_4 = -3 + 1 + log₂n
        let want_lhs = 0.125 * (3f64.log2() - 2.0) + 0.125 * 0.0;
        let want_rhs = 0.25 + 0.125 * 0.75f64.log2() + 0.125 * (16.0f64 / 27.0).log2();
        assert!((lhs - want_lhs).abs() < 1e-15);
        assert!((rhs - want_rhs).abs() < 1e-15);
        assert!(lhs <= rhs);
    }

    #[test]
    fn degenerate_support_two() {
        let probs = [1.0 - 1e-6, 1e-6];
        for l in TAIL_LOG_LS {
            let (lhs, rhs) = tail_log_sides(&probs, l).unwrap();
            assert_eq!(lhs, 0.0);
            assert!(lhs <= rhs + LEMMA_SLACK);
        }
        assert_eq!(weighted_a_sides(&[1.0]), None);
    }

    #[test]
    fn abel_example() {
        assert_eq!(abel_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]), (32.0, 32.0));
        assert_eq!(abel_sum(&[], &[]), (0.0, 0.0));
    }

    #[test]
    fn random_distributions_satisfy_lemmas() {
        let r = lemma_prob_check(500, 64, 7);
        assert_eq!(r.trials, 500);
        assert!(r.pass(), "{:?}", r.violations.first());
        assert!(r.max_abel_rel_err <= ABEL_REL_TOL);
    }

    #[test]
    fn c_n_decreases() {
        assert_eq!(c_n_strictly_decreasing(100_000), Ok(()));
    }
}
