use super::tables::{
    case_table, lemma_clauses, zero_points, CaseSpec, Endpoint, LengthBound, P2Choice, Recipe,
    Relation, Shape, ZeroKind, ZeroPoint,
};
use super::{argmax, find_zero, r_raw, BoundsError, ZERO_TOL};
use crate::codes::CodeId;

/// Slack on the claimed case bounds.
pub const BOUND_TOL: f64 = 1e-6;
/// Slack on equalities and sign conditions that hold exactly in the
/// analysis.
pub const EXACT_TOL: f64 = 1e-9;
/// Slack on the sign of `R`. Intervals ending at a zero of `R` use the
/// bisected point, so `R` there is off by its slope times [`ZERO_TOL`].
pub const R_SIGN_TOL: f64 = 1e-7;
/// Zero points must match the published five digits this closely.
pub const ZERO_POINT_TOL: f64 = 1e-3;
/// Fewest grid samples taken on any case interval.
const MIN_SAMPLES: usize = 200;

#[derive(Debug, Clone, Default)]
pub struct ZeroValues {
    values: [Option<f64>; 15],
}

impl ZeroValues {
    pub fn get(&self, k: u8) -> Option<f64> {
        self.values.get(k as usize).copied().flatten()
    }

    fn resolve(&self, e: &Endpoint) -> Result<f64, BoundsError> {
        e.value_with(|k| self.get(k))
            .ok_or_else(|| BoundsError::UnresolvedPoint(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct ZeroResult {
    pub point: ZeroPoint,
    pub bracket: (f64, f64),
    pub value: f64,
    pub published: f64,
    pub pass: bool,
}

fn find_case(code: CodeId, label: &str) -> CaseSpec {
    case_table(code)
        .and_then(|t| t.into_iter().find(|c| c.label == label))
        .unwrap_or_else(|| panic!("no case {label} for {code}"))
}

/// Solves for `x1..=x14` in order; later brackets may use earlier points.
pub fn compute_zero_points() -> Result<(ZeroValues, Vec<ZeroResult>), BoundsError> {
    let mut zeros = ZeroValues::default();
    let mut results = Vec::new();
    for p in zero_points() {
        let lo = zeros.resolve(&p.lo)?;
        let hi = zeros.resolve(&p.hi)?;
        let value = match p.kind {
            ZeroKind::Root { c1, c2, l } => {
                find_zero(|x| r_raw(c1 as f64, c2.value(), x, l), lo, hi, ZERO_TOL)?
            }
            ZeroKind::Argmax { case } => {
                let recipe = find_case(p.code, case).recipe;
                argmax(|x| recipe.eval(x), lo, hi, ZERO_TOL)?
            }
        };
        zeros.values[p.index as usize] = Some(value);
        let published: f64 = p.published_value.parse().expect("decimal literal");
        results.push(ZeroResult {
            point: p,
            bracket: (lo, hi),
            value,
            published,
            pass: (value - published).abs() < ZERO_POINT_TOL,
        });
    }
    Ok((zeros, results))
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub spec: CaseSpec,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub observed_max: f64,
    pub observed_argmax: f64,
    pub within_bound: bool,
    /// `R` has the sign that justifies the case's choice of `p2`.
    pub r_sign_ok: Option<bool>,
    pub shape_ok: Option<bool>,
    /// No sample exceeds the recipe value at the witness point.
    pub witness_dominates: bool,
    pub clause_ok: bool,
    pub failures: Vec<String>,
}

impl CaseResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ConstantCheck {
    pub recipe_name: &'static str,
    pub at: Endpoint,
    pub at_value: f64,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub code: CodeId,
    pub grid_step: f64,
    pub cases: Vec<CaseResult>,
    pub constants: Vec<ConstantCheck>,
    pub zero_points: Vec<ZeroResult>,
    pub structure_failures: Vec<String>,
    pub global_max: f64,
    pub global_argmax: f64,
    pub global_bound: f64,
}

impl CaseReport {
    pub fn global_ok(&self) -> bool {
        self.global_max <= self.global_bound + BOUND_TOL
    }

    pub fn pass(&self) -> bool {
        self.global_ok()
            && self.structure_failures.is_empty()
            && self.cases.iter().all(CaseResult::pass)
            && self.constants.iter().all(|c| c.pass)
            && self.zero_points.iter().all(|z| z.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = self.structure_failures.clone();
        for c in &self.cases {
            out.extend(
                c.failures
                    .iter()
                    .map(|f| format!("case {}: {f}", c.spec.label)),
            );
        }
        for c in self.constants.iter().filter(|c| !c.pass) {
            out.push(format!(
                "{}({}) = {} vs {}",
                c.recipe_name, c.at, c.value, c.bound
            ));
        }
        for z in self.zero_points.iter().filter(|z| !z.pass) {
            out.push(format!("{} = {} vs {}", z.point.name(), z.value, z.published));
        }
        if !self.global_ok() {
            out.push(format!(
                "global maximum {} exceeds {}",
                self.global_max, self.global_bound
            ));
        }
        out
    }
}

fn global_bound(code: CodeId) -> f64 {
    match code {
        CodeId::DeltaDelta => 2.0821,
        _ => 2.0386,
    }
}

fn structure_checks(code: CodeId, table: &[CaseSpec], zeros: &ZeroValues) -> Vec<String> {
    let mut failures = Vec::new();
    if table.first().map(|c| c.lo) != Some(Endpoint::Zero) {
        failures.push("first case does not start at 0".into());
    }
    if table.last().map(|c| c.hi) != Some(Endpoint::One) {
        failures.push("last case does not end at 1".into());
    }
    for w in table.windows(2) {
        if w[0].hi != w[1].lo {
            failures.push(format!(
                "gap between case {} ({}) and case {} ({})",
                w[0].label, w[0].hi, w[1].label, w[1].lo
            ));
        }
    }
    for c in table {
        match (zeros.resolve(&c.lo), zeros.resolve(&c.hi)) {
            (Ok(lo), Ok(hi)) if lo < hi => {}
            _ => failures.push(format!(
                "case {} has an empty or unresolved interval",
                c.label
            )),
        }
    }
    let clauses = lemma_clauses(code).expect("clauses exist for case codes");
    for c in table {
        let Some(clause) = clauses.get(c.clause.wrapping_sub(1)) else {
            failures.push(format!(
                "case {} names missing clause {}",
                c.label, c.clause
            ));
            continue;
        };
        let coefs_match = match (clause.bound, c.recipe) {
            (LengthBound::G { c1, c2 }, Recipe::QPlusD { c1: r1, c2: r2, .. }) => {
                c1 == r1 && c2 == r2
            }
            (LengthBound::Linear { slope, .. }, Recipe::Linear { k }) => slope == k,
            _ => false,
        };
        let inside = match (
            zeros.resolve(&clause.lo),
            zeros.resolve(&clause.hi),
            zeros.resolve(&c.lo),
            zeros.resolve(&c.hi),
        ) {
            (Ok(a), Ok(b), Ok(lo), Ok(hi)) => a <= lo + 1e-12 && hi <= b + 1e-12,
            _ => false,
        };
        if !coefs_match || !inside {
            failures.push(format!(
                "case {} does not fit lemma clause {}",
                c.label, c.clause
            ));
        }
    }
    failures
}

fn check_shape(shape: Shape, xs: &[f64], vs: &[f64], zeros: &ZeroValues, step: f64) -> bool {
    let eps = 1e-12;
    let nondecreasing = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0] - eps);
    let nonincreasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] + eps);
    let extreme = |max: bool| {
        (0..vs.len())
            .max_by(|&a, &b| {
                let o = vs[a].total_cmp(&vs[b]);
                if max {
                    o
                } else {
                    o.reverse()
                }
            })
            .expect("non-empty")
    };
    match shape {
        Shape::Increasing => nondecreasing(vs),
        Shape::Decreasing => nonincreasing(vs),
        Shape::DecreasingThenIncreasing => {
            let i = extreme(false);
            nonincreasing(&vs[..=i]) && nondecreasing(&vs[i..])
        }
        Shape::IncreasingThenDecreasing(k) => {
            let i = extreme(true);
            let near = zeros
                .get(k)
                .is_some_and(|x| (xs[i] - x).abs() <= 2.0 * step);
            near && nondecreasing(&vs[..=i]) && nonincreasing(&vs[i..])
        }
    }
}

fn check_case(
    spec: &CaseSpec,
    zeros: &ZeroValues,
    grid_step: f64,
    clause_ok: bool,
) -> Result<CaseResult, BoundsError> {
    let lo = zeros.resolve(&spec.lo)?;
    let hi = zeros.resolve(&spec.hi)?;
    let n = (((hi - lo) / grid_step).ceil() as usize).max(MIN_SAMPLES);
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (1..=n)
        .map(|i| if i == n { hi } else { lo + step * i as f64 })
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| spec.recipe.eval(x)).collect();

    let (imax, &observed_max) = vs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let mut failures = Vec::new();

    let within_bound = observed_max <= spec.claimed + BOUND_TOL;
    if !within_bound {
        failures.push(format!(
            "max {observed_max} at {} exceeds {}",
            xs[imax], spec.claimed
        ));
    }

    let r_sign_ok = match spec.recipe {
        Recipe::QPlusD { p2, .. } => {
            let ok = xs.iter().all(|&x| {
                let r = spec.recipe.r(x).expect("Q recipe");
                match p2 {
                    P2Choice::Zero => r <= R_SIGN_TOL,
                    P2Choice::P1 | P2Choice::OneMinusP1 => r >= -R_SIGN_TOL,
                }
            });
            if !ok {
                failures.push(format!("R changes sign against p2 = {p2}"));
            }
            Some(ok)
        }
        Recipe::Linear { .. } => None,
    };

    let shape_ok = spec.shape.map(|s| {
        let ok = check_shape(s, &xs, &vs, zeros, step);
        if !ok {
            failures.push(format!("sampled values are not {s}"));
        }
        ok
    });

    let witness_value = spec.recipe.eval(zeros.resolve(&spec.witness.at)?);
    let witness_dominates = observed_max <= witness_value + EXACT_TOL;
    if !witness_dominates {
        failures.push(format!(
            "max {observed_max} exceeds value {witness_value} at {}",
            spec.witness.at
        ));
    }
    if !clause_ok {
        failures.push(format!(
            "coefficients do not match lemma clause {}",
            spec.clause
        ));
    }

    Ok(CaseResult {
        spec: *spec,
        lo,
        hi,
        samples: n,
        observed_max,
        observed_argmax: xs[imax],
        within_bound,
        r_sign_ok,
        shape_ok,
        witness_dominates,
        clause_ok,
        failures,
    })
}

/// Samples each case of `code` on a grid no coarser than `grid_step` and
/// checks bounds, sign conditions, shapes, constants and zero points.
pub fn verify_cases(code: CodeId, grid_step: f64) -> Result<CaseReport, BoundsError> {
    let table = case_table(code).ok_or(BoundsError::UnsupportedCode(code))?;
    if grid_step.is_nan() || grid_step <= 0.0 {
        return Err(BoundsError::Domain {
            what: "grid_step",
            value: grid_step,
        });
    }
    if grid_step > 1e-3 {
        return Err(BoundsError::GridTooCoarse(grid_step));
    }
    let (zeros, all_zero_results) = compute_zero_points()?;
    let structure_failures = structure_checks(code, &table, &zeros);

    let mut cases = Vec::with_capacity(table.len());
    let mut constants = Vec::with_capacity(table.len());
    for spec in &table {
        let clause_ok = !structure_failures
            .iter()
            .any(|f| f.starts_with(&format!("case {} does not fit", spec.label)));
        cases.push(check_case(spec, &zeros, grid_step, clause_ok)?);
        let at_value = zeros.resolve(&spec.witness.at)?;
        let value = spec.recipe.eval(at_value);
        let pass = match spec.witness.relation {
            Relation::Below => value < spec.claimed,
            Relation::Equal => (value - spec.claimed).abs() <= EXACT_TOL,
        };
        constants.push(ConstantCheck {
            recipe_name: spec.recipe_name,
            at: spec.witness.at,
            at_value,
            value,
            relation: spec.witness.relation,
            bound: spec.claimed,
            pass,
        });
    }
    let (global_max, global_argmax) = cases
        .iter()
        .map(|c| (c.observed_max, c.observed_argmax))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty table");

    Ok(CaseReport {
        code,
        grid_step,
        cases,
        constants,
        zero_points: all_zero_results
            .into_iter()
            .filter(|z| z.point.code == code)
            .collect(),
        structure_failures,
        global_max,
        global_argmax,
        global_bound: global_bound(code),
    })
}
