use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use serde_json::{json, Value};
use uci_core::bounds::{
    c_n_strictly_decreasing, lemma_clauses, CaseReport, LengthCheckReport, ProbCheckReport, Recipe,
};
use uci_core::kraft::ALPHA_MAX_BLOCK;
use uci_core::{
    code_length, decode_stream, encode_stream, expansion_ratio, kraft_block, kraft_tail,
    lemma_length_check, lemma_prob_check, verify_cases, verify_nu_identity, CodeId, Distribution,
    Dyadic, Fixed, SymbolIndex,
};

/// Spike-uniform distributions with a published lower bound on their
/// expansion ratio: code, `p1`, `m`, bound.
pub const WITNESSES: [(CodeId, &str, u64, f64); 2] = [
    (CodeId::DeltaDelta, "0.98678557", 68, 2.029899),
    (CodeId::Nu, "0.992886244", 132, 2.023936),
];

/// Largest unary codeword printed in full.
const ALPHA_PRINT_LIMIT: u64 = 1 << 16;

fn parse_symbols(values: &[String]) -> anyhow::Result<Vec<SymbolIndex>> {
    values
        .iter()
        .map(|v| {
            v.parse::<SymbolIndex>()
                .with_context(|| format!("invalid integer {v:?}"))
        })
        .collect()
}

pub fn encode(code: CodeId, out: Option<&Path>, values: &[String]) -> anyhow::Result<bool> {
    if !code.is_prefix_free() {
        bail!("{code} is not a prefix code, so its streams cannot be decoded");
    }
    let symbols = if values.is_empty() {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        let words: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
        parse_symbols(&words)?
    } else {
        parse_symbols(values)?
    };
    if code == CodeId::Alpha {
        if let Some(a) = symbols
            .iter()
            .find(|a| a.to_u64().is_none_or(|v| v > ALPHA_PRINT_LIMIT))
        {
            bail!("alpha codewords longer than {ALPHA_PRINT_LIMIT} bits are not written (got {a})");
        }
    }
    let written = match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut sink = BufWriter::new(file);
            let n = encode_stream(code, &symbols, &mut sink)?;
            sink.flush()?;
            n
        }
        None => {
            let mut sink = io::stdout().lock();
            let n = encode_stream(code, &symbols, &mut sink)?;
            sink.flush()?;
            n
        }
    };
    eprintln!(
        "encoded {} symbols with {code} into {written} bytes",
        symbols.len()
    );
    Ok(true)
}

pub fn decode(input: Option<&Path>) -> anyhow::Result<bool> {
    let mut bytes = Vec::new();
    match input {
        Some(path) if path != Path::new("-") => {
            File::open(path)
                .with_context(|| format!("opening {}", path.display()))?
                .read_to_end(&mut bytes)?;
        }
        _ => {
            io::stdin().read_to_end(&mut bytes)?;
        }
    }
    let (_, symbols) = decode_stream(bytes.as_slice())?;
    let text: Vec<String> = symbols.iter().map(ToString::to_string).collect();
    println!("{}", text.join(" "));
    Ok(true)
}

fn codes_or_universal(codes: &[CodeId]) -> Vec<CodeId> {
    if codes.is_empty() {
        CodeId::UNIVERSAL.to_vec()
    } else {
        codes.to_vec()
    }
}

pub fn lengths(
    codes: &[CodeId],
    codewords: bool,
    json: bool,
    values: &[String],
) -> anyhow::Result<bool> {
    let codes = codes_or_universal(codes);
    let symbols = parse_symbols(values)?;
    let alpha_limit = if codewords {
        ALPHA_PRINT_LIMIT
    } else {
        u64::MAX
    };
    if codes.contains(&CodeId::Alpha) {
        if let Some(a) = symbols
            .iter()
            .find(|a| a.to_u64().is_none_or(|v| v > alpha_limit))
        {
            bail!("alpha is only tabulated up to {alpha_limit} (got {a})");
        }
    }
    let cell = |code: CodeId, a: &SymbolIndex| -> Value {
        if codewords {
            Value::String(uci_core::encode(code, a).to_string())
        } else {
            Value::from(code_length(code, a))
        }
    };
    let rows: Vec<(String, Vec<Value>)> = symbols
        .iter()
        .map(|a| (a.to_string(), codes.iter().map(|&c| cell(c, a)).collect()))
        .collect();

    if json {
        let out: Vec<Value> = rows
            .iter()
            .map(|(a, cells)| {
                let mut obj = serde_json::Map::new();
                obj.insert("a".into(), Value::String(a.clone()));
                for (code, v) in codes.iter().zip(cells) {
                    obj.insert(code.name().into(), v.clone());
                }
                Value::Object(obj)
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(true);
    }

    let text = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let mut widths: Vec<usize> = std::iter::once("a".len())
        .chain(codes.iter().map(|c| c.name().len()))
        .collect();
    for (a, cells) in &rows {
        widths[0] = widths[0].max(a.len());
        for (i, v) in cells.iter().enumerate() {
            widths[i + 1] = widths[i + 1].max(text(v).len());
        }
    }
    let header: Vec<String> = std::iter::once("a")
        .chain(codes.iter().map(|c| c.name()))
        .zip(&widths)
        .map(|(h, w)| format!("{h:>w$}"))
        .collect();
    println!("{}", header.join("  ").trim_end());
    for (a, cells) in &rows {
        let mut line = vec![format!("{a:>w$}", w = widths[0])];
        line.extend(
            cells
                .iter()
                .zip(&widths[1..])
                .map(|(v, w)| format!("{:>w$}", text(v))),
        );
        println!("{}", line.join("  ").trim_end());
    }
    Ok(true)
}

/// Exact fraction when printable, otherwise an approximation.
fn show_dyadic(d: &Dyadic) -> String {
    if d.shift() <= 512 {
        d.to_string()
    } else {
        format!("~{:.6e} (denominator 2^{})", d.to_f64(), d.shift())
    }
}

pub fn kraft_check(code: CodeId, through: Option<u64>, json: bool) -> anyhow::Result<bool> {
    let t_max = through.unwrap_or(if code == CodeId::Alpha { 16 } else { 84 });
    if code == CodeId::Alpha && t_max > ALPHA_MAX_BLOCK {
        bail!("alpha block masses are exact only through block {ALPHA_MAX_BLOCK}");
    }
    let mut partial = Dyadic::zero();
    for t in 0..=t_max {
        partial += kraft_block(code, t);
    }
    let tail = kraft_tail(code, t_max);
    let total = tail.as_ref().map(|tail| partial.clone() + tail.clone());
    let identity = (code == CodeId::Nu).then(verify_nu_identity);
    let holds = total.as_ref().is_some_and(|t| *t == Dyadic::one())
        && identity.as_ref().is_none_or(|r| r.holds());

    if json {
        let mut out = json!({
            "code": code.name(),
            "through_block": t_max,
            "partial": show_dyadic(&partial),
            "tail": tail.as_ref().map(show_dyadic),
            "total": total.as_ref().map(show_dyadic),
            "holds": holds,
        });
        if let Some(r) = &identity {
            out["exchanged_mass"] = json!({
                "delta": r.lhs.to_string(),
                "nu": r.rhs.to_string(),
                "expected": r.expected.to_string(),
            });
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(holds);
    }

    println!("code: {code}");
    if let Some(r) = &identity {
        println!("delta mass of small symbols + S-blocks = {}", r.lhs);
        println!("partial through small symbols + S-blocks = {}", r.rhs);
        for f in &r.failures {
            println!("  failure: {f}");
        }
    }
    println!("partial through block {t_max} = {}", show_dyadic(&partial));
    match (&tail, &total) {
        (Some(tail), Some(total)) => {
            println!("tail after block {t_max} = {}", show_dyadic(tail));
            println!("total = {}", show_dyadic(total));
        }
        _ => println!("tail after block {t_max} diverges: every block carries mass 1/2, so no prefix code has these lengths"),
    }
    println!("{}", if holds { "PASS" } else { "FAIL" });
    Ok(holds)
}

fn witness_floor(code: CodeId, d: &Distribution) -> Option<f64> {
    let Distribution::SpikeUniform { p1, m } = d else {
        return None;
    };
    WITNESSES.iter().find_map(|&(c, p, wm, floor)| {
        let same =
            c == code && wm == *m && uci_core::dist::parse_probability(p).ok().as_ref() == Some(p1);
        same.then_some(floor)
    })
}

pub fn analyze(
    codes: &[CodeId],
    dist: &Distribution,
    digits: usize,
    json: bool,
) -> anyhow::Result<bool> {
    let codes = codes_or_universal(codes);
    if let Some(c) = codes.iter().find(|c| !CodeId::UNIVERSAL.contains(c)) {
        bail!("analyze supports gamma, delta, delta_delta and nu, not {c}");
    }
    if !matches!(dist, Distribution::SpikeUniform { .. }) && dist.to_probs().is_none() {
        bail!("distribution {dist} cannot be listed");
    }
    let mut ok = true;
    let mut results = Vec::new();
    for &code in &codes {
        let r = expansion_ratio(code, dist, digits);
        let shown = if r.exact { digits } else { 15 };
        let floor = witness_floor(code, dist);
        let above = floor.map(|f| r.ratio > Fixed::from_f64(f, r.ratio.frac_bits()));
        ok &= above.unwrap_or(true);
        results.push((r, shown, floor, above));
    }
    let entropy = results
        .first()
        .map(|(r, shown, ..)| r.entropy.to_decimal(*shown))
        .unwrap_or_default();

    if json {
        let out: Vec<Value> = results
            .iter()
            .map(|(r, shown, floor, above)| {
                json!({
                    "code": r.code.name(),
                    "avg_len": r.avg_len.to_decimal(*shown),
                    "ratio": r.ratio.to_decimal(*shown),
                    "exact": r.exact,
                    "len_sum": r.exact_len_sum.as_ref().map(ToString::to_string),
                    "witness_bound": floor,
                    "above_witness_bound": above,
                })
            })
            .collect();
        let doc = json!({ "distribution": dist.to_string(), "entropy": entropy, "results": out });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(ok);
    }

    println!("distribution    {dist}");
    println!("entropy         {entropy}");
    for (r, shown, floor, above) in &results {
        println!();
        println!("{}", r.code);
        println!("  average length  {}", r.avg_len.to_decimal(*shown));
        let note = match (floor, above) {
            (Some(f), Some(true)) => format!("  > {f} (published witness bound)"),
            (Some(f), _) => format!("  NOT above {f} (published witness bound)"),
            _ => String::new(),
        };
        println!("  ratio           {}{note}", r.ratio.to_decimal(*shown));
        if let Some(sum) = &r.exact_len_sum {
            println!("  length sum      {sum} (symbols 2 to 2^m+1)");
        }
        if !r.exact {
            println!("  (double precision: the distribution is float-backed)");
        }
    }
    Ok(ok)
}

fn print_case_report(r: &CaseReport, clauses: &[LengthCheckReport]) {
    println!(
        "== {}: case analysis, grid step {:e} ==",
        r.code, r.grid_step
    );
    let rows: Vec<[String; 9]> = r
        .cases
        .iter()
        .map(|c| {
            let p2 = match c.spec.recipe {
                Recipe::QPlusD { p2, .. } => p2.to_string(),
                Recipe::Linear { .. } => "-".into(),
            };
            [
                c.spec.label.to_string(),
                format!("({}, {}]", c.spec.lo, c.spec.hi),
                c.spec.recipe_name.to_string(),
                p2,
                c.samples.to_string(),
                format!("{:.6}", c.observed_max),
                format!("{:.5}", c.observed_argmax),
                c.spec.claimed.to_string(),
                if c.pass() { "ok".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    let header = [
        "case", "interval", "recipe", "p2", "samples", "max", "at", "claimed", "status",
    ];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in &rows {
        line(row.iter().map(String::as_str).collect());
    }
    for c in r.cases.iter().filter(|c| !c.pass()) {
        for f in &c.failures {
            println!("  case {}: {f}", c.spec.label);
        }
    }
    for f in &r.structure_failures {
        println!("  structure: {f}");
    }
    println!("constants");
    for c in &r.constants {
        let status = if c.pass { "ok" } else { "FAIL" };
        println!(
            "  {}({}) = {:.9} {} {}  {status}",
            c.recipe_name, c.at, c.value, c.relation, c.bound
        );
    }
    println!("zero points");
    for z in &r.zero_points {
        let status = if z.pass { "ok" } else { "FAIL" };
        println!(
            "  {:<4} {:.6}  published {}  {status}",
            z.point.name(),
            z.value,
            z.point.published_value
        );
    }
    println!("length lemma clauses");
    for l in clauses {
        let status = if l.pass() { "ok" } else { "FAIL" };
        println!(
            "  {:>2}  {}  ({}, {}]  tightest slack {:.3e} at a = {}  {status}",
            l.clause.index, l.clause.bound, l.clause.lo, l.clause.hi, l.tightest.2, l.tightest.0
        );
    }
    let status = if r.global_ok() { "PASS" } else { "FAIL" };
    println!(
        "global maximum {:.6} at p1 = {:.5}, bound {}: {status}",
        r.global_max, r.global_argmax, r.global_bound
    );
}

fn case_json(r: &CaseReport, clauses: &[LengthCheckReport]) -> Value {
    json!({
        "code": r.code.name(),
        "grid_step": r.grid_step,
        "pass": r.pass(),
        "global_max": r.global_max,
        "global_argmax": r.global_argmax,
        "global_bound": r.global_bound,
        "cases": r.cases.iter().map(|c| json!({
            "case": c.spec.label,
            "lo": c.spec.lo.to_string(),
            "hi": c.spec.hi.to_string(),
            "recipe": c.spec.recipe_name,
            "claimed": c.spec.claimed,
            "max": c.observed_max,
            "argmax": c.observed_argmax,
            "samples": c.samples,
            "failures": c.failures,
        })).collect::<Vec<_>>(),
        "constants": r.constants.iter().map(|c| json!({
            "recipe": c.recipe_name,
            "at": c.at.to_string(),
            "value": c.value,
            "relation": c.relation.to_string(),
            "bound": c.bound,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
        "zero_points": r.zero_points.iter().map(|z| json!({
            "name": z.point.name(),
            "value": z.value,
            "published": z.point.published_value,
            "pass": z.pass,
        })).collect::<Vec<_>>(),
        "length_clauses": clauses.iter().map(|l| json!({
            "clause": l.clause.index,
            "bound": l.clause.bound.to_string(),
            "checked": l.checked,
            "violations": l.violations.len(),
        })).collect::<Vec<_>>(),
        "structure_failures": r.structure_failures,
    })
}

pub fn verify_bounds(
    code: Option<CodeId>,
    grid_step: f64,
    trials: usize,
    seed: u64,
    json: bool,
) -> anyhow::Result<bool> {
    let codes = match code {
        Some(c) => vec![c],
        None => vec![CodeId::DeltaDelta, CodeId::Nu],
    };
    let mut ok = true;
    let mut docs = Vec::new();
    for code in codes {
        let report = verify_cases(code, grid_step)?;
        let n = lemma_clauses(code).map_or(0, |c| c.len());
        let clauses = (1..=n)
            .map(|k| lemma_length_check(code, k))
            .collect::<Result<Vec<_>, _>>()?;
        ok &= report.pass() && clauses.iter().all(LengthCheckReport::pass);
        if json {
            docs.push(case_json(&report, &clauses));
        } else {
            print_case_report(&report, &clauses);
            println!();
        }
    }
    let prob = (trials > 0).then(|| lemma_prob_check(trials, 256, seed));
    let c_n = c_n_strictly_decreasing(1_000_000);
    ok &= prob.as_ref().is_none_or(ProbCheckReport::pass) && c_n.is_ok();

    if json {
        let doc = json!({
            "codes": docs,
            "probability_lemmas": prob.as_ref().map(|p| json!({
                "trials": p.trials,
                "skipped": p.skipped,
                "inequalities_checked": p.inequalities_checked,
                "max_abel_rel_err": p.max_abel_rel_err,
                "violations": p.violations.len(),
            })),
            "c_n_decreasing_to": 1_000_000,
            "c_n_ok": c_n.is_ok(),
            "pass": ok,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(ok);
    }
    if let Some(p) = &prob {
        let status = if p.pass() { "PASS" } else { "FAIL" };
        println!(
            "probability lemmas: {} distributions (seed {seed}), {} inequalities, abel rel err {:.1e}: {status}",
            p.trials, p.inequalities_checked, p.max_abel_rel_err
        );
        for v in p.violations.iter().take(5) {
            println!(
                "  trial {}: {} lhs {} rhs {}",
                v.trial, v.check, v.lhs, v.rhs
            );
        }
    }
    match c_n {
        Ok(()) => println!("C_n strictly decreasing for n <= 1000000: PASS"),
        Err(n) => println!("C_n strictly decreasing for n <= 1000000: FAIL at n = {n}"),
    }
    Ok(ok)
}
