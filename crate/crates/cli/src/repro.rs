//! Side-by-side table of published figures and recomputed values. Output
//! depends only on the build and the precision setting, never on timing.

use num_bigint::BigUint;
use uci_core::bounds::{compute_zero_points, verify_cases};
use uci_core::dist::{parse_probability, pm_lower_bound};
use uci_core::{
    encode, expansion_ratio, kraft_prefix_sum, sum_len, verify_nu_identity, CodeId, Distribution,
    Dyadic, Fixed, SymbolIndex,
};

use crate::commands::WITNESSES;

struct Row {
    quantity: String,
    published: String,
    computed: String,
    ok: bool,
}

fn row(
    quantity: impl Into<String>,
    published: impl Into<String>,
    computed: impl Into<String>,
    ok: bool,
) -> Row {
    Row {
        quantity: quantity.into(),
        published: published.into(),
        computed: computed.into(),
        ok,
    }
}

fn sym(n: u64) -> SymbolIndex {
    SymbolIndex::try_from(n).expect("positive")
}

const GAMMA: [&str; 16] = [
    "1",
    "010",
    "011",
    "00100",
    "00101",
    "00110",
    "00111",
    "0001000",
    "0001001",
    "0001010",
    "0001011",
    "0001100",
    "0001101",
    "0001110",
    "0001111",
    "000010000",
];
const DELTA: [&str; 16] = [
    "1",
    "0100",
    "0101",
    "01100",
    "01101",
    "01110",
    "01111",
    "00100000",
    "00100001",
    "00100010",
    "00100011",
    "00100100",
    "00100101",
    "00100110",
    "00100111",
    "001010000",
];
const DELTA_DELTA: [&str; 8] = [
    "1", "010", "01111", "01100", "01101", "011100", "011101", "00100000",
];

fn codeword_rows(rows: &mut Vec<Row>) {
    for (code, table) in [
        (CodeId::Gamma, &GAMMA[..]),
        (CodeId::Delta, &DELTA[..]),
        (CodeId::DeltaDelta, &DELTA_DELTA[..]),
    ] {
        let matched = table
            .iter()
            .enumerate()
            .filter(|(i, w)| encode(code, &sym(*i as u64 + 1)).to_string() == **w)
            .count();
        rows.push(row(
            format!("{code} codewords a = 1..{}", table.len()),
            format!("{} listed", table.len()),
            format!("{matched} match"),
            matched == table.len(),
        ));
    }
}

fn kraft_rows(rows: &mut Vec<Row>) {
    let three_quarters = Dyadic::new(3u8.into(), 2);
    for code in [CodeId::Delta, CodeId::DeltaDelta] {
        let s = kraft_prefix_sum(code, &sym(7));
        rows.push(row(
            format!("{code} Kraft sum a = 1..7"),
            "3/4",
            s.to_string(),
            s == three_quarters,
        ));
    }
    let r = verify_nu_identity();
    let expected = r.expected.to_string();
    rows.push(row(
        "delta mass, small symbols + S-blocks",
        &expected,
        r.lhs.to_string(),
        r.lhs == r.expected,
    ));
    rows.push(row(
        "nu mass, small symbols + S-blocks",
        &expected,
        r.rhs.to_string(),
        r.rhs == r.expected,
    ));
    rows.push(row(
        "nu total Kraft mass",
        "1",
        r.nu_total.to_string(),
        r.nu_total == Dyadic::one(),
    ));
}

const SUM_DIGITS: [(CodeId, &str); 2] = [
    (CodeId::DeltaDelta, "2.32982377e22"),
    (CodeId::Nu, "7.891148088e41"),
];

fn scientific(n: &BigUint, digits: usize) -> String {
    let s = n.to_string();
    let mantissa = format!("{}.{}", &s[..1], &s[1..digits]);
    format!("{mantissa}e{}", s.len() - 1)
}

fn witness_rows(rows: &mut Vec<Row>, digits: usize) {
    for (&(code, p1, m, floor), &(_, published_sum)) in WITNESSES.iter().zip(&SUM_DIGITS) {
        let hi = SymbolIndex::new((BigUint::from(1u8) << m) + 1u32).expect("positive");
        let sum = sum_len(code, &sym(2), &hi);
        let significant = published_sum.split('e').next().map_or(0, |m| m.len() - 1);
        let computed = scientific(&sum, significant);
        rows.push(row(
            format!("{code} length sum a = 2..2^{m}+1"),
            published_sum,
            &computed,
            computed == published_sum,
        ));

        let d =
            Distribution::spike_uniform(parse_probability(p1).expect("literal"), m).expect("valid");
        let r = expansion_ratio(code, &d, digits);
        let above = r.ratio > Fixed::from_f64(floor, r.ratio.frac_bits());
        rows.push(row(
            format!("{code} ratio, spike p1 = {p1}, m = {m}"),
            format!("> {floor}"),
            r.ratio.to_decimal(digits.min(20)),
            above,
        ));
    }
}

fn bound_rows(rows: &mut Vec<Row>) {
    match compute_zero_points() {
        Ok((_, zeros)) => {
            for z in zeros {
                rows.push(row(
                    z.point.name(),
                    z.point.published_value,
                    format!("{:.5}", z.value),
                    z.pass,
                ));
            }
        }
        Err(e) => rows.push(row("zero points", "x1..x14", e.to_string(), false)),
    }
    for code in [CodeId::DeltaDelta, CodeId::Nu] {
        let report = match verify_cases(code, 1e-4) {
            Ok(r) => r,
            Err(e) => {
                rows.push(row(
                    format!("{code} case analysis"),
                    "",
                    e.to_string(),
                    false,
                ));
                continue;
            }
        };
        for c in &report.constants {
            rows.push(row(
                format!("{code} {}({})", c.recipe_name, c.at),
                format!("{} {}", c.relation, c.bound),
                format!("{:.6}", c.value),
                c.pass,
            ));
        }
        let cases_ok =
            report.cases.iter().all(|c| c.pass()) && report.structure_failures.is_empty();
        rows.push(row(
            format!("{code} cases on grid 1e-4"),
            format!("{} cases", report.cases.len()),
            format!("{} pass", report.cases.iter().filter(|c| c.pass()).count()),
            cases_ok,
        ));
        rows.push(row(
            format!("{code} expansion factor"),
            format!("<= {}", report.global_bound),
            format!(
                "{:.6} at p1 = {:.5}",
                report.global_max, report.global_argmax
            ),
            report.global_ok(),
        ));
    }
    let pm = pm_lower_bound(1 << 14);
    rows.push(row(
        "spike lower bound at m = 2^14",
        "-> 2",
        format!("{pm:.6}"),
        pm > 1.99,
    ));
}

pub fn run(digits: usize) -> anyhow::Result<bool> {
    let mut rows = Vec::new();
    codeword_rows(&mut rows);
    kraft_rows(&mut rows);
    witness_rows(&mut rows, digits);
    bound_rows(&mut rows);

    let header = ["quantity", "published", "computed", "status"];
    let cells: Vec<[&str; 4]> = rows
        .iter()
        .map(|r| {
            [
                r.quantity.as_str(),
                r.published.as_str(),
                r.computed.as_str(),
                if r.ok { "ok" } else { "MISMATCH" },
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for c in &cells {
        for (w, s) in widths.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let print = |c: [&str; 4]| {
        let padded: Vec<String> = c
            .iter()
            .zip(widths)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    print(header);
    for c in cells {
        print(c);
    }
    let failed = rows.iter().filter(|r| !r.ok).count();
    println!();
    if failed == 0 {
        println!("all {} figures reproduced", rows.len());
    } else {
        println!("{failed} of {} figures not reproduced", rows.len());
    }
    Ok(failed == 0)
}
