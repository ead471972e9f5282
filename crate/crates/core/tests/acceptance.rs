//! Acceptance criteria, each run against its tolerance and time budget.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uci_core::bounds::{c_n_strictly_decreasing, compute_zero_points, lemma_clauses};
use uci_core::dist::{parse_probability, pm_lower_bound, random_decreasing, ratio_of};
use uci_core::{
    decode, decode_stream, encode, encode_stream, expansion_ratio, kraft_prefix_sum,
    lemma_length_check, lemma_prob_check, sum_len, verify_cases, verify_nu_identity, BitReader,
    BitString, CodeId, Distribution, Dyadic, SymbolIndex,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn sym(n: u64) -> SymbolIndex {
    SymbolIndex::try_from(n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
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

fn golden_vectors() -> Outcome {
    let tables: [(CodeId, &[&str]); 3] = [
        (CodeId::Gamma, &GAMMA),
        (CodeId::Delta, &DELTA),
        (CodeId::DeltaDelta, &DELTA_DELTA),
    ];
    for (code, table) in tables {
        for (i, want) in table.iter().enumerate() {
            let got = encode(code, &sym(i as u64 + 1)).to_string();
            ensure(got == *want, || {
                format!("{code}({}) = {got}, want {want}", i + 1)
            })?;
        }
    }
    Ok("γ, δ for 1..16 and Δδ for 1..8 bit-exact".into())
}

/// Uniform below `2^bits`.
fn random_below_pow2(rng: &mut ChaCha8Rng, bits: u64) -> BigUint {
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill(bytes.as_mut_slice());
    BigUint::from_bytes_le(&bytes) % (BigUint::from(1u8) << bits)
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random: Vec<SymbolIndex> = (0..1000)
        .map(|_| {
            let bits = rng.gen_range(1..=200);
            SymbolIndex::new(random_below_pow2(&mut rng, bits) + 1u32).unwrap()
        })
        .collect();
    let range: Vec<SymbolIndex> = (1..=100_000).map(sym).collect();
    for code in CodeId::UNIVERSAL {
        let mut buf = Vec::new();
        encode_stream(code, &range, &mut buf).map_err(|e| e.to_string())?;
        let (_, back) = decode_stream(buf.as_slice()).map_err(|e| e.to_string())?;
        ensure(back == range, || {
            format!("{code}: stream over [1, 1e5] differs")
        })?;
        for a in &random {
            let bits = encode(code, a);
            let mut r = BitReader::new(bits.as_bytes());
            let got = decode(code, &mut r).map_err(|e| e.to_string())?;
            ensure(got == *a && r.position() == bits.len() as u64, || {
                format!("{code}: {a} round-trips to {got}")
            })?;
        }
    }
    Ok("γ, δ, Δδ, ν over [1, 1e5] and 1000 values below 2^200".into())
}

fn kraft_identities() -> Outcome {
    let three_quarters = Dyadic::new(3u8.into(), 2);
    for code in [CodeId::Delta, CodeId::DeltaDelta] {
        let s = kraft_prefix_sum(code, &sym(7));
        ensure(s == three_quarters, || format!("{code}: Σ_(a<=7) = {s}"))?;
    }
    let r = verify_nu_identity();
    let expected = Dyadic::new(1187u32.into(), 12);
    ensure(r.lhs == expected && r.rhs == expected, || {
        format!("sides {} and {}", r.lhs, r.rhs)
    })?;
    ensure(r.nu_total == Dyadic::one(), || {
        format!("ν total {}", r.nu_total)
    })?;
    ensure(r.holds(), || r.failures.join("; "))?;
    Ok(format!(
        "Σ_(a<=7) = 3/4 for δ, Δδ; both sides {}; ν total = 1",
        r.lhs
    ))
}

const S_NU1: [(u64, u64); 4] = [(7, 7), (15, 24), (37, 50), (68, 84)];
const S_NU2: [(u64, u64); 2] = [(31, 36), (63, 67)];

/// `L_δ(a) + Δ(a)` straight from the definitions.
fn nu_length_oracle(a: &BigUint) -> u64 {
    let t = a.bits() - 1;
    let l_delta = 1 + t + 2 * (63 - (t + 1).leading_zeros() as u64);
    let small = if a.bits() <= 3 {
        Some(a.iter_u64_digits().next().unwrap_or(0))
    } else {
        None
    };
    let adj: i64 = match small {
        Some(6 | 7) => 2,
        Some(3..=5) => 1,
        Some(2) => -1,
        _ if S_NU1.iter().any(|&(lo, hi)| (lo..=hi).contains(&t)) => -1,
        _ if S_NU2.iter().any(|&(lo, hi)| (lo..=hi).contains(&t)) => -2,
        _ => 0,
    };
    (l_delta as i64 + adj) as u64
}

fn prefix_free(words: &[BitString]) -> Result<(), String> {
    // binary trie: node children and a terminal mark per node
    let mut children: Vec<[u32; 2]> = vec![[0, 0]];
    let mut terminal = vec![false];
    for (i, w) in words.iter().enumerate() {
        let mut node = 0usize;
        for bit in w.iter() {
            if terminal[node] {
                return Err(format!("codeword {} extends another codeword", i + 1));
            }
            let b = bit as usize;
            if children[node][b] == 0 {
                children.push([0, 0]);
                terminal.push(false);
                children[node][b] = (children.len() - 1) as u32;
            }
            node = children[node][b] as usize;
        }
        if terminal[node] || children[node] != [0, 0] {
            return Err(format!("codeword {} is a prefix of another", i + 1));
        }
        terminal[node] = true;
    }
    Ok(())
}

fn nu_construction() -> Outcome {
    for a in 1..=100_000u64 {
        let got = encode(CodeId::Nu, &sym(a)).len() as u64;
        let want = nu_length_oracle(&BigUint::from(a));
        ensure(got == want, || format!("|ν({a})| = {got}, want {want}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sampled = 0;
    for t in 3..=200u64 {
        let base = BigUint::from(1u8) << t;
        let offsets = [
            BigUint::from(0u8),
            random_below_pow2(&mut rng, t),
            &base - 1u32,
        ];
        for off in offsets {
            let a = &base + off;
            let got = encode(CodeId::Nu, &SymbolIndex::new(a.clone()).unwrap()).len() as u64;
            let want = nu_length_oracle(&a);
            ensure(got == want, || format!("|ν({a})| = {got}, want {want}"))?;
            sampled += 1;
        }
    }
    let words: Vec<BitString> = (1..=1u64 << 12)
        .map(|a| encode(CodeId::Nu, &sym(a)))
        .collect();
    prefix_free(&words)?;
    Ok(format!("lengths match for a <= 1e5 and {sampled} samples in blocks 3..=200; prefix-free on a <= 4096"))
}

fn leading_digits(n: &BigUint, k: usize) -> String {
    n.to_string()[..k].to_string()
}

fn witness(code: CodeId, p1: &str, m: u64, digits: &str, ratio_floor: &str) -> Outcome {
    let hi = SymbolIndex::new((BigUint::from(1u8) << m) + 1u32).unwrap();
    let s = sum_len(code, &sym(2), &hi);
    let lead = leading_digits(&s, digits.len());
    ensure(lead == digits, || {
        format!("sum_len leads with {lead}, want {digits}")
    })?;
    let d = Distribution::spike_uniform(parse_probability(p1).unwrap(), m).unwrap();
    let r = expansion_ratio(code, &d, 40);
    let floor =
        uci_core::Fixed::from_rational(&parse_probability_any(ratio_floor), r.ratio.frac_bits());
    ensure(r.ratio > floor, || {
        format!("ratio {} not above {ratio_floor}", r.ratio.to_decimal(12))
    })?;
    Ok(format!(
        "sum_len = {s} (digits {lead}), ratio {} > {ratio_floor}",
        r.ratio.to_decimal(12)
    ))
}

/// Decimal literal as an exact rational, for values above one.
fn parse_probability_any(s: &str) -> num_rational::BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let den = num_bigint::BigInt::from(10u8).pow(frac.len() as u32);
    let num: num_bigint::BigInt = format!("{int}{frac}").parse().unwrap();
    num_rational::BigRational::new(num, den)
}

fn theorem_verification() -> Outcome {
    let mut summary = Vec::new();
    for (code, checks) in [
        (
            CodeId::DeltaDelta,
            [
                ("f2", 2.0, 1e-6),
                ("f10", 2.0625, 1e-6),
                ("f8", 2.0821, -1.0),
            ],
        ),
        (
            CodeId::Nu,
            [
                ("f11", 2.0, 1e-9),
                ("f25", 2.015625, 1e-9),
                ("f22", 2.0386, -1.0),
            ],
        ),
    ] {
        let r = verify_cases(code, 1e-4).map_err(|e| e.to_string())?;
        ensure(r.pass(), || format!("{code}: {}", r.failures().join("; ")))?;
        ensure(r.global_max <= r.global_bound + 1e-6, || {
            format!("{code} max {}", r.global_max)
        })?;
        for (name, value, tol) in checks {
            let c = r
                .constants
                .iter()
                .find(|c| c.recipe_name == name)
                .ok_or(format!("no {name}"))?;
            // negative tolerance marks a strict upper bound
            let ok = if tol < 0.0 {
                c.value < value
            } else {
                (c.value - value).abs() <= tol
            };
            ensure(ok, || format!("{name}({}) = {}", c.at, c.value))?;
        }
        summary.push(format!(
            "{code} max {:.6} at {:.5} <= {}",
            r.global_max, r.global_argmax, r.global_bound
        ));
    }
    Ok(summary.join("; "))
}

fn zero_points() -> Outcome {
    let (_, results) = compute_zero_points().map_err(|e| e.to_string())?;
    ensure(results.len() == 14, || "expected 14 zero points".into())?;
    let worst = results
        .iter()
        .map(|z| (z.value - z.published).abs())
        .fold(0.0, f64::max);
    for z in &results {
        ensure(z.pass, || {
            format!("{} = {} vs {}", z.point.name(), z.value, z.published)
        })?;
    }
    Ok(format!("x1..x14 within {worst:.2e} of published values"))
}

fn lemma_suites() -> Outcome {
    let mut clauses = 0;
    for code in [CodeId::DeltaDelta, CodeId::Nu] {
        let n = lemma_clauses(code).unwrap().len();
        for k in 1..=n {
            let r = lemma_length_check(code, k).map_err(|e| e.to_string())?;
            ensure(r.pass(), || {
                format!("{code} clause {k}: {:?}", r.violations.first())
            })?;
            clauses += 1;
        }
    }
    let r = lemma_prob_check(10_000, 256, 2024);
    ensure(r.pass(), || format!("{:?}", r.violations.first()))?;
    ensure(r.trials == 10_000, || format!("{} trials", r.trials))?;
    c_n_strictly_decreasing(1_000_000).map_err(|n| format!("C_n not decreasing at {n}"))?;
    Ok(format!(
        "{clauses} length clauses; {} distributions ({} vacuous), abel rel err {:.1e}; C_n decreasing to 1e6",
        r.trials, r.skipped, r.max_abel_rel_err
    ))
}

fn universal_bounds() -> Outcome {
    let bounds = [
        (CodeId::Gamma, 3.0),
        (CodeId::Delta, 2.75),
        (CodeId::DeltaDelta, 2.0821),
        (CodeId::Nu, 2.0386),
    ];
    let mut worst = [0.0f64; 4];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10_000 {
        let support = rng.gen_range(1..=256);
        let probs = random_decreasing(rng.gen(), support).to_probs().unwrap();
        for (i, (code, bound)) in bounds.iter().enumerate() {
            let r = ratio_of(*code, &probs);
            ensure(r <= *bound, || format!("{code} ratio {r} > {bound}"))?;
            worst[i] = worst[i].max(r);
        }
    }
    Ok(format!(
        "largest ratios γ {:.4}, δ {:.4}, Δδ {:.4}, ν {:.4}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn lower_bound_family() -> Outcome {
    let mut prev = pm_lower_bound(2);
    for m in 3..=1_000_000u64 {
        let cur = pm_lower_bound(m);
        ensure(cur > prev, || format!("not increasing at m = {m}"))?;
        prev = cur;
    }
    let at = pm_lower_bound(1 << 14);
    ensure(at > 1.99, || format!("value {at} at 2^14"))?;
    Ok(format!("increasing on [2, 1e6]; {at:.6} at 2^14"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("golden vectors", Duration::from_secs(1), golden_vectors),
        ("round trip", Duration::from_secs(30), round_trip),
        ("kraft identities", Duration::from_secs(5), kraft_identities),
        ("nu construction", Duration::from_secs(30), nu_construction),
        ("delta-delta witness", Duration::from_secs(5), || {
            witness(
                CodeId::DeltaDelta,
                "0.98678557",
                68,
                "232982377",
                "2.029899",
            )
        }),
        ("nu witness", Duration::from_secs(5), || {
            witness(CodeId::Nu, "0.992886244", 132, "7891148088", "2.023936")
        }),
        (
            "case analyses",
            Duration::from_secs(60),
            theorem_verification,
        ),
        ("zero points", Duration::from_secs(5), zero_points),
        ("lemma suites", Duration::from_secs(120), lemma_suites),
        (
            "universal bounds",
            Duration::from_secs(120),
            universal_bounds,
        ),
        (
            "lower-bound family",
            Duration::from_secs(10),
            lower_bound_family,
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("{tag} {:>2} {name} ({elapsed:.2?}): {msg}", i + 1);
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 11 criteria failed");
        ExitCode::FAILURE
    }
}
