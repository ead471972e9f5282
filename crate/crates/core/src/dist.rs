//! Decreasing distributions on the positive integers, entropy, average
//! codeword length and expansion ratios.
//!
//! Spike-uniform distributions are evaluated exactly: `p1` is a rational,
//! the length sum over the uniform part is a big integer, and only the two
//! logarithms in the entropy are approximated, at a chosen precision.
//! The remaining families are evaluated in `f64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{block_length, code_length, CodeId, SymbolIndex};
use crate::precise::{frac_bits_for_digits, plogp_neg, Fixed};

/// Tolerance on the total mass of float-backed distributions.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Working precision of ratio reports when none is requested.
pub const DEFAULT_DIGITS: usize = 40;

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("cannot parse {0:?} as a probability")]
    BadProbability(String),
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(String),
    #[error("probabilities sum to {0}, not 1")]
    Mass(f64),
    #[error("probabilities increase at symbol {0}")]
    NotDecreasing(usize),
    #[error("empty distribution")]
    Empty,
    #[error("spike {p1} is below the uniform mass per symbol at m = {m}")]
    SpikeTooSmall { p1: String, m: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown distribution {0:?}; expected explicit:, spike:, geom: or zipf:")]
    UnknownKind(String),
}

/// Parses `"0.98678557"`, `"1/2"` or `"1"` exactly.
pub fn parse_probability(s: &str) -> Result<BigRational, DistError> {
    let bad = || DistError::BadProbability(s.to_string());
    let s = s.trim();
    let q = if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        BigRational::new(n, d)
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int = if int.is_empty() { "0" } else { int };
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
    };
    if q.is_negative() || q > BigRational::one() {
        return Err(DistError::OutOfRange(s.to_string()));
    }
    Ok(q)
}

#[derive(Clone, PartialEq)]
pub enum Distribution {
    /// `P(a) = probs[a - 1]`.
    Explicit { probs: Vec<f64> },
    /// `P(1) = p1`, `P(a) = (1 - p1) / 2^m` for `2 <= a <= 2^m + 1`.
    SpikeUniform { p1: BigRational, m: u64 },
    /// `P(a) ∝ r^(a-1)` for `a <= n`.
    Geometric { r: f64, n: u64 },
    /// `P(a) ∝ a^-s` for `a <= n`.
    Zipf { s: f64, n: u64 },
}

impl Distribution {
    pub fn explicit(probs: Vec<f64>) -> Result<Self, DistError> {
        if probs.is_empty() {
            return Err(DistError::Empty);
        }
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(DistError::OutOfRange(p.to_string()));
            }
        }
        if let Some(i) = probs.windows(2).position(|w| w[1] > w[0]) {
            return Err(DistError::NotDecreasing(i + 2));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE * probs.len().max(1) as f64 {
            return Err(DistError::Mass(total));
        }
        Ok(Self::Explicit { probs })
    }

    pub fn spike_uniform(p1: BigRational, m: u64) -> Result<Self, DistError> {
        if p1.is_negative() || p1 > BigRational::one() {
            return Err(DistError::OutOfRange(p1.to_string()));
        }
        if m == 0 {
            return Err(DistError::Parameter("m must be at least 1".into()));
        }
        // decreasing: p1 >= (1 - p1) / 2^m
        let uniform = (BigRational::one() - &p1) / BigRational::from(BigInt::one() << m);
        if p1 < uniform {
            return Err(DistError::SpikeTooSmall {
                p1: p1.to_string(),
                m,
            });
        }
        Ok(Self::SpikeUniform { p1, m })
    }

    pub fn geometric(r: f64, n: u64) -> Result<Self, DistError> {
        if !(r > 0.0 && r < 1.0) || n == 0 {
            return Err(DistError::Parameter(format!(
                "geometric needs 0 < r < 1 and N >= 1, got r={r}, N={n}"
            )));
        }
        Ok(Self::Geometric { r, n })
    }

    pub fn zipf(s: f64, n: u64) -> Result<Self, DistError> {
        if s.is_nan() || s <= 1.0 || n == 0 {
            return Err(DistError::Parameter(format!(
                "zipf needs s > 1 and N >= 1, got s={s}, N={n}"
            )));
        }
        Ok(Self::Zipf { s, n })
    }

    /// Probabilities of symbols `1..`, when the support is small enough to
    /// list (spike-uniform up to `m = 24`).
    pub fn to_probs(&self) -> Option<Vec<f64>> {
        match self {
            Self::Explicit { probs } => Some(probs.clone()),
            Self::SpikeUniform { p1, m } if *m <= 24 => {
                let p = p1.to_f64()?;
                let u = (1.0 - p) / (1u64 << m) as f64;
                let mut v = vec![p];
                v.extend(std::iter::repeat_n(u, 1 << m));
                Some(v)
            }
            Self::SpikeUniform { .. } => None,
            Self::Geometric { r, n } => {
                Some(normalized((0..*n).map(|k| r.powi(k as i32)).collect()))
            }
            Self::Zipf { s, n } => {
                Some(normalized((1..=*n).map(|a| (a as f64).powf(-s)).collect()))
            }
        }
    }
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

impl FromStr for Distribution {
    type Err = DistError;

    /// `explicit:p1,p2,...`, `spike:p1,m`, `geom:r,N` or `zipf:s,N`.
    fn from_str(s: &str) -> Result<Self, DistError> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| DistError::UnknownKind(s.to_string()))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let param = |what: &str| DistError::Parameter(format!("{kind} expects {what}"));
        let float = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| DistError::BadProbability(x.to_string()))
        };
        let count = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| DistError::Parameter(format!("bad count {x:?}")))
        };
        match kind.trim() {
            "explicit" => {
                let probs = args
                    .iter()
                    .map(|x| parse_probability(x).map(|q| q.to_f64().unwrap_or(f64::NAN)))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::explicit(probs)
            }
            "spike" => match args[..] {
                [p1, m] => Self::spike_uniform(parse_probability(p1)?, count(m)?),
                _ => Err(param("p1,m")),
            },
            "geom" => match args[..] {
                [r, n] => Self::geometric(float(r)?, count(n)?),
                _ => Err(param("r,N")),
            },
            "zipf" => match args[..] {
                [s, n] => Self::zipf(float(s)?, count(n)?),
                _ => Err(param("s,N")),
            },
            other => Err(DistError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Explicit { probs } => {
                let parts: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
            Self::SpikeUniform { p1, m } => write!(f, "spike:{p1},{m}"),
            Self::Geometric { r, n } => write!(f, "geom:{r},{n}"),
            Self::Zipf { s, n } => write!(f, "zipf:{s},{n}"),
        }
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    // (1-p) log(1-p) through ln_1p keeps precision for small p
    term(p) - (1.0 - p) * (-p).ln_1p() / std::f64::consts::LN_2
}

/// Shannon entropy in bits; zero-probability terms contribute nothing.
pub fn entropy(d: &Distribution) -> f64 {
    match d {
        Distribution::SpikeUniform { p1, m } => {
            let p = p1.to_f64().unwrap_or(f64::NAN);
            binary_entropy(p) + *m as f64 * (1.0 - p)
        }
        _ => entropy_of(&d.to_probs().expect("listable")),
    }
}

pub fn entropy_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `Σ_{a=1}^{n} L(a)`, zero for `n = 0`.
fn length_prefix_sum(code: CodeId, n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    if code == CodeId::Alpha {
        return n * (n + 1u32) / 2u32;
    }
    let a = SymbolIndex::new(n.clone()).expect("positive");
    let t_last = a.block();
    let mut total = BigUint::zero();
    let small_sum = |lo: u64, hi: u64| -> BigUint {
        (lo..=hi)
            .map(|x| code_length(code, &SymbolIndex::try_from(x).expect("positive")))
            .sum::<u64>()
            .into()
    };
    for t in 0..t_last {
        total += match block_length(code, t) {
            Some(len) => (BigUint::one() << t) * len,
            None => small_sum(1 << t, (1 << (t + 1)) - 1),
        };
    }
    let base = BigUint::one() << t_last;
    total += match block_length(code, t_last) {
        Some(len) => (n - &base + 1u32) * len,
        None => small_sum(1 << t_last, n.to_u64().expect("small block")),
    };
    total
}

/// Exact `Σ_{a=lo}^{hi} L(a)` via block closed forms.
pub fn sum_len(code: CodeId, lo: &SymbolIndex, hi: &SymbolIndex) -> BigUint {
    assert!(lo <= hi, "empty range {lo}..={hi}");
    length_prefix_sum(code, hi.value()) - length_prefix_sum(code, &(lo.value() - 1u32))
}

/// Average codeword length and entropy of a report, with its ratio.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub code: CodeId,
    pub avg_len: Fixed,
    pub entropy: Fixed,
    /// `avg_len / max(1, entropy)`.
    pub ratio: Fixed,
    /// `Σ L(a)` over the uniform part of a spike-uniform distribution.
    pub exact_len_sum: Option<BigUint>,
    /// Decimal digits the fixed-point values were computed for.
    pub digits: usize,
    /// Whether the figures come from the exact path; float-backed ones
    /// carry `f64` accuracy only.
    pub exact: bool,
}

/// `2^-m (1 - p1)` and the exact length sum over symbols `2..=2^m+1`.
fn spike_parts(code: CodeId, p1: &BigRational, m: u64) -> (BigRational, BigUint) {
    let lo = SymbolIndex::try_from(2).expect("positive");
    let hi = SymbolIndex::new((BigUint::one() << m) + 1u32).expect("positive");
    let sum = sum_len(code, &lo, &hi);
    let weight = (BigRational::one() - p1) / BigRational::from(BigInt::one() << m);
    (weight, sum)
}

fn length_f64(code: CodeId, a: usize) -> f64 {
    code_length(code, &SymbolIndex::try_from(a as u64).expect("positive")) as f64
}

/// `Σ P(a) L(a)` in `f64`.
pub fn avg_len_of(code: CodeId, probs: &[f64]) -> f64 {
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| p * length_f64(code, i + 1))
        .sum()
}

/// `avg_len / max(1, H)` in `f64`.
pub fn ratio_of(code: CodeId, probs: &[f64]) -> f64 {
    avg_len_of(code, probs) / entropy_of(probs).max(1.0)
}

/// Average codeword length at `digits` decimal digits.
pub fn avg_len(code: CodeId, d: &Distribution, digits: usize) -> Fixed {
    let bits = frac_bits_for_digits(digits);
    match d {
        Distribution::SpikeUniform { p1, m } => {
            let (weight, sum) = spike_parts(code, p1, *m);
            let first = BigRational::from(BigInt::from(code_length(code, &SymbolIndex::one())));
            let exact = p1 * first + weight * BigRational::from(BigInt::from(sum));
            Fixed::from_rational(&exact, bits)
        }
        _ => Fixed::from_f64(avg_len_of(code, &d.to_probs().expect("listable")), bits),
    }
}

/// Expansion ratio `avg_len / max(1, H)` with its ingredients.
pub fn expansion_ratio(code: CodeId, d: &Distribution, digits: usize) -> RatioReport {
    let bits = frac_bits_for_digits(digits);
    let (avg, h, sum, exact) = match d {
        Distribution::SpikeUniform { p1, m } => {
            let (_, sum) = spike_parts(code, p1, *m);
            let q = BigRational::one() - p1;
            let h = plogp_neg(p1, bits)
                .add(&plogp_neg(&q, bits))
                .add(&Fixed::from_rational(
                    &(q * BigRational::from(BigInt::from(*m))),
                    bits,
                ));
            (avg_len(code, d, digits), h, Some(sum), true)
        }
        _ => {
            let probs = d.to_probs().expect("listable");
            (
                Fixed::from_f64(avg_len_of(code, &probs), bits),
                Fixed::from_f64(entropy_of(&probs), bits),
                None,
                false,
            )
        }
    };
    let ratio = avg.div(&h.clone().max(Fixed::from_int(1, bits)));
    RatioReport {
        code,
        avg_len: avg,
        entropy: h,
        ratio,
        exact_len_sum: sum,
        digits,
        exact,
    }
}

/// Ratio lower bound `2 / (1 + h(1/m))` attained by the spike-uniform
/// family with `p1 = 1 - 1/m`.
pub fn pm_lower_bound(m: u64) -> f64 {
    assert!(m >= 2, "m must be at least 2");
    2.0 / (1.0 + binary_entropy(1.0 / m as f64))
}

/// Seeded decreasing distribution on `support` symbols, drawn from a mix
/// of shapes: flat noise, exponential decay, a spike over a flat tail, and
/// power laws.
pub fn random_decreasing(seed: u64, support: usize) -> Distribution {
    assert!(support >= 1, "support must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<f64> = match rng.gen_range(0..4u8) {
        0 => (0..support).map(|_| rng.gen::<f64>() + 1e-3).collect(),
        1 => {
            let rate = rng.gen_range(0.01..4.0);
            (0..support)
                .map(|i| (-rate * i as f64).exp() * rng.gen_range(0.5..1.0))
                .collect()
        }
        2 => {
            let spike = rng.gen_range(0.3..0.9999);
            let rest = (1.0 - spike) / (support.max(2) - 1) as f64;
            (0..support)
                .map(|i| if i == 0 { spike } else { rest })
                .collect()
        }
        _ => {
            let s = rng.gen_range(0.2..3.0);
            (1..=support).map(|a| (a as f64).powf(-s)).collect()
        }
    };
    w.sort_by(|a, b| b.total_cmp(a));
    let mut probs = normalized(w);
    // absorb rounding so the mass is 1 to the last bit that matters
    let drift: f64 = 1.0 - probs.iter().sum::<f64>();
    probs[0] += drift;
    Distribution::Explicit { probs }
}
