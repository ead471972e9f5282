//! Exact Kraft sums over dyadic rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::codes::{
    block_length, code_length, in_nu_minus_one, in_nu_minus_two, CodeId, SymbolIndex,
};

/// `num / 2^shift`, kept normalized: `num` is odd or `shift == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    shift: u64,
}

impl Dyadic {
    pub fn new(num: BigUint, shift: u64) -> Self {
        let mut d = Self { num, shift };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Self {
            num: BigUint::zero(),
            shift: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            num: BigUint::one(),
            shift: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Self {
        Self {
            num: BigUint::one(),
            shift: k,
        }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.shift = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.shift);
        if tz > 0 {
            self.num >>= tz;
            self.shift -= tz;
        }
    }

    /// Numerators of `self` and `other` over the common denominator.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u64) {
        let shift = self.shift.max(other.shift);
        (
            &self.num << (shift - self.shift),
            &other.num << (shift - other.shift),
            shift,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, shift) = self.aligned(other);
        (a >= b).then(|| Self::new(a - b, shift))
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: u64) -> Self {
        if k >= self.shift {
            Self {
                num: &self.num << (k - self.shift),
                shift: 0,
            }
        } else {
            Self {
                num: self.num.clone(),
                shift: self.shift - k,
            }
        }
    }

    /// `self * n`.
    pub fn mul_uint(&self, n: &BigUint) -> Self {
        Self::new(&self.num * n, self.shift)
    }

    pub fn to_integer(&self) -> Option<BigUint> {
        (self.shift == 0).then(|| self.num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        // keep 64 significant bits so huge numerators and shifts stay finite
        let drop = bits.saturating_sub(64);
        let mantissa = (&self.num >> drop).to_f64().unwrap_or(f64::INFINITY);
        let exp = drop as i64 - self.shift as i64;
        mantissa * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::one() << self.shift
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, shift) = self.aligned(rhs);
        Dyadic::new(a + b, shift)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

/// Panics when the result would be negative.
impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self.checked_sub(rhs).expect("negative dyadic difference")
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({}/2^{})", self.num, self.shift)
    }
}

fn symbol_mass(code: CodeId, a: u64) -> Dyadic {
    Dyadic::pow2_neg(code_length(
        code,
        &SymbolIndex::try_from(a).expect("non-zero"),
    ))
}

/// Largest block index whose unary masses are computed exactly; beyond it
/// denominators need more than 2^25 bits.
pub const ALPHA_MAX_BLOCK: u64 = 24;

/// `Σ 2^-L(a)` over block `t`, the symbols `2^t ..= 2^(t+1) - 1`.
///
/// Panics for α when `t > ALPHA_MAX_BLOCK`.
pub fn kraft_block(code: CodeId, t: u64) -> Dyadic {
    match code {
        CodeId::Alpha => {
            assert!(
                t <= ALPHA_MAX_BLOCK,
                "unary block {t} too large for exact mass"
            );
            // Σ_{a=A}^{B} 2^-a = 2^(1-A) - 2^-B
            let lo = 1u64 << t;
            let hi = (1u64 << (t + 1)) - 1;
            &Dyadic::pow2_neg(lo - 1) - &Dyadic::pow2_neg(hi)
        }
        CodeId::DeltaDelta | CodeId::Nu if t <= 2 => {
            let mut s = Dyadic::zero();
            for a in (1u64 << t)..(1u64 << (t + 1)) {
                s += symbol_mass(code, a);
            }
            s
        }
        _ => {
            let len = block_length(code, t).expect("uniform block");
            Dyadic::pow2_neg(len - t)
        }
    }
}

/// Exact `Σ_{t>T} kraft_block(δ, t)`.
///
/// Blocks with `⌊log₂(1+t)⌋ = s` number `2^s` and each carries
/// `2^(-1-2s)`, so every such level sums to `2^(-1-s)`.
pub fn delta_tail(after_block: u64) -> Dyadic {
    let t = after_block;
    let s = (t + 1).ilog2() as u64;
    let in_level = (BigUint::one() << (s + 1)) - 2u32 - t;
    Dyadic::pow2_neg(1 + 2 * s).mul_uint(&in_level) + Dyadic::pow2_neg(1 + s)
}

/// Exact `Σ_{t>T} kraft_block(code, t)`. `None` for β, whose mass
/// diverges, and for α past [`ALPHA_MAX_BLOCK`].
pub fn kraft_tail(code: CodeId, after_block: u64) -> Option<Dyadic> {
    let t = after_block;
    match code {
        CodeId::Beta => None,
        CodeId::Alpha if t > ALPHA_MAX_BLOCK => None,
        CodeId::Alpha => Some(Dyadic::pow2_neg((1u64 << (t + 1)) - 1)),
        CodeId::Gamma => Some(Dyadic::pow2_neg(t + 1)),
        CodeId::Delta => Some(delta_tail(t)),
        CodeId::DeltaDelta | CodeId::Nu => {
            // past its last exchanged block the code carries δ's mass
            let last = if code == CodeId::Nu {
                NU_LAST_ADJUSTED_BLOCK
            } else {
                2
            };
            let k = t.max(last);
            let mut s = delta_tail(k);
            for b in t + 1..=k {
                s += kraft_block(code, b);
            }
            Some(s)
        }
    }
}

/// Exact `Σ_{a=1}^{a_max} 2^-L(a)`.
pub fn kraft_prefix_sum(code: CodeId, a_max: &SymbolIndex) -> Dyadic {
    if code == CodeId::Alpha {
        let n = a_max.to_u64().expect("unary prefix sum beyond u64");
        return &Dyadic::one() - &Dyadic::pow2_neg(n);
    }
    let t = a_max.block();
    let mut s = Dyadic::zero();
    for b in 0..t {
        s += kraft_block(code, b);
    }
    match a_max.to_u64() {
        Some(n) if t <= 2 => {
            for a in (1u64 << t)..=n {
                s += symbol_mass(code, a);
            }
        }
        _ => {
            let count = a_max.value() - (BigUint::one() << t) + 1u32;
            s += Dyadic::pow2_neg(code_length(code, a_max)).mul_uint(&count);
        }
    }
    s
}

/// Blocks whose ν length differs from δ.
pub fn nu_adjusted_blocks() -> impl Iterator<Item = u64> {
    (3..=NU_LAST_ADJUSTED_BLOCK).filter(|&t| in_nu_minus_one(t) || in_nu_minus_two(t))
}

/// Beyond this block ν and δ lengths agree.
pub const NU_LAST_ADJUSTED_BLOCK: u64 = 84;

/// Outcome of the exact ν Kraft identity checks.
#[derive(Debug, Clone)]
pub struct NuIdentityReport {
    /// δ mass of symbols `2..=7` and of the ν-adjusted blocks.
    pub lhs: Dyadic,
    /// ν mass of the same symbols.
    pub rhs: Dyadic,
    pub expected: Dyadic,
    /// ν mass through the last adjusted block plus the exact δ tail.
    pub nu_total: Dyadic,
    /// `(T, Σ_{t<=T} kraft_block(δ, t), delta_tail(T))` for `T = 0..=50`.
    pub delta_partials: Vec<(u64, Dyadic, Dyadic)>,
    pub failures: Vec<String>,
}

impl NuIdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn exchanged_mass(code: CodeId) -> Dyadic {
    let mut s = Dyadic::zero();
    for a in 2..=7 {
        s += symbol_mass(code, a);
    }
    for t in nu_adjusted_blocks() {
        s += kraft_block(code, t);
    }
    s
}

pub fn verify_nu_identity() -> NuIdentityReport {
    let expected = Dyadic::new(BigUint::from(1187u32), 12);
    let lhs = exchanged_mass(CodeId::Delta);
    let rhs = exchanged_mass(CodeId::Nu);
    let mut failures = Vec::new();
    if lhs != expected {
        failures.push(format!("delta side is {lhs}, expected {expected}"));
    }
    if rhs != expected {
        failures.push(format!("nu side is {rhs}, expected {expected}"));
    }

    let mut nu_total = Dyadic::zero();
    for t in 0..=NU_LAST_ADJUSTED_BLOCK {
        nu_total += kraft_block(CodeId::Nu, t);
        if nu_total >= Dyadic::one() {
            failures.push(format!(
                "nu partial sum through block {t} reaches 1: {nu_total}"
            ));
            break;
        }
    }
    nu_total += delta_tail(NU_LAST_ADJUSTED_BLOCK);
    if nu_total != Dyadic::one() {
        failures.push(format!("nu total is {nu_total}, expected 1"));
    }

    let mut delta_partials = Vec::with_capacity(51);
    let mut running = Dyadic::zero();
    let mut previous: Option<Dyadic> = None;
    for t in 0..=50 {
        running += kraft_block(CodeId::Delta, t);
        let tail = delta_tail(t);
        if &running + &tail != Dyadic::one() {
            failures.push(format!(
                "delta partial sum through block {t} plus tail is not 1"
            ));
        }
        if running >= Dyadic::one() || previous.as_ref().is_some_and(|p| *p >= running) {
            failures.push(format!(
                "delta partial sum through block {t} is not strictly increasing below 1"
            ));
        }
        previous = Some(running.clone());
        delta_partials.push((t, running.clone(), tail));
    }

    NuIdentityReport {
        lhs,
        rhs,
        expected,
        nu_total,
        delta_partials,
        failures,
    }
}
