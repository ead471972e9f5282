//! Literal case tables: intervals of `P(1)`, lemma coefficients, bounding
//! recipes, claimed bounds and monotonicity shapes.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::{d_raw, j_raw, log2_c_n, r_raw, xlog2x};
use crate::codes::CodeId;

type Exp = Ratio<i64>;

fn ex(n: i64, d: i64) -> Exp {
    Ratio::new(n, d)
}

/// An exact interval endpoint. Equality is structural on reduced
/// exponents, which is what table contiguity is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    One,
    Decimal(Exp),
    /// `1 - 3^three · 2^two`.
    OneMinus {
        three: Exp,
        two: Exp,
    },
    /// Zero point `x_k` of the analysis.
    Point(u8),
}

impl Endpoint {
    fn dec(n: i64, d: i64) -> Self {
        Endpoint::Decimal(ex(n, d))
    }

    fn one_minus_2(n: i64, d: i64) -> Self {
        Endpoint::OneMinus {
            three: Exp::zero(),
            two: ex(n, d),
        }
    }

    /// Value, resolving zero points through `points(k)`.
    pub fn value_with(&self, points: impl Fn(u8) -> Option<f64>) -> Option<f64> {
        let f = |r: &Exp| r.to_f64().expect("small exponent");
        Some(match self {
            Endpoint::Zero => 0.0,
            Endpoint::One => 1.0,
            Endpoint::Decimal(q) => f(q),
            Endpoint::OneMinus { three, two } => 1.0 - (f(three) * 3f64.log2() + f(two)).exp2(),
            Endpoint::Point(k) => return points(*k),
        })
    }

    /// Value of an endpoint that is not a zero point.
    pub fn value(&self) -> f64 {
        self.value_with(|_| None)
            .expect("endpoint refers to a zero point")
    }
}

fn fmt_exp(q: &Exp) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Zero => f.write_str("0"),
            Endpoint::One => f.write_str("1"),
            Endpoint::Decimal(q) => write!(f, "{}", q.to_f64().unwrap_or(f64::NAN)),
            Endpoint::OneMinus { three, two } if three.is_zero() => {
                write!(f, "1-2^{}", fmt_exp(two))
            }
            Endpoint::OneMinus { three, two } => {
                write!(f, "1-3^{}*2^{}", fmt_exp(three), fmt_exp(two))
            }
            Endpoint::Point(k) => write!(f, "x{k}"),
        }
    }
}

/// The `c2` coefficient: an integer or `log₂3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coef {
    Int(u32),
    Log2Three,
}

impl Coef {
    pub fn value(self) -> f64 {
        match self {
            Coef::Int(n) => n as f64,
            Coef::Log2Three => 3f64.log2(),
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Int(n) => write!(f, "{n}"),
            Coef::Log2Three => f.write_str("log2(3)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2Choice {
    Zero,
    P1,
    OneMinusP1,
}

impl fmt::Display for P2Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            P2Choice::Zero => "0",
            P2Choice::P1 => "x",
            P2Choice::OneMinusP1 => "1-x",
        })
    }
}

/// A bounding function of `x = P(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recipe {
    /// `Q(x, p2, L) + D(x)` with coefficients `(c1, c2)`.
    QPlusD {
        c1: u32,
        c2: Coef,
        l: u64,
        p2: P2Choice,
    },
    /// `k (1 + log₂¾) + x (1 + k log₂x - k log₂¾)`.
    Linear { k: Exp },
}

impl Recipe {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Recipe::QPlusD { c1, c2, l, p2 } => {
                let (c1, c2) = (c1 as f64, c2.value());
                let p2 = match p2 {
                    P2Choice::Zero => 0.0,
                    P2Choice::P1 => x,
                    P2Choice::OneMinusP1 => 1.0 - x,
                };
                j_raw(c1, c2, x, l) + p2 * r_raw(c1, c2, x, l) + d_raw(c1, c2, x)
            }
            Recipe::Linear { k } => {
                let k = k.to_f64().expect("small ratio");
                let l34 = log2_c_n(2);
                k * (1.0 + l34) + x + k * xlog2x(x) - x * k * l34
            }
        }
    }

    /// `R(x)` of the underlying coefficients; `None` for linear recipes.
    pub fn r(&self, x: f64) -> Option<f64> {
        match *self {
            Recipe::QPlusD { c1, c2, l, .. } => Some(r_raw(c1 as f64, c2.value(), x, l)),
            Recipe::Linear { .. } => None,
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::QPlusD {
                c1,
                c2,
                l,
                p2: P2Choice::Zero,
            } => {
                write!(f, "J({c1},{c2})(x,{l})+D")
            }
            Recipe::QPlusD { c1, c2, l, p2 } => write!(f, "Q({c1},{c2})(x,{p2},{l})+D"),
            Recipe::Linear { k } => write!(f, "linear k={k}"),
        }
    }
}

/// Claimed monotonicity of a recipe over its case interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Increasing,
    Decreasing,
    DecreasingThenIncreasing,
    /// Maximum at the given zero point.
    IncreasingThenDecreasing(u8),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Increasing => f.write_str("increasing"),
            Shape::Decreasing => f.write_str("decreasing"),
            Shape::DecreasingThenIncreasing => f.write_str("dec-inc"),
            Shape::IncreasingThenDecreasing(k) => write!(f, "inc-dec (max x{k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// The recipe value at the witness is strictly below the bound.
    Below,
    /// The recipe value at the witness equals the bound.
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Below => "<",
            Relation::Equal => "=",
        })
    }
}

/// Where the maximum of a case's recipe is attained, and how it compares
/// with the claimed bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub at: Endpoint,
    pub relation: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSpec {
    pub code: CodeId,
    pub label: &'static str,
    /// Open lower end of the `P(1)` interval.
    pub lo: Endpoint,
    /// Closed upper end, open when it is 1.
    pub hi: Endpoint,
    /// 1-based clause of the length lemma supplying the coefficients.
    pub clause: usize,
    pub recipe_name: &'static str,
    pub recipe: Recipe,
    pub claimed: f64,
    pub witness: Witness,
    /// `None` where the analysis defers to another case without stating a
    /// shape.
    pub shape: Option<Shape>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    /// Root of `R` with coefficients `(c1, c2)` and parameter `L`.
    Root { c1: u32, c2: Coef, l: u64 },
    /// Interior maximum of a case recipe; names the case label.
    Argmax { case: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroPoint {
    pub index: u8,
    pub code: CodeId,
    pub function: &'static str,
    pub kind: ZeroKind,
    pub lo: Endpoint,
    pub hi: Endpoint,
    /// Five-digit published value.
    pub published_value: &'static str,
}

impl ZeroPoint {
    pub fn name(&self) -> String {
        format!("x{}", self.index)
    }
}

/// Upper bound on a codeword length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthBound {
    G {
        c1: u32,
        c2: Coef,
    },
    /// `offset + slope · log₂a`, valid for every `P(1)`.
    Linear {
        offset: Exp,
        slope: Exp,
    },
}

impl fmt::Display for LengthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthBound::G { c1, c2 } => write!(f, "g({c1},{c2})"),
            LengthBound::Linear { offset, slope } => write!(f, "{offset} + {slope}*log2(a)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaClause {
    pub code: CodeId,
    pub index: usize,
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub bound: LengthBound,
}

fn q(c1: u32, c2: u32, l: u64, p2: P2Choice) -> Recipe {
    Recipe::QPlusD {
        c1,
        c2: Coef::Int(c2),
        l,
        p2,
    }
}

fn below(at: Endpoint) -> Witness {
    Witness {
        at,
        relation: Relation::Below,
    }
}

fn equal(at: Endpoint) -> Witness {
    Witness {
        at,
        relation: Relation::Equal,
    }
}

const F1: Recipe = Recipe::QPlusD {
    c1: 5,
    c2: Coef::Log2Three,
    l: 2,
    p2: P2Choice::P1,
};

/// Case analysis of `code` (Δδ or ν), ordered by interval.
pub fn case_table(code: CodeId) -> Option<Vec<CaseSpec>> {
    use Endpoint as E;
    use P2Choice::{OneMinusP1 as Omx, Zero as Z, P1};
    use Shape::*;
    let row = |label, lo, hi, clause, recipe_name, recipe, claimed, witness, shape| CaseSpec {
        code,
        label,
        lo,
        hi,
        clause,
        recipe_name,
        recipe,
        claimed,
        witness,
        shape,
    };
    let half = E::dec(1, 2);
    match code {
        CodeId::DeltaDelta => {
            let a1 = E::OneMinus {
                three: ex(8, 3),
                two: ex(-5, 1),
            };
            let a2 = E::one_minus_2(-7, 3);
            let a3 = E::one_minus_2(-21, 5);
            let a4 = E::dec(9772, 10000);
            let a5 = E::one_minus_2(-19, 3);
            let a6 = E::one_minus_2(-145, 17);
            Some(vec![
                row(
                    "1",
                    E::Zero,
                    a1,
                    1,
                    "f1",
                    F1,
                    1.8454,
                    below(E::Zero),
                    Some(DecreasingThenIncreasing),
                ),
                row(
                    "2",
                    a1,
                    half,
                    2,
                    "f2",
                    q(8, 3, 2, P1),
                    2.0,
                    equal(half),
                    Some(Increasing),
                ),
                row(
                    "3",
                    half,
                    a2,
                    2,
                    "f3",
                    q(8, 3, 2, Omx),
                    2.0,
                    equal(half),
                    Some(DecreasingThenIncreasing),
                ),
                row(
                    "4a",
                    a2,
                    E::Point(1),
                    3,
                    "f4",
                    q(14, 7, 4, Omx),
                    2.0217,
                    below(E::Point(1)),
                    Some(DecreasingThenIncreasing),
                ),
                row(
                    "4b",
                    E::Point(1),
                    a3,
                    3,
                    "f5",
                    q(14, 7, 4, Z),
                    2.0375,
                    below(a3),
                    Some(Increasing),
                ),
                row(
                    "5a",
                    a3,
                    E::Point(2),
                    4,
                    "f6",
                    q(24, 15, 7, Omx),
                    2.0797,
                    below(a3),
                    Some(Decreasing),
                ),
                row(
                    "5b",
                    E::Point(2),
                    a4,
                    4,
                    "f7",
                    q(24, 15, 7, Z),
                    2.0819,
                    below(a4),
                    Some(Increasing),
                ),
                row(
                    "6",
                    a4,
                    a5,
                    4,
                    "f8",
                    q(24, 15, 8, Z),
                    2.0821,
                    below(E::Point(3)),
                    Some(IncreasingThenDecreasing(3)),
                ),
                row(
                    "7",
                    a5,
                    a6,
                    5,
                    "f9",
                    q(42, 31, 8, Z),
                    2.0767,
                    below(E::Point(4)),
                    Some(IncreasingThenDecreasing(4)),
                ),
                row(
                    "8",
                    a6,
                    E::One,
                    6,
                    "f10",
                    Recipe::Linear { k: ex(17, 16) },
                    2.0625,
                    equal(E::One),
                    Some(Increasing),
                ),
            ])
        }
        CodeId::Nu => {
            let b1 = E::OneMinus {
                three: ex(6, 1),
                two: ex(-10, 1),
            };
            let b2 = E::one_minus_2(-19, 7);
            let b3 = E::dec(92, 100);
            let b4 = E::one_minus_2(-41, 8);
            let b5 = E::one_minus_2(-65, 11);
            let b6 = E::one_minus_2(-83, 13);
            let b7 = E::one_minus_2(-103, 15);
            let b8 = E::dec(9927, 10000);
            let b9 = E::one_minus_2(-68, 9);
            let b10 = E::one_minus_2(-94, 11);
            let b11 = E::one_minus_2(-833, 65);
            Some(vec![
                row("1", E::Zero, b1, 1, "f1", F1, 1.8454, below(E::Zero), None),
                row(
                    "2",
                    b1,
                    half,
                    2,
                    "f11",
                    q(6, 2, 2, P1),
                    2.0,
                    equal(half),
                    Some(Increasing),
                ),
                row(
                    "3a",
                    half,
                    E::Point(5),
                    3,
                    "f3",
                    q(8, 3, 2, Omx),
                    2.0,
                    equal(half),
                    Some(DecreasingThenIncreasing),
                ),
                row(
                    "3b",
                    E::Point(5),
                    b2,
                    3,
                    "f12",
                    q(8, 3, 2, Z),
                    1.8761,
                    below(b2),
                    Some(Increasing),
                ),
                row(
                    "4",
                    b2,
                    b3,
                    4,
                    "f13",
                    q(15, 8, 4, Omx),
                    1.9999,
                    below(b3),
                    Some(DecreasingThenIncreasing),
                ),
                row(
                    "5a",
                    b3,
                    E::Point(6),
                    4,
                    "f14",
                    q(15, 8, 5, Omx),
                    2.0313,
                    below(b3),
                    Some(Decreasing),
                ),
                row(
                    "5b",
                    E::Point(6),
                    b4,
                    4,
                    "f15",
                    q(15, 8, 5, Z),
                    2.0345,
                    below(E::Point(7)),
                    Some(IncreasingThenDecreasing(7)),
                ),
                row(
                    "6",
                    b4,
                    b5,
                    5,
                    "f16",
                    q(23, 15, 6, Z),
                    2.0380,
                    below(E::Point(8)),
                    Some(IncreasingThenDecreasing(8)),
                ),
                row(
                    "7",
                    b5,
                    b6,
                    6,
                    "f17",
                    q(34, 25, 8, Z),
                    2.0376,
                    below(E::Point(9)),
                    Some(IncreasingThenDecreasing(9)),
                ),
                row(
                    "8a",
                    b6,
                    E::Point(10),
                    7,
                    "f18",
                    q(47, 37, 12, Omx),
                    2.0375,
                    below(b6),
                    Some(Decreasing),
                ),
                row(
                    "8b",
                    E::Point(10),
                    b7,
                    7,
                    "f19",
                    q(47, 37, 12, Z),
                    2.0381,
                    below(E::Point(11)),
                    Some(IncreasingThenDecreasing(11)),
                ),
                row(
                    "9a",
                    b7,
                    E::Point(12),
                    8,
                    "f20",
                    q(62, 51, 15, Omx),
                    2.0386,
                    below(b7),
                    Some(Decreasing),
                ),
                row(
                    "9b",
                    E::Point(12),
                    b8,
                    8,
                    "f21",
                    q(62, 51, 15, Z),
                    2.0386,
                    below(b8),
                    Some(Increasing),
                ),
                row(
                    "10",
                    b8,
                    b9,
                    8,
                    "f22",
                    q(62, 51, 16, Z),
                    2.0386,
                    below(E::Point(13)),
                    Some(IncreasingThenDecreasing(13)),
                ),
                row(
                    "11",
                    b9,
                    b10,
                    9,
                    "f23",
                    q(98, 85, 18, Z),
                    2.0386,
                    below(E::Point(14)),
                    Some(IncreasingThenDecreasing(14)),
                ),
                row(
                    "12",
                    b10,
                    b11,
                    10,
                    "f24",
                    q(142, 127, 18, Z),
                    2.0372,
                    below(b10),
                    Some(Decreasing),
                ),
                row(
                    "13",
                    b11,
                    E::One,
                    11,
                    "f25",
                    Recipe::Linear { k: ex(65, 64) },
                    2.015625,
                    equal(E::One),
                    Some(Increasing),
                ),
            ])
        }
        _ => None,
    }
}

/// Zero points `x1..=x14` in dependency order.
pub fn zero_points() -> Vec<ZeroPoint> {
    use Endpoint as E;
    use ZeroKind::*;
    let dd = CodeId::DeltaDelta;
    let nu = CodeId::Nu;
    let root = |c1, c2, l| Root {
        c1,
        c2: Coef::Int(c2),
        l,
    };
    let zp = |index, code, function, kind, lo, hi, published_value| ZeroPoint {
        index,
        code,
        function,
        kind,
        lo,
        hi,
        published_value,
    };
    vec![
        zp(
            1,
            dd,
            "j1",
            root(14, 7, 4),
            E::one_minus_2(-7, 3),
            E::one_minus_2(-21, 5),
            "0.93507",
        ),
        zp(
            2,
            dd,
            "j2",
            root(24, 15, 7),
            E::one_minus_2(-21, 5),
            E::dec(9765, 10000),
            "0.97202",
        ),
        zp(
            3,
            dd,
            "f8",
            Argmax { case: "6" },
            E::dec(9772, 10000),
            E::one_minus_2(-19, 3),
            "0.98085",
        ),
        zp(
            4,
            dd,
            "f9",
            Argmax { case: "7" },
            E::one_minus_2(-19, 3),
            E::one_minus_2(-145, 17),
            "0.98933",
        ),
        zp(
            5,
            nu,
            "j3",
            root(8, 3, 2),
            E::dec(1, 2),
            E::one_minus_2(-19, 7),
            "0.81876",
        ),
        zp(
            6,
            nu,
            "j4",
            root(15, 8, 5),
            E::dec(92, 100),
            E::one_minus_2(-41, 8),
            "0.95602",
        ),
        zp(
            7,
            nu,
            "f15",
            Argmax { case: "5b" },
            E::Point(6),
            E::one_minus_2(-41, 8),
            "0.96883",
        ),
        zp(
            8,
            nu,
            "f16",
            Argmax { case: "6" },
            E::one_minus_2(-41, 8),
            E::one_minus_2(-65, 11),
            "0.98053",
        ),
        zp(
            9,
            nu,
            "f17",
            Argmax { case: "7" },
            E::one_minus_2(-65, 11),
            E::one_minus_2(-83, 13),
            "0.98735",
        ),
        zp(
            10,
            nu,
            "j5",
            root(47, 37, 12),
            E::one_minus_2(-83, 13),
            E::one_minus_2(-103, 15),
            "0.98876",
        ),
        zp(
            11,
            nu,
            "f19",
            Argmax { case: "8b" },
            E::Point(10),
            E::one_minus_2(-103, 15),
            "0.99114",
        ),
        zp(
            12,
            nu,
            "j6",
            root(62, 51, 15),
            E::one_minus_2(-103, 15),
            E::dec(9927, 10000),
            "0.99195",
        ),
        zp(
            13,
            nu,
            "f22",
            Argmax { case: "10" },
            E::dec(9927, 10000),
            E::one_minus_2(-68, 9),
            "0.99339",
        ),
        zp(
            14,
            nu,
            "f23",
            Argmax { case: "11" },
            E::one_minus_2(-68, 9),
            E::one_minus_2(-94, 11),
            "0.99586",
        ),
    ]
}

/// Clauses of the length lemma for Δδ (6) or ν (11).
pub fn lemma_clauses(code: CodeId) -> Option<Vec<LemmaClause>> {
    use Endpoint as E;
    let g = |c1, c2| LengthBound::G {
        c1,
        c2: Coef::Int(c2),
    };
    let (intervals, linear) = match code {
        CodeId::DeltaDelta => (
            vec![
                (
                    E::Zero,
                    E::OneMinus {
                        three: ex(8, 3),
                        two: ex(-5, 1),
                    },
                    LengthBound::G {
                        c1: 5,
                        c2: Coef::Log2Three,
                    },
                ),
                (
                    E::OneMinus {
                        three: ex(8, 3),
                        two: ex(-5, 1),
                    },
                    E::one_minus_2(-7, 3),
                    g(8, 3),
                ),
                (E::one_minus_2(-7, 3), E::one_minus_2(-21, 5), g(14, 7)),
                (E::one_minus_2(-21, 5), E::one_minus_2(-19, 3), g(24, 15)),
                (E::one_minus_2(-19, 3), E::one_minus_2(-145, 17), g(42, 31)),
            ],
            LengthBound::Linear {
                offset: ex(145, 16),
                slope: ex(17, 16),
            },
        ),
        CodeId::Nu => (
            vec![
                (
                    E::Zero,
                    E::OneMinus {
                        three: ex(6, 1),
                        two: ex(-10, 1),
                    },
                    LengthBound::G {
                        c1: 5,
                        c2: Coef::Log2Three,
                    },
                ),
                (
                    E::OneMinus {
                        three: ex(6, 1),
                        two: ex(-10, 1),
                    },
                    E::dec(1, 2),
                    g(6, 2),
                ),
                (E::dec(1, 2), E::one_minus_2(-19, 7), g(8, 3)),
                (E::one_minus_2(-19, 7), E::one_minus_2(-41, 8), g(15, 8)),
                (E::one_minus_2(-41, 8), E::one_minus_2(-65, 11), g(23, 15)),
                (E::one_minus_2(-65, 11), E::one_minus_2(-83, 13), g(34, 25)),
                (E::one_minus_2(-83, 13), E::one_minus_2(-103, 15), g(47, 37)),
                (E::one_minus_2(-103, 15), E::one_minus_2(-68, 9), g(62, 51)),
                (E::one_minus_2(-68, 9), E::one_minus_2(-94, 11), g(98, 85)),
                (
                    E::one_minus_2(-94, 11),
                    E::one_minus_2(-833, 65),
                    g(142, 127),
                ),
            ],
            LengthBound::Linear {
                offset: ex(833, 64),
                slope: ex(65, 64),
            },
        ),
        _ => return None,
    };
    let mut out: Vec<LemmaClause> = intervals
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi, bound))| LemmaClause {
            code,
            index: i + 1,
            lo,
            hi,
            bound,
        })
        .collect();
    out.push(LemmaClause {
        code,
        index: out.len() + 1,
        lo: E::Zero,
        hi: E::One,
        bound: linear,
    });
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        assert!(
            (Endpoint::OneMinus {
                three: ex(8, 3),
                two: ex(-5, 1)
            }
            .value()
                - 0.41498)
                .abs()
                < 1e-5
        );
        assert!(
            (Endpoint::OneMinus {
                three: ex(6, 1),
                two: ex(-10, 1)
            }
            .value()
                - 0.28809)
                .abs()
                < 1e-5
        );
        assert!((Endpoint::one_minus_2(-19, 7).value() - 0.84762).abs() < 1e-5);
        assert!((Endpoint::one_minus_2(-833, 65).value() - 0.99986).abs() < 1e-5);
        assert_eq!(
            Endpoint::one_minus_2(-42, 10),
            Endpoint::one_minus_2(-21, 5)
        );
        assert_eq!(Endpoint::one_minus_2(-7, 3).to_string(), "1-2^(-7/3)");
        assert_eq!(
            Endpoint::OneMinus {
                three: ex(6, 1),
                two: ex(-10, 1)
            }
            .to_string(),
            "1-3^6*2^-10"
        );
    }

    #[test]
    fn linear_recipe_limits() {
        assert!((Recipe::Linear { k: ex(17, 16) }.eval(1.0) - 2.0625).abs() < 1e-12);
        assert!((Recipe::Linear { k: ex(65, 64) }.eval(1.0) - 2.015625).abs() < 1e-12);
    }

    #[test]
    fn tables_have_expected_sizes() {
        assert_eq!(case_table(CodeId::DeltaDelta).unwrap().len(), 10);
        assert_eq!(case_table(CodeId::Nu).unwrap().len(), 17);
        assert_eq!(lemma_clauses(CodeId::DeltaDelta).unwrap().len(), 6);
        assert_eq!(lemma_clauses(CodeId::Nu).unwrap().len(), 11);
        assert!(case_table(CodeId::Gamma).is_none());
        let zs = zero_points();
        assert!(zs
            .iter()
            .enumerate()
            .all(|(i, z)| z.index as usize == i + 1));
    }

    #[test]
    fn case_numbers_cover_eight_and_thirteen() {
        let distinct = |code| {
            let mut v: Vec<String> = case_table(code)
                .unwrap()
                .iter()
                .map(|c| c.label.trim_end_matches(['a', 'b']).to_string())
                .collect();
            v.dedup();
            v.len()
        };
        assert_eq!(distinct(CodeId::DeltaDelta), 8);
        assert_eq!(distinct(CodeId::Nu), 13);
    }
}
