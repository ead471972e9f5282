//! Length functions, encoders and decoders for the unary (α), binary (β),
//! Elias γ and δ codes, the Δδ variant of δ, and a canonical prefix code
//! realizing the ν length function.
//!
//! Every length is computed from the dyadic block index `t = ⌊log₂ a⌋`,
//! taken exactly as `bits(a) - 1`.

mod elias;
mod nu;
mod stream;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bitio::{BitIoError, BitReader, BitString, ContainerError};

pub use nu::canonical_layout;
pub use stream::{decode_stream, encode_stream};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("symbols start at 1; got 0")]
    ZeroSymbol,
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(String),
    #[error("codeword truncated at bit {position}")]
    Truncated { position: u64 },
    #[error("{0} is not a prefix code and cannot be decoded")]
    NotPrefixFree(CodeId),
    #[error("length field of {bits} bits does not fit a machine word")]
    LengthOverflow { bits: u64 },
    #[error("unknown code id byte {0}")]
    UnknownCodeId(u8),
    #[error("unknown code name {0:?}")]
    UnknownCodeName(String),
    #[error("payload truncated after {decoded} of {expected} symbols")]
    TruncatedPayload { decoded: u64, expected: u64 },
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<BitIoError> for CodeError {
    fn from(e: BitIoError) -> Self {
        match e {
            BitIoError::Exhausted { position } => CodeError::Truncated { position },
            BitIoError::Overflow { .. } | BitIoError::InvalidBitChar(_) => {
                CodeError::Io(std::io::Error::other(e.to_string()))
            }
        }
    }
}

/// Selects one of the supported codes. The discriminant is the container
/// code-id byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum CodeId {
    Alpha = 0,
    Beta = 1,
    Gamma = 2,
    Delta = 3,
    DeltaDelta = 4,
    Nu = 5,
}

impl CodeId {
    pub const ALL: [CodeId; 6] = [
        CodeId::Alpha,
        CodeId::Beta,
        CodeId::Gamma,
        CodeId::Delta,
        CodeId::DeltaDelta,
        CodeId::Nu,
    ];

    /// The prefix codes whose lengths grow logarithmically.
    pub const UNIVERSAL: [CodeId; 4] =
        [CodeId::Gamma, CodeId::Delta, CodeId::DeltaDelta, CodeId::Nu];

    pub fn to_byte(self) -> u8 {
        self as u8
    }

    pub fn from_byte(b: u8) -> Result<Self, CodeError> {
        Self::ALL
            .get(b as usize)
            .copied()
            .ok_or(CodeError::UnknownCodeId(b))
    }

    pub fn name(self) -> &'static str {
        match self {
            CodeId::Alpha => "alpha",
            CodeId::Beta => "beta",
            CodeId::Gamma => "gamma",
            CodeId::Delta => "delta",
            CodeId::DeltaDelta => "delta_delta",
            CodeId::Nu => "nu",
        }
    }

    pub fn is_prefix_free(self) -> bool {
        self != CodeId::Beta
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeId {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "alpha" | "unary" => Ok(CodeId::Alpha),
            "beta" | "binary" => Ok(CodeId::Beta),
            "gamma" => Ok(CodeId::Gamma),
            "delta" => Ok(CodeId::Delta),
            "delta_delta" | "deltadelta" | "dd" => Ok(CodeId::DeltaDelta),
            "nu" => Ok(CodeId::Nu),
            _ => Err(CodeError::UnknownCodeName(s.to_string())),
        }
    }
}

/// A source symbol: an arbitrary-precision integer `>= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolIndex(BigUint);

impl SymbolIndex {
    pub fn new(value: BigUint) -> Result<Self, CodeError> {
        if value.is_zero() {
            Err(CodeError::ZeroSymbol)
        } else {
            Ok(Self(value))
        }
    }

    pub fn one() -> Self {
        Self(BigUint::one())
    }

    /// `2^t`, the first symbol of block `t`.
    pub fn pow2(t: u64) -> Self {
        Self(BigUint::one() << t)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    /// `⌊log₂ a⌋`.
    pub fn block(&self) -> u64 {
        self.0.bits() - 1
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<std::num::NonZeroU64> for SymbolIndex {
    fn from(n: std::num::NonZeroU64) -> Self {
        Self(BigUint::from(n.get()))
    }
}

impl TryFrom<u64> for SymbolIndex {
    type Error = CodeError;

    fn try_from(n: u64) -> Result<Self, Self::Error> {
        Self::new(BigUint::from(n))
    }
}

impl FromStr for SymbolIndex {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: BigUint = s
            .trim()
            .parse()
            .map_err(|_| CodeError::InvalidSymbol(s.to_string()))?;
        Self::new(v)
    }
}

impl fmt::Display for SymbolIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for SymbolIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolIndex({})", self.0)
    }
}

pub(crate) fn floor_log2(x: u64) -> u64 {
    debug_assert!(x > 0);
    63 - x.leading_zeros() as u64
}

/// `1 + t + 2⌊log₂(1+t)⌋`, the δ length of every symbol in block `t`.
pub fn delta_block_length(t: u64) -> u64 {
    1 + t + 2 * floor_log2(1 + t)
}

/// Blocks shortened by one bit in the ν code.
pub fn in_nu_minus_one(t: u64) -> bool {
    matches!(t, 7 | 15..=24 | 37..=50 | 68..=84)
}

/// Blocks shortened by two bits in the ν code.
pub fn in_nu_minus_two(t: u64) -> bool {
    matches!(t, 31..=36 | 63..=67)
}

/// The ν adjustment shared by every symbol of block `t >= 3`.
pub fn nu_block_adjust(t: u64) -> i8 {
    if in_nu_minus_one(t) {
        -1
    } else if in_nu_minus_two(t) {
        -2
    } else {
        0
    }
}

/// `Δ(a)`: the amount the ν length differs from the δ length.
pub fn nu_delta(a: &SymbolIndex) -> i8 {
    match a.to_u64() {
        Some(6 | 7) => 2,
        Some(3..=5) => 1,
        Some(2) => -1,
        _ => nu_block_adjust(a.block()),
    }
}

fn delta_delta_small_length(a: u64) -> Option<u64> {
    match a {
        2 => Some(3),
        3 => Some(5),
        6 | 7 => Some(6),
        _ => None,
    }
}

/// Codeword length in bits.
///
/// # Panics
///
/// For [`CodeId::Alpha`] when `a` does not fit in a `u64`.
pub fn code_length(code: CodeId, a: &SymbolIndex) -> u64 {
    let t = a.block();
    match code {
        CodeId::Alpha => a.to_u64().expect("unary codeword length exceeds u64"),
        CodeId::Beta => 1 + t,
        CodeId::Gamma => 1 + 2 * t,
        CodeId::Delta => delta_block_length(t),
        CodeId::DeltaDelta => a
            .to_u64()
            .and_then(delta_delta_small_length)
            .unwrap_or_else(|| delta_block_length(t)),
        CodeId::Nu => {
            let len = delta_block_length(t) as i64 + nu_delta(a) as i64;
            len as u64
        }
    }
}

/// The common length of all symbols in block `t`, if the block is uniform.
///
/// Blocks 1 and 2 of Δδ and ν mix lengths; unary blocks beyond 0 always do.
pub fn block_length(code: CodeId, t: u64) -> Option<u64> {
    match code {
        CodeId::Alpha => (t == 0).then_some(1),
        CodeId::DeltaDelta | CodeId::Nu if (1..=2).contains(&t) => None,
        _ => Some(code_length(code, &SymbolIndex::pow2(t))),
    }
}

/// Length layout of a ν block `t >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLength {
    pub t: u64,
    /// `2^t` symbols.
    pub count: BigUint,
    pub base_len: u64,
    pub adj: i8,
    pub final_len: u64,
}

impl BlockLength {
    /// # Panics
    ///
    /// If `t < 3`; smaller blocks are not uniform.
    pub fn nu(t: u64) -> Self {
        assert!(t >= 3, "nu block {t} is not uniform");
        let base_len = delta_block_length(t);
        let adj = nu_block_adjust(t);
        Self {
            t,
            count: BigUint::one() << t,
            base_len,
            adj,
            final_len: (base_len as i64 + adj as i64) as u64,
        }
    }
}

pub fn encode(code: CodeId, a: &SymbolIndex) -> BitString {
    match code {
        CodeId::Alpha => elias::encode_alpha(a),
        CodeId::Beta => elias::encode_beta(a),
        CodeId::Gamma => elias::encode_gamma(a),
        CodeId::Delta => elias::encode_delta(a),
        CodeId::DeltaDelta => elias::encode_delta_delta(a),
        CodeId::Nu => nu::encode_nu(a),
    }
}

/// Decodes one codeword starting at the reader's position.
pub fn decode(code: CodeId, reader: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    match code {
        CodeId::Alpha => elias::decode_alpha(reader),
        CodeId::Beta => Err(CodeError::NotPrefixFree(CodeId::Beta)),
        CodeId::Gamma => elias::decode_gamma(reader),
        CodeId::Delta => elias::decode_delta(reader),
        CodeId::DeltaDelta => elias::decode_delta_delta(reader),
        CodeId::Nu => nu::decode_nu(reader),
    }
}
