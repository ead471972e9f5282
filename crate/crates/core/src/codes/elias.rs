use num_bigint::BigUint;
use num_traits::One;

use super::{CodeError, SymbolIndex};
use crate::bitio::{BitReader, BitString};

/// `a - 1` zeros then a one.
pub(super) fn encode_alpha(a: &SymbolIndex) -> BitString {
    let n = a.to_u64().expect("unary codeword length exceeds u64") as usize;
    let mut s = BitString::repeat(false, n - 1);
    s.push(true);
    s
}

pub(super) fn encode_beta(a: &SymbolIndex) -> BitString {
    BitString::from_uint(a.value(), a.block() as usize + 1)
}

/// `β(a)` without its leading one.
fn mantissa(a: &SymbolIndex) -> BitString {
    BitString::from_uint(a.value(), a.block() as usize)
}

pub(super) fn encode_gamma(a: &SymbolIndex) -> BitString {
    let t = a.block() as usize;
    let mut s = BitString::repeat(false, t);
    s.push(true);
    s.extend(&mantissa(a));
    s
}

pub(super) fn encode_delta(a: &SymbolIndex) -> BitString {
    let width = SymbolIndex::try_from(a.block() + 1).expect("non-zero");
    let mut s = encode_gamma(&width);
    s.extend(&mantissa(a));
    s
}

pub(super) fn encode_delta_delta(a: &SymbolIndex) -> BitString {
    let bits = |s: &str| s.parse::<BitString>().expect("literal");
    match a.to_u64() {
        Some(2) => bits("010"),
        Some(3) => bits("01111"),
        Some(6) => bits("011100"),
        Some(7) => bits("011101"),
        _ => encode_delta(a),
    }
}

pub(super) fn decode_alpha(r: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    let mut n: u64 = 1;
    while !r.read_bit()? {
        n += 1;
    }
    SymbolIndex::try_from(n)
}

/// Leading-zero count of a γ codeword, consuming the terminating one.
fn read_unary_zeros(r: &mut BitReader<'_>) -> Result<u64, CodeError> {
    let mut zeros = 0;
    while !r.read_bit()? {
        zeros += 1;
    }
    Ok(zeros)
}

/// Reads `t` mantissa bits and restores the implicit leading one.
fn read_with_leading_one(r: &mut BitReader<'_>, t: u64) -> Result<SymbolIndex, CodeError> {
    let low = r.read_uint(t)?;
    SymbolIndex::new((BigUint::one() << t) | low)
}

pub(super) fn decode_gamma(r: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    let t = read_unary_zeros(r)?;
    read_with_leading_one(r, t)
}

/// The `m = 1 + ⌊log₂ a⌋` length field shared by δ and Δδ.
fn read_delta_width(r: &mut BitReader<'_>) -> Result<u64, CodeError> {
    let m = decode_gamma(r)?;
    m.to_u64().ok_or(CodeError::LengthOverflow {
        bits: m.value().bits(),
    })
}

pub(super) fn decode_delta(r: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    let m = read_delta_width(r)?;
    read_with_leading_one(r, m - 1)
}

pub(super) fn decode_delta_delta(r: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    let a = match read_delta_width(r)? {
        1 => 1,
        2 => 2,
        3 => match (r.read_bit()?, r.read_bit()?) {
            (false, false) => 4,
            (false, true) => 5,
            (true, true) => 3,
            (true, false) => {
                if r.read_bit()? {
                    7
                } else {
                    6
                }
            }
        },
        m => return read_with_leading_one(r, m - 1),
    };
    SymbolIndex::try_from(a)
}
