//! Bit-granular I/O over byte buffers.
//!
//! Bits are packed most-significant-bit first, so a codeword written as
//! `0101` occupies the top nibble of its byte in that left-to-right order.
//! Streams are zero-padded to the next byte boundary; readers never look at
//! padding because the container header carries the element count.

use std::fmt;
use std::io::{self, Read, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitIoError {
    #[error("bit stream exhausted at bit {position}")]
    Exhausted { position: u64 },
    #[error("fixed output buffer of {capacity_bytes} bytes is full")]
    Overflow { capacity_bytes: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBitChar(char),
}

/// A finite, possibly empty, sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// `n` copies of `bit`.
    pub fn repeat(bit: bool, n: usize) -> Self {
        let mut s = Self::with_capacity(n);
        for _ in 0..n {
            s.push(bit);
        }
        s
    }

    /// The low `width` bits of `value`, most significant first. Bits of
    /// `value` above `width` are ignored.
    pub fn from_uint(value: &BigUint, width: usize) -> Self {
        let mut s = Self::with_capacity(width);
        for i in (0..width).rev() {
            s.push(value.bit(i as u64));
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let byte = self.len / 8;
        if byte == self.bytes.len() {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[byte] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn extend(&mut self, other: &BitString) {
        for bit in other.iter() {
            self.push(bit);
        }
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }

    /// Big-endian integer value of the bits.
    pub fn to_uint(&self) -> BigUint {
        let mut v = BigUint::default();
        for bit in self.iter() {
            v <<= 1u32;
            if bit {
                v += 1u32;
            }
        }
        v
    }

    /// Packed bytes, zero-padded in the final byte.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = BitIoError;

    /// Parses `0`/`1` characters; spaces and underscores are skipped so the
    /// grouped form `0001 001` is accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                ' ' | '_' => {}
                other => return Err(BitIoError::InvalidBitChar(other)),
            }
        }
        Ok(out)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut s = BitString::new();
        for bit in iter {
            s.push(bit);
        }
        s
    }
}

/// Appends bits to a byte buffer, optionally bounded.
#[derive(Debug, Default)]
pub struct BitWriter {
    buf: BitString,
    capacity_bytes: Option<usize>,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A writer that refuses to grow past `capacity_bytes` bytes.
    pub fn with_fixed_capacity(capacity_bytes: usize) -> Self {
        Self {
            buf: BitString::with_capacity(capacity_bytes * 8),
            capacity_bytes: Some(capacity_bytes),
        }
    }

    /// Number of bits written so far.
    pub fn position(&self) -> u64 {
        self.buf.len() as u64
    }

    pub fn write_bit(&mut self, bit: bool) -> Result<(), BitIoError> {
        if let Some(cap) = self.capacity_bytes {
            if self.buf.len() >= cap * 8 {
                return Err(BitIoError::Overflow {
                    capacity_bytes: cap,
                });
            }
        }
        self.buf.push(bit);
        Ok(())
    }

    /// Appends all of `bits`. On overflow nothing is written.
    pub fn write_bits(&mut self, bits: &BitString) -> Result<(), BitIoError> {
        if let Some(cap) = self.capacity_bytes {
            if self.buf.len() + bits.len() > cap * 8 {
                return Err(BitIoError::Overflow {
                    capacity_bytes: cap,
                });
            }
        }
        self.buf.extend(bits);
        Ok(())
    }

    pub fn bits(&self) -> &BitString {
        &self.buf
    }

    /// The written bits, zero-padded to a byte boundary.
    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.bytes
    }
}

/// Reads bits from a borrowed byte slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    source: &'a [u8],
    position: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(source: &'a [u8]) -> Self {
        Self {
            source,
            position: 0,
        }
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn total_bits(&self) -> u64 {
        self.source.len() as u64 * 8
    }

    pub fn remaining(&self) -> u64 {
        self.total_bits() - self.position
    }

    pub fn read_bit(&mut self) -> Result<bool, BitIoError> {
        if self.position >= self.total_bits() {
            return Err(BitIoError::Exhausted {
                position: self.position,
            });
        }
        let byte = self.source[(self.position / 8) as usize];
        let bit = byte & (0x80 >> (self.position % 8)) != 0;
        self.position += 1;
        Ok(bit)
    }

    /// Reads `n` bits. On exhaustion the cursor is left where it was.
    pub fn read_bits(&mut self, n: u64) -> Result<BitString, BitIoError> {
        if n > self.remaining() {
            return Err(BitIoError::Exhausted {
                position: self.total_bits(),
            });
        }
        let mut out = BitString::with_capacity(n as usize);
        for _ in 0..n {
            out.push(self.read_bit()?);
        }
        Ok(out)
    }

    /// Reads `n` bits as a big-endian unsigned integer.
    pub fn read_uint(&mut self, n: u64) -> Result<BigUint, BitIoError> {
        Ok(self.read_bits(n)?.to_uint())
    }
}

pub const CONTAINER_MAGIC: [u8; 4] = *b"UCI1";
pub const CONTAINER_HEADER_LEN: usize = 13;

/// Fixed 13-byte header of an encoded integer stream:
/// magic `UCI1`, one code-id byte, element count as little-endian `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub code_id: u8,
    pub count: u64,
}

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("bad magic {0:02x?}, expected \"UCI1\"")]
    BadMagic([u8; 4]),
    #[error("container header truncated")]
    TruncatedHeader,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ContainerHeader {
    pub fn to_bytes(&self) -> [u8; CONTAINER_HEADER_LEN] {
        let mut out = [0u8; CONTAINER_HEADER_LEN];
        out[..4].copy_from_slice(&CONTAINER_MAGIC);
        out[4] = self.code_id;
        out[5..].copy_from_slice(&self.count.to_le_bytes());
        out
    }

    pub fn write_to<W: Write>(&self, mut sink: W) -> io::Result<()> {
        sink.write_all(&self.to_bytes())
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, ContainerError> {
        if bytes.len() < CONTAINER_HEADER_LEN {
            return Err(ContainerError::TruncatedHeader);
        }
        let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
        if magic != CONTAINER_MAGIC {
            return Err(ContainerError::BadMagic(magic));
        }
        let count = u64::from_le_bytes(bytes[5..13].try_into().expect("8 bytes"));
        Ok(Self {
            code_id: bytes[4],
            count,
        })
    }

    pub fn read_from<R: Read>(mut source: R) -> Result<Self, ContainerError> {
        let mut buf = [0u8; CONTAINER_HEADER_LEN];
        source.read_exact(&mut buf).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => ContainerError::TruncatedHeader,
            _ => ContainerError::Io(e),
        })?;
        Self::parse(&buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn concatenation_packs_msb_first() {
        let mut w = BitWriter::new();
        w.write_bits(&bs("1")).unwrap();
        w.write_bits(&bs("010")).unwrap();
        assert_eq!(w.position(), 4);
        assert_eq!(w.bits().to_string(), "1010");
        assert_eq!(w.into_bytes(), vec![0b1010_0000]);
    }

    #[test]
    fn empty_write_is_identity() {
        let mut w = BitWriter::new();
        w.write_bits(&bs("11")).unwrap();
        w.write_bits(&BitString::new()).unwrap();
        assert_eq!(w.position(), 2);
    }

    #[test]
    fn nine_bits_span_two_bytes() {
        let mut w = BitWriter::new();
        w.write_bits(&bs("101010101")).unwrap();
        assert_eq!(w.position(), 9);
        assert_eq!(w.into_bytes(), vec![0b1010_1010, 0b1000_0000]);
    }

    #[test]
    fn fixed_buffer_overflows() {
        let mut w = BitWriter::with_fixed_capacity(1);
        w.write_bits(&bs("1111111")).unwrap();
        assert_eq!(
            w.write_bits(&bs("00")),
            Err(BitIoError::Overflow { capacity_bytes: 1 })
        );
        // nothing partial was written
        assert_eq!(w.position(), 7);
        w.write_bit(false).unwrap();
        assert!(w.write_bit(false).is_err());
    }

    #[test]
    fn read_first_bit() {
        let buf = [0b1000_0000];
        let mut r = BitReader::new(&buf);
        assert!(r.read_bit().unwrap());
        assert_eq!(r.position(), 1);
    }

    #[test]
    fn read_past_end_is_exhausted() {
        let buf = [0xffu8];
        let mut r = BitReader::new(&buf);
        r.read_bits(8).unwrap();
        assert_eq!(r.read_bit(), Err(BitIoError::Exhausted { position: 8 }));
        assert_eq!(r.position(), 8);
    }

    #[test]
    fn read_order() {
        let buf = [0b0100_0000];
        let mut r = BitReader::new(&buf);
        assert!(!r.read_bit().unwrap());
        assert!(r.read_bit().unwrap());
    }

    #[test]
    fn read_bits_does_not_move_on_failure() {
        let buf = [0u8];
        let mut r = BitReader::new(&buf);
        r.read_bits(3).unwrap();
        assert!(r.read_bits(6).is_err());
        assert_eq!(r.position(), 3);
    }

    #[test]
    fn parse_skips_grouping() {
        assert_eq!(bs("0001 001").to_string(), "0001001");
        assert!("012".parse::<BitString>().is_err());
    }

    #[test]
    fn uint_conversions() {
        let v = BigUint::from(5u32);
        assert_eq!(BitString::from_uint(&v, 4).to_string(), "0101");
        assert_eq!(bs("0101").to_uint(), v);
        assert!(BitString::from_uint(&v, 0).is_empty());
    }

    #[test]
    fn prefix_relation() {
        assert!(bs("01").is_prefix_of(&bs("010")));
        assert!(!bs("011").is_prefix_of(&bs("010")));
        assert!(BitString::new().is_prefix_of(&bs("1")));
    }

    #[test]
    fn header_layout() {
        let h = ContainerHeader {
            code_id: 3,
            count: 0x0102,
        };
        let bytes = h.to_bytes();
        assert_eq!(&bytes[..4], b"UCI1");
        assert_eq!(bytes[4], 3);
        assert_eq!(&bytes[5..], &[2, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(ContainerHeader::parse(&bytes).unwrap(), h);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            ContainerHeader::parse(b"UCI0\0\0\0\0\0\0\0\0\0"),
            Err(ContainerError::BadMagic(_))
        ));
        assert!(matches!(
            ContainerHeader::read_from(&b"UCI1\x02"[..]),
            Err(ContainerError::TruncatedHeader)
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn write_then_read_round_trips(chunks in proptest::collection::vec(
                proptest::collection::vec(any::<bool>(), 0..40), 0..20)) {
                let mut w = BitWriter::new();
                let mut last = 0;
                for c in &chunks {
                    w.write_bits(&c.iter().copied().collect()).unwrap();
                    prop_assert!(w.position() >= last);
                    last = w.position();
                }
                let bytes = w.into_bytes();
                let mut r = BitReader::new(&bytes);
                for c in &chunks {
                    let got = r.read_bits(c.len() as u64).unwrap();
                    let want: BitString = c.iter().copied().collect();
                    prop_assert_eq!(got, want);
                }
                // only zero padding remains
                while r.remaining() > 0 {
                    prop_assert!(!r.read_bit().unwrap());
                }
            }
        }
    }
}
