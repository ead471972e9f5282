//! Canonical prefix code over the ν length multiset.
//!
//! Symbols are ordered by `(length, symbol)`. The first code value of each
//! length follows the usual canonical recurrence
//! `first(l + 1) = 2 * (first(l) + count(l))`, starting from `first(1) = 0`,
//! and a symbol's codeword is `first(L(a)) + rank(a)` written in `L(a)` bits.
//! Because the ν Kraft sum is exactly one, `first(l) + count(l) <= 2^l`
//! holds at every length.
//!
//! Only finitely many symbols share a length: symbols `1..=7` carry their
//! own lengths, and from `t = 3` on every block `t` is uniform with lengths
//! strictly increasing in `t`. The layout table is therefore built one
//! length at a time, with a cursor over the blocks.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{code_length, BlockLength, CodeError, CodeId, SymbolIndex};
use crate::bitio::{BitReader, BitString};

const SMALL_SYMBOLS: u64 = 7;

#[derive(Debug, Clone)]
struct LengthClass {
    first: BigUint,
    count: BigUint,
    /// Symbols below 8 with this length, ascending.
    small: Vec<u64>,
    /// The block whose symbols all have this length.
    block: Option<u64>,
}

#[derive(Debug)]
struct Layout {
    /// Indexed by codeword length; entry 0 is an empty sentinel.
    classes: Vec<LengthClass>,
    next_block: u64,
}

impl Layout {
    fn new() -> Self {
        Self {
            classes: vec![LengthClass {
                first: BigUint::zero(),
                count: BigUint::zero(),
                small: Vec::new(),
                block: None,
            }],
            next_block: 3,
        }
    }

    fn max_len(&self) -> usize {
        self.classes.len() - 1
    }

    fn extend_to(&mut self, len: usize) {
        while self.classes.len() <= len {
            let l = self.classes.len() as u64;
            let prev = self.classes.last().expect("sentinel");
            let first = (&prev.first + &prev.count) << 1u32;

            let small: Vec<u64> = (1..=SMALL_SYMBOLS)
                .filter(|&a| small_length(a) == l)
                .collect();
            let mut count = BigUint::from(small.len());
            let mut block = None;
            let next = BlockLength::nu(self.next_block);
            debug_assert!(next.final_len >= l, "block {} skipped", next.t);
            if next.final_len == l {
                count += next.count;
                block = Some(next.t);
                self.next_block += 1;
            }
            self.classes.push(LengthClass {
                first,
                count,
                small,
                block,
            });
        }
    }
}

fn small_length(a: u64) -> u64 {
    code_length(CodeId::Nu, &SymbolIndex::try_from(a).expect("non-zero"))
}

fn layout() -> &'static RwLock<Layout> {
    static LAYOUT: OnceLock<RwLock<Layout>> = OnceLock::new();
    LAYOUT.get_or_init(|| RwLock::new(Layout::new()))
}

/// Runs `f` on the class of length `len`, growing the shared table first if
/// needed.
fn with_class<R>(len: usize, f: impl FnOnce(&LengthClass) -> R) -> R {
    {
        let table = layout().read().expect("nu layout lock poisoned");
        if table.max_len() >= len {
            return f(&table.classes[len]);
        }
    }
    let mut table = layout().write().expect("nu layout lock poisoned");
    table.extend_to(len);
    f(&table.classes[len])
}

/// `(first code value, symbol count)` of codeword length `len >= 1`.
///
/// Lengths no symbol uses have count zero; their first value is where the
/// next codeword of that length would go.
pub fn canonical_layout(len: u64) -> (BigUint, BigUint) {
    assert!(len >= 1, "codeword lengths start at 1");
    with_class(len as usize, |c| (c.first.clone(), c.count.clone()))
}

pub(super) fn encode_nu(a: &SymbolIndex) -> BitString {
    let len = code_length(CodeId::Nu, a) as usize;
    let value = with_class(len, |c| match a.to_u64() {
        Some(s) if s <= SMALL_SYMBOLS => {
            let rank = c
                .small
                .iter()
                .position(|&x| x == s)
                .expect("small symbol listed at its length");
            &c.first + rank
        }
        _ => {
            debug_assert_eq!(c.block, Some(a.block()));
            let offset = a.value() - (BigUint::one() << a.block());
            &c.first + c.small.len() + offset
        }
    });
    BitString::from_uint(&value, len)
}

pub(super) fn decode_nu(r: &mut BitReader<'_>) -> Result<SymbolIndex, CodeError> {
    let mut value = BigUint::zero();
    let mut len = 0usize;
    loop {
        value <<= 1u32;
        if r.read_bit()? {
            value += 1u32;
        }
        len += 1;
        let hit = with_class(len, |c| {
            if c.count.is_zero() || value < c.first {
                return None;
            }
            let rank = &value - &c.first;
            if rank >= c.count {
                return None;
            }
            let symbol = match rank.to_usize() {
                Some(i) if i < c.small.len() => BigUint::from(c.small[i]),
                _ => {
                    let t = c.block.expect("rank beyond small symbols implies a block");
                    (BigUint::one() << t) + (rank - c.small.len())
                }
            };
            Some(symbol)
        });
        if let Some(symbol) = hit {
            return SymbolIndex::new(symbol);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{decode, encode};
    use super::*;
    use crate::kraft::{kraft_prefix_sum, Dyadic};

    fn sym(n: u64) -> SymbolIndex {
        SymbolIndex::try_from(n).unwrap()
    }

    /// Counts symbols of length `l` by scanning all blocks `t < l`, without
    /// the table's block cursor.
    fn count_by_enumeration(l: u64) -> BigUint {
        let mut count = BigUint::from((1..=7).filter(|&a| small_length(a) == l).count());
        for t in 3..l {
            if BlockLength::nu(t).final_len == l {
                count += BigUint::one() << t;
            }
        }
        count
    }

    #[test]
    fn layout_examples() {
        assert_eq!(canonical_layout(1), (BigUint::zero(), BigUint::one()));
        assert_eq!(canonical_layout(2).1, BigUint::zero());
        assert_eq!(canonical_layout(3).1, BigUint::one());
        assert_eq!(encode(CodeId::Nu, &sym(1)).to_string(), "0");
        assert_eq!(encode(CodeId::Nu, &sym(2)).to_string(), "100");
    }

    #[test]
    fn first_symbols_codewords() {
        // lengths 1,3,5,6,6,7,7 then block 3 at length 8
        let got: Vec<String> = (1..=9)
            .map(|a| encode(CodeId::Nu, &sym(a)).to_string())
            .collect();
        assert_eq!(
            got,
            vec![
                "0", "100", "10100", "101010", "101011", "1011000", "1011001", "10110100",
                "10110101"
            ]
        );
    }

    #[test]
    fn counts_match_enumeration_and_fit() {
        for l in 1..=260u64 {
            let (first, count) = canonical_layout(l);
            assert_eq!(count, count_by_enumeration(l), "l={l}");
            assert!(&first + &count <= BigUint::one() << l, "l={l}");
        }
    }

    #[test]
    fn codeword_equals_scaled_kraft_prefix() {
        // lengths are non-decreasing in a, so the canonical value of a is
        // 2^L(a) times the Kraft mass of all smaller symbols
        for a in (2u64..3000).chain([1 << 20, (1 << 31) + 5, (1 << 40) - 1]) {
            let s = sym(a);
            let len = code_length(CodeId::Nu, &s);
            let mass = kraft_prefix_sum(CodeId::Nu, &sym(a - 1));
            let want = mass.mul_pow2(len);
            let want = want.to_integer().expect("integral");
            assert_eq!(encode(CodeId::Nu, &s).to_uint(), want, "a={a}");
        }
        assert_eq!(kraft_prefix_sum(CodeId::Nu, &sym(1)), Dyadic::pow2_neg(1));
    }

    #[test]
    fn decode_consumes_exactly_one_codeword() {
        let mut bits = encode(CodeId::Nu, &sym(300));
        bits.extend(&encode(CodeId::Nu, &sym(5)));
        let bytes = bits.as_bytes().to_vec();
        let mut r = BitReader::new(&bytes);
        assert_eq!(decode(CodeId::Nu, &mut r).unwrap(), sym(300));
        assert_eq!(r.position(), code_length(CodeId::Nu, &sym(300)));
        assert_eq!(decode(CodeId::Nu, &mut r).unwrap(), sym(5));
    }

    #[test]
    fn all_ones_never_completes() {
        let bytes = [0xffu8; 4];
        let mut r = BitReader::new(&bytes);
        assert!(matches!(
            decode(CodeId::Nu, &mut r),
            Err(CodeError::Truncated { .. })
        ));
    }
}
