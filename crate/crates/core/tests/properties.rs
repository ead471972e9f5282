use num_bigint::BigUint;
use proptest::prelude::*;
use uci_core::dist::{random_decreasing, ratio_of};
use uci_core::kraft::delta_tail;
use uci_core::{
    code_length, decode, decode_stream, encode, encode_stream, kraft_prefix_sum, sum_len,
    BitReader, CodeId, Dyadic, SymbolIndex,
};

fn universal() -> impl Strategy<Value = CodeId> {
    prop_oneof![
        Just(CodeId::Gamma),
        Just(CodeId::Delta),
        Just(CodeId::DeltaDelta),
        Just(CodeId::Nu),
    ]
}

/// Positive integers up to 2^256 with a spread of bit lengths.
fn symbol() -> impl Strategy<Value = SymbolIndex> {
    (1usize..=32, prop::collection::vec(any::<u8>(), 32)).prop_map(|(n, bytes)| {
        let v = BigUint::from_bytes_le(&bytes[..n]) + 1u32;
        SymbolIndex::new(v).unwrap()
    })
}

fn sym(n: u64) -> SymbolIndex {
    SymbolIndex::try_from(n).unwrap()
}

proptest! {
    #[test]
    fn single_round_trip(code in universal(), a in symbol()) {
        let bits = encode(code, &a);
        prop_assert_eq!(bits.len() as u64, code_length(code, &a));
        let mut reader = BitReader::new(bits.as_bytes());
        let back = decode(code, &mut reader).unwrap();
        prop_assert_eq!(reader.position(), bits.len() as u64);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn stream_round_trip(code in universal(), values in prop::collection::vec(1u64..1 << 40, 0..64)) {
        let symbols: Vec<_> = values.iter().map(|&v| sym(v)).collect();
        let mut buf = Vec::new();
        let written = encode_stream(code, &symbols, &mut buf).unwrap();
        prop_assert_eq!(written, buf.len());
        let (id, back) = decode_stream(buf.as_slice()).unwrap();
        prop_assert_eq!(id, code);
        prop_assert_eq!(back, symbols);
    }

    #[test]
    fn no_codeword_prefixes_another(code in universal(), a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(a != b);
        let (x, y) = (encode(code, &sym(a)), encode(code, &sym(b)));
        prop_assert!(!x.is_prefix_of(&y) && !y.is_prefix_of(&x));
    }

    #[test]
    fn sum_len_matches_enumeration(code in universal(), lo in 1u64..3000, width in 0u64..600) {
        let hi = lo + width;
        let want: u64 = (lo..=hi).map(|a| code_length(code, &sym(a))).sum();
        prop_assert_eq!(sum_len(code, &sym(lo), &sym(hi)), BigUint::from(want));
    }

    #[test]
    fn kraft_prefix_sums_step_by_codeword_mass(code in universal(), a in 2u64..20_000) {
        let prev = kraft_prefix_sum(code, &sym(a - 1));
        let cur = kraft_prefix_sum(code, &sym(a));
        prop_assert_eq!(cur.clone() - prev, Dyadic::pow2_neg(code_length(code, &sym(a))));
        prop_assert!(cur <= Dyadic::one());
    }

    #[test]
    fn dyadic_arithmetic(a in 0u64..1 << 30, s in 0u64..80, b in 0u64..1 << 30, t in 0u64..80) {
        let x = Dyadic::new(BigUint::from(a), s);
        let y = Dyadic::new(BigUint::from(b), t);
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
        prop_assert_eq!(x.checked_sub(&y).is_some(), x >= y);
        let diff = (x.to_f64() + y.to_f64() - (x + y).to_f64()).abs();
        prop_assert!(diff <= 1e-12 * (a as f64 + b as f64 + 1.0));
    }

    #[test]
    fn delta_tail_telescopes(t in 1u64..300) {
        let block = uci_core::kraft_block(CodeId::Delta, t + 1);
        prop_assert_eq!(delta_tail(t), delta_tail(t + 1) + block);
    }

    #[test]
    fn universal_bounds_hold(seed in any::<u64>(), support in 1usize..=256) {
        let probs = random_decreasing(seed, support).to_probs().unwrap();
        for (code, bound) in [
            (CodeId::Gamma, 3.0),
            (CodeId::Delta, 2.75),
            (CodeId::DeltaDelta, 2.0821),
            (CodeId::Nu, 2.0386),
        ] {
            let r = ratio_of(code, &probs);
            prop_assert!(r <= bound, "{} ratio {} on {:?}", code, r, &probs[..probs.len().min(4)]);
        }
    }
}
