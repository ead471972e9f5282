//! Seeded inputs shared by the benchmarks.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uci_core::SymbolIndex;

/// `n` symbols whose bit lengths are uniform on `1..=max_bits`.
pub fn sample_symbols(n: usize, max_bits: u64, seed: u64) -> Vec<SymbolIndex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let bits = rng.gen_range(1..=max_bits);
            let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
            rng.fill(bytes.as_mut_slice());
            let top = BigUint::from(1u8) << (bits - 1);
            // force the leading bit so the length is exactly `bits`
            let low = BigUint::from_bytes_le(&bytes) % &top;
            SymbolIndex::new(top + low).expect("non-zero")
        })
        .collect()
}
