//! Universal codes for the positive integers: Elias α, β, γ, δ, the Δδ
//! rearrangement and the ν code, with exact Kraft sums, expansion-ratio
//! analysis and numerical checks of the bound case analyses.

pub mod bitio;
pub mod bounds;
pub mod codes;
pub mod dist;
pub mod kraft;
pub mod precise;

pub use bitio::{BitReader, BitString, BitWriter, ContainerHeader};
pub use bounds::{
    lemma_length_check, lemma_prob_check, verify_cases, BoundsError, CaseReport, CaseSpec,
};
pub use codes::{
    canonical_layout, code_length, decode, decode_stream, encode, encode_stream, nu_delta,
    BlockLength, CodeError, CodeId, SymbolIndex,
};
pub use dist::{expansion_ratio, sum_len, Distribution, RatioReport};
pub use kraft::{kraft_block, kraft_prefix_sum, kraft_tail, verify_nu_identity, Dyadic};
pub use precise::Fixed;
