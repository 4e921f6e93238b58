//! Deterministic seed derivation.
//!
//! Every source of randomness in the crate is a ChaCha stream keyed by a
//! `u64` seed, and derived seeds come from the splitmix64 finalizer below.
//! The derivation is a pure function, so any run is reproducible from the
//! top-level seed alone and independent streams never share state.

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sub-stream `stream` of the generator keyed by `master`:
/// `splitmix64(master + splitmix64(stream))` (wrapping).
pub fn split_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master.wrapping_add(splitmix64(stream)))
}

/// Two-level derivation, `split_seed(split_seed(master, tag), index)`.
/// Used for per-fold and per-member streams.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    split_seed(split_seed(master, tag), index)
}
