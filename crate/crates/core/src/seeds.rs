//! Deterministic derivation of independent seed streams.

/// Derives a sub-seed from a master seed and a stream salt.
///
/// SplitMix64-style finalizer: statistically independent streams for
/// different salts, stable across platforms and releases. Used everywhere a
/// component needs its own RNG stream without consuming shared state.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
