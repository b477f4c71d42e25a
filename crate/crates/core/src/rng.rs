//! Counter-based noise.
//!
//! Every stochastic quantity in the simulator is addressed by
//! `(seed, stream, t, channel)` and computed by chaining the SplitMix64
//! finalizer. No draw depends on how many draws came before it, so the
//! input sequence and jitter of an episode are frozen by the seed alone,
//! whatever actions are taken.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for state `x` (increment, then mix).
#[inline]
pub const fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent noise streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    InputSize = 1,
    InputMix = 2,
    Jitter = 3,
    Policy = 4,
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
///
/// `t` may be negative (batches pre-filled onto the belt at reset); it is
/// folded in as its two's-complement bit pattern.
#[inline]
pub fn noise_draw(seed: u64, stream: Stream, t: i64, channel: u64) -> f64 {
    let u = noise_bits(seed, stream, t, channel);
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn noise_bits(seed: u64, stream: Stream, t: i64, channel: u64) -> u64 {
    let mut z = splitmix64(seed);
    z = splitmix64(z ^ stream as u64);
    z = splitmix64(z ^ t as u64);
    splitmix64(z ^ channel)
}

/// Derive a child seed, e.g. a per-environment GA seed from a base seed.
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    splitmix64(splitmix64(base) ^ salt)
}
