//! Every numeric knob the theory leaves unspecified, in one place.
//!
//! | knob                   | value  |
//! |------------------------|--------|
//! | shift cap constant     | 1      |
//! | `M / N` ratio band     | 2      |
//! | tuple budget           | 10^4   |
//! | sampled tuple count    | 512    |
//! | sampled search seed    | 0      |
//! | single-audit sizes     | `max(1, c / 8)` |
//! | random-unimodular seed | 0      |

pub const SHIFT_CAP_CONSTANT: f64 = 1.0;
pub const RATIO_BAND: f64 = 2.0;
pub const BUDGET: u128 = 10_000;
pub const SAMPLE_COUNT: usize = 512;
pub const SAMPLE_SEED: u64 = 0;
pub const SIZE_DIVISOR: u64 = 8;
pub const KERNEL_SEED: u64 = 0;

/// Added to a cell's seed to draw `beta` independently of `alpha`.
pub const BETA_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn default_size(c: u64) -> u64 {
    (c / SIZE_DIVISOR).max(1)
}
