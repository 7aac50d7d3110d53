//! Fixtures shared by the benchmarks.

use spinchaos::{Band, FieldRealization, SpectralProfile};

/// Spin-1 profile with two bands, the CLI default.
pub fn two_band_profile() -> SpectralProfile {
    SpectralProfile::normalized(1, vec![Band { l: 1, c: 1.0 }, Band { l: 3, c: 0.6 }]).expect("valid bands")
}

/// Single band `l = 15`, spin 2.
pub fn high_band_profile() -> SpectralProfile {
    SpectralProfile::single_band(2, 15).expect("valid band")
}

pub fn realization(profile: &SpectralProfile, seed: u64) -> FieldRealization {
    FieldRealization::sample(profile, seed)
}
