// SPDX-License-Identifier: Apache-2.0

//! Spectral model of left-invariant spin-s Gaussian fields
//! `X = Σ_l c_l Σ_m γ^l_{m,s} D^l_{m,s}` and `f = Re X`.

mod field;
mod profile;
mod wigner;

pub use field::{phases, Amplitude, FieldRealization, Jet1, ThetaBasis};
pub use profile::{Band, ProfileDoc, SpectralProfile, NORMALIZATION_TOL};
pub use wigner::{wigner_big_d, wigner_d, wigner_d_with_derivative, wigner_matrix, MAX_DEGREE};
