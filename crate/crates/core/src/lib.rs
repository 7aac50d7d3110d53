// SPDX-License-Identifier: Apache-2.0

//! Wiener–Itô chaos decomposition of level-set areas of left-invariant
//! spin-s Gaussian fields on SO(3).
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Gamma/Beta, Gauss `2F1`, Hermite, Laguerre and the
//!   spherical-average polynomials `Σ_{n,b}`, plus 1D quadrature.
//! * [`so3geom`]: Euler chart, embeddings, Gram matrices and the
//!   vertical/horizontal split of gradients.
//! * [`spinfield`]: spectral profiles, Wigner `d`/`D` functions, sampling and
//!   evaluation of realizations with analytic first jets.
//! * [`chaoscoef`]: all closed-form chaos coefficients (`Θ`, `I`, `ν`, `κ_t`,
//!   `c_{a,m}`) and the expected-area density.
//! * [`levelset`]: marching-tetrahedra area measurement, sphere quadrature,
//!   chaos-component estimators and the Monte Carlo harness.

pub mod chaoscoef;
pub mod error;
pub mod levelset;
pub mod rng;
pub mod so3geom;
pub mod specfun;
pub mod spinfield;

pub use chaoscoef::ChaosCoefficientTable;
pub use error::{Error, Result};
pub use levelset::{EstimatorReport, EulerGrid, LevelSurfaceMesh, Region, SphereQuadrature};
pub use so3geom::{EulerPoint, GramMatrix, RotationMatrix};
pub use specfun::PolynomialCoeffs;
pub use spinfield::{Band, FieldRealization, Jet1, SpectralProfile};
