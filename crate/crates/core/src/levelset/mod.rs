// SPDX-License-Identifier: Apache-2.0

//! Level-surface areas on SO(3): direct measurement on a grid, chaos
//! components by quadrature over `D ⊂ S²`, and Monte Carlo estimators.

mod chaos;
mod grid;
mod march;
mod mc;
mod sphere;

pub use chaos::{chaos_component, ChaosEstimator, ChaosMethod, FIBER_CHECK_TOL};
pub use grid::{EulerGrid, GridBasis, GridValues, RefinedBasis, MIN_RESOLUTION};
pub use march::{
    extract_level_surface, level_areas, level_areas_on, refined_level_areas, AreaRule, LevelSurfaceMesh, Patch, TetSplit,
};
pub use mc::*;
pub use sphere::{sphere_quadrature, Region, SphereQuadrature, MIN_QUADRATURE};
