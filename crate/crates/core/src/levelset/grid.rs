// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::so3geom::EulerPoint;
use crate::spinfield::{phases, Amplitude, FieldRealization, SpectralProfile, ThetaBasis};

/// Smallest supported resolution per axis.
pub const MIN_RESOLUTION: usize = 16;

/// Lattice over the Euler chart. `φ` and `ψ` are periodic with nodes at
/// `-π + 2πi/n`; `θ` nodes sit at cell centres `(j + 1/2)π/n_θ`, so the
/// slabs `θ < π/(2n_θ)` and `θ > π - π/(2n_θ)` are not covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerGrid {
    pub n_phi: usize,
    pub n_theta: usize,
    pub n_psi: usize,
}

impl EulerGrid {
    pub fn new(n_phi: usize, n_theta: usize, n_psi: usize) -> Result<Self> {
        if n_phi.min(n_theta).min(n_psi) < MIN_RESOLUTION {
            return Err(Error::domain(
                "EulerGrid",
                format!("resolution ({n_phi}, {n_theta}, {n_psi}) below {MIN_RESOLUTION} per axis"),
            ));
        }
        Ok(Self { n_phi, n_theta, n_psi })
    }

    pub fn cubic(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    pub fn resolution(&self) -> [usize; 3] {
        [self.n_phi, self.n_theta, self.n_psi]
    }

    pub fn len(&self) -> usize {
        self.n_phi * self.n_theta * self.n_psi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self, i: usize) -> f64 {
        -PI + TAU * i as f64 / self.n_phi as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * PI / self.n_theta as f64
    }

    pub fn psi(&self, k: usize) -> f64 {
        -PI + TAU * k as f64 / self.n_psi as f64
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> EulerPoint {
        EulerPoint::new(self.phi(i), self.theta(j), self.psi(k)).expect("grid nodes lie in the chart")
    }

    /// Linear index of node `(i, j, k)`.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (j * self.n_phi + i) * self.n_psi + k
    }

    /// Fraction of the area of S² lying in the two uncovered polar caps,
    /// `1 - cos(h/2)` with `h = π/n_θ`.
    pub fn omitted_fraction(&self) -> f64 {
        1.0 - (0.5 * PI / self.n_theta as f64).cos()
    }
}

/// Field values, and optionally chart gradients, at every node of a grid.
#[derive(Clone, Debug)]
pub struct GridValues {
    grid: EulerGrid,
    values: Vec<f64>,
    gradients: Option<Vec<[f64; 3]>>,
}

impl GridValues {
    pub fn from_fn(grid: EulerGrid, f: impl Fn(&EulerPoint) -> f64) -> Self {
        let mut values = vec![0.0; grid.len()];
        for j in 0..grid.n_theta {
            for i in 0..grid.n_phi {
                for k in 0..grid.n_psi {
                    values[grid.index(i, j, k)] = f(&grid.point(i, j, k));
                }
            }
        }
        Self {
            grid,
            values,
            gradients: None,
        }
    }

    /// `f` returns the value and `(∂_φ, ∂_θ, ∂_ψ)` at a node.
    pub fn from_fn_with_gradient(grid: EulerGrid, f: impl Fn(&EulerPoint) -> (f64, [f64; 3])) -> Self {
        let mut values = vec![0.0; grid.len()];
        let mut gradients = vec![[0.0; 3]; grid.len()];
        for j in 0..grid.n_theta {
            for i in 0..grid.n_phi {
                for k in 0..grid.n_psi {
                    let idx = grid.index(i, j, k);
                    (values[idx], gradients[idx]) = f(&grid.point(i, j, k));
                }
            }
        }
        Self {
            grid,
            values,
            gradients: Some(gradients),
        }
    }

    pub fn sample(r: &FieldRealization, grid: EulerGrid) -> Self {
        GridBasis::new(r.profile(), grid).fill(r)
    }

    pub fn grid(&self) -> &EulerGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.grid.index(i, j, k)]
    }

    #[inline]
    pub fn gradient(&self, i: usize, j: usize, k: usize) -> Option<[f64; 3]> {
        self.gradients.as_ref().map(|g| g[self.grid.index(i, j, k)])
    }

    pub fn has_gradients(&self) -> bool {
        self.gradients.is_some()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Wigner functions and phases at the grid nodes of one profile, shared
/// across realizations.
#[derive(Clone, Debug)]
pub struct GridBasis {
    grid: EulerGrid,
    spin: i32,
    thetas: Vec<ThetaBasis>,
    phi_phases: Vec<Vec<Complex64>>,
    psi_phases: Vec<Complex64>,
}

impl GridBasis {
    pub fn new(profile: &SpectralProfile, grid: EulerGrid) -> Self {
        let lmax = profile.band_limit();
        let s = profile.spin() as f64;
        Self {
            grid,
            spin: profile.spin(),
            thetas: (0..grid.n_theta).map(|j| ThetaBasis::new(profile, grid.theta(j))).collect(),
            phi_phases: (0..grid.n_phi).map(|i| phases(grid.phi(i), lmax)).collect(),
            psi_phases: (0..grid.n_psi).map(|k| Complex64::from_polar(1.0, -s * grid.psi(k))).collect(),
        }
    }

    pub fn grid(&self) -> &EulerGrid {
        &self.grid
    }

    /// `f = Re(A(φ, θ) e^{-isψ})` and its chart gradient at every node.
    pub fn fill(&self, r: &FieldRealization) -> GridValues {
        debug_assert_eq!(r.spin(), self.spin);
        let g = self.grid;
        let s = self.spin as f64;
        let mut values = vec![0.0; g.len()];
        let mut gradients = vec![[0.0; 3]; g.len()];
        for (j, basis) in self.thetas.iter().enumerate() {
            for (i, ph) in self.phi_phases.iter().enumerate() {
                let amp = r.amplitude(basis, ph);
                let base = g.index(i, j, 0);
                for (k, z) in self.psi_phases.iter().enumerate() {
                    let x = amp.a * z;
                    values[base + k] = x.re;
                    gradients[base + k] = [(amp.a_phi * z).re, (amp.a_theta * z).re, s * x.im];
                }
            }
        }
        GridValues {
            grid: g,
            values,
            gradients: Some(gradients),
        }
    }
}

/// Wigner functions and phases on the `refine`-fold subdivision of a grid,
/// for evaluating realizations at subcell nodes on demand.
///
/// Node `(I, J, K)` sits at `φ_0 + I Δφ/q`, `θ_0 + J Δθ/q`, `ψ_0 + K Δψ/q`
/// with `q = refine`, so nodes with indices divisible by `q` are the base grid.
#[derive(Clone, Debug)]
pub struct RefinedBasis {
    grid: EulerGrid,
    refine: usize,
    spin: i32,
    thetas: Vec<ThetaBasis>,
    phi_phases: Vec<Vec<Complex64>>,
    psi_phases: Vec<Complex64>,
}

impl RefinedBasis {
    pub fn new(profile: &SpectralProfile, grid: EulerGrid, refine: usize) -> Result<Self> {
        if refine == 0 {
            return Err(Error::domain("RefinedBasis", "refinement factor must be at least 1"));
        }
        let lmax = profile.band_limit();
        let s = profile.spin() as f64;
        let basis = Self {
            grid,
            refine,
            spin: profile.spin(),
            thetas: Vec::new(),
            phi_phases: Vec::new(),
            psi_phases: Vec::new(),
        };
        let n_theta = (grid.n_theta - 1) * refine + 1;
        Ok(Self {
            thetas: (0..n_theta).map(|j| ThetaBasis::new(profile, basis.theta(j))).collect(),
            phi_phases: (0..grid.n_phi * refine).map(|i| phases(basis.phi(i), lmax)).collect(),
            psi_phases: (0..grid.n_psi * refine).map(|k| Complex64::from_polar(1.0, -s * basis.psi(k))).collect(),
            ..basis
        })
    }

    pub fn grid(&self) -> &EulerGrid {
        &self.grid
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    fn phi(&self, i: usize) -> f64 {
        -PI + TAU * i as f64 / (self.grid.n_phi * self.refine) as f64
    }

    fn theta(&self, j: usize) -> f64 {
        (0.5 + j as f64 / self.refine as f64) * PI / self.grid.n_theta as f64
    }

    fn psi(&self, k: usize) -> f64 {
        -PI + TAU * k as f64 / (self.grid.n_psi * self.refine) as f64
    }

    /// Unwrapped chart coordinates of a node.
    pub(super) fn coords(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.phi(i), self.theta(j), self.psi(k)]
    }

    /// `A(φ, θ)` at every `(I, J)`, row-major in `J`.
    pub(super) fn amplitudes(&self, r: &FieldRealization) -> Vec<Amplitude> {
        debug_assert_eq!(r.spin(), self.spin);
        self.thetas.iter().flat_map(|b| self.phi_phases.iter().map(move |ph| r.amplitude(b, ph))).collect()
    }

    /// Value and chart gradient at node `(I, J, K)`, periodic in `I` and `K`.
    #[inline]
    pub(super) fn node(&self, table: &[Amplitude], i: usize, j: usize, k: usize) -> (f64, [f64; 3]) {
        let n_phi = self.phi_phases.len();
        let amp = &table[j * n_phi + i % n_phi];
        let z = self.psi_phases[k % self.psi_phases.len()];
        let x = amp.a * z;
        (x.re, [(amp.a_phi * z).re, (amp.a_theta * z).re, self.spin as f64 * x.im])
    }
}
