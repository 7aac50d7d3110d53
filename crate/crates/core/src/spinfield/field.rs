// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use crate::error::{Error, Result};
use crate::so3geom::{decompose_gradient, fiber_base, horizontal_components, EulerPoint, GradientSplit};
use crate::spinfield::profile::SpectralProfile;
use crate::spinfield::wigner::{d_and_derivative_unchecked, wigner_matrix};

/// First jet of `f = Re X` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub complex_value: Complex64,
    pub d_phi: f64,
    pub d_theta: f64,
    pub d_psi: f64,
}

impl Jet1 {
    /// `(∂_φ f, ∂_θ f, ∂_ψ f)`.
    pub fn gradient(&self) -> [f64; 3] {
        [self.d_phi, self.d_theta, self.d_psi]
    }

    pub fn split(&self, theta: f64, xi: f64, s: f64) -> Result<GradientSplit> {
        decompose_gradient(self.gradient(), theta, xi, s)
    }
}

/// `d^l_{m,s}(θ)` and `∂_θ d^l_{m,s}(θ)` for every band of a profile at one
/// colatitude. Reusable across realizations of the same profile.
#[derive(Clone, Debug)]
pub struct ThetaBasis {
    theta: f64,
    /// Per band, indexed by `m + l`.
    values: Vec<Vec<(f64, f64)>>,
}

impl ThetaBasis {
    pub fn new(profile: &SpectralProfile, theta: f64) -> Self {
        let s = profile.spin();
        let values = profile
            .bands()
            .iter()
            .map(|b| {
                let l = b.l as i32;
                (-l..=l).map(|m| d_and_derivative_unchecked(b.l, m, s, theta)).collect()
            })
            .collect();
        Self { theta, values }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `e^{-imφ}` for `m = -L..=L`, indexed by `m + L`.
pub fn phases(phi: f64, lmax: u32) -> Vec<Complex64> {
    let l = lmax as i32;
    (-l..=l).map(|m| Complex64::from_polar(1.0, -(m as f64) * phi)).collect()
}

/// The ψ-independent factor `A(φ, θ)` of `X = A e^{-isψ}` and its partials.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Amplitude {
    pub a: Complex64,
    pub a_phi: Complex64,
    pub a_theta: Complex64,
}

impl Amplitude {
    pub fn jet(&self, spin: i32, psi: f64) -> Jet1 {
        let s = spin as f64;
        let z = Complex64::from_polar(1.0, -s * psi);
        let x = self.a * z;
        Jet1 {
            value: x.re,
            complex_value: x,
            d_phi: (self.a_phi * z).re,
            d_theta: (self.a_theta * z).re,
            d_psi: (Complex64::new(0.0, -s) * x).re,
        }
    }
}

/// One draw of the random coefficients `γ^l_{m,s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRealization {
    profile: SpectralProfile,
    /// Per band, indexed by `m + l`.
    gammas: Vec<Vec<Complex64>>,
    seed: u64,
}

impl FieldRealization {
    /// Draws independent `Re γ, Im γ ~ N(0, 1/2)`, band by band in increasing
    /// `l` and `m`.
    pub fn sample(profile: &SpectralProfile, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gammas = profile
            .bands()
            .iter()
            .map(|b| {
                (0..2 * b.l + 1)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
                    })
                    .collect()
            })
            .collect();
        Self {
            profile: profile.clone(),
            gammas,
            seed,
        }
    }

    pub fn from_coefficients(profile: &SpectralProfile, gammas: Vec<Vec<Complex64>>, seed: u64) -> Result<Self> {
        let ok = gammas.len() == profile.bands().len()
            && gammas.iter().zip(profile.bands()).all(|(g, b)| g.len() == 2 * b.l as usize + 1);
        if !ok {
            return Err(Error::domain("from_coefficients", "coefficient table does not match the profile"));
        }
        Ok(Self {
            profile: profile.clone(),
            gammas,
            seed,
        })
    }

    pub fn profile(&self) -> &SpectralProfile {
        &self.profile
    }

    pub fn gammas(&self) -> &[Vec<Complex64>] {
        &self.gammas
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spin(&self) -> i32 {
        self.profile.spin()
    }

    pub fn amplitude(&self, basis: &ThetaBasis, phases: &[Complex64]) -> Amplitude {
        let lmax = (phases.len() as i32 - 1) / 2;
        let mut out = Amplitude::default();
        for ((band, gam), vals) in self.profile.bands().iter().zip(&self.gammas).zip(&basis.values) {
            let l = band.l as i32;
            let (mut a, mut a_phi, mut a_theta) = (Complex64::default(), Complex64::default(), Complex64::default());
            for (idx, (g, &(d, dd))) in gam.iter().zip(vals).enumerate() {
                let m = idx as i32 - l;
                let ge = g * phases[(m + lmax) as usize];
                a += ge * d;
                a_phi += ge * Complex64::new(0.0, -(m as f64) * d);
                a_theta += ge * dd;
            }
            out.a += a * band.c;
            out.a_phi += a_phi * band.c;
            out.a_theta += a_theta * band.c;
        }
        out
    }

    pub fn amplitude_at(&self, phi: f64, theta: f64) -> Amplitude {
        let basis = ThetaBasis::new(&self.profile, theta);
        self.amplitude(&basis, &phases(phi, self.profile.band_limit()))
    }

    /// `(f(P), X(P))`.
    pub fn evaluate(&self, p: &EulerPoint) -> (f64, Complex64) {
        let j = self.jet(p);
        (j.value, j.complex_value)
    }

    pub fn jet(&self, p: &EulerPoint) -> Jet1 {
        self.amplitude_at(p.phi(), p.theta()).jet(self.spin(), p.psi())
    }

    /// `(f(P), f(P R_3(π/2s)), ∇^H f/ξ)` in the frame `(∂_θ, (∂_φ - cos θ ∂_ψ)/sin θ)`.
    ///
    /// The second entry equals `Im X(P)`; that form is used for every `s`,
    /// including `s = 0`.
    pub fn normalized_jet(&self, p: &EulerPoint) -> [f64; 4] {
        let j = self.jet(p);
        let xi = self.profile.xi();
        let [h1, h2] = horizontal_components(j.gradient(), p.theta());
        [j.value, j.complex_value.im, h1 / xi, h2 / xi]
    }

    /// `f(P R_3(π/2s))`; requires `s ≠ 0`.
    pub fn quarter_shift(&self, p: &EulerPoint) -> Result<f64> {
        let s = self.spin();
        if s == 0 {
            return Err(Error::domain("quarter_shift", "spin must be nonzero"));
        }
        Ok(self.evaluate(&p.fiber_shift(FRAC_PI_2 / s as f64)).0)
    }

    /// `|X(P)|` for any `P` over `x`.
    pub fn spin_norm(&self, x: [f64; 3]) -> Result<f64> {
        Ok(self.evaluate(&fiber_base(x)?).1.norm())
    }

    /// `‖∇^H f‖` at the chart point over `x` with `ψ = 0`.
    pub fn horizontal_norm(&self, x: [f64; 3]) -> Result<f64> {
        let p = fiber_base(x)?;
        self.horizontal_norm_at(&p)
    }

    pub fn horizontal_norm_at(&self, p: &EulerPoint) -> Result<f64> {
        let j = self.jet(p);
        let s = self.spin() as f64;
        Ok(j.split(p.theta(), self.profile.xi(), s)?.horizontal_norm)
    }

    /// The realization of `P ↦ X(R P)`, i.e. coefficients
    /// `γ'_k = Σ_m γ_m D^l_{m,k}(R)`.
    pub fn left_translated(&self, r: &EulerPoint) -> Result<Self> {
        let gammas = self
            .profile
            .bands()
            .iter()
            .zip(&self.gammas)
            .map(|(b, g)| {
                let d = wigner_matrix(b.l, r)?;
                let n = g.len();
                Ok((0..n).map(|k| (0..n).map(|m| g[m] * d[m][k]).sum()).collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        Ok(Self {
            profile: self.profile.clone(),
            gammas,
            seed: self.seed,
        })
    }
}
