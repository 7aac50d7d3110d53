// SPDX-License-Identifier: Apache-2.0

//! Deterministic quadrature over regions of S².

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::specfun::quadrature::gauss_legendre;

/// Smallest accepted quadrature size.
pub const MIN_QUADRATURE: usize = 16;

/// Integration domain `D ⊂ S²`; on SO(3) the region is `π⁻¹(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    FullSphere,
    /// Polar cap `θ ≤ θ_max` around `e_3`.
    Cap { theta_max: f64 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::FullSphere => Ok(()),
            Region::Cap { theta_max } if theta_max > 0.0 && theta_max <= PI => Ok(()),
            Region::Cap { theta_max } => Err(Error::domain("Region", format!("cap angle {theta_max} not in (0, π]"))),
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::FullSphere => 4.0 * PI,
            Region::Cap { theta_max } => TAU * (1.0 - theta_max.cos()),
        }
    }

    /// Volume of `π⁻¹(D)` in SO(3), `2π · area(D)`.
    pub fn fiber_volume(&self) -> f64 {
        TAU * self.area()
    }

    pub fn contains(&self, x: [f64; 3]) -> bool {
        match *self {
            Region::FullSphere => true,
            Region::Cap { theta_max } => x[2] >= theta_max.cos() - 1e-15,
        }
    }
}

/// Points and weights on a region of S².
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    region: Region,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// `2n²` Fibonacci points with equal weights.
    pub fn fibonacci(n: usize) -> Result<Self> {
        check_size(n)?;
        let count = 2 * n * n;
        let golden = PI * (3.0 - 5f64.sqrt());
        let points = (0..count)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                let rho = (1.0 - z * z).sqrt();
                let (s, c) = (golden * i as f64).sin_cos();
                [rho * c, rho * s, z]
            })
            .collect();
        Ok(Self {
            region: Region::FullSphere,
            points,
            weights: vec![4.0 * PI / count as f64; count],
        })
    }

    /// Gauss–Legendre in `cos θ` times the trapezoid rule in `φ`.
    pub fn gauss_product(region: Region, n_theta: usize, n_phi: usize) -> Result<Self> {
        region.validate()?;
        check_size(n_theta.min(n_phi))?;
        let lo = match region {
            Region::FullSphere => -1.0,
            Region::Cap { theta_max } => theta_max.cos(),
        };
        let (x, w) = gauss_legendre(n_theta);
        let half = 0.5 * (1.0 - lo);
        let dphi = TAU / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let z = lo + half * (xi + 1.0);
            let rho = (1.0 - z * z).sqrt();
            for k in 0..n_phi {
                let (s, c) = ((k as f64 + 0.5) * dphi - PI).sin_cos();
                points.push([rho * c, rho * s, z]);
                weights.push(wi * half * dphi);
            }
        }
        Ok(Self { region, points, weights })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < MIN_QUADRATURE {
        return Err(Error::domain("sphere_quadrature", format!("size {n} below {MIN_QUADRATURE}")));
    }
    Ok(())
}

/// Equal-area Fibonacci points for the full sphere, `n` Gauss nodes in
/// `cos θ` by `2n` in `φ` for caps.
pub fn sphere_quadrature(region: Region, n: usize) -> Result<SphereQuadrature> {
    match region {
        Region::FullSphere => SphereQuadrature::fibonacci(n),
        cap => SphereQuadrature::gauss_product(cap, n, 2 * n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> Vec<SphereQuadrature> {
        vec![
            sphere_quadrature(Region::FullSphere, 16).unwrap(),
            sphere_quadrature(Region::Cap { theta_max: PI / 2.0 }, 16).unwrap(),
            sphere_quadrature(Region::Cap { theta_max: 0.7 }, 20).unwrap(),
            SphereQuadrature::gauss_product(Region::FullSphere, 16, 32).unwrap(),
        ]
    }

    #[test]
    fn weights_sum_to_area() {
        for q in rules() {
            let total: f64 = q.weights().iter().sum();
            assert!((total - q.region().area()).abs() < 1e-10, "{:?}", q.region());
            assert!(q.points().iter().all(|&x| q.region().contains(x)));
            assert!(q.weights().iter().all(|&w| w > 0.0));
        }
        assert!((Region::Cap { theta_max: PI / 2.0 }.area() - TAU).abs() < 1e-14);
    }

    #[test]
    fn low_degree_harmonics() {
        let full = sphere_quadrature(Region::FullSphere, 16).unwrap();
        assert!(full.integrate(|x| x[2]).abs() < 1e-10);
        assert!(full.integrate(|x| x[0] * x[1]).abs() < 1e-3);
        let z2 = full.integrate(|x| x[2] * x[2]);
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-3 * 4.0 * PI / 3.0);
        let x2 = full.integrate(|x| x[0] * x[0]);
        assert!((x2 - 4.0 * PI / 3.0).abs() < 1e-3 * 4.0 * PI / 3.0);

        // ∫_{θ ≤ c} cos θ = π sin² c.
        let c = 0.7;
        let cap = sphere_quadrature(Region::Cap { theta_max: c }, 16).unwrap();
        assert!((cap.integrate(|x| x[2]) - PI * c.sin().powi(2)).abs() < 1e-12);
        assert!(cap.integrate(|x| x[0] * x[2]).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_sizes_and_bad_caps() {
        assert!(sphere_quadrature(Region::FullSphere, 15).is_err());
        assert!(sphere_quadrature(Region::Cap { theta_max: -0.1 }, 16).is_err());
    }

    #[test]
    fn region_json() {
        let r: Region = serde_json::from_str(r#"{"kind":"cap","theta_max":1.0}"#).unwrap();
        assert_eq!(r, Region::Cap { theta_max: 1.0 });
        let full: Region = serde_json::from_str(r#"{"kind":"full_sphere"}"#).unwrap();
        assert_eq!(full, Region::FullSphere);
    }
}
