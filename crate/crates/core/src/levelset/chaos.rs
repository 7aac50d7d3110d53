// SPDX-License-Identifier: Apache-2.0

//! Per-realization chaos components `L_{f-t}(π⁻¹(D))[q]` by quadrature over `D`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::sphere::SphereQuadrature;
use crate::chaoscoef::{hermite_ratio, theta_const, ChaosCoefficientTable, S3};
use crate::error::{Error, Result};
use crate::so3geom::{horizontal_components, sphere_coords};
use crate::specfun::hermite;
use crate::spinfield::{phases, Amplitude, FieldRealization, SpectralProfile, ThetaBasis};

/// Tolerance of the fiber-constancy check, relative to `max(1, value)`.
pub const FIBER_CHECK_TOL: f64 = 1e-7;

/// Fiber offsets used by the fiber-constancy check.
const CHECK_OFFSETS: [f64; 4] = [0.0, FRAC_PI_2 + 0.25, 2.0, 4.5];

/// How the fiber integral is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChaosMethod {
    /// The closed form with `κ_t(a, b, s²/ξ²)` for `s ≠ 0` (and `κ_t(a, b, 0)`
    /// with `2π H_{2a}(f)` for `s = 0`). Requires `|X|` and `‖∇^H f‖` to be
    /// constant on every fiber; violations are reported as
    /// [`Error::Inconsistency`].
    #[default]
    Theorem,
    /// Exact trapezoid rule along each fiber applied to
    /// `H_{2a}(f) H̃_{2b}(d_P f)`, with `q_max |s| + 1` nodes. Valid for any
    /// profile.
    Fiberwise,
}

/// Fiber data of one realization over one quadrature point.
#[derive(Clone, Copy, Debug)]
struct FiberSample {
    value: f64,
    x: Complex64,
    /// `‖∇^H f‖² / ξ²`.
    y: f64,
}

/// Cached quadrature bases for one profile, table and region.
#[derive(Clone, Debug)]
pub struct ChaosEstimator {
    profile: SpectralProfile,
    table: ChaosCoefficientTable,
    method: ChaosMethod,
    weights: Vec<f64>,
    bases: Vec<(ThetaBasis, Vec<Complex64>)>,
    fiber_psi: Vec<f64>,
}

impl ChaosEstimator {
    pub fn new(
        profile: &SpectralProfile,
        table: ChaosCoefficientTable,
        quad: &SphereQuadrature,
        method: ChaosMethod,
    ) -> Result<Self> {
        let r2 = profile.spin_ratio_sq();
        if (table.spin_ratio_sq() - r2).abs() > 1e-12 * r2.max(1.0) {
            return Err(Error::domain(
                "chaos_component",
                format!("table built for r2 = {}, profile has r2 = {r2}", table.spin_ratio_sq()),
            ));
        }
        let lmax = profile.band_limit();
        let bases = quad
            .points()
            .iter()
            .map(|&x| {
                let (phi, theta) = sphere_coords(x)?;
                Ok((ThetaBasis::new(profile, theta), phases(phi, lmax)))
            })
            .collect::<Result<Vec<_>>>()?;
        let s = profile.spin().unsigned_abs() as usize;
        let fiber_psi = match (method, s) {
            (ChaosMethod::Theorem, 0) => vec![0.0],
            (ChaosMethod::Theorem, _) => CHECK_OFFSETS.to_vec(),
            (ChaosMethod::Fiberwise, _) => {
                let k = table.max_order() as usize * s + 1;
                (0..k).map(|j| TAU * j as f64 / k as f64).collect()
            }
        };
        Ok(Self {
            profile: profile.clone(),
            table,
            method,
            weights: quad.weights().to_vec(),
            bases,
            fiber_psi,
        })
    }

    pub fn table(&self) -> &ChaosCoefficientTable {
        &self.table
    }

    pub fn method(&self) -> ChaosMethod {
        self.method
    }

    pub fn max_order(&self) -> u32 {
        self.table.max_order()
    }

    fn samples(&self, amp: &Amplitude, theta: f64, out: &mut Vec<FiberSample>) {
        let s = self.profile.spin();
        let xi2 = self.profile.xi2();
        out.clear();
        out.extend(self.fiber_psi.iter().map(|&psi| {
            let j = amp.jet(s, psi);
            let [h1, h2] = horizontal_components(j.gradient(), theta);
            FiberSample {
                value: j.value,
                x: j.complex_value,
                y: (h1 * h1 + h2 * h2) / xi2,
            }
        }));
    }

    fn check_fiber(samples: &[FiberSample], point: usize) -> Result<()> {
        let (n0, y0) = (samples[0].x.norm_sqr(), samples[0].y);
        for smp in &samples[1..] {
            let dn = (smp.x.norm_sqr() - n0).abs() / n0.max(1.0);
            let dy = (smp.y - y0).abs() / y0.max(1.0);
            if dn > FIBER_CHECK_TOL || dy > FIBER_CHECK_TOL {
                return Err(Error::Inconsistency {
                    op: "chaos_component",
                    detail: format!(
                        "integrand not fiber-constant at quadrature point {point}: \
                         |X|² spread {dn:.3e}, ‖∇^H f‖²/ξ² spread {dy:.3e}"
                    ),
                });
            }
        }
        Ok(())
    }

    /// `L[q]` for `q = 0, 2, …, max_order`, indexed by `q / 2`.
    pub fn components(&self, r: &FieldRealization) -> Result<Vec<f64>> {
        if r.profile() != &self.profile {
            return Err(Error::domain("chaos_component", "realization profile differs from estimator profile"));
        }
        let half = self.table.max_order() / 2;
        let spin = self.profile.spin();
        let xi = self.profile.xi();
        let gauss = (-0.5 * self.table.level() * self.table.level()).exp();
        let sigma = self.table.sigma();

        // Per-(a, b) constants and per-point scratch.
        let mut kappa = vec![vec![0.0; half as usize + 1]; half as usize + 1];
        let mut pre = vec![vec![0.0; half as usize + 1]; half as usize + 1];
        for a in 0..=half {
            for b in 0..=half - a {
                kappa[a as usize][b as usize] = self.table.kappa(a, b).expect("within table");
                pre[a as usize][b as usize] = hermite_ratio(a, self.table.level()) * theta_const(a, b) / S3;
            }
        }
        let mut out = vec![0.0; half as usize + 1];
        let mut samples = Vec::with_capacity(self.fiber_psi.len());
        let mut sig_a = vec![0.0; half as usize + 1];
        let mut sig_b = vec![0.0; half as usize + 1];
        let mut ht = vec![0.0; half as usize + 1];
        let mut her = vec![0.0; half as usize + 1];

        for (idx, ((basis, ph), &w)) in self.bases.iter().zip(&self.weights).enumerate() {
            let amp = r.amplitude(basis, ph);
            self.samples(&amp, basis.theta(), &mut samples);
            match self.method {
                ChaosMethod::Theorem => {
                    Self::check_fiber(&samples, idx)?;
                    let smp = samples[0];
                    sigma.eval_all(smp.y, &mut sig_b);
                    if spin == 0 {
                        for a in 0..=half {
                            sig_a[a as usize] = TAU * hermite(2 * a, smp.value);
                        }
                    } else {
                        sigma.eval_all(smp.x.norm_sqr(), &mut sig_a);
                    }
                    for a in 0..=half as usize {
                        for b in 0..=half as usize - a {
                            out[a + b] += w * kappa[a][b] * sig_a[a] * sig_b[b];
                        }
                    }
                }
                ChaosMethod::Fiberwise => {
                    let dpsi = TAU / samples.len() as f64;
                    for smp in &samples {
                        for a in 0..=half {
                            her[a as usize] = hermite(2 * a, smp.value);
                            ht[a as usize] = self.table.htilde_grad_over_xi(a, smp.x.im, smp.y)?;
                        }
                        for a in 0..=half as usize {
                            for b in 0..=half as usize - a {
                                out[a + b] += w * dpsi * pre[a][b] * her[a] * ht[b];
                            }
                        }
                    }
                }
            }
        }
        Ok(out.into_iter().map(|v| v * gauss * xi).collect())
    }

    pub fn component(&self, r: &FieldRealization, q: u32) -> Result<f64> {
        check_order(q, self.table.max_order())?;
        Ok(self.components(r)?[(q / 2) as usize])
    }
}

fn check_order(q: u32, max: u32) -> Result<()> {
    if q % 2 == 1 {
        return Err(Error::domain("chaos_component", format!("odd order {q}: odd chaoses vanish")));
    }
    if q > max {
        return Err(Error::domain("chaos_component", format!("order {q} above table cap {max}")));
    }
    Ok(())
}

/// `L_{f-t}(π⁻¹(D))[q]` of one realization with [`ChaosMethod::Theorem`].
pub fn chaos_component(
    r: &FieldRealization,
    q: u32,
    t: f64,
    quad: &SphereQuadrature,
    table: &ChaosCoefficientTable,
) -> Result<f64> {
    check_order(q, table.max_order())?;
    if (table.level() - t).abs() > 0.0 {
        return Err(Error::domain("chaos_component", format!("table level {} differs from t = {t}", table.level())));
    }
    ChaosEstimator::new(r.profile(), table.clone(), quad, ChaosMethod::Theorem)?.component(r, q)
}
