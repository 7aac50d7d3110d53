// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo estimators over independent realizations. Realization `i`
//! uses seed [`stream_seed`]`(seed, i)`, so results do not depend on the
//! number of rayon workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chaos::{ChaosEstimator, ChaosMethod};
use super::grid::{EulerGrid, GridBasis, RefinedBasis};
use super::march::{level_areas_on, refined_level_areas, AreaRule, Patch, TetSplit};
use super::sphere::{Region, SphereQuadrature};
use crate::chaoscoef::{expected_area_density, ChaosCoefficientTable};
use crate::error::{Error, Result};
use crate::rng::stream_seed;
use crate::so3geom::EulerPoint;
use crate::spinfield::{FieldRealization, SpectralProfile};

/// Smallest accepted number of realizations.
pub const MIN_SAMPLES: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub profile: SpectralProfile,
    pub level: f64,
    pub region: Region,
    /// What `estimate` estimates.
    pub quantity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<EulerGrid>,
    /// Upper bound on the expected area in the uncovered polar slabs,
    /// in the units of `estimate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<ChaosMethod>,
}

/// Mean of `n_samples` draws with `stderr = sd/√n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub metadata: ReportMetadata,
}

impl EstimatorReport {
    /// `(estimate - target) / stderr`.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.estimate - target) / self.stderr
    }
}

/// Sample mean and `sd/√n` with the `n - 1` variance.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance (`n - 1`) and the standard error of that estimate.
pub fn variance_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let (m, se) = mean_stderr(&sq);
    (m * n / (n - 1.0), se * n / (n - 1.0))
}

/// Sample covariance (`n - 1`) and the standard error of that estimate.
pub fn covariance_stderr(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let prod: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let (m, se) = mean_stderr(&prod);
    (m * n / (n - 1.0), se * n / (n - 1.0))
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::domain("monte_carlo", format!("n = {n} below the minimum of {MIN_SAMPLES}")));
    }
    Ok(())
}

/// Options for direct area measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaOptions {
    pub split: TetSplit,
    pub rule: AreaRule,
    /// Subdivision factor for grid cells cut by a level; 1 marches the grid as is.
    pub refine: usize,
    /// Measure the polar caps on a rotated copy of each realization, keeping
    /// every measured cell away from the chart singularities.
    pub two_charts: bool,
    /// Measure `P ↦ f(R P)` instead of `f`.
    pub left_translation: Option<EulerPoint>,
}

impl Default for AreaOptions {
    fn default() -> Self {
        Self {
            split: TetSplit::default(),
            rule: AreaRule::default(),
            refine: 1,
            two_charts: false,
            left_translation: None,
        }
    }
}

fn realization(profile: &SpectralProfile, seed: u64, idx: usize, options: &AreaOptions) -> Result<FieldRealization> {
    let r = FieldRealization::sample(profile, stream_seed(seed, idx as u64));
    match &options.left_translation {
        Some(p) => r.left_translated(p),
        None => Ok(r),
    }
}

type Measure<'a> = dyn Fn(&FieldRealization, Patch) -> Vec<f64> + Sync + 'a;

/// Measured `area/ξ` of `{f = t}` for every level (outer index) and realization.
pub fn area_samples(
    profile: &SpectralProfile,
    levels: &[f64],
    grid: EulerGrid,
    n: usize,
    seed: u64,
    options: &AreaOptions,
) -> Result<Vec<Vec<f64>>> {
    let xi = profile.xi();
    let measure: Box<Measure<'_>> = if options.refine > 1 {
        let basis = RefinedBasis::new(profile, grid, options.refine)?;
        Box::new(move |r, patch| refined_level_areas(&basis, r, levels, options.split, options.rule, patch))
    } else {
        let basis = GridBasis::new(profile, grid);
        Box::new(move |r, patch| level_areas_on(&basis.fill(r), levels, options.split, options.rule, patch))
    };
    let rotation = Patch::rotation();
    let measure_all = |r: &FieldRealization| -> Result<Vec<f64>> {
        if !options.two_charts {
            return Ok(measure(r, Patch::All));
        }
        let mut areas = measure(r, Patch::Equatorial);
        for (a, b) in areas.iter_mut().zip(measure(&r.left_translated(&rotation)?, Patch::Polar)) {
            *a += b;
        }
        Ok(areas)
    };
    let per_real: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let r = realization(profile, seed, idx, options)?;
            Ok(measure_all(&r)?.into_iter().map(|a| a / xi).collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..levels.len()).map(|l| per_real.iter().map(|row| row[l]).collect()).collect())
}

/// Expected-area bias bound from the polar slabs left out by `grid`, in units of `area/ξ`.
pub fn polar_bias_bound(profile: &SpectralProfile, t: f64, grid: &EulerGrid) -> f64 {
    expected_area_density(t, profile.spin(), profile.xi()) * Region::FullSphere.area() * grid.omitted_fraction()
}

/// `E[Area(f⁻¹(t))] / ξ` over all of SO(3).
pub fn mc_expectation(profile: &SpectralProfile, t: f64, grid: EulerGrid, n: usize, seed: u64) -> Result<EstimatorReport> {
    Ok(mc_expectation_levels(profile, &[t], grid, n, seed, &AreaOptions::default())?.remove(0))
}

/// As [`mc_expectation`] for several levels measured on the same realizations.
pub fn mc_expectation_levels(
    profile: &SpectralProfile,
    levels: &[f64],
    grid: EulerGrid,
    n: usize,
    seed: u64,
    options: &AreaOptions,
) -> Result<Vec<EstimatorReport>> {
    check_samples(n)?;
    let samples = area_samples(profile, levels, grid, n, seed, options)?;
    Ok(levels
        .iter()
        .zip(&samples)
        .map(|(&t, xs)| {
            let (estimate, stderr) = mean_stderr(xs);
            EstimatorReport {
                estimate,
                stderr,
                n_samples: n,
                seed,
                metadata: ReportMetadata {
                    profile: profile.clone(),
                    level: t,
                    region: Region::FullSphere,
                    quantity: "area/xi".into(),
                    grid: Some(grid),
                    bias_bound: Some(if options.two_charts { 0.0 } else { polar_bias_bound(profile, t, &grid) }),
                    method: None,
                },
            }
        })
        .collect())
}

/// `L[q]/ξ` for `q = 0, 2, …, max_order` (inner index) per realization.
pub fn component_samples(est: &ChaosEstimator, profile: &SpectralProfile, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let xi = profile.xi();
    (0..n)
        .into_par_iter()
        .map(|idx| {
            let r = FieldRealization::sample(profile, stream_seed(seed, idx as u64));
            Ok(est.components(&r)?.into_iter().map(|c| c / xi).collect())
        })
        .collect()
}

/// Sample covariance of `L[q1]/ξ` and `L[q2]/ξ`.
#[allow(clippy::too_many_arguments)]
pub fn mc_orthogonality(
    profile: &SpectralProfile,
    t: f64,
    q1: u32,
    q2: u32,
    quad: &SphereQuadrature,
    method: ChaosMethod,
    n: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_samples(n)?;
    for q in [q1, q2] {
        if q % 2 == 1 || q < 2 {
            return Err(Error::domain("mc_orthogonality", format!("order {q} must be even and at least 2")));
        }
    }
    let cap = q1.max(q2);
    let table = ChaosCoefficientTable::build(profile.spin_ratio_sq(), t, cap)?;
    let est = ChaosEstimator::new(profile, table, quad, method)?;
    let rows = component_samples(&est, profile, n, seed)?;
    let xs: Vec<f64> = rows.iter().map(|r| r[(q1 / 2) as usize]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[(q2 / 2) as usize]).collect();
    let (estimate, stderr) = covariance_stderr(&xs, &ys);
    Ok(EstimatorReport {
        estimate,
        stderr,
        n_samples: n,
        seed,
        metadata: ReportMetadata {
            profile: profile.clone(),
            level: t,
            region: quad.region(),
            quantity: format!("cov(L[{q1}]/xi, L[{q2}]/xi)"),
            grid: None,
            bias_bound: None,
            method: Some(method),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub order: u32,
    /// Sample variance of `area/ξ - Σ_{2 ≤ q ≤ order} L[q]/ξ`.
    pub residual_variance: f64,
    pub residual_stderr: f64,
    /// Standard error of the paired difference to the previous row's
    /// residual variance (0 in the first row).
    pub step_stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub rows: Vec<TruncationRow>,
    /// Sample variance of `area/ξ`.
    pub total_variance: f64,
    /// Sample means of `L[q]/ξ`, indexed by `q / 2`.
    pub component_means: Vec<f64>,
    /// Sample covariance matrix of `L[q]/ξ`, indexed by `q / 2`.
    pub covariance: Vec<Vec<f64>>,
    /// Standard errors of the entries of `covariance`.
    pub covariance_stderr: Vec<Vec<f64>>,
    pub mean_area: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub metadata: ReportMetadata,
}

impl TruncationReport {
    pub fn component_variances(&self) -> Vec<f64> {
        (0..self.covariance.len()).map(|i| self.covariance[i][i]).collect()
    }
}

/// Residual variance of measured `area/ξ` after subtracting the chaos
/// components up to each even `Q' ≤ max_order`. `L[0]` is deterministic, so
/// the `Q' = 0` row is the variance of the measured area itself.
#[allow(clippy::too_many_arguments)]
pub fn mc_truncation(
    profile: &SpectralProfile,
    t: f64,
    max_order: u32,
    grid: EulerGrid,
    quad: &SphereQuadrature,
    method: ChaosMethod,
    n: usize,
    seed: u64,
) -> Result<TruncationReport> {
    check_samples(n)?;
    if quad.region() != Region::FullSphere {
        return Err(Error::domain("mc_truncation", "grid areas cover the full sphere only"));
    }
    let table = ChaosCoefficientTable::build(profile.spin_ratio_sq(), t, max_order)?;
    let est = ChaosEstimator::new(profile, table, quad, method)?;
    let areas = area_samples(profile, &[t], grid, n, seed, &AreaOptions::default())?.remove(0);
    let comps = component_samples(&est, profile, n, seed)?;
    let half = (max_order / 2) as usize;

    let mut residual = areas.clone();
    let mut rows = Vec::with_capacity(half + 1);
    let mut prev: Option<Vec<f64>> = None;
    for k in 0..=half {
        if k > 0 {
            for (res, c) in residual.iter_mut().zip(&comps) {
                *res -= c[k];
            }
        }
        let (v, se) = variance_stderr(&residual);
        let step_stderr = match &prev {
            None => 0.0,
            Some(p) => {
                let dev = |xs: &[f64]| {
                    let m = xs.iter().sum::<f64>() / xs.len() as f64;
                    xs.iter().map(|x| (x - m).powi(2)).collect::<Vec<f64>>()
                };
                let d: Vec<f64> = dev(p).iter().zip(dev(&residual)).map(|(a, b)| a - b).collect();
                mean_stderr(&d).1 * n as f64 / (n as f64 - 1.0)
            }
        };
        rows.push(TruncationRow {
            order: 2 * k as u32,
            residual_variance: v,
            residual_stderr: se,
            step_stderr,
        });
        prev = Some(residual.clone());
    }

    let cols: Vec<Vec<f64>> = (0..=half).map(|k| comps.iter().map(|c| c[k]).collect()).collect();
    let mut covariance = vec![vec![0.0; half + 1]; half + 1];
    let mut cov_se = vec![vec![0.0; half + 1]; half + 1];
    for i in 0..=half {
        for j in 0..=half {
            let (c, se) = covariance_stderr(&cols[i], &cols[j]);
            covariance[i][j] = c;
            cov_se[i][j] = se;
        }
    }
    let (mean_area, _) = mean_stderr(&areas);
    Ok(TruncationReport {
        total_variance: rows[0].residual_variance,
        rows,
        component_means: cols.iter().map(|c| mean_stderr(c).0).collect(),
        covariance,
        covariance_stderr: cov_se,
        mean_area,
        n_samples: n,
        seed,
        metadata: ReportMetadata {
            profile: profile.clone(),
            level: t,
            region: Region::FullSphere,
            quantity: "area/xi".into(),
            grid: Some(grid),
            bias_bound: Some(polar_bias_bound(profile, t, &grid)),
            method: Some(method),
        },
    })
}
