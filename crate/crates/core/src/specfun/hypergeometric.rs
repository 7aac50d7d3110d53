// SPDX-License-Identifier: Apache-2.0

//! Gauss hypergeometric function `2F1(a, b; c; z)` for real arguments, `z ≤ 1`.
//!
//! * `z ≤ Z_SWITCH`: the defining power series.
//! * `Z_SWITCH < z < 1`: the `z ↦ 1 - z` connection formula, whose two
//!   series converge geometrically in `1 - z < 1/2`.
//! * `z = 1`: Gauss's closed form `Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`, valid when
//!   `c - a - b > 0`.
//! * `z < 0`: Pfaff's transformation onto `z/(z-1) ∈ (0, 1)`.

use crate::error::{Error, Result};

use super::gamma::{gamma, rgamma};

pub const Z_SWITCH: f64 = 0.5;

const MAX_TERMS: usize = 100_000;
const TAIL_TOL: f64 = 1e-16;
/// Connection results whose two terms cancel by more than this factor are
/// replaced by the direct series while it still converges quickly.
const CANCELLATION_LIMIT: f64 = 1e3;
const SERIES_FALLBACK_MAX_Z: f64 = 0.9;

fn nonpositive_integer(x: f64) -> Option<u64> {
    (x <= 0.0 && x == x.round()).then(|| (-x) as u64)
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain("hyp2f1", "non-finite argument"));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::domain("hyp2f1", format!("c = {c} is a non-positive integer")));
    }
    if z > 1.0 {
        return Err(Error::domain("hyp2f1", format!("z = {z} > 1")));
    }
    if let Some(n) = nonpositive_integer(a).or(nonpositive_integer(b)) {
        return Ok(terminating(a, b, c, z, n));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        let excess = c - a - b;
        if excess <= 0.0 {
            return Err(Error::divergence(
                "hyp2f1",
                format!("z = 1 requires c - a - b > 0, got {excess}"),
            ));
        }
        return Ok(gamma(c)? * gamma(excess)? * rgamma(c - a) * rgamma(c - b));
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * hyp2f1(a, c - b, c, w)?);
    }
    if z <= Z_SWITCH || near_integer(c - a - b) {
        return series(a, b, c, z);
    }
    let (value, magnitude) = connection_terms(a, b, c, z)?;
    if magnitude > CANCELLATION_LIMIT * value.abs() && z <= SERIES_FALLBACK_MAX_Z {
        series(a, b, c, z)
    } else {
        Ok(value)
    }
}

/// Finite sum when `a` or `b` equals `-n`.
fn terminating(a: f64, b: f64, c: f64, z: f64, n: u64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Power series in `z`, summed until the estimated relative tail drops below
/// `TAIL_TOL`.
pub(crate) fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let az = z.abs();
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let next = kf + 1.0;
        let ratio = ((a + next) * (b + next) / ((c + next) * (next + 1.0)) * z).abs();
        let r = ratio.max(az);
        if r < 1.0 && term.abs() * r / (1.0 - r) <= TAIL_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        op: "hyp2f1 series",
        iterations: MAX_TERMS,
        partial: sum,
    })
}

/// Connection formula around `z = 1`, returned together with the sum of the
/// magnitudes of its two terms. Requires `c - a - b` non-integer.
fn connection_terms(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, f64)> {
    let excess = c - a - b;
    let w = 1.0 - z;
    let gc = gamma(c)?;
    let first = gc * gamma(excess)? * rgamma(c - a) * rgamma(c - b);
    let second = gc * gamma(-excess)? * rgamma(a) * rgamma(b);
    let (mut value, mut magnitude) = (0.0, 0.0);
    if first != 0.0 {
        let t = first * series(a, b, 1.0 - excess, w)?;
        value += t;
        magnitude += t.abs();
    }
    if second != 0.0 {
        let t = second * w.powf(excess) * series(c - a, c - b, 1.0 + excess, w)?;
        value += t;
        magnitude += t.abs();
    }
    Ok((value, magnitude))
}
