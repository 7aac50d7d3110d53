// SPDX-License-Identifier: Apache-2.0

//! Wigner `d` and `D` functions.
//!
//! `D^l_{m,k}(φ, θ, ψ) = e^{-imφ} d^l_{m,k}(θ) e^{-ikψ}` is the matrix of the
//! rotation `R_3(φ) R_2(θ) R_3(ψ)` in the standard angular-momentum basis, so
//! that `D(R R') = D(R) D(R')`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::so3geom::EulerPoint;
use crate::specfun::ln_factorial;

/// Largest supported degree.
pub const MAX_DEGREE: u32 = 64;

fn check(l: u32, m: i32, k: i32) -> Result<()> {
    if l > MAX_DEGREE {
        return Err(Error::domain("wigner_d", format!("degree {l} exceeds {MAX_DEGREE}")));
    }
    if m.unsigned_abs() > l || k.unsigned_abs() > l {
        return Err(Error::domain("wigner_d", format!("indices ({m}, {k}) out of range for l = {l}")));
    }
    Ok(())
}

/// Integer power that treats `0^0` as 1.
fn powi(x: f64, n: i32) -> f64 {
    if n == 0 {
        1.0
    } else {
        x.powi(n)
    }
}

/// `d^l_{m,k}(θ)` and its θ-derivative, with indices already validated.
pub(crate) fn d_and_derivative_unchecked(l: u32, m: i32, k: i32, theta: f64) -> (f64, f64) {
    let l = l as i32;
    let (sh, ch) = (0.5 * theta).sin_cos();
    let half_log = 0.5
        * (ln_factorial((l + m) as u32)
            + ln_factorial((l - m) as u32)
            + ln_factorial((l + k) as u32)
            + ln_factorial((l - k) as u32));
    let lo = 0.max(k - m);
    let hi = (l + k).min(l - m);
    let (mut d, mut dd) = (0.0, 0.0);
    for j in lo..=hi {
        let ln_den = ln_factorial((l + k - j) as u32)
            + ln_factorial(j as u32)
            + ln_factorial((m - k + j) as u32)
            + ln_factorial((l - m - j) as u32);
        let mag = (half_log - ln_den).exp();
        let sign = if (m - k + j) % 2 == 0 { 1.0 } else { -1.0 };
        let p = 2 * l + k - m - 2 * j;
        let q = m - k + 2 * j;
        let w = sign * mag;
        d += w * powi(ch, p) * powi(sh, q);
        // d/dθ [cos^p(θ/2) sin^q(θ/2)] = ½ [q cos^{p+1} sin^{q-1} - p cos^{p-1} sin^{q+1}]
        let mut t = 0.0;
        if q > 0 {
            t += q as f64 * powi(ch, p + 1) * powi(sh, q - 1);
        }
        if p > 0 {
            t -= p as f64 * powi(ch, p - 1) * powi(sh, q + 1);
        }
        dd += 0.5 * w * t;
    }
    (d, dd)
}

/// Reduced Wigner function `d^l_{m,k}(θ)`.
pub fn wigner_d(l: u32, m: i32, k: i32, theta: f64) -> Result<f64> {
    check(l, m, k)?;
    Ok(d_and_derivative_unchecked(l, m, k, theta).0)
}

/// `(d^l_{m,k}(θ), ∂_θ d^l_{m,k}(θ))`.
pub fn wigner_d_with_derivative(l: u32, m: i32, k: i32, theta: f64) -> Result<(f64, f64)> {
    check(l, m, k)?;
    Ok(d_and_derivative_unchecked(l, m, k, theta))
}

/// `D^l_{m,k}` at an Euler point.
pub fn wigner_big_d(l: u32, m: i32, k: i32, p: &EulerPoint) -> Result<Complex64> {
    let d = wigner_d(l, m, k, p.theta())?;
    let phase = -(m as f64) * p.phi() - (k as f64) * p.psi();
    Ok(Complex64::from_polar(d, phase))
}

/// Full `(2l+1)²` matrix `D^l(φ, θ, ψ)`, row `m + l`, column `k + l`.
pub fn wigner_matrix(l: u32, p: &EulerPoint) -> Result<Vec<Vec<Complex64>>> {
    check(l, 0, 0)?;
    let li = l as i32;
    Ok((-li..=li)
        .map(|m| {
            (-li..=li)
                .map(|k| {
                    let d = d_and_derivative_unchecked(l, m, k, p.theta()).0;
                    Complex64::from_polar(d, -(m as f64) * p.phi() - (k as f64) * p.psi())
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3geom::RotationMatrix;
    use std::f64::consts::PI;

    #[test]
    fn low_degree_examples() {
        for &t in &[0.1, 0.9, 2.0, 3.0] {
            assert_eq!(wigner_d(0, 0, 0, t).unwrap(), 1.0);
            assert!((wigner_d(1, 0, 0, t).unwrap() - f64::cos(t)).abs() < 1e-15);
            assert!((wigner_d(1, 1, 1, t).unwrap() - (1.0 + f64::cos(t)) / 2.0).abs() < 1e-15);
            assert!((wigner_d(1, 1, 0, t).unwrap() + f64::sin(t) / 2f64.sqrt()).abs() < 1e-15);
            let want = (3.0 * t.cos().powi(2) - 1.0) / 2.0;
            assert!((wigner_d(2, 0, 0, t).unwrap() - want).abs() < 1e-14);
        }
        assert!(wigner_d(2, 3, 0, 0.1).is_err());
        assert!(wigner_d(65, 0, 0, 0.1).is_err());
    }

    #[test]
    fn column_normalization() {
        for l in 0..=10u32 {
            let li = l as i32;
            for &t in &[0.05, 0.7, 1.6, 2.4, 3.1] {
                for k in -li..=li {
                    let sum: f64 = (-li..=li).map(|m| wigner_d(l, m, k, t).unwrap().powi(2)).sum();
                    assert!((sum - 1.0).abs() < 1e-12, "l={l} k={k} θ={t}: {sum}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for l in [1u32, 4, 9, 15] {
            let li = l as i32;
            for m in -li..=li {
                for k in [-li.min(2), 0, li.min(2)] {
                    for &t in &[0.3, 1.2, 2.7] {
                        let (_, dd) = wigner_d_with_derivative(l, m, k, t).unwrap();
                        let fd = (wigner_d(l, m, k, t + h).unwrap() - wigner_d(l, m, k, t - h).unwrap()) / (2.0 * h);
                        assert!((dd - fd).abs() < 1e-7 * (1.0 + l as f64), "l={l} m={m} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn representation_property() {
        let p = EulerPoint::new(0.4, 1.1, -2.0).unwrap();
        let q = EulerPoint::new(-1.3, 2.2, 0.7).unwrap();
        let pq = EulerPoint::from_matrix(&(p.to_matrix() * q.to_matrix())).unwrap();
        for l in [1u32, 2, 5] {
            let (a, b, c) = (wigner_matrix(l, &p).unwrap(), wigner_matrix(l, &q).unwrap(), wigner_matrix(l, &pq).unwrap());
            let n = 2 * l as usize + 1;
            for i in 0..n {
                for j in 0..n {
                    let prod: Complex64 = (0..n).map(|k| a[i][k] * b[k][j]).sum();
                    assert!((prod - c[i][j]).norm() < 1e-12, "l={l}");
                }
            }
        }
    }

    #[test]
    fn degree_one_matches_rotation_matrix() {
        // D^1_{00} = P_{33}.
        let p = EulerPoint::new(0.3, 1.0, PI / 3.0).unwrap();
        let m: RotationMatrix = p.to_matrix();
        let d00 = wigner_big_d(1, 0, 0, &p).unwrap();
        assert!((d00.re - m.0[2][2]).abs() < 1e-15 && d00.im.abs() < 1e-15);
    }
}
