// SPDX-License-Identifier: Apache-2.0

//! Probabilists' Hermite polynomials, generalized Laguerre polynomials and the
//! spherical averages `Σ_{n,b}(‖x‖²) = ∫_{S^{n-1}} H_{2b}(⟨x, u⟩) du`.

use std::f64::consts::PI;

use super::gamma::{double_factorial_odd, factorial, gamma, sphere_volume};
use super::poly::PolynomialCoeffs;

/// `H_q(x)` from `H_{q+1} = x H_q - q H_{q-1}`.
pub fn hermite(q: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if q == 0 {
        return prev;
    }
    for k in 1..q {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `H_q` in the monomial basis.
pub fn hermite_coeffs(q: u32) -> PolynomialCoeffs {
    let mut prev = vec![1.0];
    if q == 0 {
        return PolynomialCoeffs::new(prev);
    }
    let mut cur = vec![0.0, 1.0];
    for k in 1..q as usize {
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    PolynomialCoeffs::new(cur)
}

/// `H_{2a}(0) = (-1)^a (2a-1)!!`.
pub fn hermite_even_at_zero(a: u32) -> f64 {
    let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
    sign * double_factorial_odd(a)
}

/// Generalized Laguerre `L_b^{(α)}(x)`.
pub fn laguerre(b: u32, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if b == 0 {
        return prev;
    }
    for k in 1..b {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ_{n,b}` as a degree-`b` polynomial in `y = ‖x‖²`, by integrating the even
/// moments `∫ ⟨x,u⟩^{2k} du = y^k s_{n-1} (2k-1)!! / (n(n+2)···(n+2k-2))`.
pub fn sigma_poly(n: u32, b: u32) -> PolynomialCoeffs {
    assert!(n >= 2, "sigma_poly needs n >= 2");
    let h = hermite_coeffs(2 * b);
    let area = sphere_volume(n - 1);
    let mut denom = 1.0;
    let coeffs = (0..=b)
        .map(|k| {
            if k > 0 {
                denom *= (n + 2 * (k - 1)) as f64;
            }
            h.coeffs()[2 * k as usize] * area * double_factorial_odd(k) / denom
        })
        .collect();
    PolynomialCoeffs::new(coeffs)
}

pub fn sigma_eval(n: u32, b: u32, y: f64) -> f64 {
    sigma_poly(n, b).eval(y)
}

/// `E[Σ_b(‖η‖²)²] = (2b)!·4π^{3/2}·Γ(b+1/2)/b!` for `η ~ N(0, I_2)`.
pub fn sigma_second_moment(b: u32) -> f64 {
    factorial(2 * b) * 4.0 * PI.powf(1.5) * gamma(b as f64 + 0.5).expect("positive") / factorial(b)
}

/// `Var Σ_b(‖η‖²)` for `η ~ N(0, I_2)`; zero for the constant `Σ_0`, equal to
/// the second moment otherwise since each `Σ_b`, `b ≥ 1`, is centered.
pub fn sigma_variance(b: u32) -> f64 {
    if b == 0 {
        0.0
    } else {
        sigma_second_moment(b)
    }
}

/// Precomputed `Σ_{n,b}` for `b = 0..=max_b`.
#[derive(Clone, Debug)]
pub struct SigmaTable {
    polys: Vec<PolynomialCoeffs>,
}

impl SigmaTable {
    pub fn new(n: u32, max_b: u32) -> Self {
        Self {
            polys: (0..=max_b).map(|b| sigma_poly(n, b)).collect(),
        }
    }

    pub fn max_b(&self) -> u32 {
        self.polys.len() as u32 - 1
    }

    pub fn eval(&self, b: u32, y: f64) -> f64 {
        self.polys[b as usize].eval(y)
    }

    /// All `Σ_b(y)` for `b = 0..=max_b`.
    pub fn eval_all(&self, y: f64, out: &mut [f64]) {
        for (slot, p) in out.iter_mut().zip(&self.polys) {
            *slot = p.eval(y);
        }
    }
}
