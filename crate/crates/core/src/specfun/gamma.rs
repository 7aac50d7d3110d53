// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos sum for `x >= 0.5`, returns `(A(x), t)` with `Γ(x) = √(2π) t^(x-1/2) e^(-t) A(x)`.
fn lanczos(x: f64) -> (f64, f64) {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    (a, x + LANCZOS_G + 0.5)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("argument {x} must be positive")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), and sin(πx) > 0 on (0, 1/2).
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let (a, t) = lanczos(x);
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + a.ln()
}

/// `Γ(x)` for any real `x` that is not a pole.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || !x.is_finite() {
        return Err(Error::domain("gamma", format!("pole at {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x > 171.0 {
        return f64::INFINITY;
    }
    if x == x.round() && x <= 21.0 {
        return factorial(x as u32 - 1);
    }
    let (a, t) = lanczos(x);
    (2.0 * PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * a
}

/// `1/Γ(x)`, which is entire: zero at the poles of `Γ`.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// `B(z, w) = Γ(z)Γ(w)/Γ(z+w)` for positive arguments.
pub fn beta(z: f64, w: f64) -> Result<f64> {
    if !(z > 0.0 && w > 0.0) {
        return Err(Error::domain("beta", format!("arguments ({z}, {w}) must be positive")));
    }
    Ok((ln_gamma_pos(z) + ln_gamma_pos(w) - ln_gamma_pos(z + w)).exp())
}

const FACTORIALS: [f64; 21] = {
    let mut t = [1.0; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};

/// `n!`; exact up to `20!`, log-space above.
pub fn factorial(n: u32) -> f64 {
    if (n as usize) < FACTORIALS.len() {
        FACTORIALS[n as usize]
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    if (n as usize) < FACTORIALS.len() {
        FACTORIALS[n as usize].ln()
    } else {
        ln_gamma_pos(n as f64 + 1.0)
    }
}

/// `(2k-1)!! = 1·3·5···(2k-1)`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: u32) -> f64 {
    if k <= 10 {
        (1..=k).map(|j| (2 * j - 1) as f64).product()
    } else {
        (ln_factorial(2 * k) - k as f64 * 2f64.ln() - ln_factorial(k)).exp()
    }
}

/// Binomial coefficient `C(n, k)` as a float; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (n as u128 - i) / (i + 1);
        }
        acc as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
    }
}

/// Volume of the unit sphere `S^n ⊂ R^{n+1}`: `2π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn sphere_volume(n: u32) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / gamma_unchecked(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn beta_examples() {
        assert!(rel(beta(1.0, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(beta(0.5, 1.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(ln_gamma(5.0).unwrap(), 24f64.ln()) < 1e-14);
    }

    #[test]
    fn non_positive_arguments_are_rejected() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(beta(-1.0, 2.0).is_err());
        assert!(gamma(-3.0).is_err());
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn half_integer_values() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma(0.5).unwrap(), sqrt_pi) < 1e-14);
        assert!(rel(gamma(1.5).unwrap(), sqrt_pi / 2.0) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * sqrt_pi) < 1e-14);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * sqrt_pi / 3.0) < 1e-14);
        // Γ(n + 1/2) = (2n-1)!! √π / 2^n
        for n in 0..15u32 {
            let expect = double_factorial_odd(n) * sqrt_pi / 2f64.powi(n as i32);
            assert!(rel(gamma(n as f64 + 0.5).unwrap(), expect) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn beta_relative_accuracy_over_range() {
        // B(z, w) against the recurrence B(z+1, w) = B(z, w) z / (z + w).
        let grid = [1e-3, 0.01, 0.3, 0.5, 1.0, 2.5, 7.0, 13.3, 25.0, 49.0];
        for &z in &grid {
            for &w in &grid {
                let lhs = beta(z + 1.0, w).unwrap();
                let rhs = beta(z, w).unwrap() * z / (z + w);
                assert!(rel(lhs, rhs) < 1e-12, "z={z} w={w}");
            }
        }
        // At integers: B(m, n) = (m-1)!(n-1)!/(m+n-1)!
        for m in 1..25u32 {
            for n in 1..25u32 {
                let exact = factorial(m - 1) * factorial(n - 1) / factorial(m + n - 1);
                assert!(rel(beta(m as f64, n as f64).unwrap(), exact) < 1e-12);
            }
        }
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(10), 3_628_800.0);
        assert!(rel(factorial(25), 1.551_121_004_333_098_6e25) < 1e-13);
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(double_factorial_odd(0), 1.0);
        assert_eq!(double_factorial_odd(3), 15.0);
        assert!(rel(double_factorial_odd(12), 316_234_143_225.0) < 1e-13);
    }

    #[test]
    fn sphere_volumes() {
        assert!(rel(sphere_volume(1), 2.0 * PI) < 1e-14);
        assert!(rel(sphere_volume(2), 4.0 * PI) < 1e-14);
        assert!(rel(sphere_volume(3), 2.0 * PI * PI) < 1e-14);
    }
}
