//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use num_complex::Complex64;
use spinchaos::FieldRealization;
use std::f64::consts::PI;

/// Probabilists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = x * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Trapezoid rule over one period, exact for trigonometric polynomials of
/// degree below `n`.
pub fn periodic(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// `Σ_b(|v|²) = ∫_{S¹} H_{2b}(⟨v, u⟩) du`.
pub fn sigma2(b: u32, y: f64) -> f64 {
    let r = y.sqrt();
    periodic(|a| hermite(2 * b, r * a.cos()), 4 * b as usize + 8)
}

/// Associated Legendre `P_l^m(x)`, `m ≥ 0`, with the Condon–Shortley phase.
pub fn legendre(l: u32, m: u32, x: f64) -> f64 {
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in m + 2..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `d^l_{m,0}(θ) = √((l-m)!/(l+m)!) P_l^m(cos θ)` and `d^l_{-m,0} = (-1)^m d^l_{m,0}`.
pub fn wigner_d_m0(l: u32, m: i32, theta: f64) -> f64 {
    let am = m.unsigned_abs();
    let norm = (factorial(l - am) / factorial(l + am)).sqrt();
    let v = norm * legendre(l, am, theta.cos());
    if m < 0 && am % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Spin-0 field on S² from the coefficients of a realization, evaluated with
/// associated Legendre functions.
pub struct SphereField {
    bands: Vec<(u32, f64, Vec<Complex64>)>,
}

impl SphereField {
    pub fn new(r: &FieldRealization) -> Self {
        assert_eq!(r.spin(), 0);
        let bands = r.profile().bands().iter().zip(r.gammas()).map(|(b, g)| (b.l, b.c, g.clone())).collect();
        Self { bands }
    }

    pub fn value(&self, phi: f64, theta: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, c, g) in &self.bands {
            let l = *l as i32;
            for m in -l..=l {
                let d = wigner_d_m0(l as u32, m, theta);
                acc += g[(m + l) as usize] * Complex64::from_polar(d * c, -(m as f64) * phi);
            }
        }
        acc.re
    }

    /// Values on the grid `θ_j = (j + 1/2)π/n_θ`, `φ_i = 2πi/n_φ`, row-major in `j`.
    pub fn grid(&self, n_theta: usize, n_phi: usize) -> Vec<f64> {
        let mut out = vec![0.0; n_theta * n_phi];
        for j in 0..n_theta {
            let theta = (j as f64 + 0.5) * PI / n_theta as f64;
            let rows: Vec<(i32, f64, Vec<(f64, Complex64)>)> = self
                .bands
                .iter()
                .map(|(l, c, g)| {
                    let l = *l as i32;
                    (l, *c, (-l..=l).map(|m| (wigner_d_m0(l as u32, m, theta), g[(m + l) as usize])).collect())
                })
                .collect();
            for i in 0..n_phi {
                let phi = 2.0 * PI * i as f64 / n_phi as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, c, terms) in &rows {
                    for (idx, (d, g)) in terms.iter().enumerate() {
                        let m = idx as i32 - l;
                        acc += g * Complex64::from_polar(d * c, -(m as f64) * phi);
                    }
                }
                out[j * n_phi + i] = acc.re;
            }
        }
        out
    }
}

fn sphere_point(phi: f64, theta: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Length of `{φ = t}` on S² by marching squares on a `(θ, φ)` grid of
/// `values` from [`SphereField::grid`], summing chord lengths.
pub fn level_length(values: &[f64], n_theta: usize, n_phi: usize, t: f64) -> f64 {
    let node = |j: usize, i: usize| values[j * n_phi + i % n_phi] - t;
    let pos = |j: f64, i: f64| sphere_point(2.0 * PI * i / n_phi as f64, (j + 0.5) * PI / n_theta as f64);
    let mut total = 0.0;
    for j in 0..n_theta - 1 {
        for i in 0..n_phi {
            // Corners counter-clockwise: (j,i), (j,i+1), (j+1,i+1), (j+1,i).
            let c = [(j, i), (j, i + 1), (j + 1, i + 1), (j + 1, i)];
            let v = c.map(|(a, b)| node(a, b));
            let mut pts = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (v[a] < 0.0) != (v[b] < 0.0) {
                    let lam = v[a] / (v[a] - v[b]);
                    let (ja, ia) = (c[a].0 as f64, c[a].1 as f64);
                    let (jb, ib) = (c[b].0 as f64, c[b].1 as f64);
                    pts.push(pos(ja + lam * (jb - ja), ia + lam * (ib - ia)));
                }
            }
            match pts.len() {
                2 => total += dist(pts[0], pts[1]),
                4 => {
                    // Saddle: pair crossings by the sign of the cell-centre average.
                    let centre = v.iter().sum::<f64>() / 4.0;
                    if (centre < 0.0) == (v[0] < 0.0) {
                        total += dist(pts[0], pts[3]) + dist(pts[1], pts[2]);
                    } else {
                        total += dist(pts[0], pts[1]) + dist(pts[2], pts[3]);
                    }
                }
                _ => {}
            }
        }
    }
    total
}
