// SPDX-License-Identifier: Apache-2.0

//! Closed-form coefficients of the chaos expansion of level-set areas:
//! `Θ(a, b)`, `I_i^b`, `ν(i, β, α)`, `κ_t(α, β, r2)`, `c_{a,m}`, the two
//! kernel identities and the expected-area density. Throughout,
//! `r2 = s²/ξ²`.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{
    beta, binomial, factorial, hermite, hermite_even_at_zero, hyp2f1, ln_gamma, quadrature, SigmaTable,
};

/// Volume of the unit 3-sphere.
pub const S3: f64 = 2.0 * PI * PI;
/// Area of the unit 2-sphere.
pub const S2: f64 = 4.0 * PI;
/// Default chaos order cap.
pub const DEFAULT_MAX_ORDER: u32 = 12;
/// Below this `r2`, [`i_coeff`] integrates instead of using the closed form.
pub const I_QUADRATURE_BELOW: f64 = 0.25;

/// `Θ(a, b) = (-1)^{a+b-1} / (2^{a+b} (2b-1) a! b!)`.
pub fn theta_const(a: u32, b: u32) -> f64 {
    let sign = if (a + b) % 2 == 1 { 1.0 } else { -1.0 };
    let den = 2f64.powi((a + b) as i32) * (2.0 * b as f64 - 1.0) * factorial(a) * factorial(b);
    sign / den
}

fn check_order(i: u32, b: u32) -> Result<()> {
    if i > b {
        return Err(Error::domain("i_coeff", format!("need i ≤ b, got i = {i}, b = {b}")));
    }
    Ok(())
}

fn check_r2(op: &'static str, r2: f64) -> Result<()> {
    if !(r2.is_finite() && r2 >= 0.0) {
        return Err(Error::domain(op, format!("r2 = {r2} must be finite and non-negative")));
    }
    Ok(())
}

/// `I_i^b(r2) = B(i + 1/2, b - i + 1) · 2F1(b - 1/2, i + 1/2; b + 3/2; 1 - r2)`.
pub fn i_coeff_closed(i: u32, b: u32, r2: f64) -> Result<f64> {
    check_order(i, b)?;
    check_r2("i_coeff", r2)?;
    if r2 == 0.0 && i >= 2 {
        return Err(Error::divergence("i_coeff", format!("I_{i}^{b}(0) is infinite")));
    }
    let (fi, fb) = (i as f64, b as f64);
    Ok(beta(fi + 0.5, fb - fi + 1.0)? * hyp2f1(fb - 0.5, fi + 0.5, fb + 1.5, 1.0 - r2)?)
}

/// `I_i^b(r2) = ∫_0^π cos^{2i}α sin^{2(b-i)+1}α (1 - (1-r2) cos²α)^{-(2b-1)/2} dα`
/// by adaptive quadrature.
pub fn i_coeff_quadrature(i: u32, b: u32, r2: f64) -> Result<f64> {
    check_order(i, b)?;
    check_r2("i_coeff", r2)?;
    if r2 == 0.0 && i >= 2 {
        return Err(Error::divergence("i_coeff", format!("I_{i}^{b}(0) is infinite")));
    }
    let eps = 1.0 - r2;
    let p = -(2.0 * b as f64 - 1.0) / 2.0;
    let (pc, ps) = (2 * i as i32, 2 * (b - i) as i32 + 1);
    // Symmetric about π/2; the peak of the last factor sits at the endpoints.
    let f = |x: f64| {
        let (s, c) = x.sin_cos();
        let base = if r2 == 0.0 { s * s } else { 1.0 - eps * c * c };
        c.powi(pc) * s.powi(ps) * base.powf(p)
    };
    Ok(2.0 * quadrature::integrate(f, 0.0, PI / 2.0)?)
}

/// `I_i^b(r2)`: quadrature for `r2 < 0.25`, closed form otherwise.
/// `I_i^b(0)` is finite only for `i ≤ 1`.
pub fn i_coeff(i: u32, b: u32, r2: f64) -> Result<f64> {
    if r2 < I_QUADRATURE_BELOW {
        i_coeff_quadrature(i, b, r2)
    } else {
        i_coeff_closed(i, b, r2)
    }
}

/// `c_{a,m} = Γ(a + 1/2) Γ(m + 1/2) / (Γ(a + m + 1/2) √π)`.
pub fn c_am(a: u32, m: u32) -> f64 {
    let (fa, fm) = (a as f64, m as f64);
    let ln = ln_gamma(fa + 0.5).unwrap() + ln_gamma(fm + 0.5).unwrap()
        - ln_gamma(fa + fm + 0.5).unwrap()
        - 0.5 * PI.ln();
    ln.exp()
}

fn check_alpha(op: &'static str, i: u32, alpha: u32) -> Result<()> {
    if i > alpha {
        return Err(Error::domain(op, format!("need i ≤ α, got i = {i}, α = {alpha}")));
    }
    Ok(())
}

/// `ν(i, β, α) = B(i + 1/2, β + 1) / 2F1(α - i, i; α + 1/2; 1) · C(2(i+β), 2i) · Θ(α - i, β + i) / s₃`.
pub fn nu(i: u32, beta_: u32, alpha: u32) -> Result<f64> {
    check_alpha("nu", i, alpha)?;
    let (fi, fb, fa) = (i as f64, beta_ as f64, alpha as f64);
    let gauss = hyp2f1(fa - fi, fi, fa + 0.5, 1.0)?;
    Ok(beta(fi + 0.5, fb + 1.0)? / gauss * binomial(2 * (i + beta_), 2 * i) * theta_const(alpha - i, beta_ + i) / S3)
}

/// `H_{2a}(t) / H_{2a}(0)`.
pub fn hermite_ratio(a: u32, t: f64) -> f64 {
    hermite(2 * a, t) / hermite_even_at_zero(a)
}

/// One summand of `κ_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KappaTerm {
    pub i: u32,
    /// `2F1(β+i-1/2, i+1/2; β+i+3/2; 1-r2)`.
    pub hyp: f64,
    /// `r2^i`.
    pub weight: f64,
    pub nu: f64,
    pub hermite_ratio: f64,
    /// Product of the above.
    pub value: f64,
}

/// The summands of `κ_t(α, β, r2)`. At `r2 = 0` only `i = 0` is kept.
pub fn kappa_terms(alpha: u32, beta_: u32, r2: f64, t: f64) -> Result<Vec<KappaTerm>> {
    check_r2("kappa", r2)?;
    let top = if r2 == 0.0 { 0 } else { alpha };
    (0..=top)
        .map(|i| {
            let (fi, fb) = (i as f64, beta_ as f64);
            let hyp = hyp2f1(fb + fi - 0.5, fi + 0.5, fb + fi + 1.5, 1.0 - r2)?;
            let weight = r2.powi(i as i32);
            let nu = nu(i, beta_, alpha)?;
            let hr = hermite_ratio(alpha - i, t);
            Ok(KappaTerm {
                i,
                hyp,
                weight,
                nu,
                hermite_ratio: hr,
                value: hyp * weight * nu * hr,
            })
        })
        .collect()
}

/// `κ_t(α, β, r2) = Σ_{i=0}^{α} 2F1(β+i-1/2, i+1/2; β+i+3/2; 1-r2) r2^i ν(i,β,α) H_{2α-2i}(t)/H_{2α-2i}(0)`.
pub fn kappa(alpha: u32, beta_: u32, r2: f64, t: f64) -> Result<f64> {
    Ok(kappa_terms(alpha, beta_, r2, t)?.iter().map(|k| k.value).sum())
}

/// `ν'(i, β, α, r2) = I_i^{β+i}(r2) r2^i C(2(β+i), 2i) c_{α-i,i} Θ(α-i, β+i) / s₃`,
/// assembled from the kernel lemmas.
pub fn nu_prime(i: u32, beta_: u32, alpha: u32, r2: f64) -> Result<f64> {
    check_alpha("nu_prime", i, alpha)?;
    let b = beta_ + i;
    Ok(i_coeff(i, b, r2)? * r2.powi(i as i32) * binomial(2 * b, 2 * i) * c_am(alpha - i, i) * theta_const(alpha - i, b)
        / S3)
}

/// `κ_t` as `Σ_i ν'(i, β, α, r2) H_{2α-2i}(t)/H_{2α-2i}(0)`.
pub fn kappa_via_lemma_pieces(alpha: u32, beta_: u32, r2: f64, t: f64) -> Result<f64> {
    check_r2("kappa", r2)?;
    let top = if r2 == 0.0 { 0 } else { alpha };
    (0..=top).map(|i| Ok(nu_prime(i, beta_, alpha, r2)? * hermite_ratio(alpha - i, t))).sum()
}

/// `(H_{2a}(t)/H_{2a}(0) · Θ(a, b)/s₂)^{-1} κ_t(a, b, 0)`, evaluated at `t = 0`.
pub fn s0_normalization_check(a: u32, b: u32) -> Result<f64> {
    Ok(kappa(a, b, 0.0, 0.0)? * S2 / theta_const(a, b))
}

/// `asin(√u)/√u` continued analytically to `u < 0` as `asinh(√-u)/√-u`.
fn asin_ratio(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 + u / 6.0 + 3.0 * u * u / 40.0
    } else if u > 0.0 {
        u.sqrt().asin() / u.sqrt()
    } else {
        (-u).sqrt().asinh() / (-u).sqrt()
    }
}

/// `E[L_{f-t}(π⁻¹(D))] / (ξ vol(D)) = 2 e^{-t²/2} [asin√(1-r²)/√(1-r²) + |s|/ξ]`, `r = s/ξ`,
/// with the arcsinh branch for `|s| > ξ` and the value 2 in the bracket at `|s| = ξ`.
pub fn expected_area_density(t: f64, s: i32, xi: f64) -> f64 {
    let r = (s as f64).abs() / xi;
    let bracket = if r == 1.0 { 2.0 } else { asin_ratio(1.0 - r * r) + r };
    2.0 * (-t * t / 2.0).exp() * bracket
}

/// `H̃_{2b}(d_P f) = ξ Σ_{i+j=b} C(2b, 2i) I_i^b(r2) r2^i H_{2i}(γ_V) Σ_j(‖∇^H f‖²/ξ²)`.
pub fn htilde_grad(b: u32, gamma_v: f64, hnorm2_over_xi2: f64, r2: f64, xi: f64) -> Result<f64> {
    let sigma = SigmaTable::new(2, b);
    htilde_grad_with(b, gamma_v, hnorm2_over_xi2, r2, xi, &sigma, |i| i_coeff(i, b, r2))
}

pub(crate) fn htilde_grad_with(
    b: u32,
    gamma_v: f64,
    hnorm2_over_xi2: f64,
    r2: f64,
    xi: f64,
    sigma: &SigmaTable,
    icoeff: impl Fn(u32) -> Result<f64>,
) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..=b {
        let w = r2.powi(i as i32);
        if w == 0.0 {
            continue;
        }
        acc += binomial(2 * b, 2 * i) * icoeff(i)? * w * hermite(2 * i, gamma_v) * sigma.eval(b - i, hnorm2_over_xi2);
    }
    Ok(xi * acc)
}

/// `∫_0^{2π} H_{2a}(Re(X e^{iψ})) H_{2m}(Re(iX e^{iψ})) dψ = c_{a,m} Σ_{a+m}(|X|²)`.
pub fn htilde_fiber(a: u32, m: u32, spin_norm_sq: f64) -> f64 {
    c_am(a, m) * crate::specfun::sigma_eval(2, a + m, spin_norm_sq)
}

/// Precomputed `κ_t(α, β, r2)` for `2(α+β) ≤ Q` and `I_i^b(r2)` for `i ≤ b ≤ Q/2`.
#[derive(Clone, Debug)]
pub struct ChaosCoefficientTable {
    spin_ratio_sq: f64,
    level: f64,
    max_order: u32,
    /// `kappa[α][β]`, `α + β ≤ Q/2`.
    kappa: Vec<Vec<f64>>,
    /// `icoeff[b][i]`; `None` where the coefficient is infinite.
    icoeff: Vec<Vec<Option<f64>>>,
    sigma: SigmaTable,
}

impl ChaosCoefficientTable {
    pub fn build(spin_ratio_sq: f64, level: f64, max_order: u32) -> Result<Self> {
        if max_order % 2 == 1 {
            return Err(Error::domain("ChaosCoefficientTable", format!("max order {max_order} must be even")));
        }
        check_r2("ChaosCoefficientTable", spin_ratio_sq)?;
        if !level.is_finite() {
            return Err(Error::domain("ChaosCoefficientTable", "level must be finite"));
        }
        let half = max_order / 2;
        let kappa = (0..=half)
            .map(|a| (0..=half - a).map(|b| kappa(a, b, spin_ratio_sq, level)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let icoeff = (0..=half)
            .map(|b| {
                (0..=b)
                    .map(|i| match i_coeff(i, b, spin_ratio_sq) {
                        Ok(v) => Ok(Some(v)),
                        Err(Error::Divergence { .. }) => Ok(None),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spin_ratio_sq,
            level,
            max_order,
            kappa,
            icoeff,
            sigma: SigmaTable::new(2, half),
        })
    }

    pub fn spin_ratio_sq(&self) -> f64 {
        self.spin_ratio_sq
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn kappa(&self, alpha: u32, beta_: u32) -> Option<f64> {
        self.kappa.get(alpha as usize)?.get(beta_ as usize).copied()
    }

    pub fn icoeff(&self, i: u32, b: u32) -> Option<f64> {
        *self.icoeff.get(b as usize)?.get(i as usize)?
    }

    pub fn sigma(&self) -> &SigmaTable {
        &self.sigma
    }

    /// Multiplies one `κ` entry by `factor`. Used as a negative control for
    /// validation suites.
    pub fn tampered(mut self, alpha: u32, beta_: u32, factor: f64) -> Self {
        if let Some(v) = self.kappa.get_mut(alpha as usize).and_then(|row| row.get_mut(beta_ as usize)) {
            *v *= factor;
        }
        self
    }

    /// `H̃_{2b}/ξ` at a point, from table entries.
    pub fn htilde_grad_over_xi(&self, b: u32, gamma_v: f64, hnorm2_over_xi2: f64) -> Result<f64> {
        htilde_grad_with(b, gamma_v, hnorm2_over_xi2, self.spin_ratio_sq, 1.0, &self.sigma, |i| {
            self.icoeff(i, b)
                .ok_or_else(|| Error::divergence("htilde_grad", format!("I_{i}^{b} is infinite at r2 = 0")))
        })
    }

    /// `alpha,beta,r2,t,kappa`.
    pub fn write_kappa_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "alpha,beta,r2,t,kappa")?;
        for (a, row) in self.kappa.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                writeln!(w, "{a},{b},{:e},{:e},{:e}", self.spin_ratio_sq, self.level, v)?;
            }
        }
        Ok(())
    }

    /// `i,b,r2,value`, with `inf` for divergent entries.
    pub fn write_icoeff_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "i,b,r2,value")?;
        for (b, row) in self.icoeff.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                match v {
                    Some(v) => writeln!(w, "{i},{b},{:e},{:e}", self.spin_ratio_sq, v)?,
                    None => writeln!(w, "{i},{b},{:e},inf", self.spin_ratio_sq)?,
                }
            }
        }
        Ok(())
    }

    /// `a,b,theta`.
    pub fn write_theta_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "a,b,theta")?;
        let half = self.max_order / 2;
        for a in 0..=half {
            for b in 0..=half - a {
                writeln!(w, "{a},{b},{:e}", theta_const(a, b))?;
            }
        }
        Ok(())
    }

    /// `i,beta,alpha,nu`.
    pub fn write_nu_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "i,beta,alpha,nu")?;
        let half = self.max_order / 2;
        for alpha in 0..=half {
            for beta_ in 0..=half - alpha {
                for i in 0..=alpha {
                    writeln!(w, "{i},{beta_},{alpha},{:e}", nu(i, beta_, alpha)?)?;
                }
            }
        }
        Ok(())
    }
}
