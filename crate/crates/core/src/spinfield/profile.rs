// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinfield::wigner::MAX_DEGREE;

/// Tolerance on `Σ c_l²/2 = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub l: u32,
    pub c: f64,
}

/// Spin and spectral weights of a band-limited spin-s field, normalized to
/// unit variance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileDoc", into = "ProfileDoc")]
pub struct SpectralProfile {
    spin: i32,
    bands: Vec<Band>,
}

/// JSON form of a profile. With `normalize` set, the weights are rescaled
/// to unit variance instead of being rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub spin: i32,
    pub bands: Vec<Band>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize: bool,
}

impl TryFrom<ProfileDoc> for SpectralProfile {
    type Error = Error;
    fn try_from(doc: ProfileDoc) -> Result<Self> {
        if doc.normalize {
            SpectralProfile::normalized(doc.spin, doc.bands)
        } else {
            SpectralProfile::new(doc.spin, doc.bands)
        }
    }
}

impl From<SpectralProfile> for ProfileDoc {
    fn from(p: SpectralProfile) -> Self {
        ProfileDoc {
            spin: p.spin,
            bands: p.bands,
            normalize: false,
        }
    }
}

impl SpectralProfile {
    pub fn new(spin: i32, mut bands: Vec<Band>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::Profile("no bands".into()));
        }
        bands.sort_by_key(|b| b.l);
        for w in bands.windows(2) {
            if w[0].l == w[1].l {
                return Err(Error::Profile(format!("degree {} listed twice", w[0].l)));
            }
        }
        for b in &bands {
            if b.l < spin.unsigned_abs() {
                return Err(Error::Profile(format!("degree {} below |s| = {}", b.l, spin.abs())));
            }
            if b.l > MAX_DEGREE {
                return Err(Error::Profile(format!("degree {} above the limit {MAX_DEGREE}", b.l)));
            }
            if !(b.c.is_finite() && b.c > 0.0) {
                return Err(Error::Profile(format!("weight c_{} = {} must be positive", b.l, b.c)));
            }
        }
        let var: f64 = bands.iter().map(|b| b.c * b.c / 2.0).sum();
        if (var - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Profile(format!("Σ c_l²/2 = {var}, expected 1")));
        }
        let p = Self { spin, bands };
        if p.xi2() <= 0.0 {
            return Err(Error::Profile("frequency ξ² must be positive".into()));
        }
        Ok(p)
    }

    /// Rescales the weights so that `Σ c_l²/2 = 1`.
    pub fn normalized(spin: i32, bands: Vec<Band>) -> Result<Self> {
        let var: f64 = bands.iter().map(|b| b.c * b.c / 2.0).sum();
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::Profile("weights cannot be normalized".into()));
        }
        let k = var.sqrt().recip();
        Self::new(spin, bands.into_iter().map(|b| Band { l: b.l, c: b.c * k }).collect())
    }

    /// A single band `l` with `c_l = √2`.
    pub fn single_band(spin: i32, l: u32) -> Result<Self> {
        Self::new(spin, vec![Band { l, c: std::f64::consts::SQRT_2 }])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    pub fn spin(&self) -> i32 {
        self.spin
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn band_limit(&self) -> u32 {
        self.bands.last().map_or(0, |b| b.l)
    }

    /// `ξ² = Σ (c_l²/2)(l(l+1) - s²)/2`.
    pub fn xi2(&self) -> f64 {
        let s2 = (self.spin as f64).powi(2);
        self.bands
            .iter()
            .map(|b| {
                let l = b.l as f64;
                b.c * b.c / 2.0 * (l * (l + 1.0) - s2) / 2.0
            })
            .sum()
    }

    pub fn xi(&self) -> f64 {
        self.xi2().sqrt()
    }

    /// `s²/ξ²`.
    pub fn spin_ratio_sq(&self) -> f64 {
        (self.spin as f64).powi(2) / self.xi2()
    }
}
