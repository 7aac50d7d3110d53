// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Dense univariate polynomial, constant term first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    /// Trailing zero coefficients are dropped; the zero polynomial keeps a single `0.0`.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("never empty")
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}
