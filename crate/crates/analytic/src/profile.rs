//! Radial profiles `h` of a cone metric `dx² + h(x)² g_W`.

use serde::{Deserialize, Serialize};

use crate::{AnalyticError, Result};

/// `h(x) = x·H(x)` with `H` a polynomial, `H(0) = 1`. `Flat` is `H = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Flat,
    /// Coefficients `[1, c₁, c₂, …]` of `H`.
    Polynomial(Vec<f64>),
}

impl Profile {
    /// `h = x(1 + εx)`.
    pub fn quadratic(eps: f64) -> Self {
        if eps == 0.0 {
            Profile::Flat
        } else {
            Profile::Polynomial(vec![1.0, eps])
        }
    }

    /// Coefficients of `h` itself, lowest degree first.
    pub fn h_coeffs(&self) -> Vec<f64> {
        match self {
            Profile::Flat => vec![0.0, 1.0],
            Profile::Polynomial(c) => std::iter::once(0.0).chain(c.iter().copied()).collect(),
        }
    }

    pub fn is_flat(&self) -> bool {
        match self {
            Profile::Flat => true,
            Profile::Polynomial(c) => c.iter().skip(1).all(|&x| x == 0.0),
        }
    }

    /// `(h, h', h'')` at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let c = self.h_coeffs();
        let (mut h, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &ck in c.iter().rev() {
            d2 = d2 * x + 2.0 * d1;
            d1 = d1 * x + h;
            h = h * x + ck;
        }
        (h, d1, d2)
    }

    pub fn h(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    /// Checks `H(0) = 1` and `h > 0` on `(0, l]`.
    pub fn validate(&self, l: f64) -> Result<()> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(AnalyticError::InvalidParameter(format!("length must be positive, got {l}")));
        }
        if let Profile::Polynomial(c) = self {
            if c.first() != Some(&1.0) {
                return Err(AnalyticError::InvalidParameter("profile must satisfy h'(0) = 1".into()));
            }
            let n = 4096;
            for i in 0..=n {
                let x = l * i as f64 / n as f64;
                let big_h: f64 = c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
                if big_h <= 0.0 {
                    return Err(AnalyticError::InvalidParameter(format!("h vanishes or turns negative near x = {x}")));
                }
            }
        }
        Ok(())
    }

    /// `∫₀^l h^e dx` for an integer exponent, in closed form.
    pub fn power_integral(&self, e: i64, l: f64) -> Result<f64> {
        if e <= -1 {
            return Err(AnalyticError::DivergentIntegral(format!("∫₀^l h^{e} diverges at the tip")));
        }
        let e = e as usize;
        if self.is_flat() {
            return Ok(l.powi(e as i32 + 1) / (e + 1) as f64);
        }
        let mut poly = vec![1.0];
        let hc = self.h_coeffs();
        for _ in 0..e {
            poly = poly_mul(&poly, &hc);
        }
        Ok(poly.iter().enumerate().map(|(k, &c)| c * l.powi(k as i32 + 1) / (k + 1) as f64).sum())
    }
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
