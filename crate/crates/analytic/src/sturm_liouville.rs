//! Singular Sturm–Liouville problems
//! `−u'' + q(x) u = λ u` on `(0, l]` (or a frustum `[a, b]`), with
//! `q = −(α−½) h''/h + (α²−¼) h'²/h² + (ν²−α²)/h²`, which is
//! `(ν²−¼)/x²` for the flat profile `h = x`.
//!
//! Solutions are normalised at the tip, `u_± ~ x^{½±ν}`. They are built
//! from Frobenius series up to a handoff radius and continued by local
//! Taylor series to the far end.

use serde::{Deserialize, Serialize};

use crate::profile::{poly_mul, Profile};
use crate::special::ln_gamma;
use crate::spectra::Ladder;
use crate::{AnalyticError, Result};

/// Boundary condition at the far end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `u = 0`.
    Rel,
    /// `(h^{α−½} u)' = 0`.
    Abs,
}

/// Which normalised solution at the tip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Interval {
    Cone { l: f64 },
    /// `u = 0` at `a`, the chosen boundary condition at `b`.
    Frustum { a: f64, b: f64 },
}

impl Interval {
    fn end(&self) -> f64 {
        match *self {
            Interval::Cone { l } => l,
            Interval::Frustum { b, .. } => b,
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Interval::Cone { l } => l,
            Interval::Frustum { a, b } => b - a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SLProblem {
    pub nu: f64,
    pub alpha: f64,
    pub profile: Profile,
    pub interval: Interval,
    pub bc: Boundary,
    pub ext: Extension,
}

impl SLProblem {
    pub fn cone(nu: f64, alpha: f64, profile: Profile, l: f64, bc: Boundary, ext: Extension) -> Result<Self> {
        let p = SLProblem { nu, alpha, profile, interval: Interval::Cone { l }, bc, ext };
        p.validate()?;
        Ok(p)
    }

    pub fn frustum(nu: f64, alpha: f64, profile: Profile, a: f64, b: f64, bc: Boundary) -> Result<Self> {
        let p = SLProblem { nu, alpha, profile, interval: Interval::Frustum { a, b }, bc, ext: Extension::Plus };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0 && self.nu.is_finite() && self.alpha.is_finite()) {
            return Err(AnalyticError::InvalidParameter(format!("need ν ≥ 0 and finite α, got ν = {}, α = {}", self.nu, self.alpha)));
        }
        if let Interval::Frustum { a, b } = self.interval {
            if !(a > 0.0 && b > a) {
                return Err(AnalyticError::InvalidParameter(format!("frustum needs 0 < a < b, got [{a}, {b}]")));
            }
        }
        if self.ext == Extension::Minus && self.nu >= 1.0 {
            return Err(AnalyticError::InvalidParameter(format!("the − extension needs ν < 1, got {}", self.nu)));
        }
        self.profile.validate(self.interval.end())
    }

    /// Same problem with another profile.
    pub fn with_profile(&self, profile: Profile) -> Result<Self> {
        let p = SLProblem { profile, ..self.clone() };
        p.validate()?;
        Ok(p)
    }
}

/// Power-series data of `x² q(x)` at the tip.
struct TipSeries {
    /// `Q_k`, with `Q_0 = ν² − ¼`.
    q: Vec<f64>,
    /// Radius of convergence estimate.
    radius: f64,
}

const TIP_TERMS: usize = 600;

fn series_div(num: &[f64], den: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut s = num.get(k).copied().unwrap_or(0.0);
        for j in 1..=k.min(den.len() - 1) {
            s -= den[j] * out[k - j];
        }
        out[k] = s / den[0];
    }
    out
}

fn series_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect()
}

impl TipSeries {
    fn new(p: &SLProblem) -> TipSeries {
        let n = TIP_TERMS;
        let big_h: Vec<f64> = p.profile.h_coeffs()[1..].to_vec();
        let d1 = derivative(&big_h);
        let d2 = derivative(&d1);
        let inv = series_div(&[1.0], &big_h, n);
        // x h'/h = 1 + x H'/H ; x² h''/h = x (2H' + x H'')/H ; x/h = 1/H
        let mut xd1 = vec![0.0];
        xd1.extend(&d1);
        let r1 = series_mul(&xd1, &inv, n);
        let mut t = vec![1.0];
        t.resize(n, 0.0);
        for k in 0..n {
            t[k] += r1[k];
        }
        let p2 = series_mul(&t, &t, n);
        let mut inner: Vec<f64> = d1.iter().map(|c| 2.0 * c).collect();
        inner.resize(d2.len().max(inner.len()) + 1, 0.0);
        for (k, &c) in d2.iter().enumerate() {
            inner[k + 1] += c;
        }
        let mut xinner = vec![0.0];
        xinner.extend(inner);
        let p1 = series_mul(&xinner, &inv, n);
        let p3 = series_mul(&inv, &inv, n);
        let (a, nu) = (p.alpha, p.nu);
        let q: Vec<f64> = (0..n).map(|k| -(a - 0.5) * p1[k] + (a * a - 0.25) * p2[k] + (nu * nu - a * a) * p3[k]).collect();
        let mut radius = f64::INFINITY;
        for (k, &c) in q.iter().enumerate().skip(n / 2) {
            if c != 0.0 {
                radius = radius.min(c.abs().powf(-1.0 / k as f64));
            }
        }
        TipSeries { q, radius }
    }
}

/// `(u, u')` of a normalised solution from the Frobenius series at `x`.
fn frobenius(tip: &TipSeries, nu: f64, lambda: f64, ext: Extension, x: f64) -> Result<(f64, f64)> {
    let q = &tip.q;
    let n = q.len();
    // coefficients a_j of u₊ = x^{½+ν} Σ a_j x^j
    let plus = coefficients(q, nu, 1.0, lambda);
    let (u, du, max_term) = match ext {
        Extension::Plus => eval_series(&plus?, 0.5 + nu, x),
        Extension::Minus if nu == 0.0 => {
            // u₋ = u₊ log x + x^{½} F with F(0) = 0:
            // j² b_j = −2j a_j + Σ Q_k b_{j−k} − λ b_{j−2}
            let a = plus?;
            let mut b = vec![0.0; n];
            for j in 1..n {
                let mut rhs = -2.0 * j as f64 * a[j];
                for k in 1..=j {
                    rhs += q[k] * b[j - k];
                }
                if j >= 2 {
                    rhs -= lambda * b[j - 2];
                }
                b[j] = rhs / (j * j) as f64;
            }
            let (up, dup, m1) = eval_series(&a, 0.5, x);
            let (f, df, m2) = eval_series(&b, 0.5, x);
            (up * x.ln() + f, dup * x.ln() + up / x + df, m1.max(m2))
        }
        Extension::Minus => {
            let two_nu = 2.0 * nu;
            let resonance = if two_nu == two_nu.round() { Some(two_nu as usize) } else { None };
            match resonance {
                None => eval_series(&coefficients(q, nu, -1.0, lambda)?, 0.5 - nu, x),
                Some(nres) => {
                    // u₋ = c u₊ log x + x^{½−ν} Σ b_i x^i, b_N = 0,
                    // i(i−N) b_i = Σ Q_k b_{i−k} − λ b_{i−2} − 2c(i−ν) a_{i−N}
                    let a = plus?;
                    let mut b = vec![0.0; n];
                    b[0] = 1.0;
                    let mut c = 0.0;
                    for i in 1..n {
                        let mut rhs = 0.0;
                        for k in 1..=i {
                            rhs += q[k] * b[i - k];
                        }
                        if i >= 2 {
                            rhs -= lambda * b[i - 2];
                        }
                        if i == nres {
                            c = rhs / two_nu;
                            b[i] = 0.0;
                            continue;
                        }
                        if i > nres {
                            rhs -= 2.0 * c * (i as f64 - nu) * a[i - nres];
                        }
                        b[i] = rhs / (i as f64 * (i as f64 - two_nu));
                    }
                    let (s, ds, m1) = eval_series(&b, 0.5 - nu, x);
                    if c == 0.0 {
                        (s, ds, m1)
                    } else {
                        let (up, dup, m2) = eval_series(&a, 0.5 + nu, x);
                        (c * up * x.ln() + s, c * (dup * x.ln() + up / x) + ds, m1.max(m2 * c.abs()))
                    }
                }
            }
        }
    };
    if !(u.is_finite() && du.is_finite()) || max_term > 1e4 * (u.abs() + du.abs() * x).max(1e-300) {
        return Err(AnalyticError::SeriesDivergence(format!("Frobenius series at x = {x} loses too many digits")));
    }
    Ok((u, du))
}

/// `j(j ± 2ν) a_j = Σ_{k≥1} Q_k a_{j−k} − λ a_{j−2}`, `a_0 = 1`.
fn coefficients(q: &[f64], nu: f64, sign: f64, lambda: f64) -> Result<Vec<f64>> {
    let n = q.len();
    let mut a = vec![0.0; n];
    a[0] = 1.0;
    for j in 1..n {
        let mut rhs = 0.0;
        for k in 1..=j {
            rhs += q[k] * a[j - k];
        }
        if j >= 2 {
            rhs -= lambda * a[j - 2];
        }
        let den = j as f64 * (j as f64 + sign * 2.0 * nu);
        if den == 0.0 {
            return Err(AnalyticError::SeriesDivergence(format!("resonant exponent at j = {j}")));
        }
        a[j] = rhs / den;
    }
    Ok(a)
}

/// `x^ρ Σ a_j x^j` and its derivative, plus the largest term seen.
fn eval_series(a: &[f64], rho: f64, x: f64) -> (f64, f64, f64) {
    let mut s = 0.0;
    let mut ds = 0.0;
    let mut pw = 1.0;
    let mut max_term: f64 = 0.0;
    let mut small = 0;
    for (j, &c) in a.iter().enumerate() {
        let t = c * pw;
        s += t;
        ds += (j as f64 + rho) * t;
        max_term = max_term.max(t.abs());
        if t.abs() <= 1e-18 * max_term {
            small += 1;
            if small >= 3 && j > 4 {
                break;
            }
        } else {
            small = 0;
        }
        pw *= x;
    }
    let xr = x.powf(rho);
    (xr * s, xr * ds / x, max_term * xr)
}

/// `p(x₀ + t)` as a polynomial in `t`.
fn shift(p: &[f64], x0: f64) -> Vec<f64> {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] += x0 * c[j + 1];
        }
    }
    c
}

const TAYLOR_ORDER: usize = 36;

/// Continues `(u, u')` from `x0` to `x1 > x0` by local Taylor series.
fn integrate(p: &SLProblem, lambda: f64, x0: f64, x1: f64, mut state: (f64, f64)) -> Result<(f64, f64)> {
    let hc = p.profile.h_coeffs();
    let (a, nu) = (p.alpha, p.nu);
    let mut x = x0;
    let mut dt = (x1 - x0).min(0.5 * x0).min(2.0 / (1.0 + lambda.abs().sqrt()));
    let mut steps = 0;
    while x < x1 {
        steps += 1;
        if steps > 100_000 {
            return Err(AnalyticError::Stiffness(format!("too many steps at x = {x}")));
        }
        let hs = shift(&hc, x);
        let h1 = derivative(&hs);
        let h2 = derivative(&h1);
        let mut num = poly_mul(&h2, &hs).iter().map(|c| -(a - 0.5) * c).collect::<Vec<_>>();
        let sq = poly_mul(&h1, &h1);
        if num.len() < sq.len() {
            num.resize(sq.len(), 0.0);
        }
        for (k, c) in sq.iter().enumerate() {
            num[k] += (a * a - 0.25) * c;
        }
        num[0] += nu * nu - a * a;
        let den = poly_mul(&hs, &hs);
        let mut pot = series_div(&num, &den, TAYLOR_ORDER);
        pot[0] -= lambda;
        let mut c = vec![0.0; TAYLOR_ORDER + 1];
        c[0] = state.0;
        c[1] = state.1;
        for j in 0..TAYLOR_ORDER - 1 {
            let s: f64 = (0..=j).map(|k| pot[k] * c[j - k]).sum();
            c[j + 2] = s / ((j + 2) * (j + 1)) as f64;
        }
        let step = dt.min(x1 - x);
        let scale = state.0.abs() + state.1.abs() * step + 1e-300;
        let tail = c[TAYLOR_ORDER].abs() * step.powi(TAYLOR_ORDER as i32) + c[TAYLOR_ORDER - 1].abs() * step.powi(TAYLOR_ORDER as i32 - 1);
        if tail > 1e-17 * scale && step > 1e-9 {
            dt = step * 0.5;
            continue;
        }
        let (mut u, mut du) = (0.0, 0.0);
        for j in (0..=TAYLOR_ORDER).rev() {
            u = u * step + c[j];
            if j >= 1 {
                du = du * step + j as f64 * c[j];
            }
        }
        state = (u, du);
        x = if x1 - x <= step { x1 } else { x + step };
        if !(u.is_finite() && du.is_finite()) {
            return Err(AnalyticError::Stiffness(format!("solution overflowed at x = {x}")));
        }
        // grow again after a successful step, never past half the
        // distance to the tip singularity
        if tail < 1e-20 * scale {
            dt = (step * 1.5).min(0.5 * x);
        }
    }
    Ok(state)
}

/// Normalised solutions evaluated along increasing grids.
pub struct FundamentalSolver<'a> {
    problem: &'a SLProblem,
    tip: TipSeries,
}

impl<'a> FundamentalSolver<'a> {
    pub fn new(problem: &'a SLProblem) -> Self {
        FundamentalSolver { problem, tip: TipSeries::new(problem) }
    }

    /// Handoff radius `min(l/4, ¼)`, capped by half the convergence radius.
    fn handoff(&self) -> f64 {
        let end = match self.problem.interval {
            Interval::Cone { l } => l,
            Interval::Frustum { a, .. } => a,
        };
        (end / 4.0).min(0.25).min(0.5 * self.tip.radius)
    }

    /// `(u, u')` of the chosen solution at each grid point (increasing).
    pub fn evaluate(&self, lambda: f64, ext: Extension, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        let mut rho = self.handoff();
        let start = loop {
            match frobenius(&self.tip, self.problem.nu, lambda, ext, rho) {
                Ok(s) => break s,
                Err(AnalyticError::SeriesDivergence(_)) if rho > 1e-4 => rho *= 0.5,
                Err(e) => return Err(e),
            }
        };
        let mut out = Vec::with_capacity(grid.len());
        let (mut x, mut state) = (rho, start);
        for &g in grid {
            if g <= rho {
                out.push(frobenius(&self.tip, self.problem.nu, lambda, ext, g)?);
                continue;
            }
            if g < x {
                return Err(AnalyticError::InvalidParameter("grid must be increasing".into()));
            }
            state = integrate(self.problem, lambda, x, g, state)?;
            x = g;
            out.push(state);
        }
        Ok(out)
    }

    fn at(&self, lambda: f64, ext: Extension, x: f64) -> Result<(f64, f64)> {
        Ok(self.evaluate(lambda, ext, &[x])?[0])
    }

    /// `(h^{α−½} u)'` from `(u, u')`.
    fn abs_derivative(&self, x: f64, (u, du): (f64, f64)) -> f64 {
        let (h, dh, _) = self.problem.profile.eval(x);
        let e = self.problem.alpha - 0.5;
        h.powf(e) * (du + e * dh / h * u)
    }

    fn boundary_value(&self, x: f64, s: (f64, f64)) -> f64 {
        match self.problem.bc {
            Boundary::Rel => s.0,
            Boundary::Abs => self.abs_derivative(x, s),
        }
    }

    /// `B(λ)` for cones, the determinant `A(λ)` for frusta.
    pub fn characteristic(&self, lambda: f64) -> Result<f64> {
        match self.problem.interval {
            Interval::Cone { l } => {
                let s = self.at(lambda, self.problem.ext, l)?;
                Ok(self.boundary_value(l, s))
            }
            Interval::Frustum { a, b } => {
                let plus = self.evaluate(lambda, Extension::Plus, &[a, b])?;
                let minus = self.evaluate(lambda, Extension::Minus, &[a, b])?;
                Ok(plus[0].0 * self.boundary_value(b, minus[1]) - minus[0].0 * self.boundary_value(b, plus[1]))
            }
        }
    }
}

pub fn characteristic(p: &SLProblem, lambda: f64) -> Result<f64> {
    FundamentalSolver::new(p).characteristic(lambda)
}

/// First `count` positive zeros of the characteristic function: a scan in
/// `√λ` with step `π/(8L)` (halved on suspicious spacing), then bisection to
/// 1e−12 relative.
pub fn eigenvalues(p: &SLProblem, count: usize) -> Result<Vec<f64>> {
    let solver = FundamentalSolver::new(p);
    let len = p.interval.length();
    let spacing = std::f64::consts::PI / len;
    let mut step = spacing / 8.0;
    for _attempt in 0..4 {
        let mut roots = Vec::with_capacity(count);
        let smax = (count as f64 + p.nu + 4.0) * spacing * 2.0 + 50.0 / len;
        let mut s0 = step * 1e-3;
        let mut f0 = solver.characteristic(s0 * s0)?;
        while roots.len() < count && s0 < smax {
            let s1 = s0 + step;
            let f1 = solver.characteristic(s1 * s1)?;
            if f0 == 0.0 {
                roots.push(s0 * s0);
            } else if f0.signum() != f1.signum() {
                roots.push(bisect(&solver, s0 * s0, s1 * s1, f0)?);
            }
            s0 = s1;
            f0 = f1;
        }
        if roots.len() < count {
            return Err(AnalyticError::BracketFailure(format!("found {} of {count} eigenvalues below √λ = {smax}", roots.len())));
        }
        // consecutive roots of these problems are about π/L apart in √λ
        let ok = roots.windows(2).all(|w| {
            let gap = w[1].sqrt() - w[0].sqrt();
            gap > 0.3 * spacing && gap < 1.7 * spacing
        });
        if ok {
            return Ok(roots);
        }
        step *= 0.5;
    }
    Err(AnalyticError::BracketFailure("eigenvalue spacing stayed irregular after refining the scan".into()))
}

fn bisect(solver: &FundamentalSolver, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * mid {
            break;
        }
        let fm = solver.characteristic(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `log(2^{ν−½} Γ(1+ν)/√π)`: the regularized large-λ limit of `log u₊(l, λ)`.
fn tip_constant(nu: f64) -> f64 {
    (nu - 0.5) * std::f64::consts::LN_2 + ln_gamma(1.0 + nu) - 0.5 * std::f64::consts::PI.ln()
}

/// `−ζ'(0)` of the eigenvalue ladder, from `log |B(0)|` and the
/// large-λ constant. Flat cones only.
pub fn zeta_determinant(p: &SLProblem) -> Result<f64> {
    let Interval::Cone { l } = p.interval else {
        return Err(AnalyticError::UnknownAsymptotics("frustum determinants".into()));
    };
    if !p.profile.is_flat() {
        return Err(AnalyticError::UnknownAsymptotics("non-flat profile".into()));
    }
    let nu_eff = match p.ext {
        Extension::Plus => p.nu,
        Extension::Minus if p.nu > 0.0 && p.nu < 1.0 => -p.nu,
        Extension::Minus => return Err(AnalyticError::UnknownAsymptotics("logarithmic − solution".into())),
    };
    let b0 = characteristic(p, 0.0)?;
    if b0.abs() < 1e-13 {
        return Err(AnalyticError::UnknownAsymptotics("zero is an eigenvalue".into()));
    }
    let mut constant = tip_constant(nu_eff);
    if p.bc == Boundary::Abs {
        constant += (p.alpha - 0.5) * p.profile.h(l).ln();
    }
    Ok(b0.abs().ln() - constant)
}

/// `−ζ'(0)` of the ladder `λ_k = (c(k+δ))²`, `k ≥ 1`, via Hurwitz zeta:
/// `−(½+δ) log c² − 2 log Γ(1+δ) + log 2π`.
pub fn linear_ladder_zeta_determinant(c: f64, delta: f64) -> Result<f64> {
    if !(c > 0.0 && delta > -1.0) {
        return Err(AnalyticError::InvalidParameter(format!("need c > 0 and δ > −1, got c = {c}, δ = {delta}")));
    }
    Ok(-(0.5 + delta) * 2.0 * c.ln() - 2.0 * ln_gamma(1.0 + delta) + (2.0 * std::f64::consts::PI).ln())
}

/// A computed ladder in the section-spectrum ladder format, tagged with
/// the problem that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LadderExport {
    pub schema: u32,
    pub problem: SLProblem,
    pub ladder: Ladder,
}

impl LadderExport {
    pub fn compute(p: &SLProblem, count: usize) -> Result<Self> {
        let values = eigenvalues(p, count)?;
        let multiplicities = vec![1; values.len()];
        Ok(LadderExport { schema: 1, problem: p.clone(), ladder: Ladder { values, multiplicities } })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ladders serialize")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub eps: f64,
    pub differences: Vec<f64>,
    pub max: f64,
    /// Least-squares slope of the differences against the index.
    pub slope: f64,
    pub bounded: bool,
}

/// Compares the first `count` eigenvalues for `h = x` and `h = x(1+εx)`.
pub fn perturbation_bound_check(flat: &SLProblem, eps: f64, count: usize) -> Result<PerturbationReport> {
    let base = eigenvalues(flat, count)?;
    let pert = eigenvalues(&flat.with_profile(Profile::quadratic(eps))?, count)?;
    let differences: Vec<f64> = base.iter().zip(&pert).map(|(a, b)| (a - b).abs()).collect();
    let max = differences.iter().copied().fold(0.0, f64::max);
    let n = count as f64;
    let mean_k = (n + 1.0) / 2.0;
    let mean_d = differences.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, d) in differences.iter().enumerate() {
        let k = i as f64 + 1.0;
        sxy += (k - mean_k) * (d - mean_d);
        sxx += (k - mean_k) * (k - mean_k);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Ok(PerturbationReport { eps, differences, max, slope, bounded: slope < 0.05 })
}

/// `u₊u₋' − u₊'u₋` along a grid.
pub fn wronskian_on_grid(p: &SLProblem, lambda: f64, grid: &[f64]) -> Result<Vec<f64>> {
    let solver = FundamentalSolver::new(p);
    let plus = solver.evaluate(lambda, Extension::Plus, grid)?;
    let minus = solver.evaluate(lambda, Extension::Minus, grid)?;
    Ok(plus.iter().zip(&minus).map(|(a, b)| a.0 * b.1 - a.1 * b.0).collect())
}
