//! Coexact spectra of the model sections (round circle, flat 2-torus),
//! their zeta functions, and the analytic torsion of the section.
//!
//! Zeta functions are taken in the eigenvalue variable,
//! `ζ_q(s) = Σ m λ^{−s}` over the coexact `q`-form eigenvalues.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special::{exp_integral_e1, riemann_zeta_with_derivative, upper_gamma};
use crate::{AnalyticError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Terms with `e^{−x}` below `e^{−TAIL_EXP}` are dropped from lattice sums.
const TAIL_EXP: f64 = 60.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Section {
    /// Round circle of radius `r` (length `2πr`).
    Circle { r: f64 },
    /// `ℝ²/(L₁ℤ × L₂ℤ)`.
    Torus { l1: f64, l2: f64 },
}

impl Section {
    pub fn dim(&self) -> usize {
        match self {
            Section::Circle { .. } => 1,
            Section::Torus { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Section::Circle { r } => r > 0.0 && r.is_finite(),
            Section::Torus { l1, l2 } => l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(AnalyticError::InvalidParameter(format!("section parameters must be positive: {self:?}")))
        }
    }

    /// Total volume.
    pub fn volume(&self) -> f64 {
        match *self {
            Section::Circle { r } => 2.0 * PI * r,
            Section::Torus { l1, l2 } => l1 * l2,
        }
    }

    /// Betti numbers `r_q`.
    pub fn harmonic_dims(&self) -> Vec<usize> {
        match self {
            Section::Circle { .. } => vec![1, 1],
            Section::Torus { .. } => vec![1, 2, 1],
        }
    }

    /// Gram matrices of the integral homology bases (vertex class, loops,
    /// fundamental class) in the metric's harmonic inner product.
    pub fn harmonic_grams(&self) -> Vec<Vec<Vec<f64>>> {
        match *self {
            Section::Circle { r } => vec![vec![vec![2.0 * PI * r]], vec![vec![1.0 / (2.0 * PI * r)]]],
            Section::Torus { l1, l2 } => vec![
                vec![vec![l1 * l2]],
                vec![vec![l2 / l1, 0.0], vec![0.0, l1 / l2]],
                vec![vec![1.0 / (l1 * l2)]],
            ],
        }
    }

    /// Name of the bundled combinatorial model.
    pub fn bundled_model(&self) -> &'static str {
        match self {
            Section::Circle { .. } => "circle",
            Section::Torus { .. } => "torus",
        }
    }

    /// Same shape with every length multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Section {
        match *self {
            Section::Circle { r } => Section::Circle { r: c * r },
            Section::Torus { l1, l2 } => Section::Torus { l1: c * l1, l2: c * l2 },
        }
    }
}

/// Distinct eigenvalues with multiplicities, increasing.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub values: Vec<f64>,
    pub multiplicities: Vec<u64>,
}

impl Ladder {
    /// Sorts and merges values that agree to 1e−12 relative.
    pub fn from_unsorted(mut pairs: Vec<(f64, u64)>) -> Ladder {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = Ladder::default();
        for (v, m) in pairs {
            match out.values.last() {
                Some(&last) if (v - last).abs() <= 1e-12 * v.abs() => *out.multiplicities.last_mut().unwrap() += m,
                _ => {
                    out.values.push(v);
                    out.multiplicities.push(m);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.values.iter().copied().zip(self.multiplicities.iter().copied())
    }

    /// Number of eigenvalues `≤ x`, counted with multiplicity.
    pub fn count_below(&self, x: f64) -> u64 {
        self.iter().take_while(|&(v, _)| v <= x).map(|(_, m)| m).sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() != self.multiplicities.len() {
            return Err(AnalyticError::Ladder("values and multiplicities differ in length".into()));
        }
        if self.values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(AnalyticError::Ladder("eigenvalues must be positive and finite".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AnalyticError::Ladder("eigenvalues must be strictly increasing".into()));
        }
        if self.multiplicities.iter().any(|&m| m == 0) {
            return Err(AnalyticError::Ladder("multiplicities must be positive".into()));
        }
        Ok(())
    }
}

/// Spectral data of a section: Betti numbers and the coexact ladders in
/// degrees `0..m`, truncated at `cutoff` for built-in sections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionSpectrum {
    pub dim: usize,
    /// `None` for user-supplied ladders.
    pub section: Option<Section>,
    pub harmonic: Vec<usize>,
    pub ladders: Vec<Ladder>,
    pub cutoff: f64,
}

/// The serialized ladder file.
#[derive(Serialize, Deserialize)]
struct LadderFile {
    schema: u32,
    dim: usize,
    harmonic: Vec<usize>,
    #[serde(default)]
    section: Option<Section>,
    cutoff: Option<f64>,
    ladders: Vec<Ladder>,
}

impl SectionSpectrum {
    /// Built-in spectrum with all eigenvalues `≤ cutoff`.
    pub fn new(section: Section, cutoff: f64) -> Result<Self> {
        section.validate()?;
        if !(cutoff > 0.0) {
            return Err(AnalyticError::InvalidParameter(format!("cutoff must be positive, got {cutoff}")));
        }
        let ladders = match section {
            Section::Circle { r } => {
                let nmax = (cutoff.sqrt() * r).floor() as u64;
                vec![Ladder { values: (1..=nmax).map(|n| (n * n) as f64 / (r * r)).collect(), multiplicities: vec![2; nmax as usize] }]
            }
            Section::Torus { l1, l2 } => {
                let l = torus_ladder(l1, l2, cutoff);
                vec![l.clone(), l]
            }
        };
        Ok(SectionSpectrum { dim: section.dim(), harmonic: section.harmonic_dims(), section: Some(section), ladders, cutoff })
    }

    /// A spectrum given only by finite ladders. These are treated as the
    /// complete spectrum, so their zeta functions are finite sums.
    pub fn from_ladders(dim: usize, harmonic: Vec<usize>, ladders: Vec<Ladder>) -> Result<Self> {
        if harmonic.len() != dim + 1 {
            return Err(AnalyticError::Ladder(format!("need {} harmonic dimensions, got {}", dim + 1, harmonic.len())));
        }
        if ladders.len() != dim {
            return Err(AnalyticError::Ladder(format!("need {dim} coexact ladders, got {}", ladders.len())));
        }
        for l in &ladders {
            l.validate()?;
        }
        let cutoff = ladders.iter().filter_map(|l| l.values.last().copied()).fold(0.0, f64::max);
        Ok(SectionSpectrum { dim, section: None, harmonic, ladders, cutoff })
    }

    pub fn to_json(&self) -> String {
        let f = LadderFile {
            schema: 1,
            dim: self.dim,
            harmonic: self.harmonic.clone(),
            section: self.section.clone(),
            cutoff: Some(self.cutoff),
            ladders: self.ladders.clone(),
        };
        serde_json::to_string_pretty(&f).expect("ladders serialize")
    }

    /// Reads a ladder file. A file naming a built-in section is rebuilt
    /// from it; otherwise the ladders are taken as given.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: LadderFile = serde_json::from_str(text).map_err(|e| AnalyticError::Ladder(e.to_string()))?;
        if f.schema != 1 {
            return Err(AnalyticError::Ladder(format!("unsupported schema {}", f.schema)));
        }
        let mut s = Self::from_ladders(f.dim, f.harmonic, f.ladders)?;
        if let (Some(section), Some(cutoff)) = (f.section, f.cutoff) {
            let built = Self::new(section, cutoff)?;
            if built.ladders.iter().zip(&s.ladders).any(|(a, b)| a.len() != b.len()) {
                return Err(AnalyticError::Ladder("ladders do not match the named section".into()));
            }
            s = built;
        }
        Ok(s)
    }

    pub fn alpha(&self, q: usize) -> f64 {
        q as f64 + 0.5 * (1.0 - self.dim as f64)
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.harmonic.iter().enumerate().map(|(q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    pub fn is_builtin(&self) -> bool {
        self.section.is_some()
    }

    fn require_section(&self, what: &str) -> Result<Section> {
        self.section.clone().ok_or_else(|| AnalyticError::UnsupportedSection(format!("{what} (user-supplied ladder)")))
    }

    /// `ζ_q(s)` with an error bound.
    pub fn zeta(&self, q: usize, s: f64) -> Result<ZetaValue> {
        self.check_degree(q)?;
        match self.section {
            None => Ok(ZetaValue { value: self.ladders[q].iter().map(|(v, m)| m as f64 * v.powf(-s)).sum(), bound: 0.0 }),
            Some(Section::Circle { r }) => {
                let (z, _) = riemann_zeta_with_derivative(2.0 * s).ok_or(AnalyticError::Pole { s })?;
                Ok(ZetaValue { value: 2.0 * r.powf(2.0 * s) * z, bound: 1e-15 })
            }
            Some(Section::Torus { l1, l2 }) => {
                if s == 1.0 {
                    return Err(AnalyticError::Pole { s });
                }
                if s == 0.0 {
                    return Ok(ZetaValue { value: -1.0, bound: 0.0 });
                }
                if s < 0.0 && s == s.floor() {
                    return Ok(ZetaValue { value: 0.0, bound: 0.0 });
                }
                if s >= DIRECT_S {
                    return Ok(torus_direct(l1, l2, s, 0.0));
                }
                let e = epstein_gamma_times_zeta(l1, l2, s, 0.0);
                let g = crate::special::gamma_fn(s);
                Ok(ZetaValue { value: e.value / g, bound: e.bound / g.abs() })
            }
        }
    }

    /// `(ζ_q(0), ζ_q'(0))`.
    pub fn zeta_at_zero(&self, q: usize) -> Result<(f64, f64)> {
        self.check_degree(q)?;
        match self.section {
            None => {
                let l = &self.ladders[q];
                Ok((l.iter().map(|(_, m)| m as f64).sum(), -l.iter().map(|(v, m)| m as f64 * v.ln()).sum::<f64>()))
            }
            Some(Section::Circle { r }) => {
                // 2 r^{2s} ζ(2s)
                let (z, dz) = riemann_zeta_with_derivative(0.0).expect("regular at 0");
                Ok((2.0 * z, 4.0 * r.ln() * z + 4.0 * dz))
            }
            Some(Section::Torus { l1, l2 }) => Ok((-1.0, epstein_derivative_at_zero(l1, l2))),
        }
    }

    /// `log T(W) = ½ Σ_q (−1)^{q+1} ζ_q'(0)`.
    pub fn analytic_torsion(&self) -> Result<f64> {
        let mut t = 0.0;
        for q in 0..self.dim {
            let (_, d) = self.zeta_at_zero(q)?;
            t += if q % 2 == 0 { -0.5 * d } else { 0.5 * d };
        }
        Ok(t)
    }

    /// `λ^{(s)} ↦ Σ m (λ + mass2)^{−s}` for the torus ladders, continued
    /// through the theta split. Pole at `s = 1`.
    pub fn massive_zeta(&self, q: usize, s: f64, mass2: f64) -> Result<ZetaValue> {
        self.check_degree(q)?;
        match self.section {
            Some(Section::Torus { l1, l2 }) => {
                if s == 1.0 || (s <= 0.0 && s == s.floor()) {
                    return Err(AnalyticError::Pole { s });
                }
                if s >= DIRECT_S {
                    return Ok(torus_direct(l1, l2, s, mass2));
                }
                let e = epstein_gamma_times_zeta(l1, l2, s, mass2);
                let g = crate::special::gamma_fn(s);
                Ok(ZetaValue { value: e.value / g, bound: e.bound / g.abs() })
            }
            None => Ok(ZetaValue { value: self.ladders[q].iter().map(|(v, m)| m as f64 * (v + mass2).powf(-s)).sum(), bound: 0.0 }),
            Some(_) => Err(AnalyticError::UnsupportedSection("massive zeta function".into())),
        }
    }

    /// Weyl prediction for the number of coexact eigenvalues `≤ x` in
    /// degree `q`.
    pub fn weyl_count(&self, q: usize, x: f64) -> Result<f64> {
        self.check_degree(q)?;
        match self.require_section("Weyl law")? {
            Section::Circle { r } => Ok(2.0 * r * x.sqrt()),
            Section::Torus { l1, l2 } => Ok(l1 * l2 / (4.0 * PI) * x),
        }
    }

    /// Relative deviation of the ladder count from Weyl's law at the
    /// cutoff.
    pub fn weyl_deviation(&self, q: usize) -> Result<f64> {
        let w = self.weyl_count(q, self.cutoff)?;
        Ok((self.ladders[q].count_below(self.cutoff) as f64 - w).abs() / w)
    }

    /// Gram matrices of the section homology bases.
    pub fn harmonic_grams(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        Ok(self.require_section("harmonic Gram matrices")?.harmonic_grams())
    }

    fn check_degree(&self, q: usize) -> Result<()> {
        if q >= self.dim {
            Err(AnalyticError::InvalidParameter(format!("coexact degree {q} out of range 0..{}", self.dim)))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaValue {
    pub value: f64,
    pub bound: f64,
}

/// `4π²(j²/L₁² + k²/L₂²)` for `(j, k) ≠ 0` up to `cutoff`.
fn torus_ladder(l1: f64, l2: f64, cutoff: f64) -> Ladder {
    let jmax = (cutoff.sqrt() * l1 / (2.0 * PI)).floor() as i64;
    let kmax = (cutoff.sqrt() * l2 / (2.0 * PI)).floor() as i64;
    let mut pairs = Vec::new();
    for j in -jmax..=jmax {
        for k in -kmax..=kmax {
            if j == 0 && k == 0 {
                continue;
            }
            let v = torus_eigenvalue(l1, l2, j, k);
            if v <= cutoff {
                pairs.push((v, 1));
            }
        }
    }
    Ladder::from_unsorted(pairs)
}

fn torus_eigenvalue(l1: f64, l2: f64, j: i64, k: i64) -> f64 {
    4.0 * PI * PI * ((j * j) as f64 / (l1 * l1) + (k * k) as f64 / (l2 * l2))
}

/// Above this order the lattice sum converges fast enough to be summed
/// directly, and `Γ(s)` in the theta split would overflow near 171.
const DIRECT_S: f64 = 8.0;

/// `Σ' (λ + M)^{−s}` summed up to a radius where the Weyl tail is below
/// 1e−17 of the first term.
fn torus_direct(l1: f64, l2: f64, s: f64, mass2: f64) -> ZetaValue {
    let area_coef = l1 * l2 / (4.0 * PI);
    let c1 = 4.0 * PI * PI / (l1 * l1);
    let c2 = 4.0 * PI * PI / (l2 * l2);
    let first = c1.min(c2) + mass2;
    let ratio = (area_coef * first / (1e-17 * (s - 1.0))).powf(1.0 / (s - 1.0)).max(4.0);
    let bound = first * ratio;
    let mut terms = vec![];
    lattice_shell(c1, c2, bound, |lam| terms.push((lam + mass2).powf(-s)));
    // smallest first so that the large terms are added last
    terms.sort_by(|a, b| a.total_cmp(b));
    let value: f64 = terms.iter().sum();
    let tail = area_coef * (bound + mass2).powf(1.0 - s) / (s - 1.0);
    ZetaValue { value: value + tail, bound: tail + 1e-15 * value }
}

/// Visits `(j, k) ≠ 0` with `c₁j² + c₂k² ≤ bound`.
fn lattice_shell(c1: f64, c2: f64, bound: f64, mut f: impl FnMut(f64)) {
    let jmax = (bound / c1).sqrt().floor() as i64;
    for j in -jmax..=jmax {
        let rest = bound - c1 * (j * j) as f64;
        let kmax = (rest / c2).sqrt().floor() as i64;
        for k in -kmax..=kmax {
            if j != 0 || k != 0 {
                f(c1 * (j * j) as f64 + c2 * (k * k) as f64);
            }
        }
    }
}

/// `Γ(s) Σ' (λ + M)^{−s}` over the torus spectrum, split at `t = 1`:
///
/// `Σ' (λ+M)^{−s} Γ(s, λ+M) + Σ_n (−M)^n/n! [ (A/4π)/(s+n−1) − 1/(s+n)
///   + (A/4π) Σ' a^{s+n−1} Γ(1−s−n, a) ]`, with `a = (L₁²j² + L₂²k²)/4`
/// the Poisson-dual lattice.
fn epstein_gamma_times_zeta(l1: f64, l2: f64, s: f64, mass2: f64) -> ZetaValue {
    let area_coef = l1 * l2 / (4.0 * PI);
    let c1 = 4.0 * PI * PI / (l1 * l1);
    let c2 = 4.0 * PI * PI / (l2 * l2);
    let mut direct = 0.0;
    lattice_shell(c1, c2, TAIL_EXP, |lam| {
        let x = lam + mass2;
        direct += x.powf(-s) * upper_gamma(s, x);
    });
    let d1 = l1 * l1 / 4.0;
    let d2 = l2 * l2 / 4.0;
    let mut lower = 0.0;
    let mut coef = 1.0; // (−M)^n / n!
    for n in 0..200 {
        let sn = s + n as f64;
        let mut dual = 0.0;
        lattice_shell(d1, d2, TAIL_EXP, |a| dual += a.powf(sn - 1.0) * upper_gamma(1.0 - sn, a));
        let term = coef * (area_coef / (sn - 1.0) - 1.0 / sn + area_coef * dual);
        lower += term;
        if n > 2 && term.abs() < 1e-18 * lower.abs().max(1e-300) {
            break;
        }
        coef *= -mass2 / (n + 1) as f64;
        if coef == 0.0 {
            break;
        }
    }
    let value = direct + lower;
    ZetaValue { value, bound: 1e-14 * value.abs().max(1.0) + (-TAIL_EXP).exp() }
}

/// `ζ'(0) = R(0) − γ`, where `R` is the regular part of `Γ(s)ζ(s)` at
/// `s = 0` in the theta split at `t = 1`.
fn epstein_derivative_at_zero(l1: f64, l2: f64) -> f64 {
    let area_coef = l1 * l2 / (4.0 * PI);
    let c1 = 4.0 * PI * PI / (l1 * l1);
    let c2 = 4.0 * PI * PI / (l2 * l2);
    let mut direct = 0.0;
    lattice_shell(c1, c2, TAIL_EXP, |lam| direct += exp_integral_e1(lam));
    let mut dual = 0.0;
    lattice_shell(l1 * l1 / 4.0, l2 * l2 / 4.0, TAIL_EXP, |a| dual += (-a).exp() / a);
    -area_coef + area_coef * dual + direct - EULER_GAMMA
}
