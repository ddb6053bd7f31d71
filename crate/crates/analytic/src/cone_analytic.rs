//! Closed-form analytic torsion of a finite metric cone `C_{0,l}(W)` with
//! metric `dx² + h(x)² g_W`, its term-by-term assembly, the frustum
//! version, and the comparison with the intersection R-torsion.

use serde::{Deserialize, Serialize};

use icone_core::torsion::{intersection_torsion_cone, SectionBases};
use icone_core::{bundled, standard_bases, Perversity};

use crate::profile::Profile;
use crate::special::double_factorial_odd;
use crate::spectra::{Section, SectionSpectrum};
use crate::{AnalyticError, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// The two middle perversities of a cone of dimension `m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiddlePerversity {
    /// `m`, lower middle.
    Lower,
    /// `m^c`, upper middle.
    Upper,
}

impl MiddlePerversity {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "middle" | "lower-middle" | "m" => Ok(MiddlePerversity::Lower),
            "middle-c" | "upper-middle" | "mc" => Ok(MiddlePerversity::Upper),
            other => Err(AnalyticError::InvalidParameter(format!("unknown middle perversity {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MiddlePerversity::Lower => "middle",
            MiddlePerversity::Upper => "middle-c",
        }
    }

    /// The perversity on the `(m+1)`-dimensional cone.
    pub fn to_core(self, m: usize) -> Perversity {
        match self {
            MiddlePerversity::Lower => Perversity::lower_middle(m + 1),
            MiddlePerversity::Upper => Perversity::upper_middle(m + 1),
        }
    }

    /// `a = n − p_n`.
    pub fn cutoff(self, m: usize) -> usize {
        self.to_core(m).cutoff()
    }
}

/// A value with an error bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Term {
    pub value: f64,
    pub bound: f64,
}

impl Term {
    fn exact(value: f64) -> Term {
        Term { value, bound: 0.0 }
    }
}

/// Section spectrum, cone length and profile.
#[derive(Clone, Debug)]
pub struct ConeGeometry {
    pub spectrum: SectionSpectrum,
    pub l: f64,
    pub profile: Profile,
}

impl ConeGeometry {
    pub fn new(spectrum: SectionSpectrum, l: f64, profile: Profile) -> Result<Self> {
        profile.validate(l)?;
        Ok(ConeGeometry { spectrum, l, profile })
    }

    pub fn m(&self) -> usize {
        self.spectrum.dim
    }

    /// `γ_q = ∫₀^l h^{m−2q} dx`.
    pub fn gamma(&self, q: usize) -> Result<f64> {
        self.profile.power_integral(self.m() as i64 - 2 * q as i64, self.l)
    }

    fn h_l(&self) -> f64 {
        self.profile.h(self.l)
    }
}

/// How to evaluate `Σ_n m_n log((μ_n + α)/(μ_n − α))`, `μ_n = √(λ_n + α²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegsumMethod {
    /// `Σ_k 2α^{2k+1}/(2k+1) ζ_μ(2k+1)`, with `ζ_μ` expanded in `ζ_λ` at
    /// half-integers.
    ZetaExpansion,
    /// Truncated ladder with the two divergent orders subtracted, a Weyl
    /// tail, and `ζ_μ(1)`, `ζ_μ(3)` from the massive theta split.
    TruncatedLadder,
}

/// Zeta-regularized `Σ_n m_n log((μ_n+α)/(μ_n−α))` over the coexact
/// ladder in degree `q`.
pub fn regularized_log_sum(spec: &SectionSpectrum, q: usize, alpha: f64, method: RegsumMethod) -> Result<Term> {
    if q >= spec.dim {
        return Err(AnalyticError::InvalidParameter(format!("coexact degree {q} out of range")));
    }
    if alpha == 0.0 {
        return Ok(Term::exact(0.0));
    }
    let lad = &spec.ladders[q];
    let lmin = lad.min().ok_or_else(|| AnalyticError::InvalidParameter("empty ladder".into()))?;
    match spec.section {
        None => {
            // a finite ladder has an entire zeta function; the series and
            // the plain sum coincide
            match method {
                RegsumMethod::TruncatedLadder => {
                    let v = lad.iter().map(|(l, m)| {
                        let mu = (l + alpha * alpha).sqrt();
                        m as f64 * ((mu + alpha) / (mu - alpha)).ln()
                    });
                    Ok(Term { value: v.sum(), bound: 1e-15 * lad.len() as f64 })
                }
                RegsumMethod::ZetaExpansion => zeta_expansion(spec, q, alpha, lmin),
            }
        }
        Some(Section::Torus { l1, l2 }) => match method {
            RegsumMethod::ZetaExpansion => zeta_expansion(spec, q, alpha, lmin),
            RegsumMethod::TruncatedLadder => truncated_ladder(spec, q, alpha, l1 * l2),
        },
        Some(Section::Circle { .. }) => Err(AnalyticError::UnsupportedSection(
            "regularized log sum on the circle (ζ_μ has a pole at 1, and odd dimensions never need it)".into(),
        )),
    }
}

fn zeta_expansion(spec: &SectionSpectrum, q: usize, alpha: f64, lmin: f64) -> Result<Term> {
    let a2 = alpha * alpha;
    if a2 >= lmin {
        return Err(AnalyticError::PoleCollision(format!("α² = {a2} ≥ λ₁ = {lmin}")));
    }
    // the expansion of ζ_μ in ζ_λ converges absolutely only for 2α² < λ₁
    if 2.0 * a2 >= lmin {
        return Err(AnalyticError::SeriesDivergence(format!("zeta expansion needs 2α² < λ₁, got α² = {a2}, λ₁ = {lmin}")));
    }
    let ratio = a2 / lmin;
    // enough terms that ratio^n and (α/μ₁)^{2k} are below 1e−18
    let nmax = ((1e-18f64).ln() / ratio.ln()).ceil().max(4.0) as usize + 4;
    let mut zl = Vec::with_capacity(nmax + 1);
    let mut zb = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let z = spec.zeta(q, n as f64 + 0.5)?;
        zl.push(z.value);
        zb.push(z.bound);
    }
    let mut total = 0.0;
    let mut bound = 0.0;
    for k in 0..=nmax {
        let s = 2.0 * k as f64 + 1.0;
        // ζ_μ(s) = Σ_j C(−s/2, j) α^{2j} ζ_λ(s/2 + j)
        let (mut zm, mut zm_err) = (0.0, 0.0);
        let mut c = 1.0;
        for j in 0..=nmax - k {
            zm += c * zl[k + j];
            zm_err += c.abs() * zb[k + j];
            c *= (-s / 2.0 - j as f64) / (j + 1) as f64 * a2;
        }
        let w = 2.0 * alpha.powi(2 * k as i32 + 1) / s;
        let term = w * zm;
        total += term;
        bound += w.abs() * zm_err;
        if k > 2 && term.abs() < 1e-18 * total.abs() {
            break;
        }
    }
    Ok(Term { value: total, bound: bound + 1e-14 * total.abs() })
}

fn truncated_ladder(spec: &SectionSpectrum, q: usize, alpha: f64, area: f64) -> Result<Term> {
    let a2 = alpha * alpha;
    let lad = &spec.ladders[q];
    let mut head = 0.0;
    let mut comp = 0.0; // Kahan compensation
    for (l, m) in lad.iter() {
        let mu = (l + a2).sqrt();
        let x = alpha / mu;
        // log((1+x)/(1−x)) − 2x − 2x³/3 = Σ_{k≥2} 2x^{2k+1}/(2k+1)
        let full = 2.0 * x.atanh();
        let t = m as f64 * (full - 2.0 * x - 2.0 * x * x * x / 3.0);
        let y = t - comp;
        let s = head + y;
        comp = (s - head) - y;
        head = s;
    }
    let weyl = area / (4.0 * std::f64::consts::PI);
    let mu_c = (spec.cutoff + a2).sqrt();
    let mut tail = 0.0;
    for k in 2..60 {
        let kf = k as f64;
        let t = weyl * 2.0 * alpha.powi(2 * k + 1) / (2.0 * kf + 1.0) * 2.0 * mu_c.powf(1.0 - 2.0 * kf) / (2.0 * kf - 1.0);
        tail += t;
        if t.abs() < 1e-20 {
            break;
        }
    }
    let z1 = spec.massive_zeta(q, 0.5, a2)?;
    let z3 = spec.massive_zeta(q, 1.5, a2)?;
    let value = head + tail + 2.0 * alpha * z1.value + 2.0 * alpha.powi(3) / 3.0 * z3.value;
    // lattice-count remainder O(Λ^{1/3}) against the μ^{−5} tail
    let bound = 10.0 * alpha.abs().powi(5) * spec.cutoff.powf(1.0 / 3.0) * mu_c.powi(-5)
        + 2.0 * alpha.abs() * z1.bound
        + alpha.abs().powi(3) * z3.bound
        + 1e-15 * lad.len() as f64;
    Ok(Term { value, bound })
}

/// The terms `t₀ … t₃` and the closed form they assemble to.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionBreakdown {
    pub schema: u32,
    pub perversity: String,
    pub m: usize,
    pub l: f64,
    pub profile: Profile,
    pub cutoff: f64,
    pub euler_characteristic: i64,
    pub t0: Term,
    pub t1: Term,
    pub t2: Term,
    pub t3: Term,
    /// `Σ tᵢ − ¼χ log 2`.
    pub global: f64,
    pub closed_form: f64,
    /// Combined bound on `|global − closed_form|`.
    pub bound: f64,
    /// False for user ladders, whose heat invariants need not hold.
    pub assembly_checked: bool,
    /// Regularized sums in the closed form. When the zeta expansion does
    /// not converge both sides use the truncated ladder, and the
    /// assembly check only confirms the bookkeeping.
    pub closed_form_method: RegsumMethod,
}

/// The zeta expansion where it converges, the truncated ladder otherwise.
fn preferred_log_sum(spec: &SectionSpectrum, q: usize, alpha: f64) -> Result<(Term, RegsumMethod)> {
    match regularized_log_sum(spec, q, alpha, RegsumMethod::ZetaExpansion) {
        Ok(t) => Ok((t, RegsumMethod::ZetaExpansion)),
        Err(AnalyticError::SeriesDivergence(_)) => Ok((regularized_log_sum(spec, q, alpha, RegsumMethod::TruncatedLadder)?, RegsumMethod::TruncatedLadder)),
        Err(e) => Err(e),
    }
}

/// Global analytic torsion of the cone, term by term, checked against the
/// closed form.
pub fn cone_global_torsion(geom: &ConeGeometry, per: MiddlePerversity) -> Result<TorsionBreakdown> {
    let m = geom.m();
    let spec = &geom.spectrum;
    let r = &spec.harmonic;
    let chi = spec.euler_characteristic();
    let sign = |q: usize| if q % 2 == 0 { 1.0 } else { -1.0 };
    let hl = geom.h_l();
    let log_hl = hl.ln();
    let a = per.cutoff(m);
    let gammas: Vec<f64> = (0..a.saturating_sub(1)).map(|q| geom.gamma(q)).collect::<Result<_>>()?;
    let gamma_sum: f64 = gammas.iter().enumerate().map(|(q, g)| sign(q) * r[q] as f64 * g.ln()).sum();

    let (t0, t1, t2, t3, closed_extra);
    let mut closed_bound = 0.0;
    let mut closed_method = RegsumMethod::ZetaExpansion;
    if m % 2 == 1 {
        let p = (m + 1) / 2;
        let mut s0 = 0.0;
        for q in 0..p.saturating_sub(1) {
            let (z, dz) = spec.zeta_at_zero(q)?;
            s0 += -sign(q) * (0.5 * dz + z * log_hl);
        }
        let (z, dz) = spec.zeta_at_zero(p - 1)?;
        let s1 = sign(p) * (0.25 * dz + 0.5 * z * log_hl);
        let mut s2 = 0.0;
        for q in 0..p {
            let alpha = spec.alpha(q);
            s2 += 0.5 * sign(q) * r[q] as f64 * ((2.0 * alpha - 1.0) * log_hl + geom.gamma(q)?.ln());
        }
        t0 = Term::exact(s0);
        t1 = Term::exact(s1);
        t2 = Term::exact(s2);
        t3 = Term::exact(0.0);
        closed_extra = 0.5 * spec.analytic_torsion()?;
    } else {
        let p = m / 2;
        let mut s0 = Term::default();
        let mut reg1 = Term::default();
        for q in 0..p {
            let alpha = spec.alpha(q);
            let r2 = regularized_log_sum(spec, q, alpha, RegsumMethod::TruncatedLadder)?;
            let (r1, method) = preferred_log_sum(spec, q, alpha)?;
            if method == RegsumMethod::TruncatedLadder {
                closed_method = method;
            }
            s0.value += 0.5 * sign(q) * r2.value;
            s0.bound += 0.5 * r2.bound;
            reg1.value += 0.5 * sign(q) * r1.value;
            reg1.bound += 0.5 * r1.bound;
        }
        let mut s2 = 0.0;
        let mut dfact = 0.0;
        for q in 0..p {
            let df = double_factorial_odd(p - q).ln();
            dfact += -sign(q) * r[q] as f64 * df;
            s2 += -sign(q) * r[q] as f64 * df + sign(q) * r[q] as f64 * LN2 + 0.5 * sign(q) * r[q] as f64 * geom.gamma(q)?.ln();
        }
        let s3 = match per {
            MiddlePerversity::Upper => 0.5 * sign(p) * r[p] as f64 * LN2,
            MiddlePerversity::Lower => 0.5 * sign(p) * r[p] as f64 * (2.0 * geom.gamma(p)?).ln(),
        };
        t0 = s0;
        t1 = Term::exact(0.0);
        t2 = Term::exact(s2);
        t3 = Term::exact(s3);
        closed_extra = 0.25 * chi as f64 * LN2 + dfact + reg1.value;
        closed_bound = reg1.bound;
    }
    let global = t0.value + t1.value + t2.value + t3.value - 0.25 * chi as f64 * LN2;
    let closed_form = closed_extra + 0.5 * gamma_sum;
    let bound = t0.bound + closed_bound + 1e-12 * (1.0 + global.abs());
    let assembly_checked = spec.is_builtin();
    if assembly_checked && (global - closed_form).abs() > bound + 1e-9 {
        return Err(AnalyticError::AssemblyMismatch(format!("Σt = {global}, closed form = {closed_form}")));
    }
    Ok(TorsionBreakdown {
        schema: 1,
        perversity: per.name().into(),
        m,
        l: geom.l,
        profile: geom.profile.clone(),
        cutoff: spec.cutoff,
        euler_characteristic: chi,
        t0,
        t1,
        t2,
        t3,
        global,
        closed_form,
        bound,
        assembly_checked,
        closed_form_method: closed_method,
    })
}

/// `A_comb` and `A_analy`; both vanish in odd dimension.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Anomalies {
    pub combinatorial: f64,
    pub analytic: Term,
}

pub fn anomalies(spec: &SectionSpectrum, per: MiddlePerversity) -> Result<Anomalies> {
    let m = spec.dim;
    if m % 2 == 1 {
        return Ok(Anomalies { combinatorial: 0.0, analytic: Term::exact(0.0) });
    }
    let p = m / 2;
    let section = spec.section.clone().ok_or_else(|| AnalyticError::UnsupportedSection("combinatorial anomaly (needs a cell model)".into()))?;
    let c = bundled::load(section.bundled_model()).chain_complex();
    let sb = standard_bases(&c);
    let grams = section.harmonic_grams();
    let sign = |q: usize| if q % 2 == 0 { 1.0 } else { -1.0 };
    let top = match per {
        MiddlePerversity::Lower => p,
        MiddlePerversity::Upper => p - 1,
    };
    let mut comb = 0.0;
    for q in 0..=top {
        let th = icone_core::linalg::ln_rational(&icone_core::linalg::Rat::from_integer(sb.degrees[q].torsion_order()));
        let half = 0.5 * icone_core::torsion::log_det_spd(&grams[q]).expect("section Grams are positive definite");
        comb -= sign(q) * (th + half);
    }
    let mut analy = Term::exact(0.25 * spec.euler_characteristic() as f64 * LN2);
    for q in 0..p {
        analy.value += -sign(q) * spec.harmonic[q] as f64 * double_factorial_odd(p - q).ln();
        let (r, _) = preferred_log_sum(spec, q, spec.alpha(q))?;
        analy.value += 0.5 * sign(q) * r.value;
        analy.bound += 0.5 * r.bound;
    }
    Ok(Anomalies { combinatorial: comb, analytic: analy })
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub schema: u32,
    pub section: Section,
    pub perversity: String,
    pub l: f64,
    pub cutoff: f64,
    pub log_global: f64,
    pub log_intersection_torsion: f64,
    pub combinatorial_anomaly: f64,
    pub analytic_anomaly: f64,
    pub residual: f64,
    pub bound: f64,
}

/// `log T_global − log I^pτ_RS − A_comb − A_analy` for a built-in section.
/// The R-torsion uses the section's integral homology bases with Gram
/// matrices `γ_q G_q`.
pub fn cheeger_muller_check(geom: &ConeGeometry, per: MiddlePerversity) -> Result<CmReport> {
    let section = geom.spectrum.section.clone().ok_or_else(|| AnalyticError::UnsupportedSection("Cheeger–Müller check (needs a cell model)".into()))?;
    let m = geom.m();
    let breakdown = cone_global_torsion(geom, per)?;
    let c = bundled::load(section.bundled_model()).chain_complex();
    let p = per.to_core(m);
    let a = p.cutoff();
    let grams = section.harmonic_grams();
    let mut scaled: Vec<Option<Vec<Vec<f64>>>> = vec![None; m + 1];
    for q in 0..a.saturating_sub(1) {
        let g = geom.gamma(q)?;
        scaled[q] = Some(grams[q].iter().map(|row| row.iter().map(|x| g * x).collect()).collect());
    }
    let bases = SectionBases::standard(&c).with_grams(scaled);
    let report = intersection_torsion_cone(&c, &p, false, &bases, 1)?;
    if !report.exact {
        return Err(AnalyticError::Core(icone_core::CoreError::ClosedFormMismatch("intersection torsion".into())));
    }
    let itau = report.closed_form.log();
    let an = anomalies(&geom.spectrum, per)?;
    let residual = breakdown.global - itau - an.combinatorial - an.analytic.value;
    Ok(CmReport {
        schema: 1,
        section,
        perversity: per.name().into(),
        l: geom.l,
        cutoff: geom.spectrum.cutoff,
        log_global: breakdown.global,
        log_intersection_torsion: itau,
        combinatorial_anomaly: an.combinatorial,
        analytic_anomaly: an.analytic.value,
        residual,
        bound: breakdown.bound + an.analytic.bound,
    })
}

/// Terms of the frustum `[l₁, l₂] × W` and their closed form.
#[derive(Clone, Debug, Serialize)]
pub struct FrustumBreakdown {
    pub schema: u32,
    pub m: usize,
    pub l1: f64,
    pub l2: f64,
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub total: f64,
    /// Every term is `a·log(h(l₂)/h(l₁)) + b·log 2` with dyadic `a`, `b`;
    /// these are the summed coefficients, computed without rounding.
    pub log_ratio_coefficient: f64,
    pub log2_coefficient: f64,
    /// `0` in odd dimension, `½χ(W) log 2` in even dimension.
    pub closed_form: f64,
    /// The coefficients equal those of the closed form exactly.
    pub exact: bool,
}

/// `a·L + b·log 2`.
#[derive(Clone, Copy, Default)]
struct Lin {
    a: f64,
    b: f64,
}

impl Lin {
    fn add(self, o: Lin) -> Lin {
        Lin { a: self.a + o.a, b: self.b + o.b }
    }

    fn scale(self, c: f64) -> Lin {
        Lin { a: c * self.a, b: c * self.b }
    }

    fn eval(self, big_l: f64) -> f64 {
        self.a * big_l + self.b * LN2
    }
}

/// Frustum torsion from the `d̂_{q,±}(0)` values
/// `−log 2 + (½ ∓ α) log(h(l₂)/h(l₁))`.
pub fn frustum_global_torsion(spec: &SectionSpectrum, profile: &Profile, l1: f64, l2: f64) -> Result<FrustumBreakdown> {
    if !(l1 > 0.0 && l2 > l1) {
        return Err(AnalyticError::InvalidParameter(format!("frustum needs 0 < l1 < l2, got [{l1}, {l2}]")));
    }
    profile.validate(l2)?;
    let m = spec.dim;
    let r = &spec.harmonic;
    let big_l = (profile.h(l2) / profile.h(l1)).ln();
    let sign = |q: usize| if q % 2 == 0 { 1.0 } else { -1.0 };
    let sign_m1 = sign(m + 1); // (−1)^{m−1}
    let d_plus = |alpha: f64| Lin { a: 0.5 - alpha, b: -1.0 };
    let d_minus = |alpha: f64| Lin { a: 0.5 + alpha, b: -1.0 };
    let p = if m % 2 == 1 { (m + 1) / 2 } else { m / 2 };
    let mut w0 = Lin::default();
    for q in 0..p.saturating_sub(1) {
        let (z, _) = spec.zeta_at_zero(q)?;
        w0 = w0.add(Lin { a: -0.5 * sign(q) * z * (1.0 + sign_m1), b: 0.0 });
    }
    let mut w1 = Lin::default();
    let mut w2 = Lin::default();
    let mut w3 = Lin::default();
    if m % 2 == 1 {
        let (z, _) = spec.zeta_at_zero(p - 1)?;
        w1 = Lin { a: -0.5 * sign(p - 1) * z, b: 0.0 };
        for q in 0..p {
            let alpha = spec.alpha(q);
            let d = d_plus(alpha).add(d_minus(alpha - 1.0).scale(-1.0));
            w2 = w2.add(d.scale(0.5 * sign(q + 1) * r[q] as f64));
        }
    } else {
        for q in 0..p {
            let alpha = spec.alpha(q);
            let d = d_plus(alpha).add(d_minus(alpha - 1.0));
            w2 = w2.add(d.scale(0.5 * sign(q + 1) * r[q] as f64));
        }
        w3 = d_plus(spec.alpha(p)).scale(0.5 * sign(p + 1) * r[p] as f64);
    }
    let sum = w0.add(w1).add(w2).add(w3);
    let closed = if m % 2 == 1 { Lin::default() } else { Lin { a: 0.0, b: 0.5 * spec.euler_characteristic() as f64 } };
    Ok(FrustumBreakdown {
        schema: 1,
        m,
        l1,
        l2,
        w0: w0.eval(big_l),
        w1: w1.eval(big_l),
        w2: w2.eval(big_l),
        w3: w3.eval(big_l),
        total: sum.eval(big_l),
        log_ratio_coefficient: sum.a,
        log2_coefficient: sum.b,
        closed_form: closed.eval(big_l),
        exact: sum.a == closed.a && sum.b == closed.b,
    })
}
