//! Reidemeister torsion of based chain complexes over ℚ, Milnor
//! additivity, and the torsion of intersection complexes.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::{ChainComplex, ChainInclusion};
use crate::intersection::{intersection_cone_complex, intersection_mapping_cone, IntersectionChainComplex, Perversity};
use crate::linalg::{ln_rational, Int, Rat, RatMatrix};
use crate::snf::standard_bases;
use crate::CoreError;

/// A positive real `rational · exp(residual)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue {
    pub rational: Rat,
    pub residual: f64,
}

impl TorsionValue {
    pub fn one() -> Self {
        TorsionValue { rational: Rat::one(), residual: 0.0 }
    }

    pub fn from_rational(r: Rat) -> Self {
        assert!(r.is_positive(), "torsion values are positive");
        TorsionValue { rational: r, residual: 0.0 }
    }

    pub fn log(&self) -> f64 {
        ln_rational(&self.rational) + self.residual
    }

    pub fn inv(&self) -> Self {
        TorsionValue { rational: self.rational.recip(), residual: -self.residual }
    }

    pub fn powi(&self, k: i32) -> Self {
        let r = if k >= 0 { num_traits::pow(self.rational.clone(), k as usize) } else { num_traits::pow(self.rational.recip(), (-k) as usize) };
        TorsionValue { rational: r, residual: self.residual * k as f64 }
    }

    /// `self^{(−1)^q}`.
    pub fn alt(&self, q: usize) -> Self {
        if q % 2 == 0 {
            self.clone()
        } else {
            self.inv()
        }
    }

    /// Exact rational agreement and residuals within `tol`.
    pub fn agrees(&self, other: &Self, tol: f64) -> bool {
        self.rational == other.rational && (self.residual - other.residual).abs() <= tol
    }
}

impl Mul for &TorsionValue {
    type Output = TorsionValue;
    fn mul(self, rhs: &TorsionValue) -> TorsionValue {
        TorsionValue { rational: &self.rational * &rhs.rational, residual: self.residual + rhs.residual }
    }
}

impl fmt::Display for TorsionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residual == 0.0 {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} * exp({:.15})", self.rational, self.residual)
        }
    }
}

impl Serialize for TorsionValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TorsionValue", 3)?;
        st.serialize_field("rational", &self.rational.to_string())?;
        st.serialize_field("log_residual", &self.residual)?;
        st.serialize_field("log", &self.log())?;
        st.end()
    }
}

/// A chain complex over ℚ with a preferred chain basis (the coordinate
/// basis), a homology basis given by cycle representatives, optional
/// homology Gram matrices and a coefficient rank.
#[derive(Clone, Debug)]
pub struct BasedChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<RatMatrix>,
    pub homology: Vec<RatMatrix>,
    /// `G_q`; the homology basis counts as orthonormal for it, which adds
    /// `(−1)^q ½ log det G_q` to the log torsion.
    pub grams: Vec<Option<Vec<Vec<f64>>>>,
    pub coefficient_rank: u32,
}

impl BasedChainComplex {
    pub fn new(c: &ChainComplex, homology: Vec<RatMatrix>) -> Self {
        Self::from_rational(c.dims().to_vec(), (1..=c.top()).map(|q| c.boundary(q).to_rational()).collect(), homology)
    }

    pub fn from_rational(dims: Vec<usize>, boundaries: Vec<RatMatrix>, mut homology: Vec<RatMatrix>) -> Self {
        homology.resize_with(dims.len(), || RatMatrix::zeros(0, 0));
        for (q, h) in homology.iter_mut().enumerate() {
            if h.rows() == 0 && h.cols() == 0 {
                *h = RatMatrix::zeros(dims[q], 0);
            }
        }
        let grams = vec![None; dims.len()];
        BasedChainComplex { dims, boundaries, homology, grams, coefficient_rank: 1 }
    }

    /// Homology basis = the standard representatives `n_q`.
    pub fn with_standard_homology(c: &ChainComplex) -> Self {
        Self::new(c, standard_bases(c).n_rational())
    }

    pub fn with_grams(mut self, grams: Vec<Option<Vec<Vec<f64>>>>) -> Self {
        let len = self.dims.len();
        self.grams = grams;
        self.grams.resize(len, None);
        self
    }

    pub fn with_rank(mut self, k: u32) -> Self {
        self.coefficient_rank = k;
        self
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    pub fn boundary(&self, q: usize) -> RatMatrix {
        if q >= 1 && q <= self.boundaries.len() {
            self.boundaries[q - 1].clone()
        } else if q == 0 {
            RatMatrix::zeros(0, self.dim(0))
        } else {
            RatMatrix::zeros(self.dim(q - 1), self.dim(q))
        }
    }
}

/// Per-degree factors and the product.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    /// `|det(∂b_{q+1}, ĥ_q, b_q / c_q)|` before the alternating exponent.
    #[serde(serialize_with = "ser_rats")]
    pub factors: Vec<Rat>,
    pub gram_log_half_dets: Vec<f64>,
    pub value: TorsionValue,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn r_torsion(b: &BasedChainComplex) -> Result<TorsionValue, CoreError> {
    Ok(r_torsion_detailed(b, None)?.value)
}

/// `∏ |det(∂_{q+1}(b_{q+1}) ĥ_q b_q / c_q)|^{(−1)^q}`, with `b_q` chosen by
/// greedy column selection on `∂_q` in the given orders (default: natural).
pub fn r_torsion_detailed(b: &BasedChainComplex, orders: Option<&[Vec<usize>]>) -> Result<TorsionReport, CoreError> {
    let top = b.top();
    let lifts: Vec<Vec<usize>> = (0..=top + 1)
        .map(|q| {
            if q == 0 || q > top {
                return vec![];
            }
            let natural: Vec<usize> = (0..b.dim(q)).collect();
            let order = orders.and_then(|o| o.get(q)).unwrap_or(&natural);
            b.boundary(q).independent_columns(order)
        })
        .collect();
    let mut factors = Vec::with_capacity(top + 1);
    let mut halves = Vec::with_capacity(top + 1);
    let mut value = TorsionValue::one();
    for q in 0..=top {
        let h = &b.homology[q];
        if h.rows() != b.dim(q) {
            return Err(CoreError::RankMismatch { degree: q, expected: b.dim(q), got: h.rows() });
        }
        if q >= 1 && !(&b.boundary(q) * h).is_zero() {
            return Err(CoreError::IncompatibleBases(format!("homology basis in degree {q} is not made of cycles")));
        }
        let d_up = b.boundary(q + 1).select_columns(&lifts[q + 1]);
        let unit = RatMatrix::identity(b.dim(q)).select_columns(&lifts[q]);
        let m = RatMatrix::hstack(&[&d_up, h, &unit]);
        if m.cols() != b.dim(q) {
            return Err(CoreError::RankMismatch { degree: q, expected: b.dim(q), got: m.cols() });
        }
        let det = m.det().abs();
        if det.is_zero() {
            return Err(CoreError::SingularBasis { degree: q });
        }
        let half = match &b.grams[q] {
            Some(g) => {
                if g.len() != h.cols() {
                    return Err(CoreError::RankMismatch { degree: q, expected: h.cols(), got: g.len() });
                }
                0.5 * log_det_spd(g).ok_or_else(|| CoreError::IncompatibleBases(format!("Gram matrix in degree {q} is not positive definite")))?
            }
            None => 0.0,
        };
        let factor = TorsionValue { rational: det.clone(), residual: half };
        value = &value * &factor.alt(q);
        factors.push(det);
        halves.push(half);
    }
    Ok(TorsionReport { factors, gram_log_half_dets: halves, value: value.powi(b.coefficient_rank as i32) })
}

/// `log det` of a symmetric positive definite matrix by Cholesky.
pub fn log_det_spd(g: &[Vec<f64>]) -> Option<f64> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut acc = 0.0;
    for i in 0..n {
        if g[i].len() != n {
            return None;
        }
        for j in 0..=i {
            if (g[i][j] - g[j][i]).abs() > 1e-12 * (1.0 + g[i][j].abs()) {
                return None;
            }
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = g[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
                acc += 2.0 * l[i][i].ln();
            } else {
                l[i][j] = (g[i][j] - s) / l[j][j];
            }
        }
    }
    Some(acc)
}

/// Coordinates of the cycles `z` in the homology basis `h` of degree `q`:
/// solves `[h | ∂_{q+1}] x = z` and keeps the `h` part.
pub fn homology_coords(b: &BasedChainComplex, q: usize, h: &RatMatrix, z: &RatMatrix) -> Result<RatMatrix, CoreError> {
    let sys = RatMatrix::hstack(&[h, &b.boundary(q + 1)]);
    let x = sys.solve(z).ok_or_else(|| CoreError::IncompatibleBases(format!("degree {q}: vector is not a cycle")))?;
    let idx: Vec<usize> = (0..h.cols()).collect();
    Ok(x.select_rows(&idx))
}

/// Torsions of `0 → C → C' → C'' → 0` and of its long homology sequence.
#[derive(Clone, Debug, Serialize)]
pub struct MilnorReport {
    pub sub: TorsionValue,
    pub total: TorsionValue,
    pub quotient: TorsionValue,
    pub sequence: TorsionValue,
    /// `τ(C) · τ(C'') · τ(ℋ)`.
    pub product: TorsionValue,
    pub holds: bool,
}

/// The long exact homology sequence as an acyclic based complex:
/// `ℋ_{3q+2} = H_q(C)`, `ℋ_{3q+1} = H_q(C')`, `ℋ_{3q} = H_q(C'')`.
pub fn long_sequence(inc: &ChainInclusion, h_sub: &[RatMatrix], h_total: &[RatMatrix], h_quot: &[RatMatrix]) -> Result<BasedChainComplex, CoreError> {
    let top = inc.top();
    let sub = BasedChainComplex::new(&inc.source, h_sub.to_vec());
    let total = BasedChainComplex::new(&inc.target, h_total.to_vec());
    let quot_c = inc.quotient();
    let quot = BasedChainComplex::new(&quot_c, h_quot.to_vec());
    let rank = |b: &BasedChainComplex, q: usize| b.homology.get(q).map_or(0, |h| h.cols());

    let mut dims = Vec::with_capacity(3 * top + 3);
    for q in 0..=top {
        dims.push(rank(&quot, q));
        dims.push(rank(&total, q));
        dims.push(rank(&sub, q));
    }
    let mut boundaries = Vec::with_capacity(dims.len() - 1);
    for j in 1..dims.len() {
        let q = j / 3;
        let m = match j % 3 {
            // H_q(C'') → H_{q−1}(C)
            0 => {
                let comp = inc.complement(q);
                let h = &quot.homology[q];
                let mut lift = RatMatrix::zeros(inc.target.dim(q), h.cols());
                for (r, &t) in comp.iter().enumerate() {
                    for c in 0..h.cols() {
                        lift[(t, c)] = h[(r, c)].clone();
                    }
                }
                let bd = &total.boundary(q) * &lift;
                let mut back = RatMatrix::zeros(inc.source.dim(q - 1), h.cols());
                for (s, &(t, sign)) in inc.map(q - 1).iter().enumerate() {
                    for c in 0..h.cols() {
                        back[(s, c)] = &bd[(t, c)] * Rat::from_integer(Int::from(sign));
                    }
                }
                homology_coords(&sub, q - 1, &sub.homology[q - 1], &back)?
            }
            // H_q(C) → H_q(C')
            2 => {
                let img = &inc.matrix(q).to_rational() * &sub.homology[q];
                homology_coords(&total, q, &total.homology[q], &img)?
            }
            // H_q(C') → H_q(C'')
            _ => {
                let comp = inc.complement(q);
                let proj = total.homology[q].select_rows(&comp);
                homology_coords(&quot, q, &quot.homology[q], &proj)?
            }
        };
        boundaries.push(m);
    }
    let empty = dims.iter().map(|&d| RatMatrix::zeros(d, 0)).collect();
    let seq = BasedChainComplex::from_rational(dims, boundaries, empty);
    for q in 1..seq.top() {
        if !(&seq.boundary(q) * &seq.boundary(q + 1)).is_zero() {
            return Err(CoreError::IncompatibleBases(format!("long sequence is not a complex at position {q}")));
        }
    }
    Ok(seq)
}

/// Computes all four torsions of a short exact sequence given by an
/// inclusion and checks `τ(C') = τ(C) τ(C'') τ(ℋ)` exactly.
pub fn milnor_additivity_check(inc: &ChainInclusion, h_sub: &[RatMatrix], h_total: &[RatMatrix], h_quot: &[RatMatrix]) -> Result<MilnorReport, CoreError> {
    let sub = r_torsion(&BasedChainComplex::new(&inc.source, h_sub.to_vec()))?;
    let total = r_torsion(&BasedChainComplex::new(&inc.target, h_total.to_vec()))?;
    let quotient = r_torsion(&BasedChainComplex::new(&inc.quotient(), h_quot.to_vec()))?;
    let sequence = r_torsion(&long_sequence(inc, h_sub, h_total, h_quot)?)?;
    let product = &(&sub * &quotient) * &sequence;
    let holds = product.agrees(&total, 0.0);
    Ok(MilnorReport { sub, total, quotient, sequence, product, holds })
}

/// Milnor check with standard homology bases on all three complexes.
pub fn milnor_standard(inc: &ChainInclusion) -> Result<MilnorReport, CoreError> {
    let n = |c: &ChainComplex| standard_bases(c).n_rational();
    milnor_additivity_check(inc, &n(&inc.source), &n(&inc.target), &n(&inc.quotient()))
}

/// Homology data of a section: a basis `h_q` of `H_q ⊗ ℚ` (as cycles) and
/// optional Gram matrices declaring it orthonormal.
#[derive(Clone, Debug)]
pub struct SectionBases {
    pub homology: Vec<RatMatrix>,
    pub grams: Vec<Option<Vec<Vec<f64>>>>,
}

impl SectionBases {
    pub fn standard(c: &ChainComplex) -> Self {
        SectionBases { homology: standard_bases(c).n_rational(), grams: vec![None; c.top() + 1] }
    }

    pub fn with_grams(mut self, grams: Vec<Option<Vec<Vec<f64>>>>) -> Self {
        self.grams = grams;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeFactor {
    pub degree: usize,
    /// `|det(h_q / n_q)|`.
    pub basis_change: String,
    pub gram_log_half_det: f64,
    pub torsion_order: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionTorsionReport {
    pub perversity: Perversity,
    pub cutoff: usize,
    pub relative: bool,
    pub factors: Vec<DegreeFactor>,
    pub closed_form: TorsionValue,
    pub direct: TorsionValue,
    pub exact: bool,
}

/// `|det(h_q/n_q)|`, `½ log det G_q` and `#TH_q` for every section degree.
fn section_factors(section: &ChainComplex, bases: &SectionBases) -> Result<Vec<(Rat, f64, Int)>, CoreError> {
    let std = standard_bases(section);
    let based = BasedChainComplex::new(section, std.n_rational());
    (0..=section.top())
        .map(|q| {
            let n = std.degrees[q].n.to_rational();
            let h = &bases.homology[q];
            if h.cols() != n.cols() {
                return Err(CoreError::RankMismatch { degree: q, expected: n.cols(), got: h.cols() });
            }
            let coords = homology_coords(&based, q, &n, h)?;
            let det = coords.det().abs();
            if det.is_zero() {
                return Err(CoreError::SingularBasis { degree: q });
            }
            let half = match bases.grams.get(q).and_then(Option::as_ref) {
                Some(g) => 0.5 * log_det_spd(g).ok_or_else(|| CoreError::IncompatibleBases(format!("Gram matrix in degree {q} is not positive definite")))?,
                None => 0.0,
            };
            Ok((det, half, std.degrees[q].torsion_order()))
        })
        .collect()
}

/// Based version of an intersection cone complex whose homology basis is
/// carried over from the section.
pub fn based_intersection_cone(x: &IntersectionChainComplex, section: &ChainComplex, bases: &SectionBases) -> Result<BasedChainComplex, CoreError> {
    let a = x.cutoff();
    let m = section.top();
    let relative = matches!(x.source, crate::intersection::Source::RelativeCone { .. });
    let mut homology: Vec<RatMatrix> = (0..=m + 1).map(|q| RatMatrix::zeros(x.complex.dim(q), 0)).collect();
    let mut grams: Vec<Option<Vec<Vec<f64>>>> = vec![None; m + 2];
    if relative {
        let zbasis = x.kernel.basis.to_rational();
        for q in a - 1..=m {
            let h = &bases.homology[q];
            homology[q + 1] = if q + 1 == a {
                zbasis.solve(h).ok_or_else(|| CoreError::IncompatibleBases(format!("degree {q}: homology basis is not made of cycles")))?
            } else {
                h.clone()
            };
            grams[q + 1] = bases.grams.get(q).cloned().flatten();
        }
    } else {
        for q in 0..a.saturating_sub(1) {
            homology[q] = bases.homology[q].clone();
            grams[q] = bases.grams.get(q).cloned().flatten();
        }
    }
    Ok(BasedChainComplex::new(&x.complex, homology).with_grams(grams))
}

/// Closed form `∏_{q≤a−2} (|det(h_q/n_q)| #TH_q)^{(−1)^q}` (relative:
/// `∏_{q≥a−1} (…)^{(−1)^{q+1}}`), checked against the torsion of the
/// explicitly built intersection complex.
pub fn intersection_torsion_cone(
    section: &ChainComplex,
    p: &Perversity,
    relative: bool,
    bases: &SectionBases,
    k: u32,
) -> Result<IntersectionTorsionReport, CoreError> {
    let x = intersection_cone_complex(section, p, relative)?;
    intersection_torsion_of(&x, section, bases, k)
}

pub fn intersection_torsion_of(x: &IntersectionChainComplex, section: &ChainComplex, bases: &SectionBases, k: u32) -> Result<IntersectionTorsionReport, CoreError> {
    let a = x.cutoff();
    let m = section.top();
    let relative = matches!(x.source, crate::intersection::Source::RelativeCone { .. });
    let per = section_factors(section, bases)?;
    let range: Vec<usize> = if relative { (a - 1..=m).collect() } else { (0..a.saturating_sub(1)).collect() };
    let mut closed = TorsionValue::one();
    let mut factors = Vec::new();
    for &q in &range {
        let (det, half, th) = &per[q];
        let f = TorsionValue { rational: det * Rat::from_integer(th.clone()), residual: *half };
        let exponent = if relative { q + 1 } else { q };
        closed = &closed * &f.alt(exponent);
        factors.push(DegreeFactor { degree: q, basis_change: det.to_string(), gram_log_half_det: *half, torsion_order: th.to_string() });
    }
    let closed_form = closed.powi(k as i32);
    let direct = r_torsion(&based_intersection_cone(x, section, bases)?.with_rank(k))?;
    let exact = closed_form.agrees(&direct, 1e-12);
    Ok(IntersectionTorsionReport { perversity: x.perversity.clone(), cutoff: a, relative, factors, closed_form, direct, exact })
}

/// Inclusion `I^p Ċ(N) → I^p C̈(N → M)` of intersection complexes.
pub fn cone_into_mapping_cone(cone: &IntersectionChainComplex, total: &IntersectionChainComplex, inc: &ChainInclusion) -> Result<ChainInclusion, CoreError> {
    let a = cone.cutoff();
    let n = total.complex.top();
    let k = cone.kernel.rank();
    let shifted = |deg: usize, off: usize| -> Vec<(usize, i8)> { inc.map(deg).iter().map(|&(t, s)| (t + off, s)).collect() };
    let maps = (0..=n)
        .map(|q| {
            if q < a {
                return shifted(q, 0);
            }
            let low = if q == a { k } else { inc.source.dim(q - 1) };
            let mut v: Vec<(usize, i8)> = (0..low).map(|j| (j, 1)).collect();
            v.extend(shifted(q, low));
            v
        })
        .collect();
    ChainInclusion::new(cone.complex.clone(), total.complex.clone(), maps)
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudomanifoldTorsionReport {
    pub perversity: Perversity,
    pub cutoff: usize,
    pub cone: TorsionValue,
    pub relative: TorsionValue,
    pub sequence: TorsionValue,
    pub product: TorsionValue,
    pub direct: TorsionValue,
    pub exact: bool,
}

/// `τ(I^p K) = τ(I^p C(N)) · τ(M, N) · τ(I^p ℋ̈)` with standard bases,
/// against the torsion of the intersection mapping cone.
pub fn intersection_torsion_pseudomanifold(inc: &ChainInclusion, p: &Perversity) -> Result<PseudomanifoldTorsionReport, CoreError> {
    let n = p.n();
    let section = inc
        .source
        .truncated_to(n - 1)
        .ok_or_else(|| CoreError::InvalidPerversity(format!("perversity has n = {n}, too small for this link")))?
        .extended_to(n - 1);
    let total = intersection_mapping_cone(inc, p)?;
    let cone = intersection_cone_complex(&section, p, false)?;
    let ext = ChainInclusion::new(
        section.extended_to(n),
        inc.target.extended_to(n),
        (0..=n).map(|q| inc.map(q).to_vec()).collect(),
    )?;
    let split = cone_into_mapping_cone(&cone, &total, &ext)?;

    let bases = SectionBases::standard(&section);
    let cone_report = intersection_torsion_of(&cone, &section, &bases, 1)?;
    if !cone_report.exact {
        return Err(CoreError::ClosedFormMismatch("cone factor".into()));
    }
    let h_sub = based_intersection_cone(&cone, &section, &bases)?.homology;
    let h_total = standard_bases(&total.complex).n_rational();
    let h_quot = standard_bases(&split.quotient()).n_rational();
    let milnor = milnor_additivity_check(&split, &h_sub, &h_total, &h_quot)?;
    let product = &(&cone_report.closed_form * &milnor.quotient) * &milnor.sequence;
    let direct = milnor.total.clone();
    let exact = product.agrees(&direct, 0.0);
    Ok(PseudomanifoldTorsionReport {
        perversity: p.clone(),
        cutoff: p.cutoff(),
        cone: cone_report.closed_form,
        relative: milnor.quotient,
        sequence: milnor.sequence,
        product,
        direct,
        exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub m: usize,
    pub log_absolute: f64,
    pub log_relative_dual: f64,
    pub absolute: TorsionValue,
    pub relative_dual: TorsionValue,
    pub exact: bool,
}

/// `log I^p τ(C(W)) = (−1)^m log I^{p^c} τ(C(W), W)` with the same section
/// homology data on both sides.
pub fn torsion_duality_check(section: &ChainComplex, p: &Perversity, bases: &SectionBases) -> Result<DualityReport, CoreError> {
    let m = section.top();
    let abs = intersection_torsion_cone(section, p, false, bases, 1)?;
    let rel = intersection_torsion_cone(section, &p.complement(), true, bases, 1)?;
    let rel_signed = rel.direct.alt(m);
    let exact = abs.direct.agrees(&rel_signed, 1e-12);
    let report = DualityReport {
        m,
        log_absolute: abs.direct.log(),
        log_relative_dual: rel_signed.log(),
        absolute: abs.direct,
        relative_dual: rel_signed,
        exact,
    };
    if !report.exact {
        return Err(CoreError::DualityViolation(format!("{} vs {}", report.absolute, report.relative_dual)));
    }
    Ok(report)
}
