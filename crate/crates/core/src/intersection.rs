//! Perversities and the intersection chain complexes of cones, relative
//! cones and mapping cones, with their homology closed forms.

use std::fmt;

use serde::Serialize;

use crate::complex::{ChainComplex, ChainInclusion, RegularCWComplex};
use crate::linalg::IntMatrix;
use crate::snf::{homology, HomologyGroup, KernelLattice};
use crate::CoreError;

/// `p_2, …, p_n` with `p_2 = 0` and unit-or-zero increments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Perversity {
    n: usize,
    values: Vec<i64>,
}

impl Perversity {
    pub fn new(n: usize, values: Vec<i64>) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidPerversity(format!("n = {n} < 2")));
        }
        if values.len() != n - 1 {
            return Err(CoreError::InvalidPerversity(format!("need {} values p_2..p_{n}, got {}", n - 1, values.len())));
        }
        if values[0] != 0 {
            return Err(CoreError::InvalidPerversity(format!("p_2 = {} (must be 0)", values[0])));
        }
        for (k, w) in values.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step != 0 && step != 1 {
                return Err(CoreError::InvalidPerversity(format!("p_{} − p_{} = {step}", k + 3, k + 2)));
            }
        }
        Ok(Perversity { n, values })
    }

    fn from_fn(n: usize, f: impl Fn(i64) -> i64) -> Self {
        Self::new(n, (2..=n as i64).map(f).collect()).expect("built-in perversity")
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_| 0)
    }

    pub fn top(n: usize) -> Self {
        Self::from_fn(n, |j| j - 2)
    }

    /// `m_j = ⌊j/2⌋ − 1`.
    pub fn lower_middle(n: usize) -> Self {
        Self::from_fn(n, |j| j / 2 - 1)
    }

    /// Complement of the lower middle perversity, `⌈j/2⌉ − 1`.
    pub fn upper_middle(n: usize) -> Self {
        Self::lower_middle(n).complement()
    }

    /// `p^c_j = j − p_j − 2`.
    pub fn complement(&self) -> Self {
        let values = self.values.iter().enumerate().map(|(k, p)| (k as i64 + 2) - p - 2).collect();
        Perversity { n: self.n, values }
    }

    /// Every admissible perversity of length `n`.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1u64 << (n - 2))
            .map(|bits| {
                let mut v = vec![0i64];
                for k in 0..n - 2 {
                    v.push(v[k] + ((bits >> k) & 1) as i64);
                }
                Perversity { n, values: v }
            })
            .collect()
    }

    /// Accepts `middle`/`lower-middle`, `middle-c`/`upper-middle`, `zero`,
    /// `top`, or an explicit list `0,0,1`.
    pub fn parse(spec: &str, n: usize) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::InvalidPerversity(format!("n = {n} < 2")));
        }
        match spec {
            "middle" | "lower-middle" | "m" => Ok(Self::lower_middle(n)),
            "middle-c" | "upper-middle" | "mc" => Ok(Self::upper_middle(n)),
            "zero" => Ok(Self::zero(n)),
            "top" => Ok(Self::top(n)),
            list => {
                let values = list
                    .split(',')
                    .map(|s| s.trim().parse::<i64>().map_err(|_| CoreError::InvalidPerversity(format!("bad entry {s:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(n, values)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self, j: usize) -> i64 {
        self.values[j - 2]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `a = n − p_n`; always in `[2, n]`.
    pub fn cutoff(&self) -> usize {
        (self.n as i64 - self.p(self.n)) as usize
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// Whether a cell may appear in a `q`-chain: its closure meets the
/// singular vertices in dimension at most `q − n + p_n`.
pub fn allowable(cell: &str, q: usize, p: &Perversity, k: &RegularCWComplex) -> bool {
    let meets = k.closure(cell).iter().any(|c| k.singular_vertices().contains(c));
    !meets || q >= p.cutoff()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Base,
    Kernel,
    ConeBlock,
}

#[derive(Clone, Debug)]
pub enum Source {
    Cone { section: ChainComplex },
    RelativeCone { section: ChainComplex },
    MappingCone { inclusion: ChainInclusion },
}

/// An intersection chain complex together with how it was built.
#[derive(Clone, Debug)]
pub struct IntersectionChainComplex {
    pub complex: ChainComplex,
    pub perversity: Perversity,
    /// Lattice `Z_{a−1}` of the section, in section cell coordinates.
    pub kernel: KernelLattice,
    pub tags: Vec<Vec<Provenance>>,
    pub source: Source,
}

impl IntersectionChainComplex {
    pub fn cutoff(&self) -> usize {
        self.perversity.cutoff()
    }

    pub fn homology(&self) -> Vec<HomologyGroup> {
        homology(&self.complex)
    }

    /// Homology predicted from the section (or regular part and link).
    pub fn closed_form(&self) -> Vec<HomologyGroup> {
        let a = self.cutoff();
        match &self.source {
            Source::Cone { section } => cone_closed_form(&homology(section), a, false),
            Source::RelativeCone { section } => cone_closed_form(&homology(section), a, true),
            Source::MappingCone { inclusion } => mapping_cone_closed_form(inclusion, a),
        }
    }

    /// Matrix of the map induced on intersection complexes by a chain map
    /// `f` between sections (given per degree in cell coordinates). Both
    /// complexes must be cones of the same kind and perversity.
    pub fn induced_map(&self, target: &IntersectionChainComplex, f: &[IntMatrix]) -> Result<Vec<IntMatrix>, CoreError> {
        let a = self.cutoff();
        let relative = matches!(self.source, Source::RelativeCone { .. });
        let fq = |q: usize| f.get(q).cloned().unwrap_or_else(|| IntMatrix::zeros(0, 0));
        let kernel_part = || -> Result<IntMatrix, CoreError> {
            let img = &fq(a - 1) * &self.kernel.basis;
            target
                .kernel
                .coords(&img)
                .ok_or_else(|| CoreError::validation("-", "map does not send cycles to cycles"))
        };
        (0..=self.complex.top())
            .map(|q| {
                let block = |x: &IntMatrix, y: &IntMatrix| {
                    IntMatrix::block(&[
                        vec![x, &IntMatrix::zeros(x.rows(), y.cols())],
                        vec![&IntMatrix::zeros(y.rows(), x.cols()), y],
                    ])
                };
                Ok(match (relative, q.cmp(&a)) {
                    (false, std::cmp::Ordering::Less) => fq(q),
                    (false, std::cmp::Ordering::Equal) => block(&kernel_part()?, &fq(a)),
                    (false, std::cmp::Ordering::Greater) => block(&fq(q - 1), &fq(q)),
                    (true, std::cmp::Ordering::Less) => IntMatrix::zeros(0, 0),
                    (true, std::cmp::Ordering::Equal) => kernel_part()?,
                    (true, std::cmp::Ordering::Greater) => fq(q - 1),
                })
            })
            .collect()
    }
}

fn check_length(p: &Perversity, top: usize, what: &str) -> Result<(), CoreError> {
    if p.n() != top {
        return Err(CoreError::InvalidPerversity(format!("perversity has n = {}, but the {what} needs n = {top}", p.n())));
    }
    Ok(())
}

/// Intersection complex of the cone over a section complex:
/// `C_q` below the cutoff, `Z_{a−1} ⊕ C_a` at it, cone modules above. The
/// relative version is `0`, `Z_{a−1}`, `C_{q−1}`.
pub fn intersection_cone_complex(c: &ChainComplex, p: &Perversity, relative: bool) -> Result<IntersectionChainComplex, CoreError> {
    check_length(p, c.top() + 1, "cone over this section")?;
    let kernel = KernelLattice::of(&c.boundary(p.cutoff() - 1));
    intersection_cone_complex_with_kernel(c, p, relative, kernel)
}

/// As [`intersection_cone_complex`] with a caller-chosen basis of
/// `Z_{a−1}`.
pub fn intersection_cone_complex_with_kernel(
    c: &ChainComplex,
    p: &Perversity,
    relative: bool,
    kernel: KernelLattice,
) -> Result<IntersectionChainComplex, CoreError> {
    check_length(p, c.top() + 1, "cone over this section")?;
    let a = p.cutoff();
    let m = c.top();
    let c = c.extended_to(m + 1);
    let k = kernel.rank();
    let z_coords = kernel.coords(&c.boundary(a)).ok_or_else(|| CoreError::validation("-", "kernel basis does not span Z_{a-1}"))?;
    let eye = |d: usize| IntMatrix::identity(d);
    let zeros = IntMatrix::zeros;

    let (dims, boundaries, tags, labels): (Vec<usize>, Vec<IntMatrix>, Vec<Vec<Provenance>>, Vec<Vec<String>>) = if relative {
        let dims: Vec<usize> = (0..=m + 1).map(|q| if q < a { 0 } else if q == a { k } else { c.dim(q - 1) }).collect();
        let boundaries = (1..=m + 1)
            .map(|q| {
                if q <= a {
                    zeros(dims[q - 1], dims[q])
                } else if q == a + 1 {
                    z_coords.clone()
                } else {
                    c.boundary(q - 1)
                }
            })
            .collect();
        let tags = (0..=m + 1)
            .map(|q| {
                let t = if q == a { Provenance::Kernel } else { Provenance::ConeBlock };
                vec![t; dims[q]]
            })
            .collect();
        let labels = (0..=m + 1)
            .map(|q| {
                if q < a {
                    vec![]
                } else if q == a {
                    (0..k).map(|j| format!("z{}.{j}", a - 1)).collect()
                } else {
                    c.labels(q - 1).iter().map(|s| format!("v*{s}")).collect()
                }
            })
            .collect();
        (dims, boundaries, tags, labels)
    } else {
        let dims: Vec<usize> =
            (0..=m + 1).map(|q| if q < a { c.dim(q) } else if q == a { k + c.dim(a) } else { c.dim(q - 1) + c.dim(q) }).collect();
        let boundaries = (1..=m + 1)
            .map(|q| {
                if q < a {
                    c.boundary(q)
                } else if q == a {
                    IntMatrix::hstack(&[&kernel.basis, &c.boundary(a).neg()])
                } else {
                    let upper = if q == a + 1 { z_coords.clone() } else { c.boundary(q - 1) };
                    let zero = zeros(upper.rows(), c.dim(q));
                    IntMatrix::block(&[vec![&upper, &zero], vec![&eye(c.dim(q - 1)), &c.boundary(q).neg()]])
                }
            })
            .collect();
        let tags = (0..=m + 1)
            .map(|q| {
                if q < a {
                    vec![Provenance::Base; dims[q]]
                } else {
                    let first = if q == a { Provenance::Kernel } else { Provenance::ConeBlock };
                    let n_first = if q == a { k } else { c.dim(q - 1) };
                    let mut t = vec![first; n_first];
                    t.extend(vec![Provenance::Base; c.dim(q)]);
                    t
                }
            })
            .collect();
        let labels = (0..=m + 1)
            .map(|q| {
                let mut l: Vec<String> = if q < a {
                    vec![]
                } else if q == a {
                    (0..k).map(|j| format!("z{}.{j}", a - 1)).collect()
                } else {
                    c.labels(q - 1).iter().map(|s| format!("v*{s}")).collect()
                };
                l.extend(c.labels(q).iter().cloned());
                l
            })
            .collect();
        (dims, boundaries, tags, labels)
    };
    let complex = ChainComplex::new(dims, boundaries, labels)?;
    let section = c.truncated_to(m).expect("only the padding degree is dropped");
    let source = if relative { Source::RelativeCone { section } } else { Source::Cone { section } };
    Ok(IntersectionChainComplex { complex, perversity: p.clone(), kernel, tags, source })
}

/// Intersection complex of `M ∪_N C(N)` from the inclusion `i: C(N) → C(M)`:
/// `D_q` below the cutoff, `Z_{a−1}(N) ⊕ D_a` at it, mapping-cone modules
/// above.
pub fn intersection_mapping_cone(i: &ChainInclusion, p: &Perversity) -> Result<IntersectionChainComplex, CoreError> {
    let n = p.n();
    if i.target.effective_top() > n || i.source.effective_top() >= n {
        return Err(CoreError::InvalidPerversity(format!("perversity has n = {n}, too small for this pair")));
    }
    let a = p.cutoff();
    let c = i.source.truncated_to(n).expect("checked above").extended_to(n);
    let d = i.target.truncated_to(n).expect("checked above").extended_to(n);
    let inc = ChainInclusion::new(c.clone(), d.clone(), (0..=n).map(|q| i.map(q).to_vec()).collect())?;
    let kernel = KernelLattice::of(&c.boundary(a - 1));
    let k = kernel.rank();
    let z_coords = kernel.coords(&c.boundary(a)).expect("boundaries are cycles");
    let dims: Vec<usize> = (0..=n).map(|q| if q < a { d.dim(q) } else if q == a { k + d.dim(a) } else { c.dim(q - 1) + d.dim(q) }).collect();
    let boundaries = (1..=n)
        .map(|q| {
            if q < a {
                d.boundary(q)
            } else if q == a {
                let iz = &inc.matrix(a - 1) * &kernel.basis;
                IntMatrix::hstack(&[&iz, &d.boundary(a).neg()])
            } else {
                let upper = if q == a + 1 { z_coords.clone() } else { c.boundary(q - 1) };
                let zero = IntMatrix::zeros(upper.rows(), d.dim(q));
                IntMatrix::block(&[vec![&upper, &zero], vec![&inc.matrix(q - 1), &d.boundary(q).neg()]])
            }
        })
        .collect();
    let tags = (0..=n)
        .map(|q| {
            if q < a {
                vec![Provenance::Base; dims[q]]
            } else {
                let (first, n_first) = if q == a { (Provenance::Kernel, k) } else { (Provenance::ConeBlock, c.dim(q - 1)) };
                let mut t = vec![first; n_first];
                t.extend(vec![Provenance::Base; d.dim(q)]);
                t
            }
        })
        .collect();
    let labels = (0..=n)
        .map(|q| {
            let mut l: Vec<String> = if q < a {
                vec![]
            } else if q == a {
                (0..k).map(|j| format!("z{}.{j}", a - 1)).collect()
            } else {
                c.labels(q - 1).iter().map(|s| format!("v*{s}")).collect()
            };
            l.extend(d.labels(q).iter().cloned());
            l
        })
        .collect();
    let complex = ChainComplex::new(dims, boundaries, labels)?;
    Ok(IntersectionChainComplex { complex, perversity: p.clone(), kernel, tags, source: Source::MappingCone { inclusion: inc } })
}

/// Absolute: `H_q(C)` for `q ≤ a−2`, zero above. Relative: zero for
/// `q ≤ a−1`, `H_{q−1}(C)` for `a ≤ q ≤ m+1`.
pub fn cone_closed_form(section: &[HomologyGroup], a: usize, relative: bool) -> Vec<HomologyGroup> {
    let m = section.len() - 1;
    (0..=m + 1)
        .map(|q| match relative {
            false if q + 2 <= a => section[q].clone(),
            true if q >= a => section[q - 1].clone(),
            _ => HomologyGroup::zero(),
        })
        .collect()
}

/// `H_q(D)` for `q ≤ a−2`, the image of `H_{a−1}(D) → H_{a−1}(D, C)` at
/// `a−1`, and `H_q(D, C)` from `a` on.
pub fn mapping_cone_closed_form(i: &ChainInclusion, a: usize) -> Vec<HomologyGroup> {
    let top = i.top();
    let hd = homology(&i.target);
    let hrel = homology(&i.quotient());
    (0..=top)
        .map(|q| {
            if q + 2 <= a {
                hd[q].clone()
            } else if q + 1 == a {
                image_in_relative(i, q)
            } else {
                hrel[q].clone()
            }
        })
        .collect()
}

/// `Z_q(D) / (B_q(D) + i Z_q(C))`, the image of `H_q(D)` in `H_q(D, C)`.
pub fn image_in_relative(i: &ChainInclusion, q: usize) -> HomologyGroup {
    let zd = KernelLattice::of(&i.target.boundary(q));
    let zc = KernelLattice::of(&i.source.boundary(q));
    let b = i.target.boundary(q + 1);
    let iz = &i.matrix(q) * &zc.basis;
    let gens = IntMatrix::hstack(&[&b, &iz]);
    let rel = zd.coords(&gens).expect("boundaries and included cycles are cycles");
    HomologyGroup::cokernel(zd.rank(), &rel)
}

/// Report of computed versus predicted intersection homology.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionHomologyReport {
    pub perversity: Perversity,
    pub cutoff: usize,
    pub computed: Vec<HomologyGroup>,
    pub expected: Vec<HomologyGroup>,
    pub agree: bool,
}

pub fn intersection_homology_report(x: &IntersectionChainComplex) -> IntersectionHomologyReport {
    let computed = x.homology();
    let expected = x.closed_form();
    let agree = computed == expected;
    IntersectionHomologyReport { perversity: x.perversity.clone(), cutoff: x.cutoff(), computed, expected, agree }
}

/// SNF homology of the intersection complex, checked against the closed
/// form.
pub fn intersection_homology(x: &IntersectionChainComplex) -> Result<Vec<HomologyGroup>, CoreError> {
    let r = intersection_homology_report(x);
    if !r.agree {
        return Err(CoreError::ClosedFormMismatch(format!(
            "perversity {}: computed {:?}, expected {:?}",
            r.perversity,
            r.computed.iter().map(ToString::to_string).collect::<Vec<_>>(),
            r.expected.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(r.computed)
}

/// Intersection chains of a complex with marked singular vertices, built
/// cell by cell: non-star cells below the cutoff, the chains whose boundary
/// avoids the star at the cutoff, everything above.
pub fn allowable_complex(k: &RegularCWComplex, p: &Perversity) -> Result<ChainComplex, CoreError> {
    check_length(p, k.dim(), "complex")?;
    let n = k.dim();
    let a = p.cutoff();
    let full = k.chain_complex();
    let star = k.open_star(k.singular_vertices());
    let keep = |q: usize| -> Vec<usize> {
        full.labels(q)
            .iter()
            .enumerate()
            .filter(|(_, id)| q >= a || allowable(id, q, p, k))
            .map(|(j, _)| j)
            .collect()
    };
    debug_assert!((0..a).all(|q| keep(q).iter().all(|&j| !star.contains(&full.labels(q)[j]))));
    let kept: Vec<Vec<usize>> = (0..=n).map(keep).collect();
    let boundary_a = full.boundary(a).select_rows(&kept[a - 1]);
    let star_rows: Vec<usize> = (0..full.dim(a - 1)).filter(|j| !kept[a - 1].contains(j)).collect();
    let lattice = KernelLattice::of(&full.boundary(a).select_rows(&star_rows));

    let dims: Vec<usize> = (0..=n).map(|q| if q == a { lattice.rank() } else { kept[q].len() }).collect();
    let boundaries = (1..=n)
        .map(|q| {
            if q < a {
                full.boundary(q).select_rows(&kept[q - 1]).select_columns(&kept[q])
            } else if q == a {
                &boundary_a * &lattice.basis
            } else if q == a + 1 {
                lattice.coords(&full.boundary(q)).expect("boundaries of (a+1)-cells are allowable")
            } else {
                full.boundary(q)
            }
        })
        .collect();
    let labels = (0..=n)
        .map(|q| {
            if q == a {
                (0..lattice.rank()).map(|j| format!("x{a}.{j}")).collect()
            } else {
                kept[q].iter().map(|&j| full.labels(q)[j].clone()).collect()
            }
        })
        .collect();
    ChainComplex::new(dims, boundaries, labels)
}

/// Predicted intersection homology of `K = M ∪ C(N)`: `H_q(M)` for
/// `q ≤ a−2`, `Im(H_{a−1}(M) → H_{a−1}(M, N))`, and `H_q(K)` from `a` on.
pub fn pseudomanifold_closed_form(k: &RegularCWComplex, p: &Perversity) -> Result<Vec<HomologyGroup>, CoreError> {
    let a = p.cutoff();
    let dec = k.singular_decomposition()?;
    let hm = homology(&dec.regular.chain_complex());
    let hk = homology(&k.chain_complex());
    Ok((0..=k.dim())
        .map(|q| {
            if q + 2 <= a {
                hm[q].clone()
            } else if q + 1 == a {
                image_in_relative(&dec.inclusion, q)
            } else {
                hk[q].clone()
            }
        })
        .collect())
}

/// Rank table `(q, rank I^p H_q(C(W)), rank I^{p^c} H_{n−q}(C(W), W))`.
pub fn duality_ranks_check(section: &ChainComplex, p: &Perversity) -> Result<Vec<(usize, usize, usize)>, CoreError> {
    let n = p.n();
    let abs = intersection_cone_complex(section, p, false)?.homology();
    let rel = intersection_cone_complex(section, &p.complement(), true)?.homology();
    let table: Vec<(usize, usize, usize)> = (0..=n).map(|q| (q, abs[q].rank, rel[n - q].rank)).collect();
    if let Some(&(q, x, y)) = table.iter().find(|(_, x, y)| x != y) {
        return Err(CoreError::DualityViolation(format!("degree {q}: rank {x} vs dual rank {y}")));
    }
    Ok(table)
}

/// Rank duality `rank I^p H_q(K) = rank I^{p^c} H_{n−q}(K)` for a closed
/// pseudomanifold given by its regular part and link.
pub fn duality_ranks_check_pseudomanifold(i: &ChainInclusion, p: &Perversity) -> Result<Vec<(usize, usize, usize)>, CoreError> {
    let n = p.n();
    let x = intersection_mapping_cone(i, p)?.homology();
    let y = intersection_mapping_cone(i, &p.complement())?.homology();
    let table: Vec<(usize, usize, usize)> = (0..=n).map(|q| (q, x[q].rank, y[n - q].rank)).collect();
    if let Some(&(q, a, b)) = table.iter().find(|(_, a, b)| a != b) {
        return Err(CoreError::DualityViolation(format!("degree {q}: rank {a} vs dual rank {b}")));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_perversities() {
        assert_eq!(Perversity::lower_middle(4).values(), &[0, 0, 1]);
        assert_eq!(Perversity::zero(3).values(), &[0, 0]);
        assert_eq!(Perversity::lower_middle(4).complement().values(), &[0, 1, 1]);
        assert_eq!(Perversity::top(5).values(), &[0, 1, 2, 3]);
        assert_eq!(Perversity::all(4).len(), 4);
        assert!(Perversity::new(3, vec![0, 2]).is_err());
        assert!(Perversity::new(3, vec![1, 1]).is_err());
        assert_eq!(Perversity::parse("0,1", 3).unwrap().cutoff(), 2);
    }

    #[test]
    fn cutoffs_of_middle_perversities() {
        assert_eq!(Perversity::lower_middle(2).cutoff(), 2);
        assert_eq!(Perversity::lower_middle(3).cutoff(), 3);
        assert_eq!(Perversity::upper_middle(3).cutoff(), 2);
        for p in 1..6usize {
            assert_eq!(Perversity::lower_middle(2 * p).cutoff(), p + 1);
            assert_eq!(Perversity::lower_middle(2 * p + 1).cutoff(), p + 2);
            assert_eq!(Perversity::upper_middle(2 * p + 1).cutoff(), p + 1);
        }
    }
}
