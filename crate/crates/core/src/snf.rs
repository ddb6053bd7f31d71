//! Smith normal form with full transform tracking, integral homology, and
//! the standard (SNF-adapted) bases of an integral chain complex.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::linalg::{Int, IntMatrix, RatMatrix};
use crate::CoreError;

/// Default bit budget for intermediate entries. Far above anything the
/// bundled complexes produce.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 16;

/// `U · M · V = D` with `U`, `V` unimodular and `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries, all positive.
    pub factors: Vec<Int>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Basis of the kernel lattice: the trailing columns of `V`.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.column_range(self.rank(), self.v.cols())
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    smith_normal_form_with_budget(m, DEFAULT_BIT_BUDGET).expect("SNF exceeded default bit budget")
}

/// Pivot rule: smallest nonzero absolute value in the active block, ties
/// broken row-major. Fails with `Overflow` once an entry needs more than
/// `max_bits` bits.
pub fn smith_normal_form_with_budget(m: &IntMatrix, max_bits: u64) -> Result<SmithDecomposition, CoreError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // row_i += k row_t, mirrored on the transforms
    let row_op = |a: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, t: usize, k: &Int| {
        a.add_row_multiple(i, t, k);
        u.add_row_multiple(i, t, k);
        u_inv.add_col_multiple(t, i, &-k);
    };
    // col_j += k col_t
    let col_op = |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, j: usize, t: usize, k: &Int| {
        a.add_col_multiple(j, t, k);
        v.add_col_multiple(j, t, k);
        v_inv.add_row_multiple(t, j, &-k);
    };

    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(finish(a, u, u_inv, v, v_inv, factors));
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = &a[(i, t)] / &a[(t, t)];
                    row_op(&mut a, &mut u, &mut u_inv, i, t, &-q);
                    dirty |= !a[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = &a[(t, j)] / &a[(t, t)];
                    col_op(&mut a, &mut v, &mut v_inv, j, t, &-q);
                    dirty |= !a[(t, j)].is_zero();
                }
            }
            if a.max_bits() > max_bits || u.max_bits() > max_bits || v.max_bits() > max_bits {
                return Err(CoreError::Overflow { bits: max_bits });
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &p).is_zero()));
            match offender {
                Some(i) => row_op(&mut a, &mut u, &mut u_inv, t, i, &Int::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        factors.push(a[(t, t)].clone());
    }
    Ok(finish(a, u, u_inv, v, v_inv, factors))
}

fn finish(
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
    factors: Vec<Int>,
) -> SmithDecomposition {
    SmithDecomposition { u, u_inv, v, v_inv, d, factors }
}

/// Saturated sublattice `ker M ⊂ ℤⁿ` with a coordinate map back from ℤⁿ.
#[derive(Clone, Debug)]
pub struct KernelLattice {
    /// n × k basis matrix.
    pub basis: IntMatrix,
    /// k × n matrix taking a kernel vector to its coordinates.
    coord_map: IntMatrix,
}

impl KernelLattice {
    pub fn of(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let r = snf.rank();
        let idx: Vec<usize> = (r..snf.v_inv.rows()).collect();
        KernelLattice { basis: snf.kernel_basis(), coord_map: snf.v_inv.select_rows(&idx) }
    }

    /// The lattice spanned by the columns of `basis`, which must be a basis
    /// of a saturated sublattice.
    pub fn from_basis(basis: IntMatrix) -> Self {
        // left inverse via the SNF of the basis itself: U B V = [I; 0]
        let snf = smith_normal_form(&basis);
        assert!(
            snf.factors.iter().all(|f| f.is_one()) && snf.rank() == basis.cols(),
            "basis does not span a saturated lattice"
        );
        let k = basis.cols();
        let top: Vec<usize> = (0..k).collect();
        let coord_map = &snf.v * &snf.u.select_rows(&top);
        KernelLattice { basis, coord_map }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of the columns of `x`; `None` if some column is not in
    /// the lattice.
    pub fn coords(&self, x: &IntMatrix) -> Option<IntMatrix> {
        let c = &self.coord_map * x;
        (&self.basis * &c == *x).then_some(c)
    }

    /// Same lattice with basis `basis · change` for a unimodular `change`.
    pub fn rebased(&self, change: &IntMatrix) -> Self {
        KernelLattice::from_basis(&self.basis * change)
    }
}

/// Homology of one degree: free rank and the non-unit invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    #[serde(serialize_with = "ser_ints")]
    pub torsion: Vec<Int>,
}

fn ser_ints<S: serde::Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |acc, t| acc * t)
    }

    /// The group ℤ^r ⊕ ⊕ ℤ/t_i presented by `relations` (columns) on ℤ^n.
    pub fn cokernel(n: usize, relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        HomologyGroup {
            rank: n - snf.rank(),
            torsion: snf.factors.into_iter().filter(|f| !f.is_one()).collect(),
        }
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `r_q = dim C_q − rank ∂_q − rank ∂_{q+1}`; torsion from the invariant
/// factors of `∂_{q+1}`.
pub fn homology(c: &ChainComplex) -> Vec<HomologyGroup> {
    let snfs: Vec<SmithDecomposition> = (0..=c.top() + 1).map(|q| smith_normal_form(&c.boundary(q))).collect();
    (0..=c.top())
        .map(|q| HomologyGroup {
            rank: c.dim(q) - snfs[q].rank() - snfs[q + 1].rank(),
            torsion: snfs[q + 1].factors.iter().filter(|f| !f.is_one()).cloned().collect(),
        })
        .collect()
}

/// SNF-adapted data for one degree.
#[derive(Clone, Debug)]
pub struct StandardDegree {
    /// Unimodular basis `[z'_q | b_q]` in cell coordinates.
    pub e: IntMatrix,
    /// Cycle-lattice basis, refined so `∂_{q+1}(b_{q+1,j}) = k_{q,j} z'_{q,j}`.
    pub cycles: IntMatrix,
    /// Lifts `b_q`: `∂_q` maps them onto the boundary directions of degree q−1.
    pub lifts: IntMatrix,
    /// Boundary scalars `k_{q,j}` for the first `rank ∂_{q+1}` cycles.
    pub k: Vec<Int>,
    /// Standard homology representatives `n_q`.
    pub n: IntMatrix,
}

impl StandardDegree {
    pub fn free_rank(&self) -> usize {
        self.n.cols()
    }

    /// `#TH_q`, the product of the boundary scalars.
    pub fn torsion_order(&self) -> Int {
        self.k.iter().fold(Int::one(), |acc, k| acc * k)
    }

    pub fn torsion(&self) -> Vec<Int> {
        self.k.iter().filter(|k| !k.is_one()).cloned().collect()
    }

    /// `∂_{q+1}(b_{q+1})` as cell-coordinate columns.
    pub fn boundary_images(&self) -> IntMatrix {
        let mut out = self.cycles.column_range(0, self.k.len());
        for (j, k) in self.k.iter().enumerate() {
            for i in 0..out.rows() {
                out[(i, j)] = &out[(i, j)] * k;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct StandardBasisData {
    pub degrees: Vec<StandardDegree>,
}

impl StandardBasisData {
    pub fn n_rational(&self) -> Vec<RatMatrix> {
        self.degrees.iter().map(|d| d.n.to_rational()).collect()
    }
}

/// Builds the standard bases degree by degree, refining each cycle basis
/// with the left transform of the SNF of the next boundary map.
pub fn standard_bases(c: &ChainComplex) -> StandardBasisData {
    let top = c.top();
    let mut cycles: Vec<IntMatrix> = Vec::with_capacity(top + 1);
    let mut coord_maps: Vec<IntMatrix> = Vec::with_capacity(top + 1);
    let mut lifts: Vec<IntMatrix> = Vec::with_capacity(top + 1);
    let mut ks: Vec<Vec<Int>> = vec![Vec::new(); top + 1];

    cycles.push(IntMatrix::identity(c.dim(0)));
    coord_maps.push(IntMatrix::identity(c.dim(0)));
    lifts.push(IntMatrix::zeros(c.dim(0), 0));

    for q in 1..=top + 1 {
        let d = c.boundary(q);
        // ∂_q in coordinates of the degree q−1 cycle basis
        let m = &coord_maps[q - 1] * &d;
        debug_assert_eq!(&cycles[q - 1] * &m, d);
        let snf = smith_normal_form(&m);
        let r = snf.rank();
        cycles[q - 1] = &cycles[q - 1] * &snf.u_inv;
        coord_maps[q - 1] = &snf.u * &coord_maps[q - 1];
        ks[q - 1] = snf.factors.clone();
        if q <= top {
            lifts.push(snf.v.column_range(0, r));
            cycles.push(snf.v.column_range(r, c.dim(q)));
            let idx: Vec<usize> = (r..c.dim(q)).collect();
            coord_maps.push(snf.v_inv.select_rows(&idx));
        }
    }

    let degrees = (0..=top)
        .map(|q| {
            let z = cycles[q].clone();
            let k = ks[q].clone();
            let n = z.column_range(k.len(), z.cols());
            let e = IntMatrix::hstack(&[&z, &lifts[q]]);
            StandardDegree { e, cycles: z, lifts: lifts[q].clone(), k, n }
        })
        .collect();
    StandardBasisData { degrees }
}
