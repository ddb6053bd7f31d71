//! Regular CW complexes, their integral chain complexes, geometric and
//! algebraic cones, mapping cones and relative chains.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::linalg::{Int, IntMatrix};
use crate::CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    /// Signed incidences `(face id, coefficient)`.
    pub boundary: Vec<(String, i64)>,
}

/// A regular CW complex with user-supplied incidences and marked singular
/// vertices. Cells are kept in canonical `(dim, id)` order.
#[derive(Clone, Debug)]
pub struct RegularCWComplex {
    n: usize,
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    singular: BTreeSet<String>,
    subcomplexes: BTreeMap<String, BTreeSet<String>>,
}

impl RegularCWComplex {
    pub fn new(
        n: usize,
        mut cells: Vec<Cell>,
        singular: BTreeSet<String>,
        subcomplexes: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self, CoreError> {
        cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let mut index = HashMap::new();
        for (k, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), k).is_some() {
                return Err(CoreError::validation(&c.id, "duplicate cell id"));
            }
            if c.dim > n {
                return Err(CoreError::validation(&c.id, format!("dimension {} exceeds complex dimension {n}", c.dim)));
            }
        }
        for c in &cells {
            if c.dim == 0 && !c.boundary.is_empty() {
                return Err(CoreError::validation(&c.id, "a 0-cell cannot have faces"));
            }
            for (f, _) in &c.boundary {
                let Some(&k) = index.get(f) else {
                    return Err(CoreError::validation(f, format!("referenced by cell {} but not defined", c.id)));
                };
                if cells[k].dim + 1 != c.dim {
                    return Err(CoreError::validation(
                        &c.id,
                        format!("face {f} has dimension {} (expected {})", cells[k].dim, c.dim - 1),
                    ));
                }
            }
        }
        for c in &cells {
            let mut acc: BTreeMap<&str, i64> = BTreeMap::new();
            for (f, a) in &c.boundary {
                for (g, b) in &cells[index[f]].boundary {
                    *acc.entry(g.as_str()).or_default() += a * b;
                }
            }
            if let Some((g, _)) = acc.iter().find(|(_, v)| **v != 0) {
                return Err(CoreError::validation(&c.id, format!("boundary of boundary is nonzero at {g}")));
            }
        }
        for s in &singular {
            match index.get(s) {
                None => return Err(CoreError::validation(s, "singular mark on an undefined cell")),
                Some(&k) if cells[k].dim != 0 => return Err(CoreError::validation(s, "singular mark on a cell of positive dimension")),
                _ => {}
            }
        }
        for (name, ids) in &subcomplexes {
            for id in ids {
                if !index.contains_key(id) {
                    return Err(CoreError::validation(id, format!("listed in subcomplex {name} but not defined")));
                }
                if singular.contains(id) {
                    return Err(CoreError::validation(id, format!("singular vertex lies in subcomplex {name}")));
                }
            }
        }
        Ok(RegularCWComplex { n, cells, index, singular, subcomplexes })
    }

    /// Parses the line-oriented complex format.
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let mut n = None;
        let mut cells = Vec::new();
        let mut singular = BTreeSet::new();
        let mut subcomplexes = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let err = |msg: String| CoreError::Parse { line: line_no, msg };
            match tok.next().unwrap() {
                "dim" => {
                    let v = tok.next().ok_or_else(|| err("missing dimension".into()))?;
                    n = Some(v.parse::<usize>().map_err(|_| err(format!("bad dimension {v:?}")))?);
                }
                "cell" => {
                    let id = tok.next().ok_or_else(|| err("missing cell id".into()))?.to_string();
                    let d = tok.next().ok_or_else(|| err(format!("cell {id}: missing dimension")))?;
                    let dim = d.parse::<usize>().map_err(|_| err(format!("cell {id}: bad dimension {d:?}")))?;
                    let rest: Vec<&str> = tok.collect();
                    let rest = rest.join(" ");
                    let rest = rest.trim().trim_start_matches('[').trim_end_matches(']');
                    let mut boundary = Vec::new();
                    for entry in rest.split([',', ' ']).filter(|s| !s.is_empty()) {
                        let (f, c) = entry
                            .rsplit_once(':')
                            .ok_or_else(|| err(format!("cell {id}: expected face:coeff, got {entry:?}")))?;
                        let c = c.parse::<i64>().map_err(|_| err(format!("cell {id}: bad coefficient {c:?}")))?;
                        if c != 0 {
                            boundary.push((f.to_string(), c));
                        }
                    }
                    cells.push(Cell { id, dim, boundary });
                }
                "singular" => singular.extend(tok.map(str::to_string)),
                "subcomplex" => {
                    let name = tok.next().ok_or_else(|| err("missing subcomplex name".into()))?;
                    subcomplexes.insert(name.to_string(), tok.map(str::to_string).collect());
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        let n = n.ok_or(CoreError::Parse { line: 0, msg: "missing `dim` header".into() })?;
        Self::new(n, cells, singular, subcomplexes)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.n);
        for c in &self.cells {
            let faces: Vec<String> = c.boundary.iter().map(|(f, k)| format!("{f}:{k}")).collect();
            let _ = writeln!(s, "cell {} {} {}", c.id, c.dim, faces.join(","));
        }
        if !self.singular.is_empty() {
            let ids: Vec<&str> = self.singular.iter().map(String::as_str).collect();
            let _ = writeln!(s, "singular {}", ids.join(" "));
        }
        for (name, ids) in &self.subcomplexes {
            let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
            let _ = writeln!(s, "subcomplex {name} {}", ids.join(" "));
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.index.get(id).map(|&k| &self.cells[k])
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells_of_dim(&self, q: usize) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.dim == q)
    }

    pub fn count(&self, q: usize) -> usize {
        self.cells_of_dim(q).count()
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.n).map(|q| self.count(q)).collect()
    }

    pub fn singular_vertices(&self) -> &BTreeSet<String> {
        &self.singular
    }

    pub fn subcomplex(&self, name: &str) -> Option<&BTreeSet<String>> {
        self.subcomplexes.get(name)
    }

    pub fn subcomplex_names(&self) -> impl Iterator<Item = &String> {
        self.subcomplexes.keys()
    }

    /// All faces of `id` of every codimension, including `id` itself.
    pub fn closure(&self, id: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id.to_string()];
        while let Some(c) = stack.pop() {
            if out.insert(c.clone()) {
                if let Some(cell) = self.cell(&c) {
                    stack.extend(cell.boundary.iter().map(|(f, _)| f.clone()));
                }
            }
        }
        out
    }

    /// Open star of a set of vertices: cells whose closure meets it.
    pub fn open_star(&self, vertices: &BTreeSet<String>) -> BTreeSet<String> {
        let mut star: BTreeSet<String> = BTreeSet::new();
        for c in &self.cells {
            let touches = if c.dim == 0 {
                vertices.contains(&c.id)
            } else {
                c.boundary.iter().any(|(f, _)| star.contains(f))
            };
            if touches {
                star.insert(c.id.clone());
            }
        }
        star
    }

    /// Whether `ids` is closed under taking faces; returns the first cell
    /// with a face outside the set.
    pub fn first_unclosed<'a>(&'a self, ids: &BTreeSet<String>) -> Option<&'a str> {
        ids.iter()
            .filter_map(|id| self.cell(id))
            .find(|c| c.boundary.iter().any(|(f, _)| !ids.contains(f)))
            .map(|c| c.id.as_str())
    }

    /// The subcomplex on `ids`, which must be closed.
    pub fn restrict(&self, ids: &BTreeSet<String>) -> Result<RegularCWComplex, CoreError> {
        if let Some(c) = self.first_unclosed(ids) {
            return Err(CoreError::NotSubcomplex { cell: c.to_string() });
        }
        let cells = self.cells.iter().filter(|c| ids.contains(&c.id)).cloned().collect();
        let singular = self.singular.iter().filter(|s| ids.contains(*s)).cloned().collect();
        RegularCWComplex::new(self.n, cells, singular, BTreeMap::new())
    }

    /// Position of each cell inside its degree.
    fn positions(&self) -> HashMap<&str, usize> {
        let mut counter = vec![0usize; self.n + 1];
        let mut pos = HashMap::new();
        for c in &self.cells {
            pos.insert(c.id.as_str(), counter[c.dim]);
            counter[c.dim] += 1;
        }
        pos
    }

    /// Cellular chain complex; basis labels are the cell ids.
    pub fn chain_complex(&self) -> ChainComplex {
        self.chain_complex_excluding(&BTreeSet::new())
    }

    fn chain_complex_excluding(&self, drop: &BTreeSet<String>) -> ChainComplex {
        let kept: Vec<&Cell> = self.cells.iter().filter(|c| !drop.contains(&c.id)).collect();
        let mut labels = vec![Vec::new(); self.n + 1];
        let mut pos = HashMap::new();
        for c in &kept {
            pos.insert(c.id.as_str(), labels[c.dim].len());
            labels[c.dim].push(c.id.clone());
        }
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        let mut boundaries: Vec<IntMatrix> = (1..=self.n).map(|q| IntMatrix::zeros(dims[q - 1], dims[q])).collect();
        for c in &kept {
            for (f, k) in &c.boundary {
                if let Some(&i) = pos.get(f.as_str()) {
                    boundaries[c.dim - 1][(i, pos[c.id.as_str()])] += Int::from(*k);
                }
            }
        }
        ChainComplex::new(dims, boundaries, labels).expect("validated complex yields a chain complex")
    }

    /// Chains of `(K, L)`: cells of `L` deleted from basis and boundaries.
    pub fn relative_chain(&self, l: &BTreeSet<String>) -> Result<ChainComplex, CoreError> {
        for id in l {
            if self.cell(id).is_none() {
                return Err(CoreError::validation(id, "not a cell of the complex"));
            }
        }
        if let Some(c) = self.first_unclosed(l) {
            return Err(CoreError::NotSubcomplex { cell: c.to_string() });
        }
        Ok(self.chain_complex_excluding(l))
    }

    /// Inclusion of the closed subcomplex on `ids` as a chain map.
    pub fn inclusion_of(&self, ids: &BTreeSet<String>) -> Result<ChainInclusion, CoreError> {
        let sub = self.restrict(ids)?;
        let pos = self.positions();
        let source = sub.chain_complex();
        let maps = (0..=self.n)
            .map(|q| source.labels(q).iter().map(|id| (pos[id.as_str()], 1i8)).collect())
            .collect();
        ChainInclusion::new(source, self.chain_complex(), maps)
    }

    /// Geometric cone: apex `v` (marked singular) and a cell `v*e` for
    /// every cell `e`, with `∂(v*e) = e − v*∂e` and `∂(v*w) = w − v`.
    /// Returns the cone and the inclusion of the base.
    pub fn cone(&self) -> Result<(RegularCWComplex, ChainInclusion), CoreError> {
        if self.is_empty() {
            return Err(CoreError::EmptyComplex);
        }
        let mut apex = "v".to_string();
        while self.index.contains_key(&apex) || self.cells.iter().any(|c| c.id.starts_with(&format!("{apex}*"))) {
            apex.push('\'');
        }
        let join = |id: &str| format!("{apex}*{id}");
        let mut cells = self.cells.clone();
        cells.push(Cell { id: apex.clone(), dim: 0, boundary: vec![] });
        for c in &self.cells {
            let boundary = if c.dim == 0 {
                vec![(c.id.clone(), 1), (apex.clone(), -1)]
            } else {
                let mut b = vec![(c.id.clone(), 1)];
                b.extend(c.boundary.iter().map(|(f, k)| (join(f), -k)));
                b
            };
            cells.push(Cell { id: join(&c.id), dim: c.dim + 1, boundary });
        }
        let mut singular = self.singular.clone();
        singular.insert(apex);
        let cone = RegularCWComplex::new(self.n + 1, cells, singular, self.subcomplexes.clone())?;
        let pos = cone.positions();
        let base = self.chain_complex();
        let maps = (0..=self.n)
            .map(|q| base.labels(q).iter().map(|id| (pos[id.as_str()], 1i8)).collect())
            .collect();
        let target = cone.chain_complex();
        let j = ChainInclusion::new(base, target, maps)?;
        Ok((cone, j))
    }

    /// Barycentric subdivision: one simplex per strictly increasing chain
    /// of cells in the face poset, oriented by the chain order.
    pub fn barycentric_subdivision(&self) -> RegularCWComplex {
        // chains ending at each cell, as index paths
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cells.len()];
        for (k, c) in self.cells.iter().enumerate() {
            let mut s = BTreeSet::new();
            for (f, _) in &c.boundary {
                let fi = self.index[f];
                s.insert(fi);
                s.extend(below[fi].iter().copied());
            }
            below[k] = s;
        }
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut ending: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.cells.len()];
        for k in 0..self.cells.len() {
            let mut mine = vec![vec![k]];
            for &f in &below[k] {
                for ch in &ending[f] {
                    let mut x = ch.clone();
                    x.push(k);
                    mine.push(x);
                }
            }
            chains.extend(mine.iter().cloned());
            ending[k] = mine;
        }
        let name = |ch: &[usize]| {
            let ids: Vec<&str> = ch.iter().map(|&i| self.cells[i].id.as_str()).collect();
            format!("b({})", ids.join("<"))
        };
        let cells = chains
            .iter()
            .map(|ch| {
                let dim = ch.len() - 1;
                let boundary = if dim == 0 {
                    vec![]
                } else {
                    (0..ch.len())
                        .map(|i| {
                            let mut face = ch.clone();
                            face.remove(i);
                            (name(&face), if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                };
                Cell { id: name(ch), dim, boundary }
            })
            .collect();
        let singular = self.singular.iter().map(|s| format!("b({s})")).collect();
        let subcomplexes = self
            .subcomplexes
            .iter()
            .map(|(nm, ids)| {
                let set = chains
                    .iter()
                    .filter(|ch| ch.iter().all(|&i| ids.contains(&self.cells[i].id)))
                    .map(|ch| name(ch))
                    .collect();
                (nm.clone(), set)
            })
            .collect();
        RegularCWComplex::new(self.n, cells, singular, subcomplexes).expect("subdivision of a valid complex is valid")
    }

    /// Splits a complex with isolated singular vertices into the regular
    /// part `M` (complement of the open star) and the link `N ⊂ M`, and
    /// checks that the star is the cone on the link.
    pub fn singular_decomposition(&self) -> Result<SingularDecomposition, CoreError> {
        if self.singular.is_empty() {
            return Err(CoreError::validation("-", "complex has no singular vertices"));
        }
        let star = self.open_star(&self.singular);
        let mut link = BTreeSet::new();
        for id in &star {
            if self.singular.contains(id) {
                continue;
            }
            let c = self.cell(id).unwrap();
            let outside: Vec<&String> = c.boundary.iter().map(|(f, _)| f).filter(|f| !star.contains(*f)).collect();
            if outside.len() != 1 {
                return Err(CoreError::validation(id, "star of the singular set is not a cone on its link"));
            }
            if !link.insert(outside[0].clone()) {
                return Err(CoreError::validation(outside[0], "link cell is the base of two star cells"));
            }
        }
        if let Some(c) = self.first_unclosed(&link) {
            return Err(CoreError::validation(c, "link is not a subcomplex"));
        }
        let regular: BTreeSet<String> = self.cells.iter().map(|c| c.id.clone()).filter(|id| !star.contains(id)).collect();
        let m = self.restrict(&regular)?;
        let inclusion = m.inclusion_of(&link)?;
        Ok(SingularDecomposition { regular: m, link: link.clone(), inclusion })
    }
}

/// `K = M ∪_N ⋃ C(N_v)` data.
#[derive(Clone, Debug)]
pub struct SingularDecomposition {
    pub regular: RegularCWComplex,
    pub link: BTreeSet<String>,
    pub inclusion: ChainInclusion,
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<RegularCWComplex, CoreError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))?;
    RegularCWComplex::parse(&text)
}

/// Graded free ℤ-modules `C_0 … C_top` with boundary matrices
/// `∂_q : C_q → C_{q−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[q-1]` is `∂_q`.
    boundaries: Vec<IntMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>, labels: Vec<Vec<String>>) -> Result<Self, CoreError> {
        assert!(!dims.is_empty(), "a chain complex has at least degree 0");
        if boundaries.len() + 1 != dims.len() || labels.len() != dims.len() {
            return Err(CoreError::validation("-", "degree count mismatch"));
        }
        for (q, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[q] || b.cols() != dims[q + 1] {
                return Err(CoreError::validation(
                    &format!("degree {}", q + 1),
                    format!("boundary is {}x{}, expected {}x{}", b.rows(), b.cols(), dims[q], dims[q + 1]),
                ));
            }
        }
        for (q, l) in labels.iter().enumerate() {
            if l.len() != dims[q] {
                return Err(CoreError::validation(&format!("degree {q}"), "label count mismatch"));
            }
        }
        for q in 1..boundaries.len() {
            if !(&boundaries[q - 1] * &boundaries[q]).is_zero() {
                return Err(CoreError::validation(&format!("degree {}", q + 1), "boundary of boundary is nonzero"));
            }
        }
        Ok(ChainComplex { dims, boundaries, labels })
    }

    /// Builds a complex with generated labels `<prefix><q>.<j>`.
    pub fn from_boundaries(dims: Vec<usize>, boundaries: Vec<IntMatrix>, prefix: &str) -> Result<Self, CoreError> {
        let labels = dims.iter().enumerate().map(|(q, &d)| (0..d).map(|j| format!("{prefix}{q}.{j}")).collect()).collect();
        Self::new(dims, boundaries, labels)
    }

    pub fn empty() -> Self {
        ChainComplex { dims: vec![0], boundaries: vec![], labels: vec![vec![]] }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn labels(&self, q: usize) -> &[String] {
        self.labels.get(q).map_or(&[], Vec::as_slice)
    }

    /// `∂_q` for any `q ≥ 0`, as a `dim C_{q−1} × dim C_q` matrix (empty
    /// outside the stored range).
    pub fn boundary(&self, q: usize) -> IntMatrix {
        if q >= 1 && q <= self.boundaries.len() {
            self.boundaries[q - 1].clone()
        } else if q == 0 {
            IntMatrix::zeros(0, self.dim(0))
        } else {
            IntMatrix::zeros(self.dim(q - 1), self.dim(q))
        }
    }

    pub fn boundary_ref(&self, q: usize) -> &IntMatrix {
        &self.boundaries[q - 1]
    }

    /// Pads the complex with zero modules up to degree `top`.
    pub fn extended_to(&self, top: usize) -> ChainComplex {
        let mut out = self.clone();
        while out.top() < top {
            let d = out.dims[out.top()];
            out.boundaries.push(IntMatrix::zeros(d, 0));
            out.dims.push(0);
            out.labels.push(vec![]);
        }
        out
    }

    /// Highest degree with a nonzero module (0 for the empty complex).
    pub fn effective_top(&self) -> usize {
        self.dims.iter().rposition(|&d| d > 0).unwrap_or(0)
    }

    /// Drops the degrees above `top`, which must all be zero modules.
    pub fn truncated_to(&self, top: usize) -> Option<ChainComplex> {
        if top >= self.top() {
            return Some(self.clone());
        }
        if self.dims[top + 1..].iter().any(|&d| d > 0) {
            return None;
        }
        Some(ChainComplex {
            dims: self.dims[..=top].to_vec(),
            boundaries: self.boundaries[..top].to_vec(),
            labels: self.labels[..=top].to_vec(),
        })
    }

    /// Every boundary multiplied by −1 (an isomorphic complex).
    pub fn negated(&self) -> ChainComplex {
        ChainComplex { dims: self.dims.clone(), boundaries: self.boundaries.iter().map(IntMatrix::neg).collect(), labels: self.labels.clone() }
    }

    /// The augmentation `C_0 → ℤ` sending every basis element to 1.
    pub fn standard_augmentation(&self) -> IntMatrix {
        IntMatrix::from_fn(1, self.dim(0), |_, _| Int::from(1))
    }
}

/// Injective chain map whose columns are distinct signed unit vectors.
#[derive(Clone, Debug)]
pub struct ChainInclusion {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// For each degree and each source basis element: target index and sign.
    maps: Vec<Vec<(usize, i8)>>,
}

impl ChainInclusion {
    pub fn new(source: ChainComplex, target: ChainComplex, mut maps: Vec<Vec<(usize, i8)>>) -> Result<Self, CoreError> {
        let top = source.top().max(target.top());
        let source = source.extended_to(top);
        let target = target.extended_to(top);
        maps.resize(top + 1, Vec::new());
        for q in 0..=top {
            if maps[q].len() != source.dim(q) {
                return Err(CoreError::validation(&format!("degree {q}"), "inclusion does not cover the source basis"));
            }
            let mut seen = BTreeSet::new();
            for &(t, s) in &maps[q] {
                if t >= target.dim(q) || !seen.insert(t) || (s != 1 && s != -1) {
                    return Err(CoreError::validation(&format!("degree {q}"), "inclusion columns are not distinct signed unit vectors"));
                }
            }
        }
        let inc = ChainInclusion { source, target, maps };
        for q in 1..=top {
            let lhs = &inc.matrix(q - 1) * &inc.source.boundary(q);
            let rhs = &inc.target.boundary(q) * &inc.matrix(q);
            if lhs != rhs {
                return Err(CoreError::validation(&format!("degree {q}"), "inclusion is not a chain map"));
            }
        }
        Ok(inc)
    }

    /// Identity of a complex.
    pub fn identity(c: &ChainComplex) -> Self {
        let maps = (0..=c.top()).map(|q| (0..c.dim(q)).map(|j| (j, 1)).collect()).collect();
        ChainInclusion::new(c.clone(), c.clone(), maps).unwrap()
    }

    /// Inclusion of the empty complex.
    pub fn from_empty(d: &ChainComplex) -> Self {
        ChainInclusion::new(ChainComplex::empty(), d.clone(), vec![]).unwrap()
    }

    pub fn top(&self) -> usize {
        self.target.top()
    }

    pub fn map(&self, q: usize) -> &[(usize, i8)] {
        self.maps.get(q).map_or(&[], Vec::as_slice)
    }

    /// `i_q` as a `dim D_q × dim C_q` matrix.
    pub fn matrix(&self, q: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.dim(q), self.source.dim(q));
        for (j, &(t, s)) in self.map(q).iter().enumerate() {
            m[(t, j)] = Int::from(s);
        }
        m
    }

    /// Target indices not hit in degree q, in increasing order.
    pub fn complement(&self, q: usize) -> Vec<usize> {
        let hit: BTreeSet<usize> = self.map(q).iter().map(|&(t, _)| t).collect();
        (0..self.target.dim(q)).filter(|t| !hit.contains(t)).collect()
    }

    /// The quotient complex `D / i(C)` on the complementary basis.
    pub fn quotient(&self) -> ChainComplex {
        let top = self.top();
        let keep: Vec<Vec<usize>> = (0..=top).map(|q| self.complement(q)).collect();
        let dims = keep.iter().map(Vec::len).collect();
        let boundaries = (1..=top).map(|q| self.target.boundary(q).select_rows(&keep[q - 1]).select_columns(&keep[q])).collect();
        let labels = (0..=top).map(|q| keep[q].iter().map(|&t| self.target.labels(q)[t].clone()).collect()).collect();
        ChainComplex::new(dims, boundaries, labels).expect("quotient by a subcomplex is a complex")
    }
}

/// Algebraic cone `Ċ`: degree 0 is `ℤ[v] ⊕ C_0`, degree q ≥ 1 is
/// `C_{q−1} ⊕ C_q` with `∂̇(x ⊕ y) = ∂x ⊕ (x − ∂y)`, the augmentation
/// playing the role of `∂_0`.
pub fn algebraic_cone(c: &ChainComplex, augmentation: &IntMatrix) -> ChainComplex {
    assert_eq!(augmentation.rows(), 1);
    assert_eq!(augmentation.cols(), c.dim(0));
    let top = c.top() + 1;
    let lower = |q: usize| if q == 0 { 1 } else { c.dim(q - 1) };
    let dims: Vec<usize> = (0..=top).map(|q| lower(q) + c.dim(q)).collect();
    let boundaries = (1..=top)
        .map(|q| {
            let d_low = if q == 1 { augmentation.clone() } else { c.boundary(q - 1) };
            let eye = IntMatrix::identity(c.dim(q - 1));
            let zero = IntMatrix::zeros(lower(q - 1), c.dim(q));
            IntMatrix::block(&[vec![&d_low, &zero], vec![&eye, &c.boundary(q).neg()]])
        })
        .collect();
    let labels = (0..=top)
        .map(|q| {
            let mut l: Vec<String> = if q == 0 { vec!["v".into()] } else { c.labels(q - 1).iter().map(|s| format!("v*{s}")).collect() };
            l.extend(c.labels(q).iter().cloned());
            l
        })
        .collect();
    ChainComplex::new(dims, boundaries, labels).expect("cone of a complex is a complex")
}

/// Mapping cone `C(C) ⊔_i D`: degree q is `C_{q−1} ⊕ D_q` with boundary
/// `[[∂^C_{q−1}, 0], [i_{q−1}, −∂^D_q]]`; the apex `ℤ[v]` sits in degree 0
/// with the standard augmentation. An empty source gives `D` itself.
pub fn mapping_cone(i: &ChainInclusion) -> ChainComplex {
    let (c, d) = (&i.source, &i.target);
    if c.is_empty() {
        return d.clone();
    }
    let top = c.top().max(d.top());
    let c = c.extended_to(top);
    let d = d.extended_to(top + 1);
    let lower = |q: usize| if q == 0 { 1 } else { c.dim(q - 1) };
    let dims: Vec<usize> = (0..=top + 1).map(|q| lower(q) + d.dim(q)).collect();
    let boundaries = (1..=top + 1)
        .map(|q| {
            let d_low = if q == 1 { c.standard_augmentation() } else { c.boundary(q - 1) };
            let zero = IntMatrix::zeros(lower(q - 1), d.dim(q));
            IntMatrix::block(&[vec![&d_low, &zero], vec![&i.matrix(q - 1), &d.boundary(q).neg()]])
        })
        .collect();
    let labels = (0..=top + 1)
        .map(|q| {
            let mut l: Vec<String> = if q == 0 { vec!["v".into()] } else { c.labels(q - 1).iter().map(|s| format!("v*{s}")).collect() };
            l.extend(d.labels(q).iter().cloned());
            l
        })
        .collect();
    ChainComplex::new(dims, boundaries, labels).expect("mapping cone is a complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::{homology, HomologyGroup};
    use num_traits::Zero;

    const CIRCLE: &str = "dim 1\ncell a 0\ncell b 0\ncell c 0\ncell ab 1 b:1,a:-1\ncell bc 1 c:1,b:-1\ncell ca 1 a:1,c:-1\n";

    #[test]
    fn parses_circle() {
        let k = RegularCWComplex::parse(CIRCLE).unwrap();
        assert_eq!(k.counts(), vec![3, 3]);
        let c = k.chain_complex();
        for j in 0..3 {
            let s: Int = (0..3).map(|i| c.boundary(1)[(i, j)].clone()).sum();
            assert!(s.is_zero());
        }
        assert_eq!(homology(&c), vec![HomologyGroup::free(1), HomologyGroup::free(1)]);
        let again = RegularCWComplex::parse(&k.to_text()).unwrap();
        assert_eq!(again.chain_complex(), c);
    }

    #[test]
    fn rejects_dangling_and_bad_square() {
        let dangling = "dim 1\ncell a 0\ncell e 1 b:1,a:-1\n";
        match RegularCWComplex::parse(dangling) {
            Err(CoreError::Validation { cell, .. }) => assert_eq!(cell, "b"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = "dim 2\ncell a 0\ncell b 0\ncell e 1 b:1,a:-1\ncell f 1 b:1,a:-1\ncell t 2 e:1,f:1\n";
        match RegularCWComplex::parse(bad) {
            Err(CoreError::Validation { cell, .. }) => assert_eq!(cell, "t"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(RegularCWComplex::parse("cell a 0\n"), Err(CoreError::Parse { .. })));
        assert!(matches!(RegularCWComplex::parse("dim 1\ncell a 0 x\n"), Err(CoreError::Parse { line: 2, .. })));
    }

    #[test]
    fn canonical_order_is_dim_then_id() {
        let k = RegularCWComplex::parse("dim 1\ncell z 0\ncell y 0\ncell e 1 z:1,y:-1\n").unwrap();
        let ids: Vec<&str> = k.cells().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, vec!["y", "z", "e"]);
    }

    #[test]
    fn cone_of_point_is_interval() {
        let p = RegularCWComplex::parse("dim 0\ncell p 0\n").unwrap();
        let (c, j) = p.cone().unwrap();
        assert_eq!(c.counts(), vec![2, 1]);
        assert_eq!(j.matrix(0).cols(), 1);
        let empty = RegularCWComplex::parse("dim 0\n").unwrap();
        assert!(matches!(empty.cone(), Err(CoreError::EmptyComplex)));
    }

    #[test]
    fn relative_chain_requires_closed_subset() {
        let k = RegularCWComplex::parse(CIRCLE).unwrap();
        let l: BTreeSet<String> = ["ab".to_string()].into();
        assert!(matches!(k.relative_chain(&l), Err(CoreError::NotSubcomplex { .. })));
        assert_eq!(k.relative_chain(&BTreeSet::new()).unwrap(), k.chain_complex());
    }

    #[test]
    fn mapping_cone_of_empty_is_target() {
        let c = RegularCWComplex::parse(CIRCLE).unwrap().chain_complex();
        assert_eq!(mapping_cone(&ChainInclusion::from_empty(&c)), c);
    }
}
