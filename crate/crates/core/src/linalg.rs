//! Dense matrices over ℤ and ℚ with exact arithmetic.
//!
//! Everything here is deliberately small and dense: the complexes this crate
//! handles have at most a few hundred cells per degree.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from column vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let cols = columns.len();
        Self::from_fn(rows, cols, |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn column_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)].clone())
    }

    /// Horizontal concatenation; all parts must have the same row count.
    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows);
        assert!(parts.iter().all(|p| p.rows == rows), "hstack: row mismatch");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out[(i, off + j)] = p[(i, j)].clone();
                }
            }
            off += p.cols;
        }
        out
    }

    /// Block matrix from a grid of blocks; block rows must agree in height and
    /// block columns in width.
    pub fn block(grid: &[Vec<&Self>]) -> Self {
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, brow) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                assert_eq!(b.rows, heights[bi], "block: height mismatch");
                assert_eq!(b.cols, widths[bj], "block: width mismatch");
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Mul for &Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        let t = a * b;
                        let slot: &mut T = &mut out.data[i * rhs.cols + j];
                        *slot = slot.clone() + t;
                    }
                }
            }
        }
        out
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| Int::from(rows[i][j]))
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// Row operation `row[dst] += k * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        for j in 0..self.cols {
            let t = &self.data[src * self.cols + j] * k;
            if !t.is_zero() {
                self.data[dst * self.cols + j] += t;
            }
        }
    }

    /// Column operation `col[dst] += k * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + src] * k;
            if !t.is_zero() {
                self.data[i * self.cols + dst] += t;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -x.clone();
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -x.clone();
        }
    }

    /// Largest absolute entry, as a bit length; used for the growth budget.
    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_i64()).collect())
            .collect()
    }
}

impl RatMatrix {
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_i64(rows).to_rational()
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// Rank by fraction-carrying Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (_, pivots) = self.row_echelon();
        pivots.len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn row_echelon(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in c..a.cols {
                        let t = &f * &a[(r, j)];
                        a[(i, j)] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Solves `self · x = b` for every column of `b`; returns `None` when
    /// some column is not in the column space. Free variables are set to 0.
    pub fn solve(&self, b: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let aug = Matrix::hstack(&[self, b]);
        let (e, pivots) = aug.row_echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = RatMatrix::zeros(self.cols, b.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = e[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Columns, chosen greedily in the given order, whose span equals the
    /// column space.
    pub fn independent_columns(&self, order: &[usize]) -> Vec<usize> {
        let reordered = self.select_columns(order);
        let (_, pivots) = reordered.row_echelon();
        pivots.into_iter().map(|p| order[p]).collect()
    }

    /// Exact determinant. Columns are scaled to integers and the result
    /// goes through Bareiss elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut scale = Rat::one();
        let mut ints = IntMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let l = (0..self.rows)
                .fold(Int::one(), |acc, i| acc.lcm(self[(i, j)].denom()));
            for i in 0..self.rows {
                let v = &self[(i, j)] * Rat::from_integer(l.clone());
                ints[(i, j)] = v.to_integer();
            }
            scale /= Rat::from_integer(l);
        }
        Rat::from_integer(bareiss_det(&ints)) * scale
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.map(|x| x.to_integer()))
    }
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_det(m: &IntMatrix) -> Int {
    let n = m.rows;
    assert_eq!(n, m.cols, "det of non-square matrix");
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Int::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Natural log of a positive big integer without overflowing f64.
pub fn ln_bigint(x: &Int) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: Int = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &Rat) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}
