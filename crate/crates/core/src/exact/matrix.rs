use num_complex::Complex64;

use crate::combinatorics::IndexSet;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance used when checking `z[j][r] == z[r][j]`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::domain(format!("row {i} has a different length")));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn constant(rows: usize, cols: usize, value: C64) -> Self {
        Self::from_fn(rows, cols, |_, _| value)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise modulus `|Z|`.
    pub fn abs(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| C64::new(self.get(i, j).norm(), 0.0))
    }

    /// `Z* Z`, the Gram matrix of the columns.
    pub fn gram(&self) -> Self {
        Self::from_fn(self.cols, self.cols, |a, b| {
            (0..self.rows)
                .map(|i| self.get(i, a).conj() * self.get(i, b))
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Z[J, K]` with rows `J` and columns `K` taken in increasing order.
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        if !rows.within(self.rows) || !cols.within(self.cols) {
            return Err(Error::domain(format!(
                "minor {:?} x {:?} is outside a {}x{} matrix",
                rows.as_slice(),
                cols.as_slice(),
                self.rows,
                self.cols
            )));
        }
        Ok(self.submatrix_unchecked(rows.as_slice(), cols.as_slice()))
    }

    pub(crate) fn submatrix_unchecked(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        ComplexMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Rows reordered by `row_perm`, columns by `col_perm`
    /// (`out[i][j] = z[row_perm[i]][col_perm[j]]`).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(row_perm[i], col_perm[j]))
    }

    /// Largest `|z[j][r] - z[r][j]|` over off-diagonal pairs.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in i + 1..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.asymmetry() <= SYMMETRY_TOLERANCE
    }

    /// `(1/n) sum_j |z[j][r]|^2`
    pub fn column_mean_square(&self, r: usize) -> f64 {
        if self.rows == 0 {
            return 0.0;
        }
        (0..self.rows).map(|j| self.get(j, r).norm_sqr()).sum::<f64>() / self.rows as f64
    }
}

/// Dense complex array with an arbitrary number of axes, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor {
    dims: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<C64>,
}

fn strides_for(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * dims[a + 1];
    }
    strides
}

impl ComplexTensor {
    pub fn new(dims: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::domain("a tensor needs at least one axis"));
        }
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::domain(format!(
                "tensor of shape {dims:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("tensor has non-finite entries"));
        }
        let strides = strides_for(&dims);
        Ok(ComplexTensor { dims, strides, data })
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> C64) -> Self {
        let len: usize = dims.iter().product();
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0; dims.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for a in (0..dims.len()).rev() {
                idx[a] += 1;
                if idx[a] < dims[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        let strides = strides_for(&dims);
        ComplexTensor { dims, strides, data }
    }

    pub fn from_matrix(z: &ComplexMatrix) -> Self {
        Self::from_fn(vec![z.rows(), z.cols()], |ix| z.get(ix[0], ix[1]))
    }

    /// Cube of side `size` with `order` axes, all entries `value`.
    pub fn constant(order: usize, size: usize, value: C64) -> Self {
        Self::from_fn(vec![size; order], |_| value)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of axes.
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> C64 {
        let off: usize = idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum();
        self.data[off]
    }

    /// Side length when every axis has the same size.
    pub fn cube_side(&self) -> Option<usize> {
        let n = self.dims[0];
        self.dims.iter().all(|&d| d == n).then_some(n)
    }

    /// Sub-array selecting `sets[a]` along axis `a`.
    pub fn subtensor(&self, sets: &[&IndexSet]) -> Result<Self> {
        if sets.len() != self.order() {
            return Err(Error::domain(format!(
                "need {} index sets, got {}",
                self.order(),
                sets.len()
            )));
        }
        for (a, s) in sets.iter().enumerate() {
            if !s.within(self.dims[a]) {
                return Err(Error::domain(format!(
                    "index set {:?} is outside axis {a} of size {}",
                    s.as_slice(),
                    self.dims[a]
                )));
            }
        }
        let dims: Vec<usize> = sets.iter().map(|s| s.len()).collect();
        let mut full = vec![0; self.order()];
        Ok(Self::from_fn(dims, |ix| {
            for (a, &i) in ix.iter().enumerate() {
                full[a] = sets[a].as_slice()[i];
            }
            self.get(&full)
        }))
    }

    /// The matrix view of an order-2 tensor.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.order() != 2 {
            return Err(Error::domain("only order-2 tensors convert to matrices"));
        }
        ComplexMatrix::new(self.dims[0], self.dims[1], self.data.clone())
    }

    /// Largest deviation `|z(i) - z(sigma i)|` over all index tuples and
    /// adjacent transpositions; zero for a fully symmetric cube.
    pub fn asymmetry(&self) -> f64 {
        if self.cube_side().is_none() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        let ell = self.order();
        let mut idx = vec![0; ell];
        for (flat, &v) in self.data.iter().enumerate() {
            let mut rem = flat;
            for (slot, &stride) in idx.iter_mut().zip(&self.strides) {
                *slot = rem / stride;
                rem %= stride;
            }
            for a in 0..ell.saturating_sub(1) {
                idx.swap(a, a + 1);
                worst = worst.max((self.get(&idx) - v).norm());
                idx.swap(a, a + 1);
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= SYMMETRY_TOLERANCE
    }
}

/// Row sets `J_1, ..., J_l` and a column set `K` selecting a minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSelector {
    pub rows: Vec<IndexSet>,
    pub cols: IndexSet,
}

impl MinorSelector {
    pub fn matrix(rows: IndexSet, cols: IndexSet) -> Self {
        MinorSelector {
            rows: vec![rows],
            cols,
        }
    }
}
