use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Real symmetric sparse operator in coordinate form.
///
/// Both triangles are stored explicitly and entries are kept sorted by
/// `(row, col)` with duplicates merged and exact zeros removed. A row-offset
/// table over the sorted entries gives a fixed traversal order for products.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dimension: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
    row_offsets: Vec<usize>,
}

impl SparseOperator {
    /// Builds an operator from an arbitrary list of triplets. Duplicate
    /// coordinates are summed; the caller is responsible for supplying both
    /// triangles.
    pub fn from_triplets(dimension: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut rows = Vec::with_capacity(triplets.len());
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dimension && c < dimension, "entry ({r}, {c}) out of range");
            assert!(v.is_finite(), "non-finite entry at ({r}, {c})");
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            values.push(v);
        }
        let keep: Vec<bool> = values.iter().map(|v| *v != 0.0).collect();
        let mut k = keep.iter();
        rows.retain(|_| *k.next().unwrap());
        let mut k = keep.iter();
        cols.retain(|_| *k.next().unwrap());
        values.retain(|v| *v != 0.0);

        let mut row_offsets = vec![0usize; dimension + 1];
        for &r in &rows {
            row_offsets[r + 1] += 1;
        }
        for i in 0..dimension {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self {
            dimension,
            rows,
            cols,
            values,
            row_offsets,
        }
    }

    /// Builds an operator from diagonal entries plus strictly-upper entries,
    /// mirroring the latter into the lower triangle.
    pub fn from_upper(
        dimension: usize,
        diagonal: impl IntoIterator<Item = (usize, f64)>,
        upper: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut t: Vec<(usize, usize, f64)> = diagonal.into_iter().map(|(i, v)| (i, i, v)).collect();
        for (r, c, v) in upper {
            debug_assert!(r != c);
            t.push((r, c, v));
            t.push((c, r, v));
        }
        Self::from_triplets(dimension, t)
    }

    pub fn diagonal_from(values: Vec<f64>) -> Self {
        let n = values.len();
        Self::from_triplets(n, values.into_iter().enumerate().map(|(i, v)| (i, i, v)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .zip(&self.cols)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r, c, v))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (lo, hi) = (self.row_offsets[row], self.row_offsets[row + 1]);
        match self.cols[lo..hi].binary_search(&col) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dimension).map(|i| self.get(i, i)).collect()
    }

    /// True when every stored (i, j, v) has a bitwise-equal (j, i, v).
    pub fn is_symmetric(&self) -> bool {
        self.entries().all(|(r, c, v)| self.get(c, r) == v)
    }

    /// y = A·x. Rows are traversed in order and each row sums its entries
    /// left to right, so the result is reproducible bit for bit.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dimension);
        debug_assert_eq!(y.len(), self.dimension);
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.values[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    /// Checked sparse product.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        let mut y = vec![0.0; self.dimension];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// ⟨x|A|x⟩.
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        let y = self.matvec(x)?;
        Ok(x.iter().zip(&y).map(|(a, b)| a * b).sum())
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> SparseOperator {
        let mut map = vec![usize::MAX; self.dimension];
        for (new, &old) in indices.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new_r, &old_r) in indices.iter().enumerate() {
            for k in self.row_offsets[old_r]..self.row_offsets[old_r + 1] {
                let c = map[self.cols[k]];
                if c != usize::MAX {
                    t.push((new_r, c, self.values[k]));
                }
            }
        }
        Self::from_triplets(indices.len(), t)
    }

    /// Σ cₖ·Aₖ over operators of equal dimension.
    pub fn linear_combination(terms: &[(f64, &SparseOperator)]) -> Result<SparseOperator> {
        let dimension = terms.first().map_or(0, |(_, op)| op.dimension);
        let mut t = Vec::new();
        for (c, op) in terms {
            if op.dimension != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: op.dimension,
                });
            }
            t.extend(op.entries().map(|(r, col, v)| (r, col, c * v)));
        }
        Ok(Self::from_triplets(dimension, t))
    }

    /// Largest |(AB − BA)ᵢⱼ| for two diagonal-or-general operators, computed
    /// densely. Intended for small test operators.
    pub fn commutator_max_abs(&self, other: &SparseOperator) -> Result<f64> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let a = self.to_dense();
        let b = other.to_dense();
        let c = &a * &b - &b * &a;
        Ok(c.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }
}
