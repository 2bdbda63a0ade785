//! Dense matrices over a [`FieldCtx`]: reduced row-echelon form, rank, kernel and
//! row-space comparison.
//!
//! The RREF with zero rows dropped is the canonical form used for every code, so two
//! row spaces are equal exactly when their canonical matrices are equal entry by entry.
//! Matrices over `F_2` are reduced through a bit-packed backend.

use std::fmt;
use std::sync::Arc;

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

#[derive(Clone)]
pub struct FMatrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for FMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for FMatrix {}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} over {}", self.rows, self.cols, self.ctx.descriptor())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`FMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn new(ctx: &Arc<FieldCtx>, rows: usize, cols: usize, data: Vec<Elem>) -> Result<FMatrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| !ctx.contains(v)) {
            return Err(Error::ElementOutOfRange(bad));
        }
        Ok(FMatrix { ctx: Arc::clone(ctx), rows, cols, data })
    }

    pub(crate) fn from_raw(ctx: &Arc<FieldCtx>, rows: usize, cols: usize, data: Vec<Elem>) -> FMatrix {
        debug_assert_eq!(data.len(), rows * cols);
        FMatrix { ctx: Arc::clone(ctx), rows, cols, data }
    }

    pub fn from_rows(ctx: &Arc<FieldCtx>, cols: usize, rows: &[Vec<Elem>]) -> Result<FMatrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend_from_slice(r);
        }
        FMatrix::new(ctx, rows.len(), cols, data)
    }

    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> FMatrix {
        FMatrix::from_raw(ctx, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(ctx: &Arc<FieldCtx>, k: usize) -> FMatrix {
        let mut m = FMatrix::zeros(ctx, k, k);
        for i in 0..k {
            m.data[i * k + i] = 1;
        }
        m
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    fn check_compatible(&self, other: &FMatrix) -> Result<()> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::CtxMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} columns",
                self.cols, other.cols
            )));
        }
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &FMatrix) -> Result<FMatrix> {
        self.check_compatible(other)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FMatrix::from_raw(&self.ctx, self.rows + other.rows, self.cols, data))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Result<FMatrix> {
        if rows.end > self.rows || cols.end > self.cols || rows.start > rows.end || cols.start > cols.end {
            return Err(Error::ShapeMismatch("submatrix range out of bounds".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            data.extend_from_slice(&self.row(r)[cols.clone()]);
        }
        Ok(FMatrix::from_raw(&self.ctx, rows.len(), cols.len(), data))
    }

    /// Columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        FMatrix::from_raw(&self.ctx, self.rows, cols.len(), data)
    }

    pub fn transpose(&self) -> FMatrix {
        let mut data = vec![0; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        FMatrix::from_raw(&self.ctx, self.cols, self.rows, data)
    }

    pub fn mat_mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(Error::CtxMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "({}x{})*({}x{})",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = vec![0; self.rows * other.cols];
        for r in 0..self.rows {
            let acc = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    // acc += a * other[k] written as acc -= (-a) * other[k]
                    f.sub_scaled(acc, f.neg(a), other.row(k));
                }
            }
        }
        Ok(FMatrix::from_raw(f, self.rows, other.cols, out))
    }

    fn is_f2(&self) -> bool {
        self.ctx.size() == 2
    }

    /// Gaussian elimination without column pivoting. Returns the pivot columns and leaves
    /// `data` holding the reduced rows (zero rows dropped).
    fn reduce(ctx: &FieldCtx, rows: usize, cols: usize, data: &mut Vec<Elem>, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pr) = (rank..rows).find(|&r| data[r * cols + c] != 0) else {
                continue;
            };
            if pr != rank {
                for j in 0..cols {
                    data.swap(rank * cols + j, pr * cols + j);
                }
            }
            let inv = ctx.inv(data[rank * cols + c]);
            ctx.scale(&mut data[rank * cols + c..(rank + 1) * cols], inv);
            let pivot_row: Vec<Elem> = data[rank * cols + c..(rank + 1) * cols].to_vec();
            let start = if full { 0 } else { rank + 1 };
            for r in start..rows {
                if r == rank {
                    continue;
                }
                let f = data[r * cols + c];
                if f != 0 {
                    ctx.sub_scaled(&mut data[r * cols + c..(r + 1) * cols], f, &pivot_row);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        data.truncate(rank * cols);
        pivots
    }

    fn reduced(&self, full: bool) -> (FMatrix, Vec<usize>) {
        if self.is_f2() {
            let mut b = BitMatrix::from_entries(self.rows, self.cols, &self.data);
            let pivots = b.reduce(full);
            let m = FMatrix::from_raw(&self.ctx, b.rows(), self.cols, b.to_entries());
            return (m, pivots);
        }
        let mut data = self.data.clone();
        let pivots = Self::reduce(&self.ctx, self.rows, self.cols, &mut data, full);
        (FMatrix::from_raw(&self.ctx, pivots.len(), self.cols, data), pivots)
    }

    /// The unique reduced row-echelon form with zero rows dropped.
    pub fn rref(&self) -> Rref {
        let (matrix, pivots) = self.reduced(true);
        Rref { rank: pivots.len(), matrix, pivots }
    }

    pub fn rank(&self) -> usize {
        self.reduced(false).1.len()
    }

    /// Basis of the right kernel `{v : M v^T = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> FMatrix {
        let Rref { matrix, pivots, .. } = self.rref();
        let f = &self.ctx;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut data = vec![0; free.len() * self.cols];
        for (k, &fc) in free.iter().enumerate() {
            let v = &mut data[k * self.cols..(k + 1) * self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(matrix.get(i, fc));
            }
        }
        FMatrix::from_raw(f, free.len(), self.cols, data)
    }

    /// Whether both matrices span the same row space.
    pub fn rowspace_equal(&self, other: &FMatrix) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.rref().matrix == other.rref().matrix)
    }

    /// Whether the row space of `other` lies inside the row space of `self`.
    pub fn rowspace_contains(&self, other: &FMatrix) -> Result<bool> {
        self.check_compatible(other)?;
        if other.rows == 0 {
            return Ok(true);
        }
        let base = self.rref();
        Ok(base.matrix.stack(other)?.rank() == base.rank)
    }

    /// Entrywise map, keeping shape and field.
    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> FMatrix {
        FMatrix::from_raw(&self.ctx, self.rows, self.cols, self.data.iter().map(|&v| f(v)).collect())
    }
}
