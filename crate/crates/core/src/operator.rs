//! Dense complex matrices over K-type windows.

use crate::error::{Error, Result};
use crate::harmonics::KTypeWindow;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// A finite-rank operator between two K-type windows, stored densely with
/// rows aligned to `row_window.indices()` and columns to `col_window.indices()`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub row_window: KTypeWindow,
    pub col_window: KTypeWindow,
    pub entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn zero(row_window: KTypeWindow, col_window: KTypeWindow) -> Self {
        TruncatedOperator {
            row_window,
            col_window,
            entries: DMatrix::zeros(row_window.dim(), col_window.dim()),
        }
    }

    pub fn identity(window: KTypeWindow) -> Self {
        let mut op = Self::zero(window, window);
        for i in 0..window.dim() {
            op.entries[(i, i)] = Complex64::new(1.0, 0.0);
        }
        op
    }

    /// Builds an operator entrywise from K-type pairs `(l, n)` (row, column).
    pub fn from_fn<F: FnMut(i64, i64) -> Complex64>(
        row_window: KTypeWindow,
        col_window: KTypeWindow,
        mut f: F,
    ) -> Self {
        let rows = row_window.indices();
        let cols = col_window.indices();
        let entries = DMatrix::from_fn(rows.len(), cols.len(), |i, j| f(rows[i], cols[j]));
        TruncatedOperator { row_window, col_window, entries }
    }

    pub fn get(&self, l: i64, n: i64) -> Result<Complex64> {
        let i = self.row_window.position(l)?;
        let j = self.col_window.position(n)?;
        Ok(self.entries[(i, j)])
    }

    pub fn set(&mut self, l: i64, n: i64, v: Complex64) -> Result<()> {
        let i = self.row_window.position(l)?;
        let j = self.col_window.position(n)?;
        self.entries[(i, j)] = v;
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(TruncatedOperator {
            row_window: self.row_window,
            col_window: self.col_window,
            entries: &self.entries + &rhs.entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(TruncatedOperator {
            row_window: self.row_window,
            col_window: self.col_window,
            entries: &self.entries - &rhs.entries,
        })
    }

    pub fn scale(&self, lam: Complex64) -> Self {
        TruncatedOperator {
            row_window: self.row_window,
            col_window: self.col_window,
            entries: self.entries.map(|e| e * lam),
        }
    }

    /// Composition `self o rhs`; the inner windows must match.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.col_window != rhs.row_window {
            return Err(Error::WindowMismatch(format!(
                "compose: inner windows differ ({:?} vs {:?})",
                self.col_window, rhs.row_window
            )));
        }
        Ok(TruncatedOperator {
            row_window: self.row_window,
            col_window: rhs.col_window,
            entries: &self.entries * &rhs.entries,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        TruncatedOperator {
            row_window: self.col_window,
            col_window: self.row_window,
            entries: self.entries.adjoint(),
        }
    }

    /// Zeroes all entries whose row or column K-type fails the predicate.
    pub fn mask<F: Fn(i64) -> bool>(&self, keep: F) -> Self {
        let rows = self.row_window.indices();
        let cols = self.col_window.indices();
        let mut out = self.clone();
        for (i, l) in rows.iter().enumerate() {
            for (j, n) in cols.iter().enumerate() {
                if !keep(*l) || !keep(*n) {
                    out.entries[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let sv = self.entries.clone().singular_values();
        sv.iter().cloned().fold(0.0, f64::max)
    }

    /// All singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.entries.clone().singular_values().iter().cloned().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|| self rhs - rhs self ||_op`; both operators must be square on the
    /// same window.
    pub fn commutator_norm(&self, rhs: &Self) -> Result<f64> {
        let ab = self.compose(rhs)?;
        let ba = rhs.compose(self)?;
        Ok(ab.sub(&ba)?.op_norm())
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.row_window != rhs.row_window || self.col_window != rhs.col_window {
            return Err(Error::WindowMismatch(format!(
                "shape mismatch: ({:?}, {:?}) vs ({:?}, {:?})",
                self.row_window, self.col_window, rhs.row_window, rhs.col_window
            )));
        }
        Ok(())
    }
}
