//! Fourier analysis on K = SO(2) and K-type windows.
//!
//! The basis vector of the K-type `n` is `e_n(k_phi) = e^{-i n phi}`, so the
//! Fourier coefficient `b_n(f) = (1/2pi) integral f(k_phi) e^{-i n phi} dphi`
//! picks the `e^{+i n phi}`-content of `f`: `b_n(e_m) = delta_{n,-m}`.

use crate::error::{Error, Result};
use crate::operator::TruncatedOperator;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parity of a window: even windows hold the K-types of `L^2(K)_+`
/// (even integers, including 0), odd windows those of `L^2(K)_-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(&self, n: i64) -> bool {
        match self {
            Parity::Even => n.rem_euclid(2) == 0,
            Parity::Odd => n.rem_euclid(2) == 1,
        }
    }
}

/// The finite set of K-types `{ n : |n| <= max_index, n of the given parity }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTypeWindow {
    pub parity: Parity,
    pub max_index: u32,
}

impl KTypeWindow {
    pub fn new(parity: Parity, max_index: u32) -> Result<Self> {
        if max_index < 2 {
            return Err(Error::Domain(format!("window max_index must be >= 2, got {max_index}")));
        }
        Ok(KTypeWindow { parity, max_index })
    }

    /// K-types in ascending order. Even windows always contain 0.
    pub fn indices(&self) -> Vec<i64> {
        let n = self.max_index as i64;
        let start = match self.parity {
            Parity::Even => -(n - n % 2),
            Parity::Odd => -(n - (n + 1) % 2),
        };
        (0..)
            .map(|k| start + 2 * k)
            .take_while(|m| *m <= n)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.indices().len()
    }

    /// Position of K-type `n` inside `indices()`.
    pub fn position(&self, n: i64) -> Result<usize> {
        if !self.parity.matches(n) {
            return Err(Error::ParityMismatch(format!("K-type {n} not of window parity")));
        }
        let idx = self.indices();
        idx.binary_search(&n)
            .map_err(|_| Error::WindowMismatch(format!("K-type {n} outside window (max {})", self.max_index)))
    }

    pub fn contains(&self, n: i64) -> bool {
        self.parity.matches(n) && n.unsigned_abs() <= self.max_index as u64
    }
}

/// Coefficient vector over a window, aligned with `window.indices()`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    pub window: KTypeWindow,
    pub coeffs: Vec<Complex64>,
}

impl FourierVector {
    pub fn zero(window: KTypeWindow) -> Self {
        FourierVector { window, coeffs: vec![Complex64::new(0.0, 0.0); window.dim()] }
    }

    /// Basis vector `e_n`.
    pub fn basis(window: KTypeWindow, n: i64) -> Result<Self> {
        let mut v = Self::zero(window);
        let pos = window.position(n)?;
        v.coeffs[pos] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Pointwise evaluation `f(k_phi) = sum_n c_n e^{-i n phi}`.
    pub fn eval(&self, phi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.window.indices().iter().zip(&self.coeffs) {
            acc += c * Complex64::from_polar(1.0, -(*n as f64) * phi);
        }
        acc
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Keeps only the K-type `n` component (`p_n`).
    pub fn project_kt(&self, n: i64) -> Result<Self> {
        let pos = self.window.position(n)?;
        let mut v = Self::zero(self.window);
        v.coeffs[pos] = self.coeffs[pos];
        Ok(v)
    }
}

/// `b_n(f)` from equispaced samples `f(2 pi j / M)`; requires `2|n| < M` so
/// the mode is not aliased.
pub fn fourier_coeff(samples: &[Complex64], n: i64) -> Result<Complex64> {
    let m = samples.len();
    if 2 * n.unsigned_abs() as usize >= m {
        return Err(Error::Aliasing { n, points: m });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, f) in samples.iter().enumerate() {
        let phi = 2.0 * PI * j as f64 / m as f64;
        acc += f * Complex64::from_polar(1.0, -(n as f64) * phi);
    }
    Ok(acc / m as f64)
}

/// Projection onto the K-types selected by `keep`, as a window operator.
pub fn projection<F: Fn(i64) -> bool>(window: KTypeWindow, keep: F) -> TruncatedOperator {
    let idx = window.indices();
    let mut op = TruncatedOperator::zero(window, window);
    for (i, n) in idx.iter().enumerate() {
        if keep(*n) {
            op.entries[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    op
}

/// `p_+`: projection onto strictly positive K-types.
pub fn projection_plus(window: KTypeWindow) -> TruncatedOperator {
    projection(window, |n| n > 0)
}

/// `p_-`: projection onto strictly negative K-types.
pub fn projection_minus(window: KTypeWindow) -> TruncatedOperator {
    projection(window, |n| n < 0)
}

/// `p_0`: projection onto the K-type 0 (zero on odd windows).
pub fn projection_zero(window: KTypeWindow) -> TruncatedOperator {
    projection(window, |n| n == 0)
}
