//! Dense complex matrices: the carrier for coefficient matrices, search
//! iterates and reduced operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TensorError;

/// A dense rectangular complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TensorError> {
        if self.cols != other.rows {
            return Err(TensorError::MatrixShape(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Column `col` as amplitudes.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    /// Entry-wise `self += other`.
    pub fn add_in_place(&mut self, other: &Self) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Normalized unitarity defect `||M^dag M - I||_F / sqrt(dim)`.
    pub fn unitarity_residual(&self) -> Result<f64, TensorError> {
        if !self.is_square() {
            return Err(TensorError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dim = self.rows;
        // Accumulate ||M^dag M - I||_F^2 without materializing the product.
        let mut sum = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let mut entry = Complex64::ZERO;
                for k in 0..dim {
                    entry += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    entry -= Complex64::new(1.0, 0.0);
                }
                sum += entry.norm_sqr();
            }
        }
        Ok(sum.sqrt() / (dim as f64).sqrt())
    }

    /// The closest unitary in Frobenius norm: the unitary factor of the polar
    /// decomposition, computed through the singular value decomposition.
    pub fn polar_unitary_factor(&self, rank_tol: f64) -> Result<Self, TensorError> {
        if !self.is_square() {
            return Err(TensorError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dim = self.rows;
        let na = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| self.get(i, j));
        let svd = na.svd(true, true);
        let sigma_min = svd
            .singular_values
            .iter()
            .fold(f64::INFINITY, |acc, &s| acc.min(s));
        if sigma_min < rank_tol {
            return Err(TensorError::RankDeficient {
                sigma_min,
                tol: rank_tol,
            });
        }
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^T");
        let unitary = u * v_t;
        Ok(Self::from_fn(dim, dim, |i, j| unitary[(i, j)]))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self, TensorError> {
        if json.entries.len() != json.rows * json.cols {
            return Err(TensorError::MatrixShape(
                json.rows,
                json.cols,
                json.entries.len(),
                1,
            ));
        }
        Ok(Self {
            rows: json.rows,
            cols: json.cols,
            data: json
                .entries
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        })
    }
}

/// Wire format: row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}
