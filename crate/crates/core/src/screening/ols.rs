//! Ordinary least squares with an intercept.

use crate::error::{Error, Result};
use crate::linalg::{least_squares, LeastSquares, Matrix};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit<T> {
    pub names: Vec<String>,
    /// Intercept first, then one coefficient per predictor.
    pub coefficients: Vec<T>,
    pub r: T,
    pub r2: T,
    pub adj_r2: T,
    /// Overall F statistic; infinite for an exact fit.
    pub f: T,
    pub sse: T,
    pub sst: T,
    pub fitted: Vec<T>,
    pub residuals: Vec<T>,
}

impl<T: Real> OlsFit<T> {
    pub fn n(&self) -> usize {
        self.residuals.len()
    }

    /// Number of predictors, excluding the intercept.
    pub fn k(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Residual degrees of freedom `n - k - 1`.
    pub fn df_resid(&self) -> usize {
        self.n() - self.k() - 1
    }

    pub fn predict(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.k());
        x.iter()
            .zip(&self.coefficients[1..])
            .fold(self.coefficients[0], |acc, (&xi, &b)| acc + xi * b)
    }
}

/// Design matrix `[1 | X]` from predictor columns.
pub fn design_matrix<T: Real>(columns: &[Vec<T>], n: usize) -> Matrix<T> {
    Matrix::from_fn(n, columns.len() + 1, |i, j| if j == 0 { T::one() } else { columns[j - 1][i] })
}

/// Fits `y = b0 + Σ b_j x_j` by Householder QR.
pub fn ols_fit<T: Real, S: AsRef<str>>(names: &[S], columns: &[Vec<T>], y: &[T]) -> Result<OlsFit<T>> {
    if names.len() != columns.len() {
        return Err(Error::DimensionMismatch("names and columns differ in count".into()));
    }
    let n = y.len();
    if let Some((j, _)) = columns.iter().enumerate().find(|(_, c)| c.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "column `{}` has {} rows, response has {n}",
            names[j].as_ref(),
            columns[j].len()
        )));
    }
    let k = columns.len();
    if n <= k + 1 {
        return Err(Error::invalid(format!(
            "least squares with {k} predictors needs more than {} observations, got {n}",
            k + 1
        )));
    }
    let x = design_matrix(columns, n);
    let coefficients = match least_squares(&x, y) {
        LeastSquares::Solved(b) => b,
        LeastSquares::RankDeficient(j) => {
            let column = if j == 0 {
                "intercept".to_string()
            } else {
                names[j - 1].as_ref().to_string()
            };
            return Err(Error::RankDeficient { column });
        }
    };
    let fitted = x.mul_vec(&coefficients).expect("design width matches coefficients");
    let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&a, &b)| a - b).collect();
    let nn = T::from_count(n);
    let mean = y.iter().fold(T::zero(), |a, &b| a + b) / nn;
    let sst = y.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean));
    if sst <= T::zero() {
        return Err(Error::ZeroVariance("response".into()));
    }
    let sse = residuals.iter().fold(T::zero(), |a, &e| a + e * e);
    let r2 = (T::one() - sse / sst).max(T::zero());
    let kk = T::from_count(k);
    let df = T::from_count(n - k - 1);
    let adj_r2 = T::one() - (T::one() - r2) * (nn - T::one()) / df;
    let f = if k == 0 {
        T::zero()
    } else if sse <= T::zero() {
        T::infinity()
    } else {
        ((sst - sse) / kk) / (sse / df)
    };
    Ok(OlsFit {
        names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        coefficients,
        r: r2.sqrt(),
        r2,
        adj_r2,
        f,
        sse,
        sst,
        fitted,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn exact_linear_fit() {
        let x1 = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let x2 = vec![2.0, 1.0, 4.0, 3.0, 6.0];
        let y: Vec<f64> = (0..5).map(|i| 1.5 + 2.0 * x1[i] - 0.5 * x2[i]).collect();
        let fit = ols_fit(&["a", "b"], &[x1, x2], &y).unwrap();
        assert_relative_eq!(fit.r2, 1.0, epsilon = 1e-12);
        for e in &fit.residuals {
            assert!(e.abs() < 1e-10);
        }
        assert_relative_eq!(fit.coefficients[0], 1.5, epsilon = 1e-10);
        assert_relative_eq!(fit.coefficients[1], 2.0, epsilon = 1e-10);
        assert_relative_eq!(fit.coefficients[2], -0.5, epsilon = 1e-10);
    }

    #[test]
    fn three_point_normal_equations() {
        // x = (1, 2, 4), y = (1, 3, 4). Normal equations:
        // [3 7; 7 21] b = [8; 23]  =>  b1 = (3*23 - 7*8)/(3*21 - 49) = 13/14,
        // b0 = (8 - 7*b1)/3 = 1/2.
        let fit = ols_fit(&["x"], &[vec![1.0, 2.0, 4.0]], &[1.0, 3.0, 4.0]).unwrap();
        assert_relative_eq!(fit.coefficients[1], 13.0 / 14.0, epsilon = 1e-12);
        assert_relative_eq!(fit.coefficients[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn collinear_column_is_named() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let b: Vec<f64> = a.iter().map(|v| 3.0 * v - 1.0).collect();
        let err = ols_fit(&["a", "b"], &[a, b], &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap_err();
        assert_eq!(err, Error::RankDeficient { column: "b".into() });
    }

    #[test]
    fn too_few_rows() {
        assert!(ols_fit(&["a", "b"], &[vec![1.0, 2.0, 3.0], vec![3.0, 1.0, 2.0]], &[1.0, 2.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_to_design(
            rows in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64, -100.0..100.0f64), 6..40)
        ) {
            let x1: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let x2: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let y: Vec<f64> = rows.iter().map(|r| r.2).collect();
            if let Ok(fit) = ols_fit(&["a", "b"], &[x1.clone(), x2.clone()], &y) {
                let scale = y.iter().map(|v| v.abs()).fold(1.0, f64::max) * 100.0;
                let dot = |c: &[f64]| c.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum::<f64>();
                prop_assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-6 * scale);
                prop_assert!(dot(&x1).abs() < 1e-6 * scale);
                prop_assert!(dot(&x2).abs() < 1e-6 * scale);
            }
        }
    }
}
