//! Householder QR least squares on column-scaled designs.

use alloc::vec;
use alloc::vec::Vec;

/// Largest accepted ratio between the extreme diagonal entries of `R`.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LeastSquares {
    pub beta: Vec<f64>,
    /// Diagonal of `(X^T X)^{-1}` in the original column units.
    pub gram_inverse_diag: Vec<f64>,
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Singular {
    pub condition: f64,
}

/// Solves `min ||X b - y||` where `columns[j]` is column `j` of `X`.
///
/// Columns are scaled to unit norm before factoring so the condition
/// estimate reflects collinearity rather than units.
pub(crate) fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares, Singular> {
    let k = columns.len();
    let n = y.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    debug_assert!(n >= k);

    let scales: Vec<f64> = columns.iter().map(|c| euclidean(c)).collect();
    if scales.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(Singular {
            condition: f64::INFINITY,
        });
    }
    let mut a: Vec<Vec<f64>> = columns
        .iter()
        .zip(&scales)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let mut qty = y.to_vec();
    let mut diag = vec![0.0; k];

    for j in 0..k {
        let norm = euclidean(&a[j][j..]);
        if norm == 0.0 {
            return Err(Singular {
                condition: f64::INFINITY,
            });
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        diag[j] = alpha;
        a[j][j] = alpha;
        a[j][j + 1..].iter_mut().for_each(|x| *x = 0.0);
        if vtv == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(j + 1) {
            reflect(&v, vtv, &mut col[j..]);
        }
        reflect(&v, vtv, &mut qty[j..]);
    }

    let max = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let min = diag.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    let condition = max / min;
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Singular { condition });
    }

    // Back substitution for R b = Q^T y.
    let mut scaled = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = qty[i];
        for j in i + 1..k {
            acc -= a[j][i] * scaled[j];
        }
        scaled[i] = acc / a[i][i];
    }

    // Rows of R^{-1}: (X^T X)^{-1} = R^{-1} R^{-T} in scaled units.
    let mut r_inv = vec![vec![0.0; k]; k];
    for col in 0..k {
        r_inv[col][col] = 1.0 / a[col][col];
        for i in (0..col).rev() {
            let mut acc = 0.0;
            for j in i + 1..=col {
                acc += a[j][i] * r_inv[j][col];
            }
            r_inv[i][col] = -acc / a[i][i];
        }
    }
    let gram_inverse_diag = (0..k)
        .map(|i| r_inv[i].iter().map(|x| x * x).sum::<f64>() / (scales[i] * scales[i]))
        .collect();
    let beta = scaled.iter().zip(&scales).map(|(b, s)| b / s).collect();
    Ok(LeastSquares {
        beta,
        gram_inverse_diag,
        condition,
    })
}

fn reflect(v: &[f64], vtv: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vtv;
    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= f * vi);
}

fn euclidean(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * libm::sqrt(v.iter().map(|x| (x / scale) * (x / scale)).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        // [[2, 1], [1, 3]] b = [3, 5] -> b = [0.8, 1.4]
        let cols = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let ls = least_squares(&cols, &[3.0, 5.0]).unwrap();
        assert!((ls.beta[0] - 0.8).abs() < 1e-14);
        assert!((ls.beta[1] - 1.4).abs() < 1e-14);
        // (X^T X)^{-1} = [[10, -5], [-5, 5]] / 25
        assert!((ls.gram_inverse_diag[0] - 0.4).abs() < 1e-14);
        assert!((ls.gram_inverse_diag[1] - 0.2).abs() < 1e-14);
    }

    #[test]
    fn zero_and_collinear_columns_are_singular() {
        let y = [1.0, 2.0, 3.0];
        assert!(least_squares(&[vec![1.0; 3], vec![0.0; 3]], &y).is_err());
        assert!(least_squares(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]], &y).is_err());
    }

    #[test]
    fn units_do_not_trigger_rank_errors() {
        let x1: Vec<f64> = (0..20).map(|i| 1e7 * (i as f64 + 1.0)).collect();
        let x2: Vec<f64> = (0..20).map(|i| 1e-4 * ((i * 7 % 5) as f64)).collect();
        let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 3e-7 * a + 5e3 * b).collect();
        let ls = least_squares(&[x1, x2], &y).unwrap();
        assert!((ls.beta[0] - 3e-7).abs() < 1e-18);
        assert!((ls.beta[1] - 5e3).abs() < 1e-7);
    }
}
