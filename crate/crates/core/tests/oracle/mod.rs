//! Exact least squares via rational normal equations.
//!
//! Every f64 input is a dyadic rational, so the solution of `X^T X b = X^T y`
//! can be computed exactly and rounded once at the end.
#![allow(dead_code)]

use episense_core::regress::{DesignMatrix, DesignRow};
use episense_core::rng::SplitMix64;
use episense_core::NaiveDate;
use num::traits::float::FloatCore;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

pub struct ExactFit {
    /// Intercept first when requested, then features.
    pub beta: Vec<f64>,
    /// Diagonal of `(X^T X)^{-1}`.
    pub gram_inverse_diag: Vec<f64>,
    pub rss: f64,
}

/// Splits a finite f64 into `mantissa * 2^exponent` with an integer mantissa.
fn decode(v: f64) -> (BigInt, i32) {
    let (m, e, sign) = v.integer_decode();
    (BigInt::from(m) * i64::from(sign), i32::from(e))
}

/// Rescales values to integers sharing one power-of-two exponent.
fn to_integers(values: &[f64]) -> (Vec<BigInt>, i32) {
    let decoded: Vec<(BigInt, i32)> = values.iter().map(|&v| decode(v)).collect();
    let min = decoded.iter().filter(|(m, _)| !m.is_zero()).map(|&(_, e)| e).min().unwrap_or(0);
    let ints = decoded.into_iter().map(|(m, e)| m << (e - min) as usize).collect();
    (ints, min)
}

fn pow2(e: i32) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << e as usize)
    } else {
        BigRational::new(one.clone(), one << (-e) as usize)
    }
}

/// Solves the normal equations exactly. `rows[i]` holds the features of
/// observation `i`; an all-ones column is prepended when `intercept` is set.
///
/// Inputs are scaled to integers, the Gram system is reduced with
/// fraction-free (Bareiss) elimination and only the final back substitution
/// uses rationals.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64], intercept: bool) -> ExactFit {
    let k = rows[0].len() + usize::from(intercept);
    let flat: Vec<f64> = rows
        .iter()
        .flat_map(|r| {
            let lead = if intercept { Some(1.0) } else { None };
            lead.into_iter().chain(r.iter().copied())
        })
        .collect();
    let (xi, ex) = to_integers(&flat);
    let (yi, ey) = to_integers(y);
    let x: Vec<&[BigInt]> = xi.chunks(k).collect();

    // Augmented [X^T X | X^T y | I], all integer.
    let width = 2 * k + 1;
    let mut m = vec![vec![BigInt::zero(); width]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = x.iter().map(|r| &r[i] * &r[j]).sum();
        }
        m[i][k] = x.iter().zip(&yi).map(|(r, t)| &r[i] * t).sum();
        m[i][k + 1 + i] = BigInt::one();
    }

    let mut prev = BigInt::one();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero()).expect("singular oracle system");
        m.swap(col, pivot);
        for r in col + 1..k {
            for c in col + 1..width {
                let v = (&m[r][c] * &m[col][col] - &m[r][col] * &m[col][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }

    let back = |rhs: usize| -> Vec<BigRational> {
        let mut sol = vec![BigRational::zero(); k];
        for i in (0..k).rev() {
            let mut acc = BigRational::from_integer(m[i][rhs].clone());
            for j in i + 1..k {
                acc -= BigRational::from_integer(m[i][j].clone()) * &sol[j];
            }
            sol[i] = acc / BigRational::from_integer(m[i][i].clone());
        }
        sol
    };

    // X = X' 2^ex and y = y' 2^ey, so b = b' 2^(ey - ex).
    let beta: Vec<BigRational> = back(k).into_iter().map(|b| b * pow2(ey - ex)).collect();
    let gram_inverse_diag = (0..k)
        .map(|i| (&back(k + 1 + i)[i] * pow2(-2 * ex)).to_f64().unwrap())
        .collect();

    // At the optimum rss = y^T y - b^T X^T y.
    let xty: Vec<BigInt> = (0..k).map(|i| x.iter().zip(&yi).map(|(r, t)| &r[i] * t).sum()).collect();
    let yty: BigInt = yi.iter().map(|t| t * t).sum();
    let scaled_beta = beta.iter().map(|b| b * pow2(ex - ey));
    let fitted_dot: BigRational = scaled_beta.zip(&xty).map(|(b, v)| b * BigRational::from_integer(v.clone())).sum();
    let rss = (BigRational::from_integer(yty) - fitted_dot) * pow2(2 * ey);
    ExactFit {
        beta: beta.iter().map(|b| b.to_f64().unwrap()).collect(),
        gram_inverse_diag,
        rss: rss.to_f64().unwrap(),
    }
}

/// A random, well-conditioned instance with `n <= 50` rows and `p <= 5`
/// features; features are uniform on [-5, 5] and the noise is standard normal.
pub fn random_instance(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let p = 1 + rng.below(5) as usize;
    let n = p + 8 + rng.below((50 - p - 8 + 1) as u64) as usize;
    let truth: Vec<f64> = (0..=p).map(|_| rng.uniform(-3.0, 3.0)).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..p).map(|_| rng.uniform(-5.0, 5.0)).collect()).collect();
    let y = rows
        .iter()
        .map(|r| truth[0] + r.iter().zip(&truth[1..]).map(|(a, b)| a * b).sum::<f64>() + rng.normal())
        .collect();
    (rows, y)
}

pub fn to_design(rows: &[Vec<f64>], y: &[f64]) -> DesignMatrix {
    let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    let design_rows = rows
        .iter()
        .zip(y)
        .zip(start.iter_days())
        .map(|((f, &target), date)| DesignRow { features: f.clone(), target, date })
        .collect();
    let names = (0..rows[0].len()).map(|j| format!("x{j}")).collect();
    DesignMatrix::new(design_rows, names).unwrap()
}
