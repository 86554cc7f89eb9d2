//! Exact rational interpolation used to pull integer polynomial data out of
//! determinants and matrix traces without a symbolic-algebra dependency.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Lagrange interpolation through `(nodes[i], values[i])`, exact over the
/// rationals. Returns coefficients by ascending degree.
pub fn interpolate(nodes: &[BigRational], values: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(nodes.len(), values.len());
    let n = nodes.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // Basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::zero(); n];
        basis[0] = BigRational::one();
        let mut deg = 0;
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            denom *= &nodes[i] - &nodes[j];
            for k in (0..=deg).rev() {
                let shifted = basis[k].clone();
                basis[k + 1] += &shifted;
                basis[k] = -&nodes[j] * &shifted + (&basis[k] - &shifted);
            }
            deg += 1;
        }
        let scale = &values[i] / denom;
        for k in 0..n {
            coeffs[k] += &basis[k] * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Asserts every coefficient is an integer and converts to i64.
pub fn to_integer_coeffs(coeffs: &[BigRational], context: &str) -> Result<Vec<i64>> {
    coeffs
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::Internal(format!(
                    "{context}: non-integer coefficient {c}"
                )));
            }
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::Internal(format!("{context}: coefficient overflows i64")))
        })
        .collect()
}

/// Determinant of a square rational matrix by fraction-free-ish Gaussian
/// elimination (plain division is exact over the rationals).
pub fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}
