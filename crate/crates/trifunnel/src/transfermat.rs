//! The word-length-2 geometric approximation: segment lengths, the 6x6
//! transfer matrix, its explicit eigenvalues, the determinant approximation
//! and the integer polynomial data hiding inside it.
//!
//! States are the six admissible two-letter words in the fixed order
//! `(1,2), (1,3), (2,1), (2,3), (3,1), (3,2)`. A transition from state `i`
//! to state `j` exists when the second letter of `i` equals the first of
//! `j`; its weight is `1` when the resulting triple has equal outer letters
//! and `z` otherwise, where `z = exp(-s exp(-b))` absorbs the `exp(-b)`
//! correction of the segment length.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::exact::{big, det_rational, interpolate, to_integer_coeffs};
use crate::linalg;
use crate::{Error, Result};

/// Fixed state order for the 6x6 matrices.
pub const STATES: [(u8, u8); 6] = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];

/// Dense 6x6 complex matrix in the fixed state order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix6(pub [[Complex64; 6]; 6]);

impl TransferMatrix6 {
    pub fn trace(&self) -> Complex64 {
        (0..6).map(|i| self.0[i][i]).sum()
    }

    pub fn matmul(&self, rhs: &TransferMatrix6) -> TransferMatrix6 {
        TransferMatrix6(linalg::matmul(&self.0, &rhs.0))
    }

    /// det(x I - M)
    pub fn char_poly_at(&self, x: Complex64) -> Complex64 {
        let mut m = self.0;
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = -m[i][j];
            }
            m[i][i] += x;
        }
        linalg::det(&m)
    }
}

/// Integer-coefficient polynomial, ascending degree, trailing coefficient
/// nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial(pub Vec<i64>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPolynomial(coeffs)
    }

    pub fn eval_i64(&self, x: i64) -> i64 {
        self.0.iter().rev().fold(0i64, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c as f64)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

/// Segment length between consecutive crossings for an admissible triple:
/// `b` when the outer letters agree, `b + exp(-b)` otherwise. This is the
/// main term only; the `O(exp(-2b))` remainder is deliberately dropped, which
/// is exactly what makes the 6x6 determinant an approximation rather than the
/// exact function.
pub fn segment_length_r2(triple: [u8; 3], b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    for s in triple {
        if !(1..=3).contains(&s) {
            return Err(Error::Domain(format!("symbol {s} outside {{1,2,3}}")));
        }
    }
    if triple[0] == triple[1] || triple[1] == triple[2] {
        return Err(Error::Domain(format!("inadmissible triple {triple:?}")));
    }
    Ok(if triple[0] == triple[2] {
        b
    } else {
        b + (-b).exp()
    })
}

/// The unsquared transition matrix with entries in {0, 1, z}.
pub fn build_c(z: Complex64) -> TransferMatrix6 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[zero; 6]; 6];
    for (i, si) in STATES.iter().enumerate() {
        for (j, sj) in STATES.iter().enumerate() {
            if si.1 == sj.0 {
                m[i][j] = if si.0 == sj.1 { one } else { z };
            }
        }
    }
    TransferMatrix6(m)
}

/// `B(z)`: the square of the {0, 1, z} transition matrix. Its diagonal is
/// all ones for every `z`.
pub fn build_b(z: Complex64) -> TransferMatrix6 {
    let c = build_c(z);
    c.matmul(&c)
}

/// The four distinct eigenvalues of `B(z)`; `mu_3` and `mu_4` each have
/// multiplicity two. The square root uses the principal branch, so the pair
/// `{mu_3, mu_4}` may swap across the branch cut; every set-level statement
/// is branch independent.
pub fn eigenvalues_mu(z: Complex64) -> [Complex64; 4] {
    let one = Complex64::new(1.0, 0.0);
    let root = (Complex64::new(4.0, 0.0) - 3.0 * z * z).sqrt();
    [
        (z - one) * (z - one),
        (z + one) * (z + one),
        one - z * z / 2.0 + z * root / 2.0,
        one - z * z / 2.0 - z * root / 2.0,
    ]
}

/// Determinant approximation to `Z_12(sigma/b + i t e^b)`:
/// `det(I - x B(z))` with `x = exp(-2 sigma - 2 i t b e^b)` and
/// `z = exp(-i t)` (the limit of `exp(-s exp(-b))` along the rescaling).
pub fn det_approx(sigma: f64, t: f64, b: f64) -> Complex64 {
    let x = (Complex64::new(-2.0 * sigma, 0.0) + Complex64::new(0.0, -2.0 * t * b * b.exp())).exp();
    let z = Complex64::new(0.0, -t).exp();
    det_i_minus_xb(x, z)
}

/// `det(I - x B(z))` for arbitrary complex `x`, `z`.
pub fn det_i_minus_xb(x: Complex64, z: Complex64) -> Complex64 {
    let bmat = build_b(z);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [[zero; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            m[i][j] = -x * bmat.0[i][j];
        }
        m[i][i] += 1.0;
    }
    linalg::det(&m)
}

/// The exact full determinant `det(I_6 - A^2(s))` of the weighted transfer
/// matrix at word length 2, i.e. `det(I - e^{-2sb} B(e^{-s e^{-b}}))`.
pub fn det_full(s: Complex64, b: f64) -> Complex64 {
    let x = (-2.0 * s * b).exp();
    let z = (-s * (-b).exp()).exp();
    det_i_minus_xb(x, z)
}

/// Expansion coefficients of `det(I - x B(y))` as a polynomial in `x` whose
/// coefficients are integer polynomials in `u = y^2`:
///
/// ```text
///   det(I - x B(y)) = sum_{k=0}^{6} x^k P_k(y^2).
/// ```
///
/// Extracted by exact rational interpolation: the determinant is evaluated
/// exactly over the rationals at 7 integer values of `x` and 13 integer
/// values of `y`, interpolated, checked to contain no odd powers of `y`, and
/// checked integer.
pub fn extract_pk() -> Result<[IntPolynomial; 7]> {
    let xs: Vec<BigRational> = (-3..=3).map(big).collect();
    let ys: Vec<BigRational> = (-6..=6).map(big).collect();
    // dets[iy][ix] = det(I - x_ix B(y_iy)) over Q
    let mut per_x_coeffs: Vec<Vec<BigRational>> = Vec::with_capacity(ys.len());
    for y in &ys {
        let values: Vec<BigRational> = xs.iter().map(|x| det_i_minus_xb_rational(x, y)).collect();
        let mut cs = interpolate(&xs, &values);
        cs.resize(7, num_traits::Zero::zero());
        per_x_coeffs.push(cs);
    }
    let mut out = Vec::with_capacity(7);
    for k in 0..7 {
        let values: Vec<BigRational> = per_x_coeffs.iter().map(|c| c[k].clone()).collect();
        let mut cy = interpolate(&ys, &values);
        cy.resize(13, num_traits::Zero::zero());
        let ints = to_integer_coeffs(&cy, "P_k extraction")?;
        for (deg, &c) in ints.iter().enumerate() {
            if deg % 2 == 1 && c != 0 {
                return Err(Error::Internal(format!(
                    "P_{k} has an odd-degree term {c} y^{deg}"
                )));
            }
        }
        let in_u: Vec<i64> = ints.iter().step_by(2).copied().collect();
        out.push(IntPolynomial::new(in_u));
    }
    Ok(out.try_into().expect("seven coefficients"))
}

fn det_i_minus_xb_rational(x: &BigRational, y: &BigRational) -> BigRational {
    use num_traits::{One, Zero};
    // B(y) over Q, then I - x B(y).
    let mut c = vec![vec![BigRational::zero(); 6]; 6];
    for (i, si) in STATES.iter().enumerate() {
        for (j, sj) in STATES.iter().enumerate() {
            if si.1 == sj.0 {
                c[i][j] = if si.0 == sj.1 {
                    BigRational::one()
                } else {
                    y.clone()
                };
            }
        }
    }
    let mut m = vec![vec![BigRational::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = BigRational::zero();
            for k in 0..6 {
                acc += &c[i][k] * &c[k][j];
            }
            m[i][j] = -(x * &acc);
        }
        let d = m[i][i].clone() + BigRational::one();
        m[i][i] = d;
    }
    det_rational(m)
}

/// The seven reference polynomials `P_0 ... P_6` in `u = y^2`.
pub fn reference_pk() -> [IntPolynomial; 7] {
    [
        IntPolynomial::new(vec![1]),
        IntPolynomial::new(vec![-6]),
        IntPolynomial::new(vec![15, -6]),
        IntPolynomial::new(vec![-20, 24, -6, -2]),
        IntPolynomial::new(vec![15, -36, 27, -6]),
        // -6 (u - 1)^4
        IntPolynomial::new(vec![-6, 24, -36, 24, -6]),
        // (u - 1)^6
        IntPolynomial::new(vec![1, -6, 15, -20, 15, -6, 1]),
    ]
}

/// The `P_k` family as a JSON array of integer coefficient arrays
/// (ascending powers of `u = y^2`).
pub fn pk_to_json() -> Result<String> {
    let pk = extract_pk()?;
    let rows: Vec<String> = pk
        .iter()
        .map(|p| {
            let cs: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
            format!("[{}]", cs.join(", "))
        })
        .collect();
    Ok(format!("[{}]\n", rows.join(", ")))
}

/// The trace polynomials for `n = 1..=max_n` as a JSON array of integer
/// coefficient arrays (ascending powers of `z`).
pub fn dk_to_json(max_n: usize) -> Result<String> {
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let p = trace_poly_dk(n)?;
        let cs: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
        rows.push(format!("[{}]", cs.join(", ")));
    }
    Ok(format!("[{}]\n", rows.join(", ")))
}

/// Coefficients of `tr C^{2n}(z)` as an integer polynomial; the coefficient
/// of `z^k` counts the fixed points of `sigma^{2n}` with window weight `k`.
///
/// Evaluated exactly at the integers `z = 0 ... 2n` via big-integer matrix
/// powers and interpolated over the rationals with an integrality check.
pub fn trace_poly_dk(n: usize) -> Result<IntPolynomial> {
    if n == 0 || n > 8 {
        return Err(Error::Domain(format!("n must lie in 1..=8, got {n}")));
    }
    let deg = 2 * n;
    let nodes: Vec<BigRational> = (0..=deg as i64).map(big).collect();
    let values: Vec<BigRational> = (0..=deg as i64)
        .map(|z| BigRational::from_integer(trace_c_power_int(z, 2 * n)))
        .collect();
    let coeffs = interpolate(&nodes, &values);
    let ints = to_integer_coeffs(&coeffs, "trace polynomial")?;
    Ok(IntPolynomial::new(ints))
}

fn trace_c_power_int(z: i64, power: usize) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let mut c = vec![vec![BigInt::zero(); 6]; 6];
    for (i, si) in STATES.iter().enumerate() {
        for (j, sj) in STATES.iter().enumerate() {
            if si.1 == sj.0 {
                c[i][j] = if si.0 == sj.1 {
                    BigInt::one()
                } else {
                    BigInt::from(z)
                };
            }
        }
    }
    let mut acc = c.clone();
    for _ in 1..power {
        let mut next = vec![vec![BigInt::zero(); 6]; 6];
        for i in 0..6 {
            for k in 0..6 {
                if acc[i][k].is_zero() {
                    continue;
                }
                for j in 0..6 {
                    let add = &acc[i][k] * &c[k][j];
                    next[i][j] += add;
                }
            }
        }
        acc = next;
    }
    (0..6).map(|i| acc[i][i].clone()).sum()
}
