//! Tiny dense complex linear algebra: just what a fixed 6x6 problem needs.

use num_complex::Complex64;

/// Determinant by LU with partial pivoting.
pub fn det(m: &[[Complex64; 6]; 6]) -> Complex64 {
    let mut a = *m;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..6 {
        let mut p = col;
        let mut best = a[col][col].norm_sqr();
        for r in col + 1..6 {
            let v = a[r][col].norm_sqr();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col];
        det *= pv;
        for r in col + 1..6 {
            let f = a[r][col] / pv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col..6 {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

pub fn matmul(a: &[[Complex64; 6]; 6], b: &[[Complex64; 6]; 6]) -> [[Complex64; 6]; 6] {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 6]; 6];
    for i in 0..6 {
        for k in 0..6 {
            let aik = a[i][k];
            if aik == zero {
                continue;
            }
            for j in 0..6 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_det() {
        let zero = Complex64::new(0.0, 0.0);
        let mut m = [[zero; 6]; 6];
        for i in 0..6 {
            m[i][i] = Complex64::new(1.0, 0.0);
        }
        assert!((det(&m) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn triangular_det() {
        let zero = Complex64::new(0.0, 0.0);
        let mut m = [[zero; 6]; 6];
        let mut want = Complex64::new(1.0, 0.0);
        for i in 0..6 {
            let d = Complex64::new(1.0 + i as f64, 0.5 * i as f64);
            m[i][i] = d;
            want *= d;
            for j in i + 1..6 {
                m[i][j] = Complex64::new(0.3, -0.1);
            }
        }
        assert!((det(&m) - want).norm() < 1e-12 * want.norm());
    }
}
