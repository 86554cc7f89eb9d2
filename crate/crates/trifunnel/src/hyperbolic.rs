//! Geometry of the three reflection geodesics in the upper half-plane.
//!
//! The three geodesics `beta_j` are semicircles over the real line obtained
//! by mapping the disk-model geodesics with endpoints `exp((2*pi*j/3 +- theta)i)`
//! through the Cayley map, which sends a boundary angle `phi` to
//! `sin(phi) / (1 + cos(phi)) = tan(phi/2)`. Requiring the three geodesics to
//! be pairwise at hyperbolic distance `b` fixes the aperture:
//! `sin(theta) = sqrt(3) / (2 cosh(b/2))`, so each funnel boundary geodesic
//! (the composition of two reflections) has length exactly `2b`.
//!
//! Closed geodesics are cut out by cyclic reflection words; their lengths come
//! from the normalized trace of the corresponding product of reflection
//! matrices, carried in scaled form so that words of any admissible length
//! stay inside f64 range.

use crate::{Error, Result};

/// All geometric constants of the surface derived from the half-length `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    /// Half the boundary-geodesic length; pairwise distance of the `beta_j`.
    pub b: f64,
    /// Half-aperture of each reflection geodesic seen from the disk center.
    pub theta: f64,
    /// Euclidean radii of the semicircles `beta_1, beta_2, beta_3`.
    pub eps: [f64; 3],
    /// Euclidean centers of the semicircles on the real line.
    pub c: [f64; 3],
    /// Rescaling exponent used by the truncation bound, in (1, 2).
    pub kappa: f64,
}

/// Builds the surface constants for boundary half-length `b`.
///
/// The identity `sin(theta) * 2 cosh(b/2) = sqrt(3)` holds to machine
/// precision, and the three disks of radius `eps_j` around `c_j` are pairwise
/// disjoint for every `b > 0`.
pub fn make_surface(b: f64, kappa: f64) -> Result<SurfaceParams> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    if !(kappa > 1.0 && kappa < 2.0) {
        return Err(Error::Domain(format!(
            "kappa must lie in (1,2), got {kappa}"
        )));
    }
    let theta = (3.0f64.sqrt() / (2.0 * (b / 2.0).cosh())).asin();
    let mut eps = [0.0; 3];
    let mut c = [0.0; 3];
    for j in 1..=3usize {
        let base = 2.0 * std::f64::consts::PI * j as f64 / 3.0;
        let plus = boundary_point(base + theta);
        let minus = boundary_point(base - theta);
        eps[j - 1] = 0.5 * (plus - minus);
        c[j - 1] = 0.5 * (plus + minus);
    }
    let params = SurfaceParams {
        b,
        theta,
        eps,
        c,
        kappa,
    };
    // Disjointness is automatic for b > 0; a violation means the formulas
    // above were broken, not the input.
    for i in 0..3 {
        if !(eps[i] > 0.0) {
            return Err(Error::Internal(format!("nonpositive radius eps_{}", i + 1)));
        }
        for j in i + 1..3 {
            if (c[i] - c[j]).abs() <= eps[i] + eps[j] {
                return Err(Error::Internal(format!(
                    "geodesics beta_{} and beta_{} are not disjoint",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(params)
}

/// Image of the disk boundary angle under the Cayley map.
fn boundary_point(phi: f64) -> f64 {
    phi.sin() / (1.0 + phi.cos())
}

/// Side length of the right-angled hexagon with alternating sides `b`:
/// `eps_b = acosh((cosh b + cosh^2 b) / sinh^2 b)`.
///
/// For large `b` this behaves like `2 exp(-b/2) + (5/3) exp(-3b/2)`.
pub fn hexagon_side(b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    let ch = b.cosh();
    let sh = b.sinh();
    let arg = (ch + ch * ch) / (sh * sh);
    if arg < 1.0 {
        return Err(Error::Internal(format!(
            "acosh argument {arg} < 1 at b = {b}"
        )));
    }
    Ok(arg.acosh())
}

/// Distance between the geodesic with endpoints `(z1, z2)` and the nested
/// geodesic with endpoints `(w1, w2)`, where `z1 < w1 < w2 < z2` on the
/// boundary line.
///
/// The cross ratio `((z1-w1)(w2-z2)) / ((z1-w2)(w1-z2))` equals
/// `tanh^2(d/2)` and must land in (0, 1) for disjoint geodesics.
pub fn geodesic_distance(z1: f64, w1: f64, w2: f64, z2: f64) -> Result<f64> {
    if !(z1 < w1 && w1 < w2 && w2 < z2) {
        return Err(Error::Domain(format!(
            "boundary points must satisfy z1 < w1 < w2 < z2, got {z1}, {w1}, {w2}, {z2}"
        )));
    }
    let cr = ((z1 - w1) * (w2 - z2)) / ((z1 - w2) * (w1 - z2));
    if !(cr > 0.0 && cr < 1.0) {
        return Err(Error::Domain(format!("cross ratio {cr} outside (0,1)")));
    }
    Ok(2.0 * cr.sqrt().atanh())
}

/// A 2x2 real matrix carried as `2^exp2 * entries`, with the semantic
/// determinant tracked separately in (log magnitude, sign) form.
///
/// Renormalization keeps the largest entry magnitude in [1/2, 2], so products
/// over long reflection words neither overflow nor lose relative precision.
/// Scaling by powers of two is exact in binary floating point.
#[derive(Debug, Clone, Copy)]
pub struct ScaledMatrix2 {
    /// Row-major entries [a, b, c, d].
    pub m: [f64; 4],
    /// Power-of-two scale exponent.
    pub exp2: i64,
    /// Log of |det| of the semantic matrix.
    pub det_log: f64,
    /// Sign of the semantic determinant.
    pub det_sign: i8,
}

impl ScaledMatrix2 {
    /// The reflection in `beta_j` acts on boundary points as
    /// `x -> eps^2/(x - c) + c`; as a matrix that is
    /// `[[c, eps^2 - c^2], [1, -c]]` with determinant `-eps^2`.
    pub fn reflection(j: usize, params: &SurfaceParams) -> Self {
        let c = params.c[j - 1];
        let e = params.eps[j - 1];
        let mut out = ScaledMatrix2 {
            m: [c, e * e - c * c, 1.0, -c],
            exp2: 0,
            det_log: 2.0 * e.ln(),
            det_sign: -1,
        };
        out.renormalize();
        out
    }

    fn renormalize(&mut self) {
        let mx = self.m.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if mx == 0.0 || !mx.is_finite() {
            return;
        }
        let k = mx.log2().round() as i64;
        if k != 0 {
            let f = (2.0f64).powi(-(k as i32));
            for v in &mut self.m {
                *v *= f;
            }
            self.exp2 += k;
        }
    }

    /// Matrix product; renormalizes the result and composes the tracked
    /// determinant data exactly.
    pub fn mul(&self, rhs: &ScaledMatrix2) -> ScaledMatrix2 {
        let [a, b, c, d] = self.m;
        let [p, q, r, s] = rhs.m;
        let mut out = ScaledMatrix2 {
            m: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s],
            exp2: self.exp2 + rhs.exp2,
            det_log: self.det_log + rhs.det_log,
            det_sign: self.det_sign * rhs.det_sign,
        };
        out.renormalize();
        out
    }

    /// ln of |trace| of the semantic matrix, None for exact cancellation.
    fn trace_log(&self) -> Option<f64> {
        let t = (self.m[0] + self.m[3]).abs();
        if t == 0.0 {
            return None;
        }
        Some(t.ln() + self.exp2 as f64 * std::f64::consts::LN_2)
    }
}

/// `acosh` of a number given by its natural log, stable for huge arguments.
fn acosh_from_log(ln_x: f64) -> f64 {
    if ln_x < 9.3 {
        ln_x.exp().acosh()
    } else {
        // acosh x = ln x + ln(1 + sqrt(1 - x^-2)); the x^-2 term underflows
        // harmlessly to 0 once x exceeds f64 range, leaving ln x + ln 2.
        let t = (-2.0 * ln_x).exp();
        ln_x + (1.0 + (1.0 - t).sqrt()).ln()
    }
}

/// Length of the closed geodesic with cutting word `word`.
///
/// The word must have even length and be cyclically admissible (no two
/// cyclically adjacent symbols equal). The length is
/// `2 acosh(|tr P| / (2 sqrt(|det P|)))` for the product `P` of the
/// reflection matrices along the word.
pub fn geodesic_length(word: &[u8], params: &SurfaceParams) -> Result<f64> {
    if word.len() < 2 || word.len() % 2 != 0 {
        return Err(Error::Domain(format!(
            "word length must be even and >= 2, got {}",
            word.len()
        )));
    }
    check_admissible(word)?;
    let mut prod = ScaledMatrix2::reflection(word[0] as usize, params);
    for &j in &word[1..] {
        prod = prod.mul(&ScaledMatrix2::reflection(j as usize, params));
    }
    if prod.det_sign <= 0 {
        return Err(Error::Internal(
            "even reflection product with negative determinant".into(),
        ));
    }
    let tr_log = prod
        .trace_log()
        .ok_or_else(|| Error::Numerical("vanishing trace in reflection product".into()))?;
    // x = |tr| / (2 sqrt(det))
    let ln_x = tr_log - std::f64::consts::LN_2 - 0.5 * prod.det_log;
    if ln_x < 0.0 {
        // |tr|/(2 sqrt det) < 1 would mean an elliptic product, which no
        // admissible word can produce.
        return Err(Error::Numerical(format!(
            "non-hyperbolic reflection product for word {word:?} (normalized trace {})",
            ln_x.exp()
        )));
    }
    let len = 2.0 * acosh_from_log(ln_x);
    if !(len > 0.0) {
        return Err(Error::Numerical(format!(
            "degenerate length for word {word:?}"
        )));
    }
    Ok(len)
}

pub(crate) fn check_admissible(word: &[u8]) -> Result<()> {
    if word.is_empty() {
        return Err(Error::Domain("empty word".into()));
    }
    for &s in word {
        if !(1..=3).contains(&s) {
            return Err(Error::Domain(format!("symbol {s} outside {{1,2,3}}")));
        }
    }
    for i in 0..word.len() {
        if word[i] == word[(i + 1) % word.len()] {
            return Err(Error::Domain(format!(
                "word {word:?} has equal cyclically adjacent symbols at {i}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(b: f64) -> SurfaceParams {
        make_surface(b, 1.05).unwrap()
    }

    #[test]
    fn aperture_identity() {
        // sin(theta) * 2 cosh(b/2) = sqrt(3) is the defining relation.
        for b in [0.5, 2.0, 4.0, 8.0, 15.0] {
            let p = surface(b);
            assert!((p.theta.sin() * 2.0 * (b / 2.0).cosh() - 3.0f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn aperture_asymptotics() {
        // theta ~ sqrt(3) e^{-b/2}; the relative error is O(e^{-b}).
        let ratio = |b: f64| surface(b).theta / (3.0f64.sqrt() * (-b / 2.0).exp());
        let r10 = (ratio(10.0) - 1.0).abs();
        let r12 = (ratio(12.0) - 1.0).abs();
        assert!(r10 < 1e-4, "{r10}");
        assert!(r12 < r10, "error must shrink with b");
    }

    #[test]
    fn radii_symmetric() {
        // The Cayley map sends the disk rotation to a hyperbolic rotation, so
        // only the mirror symmetry beta_1 <-> beta_2 survives Euclidean
        // measurement; beta_3 is the small circle at the origin.
        let p = surface(2.0);
        assert!((p.eps[0] - p.eps[1]).abs() < 1e-14);
        assert!(
            (p.c[0] + p.c[1]).abs() < 1e-14,
            "c1 and c2 mirror each other"
        );
        assert!(p.c[2].abs() < 1e-14);
        assert!((p.eps[2] - (p.theta / 2.0).tan()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(make_surface(-1.0, 1.05), Err(Error::Domain(_))));
        assert!(matches!(make_surface(0.0, 1.05), Err(Error::Domain(_))));
        assert!(matches!(make_surface(4.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(make_surface(4.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hexagon_side_values() {
        // Reference value from a 50-digit evaluation of the closed form.
        let v = hexagon_side(2.0).unwrap();
        assert!((v - 0.82713690163855677663788493268254597822713765339811).abs() < 1e-15);

        // eps_b = 2 e^{-b/2} + (5/3) e^{-3b/2} + O(e^{-5b/2})
        let v6 = hexagon_side(6.0).unwrap();
        assert!((v6 - (2.0 * (-3.0f64).exp() + 5.0 / 3.0 * (-9.0f64).exp())).abs() < 1e-6);
        let v10 = hexagon_side(10.0).unwrap();
        assert!((v10 - (2.0 * (-5.0f64).exp() + 5.0 / 3.0 * (-15.0f64).exp())).abs() < 5e-11);
    }

    #[test]
    fn hexagon_side_decreasing() {
        let mut prev = f64::INFINITY;
        let mut b = 1.0;
        while b <= 20.0 {
            let v = hexagon_side(b).unwrap();
            assert!(v < prev, "eps_b must decrease, b={b}");
            prev = v;
            b += 0.25;
        }
    }

    #[test]
    fn distance_nested_pair() {
        // Concentric semicircles of radius 1 and 2: distance ln 2.
        let d = geodesic_distance(-2.0, -1.0, 1.0, 2.0).unwrap();
        assert!((d - 2.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn distance_rejects_bad_input() {
        assert!(matches!(
            geodesic_distance(1.0, -1.0, 2.0, 3.0),
            Err(Error::Domain(_))
        ));
        assert!(geodesic_distance(-2.0, -1.0, 1.0, f64::NAN).is_err());
    }

    /// Map a side-by-side pair of semicircle geodesics to the nested
    /// configuration with the inversion x -> -1/(x - c) for c inside the
    /// first interval, then measure the distance.
    fn distance_between(a: (f64, f64), b: (f64, f64)) -> f64 {
        let c = 0.5 * (a.0 + a.1);
        let t = |x: f64| -1.0 / (x - c);
        let (z1, z2) = (t(a.1), t(a.0));
        let (w1, w2) = (t(b.0), t(b.1));
        geodesic_distance(z1, w1, w2, z2).unwrap()
    }

    #[test]
    fn pairwise_distance_is_b() {
        for b in [3.0, 5.0] {
            let p = surface(b);
            let iv = |j: usize| (p.c[j] - p.eps[j], p.c[j] + p.eps[j]);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let d = distance_between(iv(i), iv(j));
                assert!(
                    (d - b).abs() < 1e-12,
                    "d(beta_{i},beta_{j}) = {d}, want {b}"
                );
            }
        }
    }

    #[test]
    fn distance_brute_force_oracle() {
        // Shortest path between the semicircles (-2,-1) and (1,2), found by
        // direct minimization over point pairs, against the cross-ratio form.
        let to_pt = |c: f64, r: f64, phi: f64| (c + r * phi.cos(), r * phi.sin());
        let dist = |p: (f64, f64), q: (f64, f64)| {
            let dx = p.0 - q.0;
            let dy = p.1 - q.1;
            (1.0 + (dx * dx + dy * dy) / (2.0 * p.1 * q.1)).acosh()
        };
        let mut best = f64::INFINITY;
        let n = 4000;
        for i in 1..n {
            let ti = std::f64::consts::PI * i as f64 / n as f64;
            let p = to_pt(-1.5, 0.5, ti);
            for k in 1..n {
                let tk = std::f64::consts::PI * k as f64 / n as f64;
                best = best.min(dist(p, to_pt(1.5, 0.5, tk)));
            }
        }
        let d = distance_between((-2.0, -1.0), (1.0, 2.0));
        assert!(
            (d - best).abs() < 1e-5,
            "cross-ratio {d} vs brute force {best}"
        );
    }

    #[test]
    fn boundary_word_length() {
        for b in [2.0, 4.0, 6.0, 8.0] {
            let p = surface(b);
            let l = geodesic_length(&[1, 2], &p).unwrap();
            assert!((l - 2.0 * b).abs() < 1e-12 * 2.0 * b, "b={b}: {l}");
        }
    }

    #[test]
    fn closed_form_word_lengths() {
        let b = 4.0;
        let p = surface(b);
        let ch = b.cosh();
        let l = geodesic_length(&[1, 2, 3, 2], &p).unwrap();
        let want = 2.0 * (ch + 2.0 * ch * ch).acosh();
        assert!((l - want).abs() < 1e-12 * want);

        let l6 = geodesic_length(&[1, 2, 3, 1, 2, 3], &p).unwrap();
        let want6 = 2.0 * (4.0 * ch.powi(3) + 6.0 * ch * ch - 1.0).acosh();
        assert!((l6 - want6).abs() < 1e-12 * want6);
        // l6 = 6b + 6 e^{-b} + O(e^{-2b})
        assert!((l6 - (6.0 * b + 6.0 * (-b).exp())).abs() < 10.0 * (-2.0 * b).exp());
    }

    #[test]
    fn word_errors() {
        let p = surface(4.0);
        assert!(matches!(
            geodesic_length(&[1, 2, 3], &p),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            geodesic_length(&[1, 1], &p),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            geodesic_length(&[1, 2, 2, 1], &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn long_words_stay_finite() {
        // Words of length 14 at b = 10 push raw products past 1e56; the
        // scaled carrier must keep full relative precision.
        let p = surface(10.0);
        let w: Vec<u8> = (0..14).map(|i| [1u8, 2, 3][i % 3]).collect();
        let l = geodesic_length(&w, &p).unwrap();
        assert!(l.is_finite());
        assert!((l - (14.0 * 10.0 + 14.0 * (-10.0f64).exp())).abs() < 1e-4);
    }

    #[test]
    fn power_law() {
        let p = surface(4.0);
        let l1 = geodesic_length(&[1, 2, 3, 2], &p).unwrap();
        let l3 = geodesic_length(&[1, 2, 3, 2, 1, 2, 3, 2, 1, 2, 3, 2], &p).unwrap();
        assert!((l3 - 3.0 * l1).abs() < 1e-12 * l3);
    }

    #[test]
    fn word_symmetries() {
        let p = surface(5.0);
        let words: [&[u8]; 4] = [
            &[1, 2, 3, 2],
            &[1, 2, 1, 3, 2, 3],
            &[1, 3, 2, 1, 3, 1, 2, 3],
            &[1, 2],
        ];
        for w in words {
            let base = geodesic_length(w, &p).unwrap();
            // Cyclic rotations.
            for r in 1..w.len() {
                let rot: Vec<u8> = (0..w.len()).map(|i| w[(i + r) % w.len()]).collect();
                let l = geodesic_length(&rot, &p).unwrap();
                assert!((l - base).abs() <= 1e-13 * base, "rotation {r} of {w:?}");
            }
            // Reversal (the inverse geodesic).
            let rev: Vec<u8> = w.iter().rev().copied().collect();
            let l = geodesic_length(&rev, &p).unwrap();
            assert!((l - base).abs() <= 1e-13 * base, "reversal of {w:?}");
            // Cyclic relabeling 1 -> 2 -> 3 -> 1 of the symbols.
            let mapped: Vec<u8> = w.iter().map(|&s| s % 3 + 1).collect();
            let l = geodesic_length(&mapped, &p).unwrap();
            assert!((l - base).abs() <= 1e-12 * base, "relabeling of {w:?}");
        }
    }
}
