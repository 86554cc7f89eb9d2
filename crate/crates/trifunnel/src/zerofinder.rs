//! Locating zeros of the partial sums `Z_n` in rectangles of the critical
//! strip, extracting the largest real zero, and auditing completeness with
//! the argument principle.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::zetacore::{evaluate_zn_d, evaluate_zn_real, CoefficientTable, PowerSumSeries};
use crate::{Error, Result};

/// Newton stops once the step drops below this.
const NEWTON_STEP_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: u32 = 50;
/// Converged points left of `-0.02` or right of `delta + 0.02` are
/// out-of-strip artifacts of the exponential sum and are discarded.
const STRIP_SLACK: f64 = 0.02;

/// Search rectangle `sigma_min <= Re s <= sigma_max`,
/// `t_min <= Im s <= t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rect {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Rect> {
        if !(sigma_min < sigma_max && t_min < t_max) {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]"
            )));
        }
        if sigma_min < -0.1 || sigma_max > 1.0 {
            return Err(Error::Domain(format!(
                "rectangle must stay inside -0.1 <= sigma <= 1, got [{sigma_min}, {sigma_max}]"
            )));
        }
        Ok(Rect {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }

    fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    fn height(&self) -> f64 {
        self.t_max - self.t_min
    }
}

/// One located zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub s: Complex64,
    /// |Z_n| at the located point.
    pub residual: f64,
    pub iterations: u32,
    /// Winding of a small circle at the dedup radius around the point.
    /// Zero clusters tighter than the working precision (the function is a
    /// determinant series, so its limit carries squared factors) are located
    /// once and counted here with their full multiplicity.
    pub multiplicity: u32,
}

/// Winding/count audit attached to a zero set. `found_total` sums
/// multiplicities, which is what the argument principle counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Audit {
    pub winding_total: i64,
    pub found_total: i64,
}

/// Zeros located in a rectangle, with search metadata.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    pub rect: Rect,
    pub n_used: usize,
    pub b: f64,
    /// Seeds that failed to converge or converged outside the rectangle.
    pub dropped_seeds: usize,
    pub audit: Option<Audit>,
}

impl ZeroSet {
    /// Number of zeros counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }

    /// CSV rows `re,im,residual,iterations`, 17 significant digits, sorted
    /// as stored (by imaginary part, then real part).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,residual,iterations\n");
        for z in &self.zeros {
            out.push_str(&format!(
                "{},{},{},{}\n",
                crate::fmt_g17(z.s.re),
                crate::fmt_g17(z.s.im),
                crate::fmt_g17(z.residual),
                z.iterations
            ));
        }
        out
    }

    /// Parses the CSV produced by [`ZeroSet::to_csv`]. Rectangle and
    /// parameter metadata must be supplied by the caller.
    pub fn from_csv(text: &str, rect: Rect, n_used: usize, b: f64) -> Result<ZeroSet> {
        let mut zeros = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                if line.trim() != "re,im,residual,iterations" {
                    return Err(Error::Domain(format!("unexpected CSV header: {line}")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::Domain(format!("bad CSV row {i}: {line}")));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Domain(format!("bad number '{s}' in row {i}: {e}")))
            };
            zeros.push(Zero {
                s: Complex64::new(parse(parts[0])?, parse(parts[1])?),
                residual: parse(parts[2])?,
                iterations: parts[3]
                    .trim()
                    .parse()
                    .map_err(|e| Error::Domain(format!("bad iteration count in row {i}: {e}")))?,
                multiplicity: 1,
            });
        }
        Ok(ZeroSet {
            zeros,
            rect,
            n_used,
            b,
            dropped_seeds: 0,
            audit: None,
        })
    }
}

/// Largest real zero of `Z_n` on (0, 1): sign scan with step `1e-4` from the
/// right edge, then bisection to `1e-12`.
pub fn find_real_delta(table: &CoefficientTable, n: usize) -> Result<f64> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    find_real_delta_of(table, n)
}

pub(crate) fn find_real_delta_of<T: PowerSumSeries + ?Sized>(series: &T, n: usize) -> Result<f64> {
    const STEP: f64 = 1e-4;
    let mut hi = 1.0;
    let mut f_hi = evaluate_zn_real(hi, n, series);
    let mut k = 1usize;
    loop {
        let lo = 1.0 - k as f64 * STEP;
        if lo <= 0.0 {
            return Err(Error::Numerical("no sign change of Z_n on (0, 1)".into()));
        }
        let f_lo = evaluate_zn_real(lo, n, series);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_lo * f_hi < 0.0 {
            // Bisect [lo, hi].
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            while b - a > 1e-12 {
                let mid = 0.5 * (a + b);
                let fm = evaluate_zn_real(mid, n, series);
                if fm == 0.0 {
                    return Ok(mid);
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            return Ok(0.5 * (a + b));
        }
        hi = lo;
        f_hi = f_lo;
        k += 1;
    }
}

fn newton<T: PowerSumSeries + ?Sized>(
    seed: Complex64,
    n: usize,
    series: &T,
    tol: f64,
) -> Option<(Complex64, f64, u32)> {
    let mut s = seed;
    let mut best = (s, f64::INFINITY);
    for it in 1..=NEWTON_MAX_ITER {
        let (z, dz) = evaluate_zn_d(s, n, series);
        if !z.is_finite() || !dz.is_finite() || dz.norm_sqr() == 0.0 {
            return None;
        }
        if z.norm() < best.1 {
            best = (s, z.norm());
        }
        let mut step = z / dz;
        let norm = step.norm();
        if norm > 0.5 {
            step *= 0.5 / norm;
        }
        s -= step;
        if step.norm() < NEWTON_STEP_TOL {
            let (zf, _) = evaluate_zn_d(s, n, series);
            return Some((s, zf.norm(), it));
        }
    }
    // The step criterion cannot fire inside a zero cluster whose splitting is
    // below working precision: the iterates stall at the noise ball. Accept
    // the best visited point when its residual already qualifies; the
    // multiplicity pass confirms or rejects it.
    if best.1 <= tol {
        return Some((best.0, best.1, NEWTON_MAX_ITER));
    }
    None
}

/// Winding of `Z_n` around the polygon inscribed at `radius` about `center`,
/// used to count zeros inside the dedup ball.
fn winding_circle<T: PowerSumSeries + ?Sized>(
    series: &T,
    n: usize,
    center: Complex64,
    radius: f64,
) -> Result<i64> {
    const MARGIN: f64 = 1e-12;
    'radii: for r in [radius, 0.75 * radius, 0.5 * radius] {
        let m = 16usize;
        let pts: Vec<Complex64> = (0..=m)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                center + Complex64::new(r * phi.cos(), r * phi.sin())
            })
            .collect();
        let fs: Vec<Complex64> = pts.iter().map(|&p| evaluate_zn_d(p, n, series).0).collect();
        let mut total = 0.0;
        for k in 0..m {
            match winding_segment(series, n, pts[k], pts[k + 1], fs[k], fs[k + 1], MARGIN, 0) {
                Ok(d) => total += d,
                Err(_) => continue 'radii,
            }
        }
        let w = total / (2.0 * std::f64::consts::PI);
        if (w - w.round()).abs() < 0.25 {
            return Ok(w.round() as i64);
        }
    }
    Err(Error::Audit(format!(
        "cannot resolve multiplicity around {center}"
    )))
}

/// Newton search from every grid seed inside `rect`.
///
/// Seeds are laid out with vertical spacing `grid_step` and horizontal
/// spacing `min(grid_step, delta/8)` so that an expected zero spacing of
/// `pi/b` receives several seeds. Converged points inside the rectangle with
/// residual at most `tol` are deduplicated at radius `grid_step / 4` and
/// returned sorted by `(Im, Re)`. Output is identical for any worker count.
pub fn find_zeros_rect(
    table: &CoefficientTable,
    n: usize,
    rect: Rect,
    grid_step: f64,
    tol: f64,
) -> Result<ZeroSet> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    let delta = find_real_delta_of(table, n).ok();
    find_zeros_rect_of(table, n, rect, grid_step, tol, delta, table.params.b)
}

pub(crate) fn find_zeros_rect_of<T: PowerSumSeries + ?Sized>(
    series: &T,
    n: usize,
    rect: Rect,
    grid_step: f64,
    tol: f64,
    delta: Option<f64>,
    b: f64,
) -> Result<ZeroSet> {
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(Error::Domain(format!(
            "grid_step must be positive, got {grid_step}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let hstep = match delta {
        Some(d) => (d / 8.0).min(grid_step),
        None => grid_step,
    };
    let cols = (rect.width() / hstep).ceil().max(2.0) as usize;
    let rows = (rect.height() / grid_step).ceil().max(2.0) as usize;
    let mut seeds = Vec::with_capacity(cols * rows);
    for r in 0..rows {
        let t = rect.t_min + (r as f64 + 0.5) * rect.height() / rows as f64;
        for c in 0..cols {
            let sigma = rect.sigma_min + (c as f64 + 0.5) * rect.width() / cols as f64;
            seeds.push(Complex64::new(sigma, t));
        }
    }

    let (sig_lo, sig_hi) = match delta {
        Some(d) => (-STRIP_SLACK, d + STRIP_SLACK),
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };

    let candidates: Vec<Option<(Complex64, f64, u32)>> = seeds
        .par_iter()
        .map(|&seed| {
            newton(seed, n, series, tol).filter(|(s, resid, _)| {
                rect.contains(*s) && *resid <= tol && s.re >= sig_lo && s.re <= sig_hi
            })
        })
        .collect();

    let dropped = candidates.iter().filter(|c| c.is_none()).count();
    let mut found: Vec<(Complex64, f64, u32)> = candidates.into_iter().flatten().collect();
    found.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));

    // Deduplicate at radius grid_step/4; the scan only needs to look back at
    // accepted zeros within that radius in Im.
    let radius = grid_step / 4.0;
    let mut kept: Vec<(Complex64, f64, u32)> = Vec::new();
    for (s, residual, iterations) in found {
        let dup = kept
            .iter()
            .rev()
            .take_while(|z| s.im - z.0.im <= radius)
            .any(|z| (s - z.0).norm() <= radius);
        if !dup {
            kept.push((s, residual, iterations));
        }
    }
    // Multiplicity of each representative over its dedup ball; a winding of
    // zero exposes a stalled false positive, which is discarded.
    let counted: Vec<Option<Zero>> = kept
        .par_iter()
        .map(|&(s, residual, iterations)| {
            let mult = winding_circle(series, n, s, radius).unwrap_or(1);
            if mult <= 0 {
                None
            } else {
                Some(Zero {
                    s,
                    residual,
                    iterations,
                    multiplicity: mult as u32,
                })
            }
        })
        .collect();
    let zeros: Vec<Zero> = counted.into_iter().flatten().collect();
    Ok(ZeroSet {
        zeros,
        rect,
        n_used: n,
        b,
        dropped_seeds: dropped,
        audit: None,
    })
}

/// Argument-principle count of zeros inside `rect`.
///
/// Walks the boundary counterclockwise, refining each segment until the
/// argument changes by less than `pi/2` between consecutive samples, and
/// returns the total winding divided by `2 pi`. If a boundary point with
/// `|Z_n|` below the safety margin is met, the rectangle is enlarged by half
/// a refinement step and retried, up to three times.
pub fn winding_count(table: &CoefficientTable, n: usize, rect: Rect) -> Result<i64> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    winding_count_of(table, n, rect)
}

pub(crate) fn winding_count_of<T: PowerSumSeries + ?Sized>(
    series: &T,
    n: usize,
    rect: Rect,
) -> Result<i64> {
    const MARGIN: f64 = 1e-10;
    let pert = 0.5 * (rect.width().min(rect.height()) / 64.0);
    let mut r = rect;
    for attempt in 0..=3 {
        match try_winding(series, n, r, MARGIN) {
            Ok(w) => return Ok(w),
            Err(Error::Audit(_)) if attempt < 3 => {
                r = Rect {
                    sigma_min: r.sigma_min - pert,
                    sigma_max: r.sigma_max + pert,
                    t_min: r.t_min - pert,
                    t_max: r.t_max + pert,
                };
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns on the last attempt");
}

fn try_winding<T: PowerSumSeries + ?Sized>(
    series: &T,
    n: usize,
    rect: Rect,
    margin: f64,
) -> Result<i64> {
    let corners = [
        Complex64::new(rect.sigma_min, rect.t_min),
        Complex64::new(rect.sigma_max, rect.t_min),
        Complex64::new(rect.sigma_max, rect.t_max),
        Complex64::new(rect.sigma_min, rect.t_max),
    ];
    // The phase of an exponential sum with frequencies up to L turns at most
    // L radians per unit of arc length away from zeros; sampling at pi/(4L)
    // rules out aliasing a whole turn between neighbours.
    let h_max = std::f64::consts::FRAC_PI_4 / series.max_frequency();
    let eval = |s: Complex64| evaluate_zn_d(s, n, series).0;
    let mut total = 0.0f64;
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let pieces = ((b - a).norm() / h_max).ceil().max(2.0) as usize;
        let mut prev = a;
        let mut f_prev = eval(prev);
        for k in 1..=pieces {
            let next = a + (b - a) * (k as f64 / pieces as f64);
            let f_next = eval(next);
            total += winding_segment(series, n, prev, next, f_prev, f_next, margin, 0)?;
            prev = next;
            f_prev = f_next;
        }
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.25 {
        return Err(Error::Numerical(format!(
            "winding total {w} too far from an integer"
        )));
    }
    Ok(rounded as i64)
}

fn winding_segment<T: PowerSumSeries + ?Sized>(
    series: &T,
    n: usize,
    a: Complex64,
    b: Complex64,
    fa: Complex64,
    fb: Complex64,
    margin: f64,
    depth: u32,
) -> Result<f64> {
    if fa.norm() < margin || fb.norm() < margin {
        return Err(Error::Audit(format!(
            "|Z_n| below margin on the boundary near {a}"
        )));
    }
    let dphi = (fb / fa).arg();
    if dphi.abs() < std::f64::consts::FRAC_PI_2 {
        return Ok(dphi);
    }
    if depth > 48 {
        return Err(Error::Audit(format!(
            "argument refinement exhausted near {a}"
        )));
    }
    let mid = 0.5 * (a + b);
    let fm = evaluate_zn_d(mid, n, series).0;
    Ok(
        winding_segment(series, n, a, mid, fa, fm, margin, depth + 1)?
            + winding_segment(series, n, mid, b, fm, fb, margin, depth + 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::make_surface;
    use crate::zetacore::CoefficientTable;

    fn table(b: f64, n_max: usize) -> CoefficientTable {
        CoefficientTable::new(make_surface(b, 1.05).unwrap(), n_max).unwrap()
    }

    #[test]
    fn delta_matches_two_term_closed_form() {
        // At n = 2 the only zero of Z_2 solves e^{2bs} = 6 / (1 - e^{-2b}).
        let t = table(4.0, 4);
        let d = find_real_delta(&t, 2).unwrap();
        let want = (6.0 / (1.0 - (-8.0f64).exp())).ln() / 8.0;
        assert!((d - want).abs() < 1e-11, "{d} vs {want}");
    }

    #[test]
    fn delta_b_ln2_trend() {
        // |delta * b - ln 2| shrinks as b grows.
        let mut prev = f64::INFINITY;
        for b in [6.0, 8.0, 10.0] {
            let t = table(b, 14);
            let d = find_real_delta(&t, 14).unwrap();
            let gap = (d * b - 2.0f64.ln()).abs();
            assert!(gap < prev, "b = {b}: {gap} !< {prev}");
            prev = gap;
        }
    }

    #[test]
    fn empty_rectangle() {
        let t = table(4.0, 14);
        let rect = Rect::new(0.9, 1.0, 0.5, 2.0).unwrap();
        let zs = find_zeros_rect(&t, 14, rect, 0.02, 1e-9).unwrap();
        assert!(zs.zeros.is_empty());
        assert_eq!(winding_count(&t, 14, rect).unwrap(), 0);
    }

    #[test]
    fn real_zero_found_from_grid() {
        let t = table(4.0, 14);
        let delta = find_real_delta(&t, 14).unwrap();
        let rect = Rect::new(0.05, 0.25, -0.3, 0.3).unwrap();
        let zs = find_zeros_rect(&t, 14, rect, 0.02, 1e-9).unwrap();
        assert!(
            zs.zeros
                .iter()
                .any(|z| (z.s - Complex64::new(delta, 0.0)).norm() < 1e-9),
            "real zero at delta = {delta} not found"
        );
        assert_eq!(
            winding_count(&t, 14, rect).unwrap(),
            zs.count_with_multiplicity()
        );
    }

    #[test]
    fn conjugate_symmetry_of_zero_set() {
        let t = table(6.0, 14);
        let up = Rect::new(0.0, 0.13, 0.2, 3.0).unwrap();
        let down = Rect::new(0.0, 0.13, -3.0, -0.2).unwrap();
        let zu = find_zeros_rect(&t, 14, up, 0.02, 1e-9).unwrap();
        let zd = find_zeros_rect(&t, 14, down, 0.02, 1e-9).unwrap();
        assert_eq!(zu.zeros.len(), zd.zeros.len());
        assert_eq!(zu.count_with_multiplicity(), zd.count_with_multiplicity());
        assert!(!zu.zeros.is_empty());
        // Representatives of sub-resolution clusters wobble inside the dedup
        // ball, so mirrors are only pinned at that radius.
        let radius = 0.02 / 4.0;
        for z in &zu.zeros {
            let mirror = z.s.conj();
            assert!(
                zd.zeros.iter().any(|w| (w.s - mirror).norm() <= radius),
                "no mirror for {}",
                z.s
            );
        }
        // Simple, well-separated zeros mirror to full precision.
        for z in zu
            .zeros
            .iter()
            .filter(|z| z.multiplicity == 1 && z.iterations < 50)
        {
            let mirror = z.s.conj();
            assert!(
                zd.zeros.iter().any(|w| (w.s - mirror).norm() < 1e-9),
                "no sharp mirror for {}",
                z.s
            );
        }
    }

    #[test]
    fn winding_additive_over_disjoint_rectangles() {
        let t = table(6.0, 14);
        let r1 = Rect::new(0.0, 0.13, 0.2, 1.7).unwrap();
        let r2 = Rect::new(0.0, 0.13, 1.7, 3.2).unwrap();
        let both = Rect::new(0.0, 0.13, 0.2, 3.2).unwrap();
        let w1 = winding_count(&t, 14, r1).unwrap();
        let w2 = winding_count(&t, 14, r2).unwrap();
        let w = winding_count(&t, 14, both).unwrap();
        assert_eq!(w, w1 + w2);
        assert!(w > 0);
    }

    #[test]
    fn csv_round_trip() {
        let t = table(4.0, 14);
        let rect = Rect::new(0.0, 0.25, 0.0, 2.0).unwrap();
        let zs = find_zeros_rect(&t, 14, rect, 0.02, 1e-9).unwrap();
        assert!(!zs.zeros.is_empty());
        let csv = zs.to_csv();
        let back = ZeroSet::from_csv(&csv, rect, 14, 4.0).unwrap();
        assert_eq!(back.zeros.len(), zs.zeros.len());
        for (a, b) in back.zeros.iter().zip(&zs.zeros) {
            assert_eq!(a.s, b.s);
            assert_eq!(a.residual, b.residual);
            assert_eq!(a.iterations, b.iterations);
        }
    }

    #[test]
    fn rect_validation() {
        assert!(Rect::new(0.2, 0.1, 0.0, 1.0).is_err());
        assert!(Rect::new(-0.5, 0.1, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.1, 0.0, 1.0).is_err());
    }
}
