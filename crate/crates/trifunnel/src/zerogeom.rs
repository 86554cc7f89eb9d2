//! Rescaled zero sets, the four limit curves, Hausdorff distances,
//! almost-periodicity and the boundary lattice.
//!
//! Under the rescaling `sigma + it -> sigma b + i exp(-b) t` the zero set of
//! `Z_n` settles onto the union of the four curves
//! `C_j = { (1/2) ln |mu_j(exp(it))| + it }`, all of which meet at the points
//! `(ln(2)/2, pi (k + 1/2))`. Near the real axis the complementary picture
//! holds: multiplying zeros by `b` sends them toward the lattice of points
//! `i pi Z` and `ln 2 + i pi Z` on the two strip boundaries.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::transfermat::eigenvalues_mu;
use crate::zerofinder::ZeroSet;
use crate::{Error, Result};

/// Parameters within this distance of a singular parameter are reported as
/// singular rather than as a huge negative ordinate.
const SINGULAR_FLOOR: f64 = 1e-300;

/// `sigma_j(t) = (1/2) ln |mu_j(exp(it))|`, or `None` where `mu_j` vanishes.
pub fn curve_sigma(j: usize, t: f64) -> Result<Option<f64>> {
    if !(1..=4).contains(&j) {
        return Err(Error::Domain(format!(
            "curve index must lie in 1..=4, got {j}"
        )));
    }
    let z = Complex64::new(0.0, t).exp();
    let mu = eigenvalues_mu(z)[j - 1];
    let m = mu.norm();
    if m < SINGULAR_FLOOR {
        return Ok(None);
    }
    Ok(Some(0.5 * m.ln()))
}

/// One sampled column of the curve family: parameter and the four ordinates.
#[derive(Debug, Clone, Copy)]
pub struct CurveSample {
    pub t: f64,
    pub sigma: [Option<f64>; 4],
}

/// Samples all four curves on `[t_min, t_max]` with step `dt`.
pub fn sample_curves(t_min: f64, t_max: f64, dt: f64) -> Result<Vec<CurveSample>> {
    if !(dt > 0.0) || !(t_min < t_max) {
        return Err(Error::Domain(format!(
            "bad sampling range [{t_min}, {t_max}] step {dt}"
        )));
    }
    let n = ((t_max - t_min) / dt).ceil() as usize + 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = (t_min + i as f64 * dt).min(t_max);
        let z = Complex64::new(0.0, t).exp();
        let mu = eigenvalues_mu(z);
        let mut sigma = [None; 4];
        for (k, m) in mu.iter().enumerate() {
            let norm = m.norm();
            if norm >= SINGULAR_FLOOR {
                sigma[k] = Some(0.5 * norm.ln());
            }
        }
        out.push(CurveSample { t, sigma });
    }
    Ok(out)
}

/// Curve samples as a point cloud restricted to `sigma_lo <= sigma <= sigma_hi`.
pub fn curve_point_cloud(samples: &[CurveSample], sigma_lo: f64, sigma_hi: f64) -> Vec<Complex64> {
    let mut pts = Vec::new();
    for s in samples {
        for v in s.sigma.into_iter().flatten() {
            if v >= sigma_lo && v <= sigma_hi {
                pts.push(Complex64::new(v, s.t));
            }
        }
    }
    pts
}

/// CSV rows `t,sigma1,sigma2,sigma3,sigma4`; singular samples are clipped at
/// `-1`, well below the strip of interest.
pub fn curves_to_csv(samples: &[CurveSample]) -> String {
    let mut out = String::from("t,sigma1,sigma2,sigma3,sigma4\n");
    for s in samples {
        out.push_str(&crate::fmt_g17(s.t));
        for v in s.sigma {
            out.push(',');
            out.push_str(&crate::fmt_g17(v.map_or(-1.0, |x| x.max(-1.0))));
        }
        out.push('\n');
    }
    out
}

/// Rescales a zero set: `sigma + it -> sigma b + i exp(-b) t`.
pub fn rescale_zeros(zs: &ZeroSet, b: f64) -> Result<Vec<Complex64>> {
    if (zs.b - b).abs() > 1e-12 * b.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "zero set was computed for b = {}, not b = {b}",
            zs.b
        )));
    }
    let f = (-b).exp();
    Ok(zs
        .zeros
        .iter()
        .map(|z| Complex64::new(z.s.re * b, z.s.im * f))
        .collect())
}

/// Exact Hausdorff distance between two finite point sets.
///
/// Both directions of `sup inf` are computed over the full sets; points are
/// sorted by imaginary part so each query can stop scanning once the
/// imaginary gap alone exceeds the best candidate.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

fn directed_hausdorff(from: &[Complex64], to: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = to.to_vec();
    sorted.sort_by(|p, q| p.im.total_cmp(&q.im));
    let ims: Vec<f64> = sorted.iter().map(|p| p.im).collect();
    from.par_iter()
        .map(|&p| {
            let idx = ims.partition_point(|&v| v < p.im);
            let mut best = f64::INFINITY;
            // Walk outward from the insertion point in both directions.
            let (mut lo, mut hi) = (idx as isize - 1, idx);
            loop {
                let lo_gap = if lo >= 0 {
                    (p.im - ims[lo as usize]).abs()
                } else {
                    f64::INFINITY
                };
                let hi_gap = if hi < ims.len() {
                    (ims[hi] - p.im).abs()
                } else {
                    f64::INFINITY
                };
                if lo_gap > best && hi_gap > best {
                    break;
                }
                if lo_gap <= hi_gap {
                    best = best.min((p - sorted[lo as usize]).norm());
                    lo -= 1;
                } else {
                    best = best.min((p - sorted[hi]).norm());
                    hi += 1;
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Outcome of an epsilon-translation test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostPeriodReport {
    pub matched: usize,
    pub unmatched: usize,
    /// Largest matched displacement.
    pub max_distance: f64,
    pub pass: bool,
}

/// Tests whether translating the zero set by `i tau_im` maps it to itself
/// within `eps`.
///
/// Base points are taken from `[t0 + eps, t1 - tau - eps]`, so every base
/// point's translate is guaranteed to lie inside the covered window whenever
/// the translation property holds; they are matched greedily (closest pairs
/// first) against the whole set pulled back by `tau`. Passing means every
/// base point found a partner within `eps`.
pub fn almost_period_test(zs: &ZeroSet, tau_im: f64, eps: f64) -> Result<AlmostPeriodReport> {
    if !(tau_im >= 0.0) || !(eps > 0.0) {
        return Err(Error::Domain(format!(
            "need tau_im >= 0 and eps > 0, got {tau_im}, {eps}"
        )));
    }
    let t0 = zs.rect.t_min;
    let t1 = zs.rect.t_max;
    if t1 - t0 < 2.0 * tau_im {
        return Err(Error::Domain(format!(
            "window height {} cannot support translation {tau_im}",
            t1 - t0
        )));
    }
    let hi = t1 - tau_im - eps;
    let lo = t0 + eps;
    let a: Vec<Complex64> = zs
        .zeros
        .iter()
        .map(|z| z.s)
        .filter(|s| s.im >= lo && s.im <= hi)
        .collect();
    if a.is_empty() {
        return Err(Error::Domain("no zeros inside the base window".into()));
    }
    let b: Vec<Complex64> = zs
        .zeros
        .iter()
        .map(|z| z.s - Complex64::new(0.0, tau_im))
        .collect();

    // Greedy matching over all pairs closer than eps, nearest pairs first.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            let d = (p - q).norm();
            if d <= eps {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut matched = 0usize;
    let mut max_distance: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            matched += 1;
            max_distance = max_distance.max(d);
        }
    }
    let unmatched = a.len() - matched;
    Ok(AlmostPeriodReport {
        matched,
        unmatched,
        max_distance,
        pass: unmatched == 0,
    })
}

/// The boundary lattice: points `i pi k` and `ln 2 + i pi k` with
/// `|pi k| <= height`.
pub fn lattice_points(height: f64) -> Vec<Complex64> {
    let kmax = (height / std::f64::consts::PI).floor() as i64;
    let mut pts = Vec::new();
    for k in -kmax..=kmax {
        let im = std::f64::consts::PI * k as f64;
        pts.push(Complex64::new(0.0, im));
        pts.push(Complex64::new(2.0f64.ln(), im));
    }
    pts
}

/// Hausdorff distance between `b * zeros` (restricted to `|Im s| <=
/// kappa_height` and mirrored across the real axis) and the boundary lattice
/// truncated to the same window.
pub fn lattice_compare(zs: &ZeroSet, b: f64, kappa_height: f64) -> Result<f64> {
    if (zs.b - b).abs() > 1e-12 * b.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "zero set was computed for b = {}, not b = {b}",
            zs.b
        )));
    }
    if zs.rect.t_max < kappa_height || zs.rect.t_min > 1e-9 {
        return Err(Error::Domain(format!(
            "zero set window [{}, {}] does not cover [0, {kappa_height}]",
            zs.rect.t_min, zs.rect.t_max
        )));
    }
    let mut scaled: Vec<Complex64> = Vec::new();
    for z in &zs.zeros {
        if z.s.im.abs() <= kappa_height {
            let p = Complex64::new(z.s.re * b, z.s.im * b);
            scaled.push(p);
            if p.im > 1e-12 {
                scaled.push(p.conj());
            }
        }
    }
    if scaled.is_empty() {
        return Err(Error::Domain("no zeros inside the lattice window".into()));
    }
    let lattice = lattice_points(b * kappa_height);
    hausdorff_distance(&scaled, &lattice)
}
