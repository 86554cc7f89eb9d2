//! Length spectra, series coefficients and partial sums of the zeta function,
//! plus the rigorous truncation bound.
//!
//! The zeta function of the surface is expanded as a power series
//! `1 + sum a_n(s) z^n` at `z = 1`. Writing `S_m(s)` for the sum of
//! `exp(-s L) / (1 - exp(-L))` over all fixed points of `sigma^m` (each
//! non-primitive fixed point entering with its repeated length), the log of
//! the product over closed geodesics with both orientations carries each even
//! power sum with weight `2/m`:
//!
//! ```text
//!   log Z = - sum_{m even} (2 S_m(s) / m) z^m,
//! ```
//!
//! so the coefficient recursion consumes `B_m = 2 S_m`. This grading makes
//! `Z_n` the partial sum of `det(I - A^2(s))` for the transfer matrix of the
//! two-sided subshift, which is the function whose zeros are studied here;
//! in particular `a_2 = -6 exp(-2bs) / (1 - exp(-2b))`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{
    hyperbolic::{geodesic_length, SurfaceParams},
    symdyn::enumerate_fixed_points,
    Error, Result,
};

/// Relative tolerance below which two geodesic lengths are considered equal
/// and their census entries merged. Lengths that agree as closed forms land
/// within a few ulp of each other, while distinct closed forms at word length
/// <= 8 stay separated by `O(exp(-3b))`, which still clears this threshold at
/// b = 8.
pub const MERGE_RTOL: f64 = 1e-12;

/// Default truncation order; hard ceiling [`crate::symdyn::MAX_PERIOD`].
pub const DEFAULT_N_MAX: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub length: f64,
    pub count: u64,
}

/// Multiset of geodesic lengths over the fixed points of `sigma^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    pub m: usize,
    /// Surface parameter the spectrum was computed for.
    pub b: f64,
    /// Entries sorted by ascending length; counts sum to `4^{m/2} + 2`.
    pub entries: Vec<SpectrumEntry>,
}

/// Length census at word length `m`: one entry per distinct length, counted
/// over fixed points. A fixed point of primitive period `p` contributes the
/// length `(m/q) * len(rep[0..q])` where `q = p` for even `p` and `q = 2p`
/// for odd `p` (odd words are glide segments; their square is the closed
/// geodesic).
pub fn length_spectrum(m: usize, params: &SurfaceParams) -> Result<LengthSpectrum> {
    let orbits = enumerate_fixed_points(m)?;
    let mut raw: Vec<(f64, u64)> = Vec::with_capacity(orbits.len());
    for o in &orbits {
        let q = if o.p % 2 == 0 { o.p } else { 2 * o.p };
        let word: Vec<u8> = (0..q).map(|i| o.rep[i % o.p]).collect();
        let lq = geodesic_length(&word, params)?;
        let length = (m / q) as f64 * lq;
        raw.push((length, o.p as u64));
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for (length, count) in raw {
        match entries.last_mut() {
            Some(e) if (length - e.length).abs() <= MERGE_RTOL * length => e.count += count,
            _ => entries.push(SpectrumEntry { length, count }),
        }
    }
    let total: u64 = entries.iter().map(|e| e.count).sum();
    let expected = 4u64.pow(m as u32 / 2) + 2;
    if total != expected {
        return Err(Error::Internal(format!(
            "spectrum at m = {m} lost entries: {total} != {expected}"
        )));
    }
    let floor = m as f64 * params.b - 1e-6;
    if entries.first().map_or(true, |e| e.length < floor) {
        return Err(Error::Internal(format!(
            "length below m*b floor at m = {m}"
        )));
    }
    Ok(LengthSpectrum {
        m,
        b: params.b,
        entries,
    })
}

impl LengthSpectrum {
    /// CSV rows `m,length,count` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,length,count\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{}\n",
                self.m,
                crate::fmt_g17(e.length),
                e.count
            ));
        }
        out
    }
}

/// `S_m(s)`: sum of `count * exp(-s length) / (1 - exp(-length))` over the
/// spectrum, accumulated in ascending length order with compensated
/// summation. For odd `m` the sum is empty, hence exactly zero.
pub fn b_m(s: Complex64, spectrum: &LengthSpectrum) -> Complex64 {
    let mut sum = KahanComplex::default();
    for e in &spectrum.entries {
        let w = e.count as f64 / (1.0 - (-e.length).exp());
        sum.add((-s * e.length).exp() * w);
    }
    sum.value()
}

/// Compensated complex accumulator; deterministic for a fixed input order.
#[derive(Default, Clone, Copy)]
pub(crate) struct KahanComplex {
    s: Complex64,
    c: Complex64,
}

impl KahanComplex {
    pub fn add(&mut self, v: Complex64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
    pub fn value(&self) -> Complex64 {
        self.s
    }
}

/// Precomputed spectra for `m = 2, 4, ..., n_max` at one surface.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub params: SurfaceParams,
    pub n_max: usize,
    pub spectra: Vec<LengthSpectrum>,
    /// Flattened `(length, 2 * count / (1 - exp(-length)))` per even `m`,
    /// ascending; the evaluator's hot path.
    weights: Vec<Vec<(f64, f64)>>,
}

impl CoefficientTable {
    /// Builds spectra for every even `m <= n_max` in parallel.
    pub fn new(params: SurfaceParams, n_max: usize) -> Result<Self> {
        if n_max < 2 || n_max % 2 != 0 {
            return Err(Error::Domain(format!(
                "n_max must be even and >= 2, got {n_max}"
            )));
        }
        let ms: Vec<usize> = (1..=n_max / 2).map(|k| 2 * k).collect();
        let spectra: Result<Vec<LengthSpectrum>> = ms
            .par_iter()
            .map(|&m| length_spectrum(m, &params))
            .collect();
        let spectra = spectra?;
        let weights = spectra
            .iter()
            .map(|sp| {
                sp.entries
                    .iter()
                    .map(|e| (e.length, 2.0 * e.count as f64 / (1.0 - (-e.length).exp())))
                    .collect()
            })
            .collect();
        Ok(CoefficientTable {
            params,
            n_max,
            spectra,
            weights,
        })
    }

    pub fn spectrum(&self, m: usize) -> Option<&LengthSpectrum> {
        if m % 2 != 0 || m == 0 {
            return None;
        }
        self.spectra.get(m / 2 - 1)
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::Domain(format!(
                "n = {n} exceeds table n_max = {}",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Power sums with the orientation-doubled grading, `B_m = 2 S_m`, and their
/// `s`-derivatives. Implemented by [`CoefficientTable`] and by the twisted
/// table in [`crate::lfunction`].
pub(crate) trait PowerSumSeries: Sync {
    /// `out[m]` = `B_m(s)` for `1 <= m <= n`, zero for odd `m`; `out[0]` unused.
    fn power_sums(&self, s: Complex64, n: usize) -> Vec<Complex64>;
    /// Power sums and derivatives in one pass.
    fn power_sums_d(&self, s: Complex64, n: usize) -> (Vec<Complex64>, Vec<Complex64>);
    /// Real-axis fast path.
    fn power_sums_real(&self, s: f64, n: usize) -> Vec<f64>;
    /// Largest geodesic length entering the sum; bounds how fast the phase
    /// of `Z_n` can turn, which sets the boundary sampling density of the
    /// winding audit.
    fn max_frequency(&self) -> f64;
}

impl PowerSumSeries for CoefficientTable {
    fn power_sums(&self, s: Complex64, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (idx, w) in self.weights.iter().enumerate() {
            let m = 2 * (idx + 1);
            if m > n {
                break;
            }
            let mut sum = KahanComplex::default();
            for &(l, c) in w {
                sum.add((-s * l).exp() * c);
            }
            out[m] = sum.value();
        }
        out
    }

    fn power_sums_d(&self, s: Complex64, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; n + 1];
        let mut dout = vec![zero; n + 1];
        for (idx, w) in self.weights.iter().enumerate() {
            let m = 2 * (idx + 1);
            if m > n {
                break;
            }
            let mut sum = KahanComplex::default();
            let mut dsum = KahanComplex::default();
            for &(l, c) in w {
                let term = (-s * l).exp() * c;
                sum.add(term);
                dsum.add(term * (-l));
            }
            out[m] = sum.value();
            dout[m] = dsum.value();
        }
        (out, dout)
    }

    fn power_sums_real(&self, s: f64, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        for (idx, w) in self.weights.iter().enumerate() {
            let m = 2 * (idx + 1);
            if m > n {
                break;
            }
            out[m] = w.iter().map(|&(l, c)| (-s * l).exp() * c).sum();
        }
        out
    }

    fn max_frequency(&self) -> f64 {
        self.weights
            .iter()
            .filter_map(|w| w.last())
            .map(|&(l, _)| l)
            .fold(1.0, f64::max)
    }
}

/// Series coefficients from power sums: `a_0 = 1`,
/// `a_n = -(1/n) sum_{j=0}^{n-2} a_j B_{n-j}`.
pub(crate) fn series_coefficients(power: &[Complex64]) -> Vec<Complex64> {
    let n = power.len() - 1;
    let mut a = Vec::with_capacity(n + 1);
    a.push(Complex64::new(1.0, 0.0));
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=k.saturating_sub(2) {
            let m = k - j;
            if m % 2 == 0 {
                acc += a[j] * power[m];
            }
        }
        a.push(-acc / k as f64);
    }
    a
}

pub(crate) fn series_coefficients_d(
    power: &[Complex64],
    dpower: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = power.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut a = Vec::with_capacity(n + 1);
    let mut da = Vec::with_capacity(n + 1);
    a.push(Complex64::new(1.0, 0.0));
    da.push(zero);
    for k in 1..=n {
        let mut acc = zero;
        let mut dacc = zero;
        for j in 0..=k.saturating_sub(2) {
            let m = k - j;
            if m % 2 == 0 {
                acc += a[j] * power[m];
                dacc += da[j] * power[m] + a[j] * dpower[m];
            }
        }
        a.push(-acc / k as f64);
        da.push(-dacc / k as f64);
    }
    (a, da)
}

/// Coefficients `a_0 = 1, a_1 = 0, ..., a_n_max` at `s`; odd entries are
/// exactly zero.
pub fn a_coefficients(s: Complex64, table: &CoefficientTable) -> Vec<Complex64> {
    series_coefficients(&table.power_sums(s, table.n_max))
}

/// Partial sum `Z_n(s) = 1 + a_1(s) + ... + a_n(s)`, summed in fixed index
/// order.
pub fn evaluate_zn(s: Complex64, n: usize, table: &CoefficientTable) -> Result<Complex64> {
    table.check_n(n)?;
    let a = series_coefficients(&table.power_sums(s, n));
    Ok(a.iter().take(n + 1).sum())
}

/// `Z_n` and its derivative in one pass; the derivative is propagated through
/// the coefficient recursion term by term rather than finite-differenced.
pub(crate) fn evaluate_zn_d<T: PowerSumSeries + ?Sized>(
    s: Complex64,
    n: usize,
    series: &T,
) -> (Complex64, Complex64) {
    let (p, dp) = series.power_sums_d(s, n);
    let (a, da) = series_coefficients_d(&p, &dp);
    (a.iter().take(n + 1).sum(), da.iter().take(n + 1).sum())
}

/// `Z_n` restricted to the real axis.
pub(crate) fn evaluate_zn_real<T: PowerSumSeries + ?Sized>(s: f64, n: usize, series: &T) -> f64 {
    let p = series.power_sums_real(s, n);
    let mut a = vec![0.0f64; n + 1];
    a[0] = 1.0;
    let mut z = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for j in 0..=k.saturating_sub(2) {
            let m = k - j;
            if m % 2 == 0 {
                acc += a[j] * p[m];
            }
        }
        a[k] = -acc / k as f64;
        z += a[k];
    }
    z
}

/// Rigorous tail bound `eta(b, n, T)` for `sup |Z - Z_n|` on the strip of
/// height `T`, valid for `b >= 20`, `n >= 14`, `1 < kappa < 2` and
/// `0.95 <= k2 < 1`, provided the absorption inequality below holds.
///
/// With `k0 = T exp(-kappa b)` and `q = b (2 - kappa)(1 - k2) / 6`:
///
/// ```text
///   eta = sqrt(6 pi) / (2 sqrt(b (2-kappa)(1-k2)))
///         * exp(24 k0^2 / (b (2-kappa)(1-k2)))
///         * exp(-q (n - 12 k0 / (b (2-kappa)(1-k2)))^2)
/// ```
///
/// The absorption inequality requires the `k2` share of the Gaussian decay to
/// dominate every subquadratic term in the coefficient bound:
///
/// ```text
///   n (ln 4 + b(kappa+4)/3 - b(2-kappa)/6 + (ln 2)/2)
///     + n^2 (ln 2)/2 + n (ln n)/2  <  k2 b (2-kappa) n^2 / 6.
/// ```
///
/// Outside the proven region the function returns
/// [`Error::BoundNotProven`]; that is a statement about the proof, not about
/// the parameters being senseless.
pub fn truncation_bound(b: f64, n: usize, t_height: f64, kappa: f64, k2: f64) -> Result<f64> {
    if !(kappa > 1.0 && kappa < 2.0) {
        return Err(Error::Domain(format!(
            "kappa must lie in (1,2), got {kappa}"
        )));
    }
    if !(t_height > 0.0) {
        return Err(Error::Domain(format!(
            "strip height must be positive, got {t_height}"
        )));
    }
    if b < 20.0 {
        return Err(Error::BoundNotProven(format!("b = {b} < 20")));
    }
    if n < 14 {
        return Err(Error::BoundNotProven(format!("n = {n} < 14")));
    }
    if !(0.95..1.0).contains(&k2) {
        return Err(Error::BoundNotProven(format!(
            "k2 = {k2} outside [0.95, 1)"
        )));
    }
    let nf = n as f64;
    let lhs = nf
        * (4.0f64.ln() + b * (kappa + 4.0) / 3.0 - b * (2.0 - kappa) / 6.0 + 2.0f64.ln() / 2.0)
        + nf * nf * 2.0f64.ln() / 2.0
        + nf * nf.ln() / 2.0;
    let rhs = k2 * b * (2.0 - kappa) * nf * nf / 6.0;
    if lhs >= rhs {
        return Err(Error::BoundNotProven(format!(
            "absorption inequality fails: {lhs:.3} >= {rhs:.3} at b = {b}, n = {n}"
        )));
    }
    let k0 = t_height * (-kappa * b).exp();
    let denom = b * (2.0 - kappa) * (1.0 - k2);
    let q = denom / 6.0;
    let center = 12.0 * k0 / denom;
    let eta = (6.0 * std::f64::consts::PI).sqrt() / (2.0 * denom.sqrt())
        * (24.0 * k0 * k0 / denom).exp()
        * (-q * (nf - center) * (nf - center)).exp();
    Ok(eta)
}
