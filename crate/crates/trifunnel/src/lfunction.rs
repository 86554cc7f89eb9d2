//! Z2-twisted zeta functions for the double cover.
//!
//! The double cover of the surface splits its zeta function as
//! `Z_cover = Z * L(chi)`, where `chi` sends a reflection word to
//! `(-1)^{count of one chosen generator}`. The twisted partial sums reuse the
//! untwisted machinery with signed spectra: each fixed point carries the sign
//! of its word.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::hyperbolic::{geodesic_length, SurfaceParams};
use crate::symdyn::enumerate_fixed_points;
use crate::zerofinder::{find_real_delta_of, find_zeros_rect_of, winding_count_of, Rect, ZeroSet};
use crate::zetacore::{evaluate_zn_d, series_coefficients, KahanComplex, PowerSumSeries};
use crate::{Error, Result};

/// A rank-one Z2 character: either trivial, or counting occurrences of one
/// generator mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character {
    generator: Option<u8>,
}

impl Character {
    /// The character that is identically +1; its L-function is `Z_n` itself.
    pub fn trivial() -> Character {
        Character { generator: None }
    }

    pub fn new(generator: u8) -> Result<Character> {
        if !(1..=3).contains(&generator) {
            return Err(Error::Domain(format!(
                "generator must lie in 1..=3, got {generator}"
            )));
        }
        Ok(Character {
            generator: Some(generator),
        })
    }

    pub fn generator(&self) -> Option<u8> {
        self.generator
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> String {
        match self.generator {
            None => "trivial".to_string(),
            Some(g) => format!("chi{g}"),
        }
    }

    /// `(-1)^{n(word)}` with `n` the number of occurrences of the generator.
    pub fn value(&self, word: &[u8]) -> i8 {
        let Some(g) = self.generator else {
            return 1;
        };
        let n = word.iter().filter(|&&s| s == g).count();
        if n % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedEntry {
    pub length: f64,
    pub count: u64,
    pub sign: i8,
}

/// Length census with character signs, merged per `(length, sign)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedLengthSpectrum {
    pub m: usize,
    pub b: f64,
    pub entries: Vec<SignedEntry>,
}

/// Like the untwisted census, but each fixed point carries `chi(word)`.
pub fn twisted_spectrum(
    m: usize,
    params: &SurfaceParams,
    chi: &Character,
) -> Result<SignedLengthSpectrum> {
    let orbits = enumerate_fixed_points(m)?;
    let mut raw: Vec<(f64, i8, u64)> = Vec::with_capacity(orbits.len());
    for o in &orbits {
        let q = if o.p % 2 == 0 { o.p } else { 2 * o.p };
        let word: Vec<u8> = (0..q).map(|i| o.rep[i % o.p]).collect();
        let lq = geodesic_length(&word, params)?;
        let length = (m / q) as f64 * lq;
        // Sign of the full period-m word; chi is multiplicative over the
        // m/q repetitions of the block.
        let block_sign = chi.value(&word);
        let sign = if (m / q) % 2 == 0 { 1 } else { block_sign };
        raw.push((length, sign, o.p as u64));
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut entries: Vec<SignedEntry> = Vec::new();
    for (length, sign, count) in raw {
        match entries.last_mut() {
            Some(e)
                if e.sign == sign
                    && (length - e.length).abs() <= crate::zetacore::MERGE_RTOL * length =>
            {
                e.count += count
            }
            _ => entries.push(SignedEntry {
                length,
                count,
                sign,
            }),
        }
    }
    let total: u64 = entries.iter().map(|e| e.count).sum();
    let expected = 4u64.pow(m as u32 / 2) + 2;
    if total != expected {
        return Err(Error::Internal(format!(
            "twisted spectrum at m = {m} lost entries: {total} != {expected}"
        )));
    }
    Ok(SignedLengthSpectrum {
        m,
        b: params.b,
        entries,
    })
}

/// Precomputed twisted spectra; the signed analogue of
/// [`crate::zetacore::CoefficientTable`].
#[derive(Debug, Clone)]
pub struct TwistedTable {
    pub params: SurfaceParams,
    pub chi: Character,
    pub n_max: usize,
    pub spectra: Vec<SignedLengthSpectrum>,
    weights: Vec<Vec<(f64, f64)>>,
}

impl TwistedTable {
    pub fn new(params: SurfaceParams, n_max: usize, chi: Character) -> Result<Self> {
        if n_max < 2 || n_max % 2 != 0 {
            return Err(Error::Domain(format!(
                "n_max must be even and >= 2, got {n_max}"
            )));
        }
        let ms: Vec<usize> = (1..=n_max / 2).map(|k| 2 * k).collect();
        let spectra: Result<Vec<SignedLengthSpectrum>> = ms
            .par_iter()
            .map(|&m| twisted_spectrum(m, &params, &chi))
            .collect();
        let spectra = spectra?;
        let weights = spectra
            .iter()
            .map(|sp| {
                sp.entries
                    .iter()
                    .map(|e| {
                        let signed = e.sign as f64 * e.count as f64;
                        (e.length, 2.0 * signed / (1.0 - (-e.length).exp()))
                    })
                    .collect()
            })
            .collect();
        Ok(TwistedTable {
            params,
            chi,
            n_max,
            spectra,
            weights,
        })
    }
}

impl PowerSumSeries for TwistedTable {
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

/// Twisted partial sum `L_n(s) = 1 + sum a_k^chi(s)`.
pub fn evaluate_l(s: Complex64, n: usize, table: &TwistedTable) -> Result<Complex64> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    let a = series_coefficients(&table.power_sums(s, n));
    Ok(a.iter().take(n + 1).sum())
}

/// Twisted coefficients `a_0^chi = 1, ..., a_n^chi`.
pub fn l_coefficients(s: Complex64, table: &TwistedTable) -> Vec<Complex64> {
    series_coefficients(&table.power_sums(s, table.n_max))
}

/// Coefficients of the series built from the summed power sums of the
/// trivial and twisted characters. Since characters add under the product of
/// the associated functions, these coefficients equal the convolution of the
/// coefficients of `Z_n` with those of `L_n(chi)` order by order.
pub fn summed_character_coefficients(
    s: Complex64,
    table: &crate::zetacore::CoefficientTable,
    twisted: &TwistedTable,
) -> Vec<Complex64> {
    let n = table.n_max.min(twisted.n_max);
    let pz = crate::zetacore::PowerSumSeries::power_sums(table, s, n);
    let pl = twisted.power_sums(s, n);
    let sum: Vec<Complex64> = pz.iter().zip(&pl).map(|(a, b)| a + b).collect();
    series_coefficients(&sum)
}

/// `L_n` and its derivative.
pub fn evaluate_l_d(
    s: Complex64,
    n: usize,
    table: &TwistedTable,
) -> Result<(Complex64, Complex64)> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    Ok(evaluate_zn_d(s, n, table))
}

/// Largest real zero of `L_n` on (0, 1).
pub fn find_real_delta_l(table: &TwistedTable, n: usize) -> Result<f64> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    find_real_delta_of(table, n)
}

/// Newton zero search for `L_n`, identical machinery to the untwisted case.
pub fn find_zeros_rect_l(
    table: &TwistedTable,
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

/// Argument-principle count for `L_n`.
pub fn winding_count_l(table: &TwistedTable, n: usize, rect: Rect) -> Result<i64> {
    if n > table.n_max {
        return Err(Error::Domain(format!(
            "n = {n} exceeds table n_max = {}",
            table.n_max
        )));
    }
    winding_count_of(table, n, rect)
}
