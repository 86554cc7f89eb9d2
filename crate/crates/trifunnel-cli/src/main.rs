//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration or input, 3 numerical
//! failure (audit mismatch, non-convergence), 4 truncation bound requested
//! outside its proven region.

mod config;
mod svg;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use config::{resolve_threads, OutputFormat, RunConfig};
use trifunnel::lfunction::{
    evaluate_l, find_zeros_rect_l, winding_count_l, Character, TwistedTable,
};
use trifunnel::zerofinder::{find_real_delta, find_zeros_rect, winding_count, Rect, ZeroSet};
use trifunnel::zerogeom::{
    almost_period_test, curve_point_cloud, curves_to_csv, hausdorff_distance, lattice_compare,
    rescale_zeros, sample_curves,
};
use trifunnel::zetacore::{evaluate_zn, truncation_bound, CoefficientTable};
use trifunnel::{fmt_g17, hyperbolic, Error};

#[derive(Parser)]
#[command(
    name = "trifunnel",
    about = "Zeros of the zeta function of symmetric three-funneled hyperbolic surfaces",
    version
)]
struct Cli {
    /// JSON config file with defaults; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Worker threads (0 = automatic). Overrides TRIFUNNEL_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Boundary half-length b (boundary geodesics have length 2b).
    #[arg(long)]
    b: Option<f64>,
    /// Truncation order of the partial sum Z_n.
    #[arg(long)]
    n: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the derived surface constants.
    Surface {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.05)]
        kappa: f64,
    },
    /// Length census at word length m, as CSV.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
    },
    /// Evaluate Z_n at a point, e.g. --s 0.3+2i.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Largest real zero of Z_n on (0, 1).
    Delta {
        #[command(flatten)]
        common: Common,
    },
    /// Newton zero search over a rectangle, with optional winding audit.
    Zeros {
        #[command(flatten)]
        common: Common,
        /// sigma_min,sigma_max,t_min,t_max
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rect: Option<Vec<f64>>,
        #[arg(long)]
        grid_step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Cross-check the count with the argument principle; mismatch is a
        /// numerical failure.
        #[arg(long)]
        audit: bool,
        /// Output format (csv or json).
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Rescale a zeros CSV: sigma + it -> sigma b + i exp(-b) t.
    Rescale {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: String,
    },
    /// Sample the four limit curves, as CSV.
    Curves {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Hausdorff distance between rescaled zeros from a CSV and the curves.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: String,
        /// Rescaled window half-height S: compare on |Im| <= S.
        #[arg(long)]
        height: f64,
        /// Edge margin excluded at the top and bottom of the window.
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
    },
    /// Almost-periodicity report for a translation by i*tau.
    Translate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: String,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Distance between b * zeros and the boundary lattice.
    Lattice {
        #[command(flatten)]
        common: Common,
        /// Window height in t (unrescaled); defaults to 3/b.
        #[arg(long)]
        height: Option<f64>,
        #[arg(long)]
        grid_step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Zeros of the Z2-twisted L-function, CSV with a character column.
    Lfunction {
        #[command(flatten)]
        common: Common,
        /// Generator the character counts: 1, 2, 3, or "trivial".
        #[arg(long, default_value = "1")]
        character: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rect: Option<Vec<f64>>,
        #[arg(long)]
        grid_step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Evaluate L at one point instead of searching for zeros.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
    },
    /// Static SVG of rescaled zeros with optional curve overlays.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: String,
        /// Overlay the four limit curves.
        #[arg(long)]
        curves: bool,
    },
    /// Rigorous truncation bound eta(b, n, T).
    Bound {
        #[command(flatten)]
        common: Common,
        /// Strip height T.
        #[arg(long)]
        t_height: f64,
        #[arg(long, default_value_t = 1.05)]
        kappa: f64,
        #[arg(long, default_value_t = 0.95)]
        k2: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    let threads = resolve_threads(cli.threads, cfg.threads);
    if threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BoundNotProven(_) => 4,
                Error::Numerical(_) | Error::Audit(_) | Error::Internal(_) => 3,
                Error::Domain(_) | Error::Resource(_) | Error::State(_) => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command, cfg: &RunConfig) -> trifunnel::Result<()> {
    match cmd {
        Command::Surface { common, kappa } => {
            let b = need_b(&common, cfg)?;
            let p = hyperbolic::make_surface(b, kappa)?;
            let mut out = String::new();
            out.push_str(&format!("b = {}\n", fmt_g17(p.b)));
            out.push_str(&format!("theta = {}\n", fmt_g17(p.theta)));
            for j in 0..3 {
                out.push_str(&format!(
                    "beta_{}: center = {}, radius = {}\n",
                    j + 1,
                    fmt_g17(p.c[j]),
                    fmt_g17(p.eps[j])
                ));
            }
            out.push_str(&format!("kappa = {}\n", fmt_g17(p.kappa)));
            out.push_str(&format!(
                "hexagon side eps_b = {}\n",
                fmt_g17(hyperbolic::hexagon_side(b)?)
            ));
            emit(&out_path(&common, cfg), &out)
        }
        Command::Spectrum { common, m } => {
            let b = need_b(&common, cfg)?;
            let p = hyperbolic::make_surface(b, 1.05)?;
            let sp = trifunnel::zetacore::length_spectrum(m, &p)?;
            emit(&out_path(&common, cfg), &sp.to_csv())
        }
        Command::Eval { common, s } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let s = parse_complex(&s)?;
            let table = table(b, n)?;
            let z = evaluate_zn(s, n, &table)?;
            emit(
                &out_path(&common, cfg),
                &format!("{} {}\n", fmt_g17(z.re), fmt_g17(z.im)),
            )
        }
        Command::Delta { common } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let table = table(b, n)?;
            let d = find_real_delta(&table, n)?;
            emit(&out_path(&common, cfg), &format!("{}\n", fmt_g17(d)))
        }
        Command::Zeros {
            common,
            rect,
            grid_step,
            tol,
            audit,
            format,
        } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let rect = need_rect(rect, cfg)?;
            let gs = grid_step.or(cfg.grid_step).unwrap_or(default_grid_step(b));
            let tol = tol.or(cfg.tol).unwrap_or(1e-9);
            let table = table(b, n)?;
            let mut zs = find_zeros_rect(&table, n, rect, gs, tol)?;
            if audit {
                let w = winding_count(&table, n, rect)?;
                let found = zs.count_with_multiplicity();
                zs.audit = Some(trifunnel::zerofinder::Audit {
                    winding_total: w,
                    found_total: found,
                });
                if w != found {
                    return Err(Error::Audit(format!(
                        "winding count {w} != located zeros {found}; a zero or zero \
                         cluster may straddle the rectangle boundary - nudge the edges"
                    )));
                }
            }
            let text = match format.or(cfg.format).unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => zs.to_csv(),
                OutputFormat::Json => zeros_to_json(&zs),
                OutputFormat::Svg => {
                    return Err(Error::Domain("zeros supports csv or json output".into()))
                }
            };
            emit(&out_path(&common, cfg), &text)
        }
        Command::Rescale { common, input } => {
            let b = need_b(&common, cfg)?;
            let zs = read_zeros(&input, b)?;
            let pts = rescale_zeros(&zs, b)?;
            let mut out = String::from("re,im\n");
            for p in pts {
                out.push_str(&format!("{},{}\n", fmt_g17(p.re), fmt_g17(p.im)));
            }
            emit(&out_path(&common, cfg), &out)
        }
        Command::Curves {
            common,
            t_min,
            t_max,
            dt,
        } => {
            let samples = sample_curves(t_min, t_max, dt)?;
            emit(&out_path(&common, cfg), &curves_to_csv(&samples))
        }
        Command::Compare {
            common,
            input,
            height,
            margin,
        } => {
            let b = need_b(&common, cfg)?;
            let zs = read_zeros(&input, b)?;
            let rescaled = rescale_zeros(&zs, b)?;
            let report = compare_report(&rescaled, height, margin)?;
            emit(&out_path(&common, cfg), &report)
        }
        Command::Translate {
            common,
            input,
            tau,
            eps,
        } => {
            let b = need_b(&common, cfg)?;
            let zs = read_zeros(&input, b)?;
            let r = almost_period_test(&zs, tau, eps)?;
            let out = format!(
                "tau = {}\nmatched = {}\nunmatched = {}\nmax_distance = {}\npass = {}\n",
                fmt_g17(tau),
                r.matched,
                r.unmatched,
                fmt_g17(r.max_distance),
                r.pass
            );
            emit(&out_path(&common, cfg), &out)
        }
        Command::Lattice {
            common,
            height,
            grid_step,
            tol,
        } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let height = height.unwrap_or(3.0 / b);
            let table = table(b, n)?;
            let delta = find_real_delta(&table, n)?;
            let rect = Rect::new(-0.02, (delta + 0.02).min(1.0), 0.0, height * 1.02)?;
            let gs = grid_step.or(cfg.grid_step).unwrap_or(default_grid_step(b));
            let tol = tol.or(cfg.tol).unwrap_or(1e-9);
            let zs = find_zeros_rect(&table, n, rect, gs, tol)?;
            let d = lattice_compare(&zs, b, height)?;
            emit(
                &common.output,
                &format!(
                    "zeros = {}\nhausdorff_to_lattice = {}\n",
                    zs.zeros.len(),
                    fmt_g17(d)
                ),
            )
        }
        Command::Lfunction {
            common,
            character,
            rect,
            grid_step,
            tol,
            s,
        } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let chi = match character.as_str() {
                "trivial" => Character::trivial(),
                g => Character::new(
                    g.parse::<u8>()
                        .map_err(|_| Error::Domain(format!("bad character '{g}'")))?,
                )?,
            };
            let p = hyperbolic::make_surface(b, 1.05)?;
            let lt = TwistedTable::new(p, n.max(2), chi)?;
            if let Some(s) = s {
                let s = parse_complex(&s)?;
                let v = evaluate_l(s, n, &lt)?;
                return emit(
                    &out_path(&common, cfg),
                    &format!("{} {}\n", fmt_g17(v.re), fmt_g17(v.im)),
                );
            }
            let rect = need_rect(rect, cfg)?;
            let gs = grid_step.or(cfg.grid_step).unwrap_or(default_grid_step(b));
            let tol = tol.or(cfg.tol).unwrap_or(1e-9);
            let zs = find_zeros_rect_l(&lt, n, rect, gs, tol)?;
            let w = winding_count_l(&lt, n, rect)?;
            if w != zs.count_with_multiplicity() {
                return Err(Error::Audit(format!(
                    "winding count {w} != located zeros {}",
                    zs.count_with_multiplicity()
                )));
            }
            let mut out = String::from("re,im,residual,iterations,character\n");
            for z in &zs.zeros {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_g17(z.s.re),
                    fmt_g17(z.s.im),
                    fmt_g17(z.residual),
                    z.iterations,
                    chi.label()
                ));
            }
            emit(&out_path(&common, cfg), &out)
        }
        Command::Plot {
            common,
            input,
            curves,
        } => {
            let b = need_b(&common, cfg)?;
            let zs = read_zeros(&input, b)?;
            let pts = rescale_zeros(&zs, b)?;
            let overlay = if curves {
                let t_hi = pts.iter().map(|p| p.im.abs()).fold(1.0f64, f64::max);
                Some(sample_curves(-t_hi, t_hi, 1e-3)?)
            } else {
                None
            };
            let svg = svg::render(&pts, overlay.as_deref());
            emit(&out_path(&common, cfg), &svg)
        }
        Command::Bound {
            common,
            t_height,
            kappa,
            k2,
        } => {
            let b = need_b(&common, cfg)?;
            let n = need_n(&common, cfg)?;
            let eta = truncation_bound(b, n, t_height, kappa, k2)?;
            emit(&out_path(&common, cfg), &format!("{}\n", fmt_g17(eta)))
        }
    }
}

fn table(b: f64, n: usize) -> trifunnel::Result<CoefficientTable> {
    let p = hyperbolic::make_surface(b, 1.05)?;
    CoefficientTable::new(p, n.max(2))
}

fn zeros_to_json(zs: &ZeroSet) -> String {
    let mut out = String::from("[\n");
    for (i, z) in zs.zeros.iter().enumerate() {
        out.push_str(&format!(
            "  {{\"re\": {}, \"im\": {}, \"residual\": {}, \"iterations\": {}}}{}\n",
            fmt_g17(z.s.re),
            fmt_g17(z.s.im),
            fmt_g17(z.residual),
            z.iterations,
            if i + 1 < zs.zeros.len() { "," } else { "" }
        ));
    }
    out.push_str("]\n");
    out
}

fn default_grid_step(b: f64) -> f64 {
    (std::f64::consts::PI / (4.0 * b)).min(0.02)
}

fn need_b(common: &Common, cfg: &RunConfig) -> trifunnel::Result<f64> {
    common
        .b
        .or(cfg.b)
        .ok_or_else(|| Error::Domain("missing --b (or config b)".into()))
}

fn need_n(common: &Common, cfg: &RunConfig) -> trifunnel::Result<usize> {
    common
        .n
        .or(cfg.n)
        .ok_or_else(|| Error::Domain("missing --n (or config n)".into()))
}

fn need_rect(flag: Option<Vec<f64>>, cfg: &RunConfig) -> trifunnel::Result<Rect> {
    if let Some(v) = flag {
        if v.len() != 4 {
            return Err(Error::Domain(format!(
                "--rect needs sigma_min,sigma_max,t_min,t_max (got {} values)",
                v.len()
            )));
        }
        return Rect::new(v[0], v[1], v[2], v[3]);
    }
    cfg.rect()?
        .ok_or_else(|| Error::Domain("missing --rect (or config rect)".into()))
}

/// Reads a zeros CSV, inferring the covering rectangle from the data.
fn read_zeros(path: &str, b: f64) -> trifunnel::Result<ZeroSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {path}: {e}")))?;
    let probe = Rect {
        sigma_min: -0.1,
        sigma_max: 1.0,
        t_min: 0.0,
        t_max: 1.0,
    };
    let mut zs = ZeroSet::from_csv(&text, probe, 0, b)?;
    if !zs.zeros.is_empty() {
        let (mut slo, mut shi, mut tlo, mut thi) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for z in &zs.zeros {
            slo = slo.min(z.s.re);
            shi = shi.max(z.s.re);
            tlo = tlo.min(z.s.im);
            thi = thi.max(z.s.im);
        }
        zs.rect = Rect {
            sigma_min: slo,
            sigma_max: shi,
            t_min: tlo,
            t_max: thi,
        };
    }
    Ok(zs)
}

fn compare_report(rescaled: &[Complex64], height: f64, margin: f64) -> trifunnel::Result<String> {
    let lo = 0.0;
    let hi = 2.0f64.ln();
    let cap = height - margin;
    let mut zeros: Vec<Complex64> = Vec::new();
    for &p in rescaled {
        if p.re >= lo && p.re <= hi && p.im.abs() <= cap {
            zeros.push(p);
            if p.im > 1e-12 {
                zeros.push(p.conj());
            }
        }
    }
    let dt = 1e-3;
    let samples = sample_curves(-cap, cap, dt)?;
    let curve = curve_point_cloud(&samples, lo, hi);
    let d = hausdorff_distance(&zeros, &curve)?;
    // Max slope of the curves away from singular dips is modest; report the
    // sampling contribution alongside the distance.
    Ok(format!(
        "zeros_compared = {}\ncurve_samples = {}\nhausdorff = {}\nsampling_step = {}\n",
        zeros.len(),
        curve.len(),
        fmt_g17(d),
        fmt_g17(dt)
    ))
}

/// Parses "a+bi" / "a-bi" / "a" / "bi".
fn parse_complex(text: &str) -> trifunnel::Result<Complex64> {
    let t = text.trim().replace(' ', "");
    let bad = || Error::Domain(format!("cannot parse complex number '{text}'"));
    if let Some(stripped) = t.strip_suffix('i') {
        // Split into real and imaginary at the last +/- that is not leading
        // and not part of an exponent.
        let bytes = stripped.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = stripped[..k].parse().map_err(|_| bad())?;
                let im_str = &stripped[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if stripped.is_empty() {
                    1.0
                } else {
                    stripped.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

fn out_path(common: &Common, cfg: &RunConfig) -> Option<String> {
    common.output.clone().or_else(|| cfg.output_path.clone())
}

fn emit(output: &Option<String>, text: &str) -> trifunnel::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Domain(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
