//! Run configuration: JSON file merged under command-line flags.

use serde::Deserialize;
use trifunnel::zerofinder::Rect;

/// Output format for subcommands that write files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// JSON-loadable defaults; every field optional, flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub b: Option<f64>,
    pub n: Option<usize>,
    /// sigma_min, sigma_max, t_min, t_max
    pub rect: Option<[f64; 4]>,
    pub grid_step: Option<f64>,
    pub tol: Option<f64>,
    pub output_path: Option<String>,
    pub format: Option<OutputFormat>,
    /// 0 = automatic
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &str) -> Result<RunConfig, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {path}: {e}"))
    }

    pub fn rect(&self) -> Result<Option<Rect>, trifunnel::Error> {
        match self.rect {
            None => Ok(None),
            Some([a, b, c, d]) => Rect::new(a, b, c, d).map(Some),
        }
    }
}

/// Worker count: flag beats environment beats automatic.
pub fn resolve_threads(flag: Option<usize>, config: Option<usize>) -> usize {
    if let Some(t) = flag {
        return t;
    }
    if let Ok(v) = std::env::var("TRIFUNNEL_THREADS") {
        if let Ok(t) = v.parse::<usize>() {
            return t;
        }
    }
    config.unwrap_or(0)
}
