//! Run configuration: flags over a `key=value` file over defaults.

use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => bail!("unknown format {s:?}, expected csv or json"),
        }
    }
}

/// Raw settings keyed by option name (`two-s`, `beta`, ...).
#[derive(Debug, Clone, Default)]
pub struct Settings(pub BTreeMap<String, String>);

pub const KEYS: &[&str] = &[
    "two-s", "length", "extent", "beta", "check", "grid", "seed", "tol", "out", "format", "dimension", "ratio",
    "e0-source", "c-upper", "c-lower", "plot-script",
];

impl Settings {
    /// `key = value` lines; `#` starts a comment. Underscores in keys read as dashes.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got {raw:?}", i + 1);
            };
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key {key:?}", i + 1);
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(Settings(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// `other` wins on shared keys.
    pub fn overlay(mut self, other: Settings) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("invalid {key} {v:?}: {e}")))
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("invalid {key} entry {s:?}: {e}")))
                    .collect()
            })
            .transpose()
    }
}

/// Parsed, validated configuration shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub two_s: Option<Vec<u32>>,
    pub lengths: Option<Vec<usize>>,
    pub extent: Option<usize>,
    pub betas: Option<Vec<f64>>,
    pub grid: String,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<String>,
    pub format: Format,
    pub dimension: usize,
    pub ratio: bool,
    pub e0_source: Option<String>,
    pub c_upper: f64,
    pub c_lower: f64,
    pub plot_script: Option<String>,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let betas = s.get("beta").map(parse_beta_grid).transpose()?;
        let format = s.get("format").map(Format::parse).transpose()?.unwrap_or(Format::Csv);
        let dimension = s.parsed("dimension")?.unwrap_or(1);
        if dimension != 1 && dimension != 2 {
            bail!("dimension must be 1 or 2, got {dimension}");
        }
        let ratio = match s.get("ratio") {
            None | Some("false") => false,
            Some("true") => true,
            Some(o) => bail!("invalid ratio {o:?}, expected true or false"),
        };
        Ok(RunConfig {
            two_s: s.list("two-s")?,
            lengths: s.list("length")?,
            extent: s.parsed("extent")?,
            betas,
            grid: s.get("grid").unwrap_or("default").to_string(),
            seed: s.parsed("seed")?.unwrap_or(2024),
            tol: s.parsed("tol")?,
            out: s.get("out").map(str::to_string),
            format,
            dimension,
            ratio,
            e0_source: s.get("e0-source").map(str::to_string),
            c_upper: s.parsed("c-upper")?.unwrap_or(1.0),
            c_lower: s.parsed("c-lower")?.unwrap_or(1.0),
            plot_script: s.get("plot-script").map(str::to_string),
        })
    }

    pub fn betas_or(&self, default: &[f64]) -> Vec<f64> {
        self.betas.clone().unwrap_or_else(|| default.to_vec())
    }
}

/// A comma list (`1,2,4`) or `logspace:lo:hi:n` with decimal exponents.
pub fn parse_beta_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let values: Vec<f64> = if let Some(rest) = spec.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            bail!("logspace grid needs lo:hi:n, got {spec:?}");
        }
        let lo: f64 = parts[0].parse().with_context(|| format!("logspace lower exponent {:?}", parts[0]))?;
        let hi: f64 = parts[1].parse().with_context(|| format!("logspace upper exponent {:?}", parts[1]))?;
        let n: usize = parts[2].parse().with_context(|| format!("logspace count {:?}", parts[2]))?;
        match n {
            0 => Vec::new(),
            1 => vec![10f64.powf(lo)],
            _ => (0..n).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect(),
        }
    } else {
        spec.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().with_context(|| format!("beta entry {s:?}")))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        bail!("empty beta grid");
    }
    if let Some(b) = values.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
        bail!("beta values must be positive and finite, got {b}");
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_grids() {
        assert_eq!(parse_beta_grid("1, 2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        let g = parse_beta_grid("logspace:0:2:3").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-10);
        assert!(parse_beta_grid("").is_err());
        assert!(parse_beta_grid("logspace:0:1:0").is_err());
        assert!(parse_beta_grid("1,-2").is_err());
    }

    #[test]
    fn file_and_precedence() {
        let file = Settings::parse("# comment\ntwo_s = 2\nbeta=1,2\nseed = 5 # trailing\n").unwrap();
        let flags = Settings([("beta".to_string(), "3".to_string())].into_iter().collect());
        let cfg = RunConfig::from_settings(&file.overlay(flags)).unwrap();
        assert_eq!(cfg.two_s, Some(vec![2]));
        assert_eq!(cfg.betas, Some(vec![3.0]));
        assert_eq!(cfg.seed, 5);
        assert!(Settings::parse("bogus = 1").is_err());
        assert!(Settings::parse("no equals sign").is_err());
    }
}
