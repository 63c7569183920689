//! Run configuration: a flat `key = value` file, overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mlia::exact::parse_rational;
use mlia::link_sim::SimConfig;
use mlia::{AlphaProfile, Error};
use num_rational::BigRational;

use crate::CliError;

/// Keys a config file may set. Each mirrors the flag of the same name.
pub const KEYS: &[&str] = &[
    "k",
    "alphas",
    "n",
    "eps",
    "power",
    "powers",
    "trials",
    "seed",
    "h-min",
    "h-max",
    "noise-std",
    "reliability",
    "cap",
    "format",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Everything a subcommand may need, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: Option<usize>,
    pub alpha: Option<AlphaProfile>,
    pub n: Vec<u64>,
    pub eps: Option<BigRational>,
    pub power: f64,
    pub powers: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub h_min: f64,
    pub h_max: f64,
    pub noise_std: f64,
    pub reliability: f64,
    pub cap: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Reads `key = value` lines. Blank lines and `#` comments are skipped.
pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("{}:{}: unknown key {key:?}", path.display(), i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn usage(msg: String) -> CliError {
    CliError::Core(Error::Config(msg))
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| usage(format!("{key}: cannot parse {value:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

/// Decades `a..b` (step one decade) or an explicit comma list.
fn parse_powers(value: &str) -> Result<Vec<f64>, CliError> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: i32 = parse("powers", lo)?;
        let hi: i32 = parse("powers", hi)?;
        if lo > hi {
            return Err(usage(format!("powers: empty decade range {value:?}")));
        }
        return Ok((lo..=hi).map(|e| 10f64.powi(e)).collect());
    }
    parse_list("powers", value)
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let alpha = get("alphas").map(AlphaProfile::parse).transpose()?;
        let k = get("k").map(|v| parse::<usize>("k", v)).transpose()?;
        if let (Some(k), Some(a)) = (k, &alpha) {
            if a.k() != k {
                return Err(usage(format!("k = {k} but {} alphas given", a.k())));
            }
        }
        let n: Vec<u64> = match get("n") {
            Some(v) => parse_list("n", v)?,
            None => vec![1],
        };
        if n.is_empty() || n.contains(&0) {
            return Err(Error::InvalidN.into());
        }
        let format = match get("format").unwrap_or("json") {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => return Err(usage(format!("format must be json or csv, got {other:?}"))),
        };
        Ok(Self {
            k,
            alpha,
            n,
            eps: get("eps").map(parse_rational).transpose()?,
            power: get("power").map(|v| parse("power", v)).transpose()?.unwrap_or(1e8),
            powers: parse_powers(get("powers").unwrap_or("4..12"))?,
            trials: get("trials").map(|v| parse("trials", v)).transpose()?.unwrap_or(1000),
            seed: get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(0),
            h_min: get("h-min").map(|v| parse("h-min", v)).transpose()?.unwrap_or(0.5),
            h_max: get("h-max").map(|v| parse("h-max", v)).transpose()?.unwrap_or(2.0),
            noise_std: get("noise-std")
                .map(|v| parse("noise-std", v))
                .transpose()?
                .unwrap_or(1.0),
            reliability: get("reliability")
                .map(|v| parse("reliability", v))
                .transpose()?
                .unwrap_or(1e-2),
            cap: get("cap").map(|v| parse("cap", v)).transpose()?.unwrap_or(1e7),
            format,
            out: get("out").map(PathBuf::from),
        })
    }

    pub fn alpha(&self) -> Result<&AlphaProfile, CliError> {
        self.alpha.as_ref().ok_or_else(|| usage("alphas is required".into()))
    }

    /// The single `n` of commands that take one.
    pub fn single_n(&self) -> Result<u64, CliError> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            _ => Err(usage("this command takes a single n".into())),
        }
    }

    pub fn sim_config(&self, powers: Vec<f64>) -> Result<SimConfig, CliError> {
        let mut cfg = SimConfig::new(self.alpha()?.clone(), self.single_n()?, powers, self.trials, self.seed);
        cfg.eps = self.eps.clone();
        cfg.h_min = self.h_min;
        cfg.h_max = self.h_max;
        cfg.noise_std = self.noise_std;
        cfg.reliability = self.reliability;
        cfg.cap = self.cap;
        Ok(cfg)
    }
}
