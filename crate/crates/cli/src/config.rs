use std::path::{Path, PathBuf};
use std::str::FromStr;

use quadforge::arith::Rational;
use quadforge::curve::{Point, SplitCurve};
use quadforge::density::SweepConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Forge,
    Scan,
    Density,
    Avoid,
    Certify,
    Growth,
    Convert,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Forge => "forge",
            Command::Scan => "scan",
            Command::Density => "density",
            Command::Avoid => "avoid",
            Command::Certify => "certify",
            Command::Growth => "growth",
            Command::Convert => "convert",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForgeParams {
    pub restarts: u64,
    pub max_n: usize,
    pub b_max: i64,
    pub l_window: i64,
    /// Square classes treated as trivial over `Q`.
    pub absorbed: Vec<i64>,
    /// Run over `F_p` instead of `Q`.
    pub prime: Option<u64>,
}

impl Default for ForgeParams {
    fn default() -> Self {
        let b = quadforge::forge::ForgeBudget::default();
        ForgeParams {
            restarts: b.restarts,
            max_n: b.max_n,
            b_max: b.b_max,
            l_window: b.l_window,
            absorbed: b.absorbed,
            prime: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanParams {
    /// Linear forms `"a,b"` meaning `u = a t + b`.
    pub forms: Vec<String>,
    pub t_min: i64,
    pub t_max: i64,
    pub absorbed: Vec<i64>,
    pub prime: Option<u64>,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams { forms: vec!["1,0".into()], t_min: -20, t_max: 20, absorbed: Vec::new(), prime: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AvoidParams {
    pub prime: u64,
    pub k: usize,
    pub n: usize,
    pub m: u64,
    pub budget: u64,
}

impl Default for AvoidParams {
    fn default() -> Self {
        AvoidParams { prime: 211, k: 2, n: 2, m: 2, budget: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifyParams {
    /// Points `"x,y"`.
    pub points: Vec<String>,
    pub bound: i64,
    pub min_primes: usize,
    pub max_primes: usize,
    pub p_min: u64,
}

impl Default for CertifyParams {
    fn default() -> Self {
        let b = quadforge::certify::CertifyBudget::default();
        CertifyParams {
            points: Vec::new(),
            bound: 10_000,
            min_primes: b.min_primes,
            max_primes: b.max_primes,
            p_min: b.p_min,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthParams {
    /// Restarts per forge run; seeds are `seed, seed + 1, ...`.
    pub schedule: Vec<u64>,
    pub max_n: usize,
    pub bound: i64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        GrowthParams { schedule: vec![1000, 4000], max_n: 3, bound: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvertParams {
    /// Weierstrass points `"x,y"` or `"inf"` to map to the quartic and back.
    pub points: Vec<String>,
}

impl Default for ConvertParams {
    fn default() -> Self {
        ConvertParams { points: Vec::new() }
    }
}

/// Everything a run needs; echoed verbatim into its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// `"e1,e2,e3"`.
    #[serde(default = "default_curve")]
    pub curve: String,
    /// `"x,y"`.
    #[serde(default = "default_point")]
    pub point: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub forge: ForgeParams,
    #[serde(default)]
    pub scan: ScanParams,
    #[serde(default)]
    pub density: SweepConfig,
    #[serde(default)]
    pub avoid: AvoidParams,
    #[serde(default)]
    pub certify: CertifyParams,
    #[serde(default)]
    pub growth: GrowthParams,
    #[serde(default)]
    pub convert: ConvertParams,
}

fn default_curve() -> String {
    "0,5,-5".into()
}

fn default_point() -> String {
    "-4,6".into()
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config is valid")
    }
}

impl RunConfig {
    /// Reads TOML, or JSON when the file name ends in `.json`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn curve(&self) -> Result<SplitCurve<Rational>, CliError> {
        let e = parse_rationals(&self.curve, 3)?;
        SplitCurve::new(e[0].clone(), e[1].clone(), e[2].clone())
            .map_err(|err| CliError::Config(format!("curve {:?}: {err}", self.curve)))
    }

    pub fn point(&self) -> Result<Point<Rational>, CliError> {
        parse_point(&self.point)
    }
}

/// Comma-separated rationals, exactly `n` of them.
pub fn parse_rationals(s: &str, n: usize) -> Result<Vec<Rational>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(CliError::Config(format!("expected {n} comma-separated rationals, got {s:?}")));
    }
    parts
        .iter()
        .map(|p| Rational::from_str(p).map_err(|e| CliError::Config(format!("{p:?}: {e}"))))
        .collect()
}

/// `"x,y"`, or `"inf"` for the point at infinity.
pub fn parse_point(s: &str) -> Result<Point<Rational>, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(Point::Infinity);
    }
    let v = parse_rationals(t, 2)?;
    Ok(Point::Affine(v[0].clone(), v[1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_rejected() {
        assert!(toml::from_str::<RunConfig>("bogus = 1").is_err());
        assert!(toml::from_str::<RunConfig>("[forge]\nrestart = 5").is_err());
        let c: RunConfig = toml::from_str("seed = 9\n[forge]\nrestarts = 5").unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.forge.restarts, 5);
    }

    #[test]
    fn curve_strings() {
        let c = RunConfig { curve: "0, 5, -5".into(), ..RunConfig::default() };
        assert!(c.curve().is_ok());
        for bad in ["0,5", "0,5,x", "1,1,2", ""] {
            let c = RunConfig { curve: bad.into(), ..RunConfig::default() };
            assert!(c.curve().is_err(), "{bad}");
        }
        assert_eq!(parse_point("inf").unwrap(), Point::Infinity);
        assert_eq!(parse_point("25/4,-75/8").unwrap(), Point::Affine(Rational::new(25, 4), Rational::new(-75, 8)));
    }
}
