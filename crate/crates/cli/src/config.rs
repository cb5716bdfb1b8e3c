//! Command-line grammar and the `key=value` config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use charwalk_core::Epsilon;
use clap::{Parser, ValueEnum};

use crate::error::{CliError, Result};

pub const CACHE_ENV: &str = "CHARWALK_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Sum and mean of f_eps(p) over odd primes p <= x.
    Fpt,
    /// Exact |A_m| and limiting tails a^_m, plus the c_eps partial sum.
    Enum,
    /// Mean first-passage time against the c_eps partial sum.
    Converge,
    /// Empirical tail a_m(x) next to a^_m.
    Tail,
    /// Barrier density P_l(x).
    Density,
    /// Sixth moment of S_l(p), direct and through cube coefficients.
    Moment,
    /// Square-pair sum C_3(l).
    C3,
    /// Prime counts with prescribed (q/p) signs.
    Equi,
    /// Largest max|S_t(p)| / (sqrt(p) ln p).
    Pv,
    /// Per-prime f_eps(p) and F_eps(p).
    Passage,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fpt => "fpt",
            Command::Enum => "enum",
            Command::Converge => "converge",
            Command::Tail => "tail",
            Command::Density => "density",
            Command::Moment => "moment",
            Command::C3 => "c3",
            Command::Equi => "equi",
            Command::Pv => "pv",
            Command::Passage => "passage",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "charwalk",
    version,
    about = "First-passage experiments for quadratic character sums"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Upper limit for primes; repeatable, must increase. Accepts 1e6 or 10^6.
    #[arg(long = "x", value_parser = parse_count)]
    pub x: Vec<u64>,

    /// Barrier slope as a rational a/b in (0, 1].
    #[arg(long)]
    pub eps: Option<String>,

    #[arg(long = "m-max")]
    pub m_max: Option<u64>,

    /// Walk length l; repeatable.
    #[arg(long = "ell", value_parser = parse_count)]
    pub ell: Vec<u64>,

    #[arg(long)]
    pub workers: Option<usize>,

    /// Cache directory (defaults to $CHARWALK_CACHE).
    #[arg(long)]
    pub cache: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// key=value config file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long = "node-budget", value_parser = parse_count)]
    pub node_budget: Option<u64>,

    #[arg(long = "split-primes")]
    pub split_primes: Option<usize>,

    /// Exponent offset for C_3(l) / l^(3+delta), rational a/b.
    #[arg(long)]
    pub delta: Option<String>,

    /// Sign constraint q:+1 or q:-1; repeatable.
    #[arg(long = "constraint")]
    pub constraint: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub x_values: Vec<u64>,
    pub epsilon: Epsilon,
    pub m_max: u64,
    pub ell_values: Vec<u64>,
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub node_budget: u64,
    pub split_primes: usize,
    pub output_format: Format,
    pub out_dir: PathBuf,
    /// `(num, den)`, nonnegative.
    pub delta: (u64, u64),
    pub constraints: Vec<(u64, i8)>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            x_values: Vec::new(),
            epsilon: Epsilon::HALF,
            m_max: 12,
            ell_values: Vec::new(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            cache_dir: None,
            node_budget: charwalk_core::patterns::DEFAULT_NODE_BUDGET,
            split_primes: charwalk_core::patterns::DEFAULT_SPLIT_PRIMES,
            output_format: Format::Csv,
            out_dir: PathBuf::from("."),
            delta: (1, 2),
            constraints: Vec::new(),
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Integer with optional `1e6` / `10^6` / `1_000_000` spelling.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    let parsed = if let Some((m, e)) = t.split_once(['e', 'E']) {
        let (m, e) = (m.parse::<u64>(), e.parse::<u32>());
        match (m, e) {
            (Ok(m), Ok(e)) => 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)),
            _ => None,
        }
    } else if let Some((b, e)) = t.split_once('^') {
        match (b.parse::<u64>(), e.parse::<u32>()) {
            (Ok(b), Ok(e)) => b.checked_pow(e),
            _ => None,
        }
    } else {
        t.parse::<u64>().ok()
    };
    parsed.ok_or_else(|| format!("not a nonnegative integer: {s:?}"))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<u64>> {
    v.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_count(t).map_err(|e| config_err(format!("{key}: {e}"))))
        .collect()
}

pub fn parse_delta(s: &str) -> Result<(u64, u64)> {
    let bad = || {
        config_err(format!(
            "delta must be a nonnegative rational a/b, got {s:?}"
        ))
    };
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok((n, d))
}

pub fn parse_constraint(s: &str) -> Result<(u64, i8)> {
    let bad = || config_err(format!("constraint must look like q:+1 or q:-1, got {s:?}"));
    let (q, eta) = s.trim().split_once(':').ok_or_else(bad)?;
    let q = parse_count(q).map_err(|_| bad())?;
    let eta = match eta.trim() {
        "+1" | "1" | "+" => 1,
        "-1" | "-" => -1,
        _ => return Err(bad()),
    };
    Ok((q, eta))
}

fn parse_epsilon(s: &str) -> Result<Epsilon> {
    s.parse::<Epsilon>().map_err(|e| config_err(e.to_string()))
}

fn read_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            config_err(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

impl ExperimentConfig {
    /// Defaults, then the config file, then flags, then `$CHARWALK_CACHE` if
    /// no cache was named.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &cli.config {
            for (k, v) in read_config_file(path)? {
                match k.as_str() {
                    "x" | "x_values" => cfg.x_values = parse_list(&k, &v)?,
                    "eps" | "epsilon" => cfg.epsilon = parse_epsilon(&v)?,
                    "m_max" => cfg.m_max = parse_count(&v).map_err(config_err)?,
                    "ell" | "ell_values" => cfg.ell_values = parse_list(&k, &v)?,
                    "workers" => cfg.workers = parse_count(&v).map_err(config_err)? as usize,
                    "cache" | "cache_dir" => cfg.cache_dir = Some(PathBuf::from(v)),
                    "node_budget" => cfg.node_budget = parse_count(&v).map_err(config_err)?,
                    "split_primes" => {
                        cfg.split_primes = parse_count(&v).map_err(config_err)? as usize
                    }
                    "format" | "output_format" => {
                        cfg.output_format = Format::from_str(&v, true).map_err(config_err)?
                    }
                    "out" => cfg.out_dir = PathBuf::from(v),
                    "delta" => cfg.delta = parse_delta(&v)?,
                    "constraint" | "constraints" => {
                        cfg.constraints = v
                            .split(',')
                            .filter(|t| !t.trim().is_empty())
                            .map(parse_constraint)
                            .collect::<Result<_>>()?
                    }
                    other => return Err(config_err(format!("unknown config key {other:?}"))),
                }
            }
        }
        if !cli.x.is_empty() {
            cfg.x_values = cli.x.clone();
        }
        if let Some(e) = &cli.eps {
            cfg.epsilon = parse_epsilon(e)?;
        }
        if let Some(m) = cli.m_max {
            cfg.m_max = m;
        }
        if !cli.ell.is_empty() {
            cfg.ell_values = cli.ell.clone();
        }
        if let Some(w) = cli.workers {
            cfg.workers = w;
        }
        if let Some(c) = &cli.cache {
            cfg.cache_dir = Some(c.clone());
        }
        if cfg.cache_dir.is_none() {
            cfg.cache_dir = std::env::var_os(CACHE_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from);
        }
        if let Some(f) = cli.format {
            cfg.output_format = f;
        }
        if let Some(o) = &cli.out {
            cfg.out_dir = o.clone();
        }
        if let Some(b) = cli.node_budget {
            cfg.node_budget = b;
        }
        if let Some(k) = cli.split_primes {
            cfg.split_primes = k;
        }
        if let Some(d) = &cli.delta {
            cfg.delta = parse_delta(d)?;
        }
        if !cli.constraint.is_empty() {
            cfg.constraints = cli
                .constraint
                .iter()
                .map(|s| parse_constraint(s))
                .collect::<Result<_>>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(config_err("workers must be >= 1"));
        }
        if self.split_primes == 0 {
            return Err(config_err("split-primes must be >= 1"));
        }
        if !self.x_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(config_err("x values must be strictly increasing"));
        }
        Ok(())
    }

    pub fn require_x(&self) -> Result<&[u64]> {
        if self.x_values.is_empty() {
            return Err(config_err("this command needs at least one --x"));
        }
        if let Some(&x) = self.x_values.iter().find(|&&x| x < 3) {
            return Err(config_err(format!("x = {x} has no odd primes; use x >= 3")));
        }
        Ok(&self.x_values)
    }

    pub fn require_ell(&self) -> Result<&[u64]> {
        if self.ell_values.is_empty() {
            return Err(config_err("this command needs at least one --ell"));
        }
        if self.ell_values.contains(&0) {
            return Err(config_err("l must be >= 1"));
        }
        Ok(&self.ell_values)
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta.0 as f64 / self.delta.1 as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1000000").unwrap(), 1_000_000);
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("10^7").unwrap(), 10_000_000);
        assert_eq!(parse_count("1_000").unwrap(), 1000);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn constraints() {
        assert_eq!(parse_constraint("2:+1").unwrap(), (2, 1));
        assert_eq!(parse_constraint("13:-1").unwrap(), (13, -1));
        assert!(parse_constraint("13:0").is_err());
        assert!(parse_constraint("13").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("charwalk-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(&path, "# demo\nx = 10, 100\neps=1/4\nm_max=7\nworkers=2\n").unwrap();
        let cli = Cli::parse_from([
            "charwalk",
            "fpt",
            "--config",
            path.to_str().unwrap(),
            "--eps",
            "1/2",
        ]);
        let cfg = ExperimentConfig::from_cli(&cli).unwrap();
        assert_eq!(cfg.x_values, vec![10, 100]);
        assert_eq!(cfg.epsilon, Epsilon::HALF);
        assert_eq!(cfg.m_max, 7);
        assert_eq!(cfg.workers, 2);

        fs::write(&path, "bogus=1\n").unwrap();
        let cli = Cli::parse_from(["charwalk", "fpt", "--config", path.to_str().unwrap()]);
        assert!(matches!(
            ExperimentConfig::from_cli(&cli),
            Err(CliError::Config(_))
        ));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn validation() {
        let bad = |args: &[&str]| {
            let cli = Cli::parse_from(args);
            ExperimentConfig::from_cli(&cli).unwrap_err().exit_code()
        };
        assert_eq!(bad(&["charwalk", "fpt", "--x", "100", "--x", "10"]), 2);
        assert_eq!(bad(&["charwalk", "fpt", "--eps", "3/2"]), 2);
        assert_eq!(bad(&["charwalk", "fpt", "--eps", "0.5"]), 2);
        assert_eq!(bad(&["charwalk", "fpt", "--workers", "0"]), 2);
        let cfg = ExperimentConfig::default();
        assert!(cfg.require_x().is_err());
    }
}
