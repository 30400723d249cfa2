//! Command-line options, the optional JSON config file, and validation into
//! a [`RunConfig`].

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dicke2::exceptional::{ConditionRoute, CONDITION_MAX_TERMS};
use dicke2::oracle::{trusted_top, DEFAULT_N_FOCK};
use dicke2::{Parity, SeriesConfig};
use serde::Deserialize;

/// Environment variable overriding the series term cap.
pub const MAX_TERMS_ENV: &str = "DICKE2_MAX_TERMS";

#[derive(Debug, Parser)]
#[command(name = "dicke2", version, about = "Exact spectrum of the two-qubit quantum Rabi model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sample G_+ and G_- over an energy window
    Gcurve,
    /// Zeros of G over a grid of couplings, with singlet and E = m - g^2 lines
    Spectrum,
    /// Couplings where the pole at E = m - g^2 is lifted
    Exceptional,
    /// Truncated-Fock-basis reference spectrum
    Oracle,
    /// One-to-one comparison of G zeros with the reference spectrum
    Verify,
    /// The spin-singlet levels E = n
    Singlet,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Gcurve => "gcurve",
            Command::Spectrum => "spectrum",
            Command::Exceptional => "exceptional",
            Command::Oracle => "oracle",
            Command::Verify => "verify",
            Command::Singlet => "singlet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParitySelector {
    Even,
    Odd,
    Both,
}

impl ParitySelector {
    pub fn parities(self) -> Vec<Parity> {
        match self {
            ParitySelector::Even => vec![Parity::Even],
            ParitySelector::Odd => vec![Parity::Odd],
            ParitySelector::Both => Parity::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteSelector {
    Series,
    Direct,
    Both,
}

impl RouteSelector {
    pub fn routes(self) -> Vec<ConditionRoute> {
        match self {
            RouteSelector::Series => vec![ConditionRoute::Series],
            RouteSelector::Direct => vec![ConditionRoute::Direct],
            RouteSelector::Both => vec![ConditionRoute::Series, ConditionRoute::Direct],
        }
    }
}

/// Every option, shared by the command line and the config file (same
/// keys). Unset means "take the other source, then the default".
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// JSON file with any of these options; flags given here win
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Qubit splitting Δ (>= 0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,

    /// Coupling g (> 0)
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "g_grid")]
    pub g: Option<f64>,

    /// Coupling grid start:stop:step, stop included
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "START:STOP:STEP")]
    pub g_grid: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub parity: Option<ParitySelector>,

    /// Energy window lo:hi
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "LO:HI")]
    pub window: Option<String>,

    /// Sampling step: in E for gcurve and spectrum, in g for exceptional
    #[arg(long, global = true)]
    pub step: Option<f64>,

    /// Relative accuracy of every series evaluation
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Bracket width at which root bisection stops (in E, or g for exceptional)
    #[arg(long, global = true)]
    pub tol_e: Option<f64>,

    /// Distance from a pole under which G is not evaluated
    #[arg(long, global = true)]
    pub eps_pole: Option<f64>,

    /// Photon cutoff of the reference Hamiltonian
    #[arg(long, global = true)]
    pub n_fock: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (default stdout)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Pole indices m for exceptional, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,

    /// Coupling range lo:hi for exceptional
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "LO:HI")]
    pub g_range: Option<String>,

    /// Largest photon number for singlet
    #[arg(long, global = true)]
    pub n_max: Option<usize>,

    /// Condition evaluation for exceptional
    #[arg(long, global = true, value_enum)]
    pub route: Option<RouteSelector>,

    /// Add reference-spectrum columns
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub verify: Option<bool>,
}

impl Options {
    /// Fills every unset option from `file`. `g` and `g-grid` are one
    /// choice: either on the command line hides both in the file.
    pub fn merged_with(self, file: Options) -> Options {
        let coupling_given = self.g.is_some() || self.g_grid.is_some();
        Options {
            config: self.config,
            delta: self.delta.or(file.delta),
            g: if coupling_given { self.g } else { file.g },
            g_grid: if coupling_given { self.g_grid } else { file.g_grid },
            parity: self.parity.or(file.parity),
            window: self.window.or(file.window),
            step: self.step.or(file.step),
            tol: self.tol.or(file.tol),
            tol_e: self.tol_e.or(file.tol_e),
            eps_pole: self.eps_pole.or(file.eps_pole),
            n_fock: self.n_fock.or(file.n_fock),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            m: self.m.or(file.m),
            g_range: self.g_range.or(file.g_range),
            n_max: self.n_max.or(file.n_max),
            route: self.route.or(file.route),
            verify: self.verify.or(file.verify),
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<Options> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let options: Options =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    if options.g.is_some() && options.g_grid.is_some() {
        bail!("config {}: g and g-grid are mutually exclusive", path.display());
    }
    Ok(options)
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub delta: Option<f64>,
    /// From `--g` or `--g-grid`; empty when neither is given.
    pub couplings: Vec<f64>,
    pub parities: Vec<Parity>,
    pub window: Option<(f64, f64)>,
    pub step: Option<f64>,
    pub tol_e: Option<f64>,
    pub series: SeriesConfig,
    /// Whether the term cap came from the environment.
    pub max_terms_override: bool,
    pub n_fock: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub m: Vec<usize>,
    pub g_range: (f64, f64),
    pub n_max: usize,
    pub routes: Vec<ConditionRoute>,
    pub verify: bool,
}

pub const DEFAULT_M: [usize; 3] = [1, 2, 3];
pub const DEFAULT_G_RANGE: (f64, f64) = (0.0, 1.5);
pub const DEFAULT_N_MAX: usize = 5;

impl RunConfig {
    /// `max_terms_env` is the raw value of [`MAX_TERMS_ENV`], if set.
    pub fn resolve(command: Command, o: Options, max_terms_env: Option<&str>) -> Result<RunConfig> {
        let delta = match o.delta {
            Some(d) if !d.is_finite() || d < 0.0 => bail!("--delta must be finite and >= 0, got {d}"),
            other => other,
        };
        let couplings = match (o.g, &o.g_grid) {
            (Some(_), Some(_)) => bail!("--g and --g-grid are mutually exclusive"),
            (Some(g), None) => vec![g],
            (None, Some(spec)) => parse_grid(spec).context("--g-grid")?,
            (None, None) => Vec::new(),
        };
        if let Some(&g) = couplings.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            bail!("couplings must be finite and > 0, got {g}");
        }
        let window = o.window.as_deref().map(parse_range).transpose().context("--window")?;
        if let Some(step) = o.step {
            if !(step.is_finite() && step > 0.0) {
                bail!("--step must be > 0, got {step}");
            }
        }
        let mut series = SeriesConfig::default();
        if command == Command::Exceptional {
            series = series.with_max_terms(CONDITION_MAX_TERMS);
        }
        if let Some(tol) = o.tol {
            if !(tol.is_finite() && tol > 0.0) {
                bail!("--tol must be > 0, got {tol}");
            }
            series.tol = tol;
        }
        if let Some(eps) = o.eps_pole {
            if !(eps.is_finite() && eps > 0.0) {
                bail!("--eps-pole must be > 0, got {eps}");
            }
            series.eps_pole = eps;
        }
        if let Some(tol_e) = o.tol_e {
            if !(tol_e.is_finite() && tol_e > 0.0) {
                bail!("--tol-e must be > 0, got {tol_e}");
            }
        }
        let max_terms_override = max_terms_env.is_some();
        if let Some(raw) = max_terms_env {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| anyhow!("{MAX_TERMS_ENV} must be a positive integer, got '{raw}'"))?;
            if n < 2 {
                bail!("{MAX_TERMS_ENV} must be at least 2, got {n}");
            }
            series.max_terms = n;
        }
        let n_fock = o.n_fock.unwrap_or(DEFAULT_N_FOCK);
        if n_fock == 0 {
            bail!("--n-fock must be > 0");
        }
        let g_range = o.g_range.as_deref().map(parse_range).transpose().context("--g-range")?.unwrap_or(DEFAULT_G_RANGE);
        if g_range.0 < 0.0 {
            bail!("--g-range must start at g >= 0, got {}", g_range.0);
        }
        let m = o.m.unwrap_or_else(|| DEFAULT_M.to_vec());
        if m.is_empty() {
            bail!("--m needs at least one value");
        }

        let config = RunConfig {
            command,
            delta,
            couplings,
            parities: o.parity.unwrap_or(ParitySelector::Both).parities(),
            window,
            step: o.step,
            tol_e: o.tol_e,
            series,
            max_terms_override,
            n_fock,
            format: o.format.unwrap_or(Format::Csv),
            out: o.out,
            m,
            g_range,
            n_max: o.n_max.unwrap_or(DEFAULT_N_MAX),
            routes: o.route.unwrap_or(RouteSelector::Series).routes(),
            verify: o.verify.unwrap_or(false),
        };
        config.check_required()?;
        Ok(config)
    }

    fn check_required(&self) -> Result<()> {
        let needs_delta = self.command != Command::Singlet || self.verify;
        if needs_delta && self.delta.is_none() {
            bail!("{} needs --delta", self.command.as_str());
        }
        let needs_g = match self.command {
            Command::Exceptional => false,
            Command::Singlet => self.verify,
            _ => true,
        };
        if needs_g && self.couplings.is_empty() {
            bail!("{} needs --g or --g-grid", self.command.as_str());
        }
        if self.command == Command::Exceptional && self.delta == Some(0.0) {
            bail!("exceptional needs --delta > 0: at delta = 0 the condition vanishes identically");
        }
        let reference = matches!(self.command, Command::Oracle | Command::Verify)
            || (self.verify && matches!(self.command, Command::Spectrum | Command::Exceptional));
        if reference {
            if let Some((_, hi)) = self.window {
                if hi > trusted_top(self.n_fock) {
                    bail!("window top {hi} exceeds the trusted limit n_fock/2 = {}", trusted_top(self.n_fock));
                }
            }
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta.expect("checked in resolve")
    }
}

/// `lo:hi` with `lo < hi`.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let parts = split_numbers(text)?;
    let [lo, hi] = parts[..] else {
        bail!("expected lo:hi, got '{text}'");
    };
    if !(hi > lo) {
        bail!("empty range '{text}'");
    }
    Ok((lo, hi))
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts = split_numbers(text)?;
    let [start, stop, step] = parts[..] else {
        bail!("expected start:stop:step, got '{text}'");
    };
    if !(step > 0.0) {
        bail!("grid step must be > 0, got {step}");
    }
    if stop < start {
        bail!("empty grid '{text}'");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

fn split_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(':')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| anyhow!("'{p}' is not a number in '{text}'"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(anyhow!("'{p}' is not finite in '{text}'"))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(args: &[&str]) -> (Command, Options) {
        let cli = Cli::try_parse_from(std::iter::once("dicke2").chain(args.iter().copied())).unwrap();
        (cli.command, cli.options)
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-0.3:4").unwrap(), (-0.3, 4.0));
        assert!(parse_range("1:1").is_err());
        assert!(parse_range("2:1").is_err());
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:1").is_err());
    }

    #[test]
    fn grid_includes_stop() {
        let g = parse_grid("0.05:1.0:0.05").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[19] - 1.0).abs() < 1e-12);
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
    }

    #[test]
    fn flags_after_subcommand_and_negative_window() {
        let (cmd, o) = options(&["gcurve", "--delta", "0.5", "--g", "0.6", "--window", "-0.3:4", "--step", "0.005"]);
        let c = RunConfig::resolve(cmd, o, None).unwrap();
        assert_eq!(c.window, Some((-0.3, 4.0)));
        assert_eq!(c.couplings, vec![0.6]);
        assert_eq!(c.parities, Parity::BOTH.to_vec());
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn validation_errors() {
        let (cmd, o) = options(&["gcurve", "--delta", "0.5", "--g", "0"]);
        assert!(RunConfig::resolve(cmd, o, None).is_err());
        let (cmd, o) = options(&["gcurve", "--delta", "0.5"]);
        assert!(RunConfig::resolve(cmd, o, None).is_err());
        let (cmd, o) = options(&["gcurve", "--delta", "0.5", "--g", "0.6", "--step=-1"]);
        assert!(RunConfig::resolve(cmd, o, None).is_err());
        let (cmd, o) = options(&["exceptional", "--delta", "0"]);
        assert!(RunConfig::resolve(cmd, o, None).is_err());
        let (cmd, o) = options(&["oracle", "--delta", "0.5", "--g", "0.5", "--window", "0:60"]);
        assert!(RunConfig::resolve(cmd, o, None).is_err());
        assert!(Cli::try_parse_from(["dicke2", "gcurve", "--g", "0.5", "--g-grid", "0.1:0.2:0.1"]).is_err());
    }

    #[test]
    fn environment_term_cap() {
        let (cmd, o) = options(&["gcurve", "--delta", "0.5", "--g", "0.6"]);
        let c = RunConfig::resolve(cmd, o.clone(), Some("4096")).unwrap();
        assert_eq!(c.series.max_terms, 4096);
        assert!(c.max_terms_override);
        assert!(RunConfig::resolve(cmd, o, Some("lots")).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let file: Options =
            serde_json::from_str(r#"{"delta": 1.0, "g-grid": "0.1:0.3:0.1", "parity": "odd", "n-fock": 80}"#).unwrap();
        let (cmd, o) = options(&["spectrum", "--delta", "0.5", "--g", "0.6"]);
        let c = RunConfig::resolve(cmd, o.merged_with(file), None).unwrap();
        assert_eq!(c.delta, Some(0.5));
        assert_eq!(c.couplings, vec![0.6]);
        assert_eq!(c.parities, vec![Parity::Odd]);
        assert_eq!(c.n_fock, 80);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<Options>(r#"{"detla": 1.0}"#).is_err());
    }

    #[test]
    fn verify_flag_forms() {
        let (_, o) = options(&["spectrum", "--verify"]);
        assert_eq!(o.verify, Some(true));
        let (_, o) = options(&["spectrum", "--verify", "false"]);
        assert_eq!(o.verify, Some(false));
        let (_, o) = options(&["exceptional", "--m", "1,2,3"]);
        assert_eq!(o.m, Some(vec![1, 2, 3]));
    }
}
