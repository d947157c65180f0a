use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ptnet",
    version,
    about = "PT-symmetric engineered spin chains: spectra, metrics, spin ensembles and state transfer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of the chain
    Spectrum(ChainArgs),
    /// Eigenvalues and right eigenvectors
    Eigensystem(ChainArgs),
    /// Dressed eigenfunctions for a list of gammas approaching the exceptional point
    EpScan(ScanArgs),
    /// Metric eta, its root rho, rho^-1 and the Hermitian counterpart
    Metric(ChainArgs),
    /// Total-spin block decomposition of d coupled spin-1/2 sites
    Hypercube(CubeArgs),
    /// Time evolution trace with Dirac and eta norms
    Evolve(EvolveArgs),
    /// Perfect state transfer: trace plus fidelity at tau
    Pst(EvolveArgs),
    /// Unbroken / critical / broken classification
    Phase(PhaseArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Potential {
    Imag,
    Real,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format (json for matrix data, csv for traces and scans by default)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    /// Number of sites N
    #[arg(long)]
    pub sites: usize,
    /// Potential strength gamma
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = Potential::Imag)]
    pub potential: Potential,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub sites: usize,
    /// Comma-separated gamma values
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub gammas: Vec<f64>,
    /// Also write coalescence distances as JSON to this file
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CubeArgs {
    /// Number of spin-1/2 sites d
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Initial state: site:k, transferable:l or file:path
    #[arg(long)]
    pub initial: Option<InitialSpec>,
    /// Final time: a number, tau, 2tau or any multiple such as 0.5tau
    #[arg(long)]
    pub t_max: Option<TimeSpec>,
    /// Number of time intervals; the trace has steps + 1 samples
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Also write a JSON summary to this file
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[arg(long)]
    pub sites: usize,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "gammas")]
    pub gamma: Option<f64>,
    /// Comma-separated gamma values
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gammas: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    Site(usize),
    Transferable(usize),
    File(PathBuf),
}

impl FromStr for InitialSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| format!("expected site:k, transferable:l or file:path, got `{s}`"))?;
        let index = || {
            value
                .parse::<usize>()
                .map_err(|_| format!("`{value}` is not a site index"))
        };
        match kind {
            "site" => Ok(Self::Site(index()?)),
            "transferable" => Ok(Self::Transferable(index()?)),
            "file" if !value.is_empty() => Ok(Self::File(PathBuf::from(value))),
            _ => Err(format!("expected site:k, transferable:l or file:path, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeSpec {
    Absolute(f64),
    Taus(f64),
}

impl FromStr for TimeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected a non-negative time, tau or a multiple like 2tau, got `{s}`");
        let (number, taus) = match s.strip_suffix("tau") {
            Some("") => ("1", true),
            Some(prefix) => (prefix, true),
            None => (s, false),
        };
        let x: f64 = number.parse().map_err(|_| bad())?;
        if !x.is_finite() || x < 0.0 {
            return Err(bad());
        }
        Ok(if taus { Self::Taus(x) } else { Self::Absolute(x) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_specs() {
        assert_eq!("site:3".parse(), Ok(InitialSpec::Site(3)));
        assert_eq!("transferable:1".parse(), Ok(InitialSpec::Transferable(1)));
        assert_eq!("file:a/b.txt".parse(), Ok(InitialSpec::File("a/b.txt".into())));
        assert!("site:x".parse::<InitialSpec>().is_err());
        assert!("orbit:1".parse::<InitialSpec>().is_err());
        assert!("file:".parse::<InitialSpec>().is_err());
    }

    #[test]
    fn time_specs() {
        assert_eq!("tau".parse(), Ok(TimeSpec::Taus(1.0)));
        assert_eq!("2tau".parse(), Ok(TimeSpec::Taus(2.0)));
        assert_eq!("0.5tau".parse(), Ok(TimeSpec::Taus(0.5)));
        assert_eq!("3.25".parse(), Ok(TimeSpec::Absolute(3.25)));
        assert!("-1".parse::<TimeSpec>().is_err());
        assert!("inf".parse::<TimeSpec>().is_err());
        assert!("xtau".parse::<TimeSpec>().is_err());
    }

    #[test]
    fn command_tree_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
