//! `isogeo`: osculating spaces, secant dimensions and degenerations of
//! Lagrangian Grassmannians and Spinor varieties.

mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isogeo::embed::Variety;
use isogeo::exactlinalg::FieldDescriptor;
use isogeo::secant::HRule;

use crate::output::Format;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Parser)]
#[command(name = "isogeo", version, about = "Osculating spaces and secant defectivity of LG(n,2n) and spinor varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Osculating dimensions: formula, jets and closed-form basis.
    OscDim,
    /// Coordinates spanning T^s at the chart origin.
    OscSpace,
    /// Compare T^s X with T^s G(n,2n) cut by the span of X.
    WellBehaved,
    /// Terracini ranks and defectivity verdicts.
    Secant,
    /// Generic finiteness of the projection from T^s.
    Project,
    /// Round-trip random points through the inverse of the projection from T^s.
    Reconstruct,
    /// Strong 2-osculating regularity along M_t = (I | tA).
    Regularity,
    /// Flat limit of <T^s1_0, T^s2_{tA}> for one direction.
    FlatLimit,
    /// Binomial determinants and hyperplane certificates.
    BinomialCheck,
    /// Every check at desk scale.
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::OscDim => "osc-dim",
            Command::OscSpace => "osc-space",
            Command::WellBehaved => "well-behaved",
            Command::Secant => "secant",
            Command::Project => "project",
            Command::Reconstruct => "reconstruct",
            Command::Regularity => "regularity",
            Command::FlatLimit => "flat-limit",
            Command::BinomialCheck => "binomial-check",
            Command::Suite => "suite",
        }
    }
}

/// An inclusive range `a..b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn single(n: usize) -> Self {
        NRange { lo: n, hi: n }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl std::fmt::Display for NRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

fn parse_range(s: &str) -> Result<NRange, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a number or a range a..b"));
    let r = match s.split_once("..") {
        Some((a, b)) => NRange { lo: num(a)?, hi: num(b.trim_start_matches('='))? },
        None => NRange::single(num(s)?),
    };
    if r.lo > r.hi || r.lo == 0 {
        return Err(format!("empty or zero range `{s}`"));
    }
    Ok(r)
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|_| format!("invalid seed `{s}`"))
}

fn parse_variety(s: &str) -> Result<Variety, String> {
    s.parse().map_err(|e: isogeo::embed::EmbedError| e.to_string())
}

fn parse_field(s: &str) -> Result<FieldDescriptor, String> {
    s.parse().map_err(|e: isogeo::exactlinalg::LinalgError| e.to_string())
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// gr, lg, spinor-pl or spinor-min.
    #[arg(long, global = true, value_parser = parse_variety)]
    pub variety: Option<Variety>,
    /// A value or an inclusive range a..b.
    #[arg(long, global = true, value_parser = parse_range)]
    pub n: Option<NRange>,
    #[arg(long, global = true)]
    pub s: Option<usize>,
    #[arg(long, global = true)]
    pub s1: Option<usize>,
    #[arg(long, global = true)]
    pub s2: Option<usize>,
    /// Number of secant points, or `auto` for every h up to the certified bound.
    #[arg(long, global = true)]
    pub h: Option<HRule>,
    /// `qq` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "fp:2147483647", value_parser = parse_field)]
    pub field: FieldDescriptor,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, global = true, default_value = "0xC0FFEE", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variety": self.variety.map(|v| v.tag()),
            "n": self.n.map(|n| n.to_string()),
            "s": self.s,
            "s1": self.s1,
            "s2": self.s2,
            "h": self.h.map(|h| match h { HRule::Auto => "auto".to_string(), HRule::Fixed(h) => h.to_string() }),
            "field": self.field.to_string(),
            "trials": self.trials,
            "seed": self.seed,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cache::MapCache::from_env();
    match commands::run(cli.command, &cli.config, &cache) {
        Ok(report) => {
            let text = report.render(cli.config.format);
            let written = match &cli.config.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_seeds() {
        assert_eq!(parse_range("4..8").unwrap(), NRange { lo: 4, hi: 8 });
        assert_eq!(parse_range("5").unwrap(), NRange::single(5));
        assert_eq!(parse_range("3..=4").unwrap(), NRange { lo: 3, hi: 4 });
        assert!(parse_range("8..4").is_err());
        assert!(parse_range("x").is_err());
        assert_eq!(parse_seed("0xC0FFEE").unwrap(), DEFAULT_SEED);
        assert_eq!(parse_seed("12").unwrap(), 12);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
