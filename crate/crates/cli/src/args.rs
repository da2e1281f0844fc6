use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(name = "powertail", version, about = "Outage tails of fading channels at ultra-reliable operating points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and approximate outage with the error bound at each grid point.
    Tail(TailArgs),
    /// Plot-ready curve: exact CDF, tail approximation, φ and local slope.
    Curve(CurveArgs),
    /// Received power needed for target outage probabilities.
    Invert(InvertArgs),
    /// Check the sandwich bound, ratio convergence and validity bound.
    Validate(ValidateArgs),
    /// Monte Carlo empirical tail with analytic overlay.
    Mc(McArgs),
    /// Selection / maximum-ratio combining over independent branches.
    Diversity(DiversityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Sc,
    Mrc,
}

/// `start:stop:step` in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?} in grid: {e}"));
        let g = Grid {
            start_db: num(a)?,
            stop_db: num(b)?,
            step_db: num(c)?,
        };
        if !(g.step_db > 0.0) || !g.step_db.is_finite() {
            return Err(format!("grid step must be > 0, got {}", g.step_db));
        }
        if !(g.start_db < g.stop_db) || !g.stop_db.is_finite() || !g.start_db.is_finite() {
            return Err(format!("grid start must be below stop, got {}:{}", g.start_db, g.stop_db));
        }
        Ok(g)
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        (0..=count).map(|i| self.start_db + i as f64 * self.step_db).collect()
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output path; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub model: String,
    /// Grid in dB, `start:stop:step`.
    #[arg(long, default_value = "-60:0:1", allow_hyphen_values = true)]
    pub grid: Grid,
    /// Interpret the grid as absolute 10·log10(P_R) instead of P_R/A.
    #[arg(long)]
    pub absolute: bool,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Tolerance η for the within-tolerance flag.
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Model as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub model: String,
    /// Target outage probabilities.
    #[arg(long, value_delimiter = ',', default_value = "1e-9,1e-6,1e-3")]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Model as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Samples per deterministic stream.
    #[arg(long, default_value_t = powertail::montecarlo::DEFAULT_CHUNK)]
    pub chunk: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    /// `{"branches": [...], "scheme": "SC"|"MRC"}` inline or as a file path.
    #[arg(long)]
    pub model: String,
    /// Overrides the scheme in the model file.
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Grid in dB relative to the first branch's mean power.
    #[arg(long, default_value = "-30:10:1", allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long)]
    pub absolute: bool,
    /// Also run a Monte Carlo reference with this many samples.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = powertail::montecarlo::DEFAULT_CHUNK)]
    pub chunk: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g: Grid = "-60:0:10".parse().unwrap();
        assert_eq!(g.points(), vec![-60.0, -50.0, -40.0, -30.0, -20.0, -10.0, 0.0]);
        let g: Grid = "-1:0:0.1".parse().unwrap();
        assert_eq!(g.points().len(), 11);
        assert!("0:-1:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }
}
