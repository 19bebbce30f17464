use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use super::CliError;
use crate::difficulty::{DifficultyGoal, HealerPenalty};
use crate::evolution::EvolutionConfig;

#[derive(Debug, Parser)]
#[command(name = "enemyforge", version, about = "MAP-Elites enemy generator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one search and write the archive as JSON.
    Generate(GenerateArgs),
    /// Run many seeded searches per goal and write aggregate tables.
    Batch(BatchArgs),
    /// Render an archive or batch report as a 7x6 grid.
    Heatmap(HeatmapArgs),
    /// Compare a batch report against a reference table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PenaltyArg {
    HealersOnly,
    Literal,
}

impl From<PenaltyArg> for HealerPenalty {
    fn from(p: PenaltyArg) -> Self {
        match p {
            PenaltyArg::HealersOnly => HealerPenalty::HealersOnly,
            PenaltyArg::Literal => HealerPenalty::Literal,
        }
    }
}

/// Search parameters shared by `generate` and `batch`.
#[derive(Debug, Clone, Default, Args)]
pub struct SearchArgs {
    /// Flat TOML file whose keys mirror the flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub generations: Option<u32>,
    #[arg(long)]
    pub initial_population: Option<usize>,
    #[arg(long)]
    pub intermediate_population: Option<usize>,
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long)]
    pub gene_mutation_rate: Option<f64>,
    #[arg(long)]
    pub tournament_size: Option<usize>,
    #[arg(long)]
    pub blx_alpha: Option<f64>,
    #[arg(long)]
    pub max_seed_attempts: Option<usize>,
    #[arg(long, value_enum)]
    pub healer_penalty: Option<PenaltyArg>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with = "preset")]
    pub difficulty: Option<f64>,
    /// very-easy (11), easy (13), medium (15), hard (17) or very-hard (19).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Elites farther than this from the goal are left out of the export.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Comma-separated goals, e.g. `11,13,15,17,19`.
    #[arg(long)]
    pub difficulties: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeatmapFormat {
    Ascii,
    Csv,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    pub format: HeatmapFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub report: PathBuf,
    /// CSV with columns goal,movement,weapon,mean,std. Defaults to the
    /// bundled published tables.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = 0.15)]
    pub floor: f64,
    #[arg(long, default_value_t = 1.0)]
    pub std_multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GoalList {
    Text(String),
    Numbers(Vec<f64>),
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub difficulty: Option<f64>,
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub difficulties: Option<GoalList>,
    pub runs: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub base_seed: Option<u64>,
    pub generations: Option<u32>,
    pub initial_population: Option<usize>,
    pub intermediate_population: Option<usize>,
    pub mutation_rate: Option<f64>,
    pub gene_mutation_rate: Option<f64>,
    pub tournament_size: Option<usize>,
    pub blx_alpha: Option<f64>,
    pub max_seed_attempts: Option<usize>,
    pub healer_penalty: Option<HealerPenalty>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }
}

/// Merges flags over file values over defaults, then validates.
pub fn evolution_config(
    search: &SearchArgs,
    file: &FileConfig,
    goal: DifficultyGoal,
    seed: u64,
) -> Result<EvolutionConfig, CliError> {
    let d = EvolutionConfig::default();
    let config = EvolutionConfig {
        goal,
        seed,
        generations: search.generations.or(file.generations).unwrap_or(d.generations),
        initial_population: search.initial_population.or(file.initial_population).unwrap_or(d.initial_population),
        intermediate_population: search
            .intermediate_population
            .or(file.intermediate_population)
            .unwrap_or(d.intermediate_population),
        mutation_rate: search.mutation_rate.or(file.mutation_rate).unwrap_or(d.mutation_rate),
        gene_mutation_rate: search.gene_mutation_rate.or(file.gene_mutation_rate).unwrap_or(d.gene_mutation_rate),
        tournament_size: search.tournament_size.or(file.tournament_size).unwrap_or(d.tournament_size),
        blx_alpha: search.blx_alpha.or(file.blx_alpha).unwrap_or(d.blx_alpha),
        max_seed_attempts: search.max_seed_attempts.or(file.max_seed_attempts).unwrap_or(d.max_seed_attempts),
        healer_penalty: search
            .healer_penalty
            .map(HealerPenalty::from)
            .or(file.healer_penalty)
            .unwrap_or(d.healer_penalty),
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

pub fn parse_goal(value: f64) -> Result<DifficultyGoal, CliError> {
    DifficultyGoal::new(value).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parse_preset(name: &str) -> Result<DifficultyGoal, CliError> {
    DifficultyGoal::preset(name).ok_or_else(|| {
        CliError::Usage(format!("unknown preset `{name}` (expected very-easy, easy, medium, hard or very-hard)"))
    })
}

pub fn parse_goal_list(list: &GoalList) -> Result<Vec<DifficultyGoal>, CliError> {
    let values: Vec<f64> = match list {
        GoalList::Numbers(v) => v.clone(),
        GoalList::Text(s) => s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<f64>().map_err(|_| CliError::Usage(format!("invalid difficulty `{p}`"))))
            .collect::<Result<_, _>>()?,
    };
    if values.is_empty() {
        return Err(CliError::Usage("--difficulties must list at least one goal".into()));
    }
    values.into_iter().map(parse_goal).collect()
}
