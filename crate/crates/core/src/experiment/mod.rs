//! Replication harness: many independent seeded runs per goal, aggregated
//! into per-cell fitness statistics and wall-time statistics.
//!
//! With the `parallel` feature (default) runs are spread over a rayon pool of
//! `parallelism` threads; otherwise, or with `parallelism == 1`, they execute
//! sequentially. Results are identical either way: every run has its own
//! seed and aggregation sorts values before summarizing.

mod reference;
mod report;
mod stats;

use serde::{Deserialize, Serialize};

pub use reference::{
    compare_to_reference, published_timing, CellComparison, ComparisonReport, ReferenceEntry, ReferenceError,
    ReferenceTable, ReferenceTiming, TolerancePolicy,
};
pub use report::{fitness_grid_csv, timing_csv, value_grid_csv, BatchReport, GridMode};
pub use stats::{CellStats, Summary, TimingStats};

pub use crate::rng::deterministic_mix;

use crate::difficulty::DifficultyGoal;
use crate::evolution::{evolve, EvolutionConfig, EvolveError};
use crate::genotype::BehaviorDescriptor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub goals: Vec<DifficultyGoal>,
    pub runs_per_goal: usize,
    /// Template for every run; its `goal` and `seed` are overridden per run.
    pub base_config: EvolutionConfig,
    pub base_seed: u64,
    /// Worker threads. `0` uses every available core.
    pub parallelism: usize,
}

impl BatchConfig {
    pub fn new(goals: Vec<DifficultyGoal>, runs_per_goal: usize, base_seed: u64) -> Self {
        Self { goals, runs_per_goal, base_config: EvolutionConfig::default(), base_seed, parallelism: 0 }
    }

    pub fn validate(&self) -> Result<(), BatchError> {
        if self.goals.is_empty() {
            return Err(BatchError::Config("at least one goal is required".into()));
        }
        if self.runs_per_goal == 0 {
            return Err(BatchError::Config("runs_per_goal must be at least 1".into()));
        }
        self.base_config.validate().map_err(|e| BatchError::Config(e.to_string()))
    }

    /// Configuration of run `run_index` for `goal`.
    pub fn run_config(&self, goal: DifficultyGoal, run_index: usize) -> EvolutionConfig {
        EvolutionConfig {
            goal,
            seed: deterministic_mix(self.base_seed, goal, run_index as u64),
            ..self.base_config.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BatchError {
    #[error("invalid batch configuration: {0}")]
    Config(String),
    #[error("run {run_index} of goal {goal} (seed {seed}) failed: {source}")]
    Run { goal: f64, run_index: usize, seed: u64, source: EvolveError },
    #[error("building thread pool: {0}")]
    Pool(String),
}

/// Outcome of one run, reduced to what aggregation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSample {
    pub run_index: usize,
    pub seed: u64,
    /// Final fitness per cell in row-major order; `None` where empty.
    pub fitness: [Option<f64>; BehaviorDescriptor::CELLS],
    pub wall_time: f64,
    pub evaluations: u64,
}

impl RunSample {
    pub fn occupied(&self) -> usize {
        self.fitness.iter().flatten().count()
    }
}

#[derive(Debug, Clone)]
pub struct GoalSummary {
    pub goal: DifficultyGoal,
    /// One entry per cell, row-major.
    pub cells: Vec<CellStats>,
    pub timing: TimingStats,
    /// Per-run samples, ordered by run index.
    pub runs: Vec<RunSample>,
}

impl GoalSummary {
    pub fn cell(&self, desc: BehaviorDescriptor) -> &CellStats {
        &self.cells[desc.index()]
    }

    /// Final fitness of one cell in every run where it was occupied.
    pub fn cell_values(&self, desc: BehaviorDescriptor) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.fitness[desc.index()]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub config: BatchConfig,
    pub per_goal: Vec<GoalSummary>,
}

impl BatchResult {
    pub fn goal(&self, goal: DifficultyGoal) -> Option<&GoalSummary> {
        self.per_goal.iter().find(|g| g.goal == goal)
    }
}

fn run_one(config: &BatchConfig, goal: DifficultyGoal, run_index: usize) -> Result<RunSample, BatchError> {
    let run = config.run_config(goal, run_index);
    let result =
        evolve(&run).map_err(|source| BatchError::Run { goal: goal.value(), run_index, seed: run.seed, source })?;
    Ok(RunSample {
        run_index,
        seed: run.seed,
        fitness: result.archive.fitness_grid(),
        wall_time: result.wall_time.as_secs_f64(),
        evaluations: result.evaluations,
    })
}

fn run_sequential(config: &BatchConfig, jobs: &[(DifficultyGoal, usize)]) -> Result<Vec<RunSample>, BatchError> {
    jobs.iter().map(|&(g, i)| run_one(config, g, i)).collect()
}

#[cfg(feature = "parallel")]
fn run_jobs(config: &BatchConfig, jobs: &[(DifficultyGoal, usize)]) -> Result<Vec<RunSample>, BatchError> {
    use rayon::prelude::*;

    if config.parallelism == 1 {
        return run_sequential(config, jobs);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| BatchError::Pool(e.to_string()))?;
    // `collect` keeps job order.
    pool.install(|| jobs.par_iter().map(|&(g, i)| run_one(config, g, i)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(config: &BatchConfig, jobs: &[(DifficultyGoal, usize)]) -> Result<Vec<RunSample>, BatchError> {
    run_sequential(config, jobs)
}

/// Aggregates per-run samples of one goal.
pub fn summarize(goal: DifficultyGoal, runs: Vec<RunSample>) -> GoalSummary {
    let cells = BehaviorDescriptor::all()
        .map(|desc| {
            let values: Vec<f64> = runs.iter().filter_map(|r| r.fitness[desc.index()]).collect();
            CellStats::from_values(desc.movement, desc.weapon, &values)
        })
        .collect();
    let seconds: Vec<f64> = runs.iter().map(|r| r.wall_time).collect();
    let timing = TimingStats::from_seconds(goal, &seconds).unwrap_or(TimingStats {
        goal,
        mean: 0.0,
        min: 0.0,
        max: 0.0,
        std: 0.0,
    });
    GoalSummary { goal, cells, timing, runs }
}

pub fn run_batch(config: &BatchConfig) -> Result<BatchResult, BatchError> {
    config.validate()?;
    let jobs: Vec<(DifficultyGoal, usize)> =
        config.goals.iter().flat_map(|&g| (0..config.runs_per_goal).map(move |i| (g, i))).collect();
    let mut samples = run_jobs(config, &jobs)?.into_iter();
    let per_goal = config
        .goals
        .iter()
        .map(|&goal| summarize(goal, samples.by_ref().take(config.runs_per_goal).collect()))
        .collect();
    Ok(BatchResult { config: config.clone(), per_goal })
}
