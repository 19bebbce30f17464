use serde::{Deserialize, Serialize};

use super::stats::{CellStats, TimingStats};
use super::{BatchResult, GoalSummary};
use crate::evolution::EvolutionConfig;
use crate::genotype::{MovementType, WeaponType};

/// Cell formatting for fitness grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// `mean±std` with two decimals.
    Report,
    /// Raw mean at full precision.
    Machine,
}

fn grid_header() -> Vec<&'static str> {
    std::iter::once("movement").chain(WeaponType::ALL.iter().map(|w| w.column_key())).collect()
}

fn write_grid<F>(mut cell: F) -> String
where
    F: FnMut(MovementType, WeaponType) -> String,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(grid_header()).expect("in-memory write");
    for m in MovementType::ALL {
        let row = std::iter::once(m.name().to_string()).chain(WeaponType::ALL.iter().map(|&wp| cell(m, wp)));
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// 7x6 grid of per-cell statistics. Empty cells print as `--` in report
/// mode and as an empty field in machine mode.
pub fn fitness_grid_csv(cells: &[CellStats], mode: GridMode) -> String {
    write_grid(|m, w| {
        let c = cells.iter().find(|c| c.movement == m && c.weapon == w);
        match (c.filter(|c| !c.is_empty()), mode) {
            (Some(c), GridMode::Report) => format!("{:.2}±{:.2}", c.mean, c.std),
            (Some(c), GridMode::Machine) => c.mean.to_string(),
            (None, GridMode::Report) => "--".into(),
            (None, GridMode::Machine) => String::new(),
        }
    })
}

/// Machine grid of single values (one archive), row-major.
pub fn value_grid_csv(values: &[Option<f64>]) -> String {
    write_grid(|m, w| {
        let i = m.ordinal() * WeaponType::COUNT + w.ordinal();
        values.get(i).copied().flatten().map(|v| v.to_string()).unwrap_or_default()
    })
}

/// Wall-time table across goals, in seconds.
pub fn timing_csv(rows: &[TimingStats]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["difficulty", "average", "minimum", "maximum", "std"]).expect("in-memory write");
    for t in rows {
        w.write_record([
            t.goal.to_string(),
            t.mean.to_string(),
            t.min.to_string(),
            t.max.to_string(),
            t.std.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// JSON report of one goal of a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub goal: f64,
    pub runs: usize,
    pub cells: Vec<CellStats>,
    pub timing: TimingStats,
    /// Run template with this goal; each run's seed is listed in `seeds`.
    pub config: EvolutionConfig,
    pub base_seed: u64,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Set when the batch had a single run, so every std is 0 by convention.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub single_run: bool,
}

impl BatchReport {
    pub fn new(batch: &BatchResult, summary: &GoalSummary) -> Self {
        Self {
            goal: summary.goal.value(),
            runs: summary.runs.len(),
            cells: summary.cells.clone(),
            timing: summary.timing,
            config: EvolutionConfig { goal: summary.goal, seed: 0, ..batch.config.base_config.clone() },
            base_seed: batch.config.base_seed,
            seeds: summary.runs.iter().map(|r| r.seed).collect(),
            single_run: summary.runs.len() == 1,
        }
    }
}
