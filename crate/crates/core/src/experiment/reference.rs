//! Published per-cell fitness tables and the tolerance check against them.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::CellStats;
use crate::genotype::{BehaviorDescriptor, MovementType, WeaponType};

const PUBLISHED_FITNESS: &str = include_str!("../../data/published_fitness.csv");
const PUBLISHED_TIMING: &str = include_str!("../../data/published_timing.csv");

#[derive(Debug, thiserror::Error)]
pub enum ReferenceError {
    #[error("reading reference table: {0}")]
    Csv(#[from] csv::Error),
    #[error("reading reference table: {0}")]
    Io(#[from] std::io::Error),
    #[error("reference table line {line}: {reason}")]
    Invalid { line: u64, reason: String },
    #[error("reference has no entry for goal {goal} cell ({movement}, {weapon})")]
    MissingCell { goal: f64, movement: MovementType, weapon: WeaponType },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub goal: f64,
    pub movement: MovementType,
    pub weapon: WeaponType,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Deserialize)]
struct RawEntry {
    goal: f64,
    movement: String,
    weapon: String,
    mean: f64,
    std: f64,
}

/// Per-cell mean and std for one or more goals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    entries: BTreeMap<(u64, BehaviorDescriptor), ReferenceEntry>,
}

impl ReferenceTable {
    /// The five published fitness tables (goals 11, 13, 15, 17, 19).
    pub fn published() -> Self {
        Self::from_reader(PUBLISHED_FITNESS.as_bytes()).expect("bundled table parses")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ReferenceError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// Reads CSV with header `goal,movement,weapon,mean,std`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, ReferenceError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut table = Self::default();
        for record in rdr.deserialize::<RawEntry>() {
            let raw = record?;
            let line = table.entries.len() as u64 + 2;
            let invalid = |reason: String| ReferenceError::Invalid { line, reason };
            let movement = raw.movement.parse().map_err(|e| invalid(format!("{e}")))?;
            let weapon = raw.weapon.parse().map_err(|e| invalid(format!("{e}")))?;
            if raw.mean < 0.0 || raw.std < 0.0 {
                return Err(invalid("mean and std must be non-negative".into()));
            }
            table.insert(ReferenceEntry { goal: raw.goal, movement, weapon, mean: raw.mean, std: raw.std });
        }
        Ok(table)
    }

    pub fn insert(&mut self, entry: ReferenceEntry) {
        let key = (entry.goal.to_bits(), BehaviorDescriptor::new(entry.movement, entry.weapon));
        self.entries.insert(key, entry);
    }

    pub fn get(&self, goal: f64, desc: BehaviorDescriptor) -> Option<&ReferenceEntry> {
        self.entries.get(&(goal.to_bits(), desc))
    }

    pub fn goals(&self) -> Vec<f64> {
        let mut goals: Vec<f64> = self.entries.values().map(|e| e.goal).collect();
        goals.dedup();
        goals
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Published wall-time row: goal, average, minimum, maximum, std (seconds).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ReferenceTiming {
    pub difficulty: f64,
    pub average: f64,
    pub minimum: f64,
    pub maximum: f64,
    pub std: f64,
}

pub fn published_timing() -> Vec<ReferenceTiming> {
    csv::Reader::from_reader(PUBLISHED_TIMING.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("bundled timing table parses")
}

/// Accepts a cell when `|ours - reference| <= max(floor, std_multiplier * reference_std)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub floor: f64,
    pub std_multiplier: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self { floor: 0.15, std_multiplier: 1.0 }
    }
}

impl TolerancePolicy {
    pub fn tolerance(&self, reference_std: f64) -> f64 {
        self.floor.max(self.std_multiplier * reference_std)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellComparison {
    pub movement: MovementType,
    pub weapon: WeaponType,
    pub ours: f64,
    pub reference_mean: f64,
    pub reference_std: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub goal: f64,
    pub cells: Vec<CellComparison>,
    pub passed: usize,
    pub total: usize,
}

impl ComparisonReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellComparison> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

/// Checks each cell's mean against the reference entry for `goal`.
/// Cells with no runs (`n = 0`) fail.
pub fn compare_to_reference(
    goal: f64,
    stats: &[CellStats],
    reference: &ReferenceTable,
    policy: TolerancePolicy,
) -> Result<ComparisonReport, ReferenceError> {
    let cells = stats
        .iter()
        .map(|s| {
            let desc = BehaviorDescriptor::new(s.movement, s.weapon);
            let r = reference.get(goal, desc).ok_or(ReferenceError::MissingCell {
                goal,
                movement: s.movement,
                weapon: s.weapon,
            })?;
            let tolerance = policy.tolerance(r.std);
            Ok(CellComparison {
                movement: s.movement,
                weapon: s.weapon,
                ours: s.mean,
                reference_mean: r.mean,
                reference_std: r.std,
                tolerance,
                pass: (s.mean - r.mean).abs() <= tolerance,
            })
        })
        .collect::<Result<Vec<_>, ReferenceError>>()?;
    let passed = cells.iter().filter(|c| c.pass).count();
    Ok(ComparisonReport { goal, total: cells.len(), passed, cells })
}
