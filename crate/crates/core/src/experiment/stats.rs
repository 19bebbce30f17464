use serde::{Deserialize, Deserializer, Serialize};

use crate::difficulty::DifficultyGoal;
use crate::genotype::{MovementType, WeaponType};

/// Summary of one sample: mean, sample standard deviation, min and max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// Two-pass statistics over the values sorted ascending, so the result
    /// does not depend on input order. Sample std uses `n - 1`; a single value
    /// has std 0. Returns `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let ss: f64 = sorted.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        // Clamp away rounding so that min <= mean <= max holds exactly.
        let (min, max) = (sorted[0], sorted[n - 1]);
        Some(Self { n, mean: mean.clamp(min, max), std, min, max })
    }
}

fn nan_if_null<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Per-cell fitness statistics across the runs of one goal. Cells that were
/// empty in some runs have a smaller `n`; cells empty in every run have
/// `n = 0` and NaN statistics (serialized as `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub movement: MovementType,
    pub weapon: WeaponType,
    #[serde(deserialize_with = "nan_if_null")]
    pub mean: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub std: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub min: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub max: f64,
    pub n: usize,
}

impl CellStats {
    pub fn from_values(movement: MovementType, weapon: WeaponType, values: &[f64]) -> Self {
        match Summary::of(values) {
            Some(s) => Self { movement, weapon, mean: s.mean, std: s.std, min: s.min, max: s.max, n: s.n },
            None => Self { movement, weapon, mean: f64::NAN, std: f64::NAN, min: f64::NAN, max: f64::NAN, n: 0 },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Wall-time statistics, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub goal: DifficultyGoal,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std: f64,
}

impl TimingStats {
    pub fn from_seconds(goal: DifficultyGoal, seconds: &[f64]) -> Option<Self> {
        Summary::of(seconds).map(|s| Self { goal, mean: s.mean, min: s.min, max: s.max, std: s.std })
    }
}
