use serde::{Deserialize, Serialize};

use crate::difficulty::{fitness_with, DifficultyGoal, HealerPenalty};
use crate::genotype::{BehaviorDescriptor, EnemyGenotype, MovementType, WeaponType};

/// Best-so-far enemy of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Elite {
    #[serde(flatten)]
    pub genotype: EnemyGenotype,
    pub fitness: f64,
    pub generation_found: u32,
}

impl Elite {
    pub fn descriptor(&self) -> BehaviorDescriptor {
        self.genotype.descriptor()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    Replaced,
    Rejected,
}

/// 7x6 MAP-Elites grid, one optional elite per (movement, weapon) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Archive {
    cells: [Option<Elite>; BehaviorDescriptor::CELLS],
    goal: DifficultyGoal,
    penalty: HealerPenalty,
}

impl Archive {
    pub fn new(goal: DifficultyGoal) -> Self {
        Self::with_penalty(goal, HealerPenalty::default())
    }

    pub fn with_penalty(goal: DifficultyGoal, penalty: HealerPenalty) -> Self {
        Self { cells: [None; BehaviorDescriptor::CELLS], goal, penalty }
    }

    pub fn goal(&self) -> DifficultyGoal {
        self.goal
    }

    pub fn penalty(&self) -> HealerPenalty {
        self.penalty
    }

    pub fn fitness_of(&self, e: &EnemyGenotype) -> f64 {
        fitness_with(e, self.goal, self.penalty)
    }

    /// Elitist insertion. Ties keep the incumbent.
    pub fn insert(&mut self, e: EnemyGenotype, generation: u32) -> InsertOutcome {
        let fitness = self.fitness_of(&e);
        let slot = &mut self.cells[e.descriptor().index()];
        let outcome = match slot {
            None => InsertOutcome::Inserted,
            Some(incumbent) if fitness < incumbent.fitness => InsertOutcome::Replaced,
            Some(_) => return InsertOutcome::Rejected,
        };
        *slot = Some(Elite { genotype: e, fitness, generation_found: generation });
        outcome
    }

    pub fn get(&self, desc: BehaviorDescriptor) -> Option<&Elite> {
        self.cells[desc.index()].as_ref()
    }

    pub fn cell(&self, movement: MovementType, weapon: WeaponType) -> Option<&Elite> {
        self.get(BehaviorDescriptor::new(movement, weapon))
    }

    /// All 42 cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (BehaviorDescriptor, Option<&Elite>)> {
        BehaviorDescriptor::all().zip(self.cells.iter().map(Option::as_ref))
    }

    pub fn elites(&self) -> impl Iterator<Item = &Elite> {
        self.cells.iter().flatten()
    }

    /// Indices of occupied cells, ascending.
    pub(crate) fn occupied_indices(&self) -> Vec<usize> {
        self.cells.iter().enumerate().filter_map(|(i, c)| c.as_ref().map(|_| i)).collect()
    }

    pub(crate) fn by_index(&self, index: usize) -> Option<&Elite> {
        self.cells[index].as_ref()
    }

    /// Writes an elite with an arbitrary fitness, bypassing elitism.
    #[cfg(test)]
    pub(crate) fn place(&mut self, genotype: EnemyGenotype, fitness: f64) {
        self.cells[genotype.descriptor().index()] = Some(Elite { genotype, fitness, generation_found: 0 });
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Sum of elite fitness values; lower is better.
    pub fn qd_score(&self) -> f64 {
        self.elites().map(|e| e.fitness).sum()
    }

    /// Per-cell fitness, `None` where empty.
    pub fn fitness_grid(&self) -> [Option<f64>; BehaviorDescriptor::CELLS] {
        self.cells.map(|c| c.map(|e| e.fitness))
    }

    /// JSON export. Elites whose fitness exceeds `threshold` are reported as
    /// unoccupied and flagged as filtered.
    pub fn export(&self, seed: u64, threshold: f64) -> ArchiveExport {
        let cells = self
            .cells()
            .map(|(desc, elite)| {
                let filtered = elite.is_some_and(|e| e.fitness > threshold);
                let elite = elite.filter(|_| !filtered).copied();
                ExportedCell {
                    movement: desc.movement,
                    weapon: desc.weapon,
                    occupied: elite.is_some(),
                    filtered,
                    elite,
                }
            })
            .collect();
        ArchiveExport {
            goal: self.goal.value(),
            seed,
            threshold: threshold.is_finite().then_some(threshold),
            cells,
            config: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedCell {
    pub movement: MovementType,
    pub weapon: WeaponType,
    pub occupied: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub filtered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elite: Option<Elite>,
}

/// Serialized archive: goal, seed, and the 42 cells in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveExport {
    pub goal: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub cells: Vec<ExportedCell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<super::EvolutionConfig>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotype::fixtures::enemy;
    use crate::genotype::{random_enemy, MovementType::*, WeaponType::*};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn goal(v: f64) -> DifficultyGoal {
        DifficultyGoal::new(v).unwrap()
    }

    #[test]
    fn empty_archive_telemetry() {
        let a = Archive::new(DifficultyGoal::MEDIUM);
        assert_eq!(a.occupied_count(), 0);
        assert_eq!(a.qd_score(), 0.0);
    }

    #[test]
    fn insert_outcomes() {
        // enemy(Follow, Sword) has difficulty 13.75.
        let mut a = Archive::new(goal(13.45));
        let e = enemy(Follow, Sword);
        assert_eq!(a.insert(e, 0), InsertOutcome::Inserted);
        assert!((a.qd_score() - 0.3).abs() < 1e-12);
        assert_eq!(a.occupied_count(), 1);

        // Same fitness: incumbent stays.
        let mut twin = e;
        twin.health = 3;
        assert_eq!(a.insert(twin, 5), InsertOutcome::Rejected);
        assert_eq!(a.cell(Follow, Sword).unwrap().generation_found, 0);

        // health 4 -> 16.25, distance 2.8
        let mut worse = e;
        worse.health = 4;
        assert_eq!(a.insert(worse, 1), InsertOutcome::Rejected);

        // A better one replaces.
        let mut better = e;
        better.active_time = 2.1; // movement 2.7, total 13.375
        assert_eq!(a.insert(better, 2), InsertOutcome::Replaced);
        assert!(a.cell(Follow, Sword).unwrap().fitness < 0.3);
    }

    #[test]
    fn replaces_strictly_better_incumbent() {
        let mut a = Archive::new(goal(13.75));
        let mut far = enemy(Follow, Sword);
        far.health = 5; // 18.75
        a.insert(far, 0);
        let incumbent = a.cell(Follow, Sword).unwrap().fitness;
        assert!(incumbent > 0.0);
        assert_eq!(a.insert(enemy(Follow, Sword), 1), InsertOutcome::Replaced);
        assert_eq!(a.cell(Follow, Sword).unwrap().fitness, 0.0);
    }

    #[test]
    fn descriptor_consistency_and_monotone_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut a = Archive::new(DifficultyGoal::EASY);
        let mut last = a.fitness_grid();
        let mut last_count = 0;
        for i in 0..5_000 {
            a.insert(random_enemy(&mut rng), i);
            let now = a.fitness_grid();
            for (before, after) in last.iter().zip(&now) {
                if let Some(b) = before {
                    assert!(after.unwrap() <= *b);
                }
            }
            assert!(a.occupied_count() >= last_count && a.occupied_count() <= 42);
            last_count = a.occupied_count();
            last = now;
        }
        for (desc, elite) in a.cells() {
            if let Some(e) = elite {
                assert_eq!(e.descriptor(), desc);
                assert_eq!(e.fitness, a.fitness_of(&e.genotype));
            }
        }
    }

    #[test]
    fn export_shape_and_threshold() {
        let mut a = Archive::new(goal(13.75));
        a.insert(enemy(Follow, Sword), 3);
        let mut off = enemy(Random, Bow);
        off.health = 5;
        a.insert(off, 1);

        let all = a.export(7, f64::INFINITY);
        assert_eq!(all.cells.len(), 42);
        assert_eq!(all.cells.iter().filter(|c| c.occupied).count(), 2);
        assert_eq!(all.cells[0].movement, None);
        assert_eq!(all.cells[1].weapon, Sword);
        assert_eq!(all.cells[6].movement, Random);
        let v = serde_json::to_value(&all).unwrap();
        assert_eq!(v["goal"], 13.75);
        assert_eq!(v["seed"], 7);
        let fs = &v["cells"][BehaviorDescriptor::new(Follow, Sword).index()];
        assert_eq!(fs["occupied"], true);
        assert_eq!(fs["elite"]["fitness"], 0.0);
        assert_eq!(fs["elite"]["generation_found"], 3);
        assert_eq!(fs["elite"]["movement_type"], "Follow");
        assert!(v["cells"][0].get("elite").is_none());

        let strict = a.export(7, 0.5);
        let rb = &strict.cells[BehaviorDescriptor::new(Random, Bow).index()];
        assert!(rb.filtered && !rb.occupied && rb.elite.is_none());

        let back: ArchiveExport = serde_json::from_value(v).unwrap();
        assert_eq!(back, all);
    }
}
