//! Quality-diversity enemy generation.
//!
//! Enemies are nine-attribute stat-blocks ([`genotype`]) whose difficulty is
//! computed analytically ([`difficulty`]). A MAP-Elites search ([`evolution`])
//! keeps the enemy closest to a goal difficulty in each of the 42
//! movement x weapon cells, and [`experiment`] replicates many seeded runs and
//! aggregates per-cell statistics.

pub mod cli;
pub mod difficulty;
pub mod evolution;
pub mod experiment;
pub mod genotype;
pub mod rng;

pub use difficulty::{difficulty, fitness, max_cell_difficulty, DifficultyBreakdown, DifficultyGoal};
pub use evolution::{evolve, Archive, Elite, EvolutionConfig, EvolveError, RunResult};
pub use experiment::{run_batch, BatchConfig, BatchResult, CellStats, TimingStats};
pub use genotype::{random_enemy, BehaviorDescriptor, EnemyGenotype, MovementType, WeaponType};
