//! MAP-Elites search over the movement x weapon grid.
//!
//! A run seeds the archive with random enemies until enough cells are filled,
//! then for a fixed number of generations breeds an intermediate population
//! from tournament-selected elites and tries to insert every offspring.

mod archive;
mod operators;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use archive::{Archive, ArchiveExport, Elite, ExportedCell, InsertOutcome};
pub use operators::{crossover, mutate, tournament_select};

use crate::difficulty::{DifficultyGoal, HealerPenalty};
use crate::genotype::{random_enemy, BehaviorDescriptor};
use crate::rng::{run_rng, RunRng};

/// Attempts at drawing a second parent distinct from the first before
/// accepting a duplicate.
const MAX_PARENT_RESELECTS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolveError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("seeding stopped after {attempts} draws with {occupied} of {requested} cells filled")]
    SeedExhausted { attempts: usize, occupied: usize, requested: usize },
    #[error("archive has no occupied cells")]
    EmptyArchive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub goal: DifficultyGoal,
    pub generations: u32,
    /// Occupied cells required before evolution starts.
    pub initial_population: usize,
    pub intermediate_population: usize,
    pub mutation_rate: f64,
    pub gene_mutation_rate: f64,
    pub tournament_size: usize,
    pub blx_alpha: f64,
    pub seed: u64,
    pub max_seed_attempts: usize,
    #[serde(default)]
    pub healer_penalty: HealerPenalty,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            goal: DifficultyGoal::MEDIUM,
            generations: 500,
            initial_population: 35,
            intermediate_population: 100,
            mutation_rate: 0.20,
            gene_mutation_rate: 0.30,
            tournament_size: 2,
            blx_alpha: 0.5,
            seed: 0,
            max_seed_attempts: 10_000,
            healer_penalty: HealerPenalty::default(),
        }
    }
}

impl EvolutionConfig {
    pub fn with_goal(goal: DifficultyGoal) -> Self {
        Self { goal, ..Self::default() }
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), EvolveError> {
        let invalid = |msg: String| Err(EvolveError::ConfigInvalid(msg));
        let rate = |r: f64| (0.0..=1.0).contains(&r);
        if self.generations == 0 {
            return invalid("generations must be positive".into());
        }
        if self.initial_population == 0 || self.intermediate_population == 0 {
            return invalid("population sizes must be positive".into());
        }
        if self.initial_population > BehaviorDescriptor::CELLS {
            return invalid(format!(
                "initial_population {} exceeds the {} archive cells",
                self.initial_population,
                BehaviorDescriptor::CELLS
            ));
        }
        if !rate(self.mutation_rate) {
            return invalid(format!("mutation_rate {} not in [0, 1]", self.mutation_rate));
        }
        if !rate(self.gene_mutation_rate) {
            return invalid(format!("gene_mutation_rate {} not in [0, 1]", self.gene_mutation_rate));
        }
        if self.tournament_size < 2 {
            return invalid("tournament_size must be at least 2".into());
        }
        if !(self.blx_alpha >= 0.0 && self.blx_alpha.is_finite()) {
            return invalid(format!("blx_alpha {} must be non-negative", self.blx_alpha));
        }
        if self.max_seed_attempts == 0 {
            return invalid("max_seed_attempts must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub archive: Archive,
    pub wall_time: Duration,
    /// Fitness evaluations: seeding draws plus every offspring.
    pub evaluations: u64,
    pub seed_draws: usize,
    pub seed: u64,
    pub config: EvolutionConfig,
}

impl RunResult {
    pub fn export(&self, threshold: f64) -> ArchiveExport {
        let mut out = self.archive.export(self.seed, threshold);
        out.config = Some(self.config.clone());
        out
    }
}

/// Fills the archive with random enemies until `initial_population` cells are
/// occupied. Returns the archive and the number of draws.
pub fn seed_archive(config: &EvolutionConfig, rng: &mut RunRng) -> Result<(Archive, usize), EvolveError> {
    let mut archive = Archive::with_penalty(config.goal, config.healer_penalty);
    let mut draws = 0;
    while archive.occupied_count() < config.initial_population {
        if draws == config.max_seed_attempts {
            return Err(EvolveError::SeedExhausted {
                attempts: draws,
                occupied: archive.occupied_count(),
                requested: config.initial_population,
            });
        }
        archive.insert(random_enemy(rng), 0);
        draws += 1;
    }
    Ok((archive, draws))
}

pub fn evolve(config: &EvolutionConfig) -> Result<RunResult, EvolveError> {
    evolve_observed(config, |_, _| {})
}

/// Like [`evolve`], calling `observe(generation, archive)` after the seeding
/// phase (generation 0) and after each generation's insertions.
pub fn evolve_observed<F>(config: &EvolutionConfig, mut observe: F) -> Result<RunResult, EvolveError>
where
    F: FnMut(u32, &Archive),
{
    config.validate()?;
    let start = Instant::now();
    let mut rng = run_rng(config.seed);

    let (mut archive, seed_draws) = seed_archive(config, &mut rng)?;
    observe(0, &archive);

    let mut offspring = Vec::with_capacity(config.intermediate_population + 1);
    for generation in 1..=config.generations {
        offspring.clear();
        while offspring.len() < config.intermediate_population {
            let (a, b) = select_parents(&archive, config.tournament_size, &mut rng)?;
            let (c1, c2) = crossover(&a.genotype, &b.genotype, config.blx_alpha, &mut rng);
            offspring.push(mutate(&c1, config.mutation_rate, config.gene_mutation_rate, &mut rng));
            offspring.push(mutate(&c2, config.mutation_rate, config.gene_mutation_rate, &mut rng));
        }
        offspring.truncate(config.intermediate_population);
        for child in offspring.drain(..) {
            archive.insert(child, generation);
        }
        observe(generation, &archive);
    }

    let evaluations = seed_draws as u64 + u64::from(config.generations) * config.intermediate_population as u64;
    Ok(RunResult {
        archive,
        wall_time: start.elapsed(),
        evaluations,
        seed_draws,
        seed: config.seed,
        config: config.clone(),
    })
}

fn select_parents<'a>(archive: &'a Archive, k: usize, rng: &mut RunRng) -> Result<(&'a Elite, &'a Elite), EvolveError> {
    let first = operators::tournament_index(archive, k, rng)?;
    let mut second = operators::tournament_index(archive, k, rng)?;
    if archive.occupied_count() >= 2 {
        let mut tries = 1;
        while second == first && tries < MAX_PARENT_RESELECTS {
            second = operators::tournament_index(archive, k, rng)?;
            tries += 1;
        }
    }
    let get = |i| archive.by_index(i).expect("selected cells are occupied");
    Ok((get(first), get(second)))
}
