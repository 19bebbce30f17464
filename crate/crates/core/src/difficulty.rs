//! Analytic difficulty of an enemy and the distance-to-goal fitness.
//!
//! `total = gameplay * (health + movement + strength)`, where each factor is
//! a product of class-specific terms. Every factor is strictly positive for a
//! valid genotype.

use serde::{Deserialize, Serialize};

use crate::genotype::{
    BehaviorDescriptor, EnemyGenotype, MovementType, ACTIVE_TIME, ATTACK_SPEED, DAMAGE, HEALTH, MOVEMENT_SPEED,
    PROJECTILE_SPEED, REST_TIME,
};

/// How the healer-evasion term treats enemies that are not healers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HealerPenalty {
    /// Only healers that neither wander nor flee are halved.
    #[default]
    HealersOnly,
    /// Every enemy that is not an evasive healer is halved, including melee
    /// and ranged ones.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifficultyBreakdown {
    pub health_factor: f64,
    pub movement_factor: f64,
    pub strength_factor: f64,
    pub gameplay_factor: f64,
    pub total: f64,
}

/// Target difficulty handed to the generator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DifficultyGoal(f64);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("difficulty must be positive (got {0})")]
pub struct InvalidGoal(pub f64);

impl DifficultyGoal {
    pub const VERY_EASY: DifficultyGoal = DifficultyGoal(11.0);
    pub const EASY: DifficultyGoal = DifficultyGoal(13.0);
    pub const MEDIUM: DifficultyGoal = DifficultyGoal(15.0);
    pub const HARD: DifficultyGoal = DifficultyGoal(17.0);
    pub const VERY_HARD: DifficultyGoal = DifficultyGoal(19.0);

    pub const PRESETS: [(&'static str, DifficultyGoal); 5] = [
        ("very-easy", Self::VERY_EASY),
        ("easy", Self::EASY),
        ("medium", Self::MEDIUM),
        ("hard", Self::HARD),
        ("very-hard", Self::VERY_HARD),
    ];

    pub fn new(value: f64) -> Result<Self, InvalidGoal> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(InvalidGoal(value))
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        Self::PRESETS.iter().find(|(n, _)| *n == name).map(|&(_, g)| g)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for DifficultyGoal {
    type Error = InvalidGoal;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<DifficultyGoal> for f64 {
    fn from(goal: DifficultyGoal) -> f64 {
        goal.0
    }
}

impl std::fmt::Display for DifficultyGoal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn health_factor(e: &EnemyGenotype) -> f64 {
    2.0 * f64::from(e.health)
}

pub fn movement_factor(e: &EnemyGenotype) -> f64 {
    e.movement_speed + e.active_time / 3.0 + 1.0 / e.rest_time
}

pub fn strength_factor(e: &EnemyGenotype) -> f64 {
    let melee = if e.is_melee() { f64::from(e.damage) * e.movement_speed } else { 1.0 };
    let ranged = if e.is_ranged() { 3.0 * (e.attack_speed * e.projectile_speed) } else { 1.0 };
    // Healers restore one life point per cast, so only the cast rate matters.
    let healer = if e.is_healer() { 2.0 * e.attack_speed } else { 1.0 };
    melee * ranged * healer
}

/// The five gameplay terms, in order.
pub fn gameplay_terms(e: &EnemyGenotype, penalty: HealerPenalty) -> [f64; 5] {
    let mv = e.movement();
    let melee = e.is_melee();
    let ranged = e.is_ranged();
    let healer = e.is_healer();

    let g1 = if melee && mv.is_follow {
        1.25
    } else if melee && (mv.is_any_flee || mv.has_no_move) {
        0.5
    } else {
        1.0
    };
    let g2 = if ranged && mv.is_flee {
        1.25
    } else if ranged && mv.is_flee1d {
        1.15
    } else if ranged && mv.has_no_move {
        0.5
    } else {
        1.0
    };
    let g3 = if ranged && mv.is_follow { 0.5 / (2.0 * e.movement_speed) } else { 1.0 };
    let evasive = mv.is_any_random || mv.is_any_flee;
    let g4 = match penalty {
        HealerPenalty::HealersOnly if healer && !evasive => 0.5,
        HealerPenalty::HealersOnly => 1.0,
        HealerPenalty::Literal if healer && evasive => 1.0,
        HealerPenalty::Literal => 0.5,
    };
    let g5 = if healer { 1.15 * e.movement_speed } else { 1.0 };
    [g1, g2, g3, g4, g5]
}

pub fn gameplay_factor(e: &EnemyGenotype) -> f64 {
    gameplay_factor_with(e, HealerPenalty::default())
}

pub fn gameplay_factor_with(e: &EnemyGenotype, penalty: HealerPenalty) -> f64 {
    gameplay_terms(e, penalty).iter().product()
}

pub fn difficulty(e: &EnemyGenotype) -> DifficultyBreakdown {
    difficulty_with(e, HealerPenalty::default())
}

pub fn difficulty_with(e: &EnemyGenotype, penalty: HealerPenalty) -> DifficultyBreakdown {
    let health_factor = health_factor(e);
    let movement_factor = movement_factor(e);
    let strength_factor = strength_factor(e);
    let gameplay_factor = gameplay_factor_with(e, penalty);
    DifficultyBreakdown {
        health_factor,
        movement_factor,
        strength_factor,
        gameplay_factor,
        total: gameplay_factor * (health_factor + movement_factor + strength_factor),
    }
}

/// Absolute distance between the goal and the enemy's difficulty. Lower is better.
pub fn fitness(e: &EnemyGenotype, goal: DifficultyGoal) -> f64 {
    fitness_with(e, goal, HealerPenalty::default())
}

pub fn fitness_with(e: &EnemyGenotype, goal: DifficultyGoal, penalty: HealerPenalty) -> f64 {
    (goal.value() - difficulty_with(e, penalty).total).abs()
}

/// Samples used to maximize over movement speed when the gameplay term
/// decreases with it.
pub const CEILING_GRID: usize = 10_000;

/// Highest difficulty any valid enemy in the given cell can reach.
pub fn max_cell_difficulty(desc: BehaviorDescriptor) -> f64 {
    max_cell_difficulty_with(desc, HealerPenalty::default())
}

pub fn max_cell_difficulty_with(desc: BehaviorDescriptor, penalty: HealerPenalty) -> f64 {
    // Everything except movement speed is monotone non-decreasing in the
    // direction of its bound below, whatever the class.
    let at_speed = |movement_speed: f64| EnemyGenotype {
        health: HEALTH.upper as u32,
        damage: DAMAGE.upper as u32,
        attack_speed: ATTACK_SPEED.upper,
        movement_type: desc.movement,
        movement_speed,
        active_time: ACTIVE_TIME.upper,
        rest_time: REST_TIME.lower,
        weapon_type: desc.weapon,
        projectile_speed: PROJECTILE_SPEED.upper,
    };

    let ranged_follow =
        desc.weapon.class() == crate::genotype::EnemyClass::Ranged && desc.movement == MovementType::Follow;
    if !ranged_follow {
        return difficulty_with(&at_speed(MOVEMENT_SPEED.upper), penalty).total;
    }

    let step = (MOVEMENT_SPEED.upper - MOVEMENT_SPEED.lower) / (CEILING_GRID - 1) as f64;
    (0..CEILING_GRID)
        .map(|i| {
            let speed =
                if i == CEILING_GRID - 1 { MOVEMENT_SPEED.upper } else { MOVEMENT_SPEED.lower + step * i as f64 };
            difficulty_with(&at_speed(speed), penalty).total
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotype::fixtures::enemy;
    use crate::genotype::{random_enemy, MovementType::*, WeaponType::*};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn health_factor_values() {
        let mut e = enemy(None, Sword);
        for (h, want) in [(1, 2.0), (5, 10.0), (3, 6.0)] {
            e.health = h;
            assert_eq!(health_factor(&e), want);
        }
    }

    #[test]
    fn movement_factor_values() {
        let mut e = enemy(None, Sword);
        assert_eq!(movement_factor(&e), 3.0);

        (e.movement_speed, e.active_time, e.rest_time) = (0.8, 1.5, 1.5);
        assert!(close(movement_factor(&e), 1.9667, 1e-4));

        (e.movement_speed, e.active_time, e.rest_time) = (2.8, 10.0, 0.3);
        assert!(close(movement_factor(&e), 9.4667, 1e-4));
    }

    #[test]
    fn strength_factor_values() {
        let melee = enemy(Random, Sword);
        assert_eq!(strength_factor(&melee), 2.0);

        let mut ranged = enemy(Random, Bow);
        (ranged.attack_speed, ranged.projectile_speed) = (2.0, 2.0);
        assert_eq!(strength_factor(&ranged), 12.0);

        let healer = enemy(Random, CureSpell);
        assert_eq!(strength_factor(&healer), 2.0);
    }

    #[test]
    fn gameplay_factor_values() {
        assert_eq!(gameplay_factor(&enemy(Follow, Barehand)), 1.25);
        assert_eq!(gameplay_factor(&enemy(Follow, Bow)), 0.25);

        let mut healer = enemy(Follow, CureSpell);
        healer.movement_speed = 2.0;
        assert!(close(gameplay_factor(&healer), 1.15, 1e-12));
    }

    #[test]
    fn gameplay_branch_table() {
        assert_eq!(gameplay_factor(&enemy(Flee1D, Shield)), 0.5);
        assert_eq!(gameplay_factor(&enemy(None, Barehand)), 0.5);
        assert_eq!(gameplay_factor(&enemy(Follow1D, Sword)), 1.0);
        assert_eq!(gameplay_factor(&enemy(Flee, Bow)), 1.25);
        assert_eq!(gameplay_factor(&enemy(Flee1D, BombThrower)), 1.15);
        assert_eq!(gameplay_factor(&enemy(None, Bow)), 0.5);
        // Follow1D rangers are exempt from the speed penalty.
        assert_eq!(gameplay_factor(&enemy(Follow1D, Bow)), 1.0);
        assert!(close(gameplay_factor(&enemy(Random1D, CureSpell)), 1.15, 1e-12));
        assert!(close(gameplay_factor(&enemy(None, CureSpell)), 0.575, 1e-12));
    }

    #[test]
    fn class_isolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5_000 {
            let e = random_enemy(&mut rng);
            let [g1, g2, g3, g4, g5] = gameplay_terms(&e, HealerPenalty::HealersOnly);
            if e.is_melee() {
                assert_eq!((g2, g3, g4, g5), (1.0, 1.0, 1.0, 1.0));
            } else if e.is_ranged() {
                assert_eq!((g1, g4, g5), (1.0, 1.0, 1.0));
            } else {
                assert_eq!((g1, g2, g3), (1.0, 1.0, 1.0));
            }
        }
    }

    #[test]
    fn literal_penalty_halves_non_healers() {
        let e = enemy(Random, Sword);
        assert_eq!(gameplay_factor_with(&e, HealerPenalty::Literal), 0.5);
        assert_eq!(gameplay_factor_with(&e, HealerPenalty::HealersOnly), 1.0);
        let h = enemy(Flee, CureSpell);
        assert_eq!(
            gameplay_factor_with(&h, HealerPenalty::Literal),
            gameplay_factor_with(&h, HealerPenalty::HealersOnly)
        );
    }

    #[test]
    fn difficulty_spot_values() {
        let a = enemy(Follow, Sword);
        let d = difficulty(&a);
        assert_eq!(d.total, 13.75);
        assert_eq!(d.total, d.gameplay_factor * (d.health_factor + d.movement_factor + d.strength_factor));

        let b = EnemyGenotype {
            health: 1,
            damage: 1,
            attack_speed: 2.0,
            movement_type: None,
            movement_speed: 0.8,
            active_time: 1.5,
            rest_time: 1.5,
            weapon_type: Bow,
            projectile_speed: 2.0,
        };
        assert!(close(difficulty(&b).total, 7.9833, 1e-3));

        let mut c = enemy(Random, CureSpell);
        c.health = 2;
        assert!(close(difficulty(&c).total, 10.35, 1e-3));
    }

    #[test]
    fn fitness_is_absolute_distance() {
        let e = enemy(Follow, Sword);
        assert_eq!(fitness(&e, DifficultyGoal::new(13.75).unwrap()), 0.0);
        assert!(close(fitness(&e, DifficultyGoal::VERY_EASY), 2.75, 1e-12));
    }

    #[test]
    fn goal_validation() {
        assert!(DifficultyGoal::new(-3.0).is_err());
        assert!(DifficultyGoal::new(0.0).is_err());
        assert!(DifficultyGoal::new(f64::NAN).is_err());
        assert_eq!(DifficultyGoal::preset("medium"), Some(DifficultyGoal::MEDIUM));
        assert_eq!(DifficultyGoal::preset("nightmare"), Option::None);
        let err = DifficultyGoal::new(-3.0).unwrap_err().to_string();
        assert!(err.contains("difficulty must be positive"));
    }

    #[test]
    fn ceiling_examples() {
        let flee = max_cell_difficulty(BehaviorDescriptor::new(Flee, Barehand));
        assert!(close(flee, 15.3333, 1e-3), "{flee}");
        let none = max_cell_difficulty(BehaviorDescriptor::new(None, Sword));
        assert!(close(none, 15.3333, 1e-3), "{none}");
        let random = max_cell_difficulty(BehaviorDescriptor::new(Random, Barehand));
        assert!(close(random, 30.6667, 1e-3), "{random}");
    }

    #[test]
    fn ceiling_bounds_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ceilings: Vec<f64> = BehaviorDescriptor::all().map(max_cell_difficulty).collect();
        for _ in 0..50_000 {
            let e = random_enemy(&mut rng);
            let d = difficulty(&e).total;
            assert!(d <= ceilings[e.descriptor().index()] + 1e-9, "{e:?}");
        }
    }

    #[test]
    fn breakdown_json_keys() {
        let v = serde_json::to_value(difficulty(&enemy(Follow, Sword))).unwrap();
        for key in ["health_factor", "movement_factor", "strength_factor", "gameplay_factor", "total"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
