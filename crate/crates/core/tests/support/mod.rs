//! Straight-line difficulty used as an oracle by the integration tests.

#![allow(dead_code)]

use enemyforge::{EnemyGenotype, MovementType, WeaponType};

pub fn oracle_difficulty(e: &EnemyGenotype) -> f64 {
    let melee = matches!(e.weapon_type, WeaponType::Barehand | WeaponType::Sword | WeaponType::Shield);
    let ranged = matches!(e.weapon_type, WeaponType::Bow | WeaponType::BombThrower);
    let healer = e.weapon_type == WeaponType::CureSpell;
    let m = e.movement_type;

    let health = 2.0 * e.health as f64;
    let movement = e.movement_speed + e.active_time / 3.0 + 1.0 / e.rest_time;

    let s1 = if melee { e.damage as f64 * e.movement_speed } else { 1.0 };
    let s2 = if ranged { 3.0 * e.attack_speed * e.projectile_speed } else { 1.0 };
    let s3 = if healer { 2.0 * e.attack_speed } else { 1.0 };

    let g1 = if melee && m == MovementType::Follow {
        1.25
    } else if melee && matches!(m, MovementType::Flee | MovementType::Flee1D | MovementType::None) {
        0.5
    } else {
        1.0
    };
    let g2 = if ranged && m == MovementType::Flee {
        1.25
    } else if ranged && m == MovementType::Flee1D {
        1.15
    } else if ranged && m == MovementType::None {
        0.5
    } else {
        1.0
    };
    let g3 = if ranged && m == MovementType::Follow { 0.5 / (2.0 * e.movement_speed) } else { 1.0 };
    let g4 = if healer
        && !matches!(m, MovementType::Random | MovementType::Random1D | MovementType::Flee | MovementType::Flee1D)
    {
        0.5
    } else {
        1.0
    };
    let g5 = if healer { 1.15 * e.movement_speed } else { 1.0 };

    g1 * g2 * g3 * g4 * g5 * (health + movement + s1 * s2 * s3)
}

/// Whether every attribute lies inside its documented range.
pub fn in_range(e: &EnemyGenotype) -> bool {
    (1..=5).contains(&e.health)
        && (1..=4).contains(&e.damage)
        && (0.75..=4.0).contains(&e.attack_speed)
        && (0.8..=2.8).contains(&e.movement_speed)
        && (1.5..=10.0).contains(&e.active_time)
        && (0.3..=1.5).contains(&e.rest_time)
        && (1.0..=4.0).contains(&e.projectile_speed)
}
