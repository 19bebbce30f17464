//! Enemy representation: the nine-attribute stat-block, its ranges, and the
//! mapping onto the (movement, weapon) archive grid.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// How an enemy moves while it is active. Ordinals index archive rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MovementType {
    None,
    Random,
    Random1D,
    Flee,
    Flee1D,
    Follow,
    Follow1D,
}

impl MovementType {
    pub const COUNT: usize = 7;
    pub const ALL: [MovementType; Self::COUNT] = [
        MovementType::None,
        MovementType::Random,
        MovementType::Random1D,
        MovementType::Flee,
        MovementType::Flee1D,
        MovementType::Follow,
        MovementType::Follow1D,
    ];

    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_ordinal(ordinal: usize) -> Option<Self> {
        Self::ALL.get(ordinal).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            MovementType::None => "None",
            MovementType::Random => "Random",
            MovementType::Random1D => "Random1D",
            MovementType::Flee => "Flee",
            MovementType::Flee1D => "Flee1D",
            MovementType::Follow => "Follow",
            MovementType::Follow1D => "Follow1D",
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.random_range(0..Self::COUNT)]
    }
}

/// What the enemy fights with. Ordinals index archive columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeaponType {
    Barehand,
    Sword,
    Bow,
    BombThrower,
    Shield,
    CureSpell,
}

impl WeaponType {
    pub const COUNT: usize = 6;
    pub const ALL: [WeaponType; Self::COUNT] = [
        WeaponType::Barehand,
        WeaponType::Sword,
        WeaponType::Bow,
        WeaponType::BombThrower,
        WeaponType::Shield,
        WeaponType::CureSpell,
    ];

    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_ordinal(ordinal: usize) -> Option<Self> {
        Self::ALL.get(ordinal).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            WeaponType::Barehand => "Barehand",
            WeaponType::Sword => "Sword",
            WeaponType::Bow => "Bow",
            WeaponType::BombThrower => "BombThrower",
            WeaponType::Shield => "Shield",
            WeaponType::CureSpell => "CureSpell",
        }
    }

    /// Column key used in CSV grids.
    pub fn column_key(self) -> &'static str {
        match self {
            WeaponType::Barehand => "barehand",
            WeaponType::Sword => "sword",
            WeaponType::Bow => "bow",
            WeaponType::BombThrower => "bomb_thrower",
            WeaponType::Shield => "shield",
            WeaponType::CureSpell => "cure_spell",
        }
    }

    pub fn class(self) -> EnemyClass {
        match self {
            WeaponType::Barehand | WeaponType::Sword | WeaponType::Shield => EnemyClass::Melee,
            WeaponType::Bow | WeaponType::BombThrower => EnemyClass::Ranged,
            WeaponType::CureSpell => EnemyClass::Healer,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.random_range(0..Self::COUNT)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name `{}`", self.0)
    }
}

impl std::error::Error for UnknownName {}

impl FromStr for MovementType {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s)).ok_or_else(|| UnknownName(s.to_string()))
    }
}

impl FromStr for WeaponType {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|w| w.name().eq_ignore_ascii_case(s) || w.column_key() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

impl fmt::Display for MovementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for WeaponType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Enemy class induced by the weapon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnemyClass {
    Melee,
    Ranged,
    Healer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Integer,
    Real,
    Nominal,
}

/// Which side of the fixed crossover point an attribute sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Behavior,
    Weapon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttributeSpec {
    pub name: &'static str,
    pub kind: AttributeKind,
    /// Inclusive bounds. Nominal attributes carry `0..=variants-1`.
    pub lower: f64,
    pub upper: f64,
    pub segment: Segment,
}

impl AttributeSpec {
    const fn new(name: &'static str, kind: AttributeKind, lower: f64, upper: f64, segment: Segment) -> Self {
        Self { name, kind, lower, upper, segment }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lower && value <= self.upper
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.lower, self.upper)
    }
}

use AttributeKind::{Integer, Nominal, Real};
use Segment::{Behavior, Weapon};

pub const HEALTH: AttributeSpec = AttributeSpec::new("health", Integer, 1.0, 5.0, Behavior);
pub const DAMAGE: AttributeSpec = AttributeSpec::new("damage", Integer, 1.0, 4.0, Behavior);
pub const ATTACK_SPEED: AttributeSpec = AttributeSpec::new("attack_speed", Real, 0.75, 4.0, Behavior);
pub const MOVEMENT_TYPE: AttributeSpec = AttributeSpec::new("movement_type", Nominal, 0.0, 6.0, Behavior);
pub const MOVEMENT_SPEED: AttributeSpec = AttributeSpec::new("movement_speed", Real, 0.8, 2.8, Behavior);
pub const ACTIVE_TIME: AttributeSpec = AttributeSpec::new("active_time", Real, 1.5, 10.0, Behavior);
pub const REST_TIME: AttributeSpec = AttributeSpec::new("rest_time", Real, 0.3, 1.5, Behavior);
pub const WEAPON_TYPE: AttributeSpec = AttributeSpec::new("weapon_type", Nominal, 0.0, 5.0, Weapon);
pub const PROJECTILE_SPEED: AttributeSpec = AttributeSpec::new("projectile_speed", Real, 1.0, 4.0, Weapon);

/// The genes in genotype order. The crossover point lies between
/// `RestTime` and `WeaponType`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gene {
    Health,
    Damage,
    AttackSpeed,
    MovementType,
    MovementSpeed,
    ActiveTime,
    RestTime,
    WeaponType,
    ProjectileSpeed,
}

impl Gene {
    pub const ALL: [Gene; 9] = [
        Gene::Health,
        Gene::Damage,
        Gene::AttackSpeed,
        Gene::MovementType,
        Gene::MovementSpeed,
        Gene::ActiveTime,
        Gene::RestTime,
        Gene::WeaponType,
        Gene::ProjectileSpeed,
    ];

    pub fn spec(self) -> &'static AttributeSpec {
        match self {
            Gene::Health => &HEALTH,
            Gene::Damage => &DAMAGE,
            Gene::AttackSpeed => &ATTACK_SPEED,
            Gene::MovementType => &MOVEMENT_TYPE,
            Gene::MovementSpeed => &MOVEMENT_SPEED,
            Gene::ActiveTime => &ACTIVE_TIME,
            Gene::RestTime => &REST_TIME,
            Gene::WeaponType => &WEAPON_TYPE,
            Gene::ProjectileSpeed => &PROJECTILE_SPEED,
        }
    }
}

/// The canonical attribute table, in genotype order.
pub fn attribute_specs() -> [&'static AttributeSpec; 9] {
    Gene::ALL.map(Gene::spec)
}

/// One enemy stat-block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnemyGenotype {
    pub health: u32,
    pub damage: u32,
    pub attack_speed: f64,
    pub movement_type: MovementType,
    pub movement_speed: f64,
    pub active_time: f64,
    pub rest_time: f64,
    pub weapon_type: WeaponType,
    /// Present for every weapon; only ranged enemies use it.
    pub projectile_speed: f64,
}

/// Archive coordinates of an enemy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BehaviorDescriptor {
    pub movement: MovementType,
    pub weapon: WeaponType,
}

impl BehaviorDescriptor {
    pub const CELLS: usize = MovementType::COUNT * WeaponType::COUNT;

    pub fn new(movement: MovementType, weapon: WeaponType) -> Self {
        Self { movement, weapon }
    }

    /// Row-major, movement-major cell index.
    pub fn index(self) -> usize {
        self.movement.ordinal() * WeaponType::COUNT + self.weapon.ordinal()
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index >= Self::CELLS {
            return None;
        }
        Some(Self {
            movement: MovementType::ALL[index / WeaponType::COUNT],
            weapon: WeaponType::ALL[index % WeaponType::COUNT],
        })
    }

    /// All 42 descriptors in cell-index order.
    pub fn all() -> impl Iterator<Item = BehaviorDescriptor> {
        (0..Self::CELLS).filter_map(Self::from_index)
    }
}

impl fmt::Display for BehaviorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.movement, self.weapon)
    }
}

fn uniform_int<R: Rng + ?Sized>(spec: &AttributeSpec, rng: &mut R) -> u32 {
    rng.random_range(spec.lower as u32..=spec.upper as u32)
}

fn uniform_real<R: Rng + ?Sized>(spec: &AttributeSpec, rng: &mut R) -> f64 {
    rng.random_range(spec.lower..=spec.upper)
}

/// Draws every attribute uniformly from its range or value list.
pub fn random_enemy<R: Rng + ?Sized>(rng: &mut R) -> EnemyGenotype {
    EnemyGenotype {
        health: uniform_int(&HEALTH, rng),
        damage: uniform_int(&DAMAGE, rng),
        attack_speed: uniform_real(&ATTACK_SPEED, rng),
        movement_type: MovementType::random(rng),
        movement_speed: uniform_real(&MOVEMENT_SPEED, rng),
        active_time: uniform_real(&ACTIVE_TIME, rng),
        rest_time: uniform_real(&REST_TIME, rng),
        weapon_type: WeaponType::random(rng),
        projectile_speed: uniform_real(&PROJECTILE_SPEED, rng),
    }
}

impl EnemyGenotype {
    pub fn descriptor(&self) -> BehaviorDescriptor {
        BehaviorDescriptor::new(self.movement_type, self.weapon_type)
    }

    pub fn class(&self) -> EnemyClass {
        self.weapon_type.class()
    }

    pub fn is_melee(&self) -> bool {
        self.class() == EnemyClass::Melee
    }

    pub fn is_ranged(&self) -> bool {
        self.class() == EnemyClass::Ranged
    }

    pub fn is_healer(&self) -> bool {
        self.class() == EnemyClass::Healer
    }

    pub fn movement(&self) -> MovementPredicates {
        MovementPredicates::of(self.movement_type)
    }

    /// Numeric value of a gene; nominal genes report their ordinal.
    pub fn gene(&self, gene: Gene) -> f64 {
        match gene {
            Gene::Health => f64::from(self.health),
            Gene::Damage => f64::from(self.damage),
            Gene::AttackSpeed => self.attack_speed,
            Gene::MovementType => self.movement_type.ordinal() as f64,
            Gene::MovementSpeed => self.movement_speed,
            Gene::ActiveTime => self.active_time,
            Gene::RestTime => self.rest_time,
            Gene::WeaponType => self.weapon_type.ordinal() as f64,
            Gene::ProjectileSpeed => self.projectile_speed,
        }
    }

    /// Sets a numeric gene. Integer genes are rounded to nearest.
    ///
    /// Panics on nominal genes.
    pub fn set_numeric(&mut self, gene: Gene, value: f64) {
        match gene {
            Gene::Health => self.health = value.round() as u32,
            Gene::Damage => self.damage = value.round() as u32,
            Gene::AttackSpeed => self.attack_speed = value,
            Gene::MovementSpeed => self.movement_speed = value,
            Gene::ActiveTime => self.active_time = value,
            Gene::RestTime => self.rest_time = value,
            Gene::ProjectileSpeed => self.projectile_speed = value,
            Gene::MovementType | Gene::WeaponType => {
                panic!("{:?} is nominal", gene)
            }
        }
    }

    /// Replaces one gene with a fresh uniform draw over its full range.
    pub fn redraw<R: Rng + ?Sized>(&mut self, gene: Gene, rng: &mut R) {
        match gene {
            Gene::Health => self.health = uniform_int(&HEALTH, rng),
            Gene::Damage => self.damage = uniform_int(&DAMAGE, rng),
            Gene::AttackSpeed => self.attack_speed = uniform_real(&ATTACK_SPEED, rng),
            Gene::MovementType => self.movement_type = MovementType::random(rng),
            Gene::MovementSpeed => self.movement_speed = uniform_real(&MOVEMENT_SPEED, rng),
            Gene::ActiveTime => self.active_time = uniform_real(&ACTIVE_TIME, rng),
            Gene::RestTime => self.rest_time = uniform_real(&REST_TIME, rng),
            Gene::WeaponType => self.weapon_type = WeaponType::random(rng),
            Gene::ProjectileSpeed => self.projectile_speed = uniform_real(&PROJECTILE_SPEED, rng),
        }
    }

    /// True when every numeric gene lies inside its closed range.
    pub fn is_valid(&self) -> bool {
        Gene::ALL.into_iter().all(|g| {
            let v = self.gene(g);
            v.is_finite() && g.spec().contains(v)
        })
    }

    /// Returns the name of the first out-of-range attribute, if any.
    pub fn validate(&self) -> Result<(), &'static str> {
        match Gene::ALL.into_iter().find(|&g| !(self.gene(g).is_finite() && g.spec().contains(self.gene(g)))) {
            Some(g) => Err(g.spec().name),
            None => Ok(()),
        }
    }
}

/// Movement predicates used by the gameplay factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MovementPredicates {
    pub is_follow: bool,
    pub is_follow1d: bool,
    pub is_flee: bool,
    pub is_flee1d: bool,
    pub is_any_flee: bool,
    pub is_any_random: bool,
    pub has_no_move: bool,
}

impl MovementPredicates {
    pub fn of(movement: MovementType) -> Self {
        use MovementType::*;
        Self {
            is_follow: movement == Follow,
            is_follow1d: movement == Follow1D,
            is_flee: movement == Flee,
            is_flee1d: movement == Flee1D,
            is_any_flee: matches!(movement, Flee | Flee1D),
            is_any_random: matches!(movement, Random | Random1D),
            has_no_move: movement == None,
        }
    }
}
