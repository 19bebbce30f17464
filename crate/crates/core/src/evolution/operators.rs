use rand::seq::index;
use rand::Rng;

use super::archive::{Archive, Elite};
use super::EvolveError;
use crate::genotype::{AttributeKind, EnemyGenotype, Gene, Segment};

/// Best of `k` occupied cells drawn uniformly, without replacement when at
/// least `k` cells are occupied. Ties go to the lower cell index, i.e. the
/// lower (movement, weapon) ordinal pair.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    archive: &'a Archive,
    k: usize,
    rng: &mut R,
) -> Result<&'a Elite, EvolveError> {
    tournament_index(archive, k, rng).map(|i| archive.by_index(i).expect("occupied"))
}

pub(crate) fn tournament_index<R: Rng + ?Sized>(
    archive: &Archive,
    k: usize,
    rng: &mut R,
) -> Result<usize, EvolveError> {
    let occupied = archive.occupied_indices();
    if occupied.is_empty() {
        return Err(EvolveError::EmptyArchive);
    }
    let better = |a: usize, b: usize| -> usize {
        let fa = archive.by_index(a).expect("occupied").fitness;
        let fb = archive.by_index(b).expect("occupied").fitness;
        match fa.total_cmp(&fb).then(a.cmp(&b)) {
            std::cmp::Ordering::Greater => b,
            _ => a,
        }
    };
    let winner = if occupied.len() >= k {
        index::sample(rng, occupied.len(), k).into_iter().map(|i| occupied[i]).reduce(better)
    } else {
        (0..k).map(|_| occupied[rng.random_range(0..occupied.len())]).reduce(better)
    };
    Ok(winner.expect("k >= 1"))
}

/// Draws a child gene from the parents' interval widened by `alpha` times its
/// width, then clamps it to the attribute range. Draws past a bound land on it.
fn blend<R: Rng + ?Sized>(gene: Gene, a: f64, b: f64, alpha: f64, rng: &mut R) -> f64 {
    let spec = gene.spec();
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    let spread = q - p;
    if spread == 0.0 {
        return p;
    }
    let value = rng.random_range(p - alpha * spread..=q + alpha * spread);
    match spec.kind {
        AttributeKind::Integer => spec.clamp(value.round()),
        _ => spec.clamp(value),
    }
}

/// Fixed single-point crossover at the behavior/weapon boundary followed by
/// BLX-alpha on every numeric gene.
pub fn crossover<R: Rng + ?Sized>(
    a: &EnemyGenotype,
    b: &EnemyGenotype,
    alpha: f64,
    rng: &mut R,
) -> (EnemyGenotype, EnemyGenotype) {
    let mut first = *a;
    let mut second = *b;
    for gene in Gene::ALL {
        if gene.spec().segment == Segment::Weapon {
            swap_gene(&mut first, &mut second, gene);
        }
    }
    for gene in Gene::ALL {
        if gene.spec().kind == AttributeKind::Nominal {
            continue;
        }
        let (x, y) = (a.gene(gene), b.gene(gene));
        first.set_numeric(gene, blend(gene, x, y, alpha, rng));
        second.set_numeric(gene, blend(gene, x, y, alpha, rng));
    }
    (first, second)
}

fn swap_gene(x: &mut EnemyGenotype, y: &mut EnemyGenotype, gene: Gene) {
    match gene {
        Gene::WeaponType => std::mem::swap(&mut x.weapon_type, &mut y.weapon_type),
        Gene::MovementType => std::mem::swap(&mut x.movement_type, &mut y.movement_type),
        _ => {
            let (vx, vy) = (x.gene(gene), y.gene(gene));
            x.set_numeric(gene, vy);
            y.set_numeric(gene, vx);
        }
    }
}

/// Multi-gene mutation: with probability `mutation_rate` the enemy mutates,
/// and then each gene is redrawn over its full range with probability
/// `gene_mutation_rate`.
pub fn mutate<R: Rng + ?Sized>(
    e: &EnemyGenotype,
    mutation_rate: f64,
    gene_mutation_rate: f64,
    rng: &mut R,
) -> EnemyGenotype {
    let mut out = *e;
    if rng.random::<f64>() >= mutation_rate {
        return out;
    }
    for gene in Gene::ALL {
        if rng.random::<f64>() < gene_mutation_rate {
            out.redraw(gene, rng);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::difficulty::DifficultyGoal;
    use crate::genotype::fixtures::enemy;
    use crate::genotype::{random_enemy, BehaviorDescriptor, MovementType, WeaponType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn archive_with(fitness: &[(MovementType, WeaponType, f64)]) -> Archive {
        let mut a = Archive::new(DifficultyGoal::MEDIUM);
        for &(m, w, f) in fitness {
            a.place(enemy(m, w), f);
        }
        a
    }

    #[test]
    fn tournament_prefers_lower_fitness() {
        let a = archive_with(&[
            (MovementType::Random, WeaponType::Sword, 0.7),
            (MovementType::Flee, WeaponType::Shield, 0.3),
        ]);
        for s in 0..50 {
            let e = tournament_select(&a, 2, &mut rng(s)).unwrap();
            assert_eq!(e.fitness, 0.3);
        }
    }

    #[test]
    fn tournament_single_cell() {
        let a = archive_with(&[(MovementType::Follow1D, WeaponType::Bow, 0.9)]);
        let e = tournament_select(&a, 2, &mut rng(1)).unwrap();
        assert_eq!(e.descriptor(), BehaviorDescriptor::new(MovementType::Follow1D, WeaponType::Bow));
    }

    #[test]
    fn tournament_tie_breaks_on_ordinals() {
        let a =
            archive_with(&[(MovementType::Follow, WeaponType::Sword, 0.5), (MovementType::Flee, WeaponType::Bow, 0.5)]);
        for s in 0..20 {
            let e = tournament_select(&a, 2, &mut rng(s)).unwrap();
            assert_eq!(e.descriptor(), BehaviorDescriptor::new(MovementType::Flee, WeaponType::Bow));
        }
    }

    #[test]
    fn tournament_on_empty_archive() {
        let a = Archive::new(DifficultyGoal::MEDIUM);
        assert!(matches!(tournament_select(&a, 2, &mut rng(0)), Err(EvolveError::EmptyArchive)));
    }

    #[test]
    fn tournament_samples_distinct_cells() {
        // With three elites and k = 2 the worst one can never win.
        let a = archive_with(&[
            (MovementType::None, WeaponType::Bow, 0.1),
            (MovementType::Random, WeaponType::Bow, 0.2),
            (MovementType::Flee, WeaponType::Bow, 0.9),
        ]);
        let mut r = rng(3);
        let mut wins = [0usize; 3];
        for _ in 0..3_000 {
            let f = tournament_select(&a, 2, &mut r).unwrap().fitness;
            wins[[0.1, 0.2, 0.9].iter().position(|&x| x == f).unwrap()] += 1;
        }
        assert_eq!(wins[2], 0);
        // Best wins 2 of 3 pairs.
        let p = wins[0] as f64 / 3_000.0;
        assert!((p - 2.0 / 3.0).abs() < 0.03, "{wins:?}");
    }

    #[test]
    fn crossover_swaps_weapon_segment() {
        let a = enemy(MovementType::Flee, WeaponType::Bow);
        let b = enemy(MovementType::Follow, WeaponType::Sword);
        let (c1, c2) = crossover(&a, &b, 0.5, &mut rng(0));
        assert_eq!(c1.descriptor(), BehaviorDescriptor::new(MovementType::Flee, WeaponType::Sword));
        assert_eq!(c2.descriptor(), BehaviorDescriptor::new(MovementType::Follow, WeaponType::Bow));
    }

    #[test]
    fn crossover_identical_genes_stay_put() {
        let mut a = enemy(MovementType::Random, WeaponType::Bow);
        let mut b = enemy(MovementType::Flee, WeaponType::Shield);
        a.movement_speed = 1.7;
        b.movement_speed = 1.7;
        let mut r = rng(8);
        for _ in 0..100 {
            let (c1, c2) = crossover(&a, &b, 0.5, &mut r);
            assert_eq!(c1.movement_speed, 1.7);
            assert_eq!(c2.movement_speed, 1.7);
            assert_eq!(c1.health, 3);
        }
    }

    #[test]
    fn crossover_blx_draw_is_clamped() {
        let mut a = enemy(MovementType::Random, WeaponType::Bow);
        let mut b = a;
        a.attack_speed = 1.0;
        b.attack_speed = 2.0;
        let mut r = rng(12);
        let (mut at_floor, mut total, mut hi) = (0usize, 0usize, f64::MIN);
        for _ in 0..20_000 {
            let (c1, c2) = crossover(&a, &b, 0.5, &mut r);
            for c in [c1, c2] {
                assert!((0.75..=2.5).contains(&c.attack_speed), "{}", c.attack_speed);
                at_floor += usize::from(c.attack_speed == 0.75);
                total += 1;
                hi = hi.max(c.attack_speed);
            }
        }
        // Widened interval [0.5, 2.5]; the part below 0.75 is 1/8 of it.
        let share = at_floor as f64 / total as f64;
        assert!((share - 0.125).abs() < 0.01, "{share}");
        assert!(hi > 2.49, "{hi}");
    }

    #[test]
    fn crossover_integer_genes_round() {
        let mut a = enemy(MovementType::Random, WeaponType::Bow);
        let mut b = a;
        a.health = 1;
        b.health = 5;
        let mut r = rng(2);
        let mut seen = [0usize; 6];
        for _ in 0..5_000 {
            let (c1, _) = crossover(&a, &b, 0.5, &mut r);
            seen[c1.health as usize] += 1;
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&n| n > 0), "{seen:?}");
    }

    #[test]
    fn mutation_disabled_is_identity() {
        let mut r = rng(0);
        for _ in 0..1_000 {
            let e = random_enemy(&mut r);
            assert_eq!(mutate(&e, 0.0, 1.0, &mut r), e);
        }
    }

    #[test]
    fn full_mutation_matches_random_sampling() {
        // Two-sample frequency comparison over the nominal genes and binned
        // health, each against the uniform distribution of fresh draws.
        let n = 10_000;
        let fixed = enemy(MovementType::Follow, WeaponType::Sword);
        let mut r1 = rng(100);
        let mut r2 = rng(200);
        let mut mutated = [[0usize; 7]; 3];
        let mut fresh = [[0usize; 7]; 3];
        for _ in 0..n {
            let m = mutate(&fixed, 1.0, 1.0, &mut r1);
            let f = random_enemy(&mut r2);
            for (counts, e) in [(&mut mutated, m), (&mut fresh, f)] {
                counts[0][e.movement_type.ordinal()] += 1;
                counts[1][e.weapon_type.ordinal()] += 1;
                counts[2][e.health as usize] += 1;
            }
        }
        for row in 0..3 {
            for bin in 0..7 {
                let a = mutated[row][bin] as f64 / n as f64;
                let b = fresh[row][bin] as f64 / n as f64;
                assert!((a - b).abs() < 0.025, "row {row} bin {bin}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gene_mutation_rate_bounds_changed_genes() {
        let n = 20_000;
        let mut r = rng(77);
        let mut changed = 0usize;
        for _ in 0..n {
            let e = random_enemy(&mut r);
            let m = mutate(&e, 1.0, 0.3, &mut r);
            changed += Gene::ALL.iter().filter(|&&g| e.gene(g) != m.gene(g)).count();
        }
        let mean = changed as f64 / n as f64;
        // Binomial(9, 0.3) expectation, less coincident integer/nominal redraws.
        assert!(mean <= 2.7 + 0.05, "{mean}");
        assert!(mean > 2.0, "{mean}");
    }

    #[test]
    fn operators_preserve_ranges() {
        let mut r = rng(5);
        for _ in 0..20_000 {
            let a = random_enemy(&mut r);
            let b = random_enemy(&mut r);
            let (c1, c2) = crossover(&a, &b, 0.5, &mut r);
            assert!(c1.is_valid() && c2.is_valid());
            assert!(mutate(&c1, 1.0, 0.3, &mut r).is_valid());
        }
    }
}
