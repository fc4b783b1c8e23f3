//! Monte Carlo vs exact arithmetic: long-run frequency checks of the
//! samplers against the transition matrices and the uniform law, at binomial
//! four-sigma confidence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pivotwalk::chain::{pivot_step, replica_histogram, ChainConfig, Variant};
use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::analysis::{evolve_step, point_mass};
use pivotwalk::exact::{build_pivot_matrix, build_pivot_plus_matrices};
use pivotwalk::symmetry::enumerate_group;

fn four_sigma(p: f64, n: f64) -> f64 {
    4.0 * (p * (1.0 - p) / n).sqrt()
}

#[test]
fn pivot_step_frequencies_match_the_matrix_row() {
    // 10^7 single transitions from one state; every target frequency must sit
    // within four sigma of its exact probability.
    let space = StateSpace::enumerate(2, 3).unwrap();
    let p = build_pivot_matrix(&space).unwrap();
    let group = enumerate_group(2).unwrap();
    let start_idx = 0;
    let start = space.walk(start_idx).clone();

    let draws = 10_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(314_159);
    let mut hist = vec![0u64; space.count()];
    for _ in 0..draws {
        let next = pivot_step(&start, &group, &mut rng);
        hist[space.index_of(&next).unwrap()] += 1;
    }

    for (beta, &count) in hist.iter().enumerate() {
        let exact = p.prob(start_idx, beta);
        let freq = count as f64 / draws as f64;
        if exact == 0.0 {
            assert_eq!(count, 0, "impossible transition sampled");
        } else {
            assert!(
                (freq - exact).abs() <= four_sigma(exact, draws as f64),
                "transition to {beta}: frequency {freq} vs exact {exact}"
            );
        }
    }
}

#[test]
fn plus_chain_replica_law_matches_evolution_at_several_times() {
    let space = StateSpace::enumerate(2, 3).unwrap();
    let plus = build_pivot_plus_matrices(&space).unwrap();
    let cfg = ChainConfig::new(2, 3, Variant::PivotPlus, 2_718);
    let replicas = 200_000u64;

    for time in [1u64, 2, 5] {
        let mut exact = point_mass(space.count(), 0);
        for n in 1..=time {
            exact = if n == 1 {
                evolve_step(&exact, &plus.p1)
            } else {
                evolve_step(&exact, &plus.p2)
            };
        }
        let hist = replica_histogram(&cfg, &space, time, replicas).unwrap();
        assert!(hist.class_constant);
        for (i, f) in hist.frequencies().iter().enumerate() {
            let e = exact[i];
            if e == 0.0 {
                assert_eq!(hist.counts[i], 0);
            } else {
                assert!(
                    (f - e).abs() <= four_sigma(e, replicas as f64),
                    "time {time}, state {i}: {f} vs {e}"
                );
            }
        }
    }
}

#[test]
fn pivot_chain_reaches_near_uniformity() {
    // After many transitions the single-time law is close to uniform;
    // four-sigma per state plus a small mixing allowance.
    let space = StateSpace::enumerate(2, 3).unwrap();
    let cfg = ChainConfig::new(2, 3, Variant::Pivot, 1_618);
    let replicas = 200_000u64;
    let hist = replica_histogram(&cfg, &space, 60, replicas).unwrap();
    let p = 1.0 / space.count() as f64;
    for f in hist.frequencies() {
        assert!((f - p).abs() <= four_sigma(p, replicas as f64) + 1e-6);
    }
}
