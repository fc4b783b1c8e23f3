//! Exact uniform sampling from the enumerated walk space: pick a first-step
//! class uniformly, then a member of that class uniformly. Since all classes
//! have the same size, every walk comes out with probability 1/total.
//!
//! Run with: cargo run --example exact_uniform_sampler

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pivotwalk::enumeration::StateSpace;

fn main() -> pivotwalk::Result<()> {
    let space = StateSpace::enumerate(2, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let draws = 500_000u64;
    let mut hist = vec![0u64; space.count()];
    for _ in 0..draws {
        let w = space.reference_sample(&mut rng);
        hist[space.index_of(w).expect("sampled from the space")] += 1;
    }

    let expect = draws as f64 / space.count() as f64;
    let worst = hist
        .iter()
        .map(|&h| (h as f64 - expect).abs() / expect)
        .fold(0.0f64, f64::max);
    println!(
        "{} walks, {draws} draws, expected {expect:.1} per walk, worst relative deviation {:.3}%",
        space.count(),
        100.0 * worst
    );

    println!("\nfirst few draws:");
    for _ in 0..5 {
        let w = space.reference_sample(&mut rng);
        println!("  {w}   end-to-end^2 = {}", w.end_to_end_sq());
    }
    Ok(())
}
