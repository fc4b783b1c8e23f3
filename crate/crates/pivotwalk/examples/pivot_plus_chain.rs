//! The pivot+ sampler: one uniform jump onto a straight walk, then pivot
//! moves that never touch the first step. The chain is confined to a single
//! first-step class from time 1 on, a state space 2d times smaller than the
//! whole walk space.
//!
//! Run with: cargo run --example pivot_plus_chain

use pivotwalk::chain::{
    replica_histogram, run_chain, ChainConfig, ClassConstancyCheck, TrajectoryRecorder, Variant,
};
use pivotwalk::enumeration::StateSpace;

fn main() -> pivotwalk::Result<()> {
    let cfg = ChainConfig::new(2, 5, Variant::PivotPlus, 42);

    let mut rec = TrajectoryRecorder::default();
    let mut check = ClassConstancyCheck::default();
    run_chain(&cfg, 12, &mut [&mut rec, &mut check])?;
    println!("trajectory (time: walk / class):");
    for (t, w) in rec.walks.iter().enumerate() {
        println!("  {t:>2}: {w}   class {}", w.class_key());
    }
    println!("class changed after time 1: {}\n", check.violated);

    // replica histogram against the uniform law on the whole space
    let space = StateSpace::enumerate(2, 5)?;
    let hist = replica_histogram(&cfg, &space, 400, 100_000)?;
    let uniform = 1.0 / space.count() as f64;
    let worst = hist
        .frequencies()
        .iter()
        .map(|f| (f - uniform).abs())
        .fold(0.0f64, f64::max);
    println!(
        "{} replicas after {} transitions over {} states:",
        hist.replicas,
        hist.time,
        space.count()
    );
    println!(
        "  worst |frequency - 1/c| = {worst:.5} (uniform would be {uniform:.5})"
    );
    println!("  every replica stayed in its class: {}", hist.class_constant);
    Ok(())
}
