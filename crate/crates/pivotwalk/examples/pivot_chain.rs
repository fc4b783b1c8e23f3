//! Runs the pivot sampler at a length far beyond exact enumeration and
//! tracks the end-to-end distance, the classic polymer observable.
//!
//! Run with: cargo run --release --example pivot_chain

use pivotwalk::chain::{replica_end_to_end, ChainConfig, ChainRunner, Variant};

fn main() -> pivotwalk::Result<()> {
    let cfg = ChainConfig::new(2, 200, Variant::Pivot, 1);

    // one long chain, watching the observable decorrelate from the straight start
    let mut runner = ChainRunner::new(&cfg)?;
    println!("single chain, d=2, N=200:");
    println!("  t     end-to-end^2");
    for t in 1..=2_000u64 {
        runner.step();
        if t % 250 == 0 || t == 1 {
            println!("  {t:<5} {}", runner.walk().end_to_end_sq());
        }
    }
    println!("  acceptance rate {:.3}", runner.acceptance_rate());

    // replica average at a fixed time, parallel with per-replica substreams
    let stats = replica_end_to_end(&cfg, 1_000, 200)?;
    println!(
        "\n{} replicas at t={}: mean end-to-end^2 = {:.1} (rms {:.2})",
        stats.replicas, stats.time, stats.mean_sq, stats.rms
    );
    Ok(())
}
