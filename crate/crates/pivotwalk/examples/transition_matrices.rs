//! Builds the exact integer-count transition matrices of both chains and
//! verifies their structure: row sums, count symmetry, irreducibility,
//! aperiodicity, exact stationarity of the uniform laws, and the block
//! diagonal shape of the in-class kernel.
//!
//! Run with: cargo run --example transition_matrices

use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::analysis::{is_aperiodic, is_irreducible, uniform_is_stationary_exact};
use pivotwalk::exact::{build_pivot_matrix, build_pivot_plus_matrices};

fn main() -> pivotwalk::Result<()> {
    let space = StateSpace::enumerate(2, 4)?;
    let pivot = build_pivot_matrix(&space)?;
    let plus = build_pivot_plus_matrices(&space)?;

    println!(
        "d=2, N=4: {} states, pivot denominator {}, in-class denominator {}",
        space.count(),
        pivot.denominator(),
        plus.p2.denominator()
    );

    println!("\npivot matrix:");
    println!("  row sums exact:        {}", pivot.rows_sum_to_denominator());
    println!("  counts symmetric:      {}", pivot.is_count_symmetric());
    println!("  irreducible:           {}", is_irreducible(&pivot));
    println!("  aperiodic:             {}", is_aperiodic(&pivot));
    println!(
        "  uniform stationary:    {} (exact rational arithmetic)",
        uniform_is_stationary_exact(&pivot)
    );

    println!("\nopening-jump matrix: denominator {}, all rows identical: {}", plus.p1.denominator(), {
        let first = plus.p1.row(0);
        (0..space.count()).all(|r| plus.p1.row(r) == first)
    });

    println!("\nin-class kernel:");
    println!("  off-block entries zero: {}", plus.off_block_entries_are_zero());
    for (rank, q) in plus.blocks.iter().enumerate() {
        println!(
            "  block {rank}: {} states, symmetric {}, irreducible {}, aperiodic {}, uniform stationary {}",
            q.size(),
            q.is_count_symmetric(),
            is_irreducible(q),
            is_aperiodic(q),
            uniform_is_stationary_exact(q)
        );
    }

    // a corner of the dump format
    println!("\nfirst lines of the pivot matrix dump:");
    for line in pivot.dump().lines().take(8) {
        println!("  {line}");
    }
    Ok(())
}
