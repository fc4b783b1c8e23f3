//! Evolves both chains from the same point mass and compares their L1
//! distances to the uniform law at every time: the table behind the open
//! question of which chain converges faster.
//!
//! Run with: cargo run --example convergence_comparison

use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::analysis::conjecture_scan;
use pivotwalk::exact::{build_pivot_matrix, build_pivot_plus_matrices};
use pivotwalk::walk::{straight_walk, Step};

fn main() -> pivotwalk::Result<()> {
    for n in [3usize, 4, 5, 6] {
        let space = StateSpace::enumerate(2, n)?;
        let pivot = build_pivot_matrix(&space)?;
        let plus = build_pivot_plus_matrices(&space)?;
        let start = straight_walk(2, n, Step::positive(0))?;
        let scan = conjecture_scan(&space, &pivot, &plus, &start, 200)?;

        println!("d=2, N={n} ({} states), start {}", space.count(), scan.start_walk);
        println!("  n    ||q_n - pi||_1   ||p_n - pi||_1   plus leads");
        for row in scan.rows.iter().filter(|r| [0, 1, 2, 3, 5, 10, 20, 50].contains(&(r.n as usize))) {
            println!(
                "  {:<4} {:<15.6e} {:<15.6e} {}",
                row.n, row.l1_pivot, row.l1_pivot_plus, row.p_leads
            );
        }
        match scan.n0_empirical {
            Some(n0) => println!("  plus leads for every n in [{n0}, 200]"),
            None => println!("  no n0 within the horizon (see the tail of the table)"),
        }
        println!();
    }
    Ok(())
}
