//! Searches for the shortest prefix length M >= M0 such that the pivot
//! matrix restricted to the walks extending the first M steps of a fixed
//! walk is irreducible.
//!
//! Run with: cargo run --example minimal_irreducible_prefix

use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::analysis::minimal_irreducible_prefix;
use pivotwalk::exact::build_pivot_matrix;
use pivotwalk::walk::{straight_walk, Step};

fn main() -> pivotwalk::Result<()> {
    let (d, n) = (2, 4);
    let space = StateSpace::enumerate(d, n)?;
    let pivot = build_pivot_matrix(&space)?;

    println!("d={d}, N={n}, {} walks", space.count());
    println!("tau               M0  M");

    for tau in [
        straight_walk(d, n, Step::positive(0))?,
        pivotwalk::walk::Walk::from_signed_steps(d, &[1, 2, 1, 2])?,
        pivotwalk::walk::Walk::from_signed_steps(d, &[1, 2, -1, 2])?,
    ] {
        for m0 in 1..=n {
            let m = minimal_irreducible_prefix(&space, &pivot, &tau, m0)?;
            println!("{:<16}  {}   {}", tau.to_text(), m0, m);
        }
    }
    Ok(())
}
