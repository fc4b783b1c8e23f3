//! Enumerates small walk spaces, prints the exact counts, and checks the
//! first-step class partition: all 2d classes have equal size and the total
//! is 2d times the class size.
//!
//! Run with: cargo run --example enumerate_walks

use pivotwalk::enumeration::StateSpace;

fn main() -> pivotwalk::Result<()> {
    println!("d  N   total      per-class  identity");
    for (d, max_n) in [(1, 8), (2, 10), (3, 6)] {
        for n in 1..=max_n {
            let space = StateSpace::enumerate(d, n)?;
            let counts = space.counts();
            println!(
                "{d}  {n:<2}  {:<9}  {:<9}  {}",
                counts.c_n,
                counts.a_n,
                space.verify_partition_identity() && counts.c_n == 2 * d as u64 * counts.a_n
            );
        }
    }

    // the full listing for a tiny space, in walk text format
    let space = StateSpace::enumerate(2, 2)?;
    println!("\nall {} walks for d=2, N=2:", space.count());
    print!("{}", space.to_walk_text());
    Ok(())
}
