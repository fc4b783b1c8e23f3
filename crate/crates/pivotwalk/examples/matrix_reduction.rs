//! Tour of the grouped-matrix calculus: block stability, reductions,
//! similarity, contraction coefficients, and the product laws, on the
//! shipped exact-rational fixtures and a cross-check against the pivot+
//! chain's opening matrix.
//!
//! Run with: cargo run --example matrix_reduction

use num::Zero;

use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::build_pivot_plus_matrices;
use pivotwalk::gmethod::fixtures::{
    block_second, minimal_support, mixed_support, paired_partition, run_fixture_demo,
    stable_flat, write_rational_matrix,
};
use pivotwalk::gmethod::theorems::run_random_suite;
use pivotwalk::gmethod::{
    alpha_bar, gamma_bar, least_fine_stable_partition, reduce, similar, Matrix, Partition,
    Rational,
};

fn main() -> pivotwalk::Result<()> {
    let zero = Rational::zero();
    let improper = Partition::improper(4);
    let paired = paired_partition();

    println!("the three similar fixtures (each reduces to 1/2 1/2):");
    for (name, m) in [
        ("stable_flat", stable_flat()),
        ("minimal_support", minimal_support()),
        ("mixed_support", mixed_support()),
    ] {
        let r = reduce(&m, &improper, &paired, &zero)?;
        println!("  {name:<16} reduction {}", write_rational_matrix(&r).lines().nth(1).unwrap());
    }
    println!(
        "  pairwise similar: {}",
        similar(&minimal_support(), &mixed_support(), &improper, &paired, &zero)?
    );

    println!("\ncoefficients:");
    println!("  alpha(stable_flat)        = {}", alpha_bar(&stable_flat()));
    println!(
        "  alpha(identity 2x2)       = {}",
        alpha_bar(&Matrix::<Rational>::identity(2))
    );
    println!(
        "  gamma(block_second|pairs) = {}",
        gamma_bar(&block_second(), &paired)?
    );

    let lf = least_fine_stable_partition(&mixed_support(), &paired, &zero)?;
    println!(
        "  least fine stable partition of mixed_support: {} block(s)",
        lf.block_count()
    );

    println!("\nexact product-law demo:");
    let demo = run_fixture_demo();
    println!("  products equal:   {}", demo.products_equal);
    println!("  product row:      {}", demo.product_row.join(" "));
    println!("  verdict:          {}", demo.verdict);

    // the pivot+ opening matrix is similar to the stable uniform matrix with
    // respect to (whole space, class partition)
    let space = StateSpace::enumerate(2, 3)?;
    let plus = build_pivot_plus_matrices(&space)?;
    let p1 = plus.p1.to_rational();
    let pi_row = vec![Rational::new(1, space.count() as i64); space.count()];
    let e_pi = Matrix::from_constant_rows(pi_row, space.count());
    let whole = Partition::improper(space.count());
    let classes = Partition::from_contiguous_lengths(
        &space.class_offsets().iter().map(|&(_, l)| l).collect::<Vec<_>>(),
    )?;
    println!(
        "\npivot+ opening matrix similar to the stable uniform matrix: {}",
        similar(&p1, &e_pi, &whole, &classes, &zero)?
    );

    println!("\nrandomized suites (40 chains each):");
    let s = run_random_suite(12, 40, true);
    println!("  stochastic chains: all pass = {}", s.all_pass);
    let g = run_random_suite(13, 40, false);
    println!("  nonnegative chains: all pass = {} (coefficient bound inapplicable: {})",
        g.all_pass, g.bound_inapplicable);
    Ok(())
}
