//! The exact chain matrices viewed through the grouped-matrix calculus, all
//! in exact rational arithmetic: the pivot+ opening matrix and the limit of
//! its in-class kernel are block-stable across the class partition, their
//! product is the stable uniform matrix, and the product also comes out of
//! the block reductions alone.

use num::Zero;

use pivotwalk::enumeration::StateSpace;
use pivotwalk::exact::build_pivot_plus_matrices;
use pivotwalk::gmethod::theorems::{check_stable_product, ChainInstance, CheckOutcome};
use pivotwalk::gmethod::{
    gamma_bar, is_stable_on, reduce, similar, Matrix, Partition, Rational,
};

struct Setup {
    space: StateSpace,
    p1: Matrix<Rational>,
    p2: Matrix<Rational>,
    limit_p2: Matrix<Rational>,
    e_pi: Matrix<Rational>,
    whole: Partition,
    classes: Partition,
    singles: Partition,
}

fn setup(d: usize, n: usize) -> Setup {
    let space = StateSpace::enumerate(d, n).unwrap();
    let plus = build_pivot_plus_matrices(&space).unwrap();
    let size = space.count();
    let a_n = space.counts().a_n as i64;

    // the in-class kernel converges blockwise to the stable matrix of its
    // class-uniform law: 1/a_N inside each diagonal block, 0 elsewhere
    let mut limit = vec![Rational::zero(); size * size];
    for &(start, len) in space.class_offsets() {
        for r in start..start + len {
            for c in start..start + len {
                limit[r * size + c] = Rational::new(1, a_n);
            }
        }
    }

    let pi_row = vec![Rational::new(1, size as i64); size];
    Setup {
        p1: plus.p1.to_rational(),
        p2: plus.p2.to_rational(),
        limit_p2: Matrix::new(size, size, limit).unwrap(),
        e_pi: Matrix::from_constant_rows(pi_row, size),
        whole: Partition::improper(size),
        classes: Partition::from_contiguous_lengths(
            &space
                .class_offsets()
                .iter()
                .map(|&(_, l)| l)
                .collect::<Vec<_>>(),
        )
        .unwrap(),
        singles: Partition::singletons(size),
        space,
    }
}

#[test]
fn opening_and_limit_matrices_live_in_the_expected_classes() {
    for (d, n) in [(1usize, 3usize), (2, 2), (2, 3)] {
        let s = setup(d, n);
        let zero = Rational::zero();

        // opening matrix: stochastic, block-stable from the whole space onto
        // the class partition, and similar to the stable uniform matrix there
        assert!(s.p1.is_stochastic(&zero));
        assert!(is_stable_on(&s.p1, &s.whole, &s.classes, &zero).unwrap());
        assert!(similar(&s.p1, &s.e_pi, &s.whole, &s.classes, &zero).unwrap());
        let r = reduce(&s.p1, &s.whole, &s.classes, &zero).unwrap();
        let two_d = 2 * d as i64;
        assert!(r.row(0).iter().all(|x| *x == Rational::new(1, two_d)));

        // the limit kernel: stochastic, block-stable from the class partition
        // onto singletons, but not similar to the stable uniform matrix there
        assert!(s.limit_p2.is_stochastic(&zero));
        assert!(is_stable_on(&s.limit_p2, &s.classes, &s.singles, &zero).unwrap());
        assert!(!similar(&s.limit_p2, &s.e_pi, &s.classes, &s.singles, &zero).unwrap());
        assert!(gamma_bar(&s.limit_p2, &s.classes).unwrap().is_zero());

        // the unconverged kernel itself is stable across classes only in the
        // degenerate d=1 case where blocks are single states
        let p2_stable = is_stable_on(&s.p2, &s.classes, &s.singles, &zero).unwrap();
        assert_eq!(p2_stable, s.space.counts().a_n == 1);
    }
}

#[test]
fn opening_times_limit_is_the_stable_uniform_matrix() {
    for (d, n) in [(1usize, 3usize), (2, 2), (2, 3)] {
        let s = setup(d, n);
        let zero = Rational::zero();

        // direct product
        let prod = s.p1.matmul(&s.limit_p2).unwrap();
        assert_eq!(prod, s.e_pi, "d={d} n={n}");

        // and through the product law: reductions alone give the same row
        let chain = ChainInstance::new(
            vec![s.p1.clone(), s.limit_p2.clone()],
            vec![s.whole.clone(), s.classes.clone(), s.singles.clone()],
        )
        .unwrap();
        assert_eq!(check_stable_product(&chain, &zero), CheckOutcome::Pass);

        let r1 = reduce(&s.p1, &s.whole, &s.classes, &zero).unwrap();
        let r2 = reduce(&s.limit_p2, &s.classes, &s.singles, &zero).unwrap();
        let via_reductions = r1.matmul(&r2).unwrap();
        let c = s.space.count() as i64;
        assert!(via_reductions
            .row(0)
            .iter()
            .all(|x| *x == Rational::new(1, c)));
    }
}

#[test]
fn pivot_block_probabilities_are_exact_rationals_of_the_kernel() {
    // spot-check the rational bridge on the d=2, N=2 in-class kernel:
    // the straight-east row is (1/2, 1/4, 1/4) within its block
    let space = StateSpace::enumerate(2, 2).unwrap();
    let plus = build_pivot_plus_matrices(&space).unwrap();
    let q = plus.blocks[0].to_rational();
    assert_eq!(*q.get(0, 0), Rational::new(1, 2));
    assert_eq!(*q.get(0, 1), Rational::new(1, 4));
    assert_eq!(*q.get(0, 2), Rational::new(1, 4));
}
