//! Exact-rational demo matrices shipped as files, and the demo run itself.
//!
//! File format: an `m n` header line, then `m` rows of `n` whitespace-
//! separated `num/den` tokens (bare integers also accepted when reading).
//!
//! The four shipped 4x4 matrices:
//! - `stable_flat`: every entry 1/4; a stable stochastic matrix.
//! - `minimal_support`: identical rows (1/2, 0, 1/2, 0); among matrices with
//!   block sums (1/2, 1/2) over the paired columns it has the fewest
//!   positive entries.
//! - `mixed_support`: varied rows, same (1/2, 1/2) block sums.
//! - `block_second`: block-diagonal second factor, constant rows per block.
//!
//! All of the first three reduce to (1/2, 1/2) over the column pairing
//! {0,1}/{2,3}, so they are pairwise similar, and multiplying either of the
//! last two "similar" ones by `block_second` gives the same stable product.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::theorems::{check_stable_product, ChainInstance};
use super::{gamma_bar, reduce, similar, Matrix, Partition, Rational};
use crate::error::{Error, Result};

pub const STABLE_FLAT: &str = include_str!("../../fixtures/stable_flat.rat");
pub const MINIMAL_SUPPORT: &str = include_str!("../../fixtures/minimal_support.rat");
pub const MIXED_SUPPORT: &str = include_str!("../../fixtures/mixed_support.rat");
pub const BLOCK_SECOND: &str = include_str!("../../fixtures/block_second.rat");

fn parse_rational(tok: &str) -> Result<Rational> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("bad rational token {tok:?}: {e}")))
    };
    match tok.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == 0 {
                return Err(Error::Parse(format!("zero denominator in {tok:?}")));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(tok)?)),
    }
}

/// Reads the `m n` + `num/den` rows format.
pub fn parse_rational_matrix(text: &str) -> Result<Matrix<Rational>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty rational matrix".into()))?;
    let mut hp = header.split_whitespace();
    let (m, n): (usize, usize) = match (hp.next(), hp.next()) {
        (Some(m), Some(n)) => (
            m.parse().map_err(|e| Error::Parse(format!("{e}")))?,
            n.parse().map_err(|e| Error::Parse(format!("{e}")))?,
        ),
        _ => return Err(Error::Parse("bad rational matrix header".into())),
    };
    let mut data = Vec::with_capacity(m * n);
    for line in lines {
        for tok in line.split_whitespace() {
            data.push(parse_rational(tok)?);
        }
    }
    if data.len() != m * n {
        return Err(Error::Parse(format!(
            "expected {} entries, got {}",
            m * n,
            data.len()
        )));
    }
    Matrix::new(m, n, data)
}

/// Writes the same format back out, every entry as `num/den`.
pub fn write_rational_matrix(m: &Matrix<Rational>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m
            .row(r)
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn stable_flat() -> Matrix<Rational> {
    parse_rational_matrix(STABLE_FLAT).expect("shipped fixture parses")
}

pub fn minimal_support() -> Matrix<Rational> {
    parse_rational_matrix(MINIMAL_SUPPORT).expect("shipped fixture parses")
}

pub fn mixed_support() -> Matrix<Rational> {
    parse_rational_matrix(MIXED_SUPPORT).expect("shipped fixture parses")
}

pub fn block_second() -> Matrix<Rational> {
    parse_rational_matrix(BLOCK_SECOND).expect("shipped fixture parses")
}

/// The column pairing {0,1}/{2,3} used throughout the demo.
pub fn paired_partition() -> Partition {
    Partition::new(4, vec![vec![0, 1], vec![2, 3]]).expect("valid")
}

/// Everything the demo verifies, all in exact arithmetic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureReport {
    /// Common reduction of the three similar matrices, as `num/den` strings.
    pub reduction: Vec<String>,
    pub reductions_all_equal: bool,
    pub all_pairwise_similar: bool,
    /// The two products of similar first factors with the shared second one.
    pub products_equal: bool,
    pub product_is_stable: bool,
    /// Common row of the product, as `num/den` strings.
    pub product_row: Vec<String>,
    pub stable_product_law_holds: bool,
    pub second_factor_gamma_is_zero: bool,
    pub verdict: String,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.verdict == "exact"
    }
}

/// Runs the whole exact demo: reductions, similarity, and the product law.
pub fn run_fixture_demo() -> FixtureReport {
    let zero = Rational::zero();
    let flat = stable_flat();
    let lean = minimal_support();
    let mixed = mixed_support();
    let second = block_second();

    let improper = Partition::improper(4);
    let paired = paired_partition();
    let singles = Partition::singletons(4);

    let half = Rational::new(1, 2);
    let expected_reduction =
        Matrix::new(1, 2, vec![half, half]).expect("shaped");

    let reductions: Vec<Matrix<Rational>> = [&flat, &lean, &mixed]
        .iter()
        .map(|m| reduce(m, &improper, &paired, &zero).expect("fixtures are block-stable"))
        .collect();
    let reductions_all_equal = reductions.iter().all(|r| *r == expected_reduction);

    let mut all_similar = true;
    for a in [&flat, &lean, &mixed] {
        for b in [&flat, &lean, &mixed] {
            all_similar &= similar(a, b, &improper, &paired, &zero).expect("block-stable");
        }
    }

    let prod_lean = lean.matmul(&second).expect("4x4");
    let prod_mixed = mixed.matmul(&second).expect("4x4");
    let products_equal = prod_lean == prod_mixed;
    let product_is_stable = prod_lean.is_stable(&zero);

    let tau = [
        Rational::new(2, 12),
        Rational::new(4, 12),
        Rational::new(4, 20),
        Rational::new(6, 20),
    ];
    let row_matches_tau = prod_lean.row(0) == tau;
    let row_sum: Rational = prod_lean.row(0).iter().sum();

    let chain = ChainInstance::new(
        vec![lean.clone(), second.clone()],
        vec![improper, paired.clone(), singles],
    )
    .expect("consistent shapes");
    let stable_product_law_holds = check_stable_product(&chain, &zero).passed();

    let second_gamma = gamma_bar(&second, &paired).expect("partition matches");
    let second_factor_gamma_is_zero = second_gamma.is_zero();

    let all_exact = reductions_all_equal
        && all_similar
        && products_equal
        && product_is_stable
        && row_matches_tau
        && row_sum.is_one()
        && stable_product_law_holds
        && second_factor_gamma_is_zero;

    FixtureReport {
        reduction: expected_reduction
            .row(0)
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect(),
        reductions_all_equal,
        all_pairwise_similar: all_similar,
        products_equal,
        product_is_stable,
        product_row: prod_lean
            .row(0)
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect(),
        stable_product_law_holds,
        second_factor_gamma_is_zero,
        verdict: if all_exact { "exact" } else { "mismatch" }.to_string(),
    }
}
