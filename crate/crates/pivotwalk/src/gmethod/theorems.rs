//! Product laws for chains of block-stable matrices, as executable checks,
//! plus a generator of random chains satisfying the laws' hypotheses by
//! construction.
//!
//! The three checks:
//! - `coefficient_product_bound`: for stochastic chains whose factors are
//!   each block-stable from one partition to the next, the contraction
//!   coefficient of the product is bounded by the product of the
//!   partition-restricted coefficients of the factors.
//! - `stable_product`: when the first partition is improper and the last is
//!   singletons, the product of the chain is a stable matrix whose common row
//!   is the product of the factor reductions.
//! - `representative_independence`: replacing every factor by a similar one
//!   leaves the product similar, and (improper-to-singletons) leaves the
//!   product itself unchanged.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{gamma_bar, is_stable_on, reduce, similar, Matrix, Partition, Scalar};
use crate::error::{Error, Result};

/// Default tolerance for the floating-point property checks.
pub const DEFAULT_CHECK_TOL: f64 = 1e-10;

/// A chain of matrices with matching partitions: `partitions[i]` grades the
/// rows of `matrices[i]` and `partitions[i + 1]` its columns.
#[derive(Debug, Clone)]
pub struct ChainInstance<T> {
    pub matrices: Vec<Matrix<T>>,
    pub partitions: Vec<Partition>,
}

impl<T: Scalar> ChainInstance<T> {
    pub fn new(matrices: Vec<Matrix<T>>, partitions: Vec<Partition>) -> Result<ChainInstance<T>> {
        if partitions.len() != matrices.len() + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices need {} partitions, got {}",
                matrices.len(),
                matrices.len() + 1,
                partitions.len()
            )));
        }
        for (i, m) in matrices.iter().enumerate() {
            if partitions[i].ground_size() != m.rows()
                || partitions[i + 1].ground_size() != m.cols()
            {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {i} is {}x{} but its partitions cover {} and {}",
                    m.rows(),
                    m.cols(),
                    partitions[i].ground_size(),
                    partitions[i + 1].ground_size()
                )));
            }
        }
        Ok(ChainInstance {
            matrices,
            partitions,
        })
    }

    pub fn product(&self) -> Matrix<T> {
        let mut prod = self.matrices[0].clone();
        for m in &self.matrices[1..] {
            prod = prod.matmul(m).expect("dimensions validated");
        }
        prod
    }

    /// Every factor nonnegative and block-stable from its row partition to
    /// its column partition.
    pub fn hypotheses_hold(&self, tol: &T) -> Result<bool> {
        for (i, m) in self.matrices.iter().enumerate() {
            if !is_stable_on(m, &self.partitions[i], &self.partitions[i + 1], tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    /// The instance does not satisfy the hypotheses; not a failure.
    Inapplicable(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

/// Contraction-coefficient bound for stochastic chains: the coefficient of
/// the product under the first partition never exceeds the product of the
/// per-factor coefficients.
pub fn check_coefficient_product_bound(
    chain: &ChainInstance<f64>,
    tol: f64,
) -> CheckOutcome {
    let stoch_tol = 1e-9;
    for (i, m) in chain.matrices.iter().enumerate() {
        if !m.is_stochastic(&stoch_tol) {
            return CheckOutcome::Inapplicable(format!("factor {i} is not stochastic"));
        }
    }
    // all factors but the last must be block-stable onto the next partition
    let n = chain.matrices.len();
    for i in 0..n.saturating_sub(1) {
        match is_stable_on(
            &chain.matrices[i],
            &chain.partitions[i],
            &chain.partitions[i + 1],
            &tol,
        ) {
            Ok(true) => {}
            Ok(false) => {
                return CheckOutcome::Inapplicable(format!("factor {i} is not block-stable"))
            }
            Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
        }
    }
    let lhs = match gamma_bar(&chain.product(), &chain.partitions[0]) {
        Ok(v) => v,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    let mut rhs = 1.0;
    for (i, m) in chain.matrices.iter().enumerate() {
        match gamma_bar(m, &chain.partitions[i]) {
            Ok(v) => rhs *= v,
            Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
        }
    }
    if lhs <= rhs + tol {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("coefficient bound violated: {lhs} > {rhs}"))
    }
}

/// Improper-to-singletons product law: the chain's product is a stable
/// matrix and its common row equals the product of the factor reductions.
pub fn check_stable_product<T: Scalar>(chain: &ChainInstance<T>, tol: &T) -> CheckOutcome {
    if !chain.partitions[0].is_improper() {
        return CheckOutcome::Inapplicable("first partition is not improper".into());
    }
    if !chain.partitions.last().unwrap().is_singletons() {
        return CheckOutcome::Inapplicable("last partition is not singletons".into());
    }
    match chain.hypotheses_hold(tol) {
        Ok(true) => {}
        Ok(false) => return CheckOutcome::Inapplicable("a factor is not block-stable".into()),
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    }
    let product = chain.product();
    if !product.is_stable(tol) {
        return CheckOutcome::Fail("product rows are not identical".into());
    }
    let mut reduced = reduce(
        &chain.matrices[0],
        &chain.partitions[0],
        &chain.partitions[1],
        tol,
    )
    .expect("stability checked");
    for (i, m) in chain.matrices.iter().enumerate().skip(1) {
        let r = reduce(m, &chain.partitions[i], &chain.partitions[i + 1], tol)
            .expect("stability checked");
        reduced = reduced.matmul(&r).expect("chained dimensions");
    }
    // reduced is 1 x m_{n+1}: the claimed common row
    let row = Matrix::from_constant_rows(reduced.row(0).to_vec(), product.rows());
    if product.approx_eq(&row, tol) {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!(
            "common row differs from the product of reductions by {:?}",
            product.max_abs_diff(&row)
        ))
    }
}

/// Representative independence: factorwise-similar chains have similar
/// products, and identical products when the ends are improper/singletons.
pub fn check_representative_independence<T: Scalar>(
    chain: &ChainInstance<T>,
    variant: &ChainInstance<T>,
    tol: &T,
) -> CheckOutcome {
    if chain.matrices.len() != variant.matrices.len()
        || chain.partitions != variant.partitions
    {
        return CheckOutcome::Inapplicable("chains do not share partitions".into());
    }
    match (chain.hypotheses_hold(tol), variant.hypotheses_hold(tol)) {
        (Ok(true), Ok(true)) => {}
        (Ok(_), Ok(_)) => {
            return CheckOutcome::Inapplicable("a factor is not block-stable".into())
        }
        (Err(e), _) | (_, Err(e)) => return CheckOutcome::Inapplicable(e.to_string()),
    }
    for i in 0..chain.matrices.len() {
        match similar(
            &chain.matrices[i],
            &variant.matrices[i],
            &chain.partitions[i],
            &chain.partitions[i + 1],
            tol,
        ) {
            Ok(true) => {}
            Ok(false) => {
                return CheckOutcome::Inapplicable(format!("factors {i} are not similar"))
            }
            Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
        }
    }
    let p = chain.product();
    let u = variant.product();
    let first = &chain.partitions[0];
    let last = chain.partitions.last().unwrap();
    match similar(&p, &u, first, last, tol) {
        Ok(true) => {}
        Ok(false) => return CheckOutcome::Fail("products are not similar".into()),
        Err(e) => return CheckOutcome::Fail(format!("product reduction failed: {e}")),
    }
    if first.is_improper() && last.is_singletons() && !p.approx_eq(&u, tol) {
        return CheckOutcome::Fail(format!(
            "products differ by {:?} despite improper-to-singletons ends",
            p.max_abs_diff(&u)
        ));
    }
    CheckOutcome::Pass
}

fn random_prob_row<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// A random partition of `0..n`: random labels over a random block budget,
/// empties dropped.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Partition {
    let budget = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..budget)).collect();
    let blocks: Vec<Vec<usize>> = (0..budget)
        .map(|b| (0..n).filter(|&e| labels[e] == b).collect::<Vec<_>>())
        .filter(|b: &Vec<usize>| !b.is_empty())
        .collect();
    Partition::new(n, blocks).expect("labels cover the ground set")
}

/// A chain satisfying every hypothesis by construction (improper first
/// partition, singleton last partition, each factor block-stable in between)
/// together with a factorwise-similar variant chain.
///
/// With `stochastic`, factors are stochastic; otherwise each row block gets a
/// random positive scale, giving nonnegative non-stochastic factors.
pub fn random_chain_pair<R: Rng + ?Sized>(
    rng: &mut R,
    stochastic: bool,
) -> (ChainInstance<f64>, ChainInstance<f64>) {
    let n_factors = rng.gen_range(2..=4);
    let sizes: Vec<usize> = (0..=n_factors).map(|_| rng.gen_range(2..=6)).collect();
    let mut partitions = Vec::with_capacity(n_factors + 1);
    partitions.push(Partition::improper(sizes[0]));
    for &s in &sizes[1..n_factors] {
        partitions.push(random_partition(rng, s));
    }
    partitions.push(Partition::singletons(sizes[n_factors]));

    let mut primary = Vec::with_capacity(n_factors);
    let mut variant = Vec::with_capacity(n_factors);
    for i in 0..n_factors {
        let (rows, cols) = (sizes[i], sizes[i + 1]);
        let delta = &partitions[i];
        let sigma = &partitions[i + 1];
        // block-level row distribution per row block, shared by both chains
        let mut block_mass = vec![vec![0.0; sigma.block_count()]; delta.block_count()];
        for (k, mass) in block_mass.iter_mut().enumerate() {
            let mut row = random_prob_row(rng, sigma.block_count());
            if !stochastic {
                let scale = rng.gen_range(0.2..3.0);
                for x in &mut row {
                    *x *= scale;
                }
            }
            let _ = k;
            *mass = row;
        }
        let fill = |rng: &mut R| -> Matrix<f64> {
            let mut data = vec![0.0; rows * cols];
            for (k, rblock) in delta.blocks().iter().enumerate() {
                for (l, cblock) in sigma.blocks().iter().enumerate() {
                    let mass = block_mass[k][l];
                    for &r in rblock {
                        let spread = random_prob_row(rng, cblock.len());
                        for (&c, w) in cblock.iter().zip(spread) {
                            data[r * cols + c] = mass * w;
                        }
                    }
                }
            }
            Matrix::new(rows, cols, data).expect("sized")
        };
        primary.push(fill(rng));
        variant.push(fill(rng));
    }
    let p = ChainInstance::new(primary, partitions.clone()).expect("constructed consistently");
    let u = ChainInstance::new(variant, partitions).expect("constructed consistently");
    (p, u)
}

/// Aggregate result of running all three checks over many random chains.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cases: u32,
    pub stochastic: bool,
    pub tolerance: f64,
    pub bound_passes: u32,
    pub bound_inapplicable: u32,
    pub stable_product_passes: u32,
    pub independence_passes: u32,
    pub failures: Vec<String>,
    pub all_pass: bool,
}

/// Runs the three checks on `cases` random chains drawn from `seed`.
/// A check may be inapplicable (hypotheses unmet); any `Fail` is a failure.
pub fn run_random_suite(seed: u64, cases: u32, stochastic: bool) -> SuiteReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tol = DEFAULT_CHECK_TOL;
    let mut report = SuiteReport {
        cases,
        stochastic,
        tolerance: tol,
        bound_passes: 0,
        bound_inapplicable: 0,
        stable_product_passes: 0,
        independence_passes: 0,
        failures: Vec::new(),
        all_pass: true,
    };
    for case in 0..cases {
        let (chain, variant) = random_chain_pair(&mut rng, stochastic);
        match check_coefficient_product_bound(&chain, tol) {
            CheckOutcome::Pass => report.bound_passes += 1,
            CheckOutcome::Inapplicable(_) => report.bound_inapplicable += 1,
            CheckOutcome::Fail(msg) => {
                report.failures.push(format!("case {case} bound: {msg}"))
            }
        }
        match check_stable_product(&chain, &tol) {
            CheckOutcome::Pass => report.stable_product_passes += 1,
            CheckOutcome::Inapplicable(msg) => report
                .failures
                .push(format!("case {case} stable product inapplicable: {msg}")),
            CheckOutcome::Fail(msg) => report
                .failures
                .push(format!("case {case} stable product: {msg}")),
        }
        match check_representative_independence(&chain, &variant, &tol) {
            CheckOutcome::Pass => report.independence_passes += 1,
            CheckOutcome::Inapplicable(msg) => report
                .failures
                .push(format!("case {case} independence inapplicable: {msg}")),
            CheckOutcome::Fail(msg) => report
                .failures
                .push(format!("case {case} independence: {msg}")),
        }
    }
    // The generator guarantees the stable-product and independence
    // hypotheses; the bound needs stochastic factors.
    if stochastic && report.bound_passes != cases {
        report.all_pass = false;
    }
    report.all_pass &= report.stable_product_passes == cases
        && report.independence_passes == cases
        && report.failures.is_empty();
    report
}
