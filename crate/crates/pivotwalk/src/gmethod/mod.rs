//! Grouped-matrix calculus: partition-structured nonnegative matrices.
//!
//! A matrix is *block-stable* for a row partition and a column partition when
//! every row-block x column-block submatrix has constant row sums, i.e. is a
//! nonnegative scale of a stochastic matrix. Such a matrix collapses to its
//! *reduction*: the small matrix of those common block row sums. Two matrices
//! with the same reduction are *similar*, and products of similar factors
//! behave identically at the block level.
//!
//! Everything is generic over the scalar so the same code runs in f64 with a
//! tolerance and in exact rational arithmetic with tolerance zero.

pub mod fixtures;
pub mod theorems;

use std::fmt;

use num::traits::Signed;

use crate::error::{Error, Result};

/// Exact scalar used by the shipped fixtures.
pub type Rational = num::rational::Ratio<i64>;

/// Scalar requirements: ordered signed arithmetic with 0 and 1.
pub trait Scalar: Clone + PartialOrd + fmt::Debug + Signed {}
impl<T: Clone + PartialOrd + fmt::Debug + Signed> Scalar for T {}

fn approx_eq<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

/// Dense row-major matrix over any [`Scalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Matrix<T>> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Matrix<T>> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix with every row equal to `row` (a stable matrix).
    pub fn from_constant_rows(row: Vec<T>, nrows: usize) -> Matrix<T> {
        let cols = row.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for _ in 0..nrows {
            data.extend(row.iter().cloned());
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Matrix<T> {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![T::zero(); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    data[r * other.cols + c] =
                        data[r * other.cols + c].clone() + a.clone() * other.get(k, c).clone();
                }
            }
        }
        Matrix::new(self.rows, other.cols, data)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Row sums all equal 1 within `tol`, entries nonnegative.
    pub fn is_stochastic(&self, tol: &T) -> bool {
        self.is_nonnegative()
            && (0..self.rows).all(|r| {
                let sum = self
                    .row(r)
                    .iter()
                    .fold(T::zero(), |acc, x| acc + x.clone());
                approx_eq(&sum, &T::one(), tol)
            })
    }

    /// All rows equal within `tol` (a stable matrix).
    pub fn is_stable(&self, tol: &T) -> bool {
        (1..self.rows).all(|r| {
            self.row(0)
                .iter()
                .zip(self.row(r))
                .all(|(a, b)| approx_eq(a, b, tol))
        })
    }

    pub fn approx_eq(&self, other: &Matrix<T>, tol: &T) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| approx_eq(a, b, tol))
    }

    /// Largest entrywise deviation, for diagnostics.
    pub fn max_abs_diff(&self, other: &Matrix<T>) -> Option<T> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .fold(None, |best, d| match best {
                None => Some(d),
                Some(b) => Some(if d > b { d } else { b }),
            })
    }
}

/// A partition of `{0, ..., ground-1}` into disjoint nonempty blocks.
///
/// Canonical form: each block sorted ascending, blocks ordered by their
/// smallest element. Equality is equality of block sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
    label: Vec<u32>,
}

impl Partition {
    pub fn new(ground: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b.first().copied());
        let mut label = vec![u32::MAX; ground];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    ground,
                    reason: "empty block".into(),
                });
            }
            for &e in block {
                if e >= ground {
                    return Err(Error::InvalidPartition {
                        ground,
                        reason: format!("element {e} out of range"),
                    });
                }
                if label[e] != u32::MAX {
                    return Err(Error::InvalidPartition {
                        ground,
                        reason: format!("element {e} appears twice"),
                    });
                }
                label[e] = bi as u32;
            }
        }
        if label.contains(&u32::MAX) {
            return Err(Error::InvalidPartition {
                ground,
                reason: "blocks do not cover the ground set".into(),
            });
        }
        Ok(Partition {
            ground,
            blocks,
            label,
        })
    }

    /// The partition into singletons.
    pub fn singletons(ground: usize) -> Partition {
        Partition::new(ground, (0..ground).map(|i| vec![i]).collect()).expect("valid")
    }

    /// The one-block (improper) partition.
    pub fn improper(ground: usize) -> Partition {
        Partition::new(ground, vec![(0..ground).collect()]).expect("valid")
    }

    /// Contiguous blocks of the given lengths, in order.
    pub fn from_contiguous_lengths(lengths: &[usize]) -> Result<Partition> {
        let ground = lengths.iter().sum();
        let mut blocks = Vec::with_capacity(lengths.len());
        let mut next = 0;
        for &len in lengths {
            blocks.push((next..next + len).collect());
            next += len;
        }
        Partition::new(ground, blocks)
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn label_of(&self, element: usize) -> usize {
        self.label[element] as usize
    }

    pub fn is_improper(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.ground
    }

    /// True iff every block of `self` lies inside one block of `other`.
    /// A partial order on partitions of the same ground set.
    pub fn is_finer_than(&self, other: &Partition) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        Ok(self.blocks.iter().all(|block| {
            let target = other.label[block[0]];
            block.iter().all(|&e| other.label[e] == target)
        }))
    }

    /// The partition with blocks `a` and `b` merged, for minimality checks.
    pub fn merge_blocks(&self, a: usize, b: usize) -> Partition {
        let mut blocks = self.blocks.clone();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let merged = blocks.remove(hi);
        blocks[lo].extend(merged);
        Partition::new(self.ground, blocks).expect("still a partition")
    }
}

/// Finds a row-block/column-block pair whose submatrix has unequal row sums
/// (within `tol`), or `None` when the matrix is block-stable.
pub fn stability_violation<T: Scalar>(
    m: &Matrix<T>,
    delta: &Partition,
    sigma: &Partition,
    tol: &T,
) -> Result<Option<(usize, usize)>> {
    if delta.ground_size() != m.rows() {
        return Err(Error::GroundSetMismatch {
            left: delta.ground_size(),
            right: m.rows(),
        });
    }
    if sigma.ground_size() != m.cols() {
        return Err(Error::GroundSetMismatch {
            left: sigma.ground_size(),
            right: m.cols(),
        });
    }
    for (ki, rows) in delta.blocks().iter().enumerate() {
        for (li, cols) in sigma.blocks().iter().enumerate() {
            let sum_of = |r: usize| {
                cols.iter()
                    .fold(T::zero(), |acc, &c| acc + m.get(r, c).clone())
            };
            let first = sum_of(rows[0]);
            if rows[1..]
                .iter()
                .any(|&r| !approx_eq(&sum_of(r), &first, tol))
            {
                return Ok(Some((ki, li)));
            }
        }
    }
    Ok(None)
}

/// True iff every row-block x column-block submatrix is a nonnegative scale
/// of a stochastic matrix, i.e. has constant row sums within `tol`.
pub fn is_stable_on<T: Scalar>(
    m: &Matrix<T>,
    delta: &Partition,
    sigma: &Partition,
    tol: &T,
) -> Result<bool> {
    Ok(m.is_nonnegative() && stability_violation(m, delta, sigma, tol)?.is_none())
}

/// The coarsest row partition making the matrix block-stable on `sigma`:
/// rows are grouped exactly when their column-block sums all agree.
pub fn least_fine_stable_partition<T: Scalar>(
    m: &Matrix<T>,
    sigma: &Partition,
    tol: &T,
) -> Result<Partition> {
    if sigma.ground_size() != m.cols() {
        return Err(Error::GroundSetMismatch {
            left: sigma.ground_size(),
            right: m.cols(),
        });
    }
    let signature = |r: usize| -> Vec<T> {
        sigma
            .blocks()
            .iter()
            .map(|cols| {
                cols.iter()
                    .fold(T::zero(), |acc, &c| acc + m.get(r, c).clone())
            })
            .collect()
    };
    let mut reps: Vec<(Vec<T>, Vec<usize>)> = Vec::new();
    for r in 0..m.rows() {
        let sig = signature(r);
        match reps
            .iter_mut()
            .find(|(rep, _)| rep.iter().zip(&sig).all(|(a, b)| approx_eq(a, b, tol)))
        {
            Some((_, members)) => members.push(r),
            None => reps.push((sig, vec![r])),
        }
    }
    Partition::new(m.rows(), reps.into_iter().map(|(_, b)| b).collect())
}

/// The block reduction: entry `(K, L)` is the common row sum of the `K x L`
/// submatrix. Fails if the matrix is not block-stable within `tol`.
pub fn reduce<T: Scalar>(
    m: &Matrix<T>,
    delta: &Partition,
    sigma: &Partition,
    tol: &T,
) -> Result<Matrix<T>> {
    if let Some((row_block, col_block)) = stability_violation(m, delta, sigma, tol)? {
        return Err(Error::NotStable {
            row_block,
            col_block,
        });
    }
    let mut data = Vec::with_capacity(delta.block_count() * sigma.block_count());
    for rows in delta.blocks() {
        let r = rows[0];
        for cols in sigma.blocks() {
            data.push(
                cols.iter()
                    .fold(T::zero(), |acc, &c| acc + m.get(r, c).clone()),
            );
        }
    }
    Matrix::new(delta.block_count(), sigma.block_count(), data)
}

/// Two block-stable matrices are similar when their reductions agree
/// entrywise within `tol`.
pub fn similar<T: Scalar>(
    p: &Matrix<T>,
    q: &Matrix<T>,
    delta: &Partition,
    sigma: &Partition,
    tol: &T,
) -> Result<bool> {
    let rp = reduce(p, delta, sigma, tol)?;
    let rq = reduce(q, delta, sigma, tol)?;
    Ok(rp.approx_eq(&rq, tol))
}

/// Half the largest L1 distance between two rows; the classical contraction
/// coefficient of a stochastic matrix, 0 exactly for stable matrices.
pub fn alpha_bar<T: Scalar>(m: &Matrix<T>) -> T {
    let two = T::one() + T::one();
    let mut best = T::zero();
    for i in 0..m.rows() {
        for j in (i + 1)..m.rows() {
            let s = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .fold(T::zero(), |acc, (a, b)| {
                    acc + (a.clone() - b.clone()).abs()
                });
            if s > best {
                best = s;
            }
        }
    }
    best / two
}

/// The partition-restricted coefficient: the largest [`alpha_bar`] over the
/// row submatrices picked out by the blocks. With the improper partition this
/// is exactly [`alpha_bar`].
pub fn gamma_bar<T: Scalar>(m: &Matrix<T>, delta: &Partition) -> Result<T> {
    if delta.ground_size() != m.rows() {
        return Err(Error::GroundSetMismatch {
            left: delta.ground_size(),
            right: m.rows(),
        });
    }
    let mut best = T::zero();
    for block in delta.blocks() {
        let rows: Vec<Vec<T>> = block.iter().map(|&r| m.row(r).to_vec()).collect();
        let sub = Matrix::from_rows(rows)?;
        let a = alpha_bar(&sub);
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pairs() -> Partition {
        Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err()); // misses 2
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err()); // overlap
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err()); // empty block
        assert!(Partition::new(2, vec![vec![0, 5]]).is_err()); // out of range
        // canonical order regardless of input order
        let a = Partition::new(4, vec![vec![3, 2], vec![1, 0]]).unwrap();
        let b = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn finer_examples() {
        let singles = Partition::singletons(4);
        let improper = Partition::improper(4);
        let pairs = pairs();
        let crossed = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(singles.is_finer_than(&pairs).unwrap());
        assert!(singles.is_finer_than(&improper).unwrap());
        assert!(pairs.is_finer_than(&improper).unwrap());
        assert!(!pairs.is_finer_than(&crossed).unwrap());
        assert!(!crossed.is_finer_than(&pairs).unwrap());
        assert!(pairs.is_finer_than(&pairs).unwrap());
        assert!(singles.is_finer_than(&Partition::singletons(5)).is_err());
    }

    /// All partitions of `0..n` by restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
            let n = labels.len();
            if i == n {
                let blocks = (0..=max).map(|b| {
                    (0..n).filter(|&e| labels[e] == b).collect::<Vec<_>>()
                });
                out.push(Partition::new(n, blocks.collect()).unwrap());
                return;
            }
            for l in 0..=max + 1 {
                labels[i] = l;
                rec(i + 1, max.max(l), labels, out);
            }
        }
        if n == 0 {
            return out;
        }
        rec(1, 0, &mut labels, &mut out);
        out
    }

    #[test]
    fn finer_is_a_partial_order() {
        for n in 1..=5 {
            let parts = all_partitions(n);
            for a in &parts {
                assert!(a.is_finer_than(a).unwrap());
                for b in &parts {
                    if a.is_finer_than(b).unwrap() && b.is_finer_than(a).unwrap() {
                        assert_eq!(a, b, "antisymmetry");
                    }
                    for c in &parts {
                        if a.is_finer_than(b).unwrap() && b.is_finer_than(c).unwrap() {
                            assert!(a.is_finer_than(c).unwrap(), "transitivity");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stability_examples() {
        let zero = rat(0, 1);
        // stochastic matrix with singleton row partition is stable on anything
        let m = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 4), rat(3, 4)],
        ])
        .unwrap();
        let singles = Partition::singletons(2);
        let improper = Partition::improper(2);
        assert!(is_stable_on(&m, &singles, &improper, &zero).unwrap());
        assert!(is_stable_on(&m, &singles, &singles, &zero).unwrap());

        // unequal block row sums
        let bad = Matrix::from_rows(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(0, 1)]])
            .unwrap();
        assert!(!is_stable_on(&bad, &improper, &improper, &zero).unwrap());
        assert_eq!(
            stability_violation(&bad, &improper, &improper, &zero).unwrap(),
            Some((0, 0))
        );
        assert!(matches!(
            reduce(&bad, &improper, &improper, &zero),
            Err(Error::NotStable {
                row_block: 0,
                col_block: 0
            })
        ));
    }

    #[test]
    fn least_fine_examples() {
        let zero = rat(0, 1);
        // identical rows: the improper partition
        let stable = Matrix::from_constant_rows(vec![rat(1, 3), rat(2, 3)], 3);
        let lf = least_fine_stable_partition(&stable, &Partition::singletons(2), &zero).unwrap();
        assert!(lf.is_improper());
        // identity: all row signatures distinct
        let id: Matrix<Rational> = Matrix::identity(3);
        let lf = least_fine_stable_partition(&id, &Partition::singletons(3), &zero).unwrap();
        assert!(lf.is_singletons());
    }

    #[test]
    fn least_fine_is_minimal_and_stable() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let tol = 1e-9f64;
        for _ in 0..50 {
            let rows = rng.gen_range(2..7);
            let cols = rng.gen_range(2..7);
            // random matrix with some duplicated row signatures
            let base: Vec<Vec<f64>> = (0..rows.min(3))
                .map(|_| (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let m = Matrix::from_rows(
                (0..rows)
                    .map(|_| base[rng.gen_range(0..base.len())].clone())
                    .collect(),
            )
            .unwrap();
            let sigma = Partition::singletons(cols);
            let delta = least_fine_stable_partition(&m, &sigma, &tol).unwrap();
            assert!(is_stable_on(&m, &delta, &sigma, &tol).unwrap());
            // merging any two blocks must break stability
            for a in 0..delta.block_count() {
                for b in (a + 1)..delta.block_count() {
                    let merged = delta.merge_blocks(a, b);
                    assert!(!is_stable_on(&m, &merged, &sigma, &tol).unwrap());
                }
            }
        }
    }

    #[test]
    fn reduce_identity_with_matching_blocks() {
        let zero = rat(0, 1);
        let id: Matrix<Rational> = Matrix::identity(4);
        let pairs = pairs();
        let reduced = reduce(&id, &pairs, &pairs, &zero).unwrap();
        assert_eq!(reduced, Matrix::identity(2));
    }

    #[test]
    fn similarity_is_reflexive_on_random_stable_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let tol = 0.0f64;
        for _ in 0..30 {
            let cols = rng.gen_range(2..6);
            let rows = rng.gen_range(2..6);
            let row: Vec<f64> = (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect();
            let m = Matrix::from_constant_rows(row, rows);
            let improper = Partition::improper(rows);
            let sigma = Partition::singletons(cols);
            assert!(similar(&m, &m, &improper, &sigma, &tol).unwrap());
        }
    }

    #[test]
    fn coefficient_examples() {
        // stable matrix: coefficient 0
        let pi = Matrix::from_constant_rows(vec![rat(1, 4); 4], 4);
        assert_eq!(alpha_bar(&pi), rat(0, 1));
        // identity: coefficient 1
        let id: Matrix<Rational> = Matrix::identity(2);
        assert_eq!(alpha_bar(&id), rat(1, 1));
        // improper partition reproduces alpha
        let improper = Partition::improper(2);
        assert_eq!(gamma_bar(&id, &improper).unwrap(), rat(1, 1));
    }
}
