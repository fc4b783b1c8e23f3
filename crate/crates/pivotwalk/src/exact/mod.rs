//! Exact transition matrices for the pivot and pivot+ chains.
//!
//! Matrices store integer proposal counts over one common per-matrix
//! denominator, so row-stochasticity, symmetry, and stationarity are checked
//! with integer arithmetic rather than tolerances. Storage is sparse
//! row-major: each row holds at most `N * |group| + 1` nonzeros while the
//! state count grows exponentially.
//!
//! Dump format: a `size denominator` header line, then one `row col count`
//! triple per line, sorted.

pub mod analysis;

use serde::{Deserialize, Serialize};

use crate::chain::pivot_move;
use crate::enumeration::StateSpace;
use crate::error::{Error, Result};
use crate::gmethod::{Matrix, Rational};
use crate::symmetry::enumerate_group;
use crate::walk::straight_walks;

/// A square nonnegative integer-count matrix; row `r` represents the
/// probability vector `counts / denominator`. Rows of a full transition
/// matrix sum to the denominator exactly; restrictions may be substochastic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    size: usize,
    denom: u64,
    rows: Vec<Vec<(u32, u64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixSummary {
    pub size: usize,
    pub denominator: u64,
    pub nnz: usize,
    pub symmetric: bool,
    pub irreducible: bool,
    pub aperiodic: bool,
}

impl TransitionMatrix {
    pub fn from_rows(size: usize, denom: u64, mut rows: Vec<Vec<(u32, u64)>>) -> TransitionMatrix {
        assert_eq!(rows.len(), size);
        for row in &mut rows {
            row.sort_unstable_by_key(|&(c, _)| c);
        }
        TransitionMatrix { size, denom, rows }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    pub fn row(&self, r: usize) -> &[(u32, u64)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(u32, u64)]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn count(&self, r: usize, c: usize) -> u64 {
        self.rows[r]
            .binary_search_by_key(&(c as u32), |&(col, _)| col)
            .map(|i| self.rows[r][i].1)
            .unwrap_or(0)
    }

    pub fn prob(&self, r: usize, c: usize) -> f64 {
        self.count(r, c) as f64 / self.denom as f64
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// True iff every row's counts sum exactly to the denominator.
    pub fn rows_sum_to_denominator(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().map(|&(_, c)| c).sum::<u64>() == self.denom)
    }

    /// True iff `count(a, b) == count(b, a)` for all pairs, integer equality.
    pub fn is_count_symmetric(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, row)| {
            row.iter()
                .all(|&(c, v)| self.count(c as usize, r) == v)
        })
    }

    /// Restriction to a contiguous index range; entries leaving the range are
    /// dropped, so the result is in general substochastic.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> TransitionMatrix {
        let lo = range.start;
        let rows = self.rows[range.clone()]
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|&&(c, _)| range.contains(&(c as usize)))
                    .map(|&(c, v)| (c - lo as u32, v))
                    .collect()
            })
            .collect();
        TransitionMatrix {
            size: range.len(),
            denom: self.denom,
            rows,
        }
    }

    /// The same matrix over exact rationals, entries `count / denominator`.
    pub fn to_rational(&self) -> Matrix<Rational> {
        let mut data = vec![Rational::new(0, 1); self.size * self.size];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                data[r * self.size + c as usize] = Rational::new(v as i64, self.denom as i64);
            }
        }
        Matrix::new(self.size, self.size, data).expect("shape is consistent")
    }

    pub fn summary(&self) -> MatrixSummary {
        MatrixSummary {
            size: self.size,
            denominator: self.denom,
            nnz: self.nnz(),
            symmetric: self.is_count_symmetric(),
            irreducible: analysis::is_irreducible(self),
            aperiodic: analysis::is_aperiodic(self),
        }
    }

    /// Serializes as `size denominator` then sorted `row col count` triples.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.size, self.denom);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                out.push_str(&format!("{r} {c} {v}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<TransitionMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let mut hp = header.split_whitespace();
        let size: usize = hp
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix size".into()))?;
        let denom: u64 = hp
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix denominator".into()))?;
        let mut rows = vec![Vec::new(); size];
        for line in lines {
            let mut parts = line.split_whitespace();
            let (r, c, v): (usize, u32, u64) = match (parts.next(), parts.next(), parts.next()) {
                (Some(r), Some(c), Some(v)) => (
                    r.parse().map_err(|e| Error::Parse(format!("{e}")))?,
                    c.parse().map_err(|e| Error::Parse(format!("{e}")))?,
                    v.parse().map_err(|e| Error::Parse(format!("{e}")))?,
                ),
                _ => return Err(Error::Parse(format!("bad triple line {line:?}"))),
            };
            if r >= size || c as usize >= size {
                return Err(Error::Parse(format!("entry ({r}, {c}) out of range")));
            }
            rows[r].push((c, v));
        }
        Ok(TransitionMatrix::from_rows(size, denom, rows))
    }
}

/// Builds the pivot transition matrix: for every state and every
/// (pivot, symmetry) pair, count the accepted candidate's column, or the
/// diagonal on rejection. Denominator `N * |group|`.
pub fn build_pivot_matrix(space: &StateSpace) -> Result<TransitionMatrix> {
    build_counts(space, 0)
}

/// The pivot+ chain's two transition matrices plus the per-class diagonal
/// blocks of the second one.
#[derive(Debug, Clone)]
pub struct PivotPlusMatrices {
    /// Opening jump: every row has count 1 on each straight-walk column,
    /// denominator 2d.
    pub p1: TransitionMatrix,
    /// All later transitions: pivots `1..N-1`, denominator `(N-1) * |group|`.
    pub p2: TransitionMatrix,
    /// `p2` restricted to each class block, in class order.
    pub blocks: Vec<TransitionMatrix>,
}

impl PivotPlusMatrices {
    /// True iff `p2` has no entry outside its class-diagonal blocks.
    pub fn off_block_entries_are_zero(&self) -> bool {
        self.blocks.iter().map(TransitionMatrix::nnz).sum::<usize>() == self.p2.nnz()
    }
}

pub fn build_pivot_plus_matrices(space: &StateSpace) -> Result<PivotPlusMatrices> {
    let n = space.walk_length();
    if n < 2 {
        return Err(Error::InvalidLength { min: 2, got: n });
    }
    let d = space.dimension();
    let straight_cols: Vec<u32> = straight_walks(d, n)?
        .iter()
        .map(|w| {
            space
                .index_of(w)
                .expect("straight walks are self-avoiding") as u32
        })
        .collect();
    let size = space.count();
    let p1_row: Vec<(u32, u64)> = straight_cols.iter().map(|&c| (c, 1)).collect();
    let p1 = TransitionMatrix::from_rows(size, 2 * d as u64, vec![p1_row; size]);

    let p2 = build_counts(space, 1)?;
    let blocks = space
        .class_offsets()
        .iter()
        .map(|&(start, len)| p2.restrict(start..start + len))
        .collect();
    Ok(PivotPlusMatrices { p1, p2, blocks })
}

fn build_counts(space: &StateSpace, min_pivot: usize) -> Result<TransitionMatrix> {
    let n = space.walk_length();
    let group = enumerate_group(space.dimension())?;
    let denom = ((n - min_pivot) * group.len()) as u64;
    let mut rows = Vec::with_capacity(space.count());
    for (alpha, walk) in space.walks().iter().enumerate() {
        let mut targets: Vec<u32> = Vec::with_capacity(denom as usize);
        for k in min_pivot..n {
            for t in &group {
                let candidate = pivot_move(walk, k, t).expect("pivot in range");
                if candidate.is_self_avoiding() {
                    let beta = space
                        .index_of(&candidate)
                        .expect("accepted candidate must be an enumerated walk");
                    targets.push(beta as u32);
                } else {
                    targets.push(alpha as u32);
                }
            }
        }
        targets.sort_unstable();
        let mut row: Vec<(u32, u64)> = Vec::new();
        for t in targets {
            match row.last_mut() {
                Some((c, v)) if *c == t => *v += 1,
                _ => row.push((t, 1)),
            }
        }
        rows.push(row);
    }
    Ok(TransitionMatrix::from_rows(space.count(), denom, rows))
}
