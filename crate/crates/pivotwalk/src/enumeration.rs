//! Exhaustive backtracking enumeration of the N-step self-avoiding walks.
//!
//! The enumerated list is the canonical state ordering used by every exact
//! computation in the crate: walks are grouped contiguously by first step
//! (classes in canonical step order) and sorted lexicographically by step
//! sequence within each class. Because the full list is lexicographic, the
//! walks extending any fixed prefix always form one contiguous index range.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::{unit_steps, Step, Walk};

/// Default enumeration cap, in walks.
pub const DEFAULT_CAPACITY: usize = 1_000_000;

/// The fully enumerated walk space for one `(d, N)`, with class blocks and a
/// walk-to-index lookup. Immutable after construction.
#[derive(Debug, Clone)]
pub struct StateSpace {
    d: usize,
    n: usize,
    walks: Vec<Walk>,
    index: HashMap<Vec<Step>, u32>,
    class_offsets: Vec<(usize, usize)>,
}

/// Exact counts: total walks, walks per first-step class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub c_n: u64,
    pub a_n: u64,
    pub class_sizes: Vec<u64>,
}

impl StateSpace {
    pub fn enumerate(d: usize, n: usize) -> Result<StateSpace> {
        StateSpace::enumerate_with_capacity(d, n, DEFAULT_CAPACITY)
    }

    pub fn enumerate_with_capacity(d: usize, n: usize, cap: usize) -> Result<StateSpace> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if n == 0 {
            return Err(Error::InvalidLength { min: 1, got: 0 });
        }
        let mut walks = Vec::new();
        let mut class_offsets = Vec::with_capacity(2 * d);
        for first in unit_steps(d) {
            let start = walks.len();
            enumerate_class(d, n, first, cap, &mut walks)?;
            class_offsets.push((start, walks.len() - start));
        }
        let index = walks
            .iter()
            .enumerate()
            .map(|(i, w)| (w.steps().to_vec(), i as u32))
            .collect();
        Ok(StateSpace {
            d,
            n,
            walks,
            index,
            class_offsets,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Step count N of every walk in the space.
    pub fn walk_length(&self) -> usize {
        self.n
    }

    /// Number of states, `c_N`.
    pub fn count(&self) -> usize {
        self.walks.len()
    }

    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    pub fn walk(&self, i: usize) -> &Walk {
        &self.walks[i]
    }

    pub fn index_of(&self, w: &Walk) -> Option<usize> {
        self.index.get(w.steps()).map(|&i| i as usize)
    }

    /// `(start, len)` of each first-step class block, in canonical step order.
    pub fn class_offsets(&self) -> &[(usize, usize)] {
        &self.class_offsets
    }

    /// Class rank of the state at `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.walks[i].class_key().rank(self.d)
    }

    pub fn counts(&self) -> Counts {
        Counts {
            c_n: self.walks.len() as u64,
            a_n: self.class_offsets[0].1 as u64,
            class_sizes: self.class_offsets.iter().map(|&(_, l)| l as u64).collect(),
        }
    }

    /// True iff all 2d class sizes are equal and they sum to the total count.
    pub fn verify_partition_identity(&self) -> bool {
        let first = self.class_offsets[0].1;
        let equal = self.class_offsets.iter().all(|&(_, l)| l == first);
        let total: usize = self.class_offsets.iter().map(|&(_, l)| l).sum();
        equal && total == self.count()
    }

    /// Index range of all walks extending the given self-avoiding prefix.
    ///
    /// The range may be empty (a trapped prefix has no full-length
    /// extensions). A zero-length prefix matches everything.
    pub fn prefix_class(&self, prefix: &Walk) -> Result<Range<usize>> {
        if prefix.dimension() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: prefix.dimension(),
            });
        }
        let m = prefix.len();
        if m > self.n {
            return Err(Error::PrefixTooLong { m, n: self.n });
        }
        if !prefix.is_self_avoiding() {
            return Err(Error::InvalidArgument(
                "prefix walk is not self-avoiding".into(),
            ));
        }
        let cmp = |w: &Walk| -> std::cmp::Ordering {
            let wr = w.steps()[..m].iter().map(|s| s.rank(self.d));
            let pr = prefix.steps().iter().map(|s| s.rank(self.d));
            wr.cmp(pr)
        };
        let lo = self.walks.partition_point(|w| cmp(w) == std::cmp::Ordering::Less);
        let hi = self.walks.partition_point(|w| cmp(w) != std::cmp::Ordering::Greater);
        Ok(lo..hi)
    }

    /// Exact uniform draw: first a uniform class, then a uniform member.
    ///
    /// Classes all have the same size, so the result is uniform over the
    /// whole space with probability `1/c_N` per walk.
    pub fn reference_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Walk {
        let class = rng.gen_range(0..self.class_offsets.len());
        let (start, len) = self.class_offsets[class];
        &self.walks[start + rng.gen_range(0..len)]
    }

    /// Walk text dump of every state, in canonical order.
    pub fn to_walk_text(&self) -> String {
        crate::walk::write_walks(&self.walks)
    }
}

struct Backtracker {
    d: usize,
    n: usize,
    steps: Vec<Step>,
    path: Vec<Step>,
    site: Vec<i64>,
    occupied: HashSet<Vec<i64>>,
    cap: usize,
}

impl Backtracker {
    fn extend(&mut self, out: &mut Vec<Walk>) -> Result<()> {
        if self.path.len() == self.n {
            if out.len() >= self.cap {
                return Err(Error::CapacityExceeded { cap: self.cap });
            }
            out.push(Walk::from_steps(self.d, self.path.clone()).expect("axes validated"));
            return Ok(());
        }
        for i in 0..self.steps.len() {
            let s = self.steps[i];
            self.site[s.axis()] += s.sign();
            if self.occupied.insert(self.site.clone()) {
                self.path.push(s);
                let res = self.extend(out);
                self.path.pop();
                self.occupied.remove(&self.site);
                if res.is_err() {
                    self.site[s.axis()] -= s.sign();
                    return res;
                }
            }
            self.site[s.axis()] -= s.sign();
        }
        Ok(())
    }
}

fn enumerate_class(d: usize, n: usize, first: Step, cap: usize, out: &mut Vec<Walk>) -> Result<()> {
    let origin = vec![0i64; d];
    let mut site = origin.clone();
    site[first.axis()] += first.sign();
    let mut occupied = HashSet::new();
    occupied.insert(origin);
    occupied.insert(site.clone());
    let mut dfs = Backtracker {
        d,
        n,
        steps: unit_steps(d),
        path: vec![first],
        site,
        occupied,
        cap,
    };
    dfs.extend(out)
}
