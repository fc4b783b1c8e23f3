//! Lattice points, unit steps, and self-avoiding walks on Z^d.
//!
//! A walk is stored as its step sequence plus the derived site sequence
//! `w_0, ..., w_N` (flat, row-major, `d` coordinates per site). The origin is
//! always `w_0`. A walk is *self-avoiding* when all sites are pairwise
//! distinct.
//!
//! Text format: one walk per line, steps as comma-separated signed 1-based
//! axis indices (`+1,+2,-1` means east, north, west on Z^2). Blank lines and
//! lines starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A unit step: one coordinate axis together with a direction sign.
///
/// The canonical order of the 2d possible steps is
/// `+1, +2, ..., +d, -1, -2, ..., -d`; [`Step::rank`] returns the position in
/// that order. Enumeration and class blocks follow it everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    axis: u8,
    negative: bool,
}

impl Step {
    pub fn new(axis: usize, negative: bool) -> Step {
        debug_assert!(axis < u8::MAX as usize);
        Step {
            axis: axis as u8,
            negative,
        }
    }

    pub fn positive(axis: usize) -> Step {
        Step::new(axis, false)
    }

    pub fn negative(axis: usize) -> Step {
        Step::new(axis, true)
    }

    /// 0-based coordinate axis this step moves along.
    pub fn axis(self) -> usize {
        self.axis as usize
    }

    pub fn is_negative(self) -> bool {
        self.negative
    }

    pub fn sign(self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn reversed(self) -> Step {
        Step {
            axis: self.axis,
            negative: !self.negative,
        }
    }

    /// Position in the canonical step order for dimension `d`.
    pub fn rank(self, d: usize) -> usize {
        self.axis() + if self.negative { d } else { 0 }
    }

    pub fn from_rank(rank: usize, d: usize) -> Step {
        debug_assert!(rank < 2 * d);
        Step::new(rank % d, rank >= d)
    }

    /// Signed 1-based axis index, the text encoding of a step.
    pub fn to_signed(self) -> i64 {
        self.sign() * (self.axis() as i64 + 1)
    }

    pub fn from_signed(v: i64, d: usize) -> Result<Step> {
        if v == 0 {
            return Err(Error::Parse("step 0 is not a signed axis index".into()));
        }
        let axis = v.unsigned_abs() as usize - 1;
        if axis >= d {
            return Err(Error::AxisOutOfRange { axis, d });
        }
        Ok(Step::new(axis, v < 0))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.to_signed())
    }
}

/// The 2d signed unit steps of Z^d in canonical order.
pub fn unit_steps(d: usize) -> Vec<Step> {
    (0..2 * d).map(|r| Step::from_rank(r, d)).collect()
}

/// An N-step walk on Z^d starting at the origin, with derived sites.
///
/// Construction only guarantees unit steps from the origin; use
/// [`Walk::is_self_avoiding`] to test site distinctness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    d: usize,
    steps: Vec<Step>,
    points: Vec<i64>,
}

impl Walk {
    /// Builds a walk from its step sequence, deriving the site sequence by
    /// prefix sums. Fails if any step's axis is out of range for `d`.
    pub fn from_steps(d: usize, steps: Vec<Step>) -> Result<Walk> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut points = vec![0i64; (steps.len() + 1) * d];
        for (i, s) in steps.iter().enumerate() {
            if s.axis() >= d {
                return Err(Error::AxisOutOfRange { axis: s.axis(), d });
            }
            let (done, rest) = points.split_at_mut((i + 1) * d);
            rest[..d].copy_from_slice(&done[i * d..]);
            rest[s.axis()] += s.sign();
        }
        Ok(Walk { d, steps, points })
    }

    pub fn from_signed_steps(d: usize, signed: &[i64]) -> Result<Walk> {
        let steps = signed
            .iter()
            .map(|&v| Step::from_signed(v, d))
            .collect::<Result<Vec<_>>>()?;
        Walk::from_steps(d, steps)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Number of steps N (the walk has N+1 sites).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Coordinates of site `i` (0 ≤ i ≤ N).
    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        self.points.chunks_exact(self.d)
    }

    pub fn end(&self) -> &[i64] {
        self.point(self.len())
    }

    /// Squared Euclidean distance from the origin to the last site.
    pub fn end_to_end_sq(&self) -> i64 {
        self.end().iter().map(|&c| c * c).sum()
    }

    /// True iff all N+1 sites are pairwise distinct. Expected O(N) via a
    /// hashed site index.
    pub fn is_self_avoiding(&self) -> bool {
        let mut seen: HashSet<&[i64]> = HashSet::with_capacity(self.len() + 1);
        self.points().all(|p| seen.insert(p))
    }

    /// The first step, identifying which first-step class the walk belongs to.
    ///
    /// Panics on a zero-step walk.
    pub fn class_key(&self) -> Step {
        self.steps[0]
    }

    /// Canonical text encoding: comma-separated signed axis indices.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        parts.join(",")
    }

    pub fn parse(line: &str, d: usize) -> Result<Walk> {
        let line = line.trim();
        if line.is_empty() {
            return Walk::from_steps(d, Vec::new());
        }
        let signed = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad step token {tok:?}: {e}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Walk::from_signed_steps(d, &signed)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The 2d straight N-step walks: all steps equal, one walk per unit step.
pub fn straight_walks(d: usize, n: usize) -> Result<Vec<Walk>> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if n == 0 {
        return Err(Error::InvalidLength { min: 1, got: 0 });
    }
    unit_steps(d)
        .into_iter()
        .map(|s| Walk::from_steps(d, vec![s; n]))
        .collect()
}

/// Straight N-step walk in the direction of one unit step.
pub fn straight_walk(d: usize, n: usize, direction: Step) -> Result<Walk> {
    if n == 0 {
        return Err(Error::InvalidLength { min: 1, got: 0 });
    }
    Walk::from_steps(d, vec![direction; n])
}

/// Parses the walk text format: one walk per line, `#` comments and blank
/// lines skipped.
pub fn read_walks(text: &str, d: usize) -> Result<Vec<Walk>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Walk::parse(l, d))
        .collect()
}

pub fn write_walks(walks: &[Walk]) -> String {
    let mut out = String::new();
    for w in walks {
        out.push_str(&w.to_text());
        out.push('\n');
    }
    out
}
