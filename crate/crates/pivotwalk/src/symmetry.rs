//! The symmetry group of the Z^d lattice: signed permutations of the axes.
//!
//! Every orthogonal transformation of R^d mapping Z^d onto itself permutes
//! the coordinate axes and flips some of their signs, so the group has
//! exactly `2^d * d!` elements. Everything here is exact integer arithmetic;
//! no floating point is involved.

use crate::error::{Error, Result};
use crate::walk::Step;

/// Largest dimension for which [`enumerate_group`] will materialize the group.
pub const MAX_GROUP_DIMENSION: usize = 6;

/// A signed permutation `T` acting as `T(x)[i] = ±x[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSymmetry {
    perm: Vec<u8>,
    negate: Vec<bool>,
}

impl LatticeSymmetry {
    pub fn identity(d: usize) -> LatticeSymmetry {
        LatticeSymmetry {
            perm: (0..d as u8).collect(),
            negate: vec![false; d],
        }
    }

    /// Builds a signed permutation; `perm` must be a bijection of `0..d`.
    pub fn new(perm: Vec<usize>, negate: Vec<bool>) -> Result<LatticeSymmetry> {
        let d = perm.len();
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if negate.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: negate.len(),
            });
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "perm {perm:?} is not a bijection of 0..{d}"
                )));
            }
            seen[p] = true;
        }
        Ok(LatticeSymmetry {
            perm: perm.into_iter().map(|p| p as u8).collect(),
            negate,
        })
    }

    pub fn dimension(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
            && self.negate.iter().all(|&n| !n)
    }

    /// Applies the transformation to a lattice point.
    pub fn apply_point(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        let mut out = vec![0; x.len()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_into(&self, x: &[i64], out: &mut [i64]) {
        for i in 0..self.perm.len() {
            let v = x[self.perm[i] as usize];
            out[i] = if self.negate[i] { -v } else { v };
        }
    }

    /// Image of a unit step; the group maps the 2d unit steps onto themselves.
    pub fn apply_step(&self, s: Step) -> Step {
        // T(e_a) is supported on the output axis i with perm[i] = a.
        let i = self
            .perm
            .iter()
            .position(|&p| p as usize == s.axis())
            .expect("perm is a bijection");
        Step::new(i, s.is_negative() ^ self.negate[i])
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &LatticeSymmetry) -> Result<LatticeSymmetry> {
        let d = self.dimension();
        if other.dimension() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: other.dimension(),
            });
        }
        let mut perm = vec![0u8; d];
        let mut negate = vec![false; d];
        for i in 0..d {
            let mid = self.perm[i] as usize;
            perm[i] = other.perm[mid];
            negate[i] = self.negate[i] ^ other.negate[mid];
        }
        Ok(LatticeSymmetry { perm, negate })
    }

    pub fn inverse(&self) -> LatticeSymmetry {
        let d = self.dimension();
        let mut perm = vec![0u8; d];
        let mut negate = vec![false; d];
        for i in 0..d {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            negate[j] = self.negate[i];
        }
        LatticeSymmetry { perm, negate }
    }
}

fn permutations_lex(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    let mut used = vec![false; d];
    fn rec(d: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in 0..d {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(d, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(d, &mut cur, &mut used, &mut out);
    out
}

/// All `2^d * d!` lattice symmetries, in lexicographic (perm, signs) order.
/// The identity comes first. Guarded at `d <= MAX_GROUP_DIMENSION`.
pub fn enumerate_group(d: usize) -> Result<Vec<LatticeSymmetry>> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if d > MAX_GROUP_DIMENSION {
        return Err(Error::GroupTooLarge {
            d,
            max: MAX_GROUP_DIMENSION,
        });
    }
    let mut out = Vec::with_capacity((1usize << d) * (1..=d).product::<usize>());
    for perm in permutations_lex(d) {
        let perm8: Vec<u8> = perm.iter().map(|&p| p as u8).collect();
        for bits in 0..(1u32 << d) {
            // negate[0] is the most significant bit so all-positive sorts first
            let negate: Vec<bool> = (0..d).map(|i| (bits >> (d - 1 - i)) & 1 == 1).collect();
            out.push(LatticeSymmetry {
                perm: perm8.clone(),
                negate,
            });
        }
    }
    Ok(out)
}
