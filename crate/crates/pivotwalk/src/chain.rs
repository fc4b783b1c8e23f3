//! The pivot and pivot+ samplers as streaming Markov chains.
//!
//! One transition of the plain pivot chain: draw a pivot index `k` uniformly
//! from `{0, ..., N-1}` and a lattice symmetry `T` uniformly from the group,
//! fix the first `k` steps, transform the tail about the pivot site, and
//! accept the candidate iff it is self-avoiding (otherwise keep the current
//! walk).
//!
//! The pivot+ chain (`N >= 2`) replaces its first transition by a uniform
//! jump onto one of the 2d straight walks, and afterwards draws the pivot
//! from `{1, ..., N-1}` only. Because `k >= 1` fixes the first step, the
//! chain never leaves the first-step class it lands in at time 1.
//!
//! Randomness: a seeded counter-based generator; replica `r` of a run uses
//! dedicated substream `r` of the same seed, so multi-replica results are
//! reproducible and independent of scheduling.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::StateSpace;
use crate::error::{Error, Result};
use crate::symmetry::{enumerate_group, LatticeSymmetry};
use crate::walk::{straight_walk, unit_steps, Step, Walk};

/// Which sampler a chain run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Pivot,
    PivotPlus,
}

impl Variant {
    /// Smallest admissible walk length.
    pub fn min_walk_length(self) -> usize {
        match self {
            Variant::Pivot => 1,
            Variant::PivotPlus => 2,
        }
    }

    /// Smallest admissible pivot index.
    pub fn min_pivot(self) -> usize {
        match self {
            Variant::Pivot => 0,
            Variant::PivotPlus => 1,
        }
    }
}

/// Configuration for a chain run. `initial` defaults to the straight walk in
/// the `+1` direction; for pivot+ the initial walk is discarded by the first
/// transition regardless.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub d: usize,
    pub walk_length: usize,
    pub variant: Variant,
    pub seed: u64,
    pub initial: Option<Walk>,
}

impl ChainConfig {
    pub fn new(d: usize, walk_length: usize, variant: Variant, seed: u64) -> ChainConfig {
        ChainConfig {
            d,
            walk_length,
            variant,
            seed,
            initial: None,
        }
    }

    fn validated_initial(&self) -> Result<Walk> {
        if self.walk_length < self.variant.min_walk_length() {
            return Err(Error::InvalidConfig(format!(
                "{:?} requires walk length >= {}, got {}",
                self.variant,
                self.variant.min_walk_length(),
                self.walk_length
            )));
        }
        let initial = match &self.initial {
            Some(w) => w.clone(),
            None => straight_walk(self.d, self.walk_length, Step::positive(0))?,
        };
        if initial.dimension() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: initial.dimension(),
            });
        }
        if initial.len() != self.walk_length {
            return Err(Error::InvalidConfig(format!(
                "initial walk has {} steps, expected {}",
                initial.len(),
                self.walk_length
            )));
        }
        if !initial.is_self_avoiding() {
            return Err(Error::InvalidConfig(
                "initial walk is not self-avoiding".into(),
            ));
        }
        Ok(initial)
    }
}

fn substream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The pivot move: keep sites `w_0..w_k`, map every later site `w_i` to
/// `w_k + T(w_i - w_k)`. The result may or may not be self-avoiding.
///
/// Valid pivots are `0..N-1`; `k = N` would be a no-op and is rejected.
pub fn pivot_move(walk: &Walk, k: usize, t: &LatticeSymmetry) -> Result<Walk> {
    if t.dimension() != walk.dimension() {
        return Err(Error::DimensionMismatch {
            expected: walk.dimension(),
            got: t.dimension(),
        });
    }
    let n = walk.len();
    if k >= n {
        return Err(Error::PivotOutOfRange { k, n });
    }
    // Transforming the tail sites about w_k is the same as transforming the
    // tail steps in place, since site differences map linearly.
    let mut steps = walk.steps().to_vec();
    for s in &mut steps[k..] {
        *s = t.apply_step(*s);
    }
    Walk::from_steps(walk.dimension(), steps)
}

fn propose<R: Rng + ?Sized>(
    walk: &Walk,
    min_pivot: usize,
    group: &[LatticeSymmetry],
    rng: &mut R,
) -> (Walk, bool) {
    let n = walk.len();
    assert!(min_pivot < n, "empty pivot range for an {n}-step walk");
    let k = rng.gen_range(min_pivot..n);
    let t = &group[rng.gen_range(0..group.len())];
    let candidate = pivot_move(walk, k, t).expect("pivot index in range");
    if candidate.is_self_avoiding() {
        (candidate, true)
    } else {
        (walk.clone(), false)
    }
}

/// One pivot transition; each of the `N * |group|` (pivot, symmetry) pairs is
/// drawn with equal probability.
pub fn pivot_step<R: Rng + ?Sized>(
    walk: &Walk,
    group: &[LatticeSymmetry],
    rng: &mut R,
) -> Walk {
    propose(walk, 0, group, rng).0
}

/// One pivot+ transition: as [`pivot_step`] but with pivots `1..N-1` only, so
/// the first step (and hence the class) is preserved. Requires `N >= 2`.
pub fn pivot_plus_step<R: Rng + ?Sized>(
    walk: &Walk,
    group: &[LatticeSymmetry],
    rng: &mut R,
) -> Walk {
    propose(walk, 1, group, rng).0
}

/// The pivot+ opening jump: a uniform draw from the 2d straight walks.
pub fn pivot_plus_init<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Walk> {
    if n < 2 {
        return Err(Error::InvalidLength { min: 2, got: n });
    }
    let dirs = unit_steps(d);
    let dir = dirs[rng.gen_range(0..dirs.len())];
    straight_walk(d, n, dir)
}

/// Receives every visited walk of a chain run, including the initial one at
/// time 0.
pub trait Observer {
    fn observe(&mut self, time: u64, walk: &Walk);
}

/// Records the whole trajectory.
#[derive(Debug, Default)]
pub struct TrajectoryRecorder {
    pub walks: Vec<Walk>,
}

impl Observer for TrajectoryRecorder {
    fn observe(&mut self, _time: u64, walk: &Walk) {
        self.walks.push(walk.clone());
    }
}

/// Verifies that the first step never changes from time 1 on.
#[derive(Debug, Default)]
pub struct ClassConstancyCheck {
    first: Option<Step>,
    pub violated: bool,
}

impl Observer for ClassConstancyCheck {
    fn observe(&mut self, time: u64, walk: &Walk) {
        if time == 0 || walk.is_empty() {
            return;
        }
        match self.first {
            None => self.first = Some(walk.class_key()),
            Some(k) => {
                if k != walk.class_key() {
                    self.violated = true;
                }
            }
        }
    }
}

/// A sequential chain driver holding the current walk, the symmetry group,
/// and its own random substream.
#[derive(Debug, Clone)]
pub struct ChainRunner {
    variant: Variant,
    d: usize,
    seed: u64,
    group: Arc<Vec<LatticeSymmetry>>,
    initial: Walk,
    walk: Walk,
    rng: ChaCha8Rng,
    time: u64,
    proposed: u64,
    accepted: u64,
}

impl ChainRunner {
    /// Validates the configuration and prepares substream 0.
    pub fn new(cfg: &ChainConfig) -> Result<ChainRunner> {
        let initial = cfg.validated_initial()?;
        let group = Arc::new(enumerate_group(cfg.d)?);
        Ok(ChainRunner {
            variant: cfg.variant,
            d: cfg.d,
            seed: cfg.seed,
            group,
            walk: initial.clone(),
            initial,
            rng: substream_rng(cfg.seed, 0),
            time: 0,
            proposed: 0,
            accepted: 0,
        })
    }

    /// A fresh runner for replica `stream`, sharing the group and initial
    /// walk but using its own random substream.
    pub fn fork(&self, stream: u64) -> ChainRunner {
        ChainRunner {
            variant: self.variant,
            d: self.d,
            seed: self.seed,
            group: Arc::clone(&self.group),
            walk: self.initial.clone(),
            initial: self.initial.clone(),
            rng: substream_rng(self.seed, stream),
            time: 0,
            proposed: 0,
            accepted: 0,
        }
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn group(&self) -> &[LatticeSymmetry] {
        &self.group
    }

    /// Fraction of pivot proposals accepted (the pivot+ opening jump is not a
    /// proposal).
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            f64::NAN
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Advances the chain by one transition and returns the new walk.
    pub fn step(&mut self) -> &Walk {
        match self.variant {
            Variant::Pivot => {
                let (w, accepted) = propose(&self.walk, 0, &self.group, &mut self.rng);
                self.proposed += 1;
                self.accepted += u64::from(accepted);
                self.walk = w;
            }
            Variant::PivotPlus => {
                if self.time == 0 {
                    self.walk = pivot_plus_init(self.d, self.walk.len(), &mut self.rng)
                        .expect("length validated");
                } else {
                    let (w, accepted) = propose(&self.walk, 1, &self.group, &mut self.rng);
                    self.proposed += 1;
                    self.accepted += u64::from(accepted);
                    self.walk = w;
                }
            }
        }
        self.time += 1;
        &self.walk
    }
}

/// Summary of a single-chain run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub transitions: u64,
    pub proposed: u64,
    pub accepted: u64,
    pub final_walk: String,
    pub final_end_to_end_sq: i64,
}

/// Drives one chain for `n_steps` transitions, streaming every visited walk
/// (the initial one at time 0 included) to the observers.
pub fn run_chain(
    cfg: &ChainConfig,
    n_steps: u64,
    observers: &mut [&mut dyn Observer],
) -> Result<RunSummary> {
    let mut runner = ChainRunner::new(cfg)?;
    for obs in observers.iter_mut() {
        obs.observe(0, runner.walk());
    }
    for t in 1..=n_steps {
        runner.step();
        for obs in observers.iter_mut() {
            obs.observe(t, runner.walk());
        }
    }
    Ok(RunSummary {
        transitions: n_steps,
        proposed: runner.proposed,
        accepted: runner.accepted,
        final_walk: runner.walk().to_text(),
        final_end_to_end_sq: runner.walk().end_to_end_sq(),
    })
}

/// State histogram at a fixed time over independent replicas.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicaHistogram {
    pub replicas: u64,
    pub time: u64,
    pub counts: Vec<u64>,
    /// For pivot+, true iff no replica ever changed class after time 1.
    /// Vacuously true for the plain pivot variant.
    pub class_constant: bool,
}

impl ReplicaHistogram {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.replicas as f64)
            .collect()
    }
}

/// Runs `replicas` independent chains for `n_steps` transitions each and
/// histograms the state at the final time. Replica `r` uses substream `r`;
/// counts merge by addition, so the result does not depend on scheduling.
pub fn replica_histogram(
    cfg: &ChainConfig,
    space: &StateSpace,
    n_steps: u64,
    replicas: u64,
) -> Result<ReplicaHistogram> {
    if space.dimension() != cfg.d || space.walk_length() != cfg.walk_length {
        return Err(Error::InvalidConfig(
            "state space does not match the chain configuration".into(),
        ));
    }
    let proto = ChainRunner::new(cfg)?;
    let track_class = cfg.variant == Variant::PivotPlus;
    let size = space.count();
    let (counts, class_ok) = (0..replicas)
        .into_par_iter()
        .fold(
            || (vec![0u64; size], true),
            |(mut counts, mut ok), r| {
                let mut runner = proto.fork(r);
                let mut class: Option<Step> = None;
                for _ in 0..n_steps {
                    runner.step();
                    if track_class {
                        let key = runner.walk().class_key();
                        match class {
                            None => class = Some(key),
                            Some(c) => ok &= c == key,
                        }
                    }
                }
                let idx = space
                    .index_of(runner.walk())
                    .expect("sampled walk must be in the enumerated space");
                counts[idx] += 1;
                (counts, ok)
            },
        )
        .reduce(
            || (vec![0u64; size], true),
            |(mut a, ok_a), (b, ok_b)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, ok_a && ok_b)
            },
        );
    Ok(ReplicaHistogram {
        replicas,
        time: n_steps,
        counts,
        class_constant: class_ok,
    })
}

/// End-to-end distance statistics at a fixed time over independent replicas.
/// Accumulators are exact integers, so the merge is order-independent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndToEndStats {
    pub replicas: u64,
    pub time: u64,
    pub mean_sq: f64,
    pub rms: f64,
    pub var_sq: f64,
}

pub fn replica_end_to_end(
    cfg: &ChainConfig,
    n_steps: u64,
    replicas: u64,
) -> Result<EndToEndStats> {
    let proto = ChainRunner::new(cfg)?;
    let (sum_sq, sum_quad) = (0..replicas)
        .into_par_iter()
        .fold(
            || (0u128, 0u128),
            |(s2, s4), r| {
                let mut runner = proto.fork(r);
                for _ in 0..n_steps {
                    runner.step();
                }
                let r2 = runner.walk().end_to_end_sq() as u128;
                (s2 + r2, s4 + r2 * r2)
            },
        )
        .reduce(|| (0u128, 0u128), |(a2, a4), (b2, b4)| (a2 + b2, a4 + b4));
    let n = replicas as f64;
    let mean_sq = sum_sq as f64 / n;
    let var_sq = sum_quad as f64 / n - mean_sq * mean_sq;
    Ok(EndToEndStats {
        replicas,
        time: n_steps,
        mean_sq,
        rms: mean_sq.sqrt(),
        var_sq,
    })
}
