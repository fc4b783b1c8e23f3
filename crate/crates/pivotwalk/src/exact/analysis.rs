//! Chain analysis on exact transition matrices: irreducibility and
//! aperiodicity of the support digraph, distribution evolution in double or
//! exact rational arithmetic, convergence audits, and the pivot-vs-pivot+
//! comparison scan.

use num::integer::gcd;
use num::{BigRational, FromPrimitive, One, Zero};
use serde::{Deserialize, Serialize};

use super::{PivotPlusMatrices, TransitionMatrix};
use crate::enumeration::StateSpace;
use crate::error::{Error, Result};
use crate::walk::{straight_walk, Step, Walk};

fn forward_reachable(m: &TransitionMatrix, start: usize) -> Vec<bool> {
    let mut seen = vec![false; m.size()];
    if m.size() == 0 {
        return seen;
    }
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in m.row(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                stack.push(v as usize);
            }
        }
    }
    seen
}

fn reverse_reachable(m: &TransitionMatrix, start: usize) -> Vec<bool> {
    let mut radj = vec![Vec::new(); m.size()];
    for (u, row) in m.rows().enumerate() {
        for &(v, _) in row {
            radj[v as usize].push(u as u32);
        }
    }
    let mut seen = vec![false; m.size()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &p in &radj[u] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                stack.push(p as usize);
            }
        }
    }
    seen
}

/// True iff the support digraph is strongly connected (every state reaches
/// and is reached by state 0). A 1x1 matrix is irreducible.
pub fn is_irreducible(m: &TransitionMatrix) -> bool {
    if m.size() <= 1 {
        return true;
    }
    forward_reachable(m, 0).into_iter().all(|b| b)
        && reverse_reachable(m, 0).into_iter().all(|b| b)
}

/// True iff the matrix is irreducible and the gcd of its cycle lengths is 1,
/// computed from BFS levels: the period divides `dist(u) + 1 - dist(v)` for
/// every support edge `(u, v)`.
pub fn is_aperiodic(m: &TransitionMatrix) -> bool {
    if m.size() == 0 {
        return false;
    }
    if !is_irreducible(m) {
        return false;
    }
    let mut dist = vec![u64::MAX; m.size()];
    let mut queue = std::collections::VecDeque::new();
    dist[0] = 0;
    queue.push_back(0usize);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in m.row(u) {
            if dist[v as usize] == u64::MAX {
                dist[v as usize] = dist[u] + 1;
                queue.push_back(v as usize);
            }
        }
    }
    let mut g: i64 = 0;
    for (u, row) in m.rows().enumerate() {
        for &(v, _) in row {
            let diff = dist[u] as i64 + 1 - dist[v as usize] as i64;
            g = gcd(g, diff.abs());
        }
    }
    g == 1
}

/// Point mass at `i`.
pub fn point_mass(size: usize, i: usize) -> Vec<f64> {
    let mut q = vec![0.0; size];
    q[i] = 1.0;
    q
}

pub fn uniform(size: usize) -> Vec<f64> {
    vec![1.0 / size as f64; size]
}

/// One step of `q -> q * M` in double precision.
pub fn evolve_step(q: &[f64], m: &TransitionMatrix) -> Vec<f64> {
    assert_eq!(q.len(), m.size());
    let inv_d = 1.0 / m.denominator() as f64;
    let mut out = vec![0.0; q.len()];
    for (a, row) in m.rows().enumerate() {
        let w = q[a] * inv_d;
        if w == 0.0 {
            continue;
        }
        for &(b, c) in row {
            out[b as usize] += w * c as f64;
        }
    }
    out
}

/// The trajectory `[q_0, q_1, ..., q_n]` under a fixed kernel.
pub fn evolve(q0: &[f64], m: &TransitionMatrix, horizon: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(q0.to_vec());
    for _ in 0..horizon {
        let next = evolve_step(out.last().unwrap(), m);
        out.push(next);
    }
    out
}

pub fn uniform_exact(size: usize) -> Vec<BigRational> {
    let p = BigRational::new(1.into(), (size as i64).into());
    vec![p; size]
}

/// One step of `q -> q * M` in exact rational arithmetic.
pub fn evolve_step_exact(q: &[BigRational], m: &TransitionMatrix) -> Vec<BigRational> {
    assert_eq!(q.len(), m.size());
    let denom = BigRational::from_u64(m.denominator()).unwrap();
    let mut out = vec![BigRational::zero(); q.len()];
    for (a, row) in m.rows().enumerate() {
        if q[a].is_zero() {
            continue;
        }
        let w = &q[a] / &denom;
        for &(b, c) in row {
            out[b as usize] += &w * BigRational::from_u64(c).unwrap();
        }
    }
    out
}

/// True iff the uniform distribution is exactly stationary: `u * M == u`
/// in rational arithmetic. Works for the full pivot matrix (uniform on the
/// walk space) and for each class block (uniform on the class).
pub fn uniform_is_stationary_exact(m: &TransitionMatrix) -> bool {
    let u = uniform_exact(m.size());
    let step = evolve_step_exact(&u, m);
    let sum: BigRational = step.iter().sum();
    step == u && sum.is_one()
}

/// `sum_i |p_i - q_i|`; twice the total variation distance, in `[0, 2]` for
/// probability vectors.
pub fn l1_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

/// Smallest `M >= m0` such that the pivot matrix restricted to the walks
/// extending the first `M` steps of `tau` is irreducible. Always terminates:
/// `M = N` restricts to a single state.
pub fn minimal_irreducible_prefix(
    space: &StateSpace,
    pivot: &TransitionMatrix,
    tau: &Walk,
    m0: usize,
) -> Result<usize> {
    let n = space.walk_length();
    if space.index_of(tau).is_none() {
        return Err(Error::InvalidArgument(
            "tau is not a walk of the given state space".into(),
        ));
    }
    if m0 == 0 || m0 > n {
        return Err(Error::InvalidArgument(format!(
            "m0 must be in 1..={n}, got {m0}"
        )));
    }
    for m in m0..=n {
        let prefix = Walk::from_steps(space.dimension(), tau.steps()[..m].to_vec())?;
        let range = space.prefix_class(&prefix)?;
        if is_irreducible(&pivot.restrict(range)) {
            return Ok(m);
        }
    }
    unreachable!("the full-length prefix is a 1x1 restriction");
}

/// Options for the convergence audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditOptions {
    /// Audit succeeds once the L1 distance falls below this.
    pub tolerance: f64,
    pub horizon: u64,
    /// Slack allowed when checking that distances never increase.
    pub monotone_slack: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            tolerance: 1e-6,
            horizon: 10_000,
            monotone_slack: 1e-12,
        }
    }
}

/// Distance trajectory summary for one evolution track.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrackReport {
    pub label: String,
    /// First time the distance fell below tolerance, if it did.
    pub first_below: Option<u64>,
    pub monotone: bool,
    pub final_distance: f64,
}

/// Convergence audit of both chains toward their stationary laws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitAuditReport {
    pub tolerance: f64,
    pub horizon: u64,
    pub tracks: Vec<TrackReport>,
    /// At the time the pivot+ track first met tolerance, all components of
    /// the evolved law matched `1/(2d * a_N)` within tolerance.
    pub plus_rows_match_closed_form: bool,
    pub all_below_tolerance: bool,
    pub all_monotone: bool,
}

struct TrackRun {
    first_below: Option<u64>,
    monotone: bool,
    final_distance: f64,
    final_law: Vec<f64>,
}

fn run_track(
    mut q: Vec<f64>,
    target: &[f64],
    step: impl Fn(&[f64], u64) -> Vec<f64>,
    opts: &AuditOptions,
) -> TrackRun {
    let mut prev = l1_distance(&q, target).expect("lengths match");
    let mut monotone = true;
    let mut first_below = if prev < opts.tolerance { Some(0) } else { None };
    let mut n = 0;
    while first_below.is_none() && n < opts.horizon {
        n += 1;
        q = step(&q, n);
        let dist = l1_distance(&q, target).expect("lengths match");
        if dist > prev + opts.monotone_slack {
            monotone = false;
        }
        if dist < opts.tolerance {
            first_below = Some(n);
        }
        prev = dist;
    }
    TrackRun {
        first_below,
        monotone,
        final_distance: prev,
        final_law: q,
    }
}

/// Evolves point masses started in every class under the pivot kernel, the
/// pivot+ kernels, and each class block, reporting when each track meets
/// tolerance and whether distances were monotone along the way.
pub fn limit_audit(
    space: &StateSpace,
    pivot: &TransitionMatrix,
    plus: &PivotPlusMatrices,
    opts: &AuditOptions,
) -> Result<LimitAuditReport> {
    let d = space.dimension();
    let size = space.count();
    let pi = uniform(size);
    let counts = space.counts();
    let closed_form = 1.0 / (2.0 * d as f64 * counts.a_n as f64);

    let mut tracks = Vec::new();
    let mut plus_rows_ok = true;

    for rank in 0..2 * d {
        let rep = straight_walk(d, space.walk_length(), Step::from_rank(rank, d))?;
        let rep_idx = space.index_of(&rep).expect("straight walks enumerated");
        let label_dir = rep.class_key().to_string();

        let run = run_track(
            point_mass(size, rep_idx),
            &pi,
            |q, _| evolve_step(q, pivot),
            opts,
        );
        tracks.push(TrackReport {
            label: format!("pivot from {label_dir}"),
            first_below: run.first_below,
            monotone: run.monotone,
            final_distance: run.final_distance,
        });

        let run = run_track(
            point_mass(size, rep_idx),
            &pi,
            |q, n| {
                if n == 1 {
                    evolve_step(q, &plus.p1)
                } else {
                    evolve_step(q, &plus.p2)
                }
            },
            opts,
        );
        if run.first_below.is_some() {
            plus_rows_ok &= run
                .final_law
                .iter()
                .all(|&p| (p - closed_form).abs() <= opts.tolerance);
        }
        tracks.push(TrackReport {
            label: format!("pivot+ from {label_dir}"),
            first_below: run.first_below,
            monotone: run.monotone,
            final_distance: run.final_distance,
        });

        let block = &plus.blocks[rank];
        let rho = uniform(block.size());
        let (start, _) = space.class_offsets()[rank];
        let run = run_track(
            point_mass(block.size(), rep_idx - start),
            &rho,
            |q, _| evolve_step(q, block),
            opts,
        );
        tracks.push(TrackReport {
            label: format!("block {label_dir} toward its uniform law"),
            first_below: run.first_below,
            monotone: run.monotone,
            final_distance: run.final_distance,
        });
    }

    let all_below = tracks.iter().all(|t| t.first_below.is_some());
    let all_monotone = tracks.iter().all(|t| t.monotone);
    Ok(LimitAuditReport {
        tolerance: opts.tolerance,
        horizon: opts.horizon,
        tracks,
        plus_rows_match_closed_form: plus_rows_ok,
        all_below_tolerance: all_below,
        all_monotone,
    })
}

/// One row of the comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub l1_pivot: f64,
    pub l1_pivot_plus: f64,
    /// Whether the pivot+ law is at least as close to uniform at this time.
    pub p_leads: bool,
}

/// The full pivot-vs-pivot+ distance table from a shared point-mass start.
///
/// `n0_empirical` is the smallest time from which `p_leads` holds through the
/// horizon, if any. This is an observation about one finite run; nothing
/// stronger is claimed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureScanReport {
    pub d: usize,
    pub walk_length: usize,
    pub horizon: u64,
    pub start_walk: String,
    pub rows: Vec<ScanRow>,
    pub n0_empirical: Option<u64>,
    pub final_l1_pivot: f64,
    pub final_l1_pivot_plus: f64,
}

impl ConjectureScanReport {
    /// The fixed-column CSV table: `n,l1_pivot,l1_pivot_plus,p_leads`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,l1_pivot,l1_pivot_plus,p_leads\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.n, row.l1_pivot, row.l1_pivot_plus, row.p_leads
            ));
        }
        out
    }
}

/// Evolves the same point mass under both chains and tabulates L1 distances
/// to the uniform law at every time up to the horizon.
pub fn conjecture_scan(
    space: &StateSpace,
    pivot: &TransitionMatrix,
    plus: &PivotPlusMatrices,
    start: &Walk,
    horizon: u64,
) -> Result<ConjectureScanReport> {
    let idx = space.index_of(start).ok_or_else(|| {
        Error::InvalidArgument("start walk is not in the state space".into())
    })?;
    let size = space.count();
    let pi = uniform(size);
    let mut q = point_mass(size, idx);
    let mut p = q.clone();
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    for n in 0..=horizon {
        if n > 0 {
            q = evolve_step(&q, pivot);
            p = if n == 1 {
                evolve_step(&p, &plus.p1)
            } else {
                evolve_step(&p, &plus.p2)
            };
        }
        let l1_pivot = l1_distance(&q, &pi)?;
        let l1_pivot_plus = l1_distance(&p, &pi)?;
        rows.push(ScanRow {
            n,
            l1_pivot,
            l1_pivot_plus,
            p_leads: l1_pivot_plus <= l1_pivot,
        });
    }
    // smallest n0 >= 1 with p_leads everywhere in [n0, horizon]
    let mut n0 = None;
    for row in rows.iter().skip(1).rev() {
        if row.p_leads {
            n0 = Some(row.n);
        } else {
            break;
        }
    }
    let last = rows.last().unwrap();
    Ok(ConjectureScanReport {
        d: space.dimension(),
        walk_length: space.walk_length(),
        horizon,
        start_walk: start.to_text(),
        final_l1_pivot: last.l1_pivot,
        final_l1_pivot_plus: last.l1_pivot_plus,
        n0_empirical: n0,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{build_pivot_matrix, build_pivot_plus_matrices};

    #[test]
    fn identity_matrix_is_reducible() {
        let rows = (0..3).map(|i| vec![(i as u32, 1u64)]).collect();
        let id = TransitionMatrix::from_rows(3, 1, rows);
        assert!(!is_irreducible(&id));
        assert!(!is_aperiodic(&id));

        let one = TransitionMatrix::from_rows(1, 1, vec![vec![(0, 1)]]);
        assert!(is_irreducible(&one));
        assert!(is_aperiodic(&one));
    }

    #[test]
    fn two_cycle_has_period_two() {
        let rows = vec![vec![(1u32, 1u64)], vec![(0u32, 1u64)]];
        let swap = TransitionMatrix::from_rows(2, 1, rows);
        assert!(is_irreducible(&swap));
        assert!(!is_aperiodic(&swap));
    }

    #[test]
    fn pivot_matrix_is_irreducible_and_aperiodic() {
        let space = StateSpace::enumerate(2, 4).unwrap();
        let p = build_pivot_matrix(&space).unwrap();
        assert!(is_irreducible(&p));
        assert!(is_aperiodic(&p));
    }

    #[test]
    fn class_blocks_are_irreducible_and_aperiodic() {
        for n in 2..=6 {
            let space = StateSpace::enumerate(2, n).unwrap();
            let m = build_pivot_plus_matrices(&space).unwrap();
            for q in &m.blocks {
                assert!(is_irreducible(q), "n={n}");
                assert!(is_aperiodic(q), "n={n}");
            }
        }
    }

    #[test]
    fn uniform_is_stationary_in_exact_arithmetic() {
        for (d, n) in [(1, 3), (2, 2), (2, 3)] {
            let space = StateSpace::enumerate(d, n).unwrap();
            let p = build_pivot_matrix(&space).unwrap();
            assert!(uniform_is_stationary_exact(&p));
            if n >= 2 {
                let m = build_pivot_plus_matrices(&space).unwrap();
                for q in &m.blocks {
                    assert!(uniform_is_stationary_exact(q));
                }
            }
        }
    }

    #[test]
    fn l1_examples() {
        let pi = uniform(4);
        assert_eq!(l1_distance(&pi, &pi).unwrap(), 0.0);
        let a = point_mass(4, 0);
        let b = point_mass(4, 2);
        assert_eq!(l1_distance(&a, &b).unwrap(), 2.0);
        // point mass vs uniform on n states: 2(n-1)/n
        let n = 5;
        let dist = l1_distance(&point_mass(n, 1), &uniform(n)).unwrap();
        assert!((dist - 2.0 * (n as f64 - 1.0) / n as f64).abs() < 1e-15);
        assert!(l1_distance(&a, &pi[..3]).is_err());
    }

    #[test]
    fn float_evolution_matches_exact_evolution() {
        let space = StateSpace::enumerate(2, 3).unwrap();
        let p = build_pivot_matrix(&space).unwrap();
        let mut qf = point_mass(space.count(), 0);
        let mut qe: Vec<BigRational> = qf
            .iter()
            .map(|&x| BigRational::from_f64(x).unwrap())
            .collect();
        for _ in 0..6 {
            qf = evolve_step(&qf, &p);
            qe = evolve_step_exact(&qe, &p);
        }
        for (f, e) in qf.iter().zip(&qe) {
            let e_f64 = e.numer().to_string().parse::<f64>().unwrap()
                / e.denom().to_string().parse::<f64>().unwrap();
            assert!((f - e_f64).abs() < 1e-12);
        }
    }

    #[test]
    fn evolve_with_zero_horizon_returns_the_start() {
        let space = StateSpace::enumerate(2, 2).unwrap();
        let p = build_pivot_matrix(&space).unwrap();
        let q0 = point_mass(space.count(), 3);
        let traj = evolve(&q0, &p, 0);
        assert_eq!(traj, vec![q0]);
    }

    #[test]
    fn minimal_prefix_boundaries() {
        let space = StateSpace::enumerate(2, 4).unwrap();
        let p = build_pivot_matrix(&space).unwrap();
        let tau = straight_walk(2, 4, Step::positive(0)).unwrap();
        assert_eq!(minimal_irreducible_prefix(&space, &p, &tau, 1).unwrap(), 1);
        assert_eq!(minimal_irreducible_prefix(&space, &p, &tau, 4).unwrap(), 4);
        assert!(minimal_irreducible_prefix(&space, &p, &tau, 0).is_err());
        assert!(minimal_irreducible_prefix(&space, &p, &tau, 5).is_err());
    }

    #[test]
    fn audit_converges_on_a_small_space() {
        let space = StateSpace::enumerate(2, 3).unwrap();
        let pivot = build_pivot_matrix(&space).unwrap();
        let plus = build_pivot_plus_matrices(&space).unwrap();
        let report = limit_audit(&space, &pivot, &plus, &AuditOptions::default()).unwrap();
        assert!(report.all_below_tolerance);
        assert!(report.all_monotone);
        assert!(report.plus_rows_match_closed_form);
    }

    #[test]
    fn scan_starts_at_the_shared_point_mass_distance() {
        let space = StateSpace::enumerate(2, 3).unwrap();
        let pivot = build_pivot_matrix(&space).unwrap();
        let plus = build_pivot_plus_matrices(&space).unwrap();
        let start = straight_walk(2, 3, Step::positive(0)).unwrap();
        let scan = conjecture_scan(&space, &pivot, &plus, &start, 200).unwrap();
        assert_eq!(scan.rows.len(), 201);
        let c = space.count() as f64;
        let expect = 2.0 * (c - 1.0) / c;
        assert_eq!(scan.rows[0].l1_pivot, scan.rows[0].l1_pivot_plus);
        assert!((scan.rows[0].l1_pivot - expect).abs() < 1e-14);
        assert!(scan.final_l1_pivot < 1e-4);
        assert!(scan.final_l1_pivot_plus < 1e-4);
    }
}
