//! Command entry points behind the CLI: enumeration audits, exact chain
//! audits, the convergence comparison scan, sampler runs, and the
//! grouped-matrix demo. Each command builds a serializable report and
//! optionally writes its files under an output directory.
//!
//! Every report embeds a metadata block (tool version, configuration echo,
//! seed), and every command is deterministic given its configuration, so
//! fixed-seed reruns produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::{
    replica_end_to_end, replica_histogram, run_chain, ChainConfig, EndToEndStats,
    ReplicaHistogram, TrajectoryRecorder, Variant,
};
use crate::enumeration::{Counts, StateSpace, DEFAULT_CAPACITY};
use crate::error::{Error, Result};
use crate::exact::analysis::{
    conjecture_scan, evolve_step, limit_audit, uniform, uniform_is_stationary_exact,
    AuditOptions, ConjectureScanReport, LimitAuditReport,
};
use crate::exact::{build_pivot_matrix, build_pivot_plus_matrices, MatrixSummary};
use crate::gmethod::fixtures::{run_fixture_demo, FixtureReport};
use crate::gmethod::theorems::{run_random_suite, SuiteReport};
use crate::walk::{straight_walk, Step, Walk};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Metadata block carried by every report and file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub command: serde_json::Value,
    pub seed: u64,
}

impl Meta {
    fn new<C: Serialize>(cfg: &C, seed: u64) -> Meta {
        Meta {
            version: VERSION.to_string(),
            command: serde_json::to_value(cfg).expect("configs serialize"),
            seed,
        }
    }

    /// `#`-prefixed header lines for text and CSV outputs.
    fn text_header(&self) -> String {
        format!(
            "# pivotwalk {}\n# cfg: {}\n# seed: {}\n",
            self.version, self.command, self.seed
        )
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerateCfg {
    pub d: usize,
    pub walk_length: usize,
    pub capacity: usize,
    pub dump_walks: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl EnumerateCfg {
    pub fn new(d: usize, walk_length: usize) -> EnumerateCfg {
        EnumerateCfg {
            d,
            walk_length,
            capacity: DEFAULT_CAPACITY,
            dump_walks: false,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub meta: Meta,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "c_N")]
    pub c_n: u64,
    #[serde(rename = "a_N")]
    pub a_n: u64,
    pub class_sizes: Vec<u64>,
    pub identity_holds: bool,
}

impl EnumerateReport {
    pub fn passed(&self) -> bool {
        self.identity_holds
    }

    pub fn to_csv(&self) -> String {
        format!(
            "d,N,c_N,a_N,class_sizes,identity_holds\n{},{},{},{},{},{}\n",
            self.d,
            self.n,
            self.c_n,
            self.a_n,
            self.class_sizes
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            self.identity_holds
        )
    }
}

/// Enumerates the walk space and audits the class partition: equal class
/// sizes, total = 2d times the class size.
pub fn cmd_enumerate(cfg: &EnumerateCfg) -> Result<EnumerateReport> {
    let space = StateSpace::enumerate_with_capacity(cfg.d, cfg.walk_length, cfg.capacity)?;
    let Counts {
        c_n,
        a_n,
        class_sizes,
    } = space.counts();
    let identity_holds =
        space.verify_partition_identity() && c_n == 2 * cfg.d as u64 * a_n;
    let meta = Meta::new(cfg, 0);
    let report = EnumerateReport {
        meta,
        d: cfg.d,
        n: cfg.walk_length,
        c_n,
        a_n,
        class_sizes,
        identity_holds,
    };
    if let Some(dir) = &cfg.out {
        write_out(dir, "enumerate.json", &to_pretty_json(&report))?;
        if cfg.dump_walks {
            let mut text = report.meta.text_header();
            text.push_str(&space.to_walk_text());
            write_out(dir, "walks.txt", &text)?;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditCfg {
    pub d: usize,
    pub walk_length: usize,
    pub horizon: u64,
    pub tolerance: f64,
    pub norm_tolerance: f64,
    pub dump_matrices: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl AuditCfg {
    pub fn new(d: usize, walk_length: usize) -> AuditCfg {
        AuditCfg {
            d,
            walk_length,
            horizon: 10_000,
            tolerance: 1e-6,
            norm_tolerance: 1e-12,
            dump_matrices: false,
            out: None,
        }
    }
}

/// The exact structural checks of the audit, all integer or rational.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralChecks {
    pub pivot_rows_stochastic: bool,
    pub pivot_count_symmetric: bool,
    pub pivot_irreducible: bool,
    pub pivot_aperiodic: bool,
    pub pivot_uniform_stationary_exact: bool,
    pub blocks_count_symmetric: bool,
    pub blocks_irreducible: bool,
    pub blocks_aperiodic: bool,
    pub blocks_uniform_stationary_exact: bool,
    pub p1_rows_identical_uniform_on_straights: bool,
    pub p2_off_block_zero: bool,
    pub float_rows_normalized: bool,
}

impl StructuralChecks {
    pub fn all_pass(&self) -> bool {
        self.pivot_rows_stochastic
            && self.pivot_count_symmetric
            && self.pivot_irreducible
            && self.pivot_aperiodic
            && self.pivot_uniform_stationary_exact
            && self.blocks_count_symmetric
            && self.blocks_irreducible
            && self.blocks_aperiodic
            && self.blocks_uniform_stationary_exact
            && self.p1_rows_identical_uniform_on_straights
            && self.p2_off_block_zero
            && self.float_rows_normalized
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub meta: Meta,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub states: usize,
    pub checks: StructuralChecks,
    pub pivot_matrix: MatrixSummary,
    pub p1_matrix: MatrixSummary,
    pub p2_matrix: MatrixSummary,
    pub limit: LimitAuditReport,
    pub passed: bool,
}

impl AuditReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,result\n");
        let checks = serde_json::to_value(&self.checks).expect("serializes");
        for (name, value) in checks.as_object().expect("struct map") {
            out.push_str(&format!("{name},{value}\n"));
        }
        for track in &self.limit.tracks {
            out.push_str(&format!(
                "limit: {} first_below={:?} monotone={},{}\n",
                track.label,
                track.first_below,
                track.monotone,
                track.first_below.is_some() && track.monotone
            ));
        }
        out.push_str(&format!("passed,{}\n", self.passed));
        out
    }
}

/// Builds the exact transition matrices and verifies their structure, exact
/// stationarity, and convergence toward the uniform laws.
pub fn cmd_audit(cfg: &AuditCfg) -> Result<AuditReport> {
    let space = StateSpace::enumerate(cfg.d, cfg.walk_length)?;
    let pivot = build_pivot_matrix(&space)?;
    let plus = build_pivot_plus_matrices(&space)?;

    let p1_ok = {
        let first = plus.p1.row(0);
        let straights: Vec<usize> = crate::walk::straight_walks(cfg.d, cfg.walk_length)?
            .iter()
            .map(|w| space.index_of(w).expect("straight walks enumerated"))
            .collect();
        let row_ok = first.len() == 2 * cfg.d
            && first
                .iter()
                .all(|&(c, v)| v == 1 && straights.contains(&(c as usize)))
            && plus.p1.denominator() == 2 * cfg.d as u64;
        row_ok && (0..space.count()).all(|r| plus.p1.row(r) == first)
    };

    // Double-precision normalization of each row, within the norm tolerance.
    let float_rows_normalized = {
        let q = uniform(space.count());
        let total: f64 = evolve_step(&q, &pivot).iter().sum();
        (total - 1.0).abs() <= cfg.norm_tolerance
    };

    let checks = StructuralChecks {
        pivot_rows_stochastic: pivot.rows_sum_to_denominator(),
        pivot_count_symmetric: pivot.is_count_symmetric(),
        pivot_irreducible: crate::exact::analysis::is_irreducible(&pivot),
        pivot_aperiodic: crate::exact::analysis::is_aperiodic(&pivot),
        pivot_uniform_stationary_exact: uniform_is_stationary_exact(&pivot),
        blocks_count_symmetric: plus.blocks.iter().all(|q| q.is_count_symmetric()),
        blocks_irreducible: plus
            .blocks
            .iter()
            .all(crate::exact::analysis::is_irreducible),
        blocks_aperiodic: plus.blocks.iter().all(crate::exact::analysis::is_aperiodic),
        blocks_uniform_stationary_exact: plus
            .blocks
            .iter()
            .all(uniform_is_stationary_exact),
        p1_rows_identical_uniform_on_straights: p1_ok,
        p2_off_block_zero: plus.off_block_entries_are_zero(),
        float_rows_normalized,
    };

    let opts = AuditOptions {
        tolerance: cfg.tolerance,
        horizon: cfg.horizon,
        monotone_slack: 1e-12,
    };
    let limit = limit_audit(&space, &pivot, &plus, &opts)?;

    let passed = checks.all_pass() && limit.all_below_tolerance && limit.all_monotone
        && limit.plus_rows_match_closed_form;
    let report = AuditReport {
        meta: Meta::new(cfg, 0),
        d: cfg.d,
        n: cfg.walk_length,
        states: space.count(),
        checks,
        pivot_matrix: pivot.summary(),
        p1_matrix: plus.p1.summary(),
        p2_matrix: plus.p2.summary(),
        limit,
        passed,
    };
    if let Some(dir) = &cfg.out {
        write_out(dir, "audit.json", &to_pretty_json(&report))?;
        if cfg.dump_matrices {
            write_out(dir, "pivot.mat", &pivot.dump())?;
            write_out(dir, "p1.mat", &plus.p1.dump())?;
            write_out(dir, "p2.mat", &plus.p2.dump())?;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// conjecture
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureCfg {
    pub d: usize,
    pub walk_length: usize,
    pub horizon: u64,
    /// Shared start walk for both chains, in walk text format. Defaults to
    /// the straight walk in the `+1` direction.
    pub start: Option<String>,
    pub tolerance: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl ConjectureCfg {
    pub fn new(d: usize, walk_length: usize, horizon: u64) -> ConjectureCfg {
        ConjectureCfg {
            d,
            walk_length,
            horizon,
            start: None,
            tolerance: 1e-4,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureSummary {
    pub n0_empirical: Option<u64>,
    pub horizon: u64,
    pub matched_start: String,
    pub final_l1_pivot: f64,
    pub final_l1_pivot_plus: f64,
    pub both_below_tolerance: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub meta: Meta,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub summary: ConjectureSummary,
    pub scan: ConjectureScanReport,
    /// Convergence of both columns; the per-step lead is reported, never
    /// asserted.
    pub passed: bool,
}

impl ConjectureReport {
    pub fn to_csv(&self) -> String {
        self.scan.to_csv()
    }
}

/// Evolves both chains from one shared point mass and tabulates their L1
/// distances to uniform at every time.
pub fn cmd_conjecture(cfg: &ConjectureCfg) -> Result<ConjectureReport> {
    let space = StateSpace::enumerate(cfg.d, cfg.walk_length)?;
    let pivot = build_pivot_matrix(&space)?;
    let plus = build_pivot_plus_matrices(&space)?;
    let start = match &cfg.start {
        Some(text) => Walk::parse(text, cfg.d)?,
        None => straight_walk(cfg.d, cfg.walk_length, Step::positive(0))?,
    };
    let scan = conjecture_scan(&space, &pivot, &plus, &start, cfg.horizon)?;
    let both_below =
        scan.final_l1_pivot < cfg.tolerance && scan.final_l1_pivot_plus < cfg.tolerance;
    let summary = ConjectureSummary {
        n0_empirical: scan.n0_empirical,
        horizon: cfg.horizon,
        matched_start: scan.start_walk.clone(),
        final_l1_pivot: scan.final_l1_pivot,
        final_l1_pivot_plus: scan.final_l1_pivot_plus,
        both_below_tolerance: both_below,
    };
    let meta = Meta::new(cfg, 0);
    if let Some(dir) = &cfg.out {
        let mut csv = meta.text_header();
        csv.push_str(&scan.to_csv());
        write_out(dir, "conjecture.csv", &csv)?;
        let summary_doc = serde_json::json!({
            "meta": meta,
            "n0_empirical": summary.n0_empirical,
            "horizon": summary.horizon,
            "matched_start": summary.matched_start,
        });
        write_out(dir, "conjecture_summary.json", &to_pretty_json(&summary_doc))?;
    }
    Ok(ConjectureReport {
        meta,
        d: cfg.d,
        n: cfg.walk_length,
        passed: both_below,
        summary,
        scan,
    })
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observe {
    Histogram,
    End2end,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleCfg {
    pub d: usize,
    pub walk_length: usize,
    pub variant: Variant,
    pub n_steps: u64,
    pub seed: u64,
    pub replicas: u64,
    pub observe: Observe,
    pub dump_trajectory: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleReport {
    pub meta: Meta,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub variant: Variant,
    pub n_steps: u64,
    pub replicas: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<ReplicaHistogram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_to_end: Option<EndToEndStats>,
    pub class_constant: bool,
    pub passed: bool,
}

impl SampleReport {
    pub fn to_csv(&self) -> String {
        if let Some(hist) = &self.histogram {
            let mut out = String::from("state,count,frequency\n");
            for (i, &c) in hist.counts.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{c},{}\n",
                    c as f64 / hist.replicas as f64
                ));
            }
            out
        } else if let Some(stats) = &self.end_to_end {
            format!(
                "replicas,time,mean_sq,rms,var_sq\n{},{},{},{},{}\n",
                stats.replicas, stats.time, stats.mean_sq, stats.rms, stats.var_sq
            )
        } else {
            String::from("no observable aggregated\n")
        }
    }
}

/// Runs seeded replica chains and aggregates either a state histogram (needs
/// the space to be enumerable) or end-to-end distance statistics (any N).
pub fn cmd_sample(cfg: &SampleCfg) -> Result<SampleReport> {
    let chain_cfg = ChainConfig::new(cfg.d, cfg.walk_length, cfg.variant, cfg.seed);
    let meta = Meta::new(cfg, cfg.seed);
    let mut histogram = None;
    let mut end_to_end = None;
    let mut class_constant = true;

    match cfg.observe {
        Observe::Histogram => {
            let space = StateSpace::enumerate(cfg.d, cfg.walk_length)?;
            let hist = replica_histogram(&chain_cfg, &space, cfg.n_steps, cfg.replicas)?;
            class_constant = hist.class_constant;
            if let Some(dir) = &cfg.out {
                let mut csv = meta.text_header();
                csv.push_str("state,walk,count,frequency\n");
                for (i, &c) in hist.counts.iter().enumerate() {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        i,
                        space.walk(i).to_text(),
                        c,
                        c as f64 / hist.replicas as f64
                    ));
                }
                write_out(dir, "histogram.csv", &csv)?;
            }
            histogram = Some(hist);
        }
        Observe::End2end => {
            let stats = replica_end_to_end(&chain_cfg, cfg.n_steps, cfg.replicas)?;
            if let Some(dir) = &cfg.out {
                let mut csv = meta.text_header();
                csv.push_str("replicas,time,mean_sq,rms,var_sq\n");
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    stats.replicas, stats.time, stats.mean_sq, stats.rms, stats.var_sq
                ));
                write_out(dir, "end2end.csv", &csv)?;
            }
            end_to_end = Some(stats);
        }
    }

    if cfg.dump_trajectory {
        if let Some(dir) = &cfg.out {
            let mut rec = TrajectoryRecorder::default();
            run_chain(&chain_cfg, cfg.n_steps, &mut [&mut rec])?;
            let mut text = meta.text_header();
            text.push_str(&crate::walk::write_walks(&rec.walks));
            write_out(dir, "trajectory.txt", &text)?;
        }
    }

    let report = SampleReport {
        meta,
        d: cfg.d,
        n: cfg.walk_length,
        variant: cfg.variant,
        n_steps: cfg.n_steps,
        replicas: cfg.replicas,
        histogram,
        end_to_end,
        class_constant,
        passed: class_constant,
    };
    if let Some(dir) = &cfg.out {
        write_out(dir, "sample_summary.json", &to_pretty_json(&report))?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// gmethod
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GmethodCfg {
    pub seed: u64,
    pub cases: u32,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl GmethodCfg {
    pub fn new(seed: u64, cases: u32) -> GmethodCfg {
        GmethodCfg {
            seed,
            cases,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GmethodReport {
    pub meta: Meta,
    pub fixtures: FixtureReport,
    /// Random stochastic chains: all three product laws checked.
    pub stochastic_suite: SuiteReport,
    /// Random nonnegative (non-stochastic) chains: the coefficient bound is
    /// inapplicable there by design.
    pub general_suite: SuiteReport,
    pub passed: bool,
}

impl GmethodReport {
    pub fn to_csv(&self) -> String {
        format!(
            "check,result\nfixture_verdict,{}\nfixture_reduction,{}\nfixture_product_row,{}\nstochastic_suite_all_pass,{}\ngeneral_suite_all_pass,{}\npassed,{}\n",
            self.fixtures.verdict,
            self.fixtures.reduction.join(";"),
            self.fixtures.product_row.join(";"),
            self.stochastic_suite.all_pass,
            self.general_suite.all_pass,
            self.passed
        )
    }
}

/// Runs the exact fixture demo and the randomized product-law suites.
pub fn cmd_gmethod(cfg: &GmethodCfg) -> Result<GmethodReport> {
    let fixtures = run_fixture_demo();
    let stochastic_suite = run_random_suite(cfg.seed, cfg.cases, true);
    let general_suite = run_random_suite(cfg.seed.wrapping_add(1), cfg.cases, false);
    let passed = fixtures.passed() && stochastic_suite.all_pass && general_suite.all_pass;
    let report = GmethodReport {
        meta: Meta::new(cfg, cfg.seed),
        fixtures,
        stochastic_suite,
        general_suite,
        passed,
    };
    if let Some(dir) = &cfg.out {
        write_out(dir, "gmethod.json", &to_pretty_json(&report))?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

/// Quick validation shared by the CLI before dispatch.
pub fn validate_dimension(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if d > crate::symmetry::MAX_GROUP_DIMENSION {
        return Err(Error::GroupTooLarge {
            d,
            max: crate::symmetry::MAX_GROUP_DIMENSION,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_reports_the_identity() {
        let report = cmd_enumerate(&EnumerateCfg::new(2, 5)).unwrap();
        assert_eq!(report.c_n, 284);
        assert_eq!(report.a_n, 71);
        assert!(report.identity_holds);
        assert!(report.passed());
    }

    #[test]
    fn enumerate_propagates_capacity_errors() {
        let mut cfg = EnumerateCfg::new(2, 8);
        cfg.capacity = 10;
        assert!(matches!(
            cmd_enumerate(&cfg),
            Err(Error::CapacityExceeded { cap: 10 })
        ));
    }

    #[test]
    fn audit_passes_on_a_trivial_space() {
        // d=1: the two straight walks; class blocks are 1x1.
        let report = cmd_audit(&AuditCfg::new(1, 3)).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.states, 2);
    }

    #[test]
    fn conjecture_row_count_and_convergence() {
        let report = cmd_conjecture(&ConjectureCfg::new(2, 3, 200)).unwrap();
        assert_eq!(report.scan.rows.len(), 201);
        assert!(report.summary.both_below_tolerance);
        assert_eq!(report.summary.matched_start, "+1,+1,+1");
    }

    #[test]
    fn sample_histogram_smoke() {
        let cfg = SampleCfg {
            d: 2,
            walk_length: 3,
            variant: Variant::PivotPlus,
            n_steps: 4,
            seed: 7,
            replicas: 2_000,
            observe: Observe::Histogram,
            dump_trajectory: false,
            out: None,
        };
        let report = cmd_sample(&cfg).unwrap();
        let hist = report.histogram.unwrap();
        assert_eq!(hist.counts.iter().sum::<u64>(), 2_000);
        assert!(report.class_constant);
    }

    #[test]
    fn gmethod_demo_and_suites_pass() {
        let report = cmd_gmethod(&GmethodCfg::new(99, 25)).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.fixtures.verdict, "exact");
    }
}
