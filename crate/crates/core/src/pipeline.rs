//! End-to-end solving: greedy matching, kernelization, then the dynamic
//! program on a decomposition built from a vertex cover.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{make_nice, td_from_vertex_cover, DecompError, NiceDecomposition};
use crate::dp::{extract_witness, run_dp, table_size_bound, DpError, DpOptions, DpRun};
use crate::graph::{
    greedy_maximal_matching, vertex_cover_from_matching, CoverError, EdgeSet, Graph,
};
use crate::kernel::{kernelize, KernelError, KernelOutcome};
use crate::oracle::{upper_eds_exact, OracleConfig, OracleError, DEFAULT_MAX_EDGES};

pub const DEFAULT_MAX_WIDTH: usize = 14;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("parameter k must be non-negative, got {0}")]
    NegativeK(i64),
    #[error("decomposition has bags of {bag} vertices, above the cap of {cap} (raise it with --max-width)")]
    WidthCap { bag: usize, cap: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Dp(#[from] DpError),
}

impl SolveError {
    /// Whether the error comes from a size limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, SolveError::WidthCap { .. } | SolveError::Oracle(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    MatchingEarlyYes,
    KernelDecided,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub kernel: bool,
    pub witness: bool,
    /// Largest bag size the dynamic program accepts.
    pub max_width: usize,
    pub dp: DpOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            kernel: true,
            witness: false,
            max_width: DEFAULT_MAX_WIDTH,
            dp: DpOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpSummary {
    pub width: usize,
    pub nodes: usize,
    pub max_table: usize,
    pub table_bound: u128,
}

impl DpSummary {
    fn new(g: &Graph, run: &DpRun) -> Self {
        DpSummary {
            width: run.width,
            nodes: run.stats.len(),
            max_table: run.max_table,
            table_bound: table_size_bound(run.width, g.n(), g.m()),
        }
    }
}

/// The instance the dynamic program ran on after kernelization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub n: usize,
    pub m: usize,
    pub k: i64,
    pub gamma_prime: Option<usize>,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: i64,
    pub decision: bool,
    pub stage: Stage,
    /// Upper edge domination number of the input graph, when it was computed.
    pub gamma_prime: Option<usize>,
    /// 1-indexed endpoints in the input graph's numbering.
    pub witness: Option<Vec<(usize, usize)>>,
    /// The witness is a solution of the reduced instance, not of the input.
    pub witness_on_reduced: bool,
    pub reduced: Option<Reduced>,
    pub dp: Option<DpSummary>,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

struct Timer(BTreeMap<&'static str, f64>);

impl Timer {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(stage).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }
}

/// Builds the nice decomposition the pipeline uses: a path of bags from the
/// endpoints of a greedy maximal matching.
pub fn cover_decomposition(g: &Graph) -> Result<NiceDecomposition, SolveError> {
    let cover = vertex_cover_from_matching(g, &greedy_maximal_matching(g))?;
    Ok(make_nice(g, &td_from_vertex_cover(g, &cover)?)?)
}

pub struct DpOutcome {
    pub run: DpRun,
    pub witness: EdgeSet,
    pub summary: DpSummary,
}

/// Runs the dynamic program on the pipeline decomposition, refusing bags
/// larger than `max_width`.
pub fn dp_solve(g: &Graph, max_width: usize, opts: DpOptions) -> Result<DpOutcome, SolveError> {
    let nd = cover_decomposition(g)?;
    let bag = nd.width() + 1;
    if bag > max_width {
        return Err(SolveError::WidthCap { bag, cap: max_width });
    }
    let run = run_dp(g, &nd, opts)?;
    let witness = extract_witness(g, &nd, &run);
    let summary = DpSummary::new(g, &run);
    Ok(DpOutcome {
        run,
        witness,
        summary,
    })
}

/// Decides whether `g` has a minimal edge dominating set of size at least `k`.
pub fn solve(g: &Graph, k: i64, instance: &str, opts: SolveOptions) -> Result<SolveReport, SolveError> {
    if k < 0 {
        return Err(SolveError::NegativeK(k));
    }
    let mut timer = Timer(BTreeMap::new());
    let mut report = SolveReport {
        instance: instance.to_string(),
        n: g.n(),
        m: g.m(),
        k,
        decision: false,
        stage: Stage::MatchingEarlyYes,
        gamma_prime: None,
        witness: None,
        witness_on_reduced: false,
        reduced: None,
        dp: None,
        timings_ms: BTreeMap::new(),
    };

    let matching = timer.time("matching", || greedy_maximal_matching(g));
    if matching.len() as i64 >= k {
        report.decision = true;
        report.witness = Some(matching.to_pairs(g));
        report.timings_ms = timer.0;
        return Ok(report);
    }

    let mut work = g.clone();
    let mut work_k = k;
    let mut labels: Option<Vec<usize>> = None;
    if opts.kernel {
        match timer.time("kernel", || kernelize(g, k))? {
            KernelOutcome::DecidedYes { .. } if !opts.witness => {
                report.decision = true;
                report.stage = Stage::KernelDecided;
                report.timings_ms = timer.0;
                return Ok(report);
            }
            KernelOutcome::DecidedYes { .. } => {}
            KernelOutcome::Reduced { instance, trace } => {
                if !trace.is_empty() {
                    report.reduced = Some(Reduced {
                        n: instance.graph.n(),
                        m: instance.graph.m(),
                        k: instance.k,
                        gamma_prime: None,
                        rules: trace.iter().map(|t| t.to_string()).collect(),
                    });
                    work = instance.graph;
                    work_k = instance.k;
                    labels = Some(instance.labels);
                }
            }
        }
    }

    report.stage = Stage::Dp;
    let out = timer.time("dp", || dp_solve(&work, opts.max_width, opts.dp))?;
    let alpha = out.run.gamma_prime;
    report.decision = alpha as i64 >= work_k;
    report.dp = Some(out.summary);
    match (&mut report.reduced, &labels) {
        (Some(reduced), Some(labels)) => {
            reduced.gamma_prime = Some(alpha);
            if opts.witness {
                let pairs = out
                    .witness
                    .to_pairs(&work)
                    .into_iter()
                    .map(|(u, v)| (labels[u - 1] + 1, labels[v - 1] + 1))
                    .collect();
                report.witness = Some(pairs);
                report.witness_on_reduced = true;
            }
        }
        _ => {
            report.gamma_prime = Some(alpha);
            if opts.witness {
                report.witness = Some(out.witness.to_pairs(g));
            }
        }
    }
    report.timings_ms = timer.0;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Dp,
    Oracle,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Method::Auto),
            "dp" => Ok(Method::Dp),
            "oracle" => Ok(Method::Oracle),
            _ => Err(format!("unknown method '{s}' (expected auto, dp or oracle)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub method: Method,
    pub gamma_prime: usize,
    pub witness: Vec<(usize, usize)>,
    pub count_minimal: Option<u64>,
    pub dp: Option<DpSummary>,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaOptions {
    pub method: Method,
    pub max_width: usize,
    pub oracle: OracleConfig,
    pub dp: DpOptions,
}

impl Default for GammaOptions {
    fn default() -> Self {
        GammaOptions {
            method: Method::Auto,
            max_width: DEFAULT_MAX_WIDTH,
            oracle: OracleConfig::default(),
            dp: DpOptions::default(),
        }
    }
}

/// Computes the upper edge domination number with the requested method;
/// `Auto` uses the oracle up to its default edge limit and the dynamic
/// program beyond.
pub fn gamma_prime(g: &Graph, instance: &str, opts: GammaOptions) -> Result<GammaReport, SolveError> {
    let method = match opts.method {
        Method::Auto if g.m() <= DEFAULT_MAX_EDGES => Method::Oracle,
        Method::Auto => Method::Dp,
        m => m,
    };
    let mut timer = Timer(BTreeMap::new());
    let mut report = GammaReport {
        instance: instance.to_string(),
        n: g.n(),
        m: g.m(),
        method,
        gamma_prime: 0,
        witness: Vec::new(),
        count_minimal: None,
        dp: None,
        timings_ms: BTreeMap::new(),
    };
    if method == Method::Oracle {
        let r = timer.time("oracle", || upper_eds_exact(g, opts.oracle))?;
        report.gamma_prime = r.gamma_prime;
        report.witness = r.witness.to_pairs(g);
        report.count_minimal = Some(r.count_minimal);
    } else {
        let out = timer.time("dp", || dp_solve(g, opts.max_width, opts.dp))?;
        report.gamma_prime = out.run.gamma_prime;
        report.witness = out.witness.to_pairs(g);
        report.dp = Some(out.summary);
    }
    report.timings_ms = timer.0;
    Ok(report)
}
