//! Randomized cross-checks of every component against the oracle.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::dp::{table_size_bound, DpOptions};
use crate::gen::{generate, GenSpec};
use crate::graph::{greedy_maximal_matching, is_minimal_eds, verify_star_certificate};
use crate::kernel::{kernel_bound, kernelize, KernelOutcome};
use crate::oracle::{decide, upper_eds_exact, OracleConfig, HARD_MAX_EDGES};
use crate::pipeline::{cover_decomposition, solve, SolveOptions};

pub const PROBABILITIES: [f64; 3] = [0.2, 0.4, 0.6];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfcheckConfig {
    pub count: usize,
    pub nmax: usize,
    pub seed: u64,
    pub dp: DpOptions,
}

impl SelfcheckConfig {
    pub fn new(count: usize, nmax: usize, seed: u64) -> Self {
        SelfcheckConfig {
            count,
            nmax,
            seed,
            dp: DpOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: &'static str,
    pub spec: GenSpec,
    pub k: Option<i64>,
    pub detail: String,
}

impl Failure {
    pub fn reproducer(&self) -> String {
        match self.k {
            Some(k) => format!("ueds gen {} > g.gr && ueds solve g.gr -k {k}", self.spec),
            None => format!("ueds gen {} > g.gr && ueds gamma g.gr --method dp", self.spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfcheckReport {
    pub instances: usize,
    pub checks: usize,
    /// Largest ratio of a DP table size to its bound.
    pub max_table_ratio: f64,
    pub failures: Vec<Failure>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The `i`-th instance of a run: sizes in `1..=nmax`, edge probabilities
/// cycling through [`PROBABILITIES`], per-instance seeds drawn from the run
/// seed.
pub fn instance_specs(count: usize, nmax: usize, seed: u64) -> Vec<GenSpec> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + (rng.next_u64() % nmax.max(1) as u64) as usize;
            GenSpec::gnp(n, PROBABILITIES[i % 3], rng.next_u64())
        })
        .collect()
}

struct Checker {
    dp: DpOptions,
    checks: usize,
    max_ratio: f64,
}

impl Checker {
    fn run(&mut self, spec: &GenSpec) -> Vec<Failure> {
        let g = generate(spec).expect("selfcheck specs are valid");
        let mut out = Vec::new();
        let mut fail = |check, k, detail: String| {
            out.push(Failure {
                check,
                spec: *spec,
                k,
                detail,
            })
        };
        let oracle_cfg = OracleConfig::with_max_edges(HARD_MAX_EDGES);
        let exact = match upper_eds_exact(&g, oracle_cfg) {
            Ok(r) => r,
            Err(e) => {
                fail("oracle", None, e.to_string());
                return out;
            }
        };

        self.checks += 1;
        let matching = greedy_maximal_matching(&g);
        if !is_minimal_eds(&g, &matching) {
            fail("matching-minimal", None, format!("{:?}", matching.to_pairs(&g)));
        }

        self.checks += 1;
        if let Err(e) = verify_star_certificate(&g, &exact.witness) {
            fail("star-structure", None, e.to_string());
        }

        self.checks += 1;
        match cover_decomposition(&g)
            .map_err(|e| e.to_string())
            .and_then(|nd| {
                let run = crate::dp::run_dp(&g, &nd, self.dp).map_err(|e| e.to_string())?;
                Ok((nd, run))
            }) {
            Err(e) => fail("dp-run", None, e),
            Ok((nd, run)) => {
                if run.gamma_prime != exact.gamma_prime {
                    fail(
                        "dp-equals-oracle",
                        None,
                        format!("dp {} oracle {}", run.gamma_prime, exact.gamma_prime),
                    );
                }
                let bound = table_size_bound(run.width, g.n(), g.m());
                self.max_ratio = self.max_ratio.max(run.max_table as f64 / bound as f64);
                if run.max_table as u128 > bound {
                    fail("table-bound", None, format!("{} > {bound}", run.max_table));
                }
                let w = crate::dp::extract_witness(&g, &nd, &run);
                if w.len() != run.gamma_prime {
                    fail("dp-witness", None, format!("size {} != {}", w.len(), run.gamma_prime));
                } else if let Err(e) = verify_star_certificate(&g, &w) {
                    fail("dp-witness", None, e.to_string());
                }
            }
        }

        let gp = exact.gamma_prime as i64;
        for k in 1..=g.m() as i64 {
            self.checks += 1;
            let truth = gp >= k;
            match kernelize(&g, k) {
                Err(e) => fail("kernel", Some(k), e.to_string()),
                Ok(KernelOutcome::DecidedYes { decision, .. }) if !truth => {
                    fail("kernel-safety", Some(k), format!("rule {} said yes, oracle no", decision.rule))
                }
                Ok(KernelOutcome::DecidedYes { .. }) => {}
                Ok(KernelOutcome::Reduced { instance, .. }) => {
                    let n = instance.graph.n() as i64;
                    if n > kernel_bound(instance.k) {
                        fail("kernel-size", Some(k), format!("{n} vertices with k' = {}", instance.k));
                    }
                    match decide(&instance.graph, instance.k, oracle_cfg) {
                        Ok(d) if d != truth => fail(
                            "kernel-safety",
                            Some(k),
                            format!("reduced instance answers {d}, oracle {truth}"),
                        ),
                        Ok(_) => {}
                        Err(e) => fail("kernel", Some(k), e.to_string()),
                    }
                }
            }
        }

        let opts = SolveOptions {
            dp: self.dp,
            ..SolveOptions::default()
        };
        for k in 0..=(gp + 2).min(g.m() as i64 + 1) {
            self.checks += 1;
            match solve(&g, k, "selfcheck", opts) {
                Ok(r) if r.decision != (gp >= k) => fail(
                    "solve-equals-oracle",
                    Some(k),
                    format!("solve says {} at stage {:?}", r.decision, r.stage),
                ),
                Ok(_) => {}
                Err(e) => fail("solve", Some(k), e.to_string()),
            }
        }
        out
    }
}

/// Shrinks `n` (keeping `p` and the seed) and `k` while the same check still
/// fails.
fn minimize(checker: &mut Checker, failure: Failure) -> Failure {
    let mut best = failure;
    let mut n = best.spec.n;
    while n > 1 {
        n -= 1;
        let spec = GenSpec { n, ..best.spec };
        if let Some(f) = checker.run(&spec).into_iter().find(|f| f.check == best.check) {
            best = f;
        }
    }
    best
}

pub fn selfcheck(config: &SelfcheckConfig) -> SelfcheckReport {
    let mut checker = Checker {
        dp: config.dp,
        checks: 0,
        max_ratio: 0.0,
    };
    let specs = instance_specs(config.count, config.nmax, config.seed);
    let mut failures = Vec::new();
    for spec in &specs {
        failures.extend(checker.run(spec));
    }
    let (checks, max_ratio) = (checker.checks, checker.max_ratio);
    if let Some(first) = failures.first().cloned() {
        let min = minimize(&mut checker, first);
        if !failures.contains(&min) {
            failures.insert(0, min);
        }
    }
    SelfcheckReport {
        instances: specs.len(),
        checks,
        max_table_ratio: max_ratio,
        failures,
    }
}
