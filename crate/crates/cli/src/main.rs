use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use ueds::decomp::{
    emit_nice, emit_td, make_nice, parse_td, td_from_vertex_cover, validate_nice, validate_td,
};
use ueds::dp::{extract_witness, run_dp, DpOptions};
use ueds::gen::{generate, Family, GenSpec};
use ueds::graph::{greedy_maximal_matching, parse_graph, vertex_cover_from_matching, Graph};
use ueds::kernel::{kernelize, KernelOutcome};
use ueds::oracle::{upper_eds_exact, OracleConfig, OracleError, DEFAULT_MAX_EDGES};
use ueds::pipeline::{
    cover_decomposition, gamma_prime, solve, GammaOptions, Method, SolveError, SolveOptions,
    DEFAULT_MAX_WIDTH,
};
use ueds::selfcheck::{selfcheck, SelfcheckConfig};

mod bench;

#[derive(Parser)]
#[command(name = "ueds", version, about = "Upper edge domination: exact solver, kernel and checks")]
struct Cli {
    /// Print structured output as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a minimal edge dominating set of size at least k exists.
    Solve {
        file: PathBuf,
        #[arg(short)]
        k: i64,
        #[arg(long)]
        no_kernel: bool,
        /// Report a solution; never stops at a kernel decision.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
    },
    /// Compute the largest size of a minimal edge dominating set.
    Gamma {
        file: PathBuf,
        #[arg(long, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
        /// Print per-node table sizes of the dynamic program.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Apply the reduction rules and print the trace.
    Kernelize {
        file: PathBuf,
        #[arg(short)]
        k: i64,
        /// Write the reduced graph here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Enumerate minimal edge dominating sets by brute force.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
        max_edges: usize,
        /// Print every minimal set, not just the largest.
        #[arg(long)]
        all: bool,
    },
    /// Generate a graph.
    Gen {
        #[arg(long, default_value = "gnp")]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build, validate and export the decomposition the solver uses.
    Decomp {
        file: PathBuf,
        /// Use this tree decomposition instead of the vertex-cover one.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        emit_td: Option<PathBuf>,
        #[arg(long)]
        emit_nice: Option<PathBuf>,
    },
    /// Cross-check every component on seeded random graphs.
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Break the solver on purpose: `no-red-upgrade`.
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Run the dynamic program on every .gr file of a directory.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

fn load(path: &Path) -> Result<(Graph, String)> {
    let text = read_input(path)?;
    let g = parse_graph(&text).with_context(|| format!("{}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "stdin".into());
    Ok((g, name))
}

fn pairs(p: &[(usize, usize)]) -> String {
    p.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Solve {
            file,
            k,
            no_kernel,
            witness,
            max_width,
        } => {
            let (g, name) = load(&file)?;
            let opts = SolveOptions {
                kernel: !no_kernel,
                witness,
                max_width,
                dp: DpOptions::default(),
            };
            let r = solve(&g, k, &name, opts)?;
            if json {
                print_json(&r)?;
            } else {
                println!("instance: {}", r.instance);
                println!("decision: {}", if r.decision { "yes" } else { "no" });
                println!("stage: {}", serde_json::to_value(r.stage)?.as_str().unwrap_or(""));
                if let Some(gp) = r.gamma_prime {
                    println!("gamma_prime: {gp}");
                }
                if let Some(red) = &r.reduced {
                    println!("reduced: n={} m={} k={}", red.n, red.m, red.k);
                    if let Some(gp) = red.gamma_prime {
                        println!("reduced_gamma_prime: {gp}");
                    }
                }
                if let Some(w) = &r.witness {
                    let tag = if r.witness_on_reduced { " (reduced instance)" } else { "" };
                    println!("witness: {}{tag}", pairs(w));
                }
                if let Some(dp) = &r.dp {
                    println!("width: {}", dp.width);
                    println!("max_table: {}", dp.max_table);
                }
            }
            Ok(if r.decision { 0 } else { 1 })
        }
        Command::Gamma {
            file,
            method,
            max_width,
            diagnostics,
        } => {
            let (g, name) = load(&file)?;
            if diagnostics {
                let nd = cover_decomposition(&g)?;
                if nd.width() + 1 > max_width {
                    return Err(SolveError::WidthCap {
                        bag: nd.width() + 1,
                        cap: max_width,
                    }
                    .into());
                }
                let run = run_dp(&g, &nd, DpOptions::default()).map_err(SolveError::from)?;
                if json {
                    #[derive(Serialize)]
                    struct Diag<'a> {
                        instance: &'a str,
                        width: usize,
                        nodes: &'a [ueds::dp::NodeStat],
                        gamma_prime: usize,
                        witness: Vec<(usize, usize)>,
                    }
                    print_json(&Diag {
                        instance: &name,
                        width: run.width,
                        nodes: &run.stats,
                        gamma_prime: run.gamma_prime,
                        witness: extract_witness(&g, &nd, &run).to_pairs(&g),
                    })?;
                } else {
                    print!("{}", run.diagnostics());
                }
                return Ok(0);
            }
            let opts = GammaOptions {
                method,
                max_width,
                ..GammaOptions::default()
            };
            let r = gamma_prime(&g, &name, opts)?;
            if json {
                print_json(&r)?;
            } else {
                println!("instance: {}", r.instance);
                println!("method: {}", serde_json::to_value(r.method)?.as_str().unwrap_or(""));
                println!("gamma_prime: {}", r.gamma_prime);
                println!("witness: {}", pairs(&r.witness));
                if let Some(dp) = &r.dp {
                    println!("width: {}", dp.width);
                    println!("max_table: {}", dp.max_table);
                }
            }
            Ok(0)
        }
        Command::Kernelize { file, k, emit } => {
            let (g, name) = load(&file)?;
            let outcome = kernelize(&g, k)?;
            #[derive(Serialize)]
            struct Out {
                instance: String,
                k: i64,
                outcome: &'static str,
                rule: Option<String>,
                n: usize,
                m: usize,
                k_reduced: Option<i64>,
                labels: Option<Vec<usize>>,
                trace: Vec<String>,
            }
            let trace: Vec<String> = outcome.trace().iter().map(|t| t.to_string()).collect();
            let out = match &outcome {
                KernelOutcome::DecidedYes { decision, .. } => Out {
                    instance: name,
                    k,
                    outcome: "yes",
                    rule: Some(format!("{}: {}", decision.rule, decision.hint)),
                    n: g.n(),
                    m: g.m(),
                    k_reduced: None,
                    labels: None,
                    trace,
                },
                KernelOutcome::Reduced { instance, .. } => {
                    if let Some(path) = &emit {
                        write_file(path, &instance.graph.to_pace())?;
                    }
                    Out {
                        instance: name,
                        k,
                        outcome: "reduced",
                        rule: None,
                        n: instance.graph.n(),
                        m: instance.graph.m(),
                        k_reduced: Some(instance.k),
                        labels: Some(instance.labels.iter().map(|v| v + 1).collect()),
                        trace,
                    }
                }
            };
            if json {
                print_json(&out)?;
            } else {
                for line in &out.trace {
                    println!("{line}");
                }
                match out.k_reduced {
                    Some(kr) => println!("reduced: n={} m={} k={kr}", out.n, out.m),
                    None => println!("yes: rule {}", out.rule.unwrap_or_default()),
                }
            }
            Ok(0)
        }
        Command::Oracle {
            file,
            max_edges,
            all,
        } => {
            let (g, name) = load(&file)?;
            let cfg = OracleConfig::with_max_edges(max_edges);
            let r = upper_eds_exact(&g, cfg)?;
            let sets = if all {
                Some(
                    ueds::oracle::enumerate_minimal_eds(&g, cfg)?
                        .iter()
                        .map(|s| s.to_pairs(&g))
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            if json {
                #[derive(Serialize)]
                struct Out {
                    instance: String,
                    gamma_prime: usize,
                    witness: Vec<(usize, usize)>,
                    count_minimal: u64,
                    minimal_sets: Option<Vec<Vec<(usize, usize)>>>,
                }
                print_json(&Out {
                    instance: name,
                    gamma_prime: r.gamma_prime,
                    witness: r.witness.to_pairs(&g),
                    count_minimal: r.count_minimal,
                    minimal_sets: sets,
                })?;
            } else {
                println!("gamma_prime: {}", r.gamma_prime);
                println!("witness: {}", pairs(&r.witness.to_pairs(&g)));
                println!("count_minimal: {}", r.count_minimal);
                for s in sets.unwrap_or_default() {
                    println!("set: {}", pairs(&s));
                }
            }
            Ok(0)
        }
        Command::Gen {
            family,
            n,
            p,
            seed,
            out,
        } => {
            let spec = GenSpec { family, n, p, seed };
            let g = generate(&spec)?;
            let text = if json {
                #[derive(Serialize)]
                struct Out {
                    spec: GenSpec,
                    n: usize,
                    edges: Vec<(usize, usize)>,
                }
                let edges = g.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
                serde_json::to_string_pretty(&Out { spec, n: g.n(), edges })? + "\n"
            } else {
                g.to_pace()
            };
            match out {
                Some(path) => write_file(&path, &text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Decomp {
            file,
            td,
            emit_td: emit_td_path,
            emit_nice: emit_nice_path,
        } => {
            let (g, name) = load(&file)?;
            let (t, cover) = match td {
                Some(path) => (parse_td(&read_input(&path)?)?, None),
                None => {
                    let cover = vertex_cover_from_matching(&g, &greedy_maximal_matching(&g))?;
                    (td_from_vertex_cover(&g, &cover)?, Some(cover))
                }
            };
            let td_violations: Vec<String> = validate_td(&g, &t).iter().map(|v| v.to_string()).collect();
            let nice = if td_violations.is_empty() {
                Some(make_nice(&g, &t)?)
            } else {
                None
            };
            let nice_violations: Vec<String> = nice
                .as_ref()
                .map(|nd| validate_nice(&g, nd).iter().map(|v| v.to_string()).collect())
                .unwrap_or_default();
            if let Some(path) = &emit_td_path {
                write_file(path, &emit_td(&t))?;
            }
            if let (Some(path), Some(nd)) = (&emit_nice_path, &nice) {
                write_file(path, &emit_nice(nd, g.n()))?;
            }
            #[derive(Serialize)]
            struct Out {
                instance: String,
                cover: Option<Vec<usize>>,
                bags: usize,
                width: usize,
                nice_nodes: Option<usize>,
                td_violations: Vec<String>,
                nice_violations: Vec<String>,
            }
            let out = Out {
                instance: name,
                cover: cover.map(|c| c.iter().map(|v| v + 1).collect()),
                bags: t.bags.len(),
                width: t.width(),
                nice_nodes: nice.as_ref().map(|nd| nd.len()),
                td_violations,
                nice_violations,
            };
            let ok = out.td_violations.is_empty() && out.nice_violations.is_empty();
            if json {
                print_json(&out)?;
            } else {
                if let Some(c) = &out.cover {
                    println!("cover: {}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                }
                println!("bags: {}", out.bags);
                println!("width: {}", out.width);
                if let Some(k) = out.nice_nodes {
                    println!("nice_nodes: {k}");
                }
                for v in out.td_violations.iter().chain(&out.nice_violations) {
                    println!("violation: {v}");
                }
                println!("valid: {}", if ok { "yes" } else { "no" });
            }
            Ok(if ok { 0 } else { 2 })
        }
        Command::Selfcheck {
            count,
            nmax,
            seed,
            inject_fault,
        } => {
            let mut cfg = SelfcheckConfig::new(count, nmax, seed);
            match inject_fault.as_deref() {
                None => {}
                Some("no-red-upgrade") => cfg.dp.red_upgrade = false,
                Some(other) => bail!("unknown fault '{other}' (known: no-red-upgrade)"),
            }
            let r = selfcheck(&cfg);
            if json {
                print_json(&r)?;
            } else {
                println!("instances: {}", r.instances);
                println!("checks: {}", r.checks);
                println!("max_table_ratio: {:.3e}", r.max_table_ratio);
                for f in &r.failures {
                    let k = f.k.map(|k| format!(" k={k}")).unwrap_or_default();
                    println!("FAIL {}{k}: {}", f.check, f.detail);
                }
                match r.failures.first() {
                    None => println!("result: pass"),
                    Some(f) => {
                        println!("result: {} failures", r.failures.len());
                        println!("reproduce: {}", f.reproducer());
                    }
                }
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Bench {
            dir,
            out,
            max_width,
        } => {
            let rows = bench::run(&dir, max_width)?;
            let text = bench::to_csv(&rows)?;
            match out {
                Some(path) => write_file(&path, &text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            if json {
                print_json(&rows)?;
            }
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let cap = err.chain().any(|e| {
        e.downcast_ref::<SolveError>().is_some_and(|s| s.is_resource_cap())
            || e.downcast_ref::<OracleError>().is_some()
    });
    if cap {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
