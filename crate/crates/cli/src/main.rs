//! `erp`: partition functions, model transforms and reflection positivity
//! checks from the command line. Every command prints one JSON document on
//! stdout; logs go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use erp_core::connection::{connection_matrix, psd_check, witness_search, Invariant};
use erp_core::erp::{erp_decide_complex, erp_decide_real};
use erp_core::graph::{enumerate_fragments, CorpusBounds, Fragment};
use erp_core::kempf_ness::{find_conjugating_g, SearchOptions};
use erp_core::models::{eval_edge, eval_vertex, is_twin_free, twin_reduce, EdgeModel, VertexModel};
use erp_core::szegedy::{snap_to_real, vertex_to_edge};
use erp_core::tolerance::ToleranceConfig;
use erp_core::wire::{
    self, to_json as json, AnyEdgeModel, ConnectionDoc, EdgeEvalDoc, EdgeModelDoc, FragmentListDoc, GraphDoc,
    KnDoc, TransformDoc, ValueDoc, VerdictDoc, VertexModelDoc,
};
use erp_core::{Complex64, Error, Result};

#[derive(Parser)]
#[command(name = "erp", version, about = "Vertex/edge coloring models and edge reflection positivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Vertex model JSON: {"a": [...], "B": [[...]]}
    #[arg(long, visible_alias = "vertex-model")]
    model: Option<PathBuf>,
    /// Edge model JSON, evaluation form or coefficient table
    #[arg(long, conflicts_with = "model")]
    edge_model: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Override every tolerance (equality, PSD, partition function)
    #[arg(long)]
    tol: Option<f64>,
}

impl TolArgs {
    fn config(self) -> ToleranceConfig {
        self.tol.map_or_else(ToleranceConfig::default, ToleranceConfig::uniform)
    }
}

#[derive(Args, Clone, Copy)]
struct SearchArgs {
    /// Total descent iterations, split over restarts
    #[arg(long, default_value_t = 4000)]
    budget: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Partition function of a model on a graph
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        graph: PathBuf,
        /// Value of a circle for vertex models: "re" or "re,im"
        #[arg(long)]
        circle_value: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Edge model with the same partition function as a vertex model
    Transform {
        #[arg(long, visible_alias = "vertex-model")]
        model: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Merge or delete twin colors
    TwinReduce {
        #[arg(long, visible_alias = "vertex-model")]
        model: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Decide edge reflection positivity of a vertex model
    ErpCheck {
        #[arg(long, visible_alias = "vertex-model")]
        model: PathBuf,
        /// Required for complex models (randomized search)
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Edge connection matrix over given or enumerated fragments
    ConnectionMatrix {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        l: usize,
        /// Fragment list JSON; enumerated from the bounds when absent
        #[arg(long)]
        fragments: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        #[arg(long)]
        allow_bare_edges: bool,
        /// Circle value "re" or "re,im"; defaults to k for edge models
        #[arg(long)]
        circle_value: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Search for a negative quadratic form on connection matrices
    Witness {
        #[arg(long, visible_alias = "vertex-model")]
        model: PathBuf,
        /// Largest label count tried
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        /// Real circle values for bare-edge corpora; repeatable
        #[arg(long)]
        circle_value: Vec<f64>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Search O_l(C) for g making an edge model real
    KempfNessSearch {
        #[command(flatten)]
        model: ModelArgs,
        /// Dimension l (default: number of edge colors)
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run the acceptance suite
    Selftest,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_vertex_model(path: &Path, tol: &ToleranceConfig) -> Result<VertexModel> {
    wire::parse::<VertexModelDoc>(&read(path)?)?.to_model(tol.equality)
}

fn load_edge_model(path: &Path) -> Result<AnyEdgeModel> {
    wire::parse::<EdgeModelDoc>(&read(path)?)?.to_model()
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number {x:?} in {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("expected re or re,im, got {s:?}"))),
    }
}

enum Loaded {
    Vertex(VertexModel),
    Edge(AnyEdgeModel),
}

fn load_any(args: &ModelArgs, tol: &ToleranceConfig) -> Result<Loaded> {
    match (&args.model, &args.edge_model) {
        (Some(p), None) => Ok(Loaded::Vertex(load_vertex_model(p, tol)?)),
        (None, Some(p)) => Ok(Loaded::Edge(load_edge_model(p)?)),
        _ => Err(Error::Parse("exactly one of --model and --edge-model is required".into())),
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Eval {
            model,
            graph,
            circle_value,
            tol,
        } => {
            let tol = tol.config();
            let g = wire::parse::<GraphDoc>(&read(&graph)?)?.to_graph()?;
            let cv = circle_value.as_deref().map(parse_complex).transpose()?;
            let value = match load_any(&model, &tol)? {
                Loaded::Vertex(m) => eval_vertex(&m, &g, cv)?,
                Loaded::Edge(h) => eval_edge(h.as_dyn(), &g)?,
            };
            json(&ValueDoc { value: value.into() })
        }
        Command::Transform { model, tol } => {
            let tol = tol.config();
            let m = load_vertex_model(&model, &tol)?;
            json(&TransformDoc::from_result(&vertex_to_edge(&m, None, tol.equality)?))
        }
        Command::TwinReduce { model, tol } => {
            let tol = tol.config();
            let m = load_vertex_model(&model, &tol)?;
            json(&VertexModelDoc::from_model(&twin_reduce(&m, tol.equality)))
        }
        Command::ErpCheck {
            model,
            seed,
            search,
            tol,
        } => {
            let tol = tol.config();
            let m = load_vertex_model(&model, &tol)?;
            let mut pre_notes = Vec::new();
            let m = if is_twin_free(&m, tol.equality) {
                m
            } else {
                let r = twin_reduce(&m, tol.equality);
                pre_notes.push(format!("twin reduction: {} -> {} colors", m.colors(), r.colors()));
                r
            };
            let verdict = if m.is_real(tol.equality) {
                erp_decide_real(&m, tol.equality)?
            } else {
                let Some(seed) = seed else {
                    return Err(Error::Parse("--seed is required for complex models".into()));
                };
                let opts = SearchOptions {
                    budget: search.budget,
                    restarts: search.restarts,
                    step: search.step,
                    seed,
                    tol: tol.psd,
                    ..SearchOptions::default()
                };
                erp_decide_complex(&m, tol.equality, opts)?
            };
            let mut doc = VerdictDoc::from_verdict(&verdict);
            pre_notes.append(&mut doc.notes);
            doc.notes = pre_notes;
            json(&doc)
        }
        Command::ConnectionMatrix {
            model,
            l,
            fragments,
            max_vertices,
            max_edges,
            allow_bare_edges,
            circle_value,
            tol,
        } => {
            let tol = tol.config();
            let frags: Vec<Fragment> = match &fragments {
                Some(p) => wire::parse::<FragmentListDoc>(&read(p)?)?.to_fragments()?,
                None => enumerate_fragments(
                    l,
                    CorpusBounds::new(max_vertices, max_edges).with_bare_edges(allow_bare_edges),
                )?,
            };
            let cv = circle_value.as_deref().map(parse_complex).transpose()?;
            let loaded = load_any(&model, &tol)?;
            let cm = match &loaded {
                Loaded::Vertex(m) => {
                    let p = |g: &erp_core::graph::Multigraph| eval_vertex(m, g, None);
                    connection_matrix(&p as &Invariant<'_>, l, &frags, cv)?
                }
                Loaded::Edge(h) => {
                    let k = Complex64::new(h.as_dyn().colors() as f64, 0.0);
                    let p = |g: &erp_core::graph::Multigraph| eval_edge(h.as_dyn(), g);
                    connection_matrix(&p as &Invariant<'_>, l, &frags, Some(cv.unwrap_or(k)))?
                }
            };
            let (m_re, m_imag) = ConnectionDoc::matrix(&cm.values, tol.equality);
            let (psd, min_eigenvalue, witness) = if m_imag.is_none() {
                let report = psd_check(&cm.values.map(|z| z.re), tol.psd)?;
                (Some(report.psd), Some(report.min_eigenvalue), report.witness)
            } else {
                (None, None, None)
            };
            json(&ConnectionDoc {
                l: Some(l),
                fragments: cm.fragments,
                m: m_re,
                m_imag,
                psd,
                min_eigenvalue,
                witness,
                quadratic_form: None,
            })
        }
        Command::Witness {
            model,
            l,
            max_vertices,
            max_edges,
            circle_value,
            tol,
        } => {
            let tol = tol.config();
            let m = load_vertex_model(&model, &tol)?;
            let bounds = CorpusBounds::new(max_vertices, max_edges);
            let doc = match witness_search(&m, l, bounds, &circle_value, tol.psd)? {
                Some(w) => {
                    let p = |g: &erp_core::graph::Multigraph| eval_vertex(&m, g, None);
                    let sub = connection_matrix(&p as &Invariant<'_>, w.l, &w.fragments, w.circle_value)?;
                    let (m_re, m_imag) = ConnectionDoc::matrix(&sub.values, tol.equality);
                    ConnectionDoc {
                        l: Some(w.l),
                        fragments: w.keys,
                        m: m_re,
                        m_imag,
                        psd: Some(false),
                        min_eigenvalue: Some(w.min_eigenvalue),
                        witness: Some(w.coefficients),
                        quadratic_form: Some(w.quadratic_form),
                    }
                }
                None => ConnectionDoc {
                    l: None,
                    fragments: Vec::new(),
                    m: Vec::new(),
                    m_imag: None,
                    psd: None,
                    min_eigenvalue: None,
                    witness: None,
                    quadratic_form: None,
                },
            };
            json(&doc)
        }
        Command::KempfNessSearch {
            model,
            l,
            seed,
            search,
            tol,
        } => {
            let tol = tol.config();
            let h = match load_any(&model, &tol)? {
                Loaded::Vertex(m) => vertex_to_edge(&m, None, tol.equality)?.edge_model,
                Loaded::Edge(AnyEdgeModel::Eval(h)) => h,
                Loaded::Edge(AnyEdgeModel::Table(_)) => {
                    return Err(Error::InvalidModel(
                        "the search needs an evaluation-form edge model".into(),
                    ))
                }
            };
            let l = l.unwrap_or(h.colors());
            let opts = SearchOptions {
                budget: search.budget,
                restarts: search.restarts,
                step: search.step,
                seed,
                tol: tol.psd,
                ..SearchOptions::default()
            };
            let report = find_conjugating_g(&h, l, opts)?;
            let doc = match report.hit {
                Some(hit) => KnDoc {
                    found: true,
                    l,
                    g: Some(KnDoc::g_matrix(&hit.point.g)),
                    f: Some(hit.f),
                    f_history: report.f_history,
                    certificate: Some(EdgeEvalDoc::from_model(&snap_to_real(&hit.model, &hit.pairing)?)),
                },
                None => KnDoc {
                    found: false,
                    l,
                    g: None,
                    f: None,
                    f_history: report.f_history,
                    certificate: None,
                },
            };
            json(&doc)
        }
        Command::Selftest => unreachable!("handled in main"),
    }
}

fn selftest() -> ExitCode {
    let results = erp_core::selftest::run_all();
    for r in &results {
        eprintln!("{r}");
    }
    let passed = results.iter().all(|r| r.passed);
    println!("{}", serde_json::json!({ "passed": passed, "criteria": results }));
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if matches!(cli.command, Command::Selftest) {
        return selftest();
    }
    match run(cli.command) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
