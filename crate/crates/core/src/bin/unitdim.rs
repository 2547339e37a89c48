use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use unitdim::embedder::{find_embedding, EmbedOutcome, EmbedRequest, DEFAULT_RESTARTS};
use unitdim::engine::{describe, BoundsOptions, Engine, Kind, Mode};
use unitdim::family::{enumerate_petals, parse_graph_argument, PETAL_CAP};
use unitdim::geometry::{cone_radius, iterate_cone_radius, simplex_radius, star_polygon_radius, ConeIterate, PolygonRadius};
use unitdim::minimality::{check_4vertex_lemma, enumerate_s_candidates, verify_minor_minimal, MinimalityOptions, MinimalityVerdict};
use unitdim::minors::{join_decompose, minor_closure, ClosureOptions, DEFAULT_CLOSURE_CAP};
use unitdim::tables::{render_polygon_table, render_wheel_table, reproduce_tables, POLYGON_MAX_N};
use unitdim::{format_number, Graph};

const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "unitdim", version, about = "Unit-distance dimension of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value = "crossings")]
    mode: Mode,
    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for accepting an embedding.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds on the dimension.
    Dim(BoundsArgs),
    /// Bounds on the spherical dimension.
    Sdim(BoundsArgs),
    /// Search for a unit-distance embedding.
    Embed {
        graph: String,
        #[arg(long)]
        dim: Option<usize>,
        /// Require all vertices on a sphere of radius < 1.
        #[arg(long)]
        sphere: bool,
        /// Fix the sphere radius.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List the minor closure up to isomorphism.
    Minors {
        graph: String,
        #[arg(long)]
        proper: bool,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Check minor minimality exhaustively.
    VerifyMinimal {
        graph: Option<String>,
        #[arg(long, value_enum, default_value = "dim")]
        kind: KindArg,
        /// Enumerate graphs on N vertices minimal for sdim N-1 instead.
        #[arg(long, value_name = "N")]
        s_candidates: Option<usize>,
        /// Check the circle-radius property of all 4-vertex graphs instead.
        #[arg(long)]
        four_vertex: bool,
        #[arg(long)]
        failures_only: bool,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Closed-form radii.
    Radius {
        #[command(subcommand)]
        which: RadiusCmd,
    },
    /// Regenerate the wheel and polygon tables.
    Tables {
        #[command(subcommand)]
        which: TableCmd,
    },
    /// List petal graphs with N edges.
    Petals { edges: usize },
    /// Split a graph into join factors.
    Decompose { graph: String },
}

#[derive(clap::Args)]
struct BoundsArgs {
    graph: String,
    /// Print the rule chain behind each bound.
    #[arg(long)]
    explain: bool,
    /// Close remaining gaps with the numerical embedder.
    #[arg(long)]
    search: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dim,
    Sdim,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Dim => Kind::Dim,
            KindArg::Sdim => Kind::Sdim,
        }
    }
}

#[derive(Subcommand)]
enum RadiusCmd {
    /// Circumradius of the unit-side star polygon {n/m}.
    Polygon { n: usize, m: usize },
    /// R(r) = 1 / (2 sqrt(1 - r^2)).
    Cone { r: f64 },
    /// Circumradius of the unit simplex on n vertices.
    Simplex { n: usize },
    /// R applied n times.
    Iterate { r: f64, n: usize },
}

#[derive(Subcommand)]
enum TableCmd {
    Wheel,
    Polygon {
        #[arg(long, default_value_t = POLYGON_MAX_N)]
        max_n: usize,
    },
    /// Diff every regenerated table against the stored values.
    Check,
}

type Outcome = Result<u8, String>;

fn read_graph(arg: &str) -> Result<Graph, String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        Graph::parse_text(&text).map_err(|e| format!("{arg}: {e}"))
    } else {
        parse_graph_argument(arg).map_err(|e| e.to_string())
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), String> {
    let s = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    println!("{s}");
    Ok(())
}

fn edge_list(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("{} [{}]", describe(g), edges.join(" "))
}

fn bounds(cli: &Cli, args: &BoundsArgs, kind: Kind) -> Outcome {
    let g = read_graph(&args.graph)?;
    let engine = Engine::new(cli.mode);
    let b = if args.search {
        let opts = BoundsOptions { embed_fallback: true, restarts: cli.restarts, seed: cli.seed };
        engine.dimension_bounds(&g, kind, &opts)
    } else {
        engine.bounds(&g, kind)
    };
    if cli.json {
        print_json(&b)?;
    } else {
        println!("{b}");
        if args.explain {
            print!("{}", b.explain());
        }
    }
    Ok(if b.value().is_some() { 0 } else { EXIT_INCONCLUSIVE })
}

fn embed(cli: &Cli, graph: &str, dim: Option<usize>, sphere: bool, radius: Option<f64>, svg: Option<&Path>) -> Outcome {
    let g = read_graph(graph)?;
    let sphere = sphere || radius.is_some();
    let kind = if sphere { Kind::Sdim } else { Kind::Dim };
    let d = match dim {
        Some(d) => d,
        None => {
            let b = Engine::new(cli.mode).bounds(&g, kind);
            let d = b.upper_value().or(b.lower_value()).unwrap_or(1).max(1);
            d as usize
        }
    };
    let mut req = EmbedRequest::new(g, d)
        .non_crossing(cli.mode == Mode::NonCrossing)
        .restarts(cli.restarts)
        .seed(cli.seed);
    if sphere {
        req = req.on_sphere(radius);
    }
    if let Some(t) = cli.tol {
        req.tolerance = t;
    }
    let outcome = find_embedding(&req).map_err(|e| e.to_string())?;
    if let (Some(path), Some(e)) = (svg, outcome.embedding()) {
        std::fs::write(path, e.to_svg()).map_err(|err| format!("{}: {err}", path.display()))?;
    }
    if cli.json {
        print_json(&outcome)?;
    } else {
        match &outcome {
            EmbedOutcome::Found { embedding, restart, report } => {
                println!("found in R^{d} at restart {restart}");
                for (v, p) in embedding.coords.iter().enumerate() {
                    let xs: Vec<String> = p.iter().map(|&x| format_number(x)).collect();
                    println!("{v}: {}", xs.join(" "));
                }
                println!("max edge residual {}", format_number(report.max_edge_residual));
                println!("min vertex separation {}", format_number(report.min_vertex_separation));
                if let Some(r) = report.sphere_radius {
                    println!("sphere radius {}", format_number(r));
                }
                println!("crossings {}", report.crossings.len());
                for ((a, b), (c, d)) in &report.crossings {
                    println!("  {a}-{b} x {c}-{d}");
                }
            }
            EmbedOutcome::Inconclusive { restarts } => println!("no embedding in R^{d} after {restarts} restarts"),
        }
    }
    Ok(match outcome {
        EmbedOutcome::Found { .. } => 0,
        EmbedOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    })
}

fn minors(cli: &Cli, graph: &str, proper: bool, cap: usize) -> Outcome {
    let g = read_graph(graph)?;
    let closure = minor_closure(&g, ClosureOptions { proper_only: proper, include_empty: true, cap })
        .map_err(|e| e.to_string())?;
    if cli.json {
        let graphs: Vec<&Graph> = closure.iter().map(|(_, h)| h).collect();
        print_json(&graphs)?;
    } else {
        println!("{} minors", closure.len());
        for (_, h) in &closure {
            println!("{}", edge_list(h));
        }
    }
    Ok(0)
}

fn verify(
    cli: &Cli,
    graph: Option<&str>,
    kind: Kind,
    s_candidates: Option<usize>,
    four_vertex: bool,
    failures_only: bool,
    cap: usize,
) -> Outcome {
    let opts = MinimalityOptions { restarts: cli.restarts, cap };
    if four_vertex {
        let report = check_4vertex_lemma(&opts).map_err(|e| e.to_string())?;
        if cli.json {
            print_json(&report)?;
        } else {
            for e in &report.entries {
                let r = e.circle_radius.map_or("-".to_string(), format_number);
                println!("{} sdim {} circle radius {r} {}", edge_list(&e.graph), e.sdim, if e.ok { "ok" } else { "FAIL" });
            }
        }
        return Ok(if report.all_ok { 0 } else { 1 });
    }
    if let Some(n) = s_candidates {
        let c = enumerate_s_candidates(n, cli.mode, &opts).map_err(|e| e.to_string())?;
        if cli.json {
            print_json(&c)?;
        } else {
            println!("{} graphs on {n} vertices", c.graphs_examined);
            for g in &c.minimal {
                println!("minimal {}", edge_list(g));
            }
            for g in &c.inconclusive {
                println!("inconclusive {}", edge_list(g));
            }
        }
        return Ok(if c.inconclusive.is_empty() { 0 } else { EXIT_INCONCLUSIVE });
    }
    let arg = graph.ok_or("verify-minimal needs a graph, --s-candidates or --four-vertex")?;
    let g = read_graph(arg)?;
    let mut report = match verify_minor_minimal(&g, kind, cli.mode, &opts) {
        Ok(r) => r,
        Err(unitdim::EngineError::InconclusiveRoot(msg)) => {
            eprintln!("{msg}");
            return Ok(EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(e.to_string()),
    };
    if failures_only {
        report.inconclusive_minors.clear();
    }
    if cli.json {
        print_json(&report)?;
    } else {
        println!("{kind} = {}; {} proper minors; verdict {:?}", report.value, report.minors_checked, report.verdict);
        for f in &report.failures {
            println!("failure {}: {}", edge_list(&f.minor), f.reason);
        }
        for g in &report.inconclusive_minors {
            println!("inconclusive {}", edge_list(g));
        }
    }
    Ok(match report.verdict {
        MinimalityVerdict::Minimal => 0,
        MinimalityVerdict::NotMinimal => 1,
        MinimalityVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn radius(cli: &Cli, which: &RadiusCmd) -> Outcome {
    let value = match *which {
        RadiusCmd::Polygon { n, m } => match star_polygon_radius(n, m).map_err(|e| e.to_string())? {
            PolygonRadius::Radius { value } => Some(value),
            PolygonRadius::Degenerate => None,
        },
        RadiusCmd::Cone { r } => Some(cone_radius(r).map_err(|e| e.to_string())?),
        RadiusCmd::Simplex { n } => Some(simplex_radius(n).map_err(|e| e.to_string())?),
        RadiusCmd::Iterate { r, n } => match iterate_cone_radius(r, n).map_err(|e| e.to_string())? {
            ConeIterate::Value { value, .. } => Some(value),
            ConeIterate::Diverged { step, value } => {
                println!("diverged at step {step}: {}", format_number(value));
                return Ok(0);
            }
        },
    };
    match value {
        Some(v) if cli.json => println!("{}", serde_json::json!({ "radius": v })),
        Some(v) => println!("{}", format_number(v)),
        None => println!("degenerate"),
    }
    Ok(0)
}

fn tables(cli: &Cli, which: &TableCmd) -> Outcome {
    match which {
        TableCmd::Wheel => print!("{}", render_wheel_table(cli.mode)),
        TableCmd::Polygon { max_n } => print!("{}", render_polygon_table(*max_n)),
        TableCmd::Check => {
            let report = reproduce_tables();
            if cli.json {
                print_json(&report)?;
            } else {
                for c in &report.checks {
                    println!("{}: {} cells, {}", c.name, c.cells, if c.passed() { "match" } else { "MISMATCH" });
                    for m in &c.mismatches {
                        println!("  {m}");
                    }
                }
            }
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn petals(cli: &Cli, edges: usize) -> Outcome {
    if edges > PETAL_CAP {
        return Err(format!("petal enumeration is capped at {PETAL_CAP} edges"));
    }
    let list = enumerate_petals(edges).map_err(|e| e.to_string())?;
    if cli.json {
        print_json(&list)?;
    } else {
        for (i, g) in list.iter().enumerate() {
            println!("PETAL:{edges}:{i} {}", edge_list(g));
        }
    }
    Ok(0)
}

fn decompose(cli: &Cli, graph: &str) -> Outcome {
    let g = read_graph(graph)?;
    let parts = join_decompose(&g);
    if cli.json {
        print_json(&parts)?;
    } else {
        for p in &parts {
            println!("{}", edge_list(p));
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Dim(a) => bounds(cli, a, Kind::Dim),
        Command::Sdim(a) => bounds(cli, a, Kind::Sdim),
        Command::Embed { graph, dim, sphere, radius, svg } => embed(cli, graph, *dim, *sphere, *radius, svg.as_deref()),
        Command::Minors { graph, proper, cap } => minors(cli, graph, *proper, *cap),
        Command::VerifyMinimal { graph, kind, s_candidates, four_vertex, failures_only, cap } => {
            verify(cli, graph.as_deref(), (*kind).into(), *s_candidates, *four_vertex, *failures_only, *cap)
        }
        Command::Radius { which } => radius(cli, which),
        Command::Tables { which } => tables(cli, which),
        Command::Petals { edges } => petals(cli, *edges),
        Command::Decompose { graph } => decompose(cli, graph),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("UNITDIM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
