//! Command line front end: labelling semigroups, triangle fibers, the
//! bridge experiments, and honeycomb rendering, with JSON or table
//! output. Exit code 0 on success, 2 on validation or usage errors,
//! 3 when a search exceeds its node budget. Set BZPHYLO_THREADS to cap
//! internal parallelism; output order is canonical either way.

use bzphylo::bridge::{
    bz_cubic_relation_count, check_inclusion, counterexample_m_ge_4, hilbert_independence_experiment,
    phi_gamma_check, theorem_main_degree1_check, verify_relation, GeneratorMultiset,
};
use bzphylo::bz::{
    build_grid, enumerate_fiber_bounded, minimal_generators, BzTriangle, GluedBzElement,
    DEFAULT_MAX_NODES,
};
use bzphylo::cyclic::{
    degree_one_elements, hilbert_value, is_member, saturation_gap, tripod_vertices, PhyloElement,
};
use bzphylo::graphs::Graph;
use bzphylo::render::{glued_honeycomb_svg, honeycomb_svg, honeycomb_text, RenderOptions};
use bzphylo::weights::{lr_coefficient, level_one_block_dim, DominantWeight, LevelOneWeight};
use bzphylo::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bzphylo", version, about = "Cyclic-group labelling semigroups on graphs and their triangle counterparts")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Node budget for fiber searches.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List the m^2 degree-one tripod elements.
    Vertices {
        #[arg(long)]
        m: u32,
    },
    /// List the degree-one elements of a graph's semigroup.
    Deg1 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Hilbert values of a graph's semigroup for degrees 0..=dmax.
    Hilbert {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        dmax: u32,
    },
    /// Decide membership of an element, with witness labellings.
    Member {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        element: PathBuf,
    },
    /// Cone points missing from the semigroup, degree by degree.
    Saturation {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        dmax: u32,
    },
    /// Conformal block dimension for level-one leaf weights.
    Blockdim {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        /// JSON object mapping each leaf edge to a weight index.
        #[arg(long)]
        leaves: PathBuf,
    },
    /// Littlewood-Richardson triple multiplicity.
    Lr {
        #[arg(long)]
        m: u32,
        /// Weight triple as "a,b;c,d;e,f".
        #[arg(long)]
        weights: String,
    },
    /// Triangle-side operations.
    #[command(subcommand)]
    Bz(BzCommand),
    /// Experiments crossing between the two worlds.
    #[command(subcommand)]
    Bridge(BridgeCommand),
    /// Honeycomb diagrams.
    #[command(subcommand)]
    Render(RenderCommand),
}

#[derive(Subcommand)]
enum BzCommand {
    /// All triangles over a boundary weight triple.
    Enumerate {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        weights: String,
    },
    /// Number of triangles over a boundary weight triple.
    Count {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        weights: String,
    },
    /// Indecomposable triangles with boundary sizes up to a bound.
    Generators {
        #[arg(long)]
        m: u32,
        /// Boundary size bound; defaults to m.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// The grid underlying the triangles for one modulus.
    Grid {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum BridgeCommand {
    /// Certify triangle preimages for all bounded-degree tripod
    /// elements, and sweep projected triples for escapees.
    CheckInclusion {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// The explicit projected triple outside the labelling semigroup.
    Counterexample {
        #[arg(long)]
        m: u32,
    },
    /// Cover every bounded-level element by a glued triangle family.
    PhiCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        lbound: u32,
    },
    /// Check an exponent identity, or sweep for degree-3 ones.
    Relations(RelationsArgs),
    /// Compare Hilbert columns across all graphs of one type.
    HilbertIndep {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        leaves: usize,
        #[arg(long, default_value_t = 3)]
        dmax: u32,
    },
    /// Weight-translate every degree-one element and check the
    /// admissibility conditions.
    Deg1Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Multiset file: {"labellings": [...]} or {"triangles": [...]}.
    #[arg(long, requires = "rhs", conflicts_with = "sweep_cubics")]
    lhs: Option<PathBuf>,
    #[arg(long, requires = "lhs", conflicts_with = "sweep_cubics")]
    rhs: Option<PathBuf>,
    /// Count the degree-3 binomial relations among the eight nonzero
    /// SL3 triangle generators.
    #[arg(long)]
    sweep_cubics: bool,
}

#[derive(Subcommand)]
enum RenderCommand {
    /// SVG honeycomb. The input holds a triangle, or a glued family as
    /// {"graph": ..., "element": ...}.
    Svg {
        #[arg(long)]
        input: PathBuf,
        /// Draw zero-weight segments dashed instead of omitting them.
        #[arg(long)]
        show_zero: bool,
    },
    /// Monospaced text honeycomb for a triangle.
    Text {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (e.g. `bzphylo deg1 ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var("BZPHYLO_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_json(&read_json(path)?)
}

/// Parses "a,b;c,d;e,f" into three weights with m-1 coordinates each.
fn parse_weight_triple(m: u32, s: &str) -> Result<(DominantWeight, DominantWeight, DominantWeight)> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 3 {
        return Err(Error::Validation(format!(
            "expected three weights separated by `;`, got {} part(s)",
            parts.len()
        )));
    }
    let mut ws = Vec::with_capacity(3);
    for part in parts {
        let coords: Vec<u32> = part
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Validation(format!("bad coordinate {c:?} in {part:?}")))
            })
            .collect::<Result<_>>()?;
        ws.push(DominantWeight::new(m, coords)?);
    }
    let mut it = ws.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap(), it.next().unwrap()))
}

fn emit(format: Format, value: &Value, table: &str) {
    match format {
        Format::Json => println!("{value}"),
        Format::Table => println!("{table}"),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let format = cli.format;
    match &cli.command {
        Command::Vertices { m } => {
            let verts = tripod_vertices(*m)?;
            let items: Vec<Value> = verts.iter().map(PhyloElement::to_json).collect();
            let mut table = format!("{} vertices for m = {m}", verts.len());
            for v in &items {
                table.push_str(&format!("\n{v}"));
            }
            emit(format, &json!({ "m": m, "count": verts.len(), "vertices": items }), &table);
        }
        Command::Deg1 { graph, m } => {
            let g = read_graph(graph)?;
            let labellings = degree_one_elements(&g, *m)?;
            let items: Vec<Value> = labellings.iter().map(|l| l.to_json()).collect();
            let mut table = format!("{} degree-one elements", labellings.len());
            for l in &items {
                table.push_str(&format!("\n{l}"));
            }
            emit(format, &json!({ "m": m, "count": labellings.len(), "elements": items }), &table);
        }
        Command::Hilbert { graph, m, dmax } => {
            let g = read_graph(graph)?;
            let mut values = Vec::with_capacity(*dmax as usize + 1);
            for d in 0..=*dmax {
                values.push(hilbert_value(&g, *m, d)?);
            }
            let table = values
                .iter()
                .enumerate()
                .map(|(d, v)| format!("{d}: {v}"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(format, &json!({ "m": m, "values": values }), &table);
        }
        Command::Member { graph, m, element } => {
            let g = read_graph(graph)?;
            let x = PhyloElement::from_json(&read_json(element)?, *m)?;
            let mem = is_member(&g, *m, &x)?;
            let witness = mem.witness.as_ref().map(|w| {
                json!({
                    "split_tree": w.split.tree.to_json(),
                    "split_pairs": w.split.pairs,
                    "labellings": w.labellings.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
                })
            });
            let mut table = format!("member: {}", mem.member);
            if let Some(w) = &mem.witness {
                for l in &w.labellings {
                    table.push_str(&format!("\n{}", l.to_json()));
                }
            }
            emit(format, &json!({ "member": mem.member, "witness": witness }), &table);
        }
        Command::Saturation { graph, m, dmax } => {
            let g = read_graph(graph)?;
            let mut gaps = Vec::new();
            for d in 0..=*dmax {
                for x in saturation_gap(&g, *m, d)? {
                    gaps.push(x.to_json());
                }
            }
            let mut table = format!("gap elements up to degree {dmax}: {}", gaps.len());
            for x in &gaps {
                table.push_str(&format!("\n{x}"));
            }
            emit(format, &json!({ "m": m, "dmax": dmax, "gap": gaps }), &table);
        }
        Command::Blockdim { graph, m, leaves } => {
            let g = read_graph(graph)?;
            let assignment = read_json(leaves)?;
            let obj = assignment
                .as_object()
                .ok_or_else(|| Error::Json("leaf weights must be a JSON object".into()))?;
            let mut weights = BTreeMap::new();
            for (edge, idx) in obj {
                let idx = idx
                    .as_u64()
                    .ok_or_else(|| Error::Json(format!("index for {edge:?} must be a number")))?;
                weights.insert(edge.clone(), LevelOneWeight::new(*m, idx as u32)?);
            }
            let dim = level_one_block_dim(&g, &weights, *m)?;
            emit(format, &json!({ "m": m, "dimension": dim }), &format!("dimension: {dim}"));
        }
        Command::Lr { m, weights } => {
            let (lam, mu, nu) = parse_weight_triple(*m, weights)?;
            let c = lr_coefficient(&lam, &mu, &nu)?;
            emit(format, &json!({ "coefficient": c }), &c.to_string());
        }
        Command::Bz(sub) => run_bz(cli, sub)?,
        Command::Bridge(sub) => run_bridge(cli, sub)?,
        Command::Render(sub) => run_render(cli, sub)?,
    }
    Ok(())
}

fn run_bz(cli: &Cli, sub: &BzCommand) -> Result<()> {
    let format = cli.format;
    match sub {
        BzCommand::Enumerate { m, weights } => {
            let (lam, mu, nu) = parse_weight_triple(*m, weights)?;
            let fiber = enumerate_fiber_bounded(*m, &lam, &mu, &nu, cli.max_nodes)?;
            let items: Vec<Value> = fiber.iter().map(BzTriangle::to_json).collect();
            let mut table = format!("{} triangles", fiber.len());
            for t in &items {
                table.push_str(&format!("\n{t}"));
            }
            emit(format, &json!({ "m": m, "count": fiber.len(), "triangles": items }), &table);
        }
        BzCommand::Count { m, weights } => {
            let (lam, mu, nu) = parse_weight_triple(*m, weights)?;
            let n = enumerate_fiber_bounded(*m, &lam, &mu, &nu, cli.max_nodes)?.len();
            emit(format, &json!({ "count": n }), &n.to_string());
        }
        BzCommand::Generators { m, bound } => {
            let bound = bound.unwrap_or(*m);
            let gens = minimal_generators(*m, bound)?;
            let mut items = Vec::with_capacity(gens.len());
            let mut table = format!("{} generators (boundary sizes up to {bound})", gens.len());
            for t in &gens {
                let (lam, mu, nu) = t.pr()?;
                table.push_str(&format!(
                    "\n{}  pr = ({:?}; {:?}; {:?})",
                    t.to_json(),
                    lam.coords(),
                    mu.coords(),
                    nu.coords()
                ));
                items.push(json!({
                    "triangle": t.to_json(),
                    "pr": [lam.to_json(), mu.to_json(), nu.to_json()],
                }));
            }
            emit(format, &json!({ "m": m, "bound": bound, "generators": items }), &table);
        }
        BzCommand::Grid { m } => {
            let grid = build_grid(*m)?;
            let gs: Vec<String> = grid.g_points().iter().map(|p| format!("{p:?}")).collect();
            let hs: Vec<String> = grid.h_points().iter().map(|p| format!("{p:?}")).collect();
            let table = format!(
                "grid for m = {m}: coordinate sum {}\n{} value sites: {}\n{} hexagon centers: {}",
                2 * m - 3,
                gs.len(),
                gs.join(" "),
                hs.len(),
                hs.join(" ")
            );
            emit(
                format,
                &json!({ "m": m, "sum": 2 * m - 3, "g_points": gs, "h_points": hs }),
                &table,
            );
        }
    }
    Ok(())
}

fn multiset_from_json(m: u32, v: &Value) -> Result<GeneratorMultiset> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Json("multiset must be a JSON object".into()))?;
    if let Some(items) = obj.get("labellings") {
        let items = items
            .as_array()
            .ok_or_else(|| Error::Json("\"labellings\" must be an array".into()))?;
        let elements: Vec<PhyloElement> = items
            .iter()
            .map(|x| PhyloElement::from_json(x, m))
            .collect::<Result<_>>()?;
        return Ok(GeneratorMultiset::Labelling(elements));
    }
    if let Some(items) = obj.get("triangles") {
        let items = items
            .as_array()
            .ok_or_else(|| Error::Json("\"triangles\" must be an array".into()))?;
        let triangles: Vec<BzTriangle> =
            items.iter().map(BzTriangle::from_json).collect::<Result<_>>()?;
        return Ok(GeneratorMultiset::Triangle(triangles));
    }
    Err(Error::Json("multiset needs a \"labellings\" or \"triangles\" key".into()))
}

fn run_bridge(cli: &Cli, sub: &BridgeCommand) -> Result<()> {
    let format = cli.format;
    match sub {
        BridgeCommand::CheckInclusion { m, bound } => {
            let report = check_inclusion(*m, *bound)?;
            emit(format, &report.to_json(), &report.to_string());
        }
        BridgeCommand::Counterexample { m } => {
            let t = counterexample_m_ge_4(*m)?;
            let (lam, mu, nu) = t.pr()?;
            let coords: BTreeMap<String, Vec<u32>> = [
                ("e1".to_string(), lam.coords().to_vec()),
                ("e2".to_string(), mu.coords().to_vec()),
                ("e3".to_string(), nu.coords().to_vec()),
            ]
            .into_iter()
            .collect();
            let not_in =
                bzphylo::cyclic::in_rpr(&Graph::tripod(), *m, &coords)?.is_none();
            emit(
                format,
                &json!({ "triangle": t.to_json(), "not_in_rpr": not_in }),
                &format!("{}\nNOT in R^pr: {not_in}", t.to_json()),
            );
        }
        BridgeCommand::PhiCheck { graph, m, lbound } => {
            let g = read_graph(graph)?;
            let report = phi_gamma_check(&g, *m, *lbound)?;
            emit(format, &report.to_json(), &report.to_string());
        }
        BridgeCommand::Relations(args) => {
            if args.sweep_cubics {
                let n = bz_cubic_relation_count()?;
                emit(format, &json!({ "relations": n }), &n.to_string());
            } else {
                let (lhs, rhs) = match (&args.lhs, &args.rhs) {
                    (Some(l), Some(r)) => (l, r),
                    _ => {
                        return Err(Error::Validation(
                            "pass --lhs and --rhs, or --sweep-cubics".into(),
                        ))
                    }
                };
                let lhs = multiset_from_json(args.m, &read_json(lhs)?)?;
                let rhs = multiset_from_json(args.m, &read_json(rhs)?)?;
                let holds = verify_relation(args.m, &lhs, &rhs)?;
                emit(format, &json!({ "holds": holds }), &format!("relation holds: {holds}"));
            }
        }
        BridgeCommand::HilbertIndep { m, genus, leaves, dmax } => {
            let report = hilbert_independence_experiment(*m, *genus, *leaves, *dmax)?;
            emit(format, &report.to_json(), &report.to_string());
        }
        BridgeCommand::Deg1Check { graph, m } => {
            let g = read_graph(graph)?;
            let report = theorem_main_degree1_check(&g, *m)?;
            emit(format, &report.to_json(), &report.to_string());
        }
    }
    Ok(())
}

fn run_render(_cli: &Cli, sub: &RenderCommand) -> Result<()> {
    match sub {
        RenderCommand::Svg { input, show_zero } => {
            let v = read_json(input)?;
            let svg = if v.get("graph").is_some() {
                let g = Graph::from_json(&v["graph"])?;
                let e = GluedBzElement::from_json(&v["element"])?;
                glued_honeycomb_svg(&g, &e)?
            } else {
                let t = BzTriangle::from_json(&v)?;
                honeycomb_svg(&t, &RenderOptions { show_zero_edges: *show_zero })?
            };
            print!("{svg}");
        }
        RenderCommand::Text { input } => {
            let t = BzTriangle::from_json(&read_json(input)?)?;
            print!("{}", honeycomb_text(&t)?);
        }
    }
    Ok(())
}
