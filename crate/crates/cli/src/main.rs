use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use chipfire::automorphism::{
    automorphism_group, order3_edge_free, quotient_by, sigma_from_divisor,
};
use chipfire::constructions as build;
use chipfire::divisor::{dhar_burn, is_equivalent, rank, reduce};
use chipfire::gonality::{class_partition, gonality, zero_three_condition, GonalityBounds};
use chipfire::io as formats;
use chipfire::morphism::quotient_from_divisor;
use chipfire::{Divisor, ErrorKind, Multigraph, VertexSet};

#[derive(Parser)]
#[command(name = "chipfire", version, about = "Divisors, gonality and harmonic morphisms on multigraphs")]
struct Cli {
    /// Machine-readable output (and errors) as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divisorial gonality with a witness divisor.
    Gonality {
        graph: String,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Baker-Norine rank of a divisor.
    Rank { graph: String, divisor: String },
    /// Reduce a divisor at a vertex, printing the fired sets.
    Reduce {
        graph: String,
        divisor: String,
        #[arg(long)]
        at: String,
    },
    /// Run the burning process from a vertex.
    Burn {
        graph: String,
        divisor: String,
        #[arg(long)]
        from: String,
    },
    /// Exit 0 if the two divisors are linearly equivalent, 1 otherwise.
    Equivalent {
        graph: String,
        first: String,
        second: String,
    },
    /// Classes of a degree-3 positive-rank divisor.
    Classes { graph: String, divisor: String },
    /// Tree quotient of a degree-3 positive-rank divisor.
    Quotient { graph: String, divisor: String },
    /// Morphism checks.
    Morphism {
        #[command(subcommand)]
        command: MorphismCommand,
    },
    /// Pull a divisor on the target back along a harmonic morphism.
    Pullback {
        source: String,
        target: String,
        morphism: String,
        divisor: String,
    },
    /// Automorphism group order and generators, or order-3 edge-free elements.
    Automorphisms {
        graph: String,
        /// Only order-3 automorphisms that fix no edge (3 is the only supported value).
        #[arg(long)]
        order: Option<usize>,
        /// Keep only those whose quotient is a tree.
        #[arg(long)]
        tree_quotient: bool,
    },
    /// Order-3 automorphism built from a zero-three divisor.
    Sigma { graph: String, divisor: String },
    /// Property checks; exit 0 if the property holds, 1 if not.
    Check {
        #[command(subcommand)]
        command: CheckCommand,
    },
    /// Gonality bounds available without search.
    Bounds { graph: String },
    /// Emit a graph from a named family.
    Construct(ConstructArgs),
    /// Graphviz rendering of a graph.
    ExportDot { graph: String },
}

#[derive(Subcommand)]
enum MorphismCommand {
    /// Validate a morphism and report harmonicity, non-degeneracy and degree.
    Check {
        source: String,
        target: String,
        morphism: String,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Whether the graph satisfies the zero-three condition (gonality 3 required).
    ZeroThree { graph: String },
}

#[derive(Args)]
struct ConstructArgs {
    /// banana, wheel, complete, complete-bipartite, cube, frucht, fig7, path, cycle,
    /// prism, random-tree, ladder, triple-cover, k-cover, two-bridge, product
    family: String,
    /// Family parameters: sizes, or graph files for the tree-based families.
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated attachment set for triple-cover and k-cover.
    #[arg(long)]
    attach: Option<String>,
    /// Extra parallel edges per triangle edge for triple-cover.
    #[arg(long, default_value_t = 0)]
    extra: usize,
}

enum Failure {
    Lib(chipfire::Error),
    Io(String, io::Error),
    Usage(String),
}

impl From<chipfire::Error> for Failure {
    fn from(e: chipfire::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Io(..) => "Io",
            Failure::Usage(_) => "Usage",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(path, e) => format!("{path}: {e}"),
            Failure::Usage(m) => m.clone(),
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.kind() != ErrorKind::Malformed => 3,
            _ => 2,
        }
    }
}

type Outcome = Result<Report, Failure>;

struct Report {
    human: String,
    json: Value,
    holds: bool,
}

impl Report {
    fn new(human: impl Into<String>, json: Value) -> Self {
        Report {
            human: human.into(),
            json,
            holds: true,
        }
    }

    fn verdict(mut self, holds: bool) -> Self {
        self.holds = holds;
        self
    }
}

fn read(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io("<stdin>".into(), e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(path.into(), e))
    }
}

fn load_graph(path: &str) -> Result<Multigraph, Failure> {
    Ok(formats::graph_from_json(&read(path)?)?)
}

fn load_divisor(g: &Multigraph, path: &str) -> Result<Divisor, Failure> {
    Ok(formats::divisor_from_json(g, &read(path)?)?)
}

fn labels<'a>(g: &'a Multigraph, s: &VertexSet) -> Vec<&'a str> {
    s.iter().map(|v| g.label(v)).collect()
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> Result<T, Failure> {
    let raw = params
        .get(i)
        .ok_or_else(|| Failure::Usage(format!("missing parameter `{name}`")))?;
    raw.parse()
        .map_err(|_| Failure::Usage(format!("bad value `{raw}` for `{name}`")))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gonality { graph, max_degree } => {
            let g = load_graph(&graph)?;
            let r = gonality(&g, max_degree)?;
            let witness = formats::divisor_to_value(&g, &r.witness);
            Ok(Report::new(
                format!("{}\nwitness: {}", r.gonality, witness),
                json!({ "gonality": r.gonality, "witness": witness, "bounds": bounds_value(&r.bounds) }),
            ))
        }
        Command::Rank { graph, divisor } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let r = rank(&g, &d)?;
            Ok(Report::new(r.to_string(), json!({ "rank": r })))
        }
        Command::Reduce { graph, divisor, at } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let v = g.vertex(&at)?;
            let trace = reduce(&g, &d, v)?;
            let reduced = formats::divisor_to_value(&g, &trace.divisor);
            let fired: Vec<Vec<&str>> = trace.fired.iter().map(|s| labels(&g, s)).collect();
            let mut human = String::new();
            for (i, s) in fired.iter().enumerate() {
                human.push_str(&format!("fire {}: {}\n", i + 1, s.join(" ")));
            }
            human.push_str(&format!("reduced: {reduced}"));
            Ok(Report::new(human, json!({ "reduced": reduced, "trace": fired })))
        }
        Command::Burn { graph, divisor, from } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let v = g.vertex(&from)?;
            let b = dhar_burn(&g, &d, v)?;
            let mut human = String::new();
            for &(u, round) in &b.order {
                human.push_str(&format!("round {round}: {} burns\n", g.label(u)));
            }
            if b.all_burned() {
                human.push_str("all vertices burned");
            } else {
                human.push_str(&format!("unburnt: {}", labels(&g, &b.unburnt).join(" ")));
            }
            let order: Vec<Value> = b
                .order
                .iter()
                .map(|&(u, round)| json!({ "vertex": g.label(u), "round": round }))
                .collect();
            Ok(Report::new(
                human,
                json!({ "order": order, "unburnt": labels(&g, &b.unburnt), "all_burned": b.all_burned() }),
            ))
        }
        Command::Equivalent { graph, first, second } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &first)?;
            let e = load_divisor(&g, &second)?;
            let eq = is_equivalent(&g, &d, &e)?;
            Ok(Report::new(eq.to_string(), json!({ "equivalent": eq })).verdict(eq))
        }
        Command::Classes { graph, divisor } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let p = class_partition(&g, &d)?;
            let classes: Vec<Vec<&str>> = p.classes.iter().map(|c| labels(&g, c)).collect();
            let human = classes.iter().map(|c| c.join(" ")).collect::<Vec<_>>().join("\n");
            Ok(Report::new(human, json!({ "classes": classes })))
        }
        Command::Quotient { graph, divisor } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let q = quotient_from_divisor(&g, &d)?;
            let tree = formats::graph_to_value(&q.tree);
            let morphism = formats::morphism_to_value(&q.morphism);
            Ok(Report::new(
                format!("tree: {tree}\nmorphism: {morphism}"),
                json!({ "tree": tree, "morphism": morphism }),
            ))
        }
        Command::Morphism {
            command: MorphismCommand::Check { source, target, morphism },
        } => {
            let s = load_graph(&source)?;
            let t = load_graph(&target)?;
            let phi = formats::morphism_from_json(&s, &t, &read(&morphism)?)?;
            let harmonic = phi.is_harmonic();
            let nondegenerate = phi.is_nondegenerate();
            let degree = if harmonic { phi.degree().ok() } else { None };
            let human = format!(
                "harmonic: {harmonic}\nnon-degenerate: {nondegenerate}\ndegree: {}",
                degree.map_or("-".to_string(), |d| d.to_string())
            );
            Ok(Report::new(
                human,
                json!({ "harmonic": harmonic, "nondegenerate": nondegenerate, "degree": degree }),
            )
            .verdict(harmonic))
        }
        Command::Pullback { source, target, morphism, divisor } => {
            let s = load_graph(&source)?;
            let t = load_graph(&target)?;
            let phi = formats::morphism_from_json(&s, &t, &read(&morphism)?)?;
            let d = load_divisor(&t, &divisor)?;
            let pulled = formats::divisor_to_value(&s, &phi.pullback(&d)?);
            Ok(Report::new(pulled.to_string(), pulled))
        }
        Command::Automorphisms { graph, order, tree_quotient } => {
            let g = load_graph(&graph)?;
            match order {
                None if !tree_quotient => {
                    let group = automorphism_group(&g);
                    let gens: Vec<Value> = group
                        .generators
                        .iter()
                        .map(|s| formats::automorphism_to_value(&g, s))
                        .collect();
                    let mut human = format!("order: {}", group.order);
                    for s in &gens {
                        human.push_str(&format!("\n{s}"));
                    }
                    Ok(Report::new(
                        human,
                        json!({ "order": u64::try_from(group.order).map_or_else(|_| json!(group.order.to_string()), |o| json!(o)), "generators": gens }),
                    ))
                }
                Some(k) if k != 3 => Err(Failure::Usage("only --order 3 is supported".into())),
                _ => {
                    let mut found = order3_edge_free(&g);
                    if tree_quotient {
                        found.retain(|s| quotient_by(&g, s).is_ok_and(|(q, _)| q.is_tree()));
                    }
                    let maps: Vec<Value> = found.iter().map(|s| formats::automorphism_to_value(&g, s)).collect();
                    let mut human = format!("count: {}", maps.len());
                    for s in &maps {
                        human.push_str(&format!("\n{s}"));
                    }
                    Ok(Report::new(human, json!({ "count": maps.len(), "automorphisms": maps })))
                }
            }
        }
        Command::Sigma { graph, divisor } => {
            let g = load_graph(&graph)?;
            let d = load_divisor(&g, &divisor)?;
            let s = sigma_from_divisor(&g, &d)?;
            let v = formats::automorphism_to_value(&g, &s);
            Ok(Report::new(v.to_string(), v))
        }
        Command::Check {
            command: CheckCommand::ZeroThree { graph },
        } => {
            let g = load_graph(&graph)?;
            let z = zero_three_condition(&g)?;
            let witness = z.witness.as_ref().map(|d| formats::divisor_to_value(&g, d));
            let human = match &witness {
                Some(w) => format!("holds\nwitness: {w}"),
                None => "fails".to_string(),
            };
            Ok(Report::new(human, json!({ "holds": z.holds, "witness": witness })).verdict(z.holds))
        }
        Command::Bounds { graph } => {
            let g = load_graph(&graph)?;
            let b = GonalityBounds::compute(&g);
            let v = bounds_value(&b);
            let human = format!(
                "lower: {}\nupper: {}\nvertex-edge: {}\ntreewidth >= 3: {}\nmin valence: {}\ngenus > 0: {}",
                b.lower(),
                b.upper,
                b.vertex_edge,
                b.treewidth_at_least_3,
                b.min_valence.map_or("-".to_string(), |m| m.to_string()),
                b.has_cycle
            );
            Ok(Report::new(human, v))
        }
        Command::Construct(args) => {
            let g = construct(&args)?;
            let v = formats::graph_to_value(&g);
            Ok(Report::new(v.to_string(), v))
        }
        Command::ExportDot { graph } => {
            let g = load_graph(&graph)?;
            let dot = formats::to_dot(&g);
            Ok(Report::new(dot.trim_end(), json!({ "dot": dot })))
        }
    }
}

fn bounds_value(b: &GonalityBounds) -> Value {
    json!({
        "lower": b.lower(),
        "upper": b.upper,
        "vertex_edge": b.vertex_edge,
        "treewidth_at_least_3": b.treewidth_at_least_3,
        "min_valence": b.min_valence,
        "has_cycle": b.has_cycle,
    })
}

fn attachment(t: &Multigraph, attach: &Option<String>) -> Result<VertexSet, Failure> {
    match attach {
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok(t.vertex_set(&names)?)
        }
        None => Ok(VertexSet::new(0..t.vertex_count())),
    }
}

fn construct(a: &ConstructArgs) -> Result<Multigraph, Failure> {
    let p = &a.params;
    let g = match a.family.as_str() {
        "banana" => build::banana(param(p, 0, "n")?)?,
        "wheel" => build::wheel(param(p, 0, "n")?)?,
        "complete" => build::complete(param(p, 0, "n")?)?,
        "complete-bipartite" => build::complete_bipartite(param(p, 0, "m")?, param(p, 1, "n")?)?,
        "cube" => build::cube(),
        "frucht" => build::frucht(),
        "fig7" => build::fig7(),
        "path" => build::path(param(p, 0, "n")?)?,
        "cycle" => build::cycle(param(p, 0, "n")?)?,
        "prism" => build::prism(),
        "random-tree" => {
            let mut rng = StdRng::seed_from_u64(a.seed);
            build::random_tree(param(p, 0, "n")?, &mut rng)?
        }
        "ladder" => build::ladder(&load_graph(&param::<String>(p, 0, "tree")?)?)?,
        "triple-cover" => {
            let t = load_graph(&param::<String>(p, 0, "tree")?)?;
            let s = attachment(&t, &a.attach)?;
            build::triple_cover_thickened(&t, &s, a.extra)?
        }
        "k-cover" => {
            let t = load_graph(&param::<String>(p, 0, "tree")?)?;
            let k = param(p, 1, "k")?;
            match &a.attach {
                Some(_) => build::k_cover_with(&t, k, &attachment(&t, &a.attach)?)?,
                None => build::k_cover(&t, k)?,
            }
        }
        "two-bridge" => match p.first() {
            Some(_) => build::two_bridge_family(param(p, 0, "index")?)?,
            None => build::two_bridge_trivalent(),
        },
        "product" => {
            let g = load_graph(&param::<String>(p, 0, "first")?)?;
            let h = load_graph(&param::<String>(p, 1, "second")?)?;
            Multigraph::cartesian_product(&g, &h)?
        }
        other => return Err(Failure::Usage(format!("unknown family `{other}`"))),
    };
    Ok(g)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    let stdout = io::stdout();
    match run(cli) {
        Ok(report) => {
            let mut out = stdout.lock();
            let text = if as_json { report.json.to_string() } else { report.human };
            let _ = writeln!(out, "{text}");
            ExitCode::from(if report.holds { 0 } else { 1 })
        }
        Err(f) => {
            if as_json {
                eprintln!("{}", json!({ "error": { "code": f.code(), "message": f.message() } }));
            } else {
                eprintln!("error [{}]: {}", f.code(), f.message());
            }
            ExitCode::from(f.exit())
        }
    }
}
