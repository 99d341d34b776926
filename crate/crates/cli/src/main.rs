//! Batch command-line surface over the rootspace toolkit: root system
//! construction and decomposition, Weyl and automorphism counts, the
//! opposition involution, catalogue queries, isomorphism checks, numerical
//! lift verification, and symmetric-space combinatorics.
//!
//! Exit codes: 0 success, 1 domain refusal (caps, catalogue integrity,
//! failed verification), 2 usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rootspace_core::autos::{
    aut_order, diagram_automorphisms, minus_id_decomposition, DynkinDiagram,
};
use rootspace_core::lieverify::{self, omega_image_check, restricted_roots, Tolerances};
use rootspace_core::rootsys::{build_irreducible, direct_sum, IrreducibleType, RootSystem};
use rootspace_core::symspace::{
    almost_killing, autw_m_orders, boundary_congruent, global_diagram, perm_groups, SpaceSpec,
};
use rootspace_core::weighted::{AlgebraDescriptor, Catalogue, IsoWitness, VertexWeight};
use rootspace_core::weyl::{generate_weyl, longest_element, SimpleSystem};

#[derive(Parser)]
#[command(
    name = "rootspace",
    version,
    about = "Root systems, weighted Dynkin diagrams, and automorphism lifts"
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Weyl enumeration cap.
    #[arg(long, global = true, default_value_t = 3_000_000)]
    cap: usize,
    /// External catalogue file (defaults to ./data/catalogue.txt when present).
    #[arg(long, global = true)]
    catalogue: Option<PathBuf>,
    /// Use only the hardcoded paper-stated catalogue entries.
    #[arg(long, global = true)]
    seed_catalogue: bool,
    /// Certificate tolerance for verify-lift; clustering runs 100x tighter.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a standard irreducible system or a direct sum and print it.
    Construct {
        #[arg(long = "type")]
        family: Option<String>,
        #[arg(long)]
        rank: Option<u32>,
        /// Direct sum, e.g. "A:2+G:2".
        #[arg(long)]
        sum: Option<String>,
    },
    /// Decompose a system into irreducible components.
    Decompose {
        #[arg(long = "type")]
        family: Option<String>,
        #[arg(long)]
        rank: Option<u32>,
        #[arg(long)]
        sum: Option<String>,
        /// Read a serialized root system document ("-" for stdin).
        #[arg(long)]
        input: Option<String>,
    },
    /// Weyl group of a standard system: BFS order and the longest element.
    Weyl {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        rank: u32,
    },
    /// Diagram automorphisms and the order of the full automorphism group.
    Aut {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        rank: u32,
    },
    /// The decomposition -Id = w0 * s and the opposition involution.
    Minusid {
        #[arg(long = "type")]
        family: String,
        #[arg(long)]
        rank: u32,
    },
    /// Decide whether two algebra descriptors are isomorphic.
    Isocheck { left: String, right: String },
    /// List the catalogue entries with provenance.
    Catalogue,
    /// Verify numerically that the automorphism lifts cover Aut^w(Sigma).
    VerifyLift {
        #[arg(long)]
        algebra: String,
    },
    /// Symmetric-space combinatorics of a de Rham factor spec.
    Symspace {
        /// Comma list of id:lambda factors, e.g. "sl(3,R):1,sl(3,R):2".
        #[arg(long)]
        spec: String,
        /// Two vertex subsets of the global diagram, e.g. "0,1" "2".
        /// Use "-" for the empty set.
        #[arg(long, num_args = 2)]
        boundary: Option<Vec<String>>,
    },
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `rootspace catalogue | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_family(s: &str) -> Result<IrreducibleType, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("unknown type '{s}' (A..G or BC)")))
}

fn build_from_args(
    family: &Option<String>,
    rank: &Option<u32>,
    sum: &Option<String>,
) -> Result<RootSystem, CliError> {
    match (family, rank, sum) {
        (Some(f), Some(r), None) => {
            Ok(build_irreducible(parse_family(f)?, *r)
                .map_err(|e| CliError::Domain(e.to_string()))?)
        }
        (None, None, Some(list)) => {
            let mut parts = Vec::new();
            for item in list.split('+') {
                let (f, r) = item
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("bad sum item '{item}'")))?;
                let rank: u32 = r
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad rank in '{item}'")))?;
                parts.push(
                    build_irreducible(parse_family(f.trim())?, rank)
                        .map_err(|e| CliError::Domain(e.to_string()))?,
                );
            }
            Ok(direct_sum(&parts).map_err(|e| CliError::Domain(e.to_string()))?)
        }
        _ => Err(CliError::Usage(
            "give either --type and --rank, or --sum \"A:2+G:2\"".into(),
        )),
    }
}

fn load_catalogue(cli: &Cli) -> Result<Catalogue, CliError> {
    if cli.seed_catalogue {
        return Ok(Catalogue::seed());
    }
    if let Some(path) = &cli.catalogue {
        return Ok(Catalogue::load(path)?);
    }
    let default = PathBuf::from("data/catalogue.txt");
    if default.exists() {
        Ok(Catalogue::load(&default)?)
    } else {
        Ok(Catalogue::seed())
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Construct { family, rank, sum } => {
            let sys = build_from_args(family, rank, sum)?;
            if cli.json {
                println!("{}", sys.to_json()?);
            } else {
                println!(
                    "dim {}, {} roots, rank {}",
                    sys.dim(),
                    sys.len(),
                    sys.rank()
                );
                let ss = SimpleSystem::standard(&sys);
                let dd = DynkinDiagram::new(&ss);
                println!("{}", render_diagram(&dd, None));
            }
            Ok(())
        }
        Command::Decompose {
            family,
            rank,
            sum,
            input,
        } => {
            let sys = match input {
                Some(path) => {
                    let text = if path == "-" {
                        use std::io::Read;
                        let mut buf = String::new();
                        std::io::stdin()
                            .read_to_string(&mut buf)
                            .map_err(|e| CliError::Domain(format!("reading stdin: {e}")))?;
                        buf
                    } else {
                        std::fs::read_to_string(path)
                            .map_err(|e| CliError::Domain(format!("{path}: {e}")))?
                    };
                    let value: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| CliError::Domain(format!("bad JSON: {e}")))?;
                    RootSystem::from_json(&value)?
                }
                None => build_from_args(family, rank, sum)?,
            };
            let decomposition = sys.decomposition();
            if cli.json {
                let comps: Vec<_> = decomposition
                    .components
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "type": c.ctype.to_string(),
                            "rank": c.rank(),
                            "roots": c.root_indices.len(),
                            "nonreduced": c.nonreduced,
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "components": comps }));
            } else {
                println!("{} component(s)", decomposition.len());
                for (i, c) in decomposition.components.iter().enumerate() {
                    println!(
                        "  [{i}] {} rank {} roots {}{}",
                        c.ctype,
                        c.rank(),
                        c.root_indices.len(),
                        if c.nonreduced { " (nonreduced)" } else { "" }
                    );
                }
            }
            Ok(())
        }
        Command::Weyl { family, rank } => {
            let sys = build_irreducible(parse_family(family)?, *rank)?;
            let ss = SimpleSystem::standard(&sys);
            let group = generate_weyl(&ss, cli.cap)?;
            let w0 = longest_element(&ss);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "order": group.len(),
                        "longest": { "word": w0.word, "perm": w0.perm },
                    })
                );
            } else {
                println!("|W({family}{rank})| = {}", group.len());
                println!(
                    "longest element: word length {}, word {:?}",
                    w0.length(),
                    w0.word
                );
            }
            Ok(())
        }
        Command::Aut { family, rank } => {
            let sys = build_irreducible(parse_family(family)?, *rank)?;
            let ss = SimpleSystem::standard(&sys);
            let dd = DynkinDiagram::new(&ss);
            let autos = diagram_automorphisms(&dd);
            let dd_order = autos.len();
            let full = aut_order(&ss, cli.cap)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "diagram": dd,
                        "automorphisms": autos.iter().map(|s| s.map.clone()).collect::<Vec<_>>(),
                        "aut_dd": dd_order,
                        "weyl": (full / dd_order as u128) as u64,
                        "aut": full as u64,
                    })
                );
            } else {
                println!("|Aut(DD)| = {dd_order}");
                println!("|W| = {}", full / dd_order as u128);
                println!("|Aut| = |W| * |Aut(DD)| = {full}");
            }
            Ok(())
        }
        Command::Minusid { family, rank } => {
            let sys = build_irreducible(parse_family(family)?, *rank)?;
            let ss = SimpleSystem::standard(&sys);
            let dec = minus_id_decomposition(&ss);
            let nontrivial = dec.nontrivial.iter().any(|&b| b);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "nontrivial": nontrivial,
                        "w0_length": dec.w0.length(),
                        "s": dec.s.map,
                    })
                );
            } else {
                println!(
                    "opposition involution {}",
                    if nontrivial { "nontrivial" } else { "trivial" }
                );
                println!("w0 length {}; s = {}", dec.w0.length(), dec.s);
            }
            Ok(())
        }
        Command::Isocheck { left, right } => {
            let catalogue = load_catalogue(cli)?;
            let a = AlgebraDescriptor::parse(left)?;
            let b = AlgebraDescriptor::parse(right)?;
            let verdict = rootspace_core::weighted::algebras_isomorphic(&a, &b, &catalogue)?;
            if cli.json {
                let witness = match &verdict.witness {
                    IsoWitness::Isomorphism(iso) => serde_json::json!({
                        "kind": "isomorphism",
                        "root_map": iso.root_map,
                    }),
                    IsoWitness::DistinguishingInvariant { left, right } => serde_json::json!({
                        "kind": "invariant",
                        "left": left.to_string(),
                        "right": right.to_string(),
                    }),
                };
                println!(
                    "{}",
                    serde_json::json!({ "isomorphic": verdict.isomorphic, "witness": witness })
                );
            } else if verdict.isomorphic {
                println!("isomorphic");
                if let IsoWitness::Isomorphism(iso) = &verdict.witness {
                    println!("witness root bijection: {:?}", iso.root_map);
                }
            } else {
                println!("not isomorphic");
                if let IsoWitness::DistinguishingInvariant { left, right } = &verdict.witness {
                    println!("  {a}: {left}");
                    println!("  {b}: {right}");
                }
            }
            Ok(())
        }
        Command::Catalogue => {
            let catalogue = load_catalogue(cli)?;
            if cli.json {
                let rows: Vec<_> = catalogue
                    .entries()
                    .map(|e| {
                        serde_json::json!({
                            "id": e.id.to_string(),
                            "type": e.ctype.map(|t| t.to_string()),
                            "weights": e.weights.as_deref().map(render_weights),
                            "provenance": e.provenance.to_string(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "entries": rows }));
            } else {
                let entries: Vec<_> = catalogue.entries().collect();
                if entries.is_empty() {
                    println!("(seed catalogue only; generative families: su(p,q), sl(n,R), sl(n,C), sl(n,H), sp(p,q), e6(-26), split, complex)");
                }
                for e in entries {
                    println!(
                        "{:12} {:5} {:14} {}",
                        e.id.to_string(),
                        e.ctype.map_or("-".into(), |t| t.to_string()),
                        e.weights.as_deref().map_or("-".into(), render_weights),
                        e.provenance
                    );
                }
            }
            Ok(())
        }
        Command::VerifyLift { algebra } => {
            let id: rootspace_core::weighted::AlgebraId = algebra.as_str().parse()?;
            let tol = Tolerances::from_certificate(cli.tol);
            let alg = lieverify::realize(&id)?;
            let rr = restricted_roots(&alg, tol)?;
            let report = omega_image_check(&alg, &rr, tol)?;
            let key = rr.weighted.class_key();
            if cli.json {
                let gens: Vec<_> = report
                    .generator_certificates
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "target": c.target_label,
                            "residual": c.max_residual(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "algebra": id.to_string(),
                        "restricted": key.to_string(),
                        "dim": alg.dim,
                        "g0": rr.g0_dim,
                        "generators": gens,
                        "omega_order": report.induced_order,
                        "expected_order": report.expected_order,
                        "max_residual": report.max_residual,
                        "verdict": report.surjective,
                    })
                );
            } else {
                println!("algebra:         {id} (dim {})", alg.dim);
                println!("restricted type: {key}");
                println!(
                    "dim split:       {} = {} (g0 = k0 {} + a {}) + {} (roots)",
                    alg.dim,
                    rr.g0_dim,
                    rr.k0_dim,
                    rr.a_dim,
                    alg.dim - rr.g0_dim
                );
                println!("{}", render_diagram(&rr.diagram, Some(&rr.vertex_weights)));
                println!("generator lifts:");
                for c in &report.generator_certificates {
                    println!("  {:24} residual {:.3e}", c.target_label, c.max_residual());
                }
                println!(
                    "omega image: order {} (expected {}), max residual {:.3e}",
                    report.induced_order, report.expected_order, report.max_residual
                );
                println!(
                    "verdict: {}",
                    if report.surjective { "PASS" } else { "FAIL" }
                );
            }
            if !report.surjective {
                return Err(CliError::Domain(
                    "omega image does not cover Aut^w(Sigma)".into(),
                ));
            }
            Ok(())
        }
        Command::Symspace { spec, boundary } => {
            let catalogue = load_catalogue(cli)?;
            let spec = SpaceSpec::parse(spec)?;
            let (iso, hom) = perm_groups(&spec, &catalogue)?;
            let killing = almost_killing(&spec, &catalogue)?;
            let orders = autw_m_orders(&spec, &catalogue, cli.cap)?;
            let global = global_diagram(&spec, &catalogue)?;
            let boundary_result = match boundary {
                Some(masks) => {
                    let parse_mask = |text: &str| -> Result<Vec<usize>, CliError> {
                        if text == "-" {
                            return Ok(Vec::new());
                        }
                        text.split(',')
                            .map(|t| {
                                t.trim()
                                    .parse::<usize>()
                                    .map_err(|_| CliError::Usage(format!("bad vertex index '{t}'")))
                            })
                            .collect()
                    };
                    let phi1 = parse_mask(&masks[0])?;
                    let phi2 = parse_mask(&masks[1])?;
                    Some(boundary_congruent(&spec, &catalogue, &phi1, &phi2)?)
                }
                None => None,
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "s_iso": iso.order(),
                        "s_hom": hom.order(),
                        "almost_killing": killing.almost_killing,
                        "killing": killing.killing,
                        "autw_sigma_m": orders.0 as u64,
                        "autw_dd_m": orders.1 as u64,
                        "boundary": boundary_result.as_ref().map(|b| b.congruent),
                    })
                );
            } else {
                println!("factors: {}", spec.len());
                println!(
                    "{}",
                    render_diagram(&global.diagram.base, Some(&global.diagram.weights))
                );
                println!("S_iso order {}, S_hom order {}", iso.order(), hom.order());
                println!(
                    "metric: {}{}",
                    if killing.almost_killing {
                        "almost Killing"
                    } else {
                        "not almost Killing"
                    },
                    if killing.killing { " (Killing)" } else { "" }
                );
                println!(
                    "|Aut^w(Sigma)_M| = {}, |Aut^w(DD)_M| = {}",
                    orders.0, orders.1
                );
                if let Some(b) = &boundary_result {
                    println!("boundary: {b}");
                }
            }
            Ok(())
        }
    }
}

fn render_weights(w: &[VertexWeight]) -> String {
    w.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// ASCII rendering: chains as `O --- O =2=> ((O))` with weight labels,
/// forked diagrams as an edge list.
fn render_diagram(dd: &DynkinDiagram, weights: Option<&[VertexWeight]>) -> String {
    if dd.is_empty() {
        return "(empty diagram)".into();
    }
    let token = |v: usize| -> String {
        let circle = if dd.vertices[v].doubled { "((O))" } else { "O" };
        match weights {
            Some(ws) => format!("{circle}:{}", ws[v]),
            None => circle.to_string(),
        }
    };
    let order = dd.canonical_order();
    // Group the canonical order into connected components.
    let mut lines = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && dd.code(order[j - 1], order[j]) != 0 {
            j += 1;
        }
        let comp = &order[i..j];
        let forked = comp.iter().any(|&v| dd.degree(v) >= 3);
        if forked {
            let mut parts = vec![format!(
                "vertices {}",
                comp.iter()
                    .map(|&v| format!("{v}:{}", token(v)))
                    .collect::<Vec<_>>()
                    .join(" ")
            )];
            for e in &dd.edges {
                if comp.contains(&e.a) {
                    parts.push(format!(
                        "{}-{} (bond {}{})",
                        e.a,
                        e.b,
                        e.bond,
                        e.direction
                            .map_or(String::new(), |d| format!(", short {d}"))
                    ));
                }
            }
            lines.push(parts.join("; "));
        } else {
            let mut line = token(comp[0]);
            for w in comp.windows(2) {
                let code = dd.code(w[0], w[1]);
                let (bond, rel) = (code / 4, code % 4);
                let glyph = match (bond, rel) {
                    (1, _) => " --- ".to_string(),
                    (b, 2) => format!(" ={b}=> "),
                    (b, 1) => format!(" <={b}= "),
                    (b, _) => format!(" ={b}= "),
                };
                line.push_str(&glyph);
                line.push_str(&token(w[1]));
            }
            lines.push(line);
        }
        i = j;
    }
    lines.join("\n")
}
