use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use mubound::catalog;
use mubound::filling::{isometric_filling_seeded, verify_isometric};
use mubound::homotopy::{edgewidth, edgewidth_bruteforce};
use mubound::pipeline::{check_bound, known_mu, known_mu_table, run_pipeline, OperatorSource, PipelineError};
use mubound::refine::build_prescribed_edgewidth;
use mubound::spectral::{kernel_exact, one_negative_report, parse_operator, validate_operator, SimpleGraph, DEFAULT_TOL};
use mubound::surface_map::{parse_map, write_map, EmbeddedGraph};

#[derive(Parser)]
#[command(name = "mubound", version, about = "Surface triangulations, Schrodinger operators and the mu <= 7 - 2 chi chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isometric filling of an n-cycle, written as a sphere map.
    Fill {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Refine a map around a face into a triangulation with edgewidth k.
    Refine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        face: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Also write the refinement with the disk triangulated.
        #[arg(long)]
        triangulated: Option<PathBuf>,
    },
    /// Edgewidth relative to the distinguished face, if any.
    Edgewidth {
        #[arg(long)]
        input: PathBuf,
        /// Cross-check by enumerating cycles up to this length.
        #[arg(long)]
        brute_force: Option<usize>,
    },
    /// Exact kernel and eigenvalue positions of an operator on a map's graph.
    Kernel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        operator: PathBuf,
    },
    /// Full run: refine, operator, kernel vector, zero set and chain checks.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        face: usize,
        #[arg(long)]
        k: usize,
        /// Operator file on the triangulated refinement, or `designed:<seed>`.
        #[arg(long)]
        operator: String,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Test mu <= 7 - 2 chi.
    CheckBound {
        #[arg(long, required_unless_present = "graph")]
        mu: Option<i64>,
        /// Take mu from the reference table, e.g. K7.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
    /// Write a built-in map: tetrahedron, k7-torus, k6-projective.
    Catalog {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the reference table of known mu values.
    MuTable,
}

fn read_map(path: &Path) -> Result<EmbeddedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_map(&text).with_context(|| format!("surface_map: parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn fill(n: usize, seed: u64, out: &Path) -> Result<ExitCode> {
    let disk = isometric_filling_seeded(n, seed).context("filling")?;
    let ok = verify_isometric(&disk) && disk.is_simplicial();
    write(out, &write_map(&disk.to_sphere_map().context("filling")?))?;
    println!(
        "filling of C{n}: {} vertices, {} faces, isometric and simplicial: {ok}",
        disk.vertex_count,
        disk.faces.len()
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn refine(input: &Path, face: usize, k: usize, out: &Path, model: &Path, tri: Option<&Path>) -> Result<ExitCode> {
    let map = read_map(input)?;
    let r = build_prescribed_edgewidth(&map, face, k).context("refine")?;
    write(out, &write_map(&r.h))?;
    write(model, &serde_json::to_string_pretty(&r.model)?)?;
    if let Some(p) = tri {
        write(p, &write_map(&r.h_prime))?;
    }
    let info = r.h.classify_surface()?;
    println!(
        "H: {} vertices, {} edges, {} faces, chi {}; disk boundary {:?}",
        info.vertex_count,
        info.edge_count,
        info.face_count,
        info.chi,
        r.disk_boundary()
    );
    Ok(ExitCode::SUCCESS)
}

fn edgewidth_cmd(input: &Path, brute: Option<usize>) -> Result<ExitCode> {
    let map = read_map(input)?;
    let w = edgewidth(&map);
    println!("edgewidth {w}");
    if let Some(max) = brute {
        match edgewidth_bruteforce(&map, max) {
            Some(b) => println!("brute force {b}"),
            None => println!("brute force: no non-contractible cycle up to length {max}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn kernel(graph: &Path, operator: &Path) -> Result<ExitCode> {
    let map = read_map(graph)?;
    let text = fs::read_to_string(operator).with_context(|| format!("reading {}", operator.display()))?;
    let op = parse_operator(&text).context("spectral")?;
    if !validate_operator(&SimpleGraph::from_map(&map), &op).context("spectral")? {
        bail!("spectral: operator does not match the graph of the map");
    }
    let basis = kernel_exact(&op);
    let report = one_negative_report(&op, DEFAULT_TOL).context("spectral")?;
    println!("corank {}", basis.corank());
    for v in &basis.vectors {
        let entries: Vec<String> = v.iter().map(ToString::to_string).collect();
        println!("  [{}]", entries.join(", "));
    }
    println!(
        "negative eigenvalues {}, lambda1 {:.6}, one negative: {}",
        report.negatives, report.lambda1, report.passes
    );
    Ok(ExitCode::SUCCESS)
}

fn analyze(input: &Path, face: usize, k: usize, operator: &str, report: &Path, dot: Option<&Path>) -> Result<ExitCode> {
    let map = read_map(input)?;
    let source = match operator.strip_prefix("designed:") {
        Some(seed) => OperatorSource::Designed {
            seed: seed.parse().context("designed:<seed> needs an integer seed")?,
        },
        None => {
            let text = fs::read_to_string(operator).with_context(|| format!("reading {operator}"))?;
            OperatorSource::Given(parse_operator(&text).context("spectral")?)
        }
    };
    let run = match run_pipeline(&map, face, k, &source) {
        Ok(run) => run,
        Err(e) => {
            let body = serde_json::json!({ "error": e.to_string() });
            write(report, &serde_json::to_string_pretty(&body)?)?;
            return Err(anyhow::Error::new(e));
        }
    };
    write(report, &serde_json::to_string_pretty(&run.report)?)?;
    if let Some(p) = dot {
        write(p, &run.gamma_dot)?;
    }
    let r = &run.report;
    println!(
        "chi(S) {}  chi(Z) {}  chi(P) {}  chi(N) {}  chi(Gamma) {}  deg(v_K) {}  corank {}",
        r.chi_s, r.chi_z, r.chi_p, r.chi_n, r.chi_gamma, r.deg_vk, r.corank
    );
    for c in &r.checks {
        let mark = if c.holds { "ok  " } else { "FAIL" };
        println!("{mark} {}: {} {} {}", c.name, c.lhs, c.relation, c.rhs);
    }
    Ok(if r.all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn check_bound_cmd(mu: Option<i64>, graph: Option<&str>, chi: i64) -> Result<ExitCode> {
    let mu = match (mu, graph) {
        (Some(m), _) => m,
        (None, Some(g)) => known_mu(g).with_context(|| format!("no known mu for {g}"))?,
        (None, None) => bail!("--mu or --graph is required"),
    };
    let b = check_bound(mu, chi)?;
    println!("mu {mu} <= 7 - 2*{chi} = {}: {} (slack {})", 7 - 2 * chi, b.holds, b.slack);
    Ok(if b.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fill { n, seed, out } => fill(n, seed, &out),
        Command::Refine {
            input,
            face,
            k,
            out,
            model,
            triangulated,
        } => refine(&input, face, k, &out, &model, triangulated.as_deref()),
        Command::Edgewidth { input, brute_force } => edgewidth_cmd(&input, brute_force),
        Command::Kernel { graph, operator } => kernel(&graph, &operator),
        Command::Analyze {
            input,
            face,
            k,
            operator,
            report,
            dot,
        } => analyze(&input, face, k, &operator, &report, dot.as_deref()),
        Command::CheckBound { mu, graph, chi } => check_bound_cmd(mu, graph.as_deref(), chi),
        Command::Catalog { name, out } => {
            let map = catalog::by_name(&name).with_context(|| format!("unknown catalog map {name}"))?;
            write(&out, &write_map(&map))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MuTable => {
            for e in known_mu_table() {
                println!("{:<4} {:>2}  {}", e.graph, e.mu, e.note);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            if e.downcast_ref::<PipelineError>().is_some() {
                eprintln!("error: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}
