use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ahomotopy::format::{
    parse_cone, parse_graph, parse_map, parse_path, write_grid, write_report, write_trace,
};
use ahomotopy::{
    are_homotopic, certify_no_cone_map, count_homomorphisms, enumerate_homomorphisms, is_graph_map,
    nullhomotopic_in_cycle, obstruction_cone, path_homotopic_rel_endpoints, search_cone_maps,
    winding_number, Basing, Error, Graph, GraphMap, Limits, MapHomotopy, Nullhomotopy, PathHomotopy,
    StablePath,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const CONE_MAP_FOUND: u8 = 2;
const LIMIT: u8 = 3;
const PARSE: u8 = 64;
const VALIDATION: u8 = 65;

// Certificates are cross-checked by a bounded search when there are at most
// this many maps to try.
const SMALL_INSTANCE: usize = 1_000;

#[derive(Debug, Parser)]
#[command(name = "ahomotopy", version, about = "A-homotopy computations on finite simple graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Checks that a map file is a graph map between two graphs.
    CheckMap { source: PathBuf, target: PathBuf, map: PathBuf },
    /// Decides whether two graph maps are A-homotopic.
    Homotopic {
        source: PathBuf,
        target: PathBuf,
        map_a: PathBuf,
        map_b: PathBuf,
        /// Maximum number of maps the search may visit.
        #[arg(long, default_value_t = Limits::DEFAULT_MAX_MAPS)]
        cap: usize,
        /// Write the homotopy trace here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the winding number of a cycle in a cycle graph.
    Winding { graph: PathBuf, path: PathBuf },
    /// Searches for a homotopy rel endpoints between two paths.
    PathHomotopic {
        graph: PathBuf,
        path_a: PathBuf,
        path_b: PathBuf,
        /// Row width of the grid; defaults to the longer word.
        #[arg(long)]
        window: Option<usize>,
        /// Widest window at which a failed search counts as a negative answer.
        #[arg(long, default_value_t = Limits::default().max_window)]
        max_window: usize,
        /// Write the homotopy grid here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decides whether a cycle in a cycle graph is nullhomotopic.
    Nullhomotopy {
        graph: PathBuf,
        path: PathBuf,
        /// Let the basepoint move along the homotopy.
        #[arg(long)]
        free: bool,
        /// Write the homotopy grid here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certifies that a cone has no cone map into its obstruction cone.
    VerifyCounterexample {
        cone: PathBuf,
        #[arg(long, default_value_t = Limits::DEFAULT_MAX_MAPS)]
        cap: usize,
        /// Row bound of the cross-check search.
        #[arg(long, default_value_t = 8)]
        max_rows: usize,
        /// Column bound of the cross-check search.
        #[arg(long, default_value_t = 12)]
        max_cols: usize,
        /// Write the obstruction report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counts graph maps, optionally listing them in canonical order.
    EnumHoms {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        list: bool,
        /// Maximum number of maps to list.
        #[arg(long, default_value_t = Limits::DEFAULT_MAX_MAPS)]
        cap: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) => PARSE,
            Error::ResourceLimit(_) | Error::InternalLimit(_) => LIMIT,
            _ => VALIDATION,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn load<T, E: std::fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    load(path, parse_graph)
}

fn load_map(path: &Path, source: &Graph, target: &Graph) -> Result<GraphMap, Failure> {
    let file = load(path, parse_map)?;
    file.to_map(source, target)
        .map_err(|e| Failure::new(VALIDATION, format!("{}: {e}", path.display())))
}

fn load_path(path: &Path, graph: &Graph) -> Result<StablePath, Failure> {
    let word = load(path, parse_path)?;
    StablePath::new(graph, &word).map_err(|e| Failure::new(VALIDATION, format!("{}: {e}", path.display())))
}

fn save(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, text).map_err(|e| Failure::new(VALIDATION, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    let mut say = |line: String| {
        let _ = writeln!(out, "{line}");
    };
    match command {
        Command::CheckMap { source, target, map } => {
            let (src, tgt) = (load_graph(&source)?, load_graph(&target)?);
            let file = load(&map, parse_map)?;
            if file.source_size != src.num_vertices() || file.target_size != tgt.num_vertices() {
                return Err(file.to_map(&src, &tgt).unwrap_err().into());
            }
            if is_graph_map(&src, &tgt, &file.assignment)? {
                say("valid graph map".into());
                return Ok(OK);
            }
            let (u, v) = src
                .edges()
                .iter()
                .copied()
                .find(|&(u, v)| !tgt.near(file.assignment[u], file.assignment[v]))
                .expect("some edge is broken");
            say(format!(
                "not a graph map: edge {u} {v} goes to {} {}, which are neither equal nor adjacent",
                file.assignment[u], file.assignment[v]
            ));
            Ok(NEGATIVE)
        }
        Command::Homotopic { source, target, map_a, map_b, cap, out: trace_out } => {
            let (src, tgt) = (load_graph(&source)?, load_graph(&target)?);
            let f = load_map(&map_a, &src, &tgt)?;
            let g = load_map(&map_b, &src, &tgt)?;
            match are_homotopic(&f, &g, &Limits::default().with_max_maps(cap))? {
                MapHomotopy::Yes(trace) => {
                    save(&trace_out, &write_trace(&trace))?;
                    say(format!("homotopic: trace with {} steps", trace.len()));
                    Ok(OK)
                }
                MapHomotopy::No => {
                    say("not homotopic".into());
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Winding { graph, path } => {
            let g = load_graph(&graph)?;
            let p = load_path(&path, &g)?;
            say(winding_number(&p)?.turns().to_string());
            Ok(OK)
        }
        Command::PathHomotopic { graph, path_a, path_b, window, max_window, out: grid_out } => {
            let g = load_graph(&graph)?;
            let p = load_path(&path_a, &g)?;
            let q = load_path(&path_b, &g)?;
            let window = window.unwrap_or(p.word().len().max(q.word().len()));
            let limits = Limits::default().with_max_window(max_window);
            match path_homotopic_rel_endpoints(&p, &q, window, &limits)? {
                PathHomotopy::Yes(grid) => {
                    save(&grid_out, &write_grid(&grid))?;
                    say(format!("homotopic: grid with {} rows of {} cells", grid.height(), grid.width()));
                    Ok(OK)
                }
                PathHomotopy::No => {
                    say(format!("not homotopic within rows of {window} cells"));
                    Ok(NEGATIVE)
                }
                PathHomotopy::Undecided => {
                    say(format!("undecided: no homotopy within rows of {window} cells"));
                    Ok(LIMIT)
                }
            }
        }
        Command::Nullhomotopy { graph, path, free, out: grid_out } => {
            let g = load_graph(&graph)?;
            let p = load_path(&path, &g)?;
            let basing = if free { Basing::Free } else { Basing::Based };
            match nullhomotopic_in_cycle(&p, basing, &Limits::default())? {
                Nullhomotopy::Yes(grid) => {
                    save(&grid_out, &write_grid(&grid))?;
                    say(format!("nullhomotopic: grid with {} rows of {} cells", grid.height(), grid.width()));
                    Ok(OK)
                }
                Nullhomotopy::No(w) => {
                    say(format!("not nullhomotopic: winding {}", w.turns()));
                    Ok(NEGATIVE)
                }
            }
        }
        Command::VerifyCounterexample { cone, cap, max_rows, max_cols, out: report_out } => {
            let file = load(&cone, parse_cone)?;
            let source = file.to_cone()?;
            let limits = Limits::default().with_max_maps(cap);
            let report = certify_no_cone_map(&source, &limits)?;
            let text = write_report(&report);
            save(&report_out, &text)?;
            let _ = write!(out, "{text}");
            let mut say = |line: String| {
                let _ = writeln!(out, "{line}");
            };
            let target = obstruction_cone(&source);
            if report.entries.len() <= SMALL_INSTANCE {
                let found = search_cone_maps(&source, &target, max_rows, max_cols, &limits)?;
                if let Some(cm) = found.first() {
                    let homs = enumerate_homomorphisms(source.apex(), target.apex(), &limits)?;
                    let index = homs.iter().position(|f| f == cm.map()).expect("found maps are enumerated");
                    say(format!(
                        "cone map found for f {index} with a {}x{} grid",
                        cm.homotopy().height(),
                        cm.homotopy().width()
                    ));
                    return Ok(CONE_MAP_FOUND);
                }
                say(format!("search: no cone map with at most {max_rows} rows and {max_cols} columns"));
            } else {
                say(format!("search: skipped, {} maps", report.entries.len()));
            }
            if report.is_certified() {
                say(format!(
                    "certified: no cone map into the identity cycle on C_{}",
                    report.cycle_length
                ));
                Ok(OK)
            } else {
                say("undecided: some map carries the target winding".into());
                Ok(LIMIT)
            }
        }
        Command::EnumHoms { source, target, list, cap } => {
            let (src, tgt) = (load_graph(&source)?, load_graph(&target)?);
            let count = count_homomorphisms(&src, &tgt, &Limits::default())?;
            say(count.to_string());
            if list {
                for f in enumerate_homomorphisms(&src, &tgt, &Limits::default().with_max_maps(cap))? {
                    let line: Vec<String> = f.assignment().iter().map(usize::to_string).collect();
                    say(line.join(" "));
                }
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => OK,
                _ => PARSE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
