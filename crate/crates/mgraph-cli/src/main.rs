//! Command-line front end for the multiplication-graph library.
//!
//! Subcommands: `analyze` (predictions + oracle report + discrepancies for
//! one graph), `sweep` (closed form vs. brute force over ranges of groups),
//! `export-dot`, `realize` (search for a group realizing a tree), and
//! `diameter-build` (construct and verify a graph of prescribed diameter).
//!
//! Exit codes: 0 success, 1 negative result, 2 input error, 3 discrepancy
//! found, 4 resource limit exceeded.

use clap::{Parser, Subcommand};
use mgraph::{
    build_mgraph_with_limit, configure_worker_threads_from_env, predict_degree_census,
    predict_diameter_cyclic, predict_diameter_product, realize_tree_with_limit, registry,
    run_case, run_cyclic_sweep, run_product_sweep, Discrepancy, Distance, Error, GraphReport,
    GroupSpec, SweepResult, TreeSpec, DEFAULT_VERTEX_LIMIT, REALIZE_DEFAULT_VERTEX_LIMIT,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISCREPANCY: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mgraph",
    about = "Build multiplication graphs of finite abelian groups and verify their closed forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one graph: closed-form predictions, oracle report, discrepancies
    Analyze {
        /// Group literal, e.g. "Z72" or "Z4 x Z8 x Z72"
        #[arg(long)]
        group: String,
        /// Multiplier (at least 2)
        #[arg(long)]
        m: u64,
        /// Abort when the group order exceeds this vertex count
        #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
        limit_vertices: u64,
        /// Write the JSON document to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every closed form against brute force over ranges of groups
    Sweep {
        /// Sweep cyclic groups Z_n for 2 <= n <= --max-n
        #[arg(long)]
        cyclic: bool,
        /// Sweep non-cyclic invariant-chain groups of order <= --max-order
        #[arg(long)]
        products: bool,
        /// Largest cyclic order (with --cyclic)
        #[arg(long)]
        max_n: Option<u64>,
        /// Largest multiplier
        #[arg(long)]
        max_m: Option<u64>,
        /// Largest group order (with --products)
        #[arg(long)]
        max_order: Option<u64>,
        /// Comma-separated check names (default: all)
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Abort when any group order exceeds this vertex count
        #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
        limit_vertices: u64,
        /// Write the CSV rows to a file (the JSON summary always goes to
        /// standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the DOT rendering of one graph
    ExportDot {
        /// Group literal, e.g. "Z72" or "Z4 x Z8 x Z72"
        #[arg(long)]
        group: String,
        /// Multiplier (at least 2)
        #[arg(long)]
        m: u64,
        /// Abort when the group order exceeds this vertex count
        #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
        limit_vertices: u64,
        /// Write the DOT text to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a group whose graph realizes the tree in FILE
    Realize {
        /// Tree file: first line the vertex count, then one "u v" edge per
        /// line; blank lines and #-comments ignored
        file: PathBuf,
        /// Largest tree accepted by the search
        #[arg(long, default_value_t = REALIZE_DEFAULT_VERTEX_LIMIT)]
        limit_vertices: usize,
        /// Write the JSON result to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a cyclic graph of diameter D and verify it by BFS
    DiameterBuild {
        /// The target diameter (at least 1)
        d: u64,
        /// Write the JSON result to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Writes a command's primary output to `--out` or standard output.
fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(err))
}

fn fail_io(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

#[derive(Serialize)]
struct DiameterPredictionDoc {
    value: u64,
    case_label: String,
}

#[derive(Serialize)]
struct PredictionsDoc {
    census: BTreeMap<u64, u64>,
    diameter: DiameterPredictionDoc,
    tree: bool,
}

#[derive(Serialize)]
struct AnalysisDocument {
    group: String,
    m: u64,
    k: u64,
    connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    predictions: Option<PredictionsDoc>,
    oracle: GraphReport,
    discrepancies: Vec<Discrepancy>,
}

fn cmd_analyze(group: &str, m: u64, limit: u64, out: &Option<PathBuf>) -> ExitCode {
    let spec: GroupSpec = match group.parse() {
        Ok(spec) => spec,
        Err(e) => return fail(&e),
    };
    let mg = match build_mgraph_with_limit(&spec, m, limit) {
        Ok(mg) => mg,
        Err(e) => return fail(&e),
    };
    let oracle = mg.graph().analyze();
    let predictions = if oracle.connected {
        let census = match predict_degree_census(&spec, m) {
            Ok(c) => c.to_map(),
            Err(e) => return fail(&e),
        };
        let diameter = if spec.factor_count() == 1 {
            predict_diameter_cyclic(spec.order, m)
        } else {
            predict_diameter_product(&spec, m)
        };
        let diameter = match diameter {
            Ok(p) => DiameterPredictionDoc {
                value: p.value,
                case_label: p.case_label.label().to_string(),
            },
            Err(e) => return fail(&e),
        };
        Some(PredictionsDoc {
            census,
            diameter,
            tree: true,
        })
    } else {
        None
    };
    let rows = match run_case(&spec, m, &registry(), limit) {
        Ok(rows) => rows,
        Err(e) => return fail(&e),
    };
    let discrepancies: Vec<Discrepancy> = rows
        .iter()
        .filter(|r| !r.matched)
        .map(Discrepancy::from)
        .collect();
    let has_discrepancies = !discrepancies.is_empty();
    let doc = AnalysisDocument {
        group: spec.to_string(),
        m,
        k: mg.reduced_multiplier(),
        connected: oracle.connected,
        predictions,
        oracle,
        discrepancies,
    };
    let json = serde_json::to_string_pretty(&doc).expect("document serializes");
    if let Err(msg) = emit(out, &format!("{json}\n")) {
        return fail_io(&msg);
    }
    if has_discrepancies {
        ExitCode::from(EXIT_DISCREPANCY)
    } else {
        ExitCode::from(EXIT_OK)
    }
}

#[derive(Serialize)]
struct SweepSummary {
    graphs: u64,
    rows: u64,
    discrepancy_count: u64,
    discrepancies: Vec<Discrepancy>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    cyclic: bool,
    products: bool,
    max_n: Option<u64>,
    max_m: Option<u64>,
    max_order: Option<u64>,
    checks: Option<Vec<String>>,
    limit: u64,
    out: &Option<PathBuf>,
) -> ExitCode {
    if cyclic == products {
        return fail_io("pass exactly one of --cyclic or --products");
    }
    let max_m = match max_m {
        Some(v) => v,
        None => return fail_io("--max-m is required"),
    };
    let checks = match checks {
        Some(names) => match mgraph::checks_by_name(&names) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        None => registry(),
    };
    let result: Result<SweepResult, Error> = if cyclic {
        match max_n {
            Some(max_n) if max_n <= limit => run_cyclic_sweep(max_n, max_m, &checks),
            Some(max_n) => Err(Error::ResourceLimit(format!(
                "--max-n {max_n} exceeds the vertex limit {limit}"
            ))),
            None => return fail_io("--cyclic requires --max-n"),
        }
    } else {
        match max_order {
            Some(max_order) if max_order <= limit => {
                run_product_sweep(max_order, max_m, &checks)
            }
            Some(max_order) => Err(Error::ResourceLimit(format!(
                "--max-order {max_order} exceeds the vertex limit {limit}"
            ))),
            None => return fail_io("--products requires --max-order"),
        }
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if let Some(path) = out {
        if let Err(msg) = emit(&Some(path.clone()), &result.to_csv()) {
            return fail_io(&msg);
        }
    }
    let summary = SweepSummary {
        graphs: result.graphs_checked,
        rows: result.rows.len() as u64,
        discrepancy_count: result.discrepancies.len() as u64,
        discrepancies: result.discrepancies,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    println!("{json}");
    if summary.discrepancy_count > 0 {
        ExitCode::from(EXIT_DISCREPANCY)
    } else {
        ExitCode::from(EXIT_OK)
    }
}

fn cmd_export_dot(group: &str, m: u64, limit: u64, out: &Option<PathBuf>) -> ExitCode {
    let spec: GroupSpec = match group.parse() {
        Ok(spec) => spec,
        Err(e) => return fail(&e),
    };
    let mg = match build_mgraph_with_limit(&spec, m, limit) {
        Ok(mg) => mg,
        Err(e) => return fail(&e),
    };
    if let Err(msg) = emit(out, &mg.export_dot()) {
        return fail_io(&msg);
    }
    ExitCode::from(EXIT_OK)
}

fn cmd_realize(file: &PathBuf, limit: usize, out: &Option<PathBuf>) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return fail_io(&format!("cannot read {}: {e}", file.display())),
    };
    let tree = match TreeSpec::from_text(&text) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    match realize_tree_with_limit(&tree, limit) {
        Ok(Some(realization)) => {
            let json = serde_json::to_string_pretty(&realization).expect("realization serializes");
            if let Err(msg) = emit(out, &format!("{json}\n")) {
                return fail_io(&msg);
            }
            ExitCode::from(EXIT_OK)
        }
        Ok(None) => {
            if let Err(msg) = emit(out, "not realizable\n") {
                return fail_io(&msg);
            }
            ExitCode::from(EXIT_NEGATIVE)
        }
        Err(e) => fail(&e),
    }
}

#[derive(Serialize)]
struct DiameterBuildDoc {
    group: String,
    m: u64,
    verified_diameter: u64,
}

fn cmd_diameter_build(d: u64, out: &Option<PathBuf>) -> ExitCode {
    let (spec, k) = match mgraph::construct_for_diameter(d) {
        Ok(pair) => pair,
        Err(e) => return fail(&e),
    };
    let mg = match build_mgraph_with_limit(&spec, k, DEFAULT_VERTEX_LIMIT) {
        Ok(mg) => mg,
        Err(e) => return fail(&e),
    };
    let measured = match mg.graph().diameter_bruteforce() {
        Distance::Finite(v) => v,
        Distance::Infinite => {
            eprintln!("error: constructed graph is disconnected");
            return ExitCode::from(EXIT_DISCREPANCY);
        }
    };
    let doc = DiameterBuildDoc {
        group: spec.to_string(),
        m: k,
        verified_diameter: measured,
    };
    let json = serde_json::to_string_pretty(&doc).expect("document serializes");
    if let Err(msg) = emit(out, &format!("{json}\n")) {
        return fail_io(&msg);
    }
    if measured == d {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_DISCREPANCY)
    }
}

fn main() -> ExitCode {
    configure_worker_threads_from_env();
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            group,
            m,
            limit_vertices,
            out,
        } => cmd_analyze(&group, m, limit_vertices, &out),
        Command::Sweep {
            cyclic,
            products,
            max_n,
            max_m,
            max_order,
            checks,
            limit_vertices,
            out,
        } => cmd_sweep(
            cyclic,
            products,
            max_n,
            max_m,
            max_order,
            checks,
            limit_vertices,
            &out,
        ),
        Command::ExportDot {
            group,
            m,
            limit_vertices,
            out,
        } => cmd_export_dot(&group, m, limit_vertices, &out),
        Command::Realize {
            file,
            limit_vertices,
            out,
        } => cmd_realize(&file, limit_vertices, &out),
        Command::DiameterBuild { d, out } => cmd_diameter_build(d, &out),
    }
}
