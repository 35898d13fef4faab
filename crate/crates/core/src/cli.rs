//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 other failures, 2 malformed input, 3 no Eulerian trail,
//! 4 disagreement with the brute-force oracle.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::diff::{format_solutions, replay_diff, CountSink, DiffSink, FullSink, TeeSink};
use crate::euler::{check_eulerian, EulerError};
use crate::graph_file::parse_graph;
use crate::ids::VertexId;
use crate::oracle::{brute_edge, brute_vertex};
use crate::pushout::minimal_beta;
use crate::search::{EnumOptions, EnumSink, ExtensionCases, Mode, RunReport, Session};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_EULERIAN: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Edge,
    Vertex,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Edge => Mode::Edge,
            ModeArg::Vertex => Mode::Vertex,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Diff,
    Full,
    Count,
}

/// Enumerate the Eulerian trails of an undirected multigraph.
#[derive(Parser, Debug)]
#[command(name = "eulertrail", version)]
pub struct Args {
    /// Graph file: header "n m", then m lines "u v".
    #[arg(long)]
    pub input: PathBuf,
    /// Distinguish trails by edge sequence or by vertex sequence.
    #[arg(long, value_enum, default_value = "edge")]
    pub mode: ModeArg,
    /// Diff event stream, one expanded solution per line, or the count.
    #[arg(long, value_enum, default_value = "full")]
    pub output: OutputArg,
    /// Start vertex.
    #[arg(long)]
    pub source: Option<u32>,
    /// End vertex.
    #[arg(long)]
    pub target: Option<u32>,
    /// Compare the solutions with a brute-force enumeration (small graphs only).
    #[arg(long)]
    pub oracle_check: bool,
    /// Write run statistics as JSON to this path.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Stop after this many solutions.
    #[arg(long)]
    pub max_solutions: Option<u64>,
    /// Rebuild solutions from a diff stream written for the same input and
    /// print them as full output instead of enumerating.
    #[arg(long, conflicts_with_all = ["output", "oracle_check", "stats", "max_solutions"])]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct StatsReport {
    pub mode: &'static str,
    pub source: u32,
    pub target: u32,
    pub nodes: u64,
    pub solutions: u64,
    pub nodes_per_solution: f64,
    pub aborted: bool,
    pub total_work: u64,
    pub work_per_solution: f64,
    pub preprocess_work: u64,
    pub preprocess_records: usize,
    pub max_cost_ratio: f64,
    pub preprocess_cost_ratio: f64,
    pub max_frame_len: usize,
    pub frame_limit: usize,
    pub oversized_frames: u64,
    pub min_beta_alpha2: f64,
    pub thin_nodes: u64,
    pub forced_steps: u64,
    pub rule_counts: RuleCounts,
    pub multibirth_branchings: u64,
    pub extension_cases: CaseCounts,
    pub diff_events: u64,
    pub peak_live_edges: usize,
    pub wall_time_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct RuleCounts {
    pub r1: u64,
    pub r2: u64,
    pub r3: u64,
    pub r4: u64,
    pub mb: u64,
}

#[derive(Debug, Serialize)]
pub struct CaseCounts {
    pub a: u64,
    pub a1: u64,
    pub a2: u64,
    pub b1: u64,
    pub b2: u64,
    pub b3_blocked: u64,
    pub b3_violations: u64,
    pub other: u64,
}

impl From<&ExtensionCases> for CaseCounts {
    fn from(c: &ExtensionCases) -> Self {
        CaseCounts {
            a: c.a_plain,
            a1: c.a1,
            a2: c.a2,
            b1: c.b1,
            b2: c.b2,
            b3_blocked: c.b3_blocked,
            b3_violations: c.b3_violations,
            other: c.other,
        }
    }
}

impl StatsReport {
    pub fn new(mode: Mode, s: VertexId, t: VertexId, r: &RunReport, wall_ms: f64) -> Self {
        let per = |x: u64| {
            if r.solutions == 0 {
                0.0
            } else {
                x as f64 / r.solutions as f64
            }
        };
        StatsReport {
            mode: match mode {
                Mode::Edge => "edge",
                Mode::Vertex => "vertex",
            },
            source: s.0,
            target: t.0,
            nodes: r.nodes,
            solutions: r.solutions,
            nodes_per_solution: per(r.nodes),
            aborted: r.aborted,
            total_work: r.total_work,
            work_per_solution: per(r.total_work),
            preprocess_work: r.preprocess_work,
            preprocess_records: r.preprocess_records,
            max_cost_ratio: r.max_cost_ratio,
            preprocess_cost_ratio: r.preprocess_cost_ratio,
            max_frame_len: r.max_frame_len,
            frame_limit: r.max_frame_record_limit,
            oversized_frames: r.oversized_frames,
            min_beta_alpha2: minimal_beta(&r.tree, 2.0),
            thin_nodes: r.thin_nodes,
            forced_steps: r.forced_steps,
            rule_counts: RuleCounts {
                r1: r.rule_counts[0],
                r2: r.rule_counts[1],
                r3: r.rule_counts[2],
                r4: r.rule_counts[3],
                mb: r.rule_counts[4],
            },
            multibirth_branchings: r.multibirth_branchings,
            extension_cases: (&r.cases).into(),
            diff_events: r.diff_events,
            peak_live_edges: r.peak_live_edges,
            wall_time_ms: wall_ms,
        }
    }
}

struct Failure(i32, String);

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure(code, msg.into())
}

/// Parses `argv` (including the program name) and runs the tool.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.exit_code() {
                0 => EXIT_OK,
                _ => EXIT_PARSE,
            };
        }
    };
    match execute(&args, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "eulertrail: {msg}");
            code
        }
    }
}

fn execute(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", args.input.display())))?;
    let file = parse_graph(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", args.input.display())))?;
    let graph = file.graph();
    let vertex = |x: Option<u32>| -> Result<Option<VertexId>, Failure> {
        match x {
            Some(v) if v as usize >= file.n => Err(fail(
                EXIT_NOT_EULERIAN,
                format!("vertex {v} is out of range for n = {}", file.n),
            )),
            other => Ok(other.map(VertexId)),
        }
    };
    let (s, t) = check_eulerian(&graph, vertex(args.source)?, vertex(args.target)?).map_err(|e| {
        let msg = match e {
            EulerError::EndpointMismatch { .. } => format!("no Eulerian trail with the requested endpoints: {e}"),
            _ => format!("no Eulerian trail: {e}"),
        };
        fail(EXIT_NOT_EULERIAN, msg)
    })?;
    let mode: Mode = args.mode.into();

    if let Some(path) = &args.replay {
        let stream =
            std::fs::read_to_string(path).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
        let solutions = replay_diff(&stream, &graph, mode, s, t)
            .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        return stdout
            .write_all(format_solutions(&solutions).as_bytes())
            .map_err(|e| fail(EXIT_FAILURE, e.to_string()));
    }

    let opts = EnumOptions {
        max_solutions: args.max_solutions,
        record_tree: args.stats.is_some(),
    };
    let started = Instant::now();
    let mut out = BufWriter::new(stdout);
    let mut count = CountSink::default();
    let mut diff;
    let mut full;
    let inner: &mut dyn EnumSink = match args.output {
        OutputArg::Diff => {
            diff = DiffSink::new(&mut out);
            &mut diff
        }
        OutputArg::Full => {
            full = FullSink::new(mode, &mut out);
            &mut full
        }
        OutputArg::Count => &mut count,
    };
    let mut tee = TeeSink::new(inner, mode, args.oracle_check);
    let report = Session::new(graph.clone(), mode, s, t)
        .run(&mut tee, &opts)
        .map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    let collected = tee.collected.take();
    drop(tee);
    if args.output == OutputArg::Count {
        writeln!(out, "{}", count.count).map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    }
    out.flush().map_err(|e| fail(EXIT_FAILURE, e.to_string()))?;
    drop(out);
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    if report.oversized_frames > 0 {
        let _ = writeln!(
            stderr,
            "eulertrail: warning: {} extension frames exceeded {} records (longest {})",
            report.oversized_frames, report.max_frame_record_limit, report.max_frame_len
        );
    }
    if let Some(path) = &args.stats {
        let stats = StatsReport::new(mode, s, t, &report, wall_ms);
        let json = serde_json::to_string_pretty(&stats).expect("stats serialize");
        std::fs::write(path, json + "\n").map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    }
    if let Some(got) = collected {
        oracle_check(&graph, mode, s, t, got, report.aborted)?;
    }
    Ok(())
}

fn oracle_check(
    graph: &crate::graph::Multigraph,
    mode: Mode,
    s: VertexId,
    t: VertexId,
    got: Vec<Vec<u32>>,
    partial: bool,
) -> Result<(), Failure> {
    let want = match mode {
        Mode::Edge => brute_edge(graph, s, t),
        Mode::Vertex => brute_vertex(graph, s, t),
    }
    .map_err(|e| fail(EXIT_FAILURE, format!("oracle unavailable: {e}")))?;
    let emitted = got.len();
    let distinct: BTreeSet<Vec<u32>> = got.into_iter().collect();
    if distinct.len() != emitted {
        return Err(fail(
            EXIT_ORACLE,
            format!("oracle check failed: {} duplicate solutions", emitted - distinct.len()),
        ));
    }
    let expected: BTreeSet<Vec<u32>> = want.into_iter().collect();
    let stray = distinct.difference(&expected).count();
    let missing = expected.difference(&distinct).count();
    if stray > 0 || (!partial && missing > 0) {
        return Err(fail(
            EXIT_ORACLE,
            format!("oracle check failed: {stray} unexpected, {missing} missing solutions"),
        ));
    }
    Ok(())
}

/// Stack size for the enumeration thread; recursion depth grows with the
/// trail length.
pub const WORKER_STACK_BYTES: usize = 1 << 30;

/// Runs [`run`] on a thread with a large stack, writing to the process's
/// standard streams.
pub fn main_with_large_stack() -> i32 {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let worker = std::thread::Builder::new()
        .stack_size(WORKER_STACK_BYTES)
        .spawn(move || {
            let stdout = io::stdout();
            let stderr = io::stderr();
            let mut out = stdout.lock();
            let mut err = stderr.lock();
            run(argv, &mut out, &mut err)
        });
    match worker {
        Ok(handle) => handle.join().unwrap_or(EXIT_FAILURE),
        Err(e) => {
            eprintln!("eulertrail: cannot start worker thread: {e}");
            EXIT_FAILURE
        }
    }
}
