//! Text output: the diff event stream, expanded solutions, counting, and the
//! replayer that rebuilds solutions from a diff stream.
//!
//! Diff lines are `+ <eid> [<ops>]`, `- <eid> [<ops>]` and `#`. A loop
//! traversed against its stored orientation is written `<eid>r`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::Multigraph;
use crate::ids::{EdgeId, VertexId};
use crate::record::{Frame, RuleRecord, Step};
use crate::search::{EnumSink, Mode, Session, SolutionView};

impl fmt::Display for RuleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RuleRecord::R1 { v, e } => write!(f, "R1(v={v},e={e})"),
            RuleRecord::R2 { v, e1, e2, new } => write!(f, "R2(v={v},e1={e1},e2={e2},new={new})"),
            RuleRecord::R3 { v, vp, moved } => write!(f, "R3(v={v},vp={vp},moved={moved})"),
            RuleRecord::R4 { v, u, loops, odd } => write!(f, "R4(v={v},u={u},loops={loops},odd={})", odd as u8),
            RuleRecord::Mb { v, variant } => write!(f, "MB(v={v},var={variant})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed rule record {0:?}")]
pub struct RecordParseError(pub String);

impl FromStr for RuleRecord {
    type Err = RecordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RecordParseError(s.to_string());
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let keys: &[&str] = match name {
            "R1" => &["v", "e"],
            "R2" => &["v", "e1", "e2", "new"],
            "R3" => &["v", "vp", "moved"],
            "R4" => &["v", "u", "loops", "odd"],
            "MB" => &["v", "var"],
            _ => return Err(bad()),
        };
        let fields: Vec<&str> = body.split(',').collect();
        if fields.len() != keys.len() {
            return Err(bad());
        }
        let mut vals = [0u32; 4];
        for (i, (field, key)) in fields.iter().zip(keys).enumerate() {
            let (k, v) = field.split_once('=').ok_or_else(bad)?;
            if k != *key || v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            vals[i] = v.parse().map_err(|_| bad())?;
        }
        let [a, b, c, d] = vals;
        Ok(match name {
            "R1" => RuleRecord::R1 {
                v: VertexId(a),
                e: EdgeId(b),
            },
            "R2" => RuleRecord::R2 {
                v: VertexId(a),
                e1: EdgeId(b),
                e2: EdgeId(c),
                new: EdgeId(d),
            },
            "R3" => RuleRecord::R3 {
                v: VertexId(a),
                vp: VertexId(b),
                moved: c,
            },
            "R4" => {
                if d > 1 {
                    return Err(bad());
                }
                RuleRecord::R4 {
                    v: VertexId(a),
                    u: VertexId(b),
                    loops: c,
                    odd: d == 1,
                }
            }
            _ => {
                if !(1..=2).contains(&b) {
                    return Err(bad());
                }
                RuleRecord::Mb {
                    v: VertexId(a),
                    variant: b as u8,
                }
            }
        })
    }
}

fn write_event(out: &mut dyn Write, sign: char, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()> {
    let suffix = if is_loop && step.reversed { "r" } else { "" };
    write!(out, "{sign} {}{suffix} [", step.edge)?;
    for (i, rec) in frame.iter().enumerate() {
        if i > 0 {
            out.write_all(b";")?;
        }
        write!(out, "{rec}")?;
    }
    out.write_all(b"]\n")
}

/// Writes the diff event stream.
pub struct DiffSink<W: Write> {
    out: W,
}

impl<W: Write> DiffSink<W> {
    pub fn new(out: W) -> Self {
        DiffSink { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> EnumSink for DiffSink<W> {
    fn push(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()> {
        write_event(&mut self.out, '+', step, is_loop, frame)
    }
    fn pop(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()> {
        write_event(&mut self.out, '-', step, is_loop, frame)
    }
    fn solution(&mut self, _: &SolutionView<'_>) -> io::Result<()> {
        self.out.write_all(b"#\n")
    }
}

/// Space-joined original ids of one solution.
pub fn solution_line(mode: Mode, solution: &SolutionView<'_>) -> String {
    let ids: Vec<String> = match mode {
        Mode::Edge => solution.edges().iter().map(|e| e.to_string()).collect(),
        Mode::Vertex => solution.vertices().iter().map(|v| v.to_string()).collect(),
    };
    ids.join(" ")
}

/// Writes every solution expanded to original ids, one per line. Costs O(m)
/// per solution.
pub struct FullSink<W: Write> {
    mode: Mode,
    out: W,
}

impl<W: Write> FullSink<W> {
    pub fn new(mode: Mode, out: W) -> Self {
        FullSink { mode, out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> EnumSink for FullSink<W> {
    fn push(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn pop(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn solution(&mut self, solution: &SolutionView<'_>) -> io::Result<()> {
        writeln!(self.out, "{}", solution_line(self.mode, solution))
    }
}

/// Counts solutions without an upper limit.
#[derive(Default, Debug)]
pub struct CountSink {
    pub count: BigUint,
}

impl EnumSink for CountSink {
    fn push(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn pop(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn solution(&mut self, _: &SolutionView<'_>) -> io::Result<()> {
        self.count += 1u32;
        Ok(())
    }
}

/// Forwards to an inner sink and optionally keeps the expanded solutions.
pub struct TeeSink<'a> {
    inner: &'a mut dyn EnumSink,
    mode: Mode,
    pub collected: Option<Vec<Vec<u32>>>,
}

impl<'a> TeeSink<'a> {
    pub fn new(inner: &'a mut dyn EnumSink, mode: Mode, collect: bool) -> Self {
        TeeSink {
            inner,
            mode,
            collected: collect.then(Vec::new),
        }
    }
}

impl EnumSink for TeeSink<'_> {
    fn push(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()> {
        self.inner.push(step, is_loop, frame)
    }
    fn pop(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()> {
        self.inner.pop(step, is_loop, frame)
    }
    fn solution(&mut self, solution: &SolutionView<'_>) -> io::Result<()> {
        if let Some(c) = self.collected.as_mut() {
            c.push(match self.mode {
                Mode::Edge => solution.edges().into_iter().map(|e| e.0).collect(),
                Mode::Vertex => solution.vertices().into_iter().map(|v| v.0).collect(),
            });
        }
        self.inner.solution(solution)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedEvent {
    Push(Step, Frame),
    Pop(Step, Frame),
    Solution,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("line {line}: malformed event: {message}")]
    MalformedEvent { line: usize, message: String },
    #[error("could not rebuild the starting state: {0}")]
    Setup(String),
}

fn malformed(line: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::MalformedEvent {
        line,
        message: message.into(),
    }
}

pub fn parse_event(line_no: usize, line: &str) -> Result<ParsedEvent, ReplayError> {
    if line == "#" {
        return Ok(ParsedEvent::Solution);
    }
    let (sign, rest) = line
        .split_once(' ')
        .ok_or_else(|| malformed(line_no, format!("unrecognized line {line:?}")))?;
    let (edge, ops) = rest
        .split_once(' ')
        .ok_or_else(|| malformed(line_no, "missing record list"))?;
    let (digits, reversed) = match edge.strip_suffix('r') {
        Some(d) => (d, true),
        None => (edge, false),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed(line_no, format!("bad edge id {edge:?}")));
    }
    let id: u32 = digits
        .parse()
        .map_err(|_| malformed(line_no, format!("bad edge id {edge:?}")))?;
    let body = ops
        .strip_prefix('[')
        .and_then(|o| o.strip_suffix(']'))
        .ok_or_else(|| malformed(line_no, "record list must be bracketed"))?;
    let frame: Frame = if body.is_empty() {
        Vec::new()
    } else {
        body.split(';')
            .map(|r| r.parse::<RuleRecord>().map_err(|e| malformed(line_no, e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let step = Step {
        edge: EdgeId(id),
        reversed,
    };
    match sign {
        "+" => Ok(ParsedEvent::Push(step, frame)),
        "-" => Ok(ParsedEvent::Pop(step, frame)),
        _ => Err(malformed(line_no, format!("unknown event sign {sign:?}"))),
    }
}

/// Rebuilds the solutions of a diff stream produced for the same graph,
/// mode and endpoints, in stream order.
pub fn replay_diff(
    stream: &str,
    graph: &Multigraph,
    mode: Mode,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<Vec<u32>>, ReplayError> {
    let mut session = Session::new(graph.clone(), mode, s, t);
    session.preprocess().map_err(|e| ReplayError::Setup(e.to_string()))?;
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut last_line = 0;
    for (i, line) in stream.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        match parse_event(line_no, line)? {
            ParsedEvent::Push(step, frame) => {
                let mark = session.mark();
                let is_loop = session.graph().try_edge(step.edge).is_some_and(|slot| slot.is_loop());
                if step.reversed && !is_loop {
                    return Err(malformed(line_no, "orientation marker on a non-loop edge"));
                }
                session.take_step(step).map_err(|e| malformed(line_no, e.to_string()))?;
                for rec in &frame {
                    session
                        .apply_record(rec)
                        .map_err(|e| malformed(line_no, e.to_string()))?;
                }
                session.touched.clear();
                stack.push((mark, step, frame));
            }
            ParsedEvent::Pop(step, frame) => {
                let (mark, pushed, pushed_frame) = stack
                    .pop()
                    .ok_or_else(|| malformed(line_no, "pop without a matching push"))?;
                if pushed != step || pushed_frame != frame {
                    return Err(malformed(line_no, "pop does not match the innermost push"));
                }
                session.rollback(mark);
            }
            ParsedEvent::Solution => {
                if session.graph().live_edge_count() != 0 {
                    return Err(malformed(line_no, "solution marker before all edges are used"));
                }
                let view = session.solution_view();
                out.push(match mode {
                    Mode::Edge => view.edges().into_iter().map(|e| e.0).collect(),
                    Mode::Vertex => view.vertices().into_iter().map(|v| v.0).collect(),
                });
            }
        }
    }
    if !stack.is_empty() {
        return Err(malformed(last_line + 1, format!("{} pushes never popped", stack.len())));
    }
    Ok(out)
}

/// Lines of the full output for a list of solutions.
pub fn format_solutions(solutions: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for sol in solutions {
        let ids: Vec<String> = sol.iter().map(|x| x.to_string()).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}
