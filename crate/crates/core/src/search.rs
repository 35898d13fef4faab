//! Reverse-search session shared by the edge-distinct and vertex-distinct
//! enumerators.
//!
//! A [`Session`] owns the contracted remainder graph, the partial trail `W`
//! (plus the forced suffix that terminal-side contractions peel off), and the
//! journals needed to undo each extension. The family tree is walked depth
//! first; every node is fully contracted and has either no children (a
//! solution) or at least two.

use std::io;

use thiserror::Error;

use crate::carried::TrailId;
use crate::connectivity::{bridges_from, reachable_avoiding, Scratch};
use crate::graph::{GraphError, JournalMark, Multigraph};
use crate::ids::{EdgeId, VertexId};
use crate::record::{Frame, RuleRecord, RuleTag, Step};
use crate::{edge_enum, vertex_enum};

/// Bound on rule records in one extension frame. Preprocessing is exempt; it
/// may contract the whole input. Longer frames are counted in
/// [`RunReport::oversized_frames`] rather than aborting the run.
pub const MAX_FRAME_RECORDS: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Edge,
    Vertex,
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("sink failed: {0}")]
    Sink(#[from] io::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("record does not fit the current graph: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("rule is not applicable at vertex {0}")]
pub struct NotApplicable(pub VertexId);

/// Receives the diff events of a run in depth-first order.
pub trait EnumSink {
    fn push(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()>;
    fn pop(&mut self, step: Step, is_loop: bool, frame: &[RuleRecord]) -> io::Result<()>;
    fn solution(&mut self, solution: &SolutionView<'_>) -> io::Result<()>;
}

/// Discards everything; useful when only the report matters.
#[derive(Default, Debug)]
pub struct NullSink;

impl EnumSink for NullSink {
    fn push(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn pop(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn solution(&mut self, _: &SolutionView<'_>) -> io::Result<()> {
        Ok(())
    }
}

/// Collects expanded solutions.
#[derive(Default, Debug)]
pub struct CollectSink {
    pub mode: Option<Mode>,
    pub solutions: Vec<Vec<u32>>,
}

impl CollectSink {
    pub fn new(mode: Mode) -> Self {
        CollectSink {
            mode: Some(mode),
            solutions: Vec::new(),
        }
    }
}

impl EnumSink for CollectSink {
    fn push(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn pop(&mut self, _: Step, _: bool, _: &[RuleRecord]) -> io::Result<()> {
        Ok(())
    }
    fn solution(&mut self, solution: &SolutionView<'_>) -> io::Result<()> {
        let seq = match self.mode.unwrap_or(Mode::Edge) {
            Mode::Edge => solution.edges().into_iter().map(|e| e.0).collect(),
            Mode::Vertex => solution.vertices().into_iter().map(|v| v.0).collect(),
        };
        self.solutions.push(seq);
        Ok(())
    }
}

/// Read access to the solution currently stored in `W`.
pub struct SolutionView<'a> {
    session: &'a Session,
}

impl SolutionView<'_> {
    /// Original `(edge, from, to)` steps of the solution.
    pub fn steps(&self) -> Vec<(EdgeId, VertexId, VertexId)> {
        self.session.expand_current()
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        self.steps().into_iter().map(|(e, _, _)| e).collect()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let steps = self.steps();
        let mut out = Vec::with_capacity(steps.len() + 1);
        if let Some(&(_, from, _)) = steps.first() {
            out.push(from);
        }
        out.extend(steps.iter().map(|&(_, _, to)| to));
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    /// Stop cleanly after this many solutions.
    pub max_solutions: Option<u64>,
    /// Keep one [`NodeStat`] per family-tree node for push-out verification.
    pub record_tree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct NodeStat {
    pub parent: Option<u32>,
    /// Instrumented steps spent generating the node and scanning its children.
    pub work: u64,
    pub children: u32,
    /// Live edges of the contracted remainder at the node.
    pub live_edges: u32,
    /// False for nodes whose subtree was cut short by a solution limit.
    pub complete: bool,
}

/// Counts of the extension cases distinguished when the landing vertex is
/// inspected before a step in vertex mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionCases {
    pub a_plain: u64,
    pub a1: u64,
    pub a2: u64,
    pub b1: u64,
    pub b2: u64,
    /// Landing vertex with a single neighbor at `μ = 1`, where the split rule
    /// is blocked (protected vertex, good pair or loops).
    pub b3_blocked: u64,
    /// Split rule applicable on a contracted remainder; must stay zero.
    pub b3_violations: u64,
    pub other: u64,
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub nodes: u64,
    pub solutions: u64,
    pub total_work: u64,
    pub preprocess_work: u64,
    pub preprocess_records: usize,
    pub max_frame_len: usize,
    /// max over non-root nodes of work / (live_edges + 1)
    pub max_cost_ratio: f64,
    /// Root work (preprocessing included) per input edge.
    pub preprocess_cost_ratio: f64,
    pub peak_live_edges: usize,
    pub forced_steps: u64,
    pub rule_counts: [u64; 5],
    pub multibirth_branchings: u64,
    /// Complete internal nodes with fewer than two children.
    pub thin_nodes: u64,
    pub max_frame_record_limit: usize,
    /// Extension frames longer than [`MAX_FRAME_RECORDS`].
    pub oversized_frames: u64,
    pub cases: ExtensionCases,
    pub diff_events: u64,
    pub aborted: bool,
    pub tree: Vec<NodeStat>,
}

impl RunReport {
    pub fn rule_count(&self, tag: RuleTag) -> u64 {
        self.rule_counts[tag.index()]
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

#[derive(Clone, Debug)]
enum StateChange {
    Pos(VertexId),
    Terminal(VertexId),
    TrailPush,
    SuffixPush,
}

#[derive(Copy, Clone, Debug)]
pub struct SessionMark {
    graph: JournalMark,
    state: usize,
}

/// A directed way to leave the current trail end.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CandidateGroup {
    pub step: Step,
    pub landing: VertexId,
    /// Directed signature for vertex mode; edge mode stores the edge's forward signature.
    pub signature: crate::carried::SigId,
    pub size: u32,
}

pub struct Session {
    pub(crate) graph: Multigraph,
    mode: Mode,
    start: VertexId,
    pos: VertexId,
    terminal: VertexId,
    trail: Vec<Step>,
    suffix: Vec<Step>,
    state_journal: Vec<StateChange>,
    scratch: Scratch,
    pub(crate) touched: Vec<VertexId>,
    frame_work: u64,
    report: RunReport,
    limit: Option<u64>,
    record_tree: bool,
    preprocess_frame: Frame,
}

impl Session {
    pub fn new(graph: Multigraph, mode: Mode, start: VertexId, terminal: VertexId) -> Self {
        Session {
            graph,
            mode,
            start,
            pos: start,
            terminal,
            trail: Vec::new(),
            suffix: Vec::new(),
            state_journal: Vec::new(),
            scratch: Scratch::new(),
            touched: Vec::new(),
            frame_work: 0,
            report: RunReport {
                max_frame_record_limit: MAX_FRAME_RECORDS,
                ..RunReport::default()
            },
            limit: None,
            record_tree: false,
            preprocess_frame: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn into_graph(self) -> Multigraph {
        self.graph
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    /// t(P): the current end of the partial trail.
    pub fn position(&self) -> VertexId {
        self.pos
    }

    /// The vertex every completion must end at.
    pub fn terminal(&self) -> VertexId {
        self.terminal
    }

    pub fn trail(&self) -> &[Step] {
        &self.trail
    }

    pub fn report(&self) -> &RunReport {
        &self.report
    }

    pub(crate) fn report_mut(&mut self) -> &mut RunReport {
        &mut self.report
    }

    pub fn is_protected(&self, v: VertexId) -> bool {
        v == self.pos || v == self.terminal
    }

    pub fn solution_view(&self) -> SolutionView<'_> {
        SolutionView { session: self }
    }

    // ---- undo ---------------------------------------------------------------

    pub fn mark(&self) -> SessionMark {
        SessionMark {
            graph: self.graph.checkpoint(),
            state: self.state_journal.len(),
        }
    }

    pub fn rollback(&mut self, mark: SessionMark) {
        while self.state_journal.len() > mark.state {
            match self.state_journal.pop().expect("non-empty") {
                StateChange::Pos(v) => self.pos = v,
                StateChange::Terminal(v) => self.terminal = v,
                StateChange::TrailPush => {
                    self.trail.pop();
                }
                StateChange::SuffixPush => {
                    self.suffix.pop();
                }
            }
        }
        self.graph.rollback(mark.graph);
    }

    fn set_pos(&mut self, v: VertexId) {
        self.state_journal.push(StateChange::Pos(self.pos));
        self.touched.push(self.pos);
        self.pos = v;
        self.touched.push(v);
    }

    fn set_terminal(&mut self, v: VertexId) {
        self.state_journal.push(StateChange::Terminal(self.terminal));
        self.touched.push(self.terminal);
        self.terminal = v;
        self.touched.push(v);
    }

    #[inline]
    pub(crate) fn charge(&mut self, units: u64) {
        self.report.total_work += units;
        self.frame_work += units;
    }

    // ---- primitive mutations shared by search and replay ---------------------

    /// Carried trail of `e` oriented so that it leaves `from`.
    pub(crate) fn oriented(&self, e: EdgeId, from: VertexId) -> (TrailId, bool) {
        let s = self.graph.edge(e);
        (s.trail, !s.is_loop() && s.a != from)
    }

    fn remove_edge_touching(&mut self, e: EdgeId) -> Result<(), ApplyError> {
        let (a, b) = (self.graph.edge(e).a, self.graph.edge(e).b);
        self.graph.remove_edge(e)?;
        self.touched.push(a);
        self.touched.push(b);
        Ok(())
    }

    fn add_edge_touching(&mut self, a: VertexId, b: VertexId, t: TrailId) -> Result<EdgeId, ApplyError> {
        let e = self.graph.add_edge(a, b, t)?;
        self.touched.push(a);
        self.touched.push(b);
        Ok(e)
    }

    fn drop_if_isolated(&mut self, v: VertexId) -> Result<(), ApplyError> {
        if self.graph.is_vertex_alive(v) && self.graph.degree(v) == 0 && !self.is_protected(v) {
            self.graph.remove_vertex(v)?;
        }
        Ok(())
    }

    fn require_incident(&self, e: EdgeId, v: VertexId) -> Result<(), ApplyError> {
        if !self.graph.is_edge_alive(e) {
            return Err(GraphError::EdgeNotAlive(e).into());
        }
        let s = self.graph.edge(e);
        if s.a != v && s.b != v {
            return Err(ApplyError::Invalid(format!("edge {e} is not incident to {v}")));
        }
        Ok(())
    }

    /// Extends the trail from the current end along `step`.
    pub fn take_step(&mut self, step: Step) -> Result<(), ApplyError> {
        let from = self.pos;
        self.require_incident(step.edge, from)?;
        let slot = self.graph.edge(step.edge);
        let (is_loop, to) = (slot.is_loop(), slot.other(from));
        let step = Step {
            edge: step.edge,
            reversed: is_loop && step.reversed,
        };
        self.remove_edge_touching(step.edge)?;
        self.trail.push(step);
        self.state_journal.push(StateChange::TrailPush);
        if to != from {
            self.set_pos(to);
        }
        self.drop_if_isolated(from)?;
        Ok(())
    }

    /// Applies one contraction record to the current state.
    pub fn apply_record(&mut self, rec: &RuleRecord) -> Result<(), ApplyError> {
        let named = match *rec {
            RuleRecord::R4 { v, u, .. } => [v, u],
            RuleRecord::R1 { v, .. }
            | RuleRecord::R2 { v, .. }
            | RuleRecord::R3 { v, .. }
            | RuleRecord::Mb { v, .. } => [v, v],
        };
        if let Some(&v) = named.iter().find(|&&v| !self.graph.is_vertex_alive(v)) {
            return Err(GraphError::VertexNotAlive(v).into());
        }
        match *rec {
            RuleRecord::R1 { v, e } => {
                self.require_incident(e, v)?;
                if v == self.pos {
                    self.take_step(Step::forward(e))?;
                } else if v == self.terminal {
                    let slot = self.graph.edge(e);
                    if slot.is_loop() {
                        return Err(ApplyError::Invalid("terminal forced edge cannot be a loop".into()));
                    }
                    let other = slot.other(v);
                    self.remove_edge_touching(e)?;
                    self.suffix.push(Step::forward(e));
                    self.state_journal.push(StateChange::SuffixPush);
                    self.set_terminal(other);
                    self.drop_if_isolated(v)?;
                } else {
                    return Err(ApplyError::Invalid(format!(
                        "R1 at {v}, which is neither trail end nor terminal"
                    )));
                }
            }
            RuleRecord::R2 { v, e1, e2, new } => {
                if e1 == e2 {
                    return Err(ApplyError::Invalid("R2 needs two distinct edges".into()));
                }
                self.require_incident(e1, v)?;
                self.require_incident(e2, v)?;
                self.expect_next_edge(new)?;
                let x = self.graph.edge(e1).other(v);
                let y = self.graph.edge(e2).other(v);
                let (t1, r1) = self.oriented(e1, x);
                let (t2, r2) = self.oriented(e2, v);
                self.remove_edge_touching(e1)?;
                self.remove_edge_touching(e2)?;
                let t = self.graph.concat((t1, r1), (t2, r2));
                self.add_edge_touching(x, y, t)?;
                self.drop_if_isolated(v)?;
            }
            RuleRecord::R3 { v, vp, moved } => {
                let nbrs = self.graph.neighbors(v);
                let w = nbrs
                    .iter()
                    .find(|&&(_, m)| m == moved + 1 && m >= 2)
                    .map(|&(w, _)| w)
                    .ok_or_else(|| ApplyError::Invalid(format!("R3 at {v}: no bundle of {}", moved + 1)))?;
                if nbrs.len() != 2 || !nbrs.iter().any(|&(u, m)| u != w && m == 1) {
                    return Err(ApplyError::Invalid(format!("R3 at {v}: wrong neighborhood")));
                }
                if vp.index() != self.graph.vertex_slots() {
                    return Err(ApplyError::Invalid(format!("R3 expects fresh vertex {vp}")));
                }
                let bundle = self.graph.edges_between(v, w);
                let orig = self.graph.orig(v);
                let created = self.graph.add_vertex(orig);
                debug_assert_eq!(created, vp);
                self.touched.push(vp);
                for &e in &bundle[1..] {
                    let s = self.graph.edge(e);
                    let (a, b, t) = (s.a, s.b, s.trail);
                    let (a, b) = if a == v { (vp, b) } else { (a, vp) };
                    self.remove_edge_touching(e)?;
                    self.add_edge_touching(a, b, t)?;
                }
            }
            RuleRecord::R4 { v, u, loops, odd } => {
                if u == v || self.graph.loop_count(v) != 0 || self.graph.neighbor_count(v) != 1 {
                    return Err(ApplyError::Invalid(format!("R4 at {v}: wrong neighborhood")));
                }
                let bundle = self.graph.edges_between(v, u);
                if bundle.len() as u32 != 2 * loops + odd as u32 {
                    return Err(ApplyError::Invalid(format!("R4 at {v}: multiplicity mismatch")));
                }
                let paired = &bundle[odd as usize..];
                let mut halves = Vec::with_capacity(paired.len());
                for &e in paired {
                    halves.push(e);
                }
                let oriented: Vec<(TrailId, bool, TrailId, bool)> = halves
                    .chunks(2)
                    .map(|p| {
                        let (t1, r1) = self.oriented(p[0], u);
                        let (t2, r2) = self.oriented(p[1], v);
                        (t1, r1, t2, r2)
                    })
                    .collect();
                for &e in paired {
                    self.remove_edge_touching(e)?;
                }
                for (t1, r1, t2, r2) in oriented {
                    let t = self.graph.concat((t1, r1), (t2, r2));
                    self.add_edge_touching(u, u, t)?;
                }
                self.drop_if_isolated(v)?;
            }
            RuleRecord::Mb { v, variant } => {
                let nbrs = self.graph.neighbors(v);
                if self.graph.loop_count(v) != 0 || nbrs.len() != 2 || nbrs.iter().any(|&(_, m)| m != 2) {
                    return Err(ApplyError::Invalid(format!("MB at {v}: wrong neighborhood")));
                }
                let (u, w) = (nbrs[0].0, nbrs[1].0);
                let a = self.graph.edges_between(v, u);
                let b = self.graph.edges_between(v, w);
                let a1 = self.oriented(a[0], u);
                let a2_out = self.oriented(a[1], v);
                let a2_in = self.oriented(a[1], u);
                let b1_in = self.oriented(b[0], w);
                let b1_out = self.oriented(b[0], v);
                let b2_out = self.oriented(b[1], v);
                for e in [a[0], a[1], b[0], b[1]] {
                    self.remove_edge_touching(e)?;
                }
                match variant {
                    1 => {
                        let t1 = self.graph.concat(a1, b1_out);
                        self.add_edge_touching(u, w, t1)?;
                        let t2 = self.graph.concat(a2_in, b2_out);
                        self.add_edge_touching(u, w, t2)?;
                    }
                    2 => {
                        let t1 = self.graph.concat(a1, a2_out);
                        self.add_edge_touching(u, u, t1)?;
                        let t2 = self.graph.concat(b1_in, b2_out);
                        self.add_edge_touching(w, w, t2)?;
                    }
                    _ => return Err(ApplyError::Invalid(format!("MB variant {variant}"))),
                }
                self.drop_if_isolated(v)?;
            }
        }
        Ok(())
    }

    fn expect_next_edge(&self, new: EdgeId) -> Result<(), ApplyError> {
        if new.index() != self.graph.edge_slots() {
            return Err(ApplyError::Invalid(format!(
                "expected new edge id {}, record says {new}",
                self.graph.edge_slots()
            )));
        }
        Ok(())
    }

    pub(crate) fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.graph.edge_slots() as u32)
    }

    pub(crate) fn next_vertex_id(&self) -> VertexId {
        VertexId(self.graph.vertex_slots() as u32)
    }

    fn apply_counted(&mut self, rec: RuleRecord, frame: &mut Frame) -> Result<(), EnumError> {
        let cost = match rec {
            RuleRecord::R3 { moved, .. } => 1 + moved as u64,
            RuleRecord::R4 { loops, .. } => 1 + 2 * loops as u64,
            RuleRecord::Mb { .. } => 4,
            _ => 1,
        };
        self.charge(cost);
        self.apply_record(&rec)
            .map_err(|e| EnumError::Internal(format!("applying {rec:?}: {e}")))?;
        self.report.rule_counts[rec.tag().index()] += 1;
        frame.push(rec);
        Ok(())
    }

    // ---- contraction ---------------------------------------------------------

    /// The first local rule applicable at `x`, if any.
    pub(crate) fn local_rule(&self, x: VertexId) -> Option<RuleRecord> {
        if !self.graph.is_vertex_alive(x) || self.graph.degree(x) == 0 {
            return None;
        }
        edge_enum::forced_or_smoothing_rule(self, x).or_else(|| match self.mode {
            Mode::Edge => None,
            Mode::Vertex => vertex_enum::bundle_rule(self, x),
        })
    }

    /// Runs local rules from the currently touched vertices to a fixpoint.
    pub(crate) fn cascade(&mut self, frame: &mut Frame) -> Result<(), EnumError> {
        let mut worklist: Vec<VertexId> = self.touched.clone();
        let mut seen_len = self.touched.len();
        while let Some(x) = worklist.pop() {
            self.charge(1);
            if let Some(rec) = self.local_rule(x) {
                self.apply_counted(rec, frame)?;
                worklist.extend_from_slice(&self.touched[seen_len..]);
                seen_len = self.touched.len();
            }
        }
        Ok(())
    }

    /// Directed options at the trail end, grouped so that one representative
    /// stands for all steps producing the same output prefix.
    pub fn candidate_groups(&mut self) -> Vec<CandidateGroup> {
        let incident = self.graph.incident_sorted(self.pos);
        self.charge(incident.len() as u64);
        match self.mode {
            Mode::Edge => edge_enum::edge_options(self, &incident),
            Mode::Vertex => vertex_enum::grouped_options(self, &incident),
        }
    }

    /// Contracts after an extension and absorbs forced steps until the trail
    /// end has zero or at least two children. Returns the children.
    pub(crate) fn settle(&mut self, frame: &mut Frame) -> Result<Vec<Step>, EnumError> {
        loop {
            self.cascade(frame)?;
            if self.graph.live_edge_count() == 0 {
                return Ok(Vec::new());
            }
            let groups = self.candidate_groups();
            if groups.is_empty() {
                return Err(EnumError::Internal(format!(
                    "trail end {} has no way forward with {} edges left",
                    self.pos,
                    self.graph.live_edge_count()
                )));
            }
            let feasible: Vec<Step> = if groups.len() == 1 {
                vec![groups[0].step]
            } else {
                let (bridges, work) = bridges_from(&self.graph, self.pos, &mut self.scratch);
                self.charge(work);
                groups
                    .iter()
                    .filter(|g| child_test(groups.len(), g.step.edge, &bridges))
                    .map(|g| g.step)
                    .collect()
            };
            match feasible.len() {
                0 => {
                    return Err(EnumError::Internal(format!(
                        "no addible edge at {} though the remainder is non-empty",
                        self.pos
                    )))
                }
                1 => {
                    let step = feasible[0];
                    if step.reversed {
                        return Err(EnumError::Internal("forced step on an oriented loop".into()));
                    }
                    self.report.forced_steps += 1;
                    self.apply_counted(
                        RuleRecord::R1 {
                            v: self.pos,
                            e: step.edge,
                        },
                        frame,
                    )?;
                }
                _ => return Ok(feasible),
            }
        }
    }

    /// Contracts the input to a fixpoint before the root call.
    pub fn preprocess(&mut self) -> Result<(Frame, Vec<Step>), EnumError> {
        self.touched = self.graph.alive_vertices().collect();
        let mut frame = Frame::new();
        let children = self.settle(&mut frame)?;
        self.touched.clear();
        self.preprocess_frame = frame.clone();
        Ok((frame, children))
    }

    pub fn preprocess_frame(&self) -> &Frame {
        &self.preprocess_frame
    }

    // ---- search --------------------------------------------------------------

    /// Runs the whole enumeration. The graph and trail are restored before
    /// returning, also on error.
    pub fn run(&mut self, sink: &mut dyn EnumSink, opts: &EnumOptions) -> Result<RunReport, EnumError> {
        self.limit = opts.max_solutions;
        self.record_tree = opts.record_tree;
        self.report = RunReport {
            max_frame_record_limit: MAX_FRAME_RECORDS,
            ..RunReport::default()
        };
        let mark = self.mark();
        self.frame_work = 0;
        let result = self.preprocess().and_then(|(frame, children)| {
            self.report.preprocess_work = self.frame_work;
            self.report.preprocess_cost_ratio =
                self.frame_work as f64 / (self.graph.original_edge_count() as f64 + 1.0);
            self.report.preprocess_records = frame.len();
            if self.limit == Some(0) {
                return Ok(Flow::Stop);
            }
            self.explore(None, children, sink)
        });
        self.rollback(mark);
        self.touched.clear();
        let flow = result?;
        self.report.aborted = flow == Flow::Stop;
        Ok(std::mem::take(&mut self.report))
    }

    fn open_node(&mut self, parent: Option<u32>) -> u32 {
        let id = self.report.nodes as u32;
        self.report.nodes += 1;
        let live = self.graph.live_edge_count();
        self.report.peak_live_edges = self.report.peak_live_edges.max(live);
        let ratio = self.frame_work as f64 / (live as f64 + 1.0);
        if parent.is_some() && ratio > self.report.max_cost_ratio {
            self.report.max_cost_ratio = ratio;
        }
        if self.record_tree {
            if let Some(p) = parent {
                self.report.tree[p as usize].children += 1;
            }
            self.report.tree.push(NodeStat {
                parent,
                work: self.frame_work,
                children: 0,
                live_edges: live as u32,
                complete: false,
            });
        }
        id
    }

    fn explore(
        &mut self,
        parent: Option<u32>,
        children: Vec<Step>,
        sink: &mut dyn EnumSink,
    ) -> Result<Flow, EnumError> {
        let node = self.open_node(parent);
        if children.is_empty() {
            debug_assert_eq!(self.graph.live_edge_count(), 0);
            sink.solution(&self.solution_view())?;
            self.report.diff_events += 1;
            self.report.solutions += 1;
            self.close_node(node, 0);
            if self.limit.is_some_and(|k| self.report.solutions >= k) {
                return Ok(Flow::Stop);
            }
            return Ok(Flow::Continue);
        }
        let mut generated = 0u32;
        for step in children {
            let mark = self.mark();
            let saved_work = self.frame_work;
            self.frame_work = 0;
            self.touched.clear();
            let result = self.extend(node, step, sink, &mut generated);
            self.rollback(mark);
            self.frame_work = saved_work;
            if result? == Flow::Stop {
                return Ok(Flow::Stop);
            }
        }
        self.close_node(node, generated);
        Ok(Flow::Continue)
    }

    fn close_node(&mut self, node: u32, generated: u32) {
        if generated == 1 {
            self.report.thin_nodes += 1;
        }
        if self.record_tree {
            self.report.tree[node as usize].complete = true;
        }
    }

    fn extend(
        &mut self,
        node: u32,
        step: Step,
        sink: &mut dyn EnumSink,
        generated: &mut u32,
    ) -> Result<Flow, EnumError> {
        if self.mode == Mode::Vertex {
            vertex_enum::classify_extension(self, step)?;
        }
        self.charge(1);
        self.take_step(step)
            .map_err(|e| EnumError::Internal(format!("taking {step:?}: {e}")))?;
        let mut frame = Frame::new();
        let children = self.settle(&mut frame)?;
        self.branch(node, step, &mut frame, children, sink, generated)
    }

    /// Emits the child reached by `step`, splitting it first on any vertex
    /// that became eligible for multibirth.
    fn branch(
        &mut self,
        node: u32,
        step: Step,
        frame: &mut Frame,
        children: Vec<Step>,
        sink: &mut dyn EnumSink,
        generated: &mut u32,
    ) -> Result<Flow, EnumError> {
        if self.mode == Mode::Vertex {
            if let Some(v) = vertex_enum::multibirth_target(self) {
                let nbrs = self.graph.neighbors(v);
                let (cut, work) = {
                    let (reach, work) = reachable_avoiding(&self.graph, nbrs[0].0, nbrs[1].0, v, &mut self.scratch);
                    (!reach, work)
                };
                self.charge(work);
                self.report.multibirth_branchings += 1;
                let base = frame.len();
                let saved_touched = self.touched.clone();
                let saved_work = self.frame_work;
                for variant in [1u8, 2] {
                    if variant == 2 && cut {
                        break;
                    }
                    let mark = self.mark();
                    let result = self
                        .apply_counted(RuleRecord::Mb { v, variant }, frame)
                        .and_then(|_| self.settle(frame))
                        .and_then(|grand| self.branch(node, step, frame, grand, sink, generated));
                    self.rollback(mark);
                    frame.truncate(base);
                    self.touched.clone_from(&saved_touched);
                    self.frame_work = saved_work;
                    if result? == Flow::Stop {
                        return Ok(Flow::Stop);
                    }
                }
                return Ok(Flow::Continue);
            }
        }
        if frame.len() > MAX_FRAME_RECORDS {
            self.report.oversized_frames += 1;
        }
        self.report.max_frame_len = self.report.max_frame_len.max(frame.len());
        let is_loop = self.graph.edge(step.edge).is_loop();
        *generated += 1;
        sink.push(step, is_loop, frame)?;
        self.report.diff_events += 1;
        let saved_touched = std::mem::take(&mut self.touched);
        let flow = self.explore(Some(node), children, sink);
        self.touched = saved_touched;
        let flow = flow?;
        sink.pop(step, is_loop, frame)?;
        self.report.diff_events += 1;
        Ok(flow)
    }

    // ---- output --------------------------------------------------------------

    /// Expands `W` and the forced suffix into original `(edge, from, to)` steps.
    pub fn expand_current(&self) -> Vec<(EdgeId, VertexId, VertexId)> {
        let mut out = Vec::new();
        let mut cur = self.start;
        for step in self.trail.iter().chain(self.suffix.iter().rev()) {
            let slot = self.graph.edge(step.edge);
            let rev = if slot.is_loop() { step.reversed } else { slot.a != cur };
            self.graph.trails().expand(slot.trail, rev, &mut out);
            cur = slot.other(cur);
        }
        out
    }
}

/// A candidate may extend the trail when it is the only one or is not a bridge.
pub fn child_test(candidates: usize, e: EdgeId, bridges: &[EdgeId]) -> bool {
    candidates == 1 || !bridges.contains(&e)
}
