//! Edge-distinct enumeration: candidate steps, the child test and the two
//! contractions shared with vertex mode (forced edges and smoothing).

use crate::graph::Multigraph;
use crate::ids::{EdgeId, VertexId};
use crate::record::{Frame, RuleRecord, Step};
use crate::search::{CandidateGroup, EnumError, EnumOptions, EnumSink, Mode, NotApplicable, RunReport, Session};

pub use crate::search::child_test;

/// Whether traversing loop `e` either way yields the same output.
pub(crate) fn loop_is_symmetric(s: &Session, e: EdgeId) -> bool {
    let g = s.graph();
    let t = g.edge(e).trail;
    match s.mode() {
        Mode::Edge => g.trails().len(t) == 1,
        Mode::Vertex => g.trails().is_palindrome(t),
    }
}

/// Loops at `x` that can be folded into a neighboring edge without losing or
/// duplicating solutions: their relative order and orientation never matter.
fn loops_interchangeable(s: &Session, x: VertexId) -> bool {
    let g = s.graph();
    let loops = g.edges_between(x, x);
    match s.mode() {
        Mode::Edge => loops.len() == 1 && loop_is_symmetric(s, loops[0]),
        Mode::Vertex => {
            let sig = g.trails().signature(g.edge(loops[0]).trail, false);
            loops
                .iter()
                .all(|&e| loop_is_symmetric(s, e) && g.trails().signature(g.edge(e).trail, false) == sig)
        }
    }
}

/// Forced-edge (`R1`) and smoothing (`R2`) rules at `x`, in that order.
pub(crate) fn forced_or_smoothing_rule(s: &Session, x: VertexId) -> Option<RuleRecord> {
    let g = s.graph();
    let loops = g.loop_count(x);
    let non_loop = g.degree(x) - 2 * loops;
    let (pos, terminal) = (s.position(), s.terminal());
    let smallest_non_loop = || {
        g.incident_sorted(x)
            .into_iter()
            .find(|&e| !g.edge(e).is_loop())
            .expect("vertex has a non-loop edge")
    };
    if x == pos {
        if loops == 0 && non_loop == 1 {
            return Some(RuleRecord::R1 {
                v: x,
                e: g.incident(x)[0],
            });
        }
        if loops == 1 && non_loop == 0 {
            let e = g.incident(x)[0];
            if loop_is_symmetric(s, e) {
                return Some(RuleRecord::R1 { v: x, e });
            }
        }
        return None;
    }
    if x == terminal && loops == 0 && non_loop == 1 {
        return Some(RuleRecord::R1 {
            v: x,
            e: g.incident(x)[0],
        });
    }
    if loops > 0 {
        let fits = if x == terminal { non_loop == 1 } else { non_loop == 2 };
        if fits && loops_interchangeable(s, x) {
            let e2 = g.edges_between(x, x)[0];
            return Some(RuleRecord::R2 {
                v: x,
                e1: smallest_non_loop(),
                e2,
                new: s.next_edge_id(),
            });
        }
        return None;
    }
    if x != terminal && g.degree(x) == 2 {
        let inc = g.incident_sorted(x);
        return Some(RuleRecord::R2 {
            v: x,
            e1: inc[0],
            e2: inc[1],
            new: s.next_edge_id(),
        });
    }
    None
}

/// One option per edge leaving the trail end, two for loops whose
/// orientation changes the edge order.
pub(crate) fn edge_options(s: &Session, incident: &[EdgeId]) -> Vec<CandidateGroup> {
    let g = s.graph();
    let pos = s.position();
    let mut out = Vec::with_capacity(incident.len() + 1);
    for &e in incident {
        let slot = g.edge(e);
        let landing = slot.other(pos);
        let mut add = |reversed: bool| {
            out.push(CandidateGroup {
                step: Step { edge: e, reversed },
                landing,
                signature: g.directed_signature(e, pos, reversed),
                size: 1,
            })
        };
        add(false);
        if slot.is_loop() && !loop_is_symmetric(s, e) {
            add(true);
        }
    }
    out
}

/// Candidate steps at the trail end in ascending edge id order.
pub fn candidates(s: &mut Session) -> Vec<Step> {
    s.candidate_groups().into_iter().map(|g| g.step).collect()
}

fn apply_local(s: &mut Session, v: VertexId, want: fn(&RuleRecord) -> bool) -> Result<RuleRecord, NotApplicable> {
    let rec = s.local_rule(v).filter(want).ok_or(NotApplicable(v))?;
    s.apply_record(&rec).map_err(|_| NotApplicable(v))?;
    Ok(rec)
}

/// Removes the forced edge at a pendant trail end or terminal `v`.
pub fn contract_rule1(s: &mut Session, v: VertexId) -> Result<RuleRecord, NotApplicable> {
    apply_local(s, v, |r| matches!(r, RuleRecord::R1 { .. }))
}

/// Smooths an unprotected vertex `v` whose edges can be merged pairwise.
pub fn contract_rule2(s: &mut Session, v: VertexId) -> Result<RuleRecord, NotApplicable> {
    apply_local(s, v, |r| matches!(r, RuleRecord::R2 { .. }))
}

/// Extends the trail along `step`, contracts to a fixpoint and returns the
/// records together with the children of the new node.
pub fn contract_after_extend(s: &mut Session, step: Step) -> Result<(Frame, Vec<Step>), EnumError> {
    s.take_step(step)
        .map_err(|e| EnumError::Internal(format!("taking {step:?}: {e}")))?;
    let mut frame = Frame::new();
    let children = s.settle(&mut frame)?;
    Ok((frame, children))
}

/// Enumerates every Eulerian trail from `s` to `t` with distinct edge
/// sequences. `graph` is left untouched.
pub fn enumerate_edge_distinct(
    graph: &Multigraph,
    s: VertexId,
    t: VertexId,
    sink: &mut dyn EnumSink,
    opts: &EnumOptions,
) -> Result<RunReport, EnumError> {
    Session::new(graph.clone(), Mode::Edge, s, t).run(sink, opts)
}
