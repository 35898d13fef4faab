//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use eulertrail::edge_enum::contract_after_extend;
use eulertrail::search::{Mode, Session};
use eulertrail::vertex_enum::contract_after_extend_v;
use eulertrail::{Frame, Multigraph, RuleRecord, Step};

/// Every completion of the current partial trail, found by trying each
/// incident edge (each loop both ways) with no contraction at all. Vertex
/// mode yields vertex sequences, edge mode edge sequences.
pub fn completions(s: &mut Session) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    complete(s, &mut out);
    out
}

fn complete(s: &mut Session, out: &mut BTreeSet<Vec<u32>>) {
    if s.graph().live_edge_count() == 0 {
        if s.position() == s.terminal() {
            let view = s.solution_view();
            let seq = match s.mode() {
                Mode::Edge => view.edges().into_iter().map(|e| e.0).collect(),
                Mode::Vertex => view.vertices().into_iter().map(|v| v.0).collect(),
            };
            out.insert(seq);
        }
        return;
    }
    let pos = s.position();
    if !s.graph().is_vertex_alive(pos) {
        return;
    }
    for e in s.graph().incident_sorted(pos) {
        let orientations: &[bool] = if s.graph().edge(e).is_loop() {
            &[false, true]
        } else {
            &[false]
        };
        for &reversed in orientations {
            let mark = s.mark();
            s.take_step(Step { edge: e, reversed }).expect("incident step");
            complete(s, out);
            s.rollback(mark);
        }
    }
}

pub fn extend(s: &mut Session, step: Step) -> (Frame, Vec<Step>) {
    match s.mode() {
        Mode::Edge => contract_after_extend(s, step),
        Mode::Vertex => contract_after_extend_v(s, step),
    }
    .expect("extension")
}

pub type RecordHook<'a> = &'a mut dyn FnMut(&Multigraph, &RuleRecord, &Multigraph);
pub type Visit<'a> = &'a mut dyn FnMut(&mut Session, Option<(Step, &Frame)>);

/// Depth-first walk over the family tree without multibirth, calling
/// `visit` at every node with the step and frame that produced it. Each
/// frame is also replayed record by record from the pre-extension state,
/// with `on_record` seeing the graph before and after every record.
pub fn walk(s: &mut Session, children: Vec<Step>, visit: Visit<'_>, on_record: RecordHook<'_>) {
    visit(s, None);
    walk_below(s, children, visit, on_record);
}

fn walk_below(s: &mut Session, children: Vec<Step>, visit: Visit<'_>, on_record: RecordHook<'_>) {
    for step in children {
        let mark = s.mark();
        let (frame, grand) = extend(s, step);
        let contracted = s.graph().snapshot();
        s.rollback(mark);
        s.take_step(step).expect("step");
        for rec in &frame {
            let before = s.graph().clone();
            s.apply_record(rec).expect("replayed record");
            on_record(&before, rec, s.graph());
        }
        assert_eq!(s.graph().snapshot(), contracted, "replaying {frame:?}");
        visit(s, Some((step, &frame)));
        walk_below(s, grand, visit, on_record);
        s.rollback(mark);
    }
}

/// Doubled cycle: `k` vertices, each cycle edge present twice.
pub fn doubled_cycle(k: u32) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        edges.push((i, j));
        edges.push((i, j));
    }
    Multigraph::from_edges(k as usize, &edges)
}
