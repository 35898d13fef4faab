//! Vertex-distinct enumeration: grouping of equivalent steps and the bundle
//! contractions (split, fold, multibirth) that keep the tree free of
//! duplicate vertex sequences.

use std::collections::HashMap;

use crate::graph::Multigraph;
use crate::ids::{EdgeId, VertexId};
use crate::record::{Frame, RuleRecord, Step};
use crate::search::{
    ApplyError, CandidateGroup, EnumError, EnumOptions, EnumSink, Mode, NotApplicable, RunReport, Session,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// No edges between the two vertices.
    Absent,
    /// Every parallel edge carries the same vertex sequence.
    Bad,
    /// At least two parallel edges carry different vertex sequences.
    Good,
}

pub fn pair_class(g: &Multigraph, u: VertexId, v: VertexId) -> PairClass {
    match g.distinct_signatures(u, v) {
        0 => PairClass::Absent,
        1 => PairClass::Bad,
        _ => PairClass::Good,
    }
}

/// Split (`R3`) and fold (`R4`) at a loop-free vertex `x`.
pub(crate) fn bundle_rule(s: &Session, x: VertexId) -> Option<RuleRecord> {
    let g = s.graph();
    if g.loop_count(x) != 0 {
        return None;
    }
    let nbrs = g.neighbors(x);
    let unprotected = !s.is_protected(x);
    match nbrs[..] {
        [(u, m)] if m >= 3 && pair_class(g, x, u) == PairClass::Bad => {
            let circuit_end = s.position() == s.terminal();
            if unprotected && m % 2 == 0 {
                Some(RuleRecord::R4 {
                    v: x,
                    u,
                    loops: m / 2,
                    odd: false,
                })
            } else if !unprotected && !circuit_end && m % 2 == 1 {
                Some(RuleRecord::R4 {
                    v: x,
                    u,
                    loops: (m - 1) / 2,
                    odd: true,
                })
            } else {
                None
            }
        }
        [(a, ma), (b, mb)] if unprotected => {
            let (w, m) = match (ma, mb) {
                (1, m) if m >= 2 => (b, m),
                (m, 1) if m >= 2 => (a, m),
                _ => return None,
            };
            (pair_class(g, x, w) == PairClass::Bad).then(|| RuleRecord::R3 {
                v: x,
                vp: s.next_vertex_id(),
                moved: m - 1,
            })
        }
        _ => None,
    }
}

/// Options at the trail end merged by landing vertex and carried vertex
/// sequence, ascending by that key; the representative is the first option
/// in edge id order.
pub(crate) fn grouped_options(s: &Session, incident: &[EdgeId]) -> Vec<CandidateGroup> {
    let g = s.graph();
    let pos = s.position();
    let mut out: Vec<CandidateGroup> = Vec::with_capacity(incident.len());
    let mut index: HashMap<(VertexId, crate::carried::SigId), usize> = HashMap::new();
    for &e in incident {
        let slot = g.edge(e);
        let landing = slot.other(pos);
        let orientations: &[bool] = if slot.is_loop() { &[false, true] } else { &[false] };
        for &reversed in orientations {
            let signature = g.directed_signature(e, pos, reversed);
            match index.get(&(landing, signature)) {
                Some(&i) => out[i].size += 1,
                None => {
                    index.insert((landing, signature), out.len());
                    out.push(CandidateGroup {
                        step: Step { edge: e, reversed },
                        landing,
                        signature,
                        size: 1,
                    });
                }
            }
        }
    }
    out.sort_by_key(|g| (g.landing, g.signature));
    out
}

/// Candidate groups at the trail end.
pub fn candidate_groups(s: &mut Session) -> Vec<CandidateGroup> {
    s.candidate_groups()
}

/// A vertex touched since the last extension whose two bad double bundles
/// can be resolved by multibirth.
pub(crate) fn multibirth_target(s: &Session) -> Option<VertexId> {
    let mut touched = s.touched.clone();
    touched.sort_unstable();
    touched.dedup();
    touched.into_iter().find(|&v| multibirth_applies(s, v))
}

fn multibirth_applies(s: &Session, v: VertexId) -> bool {
    let g = s.graph();
    if !g.is_vertex_alive(v) || s.is_protected(v) || g.loop_count(v) != 0 {
        return false;
    }
    match g.neighbors(v)[..] {
        [(u, 2), (w, 2)] => pair_class(g, v, u) == PairClass::Bad && pair_class(g, v, w) == PairClass::Bad,
        _ => false,
    }
}

fn apply_bundle(s: &mut Session, v: VertexId, want: fn(&RuleRecord) -> bool) -> Result<RuleRecord, NotApplicable> {
    let rec = bundle_rule(s, v).filter(want).ok_or(NotApplicable(v))?;
    s.apply_record(&rec).map_err(|_| NotApplicable(v))?;
    Ok(rec)
}

/// Splits `v` when it has one single edge and one bad bundle.
pub fn contract_rule3(s: &mut Session, v: VertexId) -> Result<RuleRecord, NotApplicable> {
    apply_bundle(s, v, |r| matches!(r, RuleRecord::R3 { .. }))
}

/// Folds the bad bundle of a vertex with a single neighbor into loops there.
pub fn contract_rule4(s: &mut Session, v: VertexId) -> Result<RuleRecord, NotApplicable> {
    apply_bundle(s, v, |r| matches!(r, RuleRecord::R4 { .. }))
}

/// Applies multibirth variant 1 (`u–w` edges) or 2 (loops at `u` and `w`).
pub fn multibirth(s: &mut Session, v: VertexId, variant: u8) -> Result<RuleRecord, ApplyError> {
    if !multibirth_applies(s, v) {
        return Err(ApplyError::Invalid(format!("multibirth does not apply at {v}")));
    }
    let rec = RuleRecord::Mb { v, variant };
    s.apply_record(&rec)?;
    Ok(rec)
}

/// Extends along `step` and contracts to a fixpoint, without multibirth.
pub fn contract_after_extend_v(s: &mut Session, step: Step) -> Result<(Frame, Vec<Step>), EnumError> {
    crate::edge_enum::contract_after_extend(s, step)
}

/// Records which extension case the landing vertex of `step` falls in. A
/// split rule that is still applicable there means contraction missed a
/// vertex, which is reported as an internal error.
pub(crate) fn classify_extension(s: &mut Session, step: Step) -> Result<(), EnumError> {
    let g = s.graph();
    let u = s.position();
    let v = g.edge(step.edge).other(u);
    let case = if v == u {
        Case::Other
    } else {
        let nbrs = g.neighbors(v);
        let mu = g.multiplicity(v, u);
        match nbrs.len() {
            n if n >= 4 => Case::APlain,
            3 => {
                if mu > 1 {
                    Case::APlain
                } else {
                    let min_other = nbrs
                        .iter()
                        .filter(|&&(w, _)| w != u)
                        .map(|&(_, m)| m)
                        .min()
                        .unwrap_or(0);
                    if min_other >= 2 {
                        Case::A1
                    } else {
                        Case::A2
                    }
                }
            }
            2 => match mu {
                m if m >= 3 => Case::B1,
                2 => Case::B2,
                _ => {
                    let (w, mw) = *nbrs.iter().find(|&&(w, _)| w != u).expect("two neighbors");
                    let splittable =
                        !s.is_protected(v) && g.loop_count(v) == 0 && mw >= 2 && pair_class(g, v, w) == PairClass::Bad;
                    if splittable {
                        Case::B3Violation
                    } else {
                        Case::B3Blocked
                    }
                }
            },
            _ => Case::Other,
        }
    };
    let c = &mut s.report_mut().cases;
    match case {
        Case::APlain => c.a_plain += 1,
        Case::A1 => c.a1 += 1,
        Case::A2 => c.a2 += 1,
        Case::B1 => c.b1 += 1,
        Case::B2 => c.b2 += 1,
        Case::B3Blocked => c.b3_blocked += 1,
        Case::B3Violation => {
            c.b3_violations += 1;
            return Err(EnumError::Internal(format!(
                "landing vertex {v} still admits a split before extension"
            )));
        }
        Case::Other => c.other += 1,
    }
    Ok(())
}

enum Case {
    APlain,
    A1,
    A2,
    B1,
    B2,
    B3Blocked,
    B3Violation,
    Other,
}

/// Enumerates every Eulerian trail from `s` to `t` with distinct vertex
/// sequences. `graph` is left untouched.
pub fn enumerate_vertex_distinct(
    graph: &Multigraph,
    s: VertexId,
    t: VertexId,
    sink: &mut dyn EnumSink,
    opts: &EnumOptions,
) -> Result<RunReport, EnumError> {
    Session::new(graph.clone(), Mode::Vertex, s, t).run(sink, opts)
}
