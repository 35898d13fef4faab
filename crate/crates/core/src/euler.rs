use thiserror::Error;

use crate::connectivity::edge_bearing_components;
use crate::graph::Multigraph;
use crate::ids::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("graph has no edges")]
    Empty,
    #[error("graph has {0} odd-degree vertices; an Eulerian trail needs 0 or 2")]
    NotEulerian(usize),
    #[error("edge-bearing vertices span {0} connected components")]
    Disconnected(usize),
    #[error("requested endpoints {source_vertex:?}/{target:?} contradict the degree parity")]
    EndpointMismatch {
        source_vertex: Option<VertexId>,
        target: Option<VertexId>,
    },
}

/// Validates that `g` has an Eulerian trail and fixes its endpoints.
///
/// With two odd vertices they are the endpoints; absent a preference the
/// smaller id starts. With all degrees even the trail is a circuit anchored at
/// the requested source, or at the smallest edge-bearing vertex.
pub fn check_eulerian(
    g: &Multigraph,
    source: Option<VertexId>,
    target: Option<VertexId>,
) -> Result<(VertexId, VertexId), EulerError> {
    if g.live_edge_count() == 0 {
        return Err(EulerError::Empty);
    }
    let components = edge_bearing_components(g);
    if components > 1 {
        return Err(EulerError::Disconnected(components));
    }
    let odd: Vec<VertexId> = g.alive_vertices().filter(|&v| g.degree(v) % 2 == 1).collect();
    let mismatch = || EulerError::EndpointMismatch {
        source_vertex: source,
        target,
    };
    let bears_edges = |v: VertexId| g.is_vertex_alive(v) && g.degree(v) > 0;
    match odd.len() {
        0 => {
            let s = match (source, target) {
                (Some(s), Some(t)) if s != t => return Err(mismatch()),
                (Some(s), _) | (None, Some(s)) => s,
                (None, None) => g.alive_vertices().find(|&v| g.degree(v) > 0).expect("graph has edges"),
            };
            if !bears_edges(s) {
                return Err(mismatch());
            }
            Ok((s, s))
        }
        2 => {
            let (a, b) = (odd[0], odd[1]);
            let fits = |v: VertexId| v == a || v == b;
            let flip = |v: VertexId| if v == a { b } else { a };
            match (source, target) {
                (None, None) => Ok((a, b)),
                (Some(s), None) if fits(s) => Ok((s, flip(s))),
                (None, Some(t)) if fits(t) => Ok((flip(t), t)),
                (Some(s), Some(t)) if fits(s) && t == flip(s) => Ok((s, t)),
                _ => Err(mismatch()),
            }
        }
        k => Err(EulerError::NotEulerian(k)),
    }
}
