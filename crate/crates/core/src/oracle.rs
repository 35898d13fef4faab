//! Brute-force ground truth: exhaustive trail enumerators, deletion-based
//! connectivity checks and the small-graph corpus used by the test suites.
//!
//! Nothing here prunes or reuses the enumerator's machinery; every function
//! works on the original edge list only.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::euler::check_eulerian;
use crate::graph::Multigraph;
use crate::ids::{EdgeId, VertexId};

pub const DEFAULT_EDGE_CAP: usize = 14;

/// Sorted, duplicate-free list of solutions.
pub type TrailList = Vec<Vec<u32>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {edges} edges, oracle cap is {cap}")]
pub struct CapExceeded {
    pub edges: usize,
    pub cap: usize,
}

fn original_edges(g: &Multigraph) -> Vec<(u32, u32)> {
    (0..g.original_edge_count())
        .map(|i| {
            let s = g.edge(EdgeId(i as u32));
            (s.a.0, s.b.0)
        })
        .collect()
}

/// Every Eulerian trail from `s` to `t` as a sequence of edge ids, found by
/// backtracking over unused incident edges.
pub fn brute_edge(g: &Multigraph, s: VertexId, t: VertexId) -> Result<TrailList, CapExceeded> {
    brute_edge_capped(g, s, t, DEFAULT_EDGE_CAP)
}

pub fn brute_edge_capped(g: &Multigraph, s: VertexId, t: VertexId, cap: usize) -> Result<TrailList, CapExceeded> {
    let edges = original_edges(g);
    if edges.len() > cap {
        return Err(CapExceeded {
            edges: edges.len(),
            cap,
        });
    }
    let mut used = vec![false; edges.len()];
    let mut path = Vec::with_capacity(edges.len());
    let mut out = Vec::new();
    backtrack(&edges, s.0, t.0, &mut used, &mut path, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

fn backtrack(edges: &[(u32, u32)], at: u32, t: u32, used: &mut [bool], path: &mut Vec<u32>, out: &mut TrailList) {
    if path.len() == edges.len() {
        if at == t {
            out.push(path.clone());
        }
        return;
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if used[i] || (a != at && b != at) {
            continue;
        }
        let next = if a == at { b } else { a };
        used[i] = true;
        path.push(i as u32);
        backtrack(edges, next, t, used, path, out);
        path.pop();
        used[i] = false;
    }
}

/// Vertex sequence of an edge-id trail starting at `s`.
pub fn vertex_sequence(g: &Multigraph, s: VertexId, trail: &[u32]) -> Vec<u32> {
    let mut at = s.0;
    let mut seq = vec![at];
    for &e in trail {
        let slot = g.edge(EdgeId(e));
        at = if slot.a.0 == at { slot.b.0 } else { slot.a.0 };
        seq.push(at);
    }
    seq
}

/// Distinct vertex sequences of the Eulerian trails from `s` to `t`.
pub fn brute_vertex(g: &Multigraph, s: VertexId, t: VertexId) -> Result<TrailList, CapExceeded> {
    let trails = brute_edge(g, s, t)?;
    let set: BTreeSet<Vec<u32>> = trails.iter().map(|tr| vertex_sequence(g, s, tr)).collect();
    Ok(set.into_iter().collect())
}

/// Second, independent edge-mode oracle: every permutation of the edge set
/// that forms a walk from `s` ending at `t`. Only sensible for `m ≤ 8`.
pub fn permutation_edge(g: &Multigraph, s: VertexId, t: VertexId) -> TrailList {
    let edges = original_edges(g);
    let mut perm: Vec<u32> = (0..edges.len() as u32).collect();
    let mut out = Vec::new();
    loop {
        if is_walk(&edges, &perm, s.0, t.0) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn is_walk(edges: &[(u32, u32)], order: &[u32], s: u32, t: u32) -> bool {
    let mut at = s;
    for &e in order {
        let (a, b) = edges[e as usize];
        at = if a == at {
            b
        } else if b == at {
            a
        } else {
            return false;
        };
    }
    at == t
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn components_without(g: &Multigraph, skip_edge: Option<EdgeId>, skip_vertex: Option<VertexId>) -> usize {
    let n = g.vertex_slots();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in g.alive_edges() {
        let s = g.edge(e);
        if Some(e) == skip_edge || Some(s.a) == skip_vertex || Some(s.b) == skip_vertex {
            continue;
        }
        let (x, y) = (find(&mut parent, s.a.index()), find(&mut parent, s.b.index()));
        parent[x] = y;
    }
    let roots: BTreeSet<usize> = g
        .alive_vertices()
        .filter(|&v| Some(v) != skip_vertex)
        .map(|v| find(&mut parent, v.index()))
        .collect();
    roots.len()
}

/// Bridges found by deleting each edge in turn.
pub fn bridges_by_deletion(g: &Multigraph) -> BTreeSet<EdgeId> {
    let base = components_without(g, None, None);
    g.alive_edges()
        .filter(|&e| components_without(g, Some(e), None) > base)
        .collect()
}

/// Cut vertices found by deleting each vertex in turn.
pub fn cut_vertices_by_deletion(g: &Multigraph) -> BTreeSet<VertexId> {
    let base = components_without(g, None, None);
    g.alive_vertices()
        .filter(|&v| components_without(g, None, Some(v)) > base)
        .collect()
}

/// A corpus member: vertex count and edge list in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorpusGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl CorpusGraph {
    pub fn graph(&self) -> Multigraph {
        Multigraph::from_edges(self.n, &self.edges)
    }

    /// Endpoint pairs worth testing: every start for a circuit, both
    /// directions when two vertices are odd.
    pub fn endpoint_choices(&self) -> Vec<(VertexId, VertexId)> {
        let g = self.graph();
        let Ok((s, t)) = check_eulerian(&g, None, None) else {
            return Vec::new();
        };
        if s == t {
            (0..self.n as u32).map(|v| (VertexId(v), VertexId(v))).collect()
        } else {
            vec![(s, t), (t, s)]
        }
    }

    /// Same text format as graph input files.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// All connected Eulerian multigraphs (loops and parallel edges allowed) on
/// 1..=`max_vertices` vertices, every vertex carrying an edge, with
/// 1..=`max_edges` edges; one representative per isomorphism class, sorted.
pub fn corpus_generate(max_vertices: usize, max_edges: usize) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u..n as u32).map(move |v| (u, v))).collect();
        let perms = permutations(n);
        let mut chosen = Vec::new();
        extend_multisets(&pairs, 0, max_edges, &mut chosen, &mut |edges| {
            let candidate = CorpusGraph {
                n,
                edges: edges.to_vec(),
            };
            if is_canonical(&candidate, &perms)
                && check_eulerian(&candidate.graph(), None, None).is_ok()
                && covers_all(&candidate)
            {
                out.push(candidate);
            }
        });
    }
    out.sort();
    out
}

fn covers_all(c: &CorpusGraph) -> bool {
    let mut seen = vec![false; c.n];
    for &(u, v) in &c.edges {
        seen[u as usize] = true;
        seen[v as usize] = true;
    }
    seen.into_iter().all(|x| x)
}

type EmitFn<'a> = dyn FnMut(&[(u32, u32)]) + 'a;

fn extend_multisets(
    pairs: &[(u32, u32)],
    from: usize,
    budget: usize,
    chosen: &mut Vec<(u32, u32)>,
    emit: &mut EmitFn<'_>,
) {
    if !chosen.is_empty() {
        emit(chosen);
    }
    if budget == 0 {
        return;
    }
    for i in from..pairs.len() {
        chosen.push(pairs[i]);
        extend_multisets(pairs, i, budget - 1, chosen, emit);
        chosen.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    let mut all = vec![p.clone()];
    while next_permutation(&mut p) {
        all.push(p.clone());
    }
    all
}

/// A sorted edge list is canonical when no relabeling yields a smaller one.
fn is_canonical(c: &CorpusGraph, perms: &[Vec<u32>]) -> bool {
    let mut relabeled = Vec::with_capacity(c.edges.len());
    for p in perms.iter().skip(1) {
        relabeled.clear();
        relabeled.extend(c.edges.iter().map(|&(u, v)| {
            let (a, b) = (p[u as usize], p[v as usize]);
            (a.min(b), a.max(b))
        }));
        relabeled.sort_unstable();
        if relabeled < c.edges {
            return false;
        }
    }
    true
}
