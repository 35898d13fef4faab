//! Bridges, cut vertices and reachability on the live graph.
//!
//! All traversals are iterative lowlink DFS keyed on edge ids, so parallel
//! edges are handled by skipping only the tree edge itself. Scratch arrays are
//! stamped per traversal instead of being cleared.

use std::collections::BTreeSet;

use crate::graph::Multigraph;
use crate::ids::{EdgeId, VertexId};

#[derive(Clone, Debug, Default)]
pub struct Scratch {
    stamp: Vec<u32>,
    disc: Vec<u32>,
    low: Vec<u32>,
    generation: u32,
    stack: Vec<(VertexId, Option<EdgeId>, usize)>,
}

impl Scratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn begin(&mut self, slots: usize) {
        if self.stamp.len() < slots {
            self.stamp.resize(slots, 0);
            self.disc.resize(slots, 0);
            self.low.resize(slots, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.stack.clear();
    }

    #[inline]
    fn seen(&self, v: VertexId) -> bool {
        self.stamp[v.index()] == self.generation
    }

    #[inline]
    fn visit(&mut self, v: VertexId, time: &mut u32) {
        self.stamp[v.index()] = self.generation;
        self.disc[v.index()] = *time;
        self.low[v.index()] = *time;
        *time += 1;
    }
}

/// Lowlink DFS over the component of `root`. Pushes bridges into `bridges`
/// and articulation points into `cuts`; returns the number of edge
/// inspections performed.
fn lowlink(
    g: &Multigraph,
    root: VertexId,
    scratch: &mut Scratch,
    time: &mut u32,
    mut bridges: Option<&mut Vec<EdgeId>>,
    mut cuts: Option<&mut Vec<VertexId>>,
) -> u64 {
    let mut work = 0u64;
    scratch.visit(root, time);
    scratch.stack.push((root, None, 0));
    let mut root_children = 0u32;
    while let Some(&(v, parent_edge, i)) = scratch.stack.last() {
        let incidence = g.incident(v);
        if i < incidence.len() {
            scratch.stack.last_mut().expect("non-empty").2 += 1;
            work += 1;
            let e = incidence[i];
            if Some(e) == parent_edge {
                continue;
            }
            let slot = g.edge(e);
            if slot.is_loop() {
                continue;
            }
            let w = slot.other(v);
            if scratch.seen(w) {
                let d = scratch.disc[w.index()];
                let l = &mut scratch.low[v.index()];
                *l = (*l).min(d);
            } else {
                scratch.visit(w, time);
                scratch.stack.push((w, Some(e), 0));
                if v == root {
                    root_children += 1;
                }
            }
        } else {
            scratch.stack.pop();
            work += 1;
            if let (Some(e), Some(&(p, _, _))) = (parent_edge, scratch.stack.last()) {
                let lv = scratch.low[v.index()];
                let lp = &mut scratch.low[p.index()];
                *lp = (*lp).min(lv);
                let dp = scratch.disc[p.index()];
                if lv > dp {
                    if let Some(out) = bridges.as_deref_mut() {
                        out.push(e);
                    }
                }
                if p != root && lv >= dp {
                    if let Some(out) = cuts.as_deref_mut() {
                        out.push(p);
                    }
                }
            }
        }
    }
    if root_children >= 2 {
        if let Some(out) = cuts {
            out.push(root);
        }
    }
    work
}

/// Bridges of the component containing `root`, with the inspection count.
pub fn bridges_from(g: &Multigraph, root: VertexId, scratch: &mut Scratch) -> (Vec<EdgeId>, u64) {
    scratch.begin(g.vertex_slots());
    let mut time = 0;
    let mut out = Vec::new();
    let work = lowlink(g, root, scratch, &mut time, Some(&mut out), None);
    (out, work)
}

/// All bridges of the live graph: alive edges whose removal increases the
/// number of connected components. Loops and parallel edges never qualify.
pub fn find_bridges(g: &Multigraph) -> BTreeSet<EdgeId> {
    let mut scratch = Scratch::new();
    scratch.begin(g.vertex_slots());
    let mut time = 0;
    let mut out = Vec::new();
    for v in g.alive_vertices() {
        if !scratch.seen(v) {
            lowlink(g, v, &mut scratch, &mut time, Some(&mut out), None);
        }
    }
    out.into_iter().collect()
}

/// Articulation vertices of the live graph.
pub fn find_cut_vertices(g: &Multigraph) -> BTreeSet<VertexId> {
    let mut scratch = Scratch::new();
    scratch.begin(g.vertex_slots());
    let mut time = 0;
    let mut out = Vec::new();
    for v in g.alive_vertices() {
        if !scratch.seen(v) {
            lowlink(g, v, &mut scratch, &mut time, None, Some(&mut out));
        }
    }
    out.into_iter().collect()
}

/// Whether `to` is reachable from `from` without passing through `avoid`.
/// Returns the answer and the number of edge inspections.
pub fn reachable_avoiding(
    g: &Multigraph,
    from: VertexId,
    to: VertexId,
    avoid: VertexId,
    scratch: &mut Scratch,
) -> (bool, u64) {
    scratch.begin(g.vertex_slots());
    let mut work = 0u64;
    let mut time = 0;
    scratch.visit(avoid, &mut time);
    scratch.visit(from, &mut time);
    let mut queue = vec![from];
    while let Some(v) = queue.pop() {
        if v == to {
            return (true, work);
        }
        for &e in g.incident(v) {
            work += 1;
            let w = g.edge(e).other(v);
            if !scratch.seen(w) {
                scratch.visit(w, &mut time);
                queue.push(w);
            }
        }
    }
    (false, work)
}

/// Number of connected components among vertices with at least one edge.
pub fn edge_bearing_components(g: &Multigraph) -> usize {
    let mut scratch = Scratch::new();
    scratch.begin(g.vertex_slots());
    let mut time = 0;
    let mut components = 0;
    let mut queue = Vec::new();
    for v in g.alive_vertices() {
        if g.degree(v) == 0 || scratch.seen(v) {
            continue;
        }
        components += 1;
        scratch.visit(v, &mut time);
        queue.push(v);
        while let Some(x) = queue.pop() {
            for &e in g.incident(x) {
                let w = g.edge(e).other(x);
                if !scratch.seen(w) {
                    scratch.visit(w, &mut time);
                    queue.push(w);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> BTreeSet<EdgeId> {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn triangle_has_no_bridges() {
        let g = Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(find_bridges(&g).is_empty());
        assert!(find_cut_vertices(&g).is_empty());
    }

    #[test]
    fn path_edges_are_bridges() {
        let g = Multigraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(find_bridges(&g), set(&[0, 1]));
        assert_eq!(find_cut_vertices(&g), [VertexId(1)].into_iter().collect());
    }

    #[test]
    fn bowtie_center_is_cut() {
        let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        assert!(find_bridges(&g).is_empty());
        assert_eq!(find_cut_vertices(&g), [VertexId(0)].into_iter().collect());
    }

    #[test]
    fn parallel_and_loop_edges_are_not_bridges() {
        let g = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]);
        assert_eq!(find_bridges(&g), set(&[2]));
    }

    #[test]
    fn reachability_avoiding_a_vertex() {
        let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let mut s = Scratch::new();
        assert!(!reachable_avoiding(&g, VertexId(1), VertexId(3), VertexId(0), &mut s).0);
        assert!(reachable_avoiding(&g, VertexId(1), VertexId(2), VertexId(0), &mut s).0);
    }
}
