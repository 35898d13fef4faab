//! Dynamic undirected multigraph with loops, parallel edges and a reversible
//! mutation journal.
//!
//! Every alive edge sits in the incidence list of both endpoints (a loop sits
//! there once). Removal is a swap-remove that records the slot positions, so
//! undo restores incidence order exactly. Ids are allocated stack-wise: rolling
//! back an edge or vertex addition frees the id for the next addition.

use std::collections::HashMap;

use thiserror::Error;

use crate::carried::{SigId, StoreMark, TrailId, TrailStore};
use crate::ids::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0} is not alive")]
    EdgeNotAlive(EdgeId),
    #[error("vertex {0} is not alive")]
    VertexNotAlive(VertexId),
    #[error("vertex {0} still has incident edges")]
    VertexNotIsolated(VertexId),
}

#[derive(Clone, Debug)]
pub struct EdgeSlot {
    pub a: VertexId,
    pub b: VertexId,
    /// Carried trail, oriented from `a` to `b`.
    pub trail: TrailId,
    pub alive: bool,
    pos_a: u32,
    pos_b: u32,
}

impl EdgeSlot {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    /// The endpoint opposite to `v`. For a loop this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            debug_assert_eq!(self.b, v);
            self.a
        }
    }
}

#[derive(Clone, Debug)]
struct VertexSlot {
    alive: bool,
    orig: VertexId,
    incidence: Vec<EdgeId>,
    degree: u32,
    loops: u32,
    neighbors: HashMap<VertexId, u32>,
}

impl VertexSlot {
    fn new(orig: VertexId) -> Self {
        VertexSlot {
            alive: true,
            orig,
            incidence: Vec::new(),
            degree: 0,
            loops: 0,
            neighbors: HashMap::new(),
        }
    }
}

#[derive(Clone, Debug)]
enum Mutation {
    EdgeRemoved(EdgeId),
    EdgeAdded(EdgeId),
    VertexAdded(VertexId),
    VertexRemoved(VertexId),
    TrailsCreated(StoreMark),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JournalMark(usize);

/// Alive-set, degree and multiplicity tables in canonical order; two graphs
/// with equal snapshots are indistinguishable to the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub edges: Vec<(EdgeId, VertexId, VertexId)>,
    pub vertices: Vec<(VertexId, u32, u32)>,
    pub multiplicities: Vec<(VertexId, VertexId, u32)>,
    pub incidence: Vec<Vec<EdgeId>>,
}

#[derive(Clone, Debug)]
pub struct Multigraph {
    vertices: Vec<VertexSlot>,
    edges: Vec<EdgeSlot>,
    live_edges: usize,
    original_vertices: usize,
    original_edges: usize,
    pair_sigs: HashMap<(VertexId, VertexId, SigId), u32>,
    pair_distinct: HashMap<(VertexId, VertexId), u32>,
    trails: TrailStore,
    journal: Vec<Mutation>,
}

impl Multigraph {
    /// Builds a graph on `n` vertices; edge `i` gets id `i`.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Multigraph {
            vertices: (0..n as u32).map(|v| VertexSlot::new(VertexId(v))).collect(),
            edges: Vec::with_capacity(edges.len()),
            live_edges: 0,
            original_vertices: n,
            original_edges: edges.len(),
            pair_sigs: HashMap::new(),
            pair_distinct: HashMap::new(),
            trails: TrailStore::new(),
            journal: Vec::new(),
        };
        for (i, &(u, v)) in edges.iter().enumerate() {
            assert!((u as usize) < n && (v as usize) < n, "endpoint out of range");
            let (u, v) = (VertexId(u), VertexId(v));
            let trail = g.trails.leaf(EdgeId(i as u32), u, v);
            g.insert_edge(u, v, trail);
        }
        g.journal.clear();
        g
    }

    pub fn original_vertex_count(&self) -> usize {
        self.original_vertices
    }

    pub fn original_edge_count(&self) -> usize {
        self.original_edges
    }

    /// Size of the vertex table, including removed and contraction-created slots.
    pub fn vertex_slots(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn trails(&self) -> &TrailStore {
        &self.trails
    }

    pub fn is_vertex_alive(&self, v: VertexId) -> bool {
        self.vertices.get(v.index()).is_some_and(|s| s.alive)
    }

    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.edges.get(e.index()).is_some_and(|s| s.alive)
    }

    /// Edge table entry; dead edges keep their endpoints and carried trail.
    pub fn edge(&self, e: EdgeId) -> &EdgeSlot {
        &self.edges[e.index()]
    }

    pub fn try_edge(&self, e: EdgeId) -> Option<&EdgeSlot> {
        self.edges.get(e.index())
    }

    /// Original vertex a (possibly contraction-created) vertex stands for.
    pub fn orig(&self, v: VertexId) -> VertexId {
        self.vertices[v.index()].orig
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.vertices[v.index()].degree
    }

    pub fn loop_count(&self, v: VertexId) -> u32 {
        self.vertices[v.index()].loops
    }

    /// μ_v(u): parallel edges between `v` and `u`; for `u == v` the number of loops.
    pub fn multiplicity(&self, v: VertexId, u: VertexId) -> u32 {
        if u == v {
            return self.loop_count(v);
        }
        self.vertices[v.index()].neighbors.get(&u).copied().unwrap_or(0)
    }

    /// Number of distinct non-loop neighbors.
    pub fn neighbor_count(&self, v: VertexId) -> usize {
        self.vertices[v.index()].neighbors.len()
    }

    /// Distinct non-loop neighbors with multiplicities, ascending by vertex id.
    pub fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let mut out: Vec<_> = self.vertices[v.index()]
            .neighbors
            .iter()
            .map(|(&u, &m)| (u, m))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.vertices[v.index()].incidence
    }

    /// Incident edges in ascending id order.
    pub fn incident_sorted(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out = self.incident(v).to_vec();
        out.sort_unstable();
        out
    }

    /// Alive edges between `u` and `v` (loops when `u == v`), ascending.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .incident(u)
            .iter()
            .copied()
            .filter(|&e| {
                let s = &self.edges[e.index()];
                if u == v {
                    s.is_loop()
                } else {
                    !s.is_loop() && s.other(u) == v
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Directed signature of `e` traversed starting from endpoint `from`.
    /// For loops `reversed` selects the orientation; otherwise it is ignored.
    pub fn directed_signature(&self, e: EdgeId, from: VertexId, reversed: bool) -> SigId {
        let s = &self.edges[e.index()];
        let rev = if s.is_loop() { reversed } else { s.a != from };
        self.trails.signature(s.trail, rev)
    }

    /// Original `(edge, from, to)` steps carried by `e`, traversed starting
    /// from endpoint `from`. For loops `reversed` selects the orientation.
    pub fn expand_edge(&self, e: EdgeId, from: VertexId, reversed: bool) -> Vec<(EdgeId, VertexId, VertexId)> {
        let s = &self.edges[e.index()];
        let rev = if s.is_loop() { reversed } else { s.a != from };
        let mut out = Vec::with_capacity(self.trails.len(s.trail) as usize);
        self.trails.expand(s.trail, rev, &mut out);
        out
    }

    /// Number of distinct directed signatures among the `u`–`v` parallel edges.
    pub fn distinct_signatures(&self, u: VertexId, v: VertexId) -> u32 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.pair_distinct.get(&key).copied().unwrap_or(0)
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| EdgeId(i as u32))
    }

    // ---- journaled mutation -------------------------------------------------

    pub fn checkpoint(&self) -> JournalMark {
        JournalMark(self.journal.len())
    }

    pub fn journal_len(&self) -> usize {
        self.journal.len()
    }

    /// Undoes every mutation recorded after `mark`.
    pub fn rollback(&mut self, mark: JournalMark) {
        while self.journal.len() > mark.0 {
            match self.journal.pop().expect("non-empty") {
                Mutation::EdgeRemoved(e) => self.restore_edge(e),
                Mutation::EdgeAdded(e) => self.drop_last_edge(e),
                Mutation::VertexAdded(v) => {
                    let slot = self.vertices.pop().expect("vertex added");
                    debug_assert_eq!(v.index(), self.vertices.len());
                    debug_assert!(slot.incidence.is_empty());
                }
                Mutation::VertexRemoved(v) => self.vertices[v.index()].alive = true,
                Mutation::TrailsCreated(mark) => self.trails.truncate(mark),
            }
        }
    }

    pub fn concat(&mut self, left: (TrailId, bool), right: (TrailId, bool)) -> TrailId {
        let mark = self.trails.mark();
        let t = self.trails.concat(left, right);
        self.journal.push(Mutation::TrailsCreated(mark));
        t
    }

    pub fn add_vertex(&mut self, orig: VertexId) -> VertexId {
        let v = VertexId(self.vertices.len() as u32);
        self.vertices.push(VertexSlot::new(orig));
        self.journal.push(Mutation::VertexAdded(v));
        v
    }

    /// Removes an isolated vertex.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let slot = self
            .vertices
            .get_mut(v.index())
            .filter(|s| s.alive)
            .ok_or(GraphError::VertexNotAlive(v))?;
        if !slot.incidence.is_empty() {
            return Err(GraphError::VertexNotIsolated(v));
        }
        slot.alive = false;
        self.journal.push(Mutation::VertexRemoved(v));
        Ok(())
    }

    /// Adds an edge whose carried trail is oriented from `a` to `b`.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId, trail: TrailId) -> Result<EdgeId, GraphError> {
        for v in [a, b] {
            if !self.is_vertex_alive(v) {
                return Err(GraphError::VertexNotAlive(v));
            }
        }
        let e = self.insert_edge(a, b, trail);
        self.journal.push(Mutation::EdgeAdded(e));
        Ok(e)
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        if !self.is_edge_alive(e) {
            return Err(GraphError::EdgeNotAlive(e));
        }
        let (a, b) = (self.edges[e.index()].a, self.edges[e.index()].b);
        let pos_a = self.edges[e.index()].pos_a as usize;
        self.detach(a, pos_a);
        if a != b {
            let pos_b = self.edges[e.index()].pos_b as usize;
            self.detach(b, pos_b);
        }
        self.edges[e.index()].alive = false;
        self.live_edges -= 1;
        self.account(e, false);
        self.journal.push(Mutation::EdgeRemoved(e));
        Ok(())
    }

    fn insert_edge(&mut self, a: VertexId, b: VertexId, trail: TrailId) -> EdgeId {
        let e = EdgeId(self.edges.len() as u32);
        let pos_a = self.vertices[a.index()].incidence.len() as u32;
        self.vertices[a.index()].incidence.push(e);
        let pos_b = if a == b {
            pos_a
        } else {
            let p = self.vertices[b.index()].incidence.len() as u32;
            self.vertices[b.index()].incidence.push(e);
            p
        };
        self.edges.push(EdgeSlot {
            a,
            b,
            trail,
            alive: true,
            pos_a,
            pos_b,
        });
        self.live_edges += 1;
        self.account(e, true);
        e
    }

    fn drop_last_edge(&mut self, e: EdgeId) {
        debug_assert_eq!(e.index() + 1, self.edges.len());
        let (a, b) = (self.edges[e.index()].a, self.edges[e.index()].b);
        if self.edges[e.index()].alive {
            let popped = self.vertices[a.index()].incidence.pop();
            debug_assert_eq!(popped, Some(e));
            if a != b {
                let popped = self.vertices[b.index()].incidence.pop();
                debug_assert_eq!(popped, Some(e));
            }
            self.live_edges -= 1;
            self.account(e, false);
        }
        self.edges.pop();
    }

    fn restore_edge(&mut self, e: EdgeId) {
        let (a, b) = (self.edges[e.index()].a, self.edges[e.index()].b);
        if a != b {
            let pos_b = self.edges[e.index()].pos_b as usize;
            self.reattach(b, e, pos_b);
        }
        let pos_a = self.edges[e.index()].pos_a as usize;
        self.reattach(a, e, pos_a);
        self.edges[e.index()].alive = true;
        self.live_edges += 1;
        self.account(e, true);
    }

    fn detach(&mut self, v: VertexId, pos: usize) {
        let list = &mut self.vertices[v.index()].incidence;
        list.swap_remove(pos);
        if pos < list.len() {
            let moved = list[pos];
            self.set_pos(moved, v, pos);
        }
    }

    fn reattach(&mut self, v: VertexId, e: EdgeId, pos: usize) {
        let list = &mut self.vertices[v.index()].incidence;
        list.push(e);
        let last = list.len() - 1;
        if pos != last {
            list.swap(pos, last);
            let moved = list[last];
            self.set_pos(moved, v, last);
        }
    }

    fn set_pos(&mut self, e: EdgeId, v: VertexId, pos: usize) {
        let s = &mut self.edges[e.index()];
        if s.a == v {
            s.pos_a = pos as u32;
        }
        if s.b == v {
            s.pos_b = pos as u32;
        }
    }

    /// Degree, multiplicity and signature bookkeeping for adding (`add`) or
    /// removing an edge.
    fn account(&mut self, e: EdgeId, add: bool) {
        let s = &self.edges[e.index()];
        let (a, b, trail) = (s.a, s.b, s.trail);
        if a == b {
            let slot = &mut self.vertices[a.index()];
            if add {
                slot.degree += 2;
                slot.loops += 1;
            } else {
                slot.degree -= 2;
                slot.loops -= 1;
            }
            return;
        }
        for (x, y) in [(a, b), (b, a)] {
            let slot = &mut self.vertices[x.index()];
            if add {
                slot.degree += 1;
                *slot.neighbors.entry(y).or_insert(0) += 1;
            } else {
                slot.degree -= 1;
                let m = slot.neighbors.get_mut(&y).expect("neighbor present");
                *m -= 1;
                if *m == 0 {
                    slot.neighbors.remove(&y);
                }
            }
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let sig = self.trails.signature(trail, a != lo);
        let count = self.pair_sigs.entry((lo, hi, sig)).or_insert(0);
        if add {
            *count += 1;
            if *count == 1 {
                *self.pair_distinct.entry((lo, hi)).or_insert(0) += 1;
            }
        } else {
            *count -= 1;
            if *count == 0 {
                self.pair_sigs.remove(&(lo, hi, sig));
                let d = self.pair_distinct.get_mut(&(lo, hi)).expect("pair present");
                *d -= 1;
                if *d == 0 {
                    self.pair_distinct.remove(&(lo, hi));
                }
            }
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        let edges = self
            .alive_edges()
            .map(|e| (e, self.edges[e.index()].a, self.edges[e.index()].b))
            .collect();
        let vertices = self
            .alive_vertices()
            .map(|v| (v, self.degree(v), self.loop_count(v)))
            .collect();
        let mut multiplicities = Vec::new();
        for v in self.alive_vertices() {
            for (u, m) in self.neighbors(v) {
                multiplicities.push((v, u, m));
            }
        }
        let incidence = self.vertices.iter().map(|s| s.incidence.clone()).collect();
        Snapshot {
            edges,
            vertices,
            multiplicities,
            incidence,
        }
    }

    /// Checks the degree identity, neighbor symmetry and incidence membership.
    /// Intended for tests; linear in the size of the graph.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut live = 0;
        for e in self.alive_edges() {
            live += 1;
            let s = &self.edges[e.index()];
            for v in [s.a, s.b] {
                if !self.is_vertex_alive(v) {
                    return Err(format!("edge {e} touches dead vertex {v}"));
                }
                let count = self.incident(v).iter().filter(|&&x| x == e).count();
                if count != 1 {
                    return Err(format!("edge {e} appears {count} times at {v}"));
                }
            }
        }
        if live != self.live_edges {
            return Err(format!("live edge count {} != {}", self.live_edges, live));
        }
        for v in self.alive_vertices() {
            let sum: u32 = self.neighbors(v).iter().map(|&(_, m)| m).sum();
            if self.degree(v) != sum + 2 * self.loop_count(v) {
                return Err(format!("degree identity fails at {v}"));
            }
            for (u, m) in self.neighbors(v) {
                if self.multiplicity(u, v) != m {
                    return Err(format!("multiplicity asymmetry between {v} and {u}"));
                }
            }
        }
        Ok(())
    }
}
