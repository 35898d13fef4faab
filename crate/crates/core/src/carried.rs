//! Carried trails: the original-graph subtrail that a contracted edge stands for.
//!
//! Trails form a DAG of `Leaf` and `Concat` nodes so that merging two edges is
//! constant time. Every node also carries two *directed signatures*, one per
//! traversal direction. Signatures are interned over original vertex
//! sequences: two oriented trails get the same signature exactly when they
//! expand to the same sequence of original vertices. Interning uses a
//! concatenation-compatible polynomial hash; a bucket hit is confirmed either
//! by identical join structure (constant time) or, failing that, by a full
//! sequence comparison.
//!
//! The store is append-only with stack-style truncation, matching the
//! backtracking discipline of the search.

use std::collections::HashMap;

use crate::ids::{EdgeId, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrailId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TrailKind {
    Leaf {
        edge: EdgeId,
    },
    /// `left` (oriented) followed by `right` (oriented), sharing the junction vertex.
    Concat {
        left: TrailId,
        left_rev: bool,
        right: TrailId,
        right_rev: bool,
    },
}

#[derive(Copy, Clone, Debug)]
pub struct TrailNode {
    pub kind: TrailKind,
    /// Original vertex the forward orientation starts at.
    pub start: VertexId,
    /// Original vertex the forward orientation ends at.
    pub end: VertexId,
    /// Number of original edges.
    pub len: u32,
    pub sig_fwd: SigId,
    pub sig_rev: SigId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum SigShape {
    Pair(VertexId, VertexId),
    Join(SigId, SigId),
}

#[derive(Copy, Clone, Debug)]
struct SigEntry {
    hash: u64,
    /// BASE^(vertex_len - 1)
    pow: u64,
    vertex_len: u32,
    first: VertexId,
    shape: SigShape,
}

const MOD: u64 = (1 << 61) - 1;
const BASE: u64 = 0x0a3c_59e1_7b2d_4f83 % MOD;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let r = (p & MOD as u128) as u64 + (p >> 61) as u64;
    let r = if r >= MOD { r - MOD } else { r };
    if r >= MOD {
        r - MOD
    } else {
        r
    }
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let r = a + b;
    if r >= MOD {
        r - MOD
    } else {
        r
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MOD - b
    }
}

#[inline]
fn vertex_weight(v: VertexId) -> u64 {
    v.0 as u64 + 1
}

/// Snapshot of the store size for later truncation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StoreMark {
    nodes: usize,
    sigs: usize,
}

#[derive(Clone, Debug, Default)]
pub struct TrailStore {
    nodes: Vec<TrailNode>,
    sigs: Vec<SigEntry>,
    index: HashMap<(u64, u32), Vec<SigId>>,
    full_comparisons: u64,
}

impl TrailStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, t: TrailId) -> &TrailNode {
        &self.nodes[t.0 as usize]
    }

    pub fn len(&self, t: TrailId) -> u32 {
        self.node(t).len
    }

    /// Number of interned signatures that needed a full sequence comparison.
    pub fn full_comparisons(&self) -> u64 {
        self.full_comparisons
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn signature_count(&self) -> usize {
        self.sigs.len()
    }

    /// Original endpoints `(start, end)` of `t` traversed in the given orientation.
    pub fn ends(&self, t: TrailId, rev: bool) -> (VertexId, VertexId) {
        let n = self.node(t);
        if rev {
            (n.end, n.start)
        } else {
            (n.start, n.end)
        }
    }

    pub fn signature(&self, t: TrailId, rev: bool) -> SigId {
        let n = self.node(t);
        if rev {
            n.sig_rev
        } else {
            n.sig_fwd
        }
    }

    pub fn is_palindrome(&self, t: TrailId) -> bool {
        let n = self.node(t);
        n.sig_fwd == n.sig_rev
    }

    pub fn leaf(&mut self, edge: EdgeId, a: VertexId, b: VertexId) -> TrailId {
        let sig_fwd = self.intern_pair(a, b);
        let sig_rev = self.intern_pair(b, a);
        self.push_node(TrailNode {
            kind: TrailKind::Leaf { edge },
            start: a,
            end: b,
            len: 1,
            sig_fwd,
            sig_rev,
        })
    }

    /// Concatenates two oriented trails. The end of `left` must equal the
    /// start of `right`.
    pub fn concat(&mut self, left: (TrailId, bool), right: (TrailId, bool)) -> TrailId {
        let (ls, le) = self.ends(left.0, left.1);
        let (rs, re) = self.ends(right.0, right.1);
        assert_eq!(le, rs, "concatenated trails must share the junction vertex");
        let l_fwd = self.signature(left.0, left.1);
        let r_fwd = self.signature(right.0, right.1);
        let l_rev = self.signature(left.0, !left.1);
        let r_rev = self.signature(right.0, !right.1);
        let sig_fwd = self.intern_join(l_fwd, r_fwd);
        let sig_rev = self.intern_join(r_rev, l_rev);
        let len = self.len(left.0) + self.len(right.0);
        self.push_node(TrailNode {
            kind: TrailKind::Concat {
                left: left.0,
                left_rev: left.1,
                right: right.0,
                right_rev: right.1,
            },
            start: ls,
            end: re,
            len,
            sig_fwd,
            sig_rev,
        })
    }

    fn push_node(&mut self, node: TrailNode) -> TrailId {
        let id = TrailId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    fn intern_pair(&mut self, a: VertexId, b: VertexId) -> SigId {
        let hash = add_mod(mul_mod(vertex_weight(a), BASE), vertex_weight(b));
        let key = (hash, 2);
        if let Some(bucket) = self.index.get(&key) {
            for &id in bucket {
                let e = &self.sigs[id.0 as usize];
                if let SigShape::Pair(x, y) = e.shape {
                    if x == a && y == b {
                        return id;
                    }
                }
            }
        }
        self.insert_sig(
            key,
            SigEntry {
                hash,
                pow: BASE,
                vertex_len: 2,
                first: a,
                shape: SigShape::Pair(a, b),
            },
        )
    }

    fn intern_join(&mut self, x: SigId, y: SigId) -> SigId {
        let ex = self.sigs[x.0 as usize];
        let ey = self.sigs[y.0 as usize];
        let hash = add_mod(
            mul_mod(ex.hash, ey.pow),
            sub_mod(ey.hash, mul_mod(vertex_weight(ey.first), ey.pow)),
        );
        let vertex_len = ex.vertex_len + ey.vertex_len - 1;
        let key = (hash, vertex_len);
        let candidates: Vec<SigId> = match self.index.get(&key) {
            Some(bucket) => bucket.clone(),
            None => Vec::new(),
        };
        for &id in &candidates {
            if self.sigs[id.0 as usize].shape == SigShape::Join(x, y) {
                return id;
            }
        }
        if !candidates.is_empty() {
            let mut probe = self.sig_vertices(x);
            let tail = self.sig_vertices(y);
            probe.extend_from_slice(&tail[1..]);
            for &id in &candidates {
                self.full_comparisons += 1;
                if self.sig_vertices(id) == probe {
                    return id;
                }
            }
        }
        self.insert_sig(
            key,
            SigEntry {
                hash,
                pow: mul_mod(ex.pow, ey.pow),
                vertex_len,
                first: ex.first,
                shape: SigShape::Join(x, y),
            },
        )
    }

    fn insert_sig(&mut self, key: (u64, u32), entry: SigEntry) -> SigId {
        let id = SigId(self.sigs.len() as u32);
        self.sigs.push(entry);
        self.index.entry(key).or_default().push(id);
        id
    }

    /// Original vertex sequence named by a signature.
    pub fn sig_vertices(&self, sig: SigId) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.sigs[sig.0 as usize].vertex_len as usize);
        let mut stack = vec![(sig, true)];
        while let Some((s, include_first)) = stack.pop() {
            match self.sigs[s.0 as usize].shape {
                SigShape::Pair(a, b) => {
                    if include_first {
                        out.push(a);
                    }
                    out.push(b);
                }
                SigShape::Join(l, r) => {
                    stack.push((r, false));
                    stack.push((l, include_first));
                }
            }
        }
        out
    }

    /// Expands an oriented trail into `(original edge, from, to)` steps.
    pub fn expand(&self, t: TrailId, rev: bool, out: &mut Vec<(EdgeId, VertexId, VertexId)>) {
        let mut stack = vec![(t, rev)];
        while let Some((id, r)) = stack.pop() {
            let n = self.node(id);
            match n.kind {
                TrailKind::Leaf { edge } => {
                    if r {
                        out.push((edge, n.end, n.start));
                    } else {
                        out.push((edge, n.start, n.end));
                    }
                }
                TrailKind::Concat {
                    left,
                    left_rev,
                    right,
                    right_rev,
                } => {
                    if r {
                        // reverse(L . R) = reverse(R) . reverse(L)
                        stack.push((left, !left_rev));
                        stack.push((right, !right_rev));
                    } else {
                        stack.push((right, right_rev));
                        stack.push((left, left_rev));
                    }
                }
            }
        }
    }

    pub fn mark(&self) -> StoreMark {
        StoreMark {
            nodes: self.nodes.len(),
            sigs: self.sigs.len(),
        }
    }

    /// Drops every node and signature created after `mark`.
    pub fn truncate(&mut self, mark: StoreMark) {
        self.nodes.truncate(mark.nodes);
        while self.sigs.len() > mark.sigs {
            let entry = self.sigs.pop().expect("non-empty");
            let id = SigId(self.sigs.len() as u32);
            let key = (entry.hash, entry.vertex_len);
            if let Some(bucket) = self.index.get_mut(&key) {
                debug_assert_eq!(bucket.last(), Some(&id));
                bucket.pop();
                if bucket.is_empty() {
                    self.index.remove(&key);
                }
            }
        }
    }

    /// Interns a concatenation of two signatures through an arbitrary split,
    /// bypassing the hash shortcut. Test hook for the collision path.
    #[doc(hidden)]
    pub fn join_signatures(&mut self, x: SigId, y: SigId) -> SigId {
        self.intern_join(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn parallel_leaves_share_signature() {
        let mut s = TrailStore::new();
        let a = s.leaf(EdgeId(0), v(0), v(1));
        let b = s.leaf(EdgeId(1), v(0), v(1));
        assert_eq!(s.signature(a, false), s.signature(b, false));
        assert_ne!(s.signature(a, false), s.signature(a, true));
        let c = s.leaf(EdgeId(2), v(1), v(0));
        assert_eq!(s.signature(a, false), s.signature(c, true));
    }

    #[test]
    fn concat_expands_in_both_directions() {
        let mut s = TrailStore::new();
        let a = s.leaf(EdgeId(0), v(0), v(1));
        let b = s.leaf(EdgeId(1), v(1), v(2));
        let ab = s.concat((a, false), (b, false));
        let mut out = Vec::new();
        s.expand(ab, false, &mut out);
        assert_eq!(out, vec![(EdgeId(0), v(0), v(1)), (EdgeId(1), v(1), v(2))]);
        out.clear();
        s.expand(ab, true, &mut out);
        assert_eq!(out, vec![(EdgeId(1), v(2), v(1)), (EdgeId(0), v(1), v(0))]);
        assert_eq!(s.sig_vertices(s.signature(ab, true)), vec![v(2), v(1), v(0)]);
        assert_eq!(s.len(ab), 2);
    }

    #[test]
    fn palindromic_loop_has_one_signature() {
        let mut s = TrailStore::new();
        let a = s.leaf(EdgeId(0), v(0), v(5));
        let b = s.leaf(EdgeId(1), v(5), v(0));
        let lp = s.concat((a, false), (b, false));
        assert!(s.is_palindrome(lp));
        let c = s.leaf(EdgeId(2), v(5), v(6));
        let d = s.leaf(EdgeId(3), v(6), v(0));
        let ac = s.concat((a, false), (c, false));
        let acd = s.concat((ac, false), (d, false));
        assert!(!s.is_palindrome(acd));
    }

    #[test]
    fn reassociated_concat_is_recognised() {
        let mut s = TrailStore::new();
        let a = s.leaf(EdgeId(0), v(0), v(1));
        let b = s.leaf(EdgeId(1), v(1), v(2));
        let c = s.leaf(EdgeId(2), v(2), v(3));
        let ab = s.concat((a, false), (b, false));
        let left = s.concat((ab, false), (c, false));
        let bc = s.concat((b, false), (c, false));
        let right = s.concat((a, false), (bc, false));
        assert_eq!(s.signature(left, false), s.signature(right, false));
        assert_eq!(s.signature(left, true), s.signature(right, true));
        assert!(s.full_comparisons() > 0);
    }

    #[test]
    fn truncate_forgets_new_signatures() {
        let mut s = TrailStore::new();
        let a = s.leaf(EdgeId(0), v(0), v(1));
        let b = s.leaf(EdgeId(1), v(1), v(2));
        let mark = s.mark();
        let sigs = s.signature_count();
        let ab = s.concat((a, false), (b, false));
        let sig = s.signature(ab, false);
        s.truncate(mark);
        assert_eq!(s.signature_count(), sigs);
        let ab2 = s.concat((a, false), (b, false));
        assert_eq!(s.signature(ab2, false), sig);
    }
}
