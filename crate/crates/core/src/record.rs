//! Contraction records (ξ) and trail steps.
//!
//! Every record is self-describing given the current graph: replaying it
//! against the same graph state reproduces the same mutation, including the
//! ids of any created edges and vertices. Conventions that make this work:
//!
//! * `R1 { v, e }`: `e` is the only way forward at `v`. If `v` is the current
//!   trail end the trail advances along `e`; otherwise `v` is the terminal,
//!   `e` becomes the final edge of every solution and the terminal moves to
//!   the far endpoint. `v` is removed once isolated.
//! * `R2 { v, e1, e2, new }`: `e1` and `e2` meet at `v`; both are replaced by
//!   `new`, carrying `e1` into `v` followed by `e2` out of `v`. A loop in
//!   either position is taken in its stored orientation. `v` is removed once
//!   isolated.
//! * `R3 { v, vp, moved }`: of the `v`–`w` parallel edges, all but the
//!   smallest id are removed in ascending order and re-added in the same order
//!   between the fresh vertex `vp` and `w`.
//! * `R4 { v, u, loops, odd }`: the `v`–`u` edges in ascending order; when
//!   `odd` the first is kept. The rest are removed, then paired consecutively
//!   into `loops` loops at `u`, each carrying `u → v → u`.
//! * `Mb { v, variant }`: with neighbors `u < w` and parallel pairs `a1 < a2`
//!   (to `u`), `b1 < b2` (to `w`), all four are removed. Variant 1 adds
//!   `u–w` edges carrying `a1·b1` and `a2·b2`; variant 2 adds loops carrying
//!   `a1·a2` at `u` and `b1·b2` at `w`. `v` is removed.

use crate::ids::{EdgeId, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleRecord {
    R1 {
        v: VertexId,
        e: EdgeId,
    },
    R2 {
        v: VertexId,
        e1: EdgeId,
        e2: EdgeId,
        new: EdgeId,
    },
    R3 {
        v: VertexId,
        vp: VertexId,
        moved: u32,
    },
    R4 {
        v: VertexId,
        u: VertexId,
        loops: u32,
        odd: bool,
    },
    Mb {
        v: VertexId,
        variant: u8,
    },
}

impl RuleRecord {
    pub fn tag(&self) -> RuleTag {
        match self {
            RuleRecord::R1 { .. } => RuleTag::R1,
            RuleRecord::R2 { .. } => RuleTag::R2,
            RuleRecord::R3 { .. } => RuleTag::R3,
            RuleRecord::R4 { .. } => RuleTag::R4,
            RuleRecord::Mb { .. } => RuleTag::Mb,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    R1,
    R2,
    R3,
    R4,
    Mb,
}

impl RuleTag {
    pub const ALL: [RuleTag; 5] = [RuleTag::R1, RuleTag::R2, RuleTag::R3, RuleTag::R4, RuleTag::Mb];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// One edge of the partial trail. `reversed` only matters for loops, where it
/// selects traversal against the stored orientation of the carried trail.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Self {
        Step { edge, reversed: false }
    }
}

/// ξ: the records applied after one trail extension.
pub type Frame = Vec<RuleRecord>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffEvent {
    Push(Step, Frame),
    Pop(Step, Frame),
    Solution,
}
