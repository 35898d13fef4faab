//! Checks the push-out amortization condition on a recorded family tree:
//! `T̄(P) ≥ α·T(P) − β·(|ch(P)| + 1)·T*` at every complete internal node,
//! where `T̄(P)` sums the children's costs and `T*` is the largest leaf cost.

use serde::Serialize;

use crate::search::NodeStat;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushOutReport {
    pub alpha: f64,
    pub beta: f64,
    pub holds: bool,
    pub t_star: u64,
    pub internal_nodes: usize,
    pub violations: usize,
    /// Node demanding the largest β, if any internal node exists.
    pub worst_node: Option<u32>,
    /// Smallest β ≥ 0 for which the condition holds with the given α.
    pub minimal_beta: f64,
    /// Smallest feasible β for α = 2.
    pub minimal_beta_alpha2: f64,
}

fn child_sums(tree: &[NodeStat]) -> Vec<u64> {
    let mut sums = vec![0u64; tree.len()];
    for node in tree {
        if let Some(p) = node.parent {
            sums[p as usize] += node.work;
        }
    }
    sums
}

fn leaf_cost(tree: &[NodeStat]) -> u64 {
    tree.iter()
        .filter(|n| n.children == 0 && n.complete)
        .map(|n| n.work)
        .max()
        .unwrap_or(0)
        .max(1)
}

/// β needed at each complete internal node, with the node index.
fn demands(tree: &[NodeStat], alpha: f64) -> impl Iterator<Item = (u32, f64)> + '_ {
    let sums = child_sums(tree);
    let t_star = leaf_cost(tree) as f64;
    tree.iter().enumerate().filter_map(move |(i, n)| {
        if n.children == 0 || !n.complete {
            return None;
        }
        let need = (alpha * n.work as f64 - sums[i] as f64) / ((n.children as f64 + 1.0) * t_star);
        Some((i as u32, need.max(0.0)))
    })
}

pub fn minimal_beta(tree: &[NodeStat], alpha: f64) -> f64 {
    demands(tree, alpha).map(|(_, b)| b).fold(0.0, f64::max)
}

pub fn verify_push_out(tree: &[NodeStat], alpha: f64, beta: f64) -> PushOutReport {
    let mut internal = 0;
    let mut violations = 0;
    let mut worst: Option<(u32, f64)> = None;
    for (i, need) in demands(tree, alpha) {
        internal += 1;
        if need > beta {
            violations += 1;
        }
        if worst.is_none_or(|(_, w)| need > w) {
            worst = Some((i, need));
        }
    }
    PushOutReport {
        alpha,
        beta,
        holds: violations == 0,
        t_star: leaf_cost(tree),
        internal_nodes: internal,
        violations,
        worst_node: worst.map(|(i, _)| i),
        minimal_beta: worst.map_or(0.0, |(_, w)| w),
        minimal_beta_alpha2: minimal_beta(tree, 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(parent: Option<u32>, work: u64, children: u32) -> NodeStat {
        NodeStat {
            parent,
            work,
            children,
            live_edges: 0,
            complete: true,
        }
    }

    #[test]
    fn balanced_tree_needs_little() {
        let tree = vec![node(None, 4, 2), node(Some(0), 4, 0), node(Some(0), 4, 0)];
        let r = verify_push_out(&tree, 2.0, 0.0);
        assert!(r.holds);
        assert_eq!(r.internal_nodes, 1);
        assert_eq!(r.t_star, 4);
    }

    #[test]
    fn leaves_are_excluded() {
        let tree = vec![node(None, 100, 0)];
        let r = verify_push_out(&tree, 2.0, 0.0);
        assert!(r.holds);
        assert_eq!(r.internal_nodes, 0);
    }

    #[test]
    fn unary_chain_violates_small_beta() {
        // Each node costs 10 and has a single child costing 10; the leaf costs 1.
        let mut tree = vec![node(None, 10, 1)];
        for i in 1..20u32 {
            tree.push(node(Some(i - 1), 10, 1));
        }
        tree.push(node(Some(19), 1, 0));
        let threshold = minimal_beta(&tree, 2.0);
        // (2·10 − 10) / (2·1) = 5 along the chain, (2·10 − 1) / 2 = 9.5 above the leaf.
        assert_eq!(threshold, 9.5);
        let r = verify_push_out(&tree, 2.0, 5.0);
        assert!(!r.holds);
        assert_eq!(r.violations, 1);
        assert_eq!(r.worst_node, Some(19));
        assert!(verify_push_out(&tree, 2.0, 9.5).holds);
    }
}
