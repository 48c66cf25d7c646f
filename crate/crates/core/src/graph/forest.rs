//! Brute-force enumeration of spanning diverging forests (out-forests).
//!
//! This is the combinatorial oracle for the forest series of `sI + L`; it is
//! exponential in the node count and guarded by an explicit cap.

use super::WeightedDigraph;
use crate::error::{Error, Result};

/// Default upper bound on node count for forest enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

/// A spanning out-forest: every vertex has at most one parent, no cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct OutForest {
    // 0-based parent of each vertex, `None` for roots
    parent: Vec<Option<usize>>,
    weight: f64,
}

impl OutForest {
    pub fn arc_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Arcs as 1-based `(from, to)` pairs, ordered by head vertex.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|u| (u + 1, v + 1)))
            .collect()
    }

    /// 1-based roots in increasing order.
    pub fn roots(&self) -> Vec<usize> {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(v, _)| v + 1)
            .collect()
    }

    /// Root of the tree containing `node` (1-based).
    pub fn root_of(&self, node: usize) -> usize {
        let mut v = node - 1;
        while let Some(u) = self.parent[v] {
            v = u;
        }
        v + 1
    }

    /// Whether `root` is a root and its tree contains `node`.
    pub fn tree_contains(&self, root: usize, node: usize) -> bool {
        self.parent[root - 1].is_none() && self.root_of(node) == root
    }
}

fn check_cap(g: &WeightedDigraph, cap: usize) -> Result<()> {
    if g.node_count() > cap {
        Err(Error::EnumerationCap {
            node_count: g.node_count(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Visit every spanning out-forest of `g` exactly once, of any arc count.
pub fn for_each_out_forest<F: FnMut(&OutForest)>(
    g: &WeightedDigraph,
    cap: usize,
    mut visit: F,
) -> Result<()> {
    check_cap(g, cap)?;
    let mut forest = OutForest {
        parent: vec![None; g.node_count()],
        weight: 1.0,
    };
    assign(g, 0, None, 0, &mut forest, &mut visit);
    Ok(())
}

/// Every spanning out-forest with exactly `k` arcs.
pub fn enumerate_out_forests(g: &WeightedDigraph, k: usize, cap: usize) -> Result<Vec<OutForest>> {
    check_cap(g, cap)?;
    let mut out = Vec::new();
    if k >= g.node_count() {
        return Ok(out);
    }
    let mut forest = OutForest {
        parent: vec![None; g.node_count()],
        weight: 1.0,
    };
    assign(g, 0, Some(k), 0, &mut forest, &mut |f: &OutForest| {
        out.push(f.clone())
    });
    Ok(out)
}

/// Total weight of the forests with `k` arcs in which `root` is a root whose
/// tree contains `contains`. Zero when no such forest exists.
pub fn forest_set_weight(
    g: &WeightedDigraph,
    k: usize,
    root: usize,
    contains: usize,
    cap: usize,
) -> Result<f64> {
    g.check_node(root)?;
    g.check_node(contains)?;
    Ok(enumerate_out_forests(g, k, cap)?
        .iter()
        .filter(|f| f.tree_contains(root, contains))
        .map(OutForest::weight)
        .sum())
}

fn assign<F: FnMut(&OutForest)>(
    g: &WeightedDigraph,
    v: usize,
    target: Option<usize>,
    used: usize,
    forest: &mut OutForest,
    visit: &mut F,
) {
    let n = g.node_count();
    if let Some(k) = target {
        // not enough vertices left to reach k arcs, or already too many
        if used > k || used + (n - v) < k {
            return;
        }
    }
    if v == n {
        visit(forest);
        return;
    }
    // v as a root
    assign(g, v + 1, target, used, forest, visit);
    for arc in g.in_arcs0(v) {
        if closes_cycle(&forest.parent, arc.source, v) {
            continue;
        }
        forest.parent[v] = Some(arc.source);
        let saved = forest.weight;
        forest.weight *= arc.weight;
        assign(g, v + 1, target, used + 1, forest, visit);
        forest.weight = saved;
        forest.parent[v] = None;
    }
}

fn closes_cycle(parent: &[Option<usize>], from: usize, v: usize) -> bool {
    let mut u = from;
    loop {
        if u == v {
            return true;
        }
        match parent[u] {
            Some(p) => u = p,
            None => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{build_graph, Arc};
    use super::*;

    #[test]
    fn six_node_forest_set() {
        let g = six_node();
        let forests: Vec<OutForest> = enumerate_out_forests(&g, 3, 9)
            .unwrap()
            .into_iter()
            .filter(|f| f.tree_contains(1, 3))
            .collect();
        assert_eq!(forests.len(), 2);
        let mut weights: Vec<f64> = forests.iter().map(|f| f.weight()).collect();
        weights.sort_by(f64::total_cmp);
        assert!((weights[0] - 0.192).abs() < 1e-12);
        assert!((weights[1] - 0.36).abs() < 1e-12);
        let arcs: Vec<Vec<(usize, usize)>> = forests.iter().map(|f| f.arcs()).collect();
        assert!(arcs.contains(&vec![(1, 2), (2, 3), (3, 6)]));
        assert!(arcs.contains(&vec![(1, 2), (2, 3), (4, 5)]));
        let w = forest_set_weight(&g, 3, 1, 3, 9).unwrap();
        assert!((w - 0.552).abs() < 1e-12);
    }

    #[test]
    fn zero_and_full_arc_counts() {
        let g = six_node();
        let f0 = enumerate_out_forests(&g, 0, 9).unwrap();
        assert_eq!(f0.len(), 1);
        assert_eq!(f0[0].roots(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(f0[0].weight(), 1.0);
        assert!(enumerate_out_forests(&g, 6, 9).unwrap().is_empty());
    }

    #[test]
    fn unreachable_budget_gives_zero() {
        let g = five_node();
        // node 3 is two arcs away from node 1
        assert_eq!(forest_set_weight(&g, 1, 1, 3, 9).unwrap(), 0.0);
        let w = forest_set_weight(&g, 2, 1, 3, 9).unwrap();
        assert!((w - 0.3).abs() < 1e-15);
    }

    #[test]
    fn cap_enforced() {
        let g = six_node();
        assert_eq!(
            enumerate_out_forests(&g, 2, 5).unwrap_err().code(),
            "enumeration-cap"
        );
    }

    #[test]
    fn visitor_matches_per_k_enumeration() {
        let g = five_node();
        let mut by_k = [0usize; 6];
        for_each_out_forest(&g, 9, |f| by_k[f.arc_count()] += 1).unwrap();
        for (k, &count) in by_k.iter().enumerate() {
            assert_eq!(enumerate_out_forests(&g, k, 9).unwrap().len(), count);
        }
        assert_eq!(by_k[5], 0);
    }

    #[test]
    fn spanning_tree_count_of_bidirected_triangle() {
        // every vertex can root 3 spanning trees in K3 with both directions
        let arcs: Vec<Arc> = [(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)]
            .iter()
            .map(|&(u, v)| Arc::unit(u, v))
            .collect();
        let g = build_graph(3, &arcs).unwrap();
        assert_eq!(enumerate_out_forests(&g, 2, 9).unwrap().len(), 9);
    }
}
