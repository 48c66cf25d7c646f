//! Weighted directed graphs and their Laplacians.
//!
//! Node indices are 1-based in every public function; storage is 0-based.
//! An arc `u -> v` with weight `w` means agent `v` listens to agent `u`, so the
//! weight lands in the adjacency matrix at `A[v][u]`.

mod forest;
mod paths;

pub use forest::{
    enumerate_out_forests, for_each_out_forest, forest_set_weight, OutForest,
    DEFAULT_ENUMERATION_CAP,
};
pub use paths::{enumerate_simple_paths, path_weight, Path};

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Matrix;

/// A directed, weighted arc with 1-based endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

impl Arc {
    pub fn new(from: usize, to: usize, weight: f64) -> Self {
        Arc { from, to, weight }
    }

    pub fn unit(from: usize, to: usize) -> Self {
        Arc::new(from, to, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InArc {
    pub source: usize,
    pub weight: f64,
}

/// A validated weighted digraph on nodes `1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    node_count: usize,
    arcs: Vec<Arc>,
    // 0-based, sorted by neighbour index
    in_arcs: Vec<Vec<InArc>>,
    out_nbrs: Vec<Vec<(usize, f64)>>,
}

/// Validate an arc list and build a graph.
pub fn build_graph(node_count: usize, arcs: &[Arc]) -> Result<WeightedDigraph> {
    WeightedDigraph::new(node_count, arcs)
}

impl WeightedDigraph {
    pub fn new(node_count: usize, arcs: &[Arc]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        let mut in_arcs = vec![Vec::new(); node_count];
        let mut out_nbrs = vec![Vec::new(); node_count];
        for arc in arcs {
            for index in [arc.from, arc.to] {
                if index == 0 || index > node_count {
                    return Err(Error::NodeOutOfRange { index, node_count });
                }
            }
            if arc.from == arc.to {
                return Err(Error::SelfArc { node: arc.from });
            }
            if !arc.weight.is_finite() || arc.weight <= 0.0 {
                return Err(Error::NonPositiveWeight {
                    from: arc.from,
                    to: arc.to,
                    weight: arc.weight,
                });
            }
            if !seen.insert((arc.from, arc.to)) {
                return Err(Error::DuplicateArc {
                    from: arc.from,
                    to: arc.to,
                });
            }
            in_arcs[arc.to - 1].push(InArc {
                source: arc.from - 1,
                weight: arc.weight,
            });
            out_nbrs[arc.from - 1].push((arc.to - 1, arc.weight));
        }
        for list in &mut in_arcs {
            list.sort_by_key(|a| a.source);
        }
        for list in &mut out_nbrs {
            list.sort_by_key(|&(t, _)| t);
        }
        Ok(WeightedDigraph {
            node_count,
            arcs: arcs.to_vec(),
            in_arcs,
            out_nbrs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Arcs in insertion order, 1-based.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_weight(&self, from: usize, to: usize) -> Option<f64> {
        self.check_node(from).ok()?;
        self.check_node(to).ok()?;
        self.out_nbrs[from - 1]
            .iter()
            .find(|&&(t, _)| t == to - 1)
            .map(|&(_, w)| w)
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.node_count {
            Err(Error::NodeOutOfRange {
                index: node,
                node_count: self.node_count,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn in_arcs0(&self, v: usize) -> &[InArc] {
        &self.in_arcs[v]
    }

    pub(crate) fn out_nbrs0(&self, v: usize) -> &[(usize, f64)] {
        &self.out_nbrs[v]
    }

    /// Weighted adjacency matrix, `A[v][u]` = weight of arc `u -> v`.
    pub fn adjacency(&self) -> Matrix {
        let n = self.node_count;
        let mut a = Matrix::zeros(n, n);
        for arc in &self.arcs {
            a[(arc.to - 1, arc.from - 1)] = arc.weight;
        }
        a
    }

    /// In-degree weights `deg(v)` = sum of weights of arcs entering `v`.
    pub fn in_degrees(&self) -> Vec<f64> {
        self.in_arcs
            .iter()
            .map(|list| list.iter().map(|a| a.weight).sum())
            .collect()
    }

    /// Hop distances (0-based) from `source0` to every node; `None` if unreachable.
    pub(crate) fn bfs0(&self, source0: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        dist[source0] = Some(0);
        let mut queue = VecDeque::from([source0]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &(v, _) in &self.out_nbrs[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Hop distances from `source` to all nodes, indexed 0-based by target.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_node(source)?;
        Ok(self.bfs0(source - 1))
    }
}

/// Number of source strongly connected components among the nodes with
/// `keep[v]`, using only arcs between kept nodes. `out_adj` is 0-based.
///
/// For a Laplacian this is the multiplicity of its zero eigenvalue: an
/// out-forest needs at least one root per source component.
pub(crate) fn source_component_count(out_adj: &[Vec<usize>], keep: &[bool]) -> usize {
    let n = out_adj.len();
    let mut reach = vec![vec![false; n]; n];
    for s in (0..n).filter(|&s| keep[s]) {
        reach[s][s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &out_adj[u] {
                if keep[v] && !reach[s][v] {
                    reach[s][v] = true;
                    stack.push(v);
                }
            }
        }
    }
    (0..n)
        .filter(|&v| keep[v])
        .filter(|&v| {
            // v is the smallest member of a component no outside node reaches
            let is_rep = (0..v).all(|u| !(keep[u] && reach[u][v] && reach[v][u]));
            let is_source = (0..n).all(|u| !keep[u] || !reach[u][v] || reach[v][u]);
            is_rep && is_source
        })
        .count()
}

impl WeightedDigraph {
    pub(crate) fn out_adjacency0(&self) -> Vec<Vec<usize>> {
        self.out_nbrs
            .iter()
            .map(|l| l.iter().map(|&(t, _)| t).collect())
            .collect()
    }
}

/// Directed Laplacian `L = D - A` with `D` the diagonal of in-degree weights.
pub fn laplacian(g: &WeightedDigraph) -> Matrix {
    let n = g.node_count();
    let mut l = Matrix::zeros(n, n);
    for (v, list) in g.in_arcs.iter().enumerate() {
        let mut deg = 0.0;
        for a in list {
            l[(v, a.source)] = -a.weight;
            deg += a.weight;
        }
        l[(v, v)] = deg;
    }
    l
}

/// Number of arcs on a shortest directed path `from -> to`, ignoring weights.
/// `None` stands for an infinite distance.
pub fn hop_distance(g: &WeightedDigraph, from: usize, to: usize) -> Result<Option<usize>> {
    g.check_node(from)?;
    g.check_node(to)?;
    Ok(g.bfs0(from - 1)[to - 1])
}

/// Principal submatrix of `L` with the listed (1-based) vertices removed.
/// Kept vertices stay in their original relative order.
pub fn reduced_laplacian(g: &WeightedDigraph, removed: &[usize]) -> Result<Matrix> {
    for &v in removed {
        g.check_node(v)?;
    }
    let removed: BTreeSet<usize> = removed.iter().map(|v| v - 1).collect();
    let kept: Vec<usize> = (0..g.node_count())
        .filter(|v| !removed.contains(v))
        .collect();
    if kept.is_empty() {
        return Err(Error::RemovesAllVertices);
    }
    Ok(principal_submatrix(&laplacian(g), &kept))
}

pub(crate) fn principal_submatrix(m: &Matrix, kept0: &[usize]) -> Matrix {
    Matrix::from_fn(kept0.len(), kept0.len(), |i, j| m[(kept0[i], kept0[j])])
}
