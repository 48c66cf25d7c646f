use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{laplacian, WeightedDigraph};
use crate::spectral::{matrix_rank, DEFAULT_RANK_TOL};
use crate::Matrix;

/// Controllable-subspace bound from agent `c` against the numerical rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllabilityReport {
    /// `max_i d_ci + 1` over the nodes reachable from `c`.
    pub bound: usize,
    pub actual_rank: usize,
    pub rows: usize,
    pub cols: usize,
    /// Nodes `c` cannot reach (1-based). The bound says nothing about them.
    pub unreachable: Vec<usize>,
}

impl ControllabilityReport {
    pub fn bound_holds(&self) -> bool {
        self.actual_rank >= self.bound
    }
}

/// `[e_c, L e_c, ..., L^N e_c]`.
pub fn controllability_matrix(g: &WeightedDigraph, c: usize) -> Result<Matrix> {
    g.check_node(c)?;
    let n = g.node_count();
    let l = laplacian(g);
    let mut m = Matrix::zeros(n, n + 1);
    let mut col = nalgebra::DVector::zeros(n);
    col[c - 1] = 1.0;
    for k in 0..=n {
        m.set_column(k, &col);
        col = &l * col;
    }
    Ok(m)
}

/// Rank is taken after scaling each nonzero column to unit length, so that
/// growing powers of `L` do not swamp the early columns.
pub fn controllability_report(g: &WeightedDigraph, c: usize) -> Result<ControllabilityReport> {
    let mut m = controllability_matrix(g, c)?;
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    let dist = g.distances_from(c)?;
    let bound = dist.iter().flatten().max().map_or(1, |d| d + 1);
    let unreachable = (1..=g.node_count())
        .filter(|&v| dist[v - 1].is_none())
        .collect();
    Ok(ControllabilityReport {
        bound,
        actual_rank: matrix_rank(&m, DEFAULT_RANK_TOL),
        rows: m.nrows(),
        cols: m.ncols(),
        unreachable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{build_graph, Arc};

    #[test]
    fn worked_example() {
        let r = controllability_report(&five_node(), 1).unwrap();
        assert_eq!((r.bound, r.actual_rank), (5, 5));
        assert_eq!((r.rows, r.cols), (5, 6));
        assert!(r.unreachable.is_empty());
    }

    #[test]
    fn star_and_path() {
        let star: Vec<Arc> = (2..=5)
            .flat_map(|v| [Arc::unit(1, v), Arc::unit(v, 1)])
            .collect();
        let r = controllability_report(&build_graph(5, &star).unwrap(), 1).unwrap();
        assert_eq!(r.bound, 2);
        assert!(r.bound_holds());
        let path: Vec<Arc> = (1..6)
            .flat_map(|v| [Arc::unit(v, v + 1), Arc::unit(v + 1, v)])
            .collect();
        let r = controllability_report(&build_graph(6, &path).unwrap(), 1).unwrap();
        assert_eq!((r.bound, r.actual_rank), (6, 6));
    }

    #[test]
    fn unreachable_nodes_are_listed() {
        let r = controllability_report(&six_node(), 1).unwrap();
        assert_eq!(r.unreachable, vec![4, 5]);
        assert_eq!(r.bound, 4);
        assert!(r.bound_holds());
        let lone = controllability_report(&six_node(), 6).unwrap();
        assert_eq!((lone.bound, lone.actual_rank), (1, 1));
    }

    #[test]
    fn matrix_columns() {
        let m = controllability_matrix(&five_node(), 1).unwrap();
        assert_eq!(m.column(0).as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.column(1).as_slice(), &[1.0, -1.0, 0.0, 0.0, 0.0]);
    }
}
