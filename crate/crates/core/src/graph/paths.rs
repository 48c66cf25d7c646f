use super::WeightedDigraph;
use crate::error::{Error, Result};

/// A simple directed path, stored as its 1-based vertex sequence.
///
/// Arcs are the consecutive vertex pairs; a single vertex is a zero-length path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// All simple directed paths `from -> to` in lexicographic vertex order.
///
/// Fails with [`Error::PathCapExceeded`] rather than truncating when more than
/// `max_count` paths exist.
pub fn enumerate_simple_paths(
    g: &WeightedDigraph,
    from: usize,
    to: usize,
    max_count: usize,
) -> Result<Vec<Path>> {
    g.check_node(from)?;
    g.check_node(to)?;
    let mut out = Vec::new();
    if from == to {
        if max_count == 0 {
            return Err(Error::PathCapExceeded { cap: max_count });
        }
        out.push(Path {
            vertices: vec![from],
        });
        return Ok(out);
    }
    let mut on_path = vec![false; g.node_count()];
    let mut stack = vec![from - 1];
    on_path[from - 1] = true;
    dfs(g, to - 1, &mut stack, &mut on_path, &mut out, max_count)?;
    Ok(out)
}

fn dfs(
    g: &WeightedDigraph,
    target: usize,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Path>,
    cap: usize,
) -> Result<()> {
    let u = *stack.last().expect("non-empty stack");
    for &(v, _) in g.out_nbrs0(u) {
        if on_path[v] {
            continue;
        }
        stack.push(v);
        if v == target {
            if out.len() == cap {
                return Err(Error::PathCapExceeded { cap });
            }
            out.push(Path {
                vertices: stack.iter().map(|x| x + 1).collect(),
            });
        } else {
            on_path[v] = true;
            dfs(g, target, stack, on_path, out, cap)?;
            on_path[v] = false;
        }
        stack.pop();
    }
    Ok(())
}

/// Product of the arc weights along `path`; 1 for a zero-length path.
///
/// # Panics
/// If the path uses an arc that is not in `g`.
pub fn path_weight(g: &WeightedDigraph, path: &Path) -> f64 {
    path.arcs()
        .map(|(u, v)| {
            g.arc_weight(u, v)
                .unwrap_or_else(|| panic!("arc {u}->{v} not in graph"))
        })
        .product()
}
