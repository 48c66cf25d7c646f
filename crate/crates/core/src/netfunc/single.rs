use crate::error::{Error, Result};
use crate::graph::{laplacian, source_component_count, WeightedDigraph};
use crate::poly::{poly_roots, ComplexMultiset, Polynomial, DEFAULT_ROOT_TOL};
use crate::spectral::{faddeev_leverrier, zero_eigenvalue_multiplicity};

use super::AgentModel;

/// Transfer function `h(s) / g(s)` of the single-integrator network
/// `x' = -L x + e_c u`, `y = x_o`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleIntegratorTF {
    /// `h(s)`, the `(o, c)` cofactor of `sI + L`.
    pub numerator: Polynomial,
    /// `g(s) = det(sI + L)`.
    pub denominator: Polynomial,
    /// Hop distance `c -> o`, `None` when `o` is unreachable.
    pub distance: Option<usize>,
    /// Total weight of the shortest `c -> o` paths; 0 when unreachable.
    pub theta: f64,
}

impl SingleIntegratorTF {
    /// `h / theta`, the monic numerator. `None` when `h` is zero.
    pub fn monic_numerator(&self) -> Option<Polynomial> {
        (self.theta != 0.0).then(|| self.numerator.scale(1.0 / self.theta))
    }

    /// Zero gains: negated roots of `h`.
    pub fn zero_gains(&self) -> Result<ComplexMultiset> {
        Ok(poly_roots(&self.numerator, DEFAULT_ROOT_TOL)?.negated())
    }

    /// Eigenvalues of `L`: negated roots of `g`.
    pub fn eigenvalues(&self) -> ComplexMultiset {
        poly_roots(&self.denominator, DEFAULT_ROOT_TOL)
            .expect("g is monic")
            .negated()
    }
}

/// Sum of the weights of all shortest `from -> to` paths, by dynamic
/// programming over breadth-first layers. Zero when unreachable.
pub fn shortest_path_weight(g: &WeightedDigraph, from: usize, to: usize) -> Result<f64> {
    let dist = g.distances_from(from)?;
    g.check_node(to)?;
    let Some(target) = dist[to - 1] else {
        return Ok(0.0);
    };
    let n = g.node_count();
    let mut order: Vec<usize> = (0..n)
        .filter(|&v| dist[v].is_some_and(|d| d <= target))
        .collect();
    order.sort_by_key(|&v| dist[v]);
    let mut weight = vec![0.0; n];
    weight[from - 1] = 1.0;
    for &v in &order {
        let dv = dist[v].unwrap_or(0);
        if dv == 0 {
            continue;
        }
        weight[v] = g
            .in_arcs0(v)
            .iter()
            .filter(|a| dist[a.source] == Some(dv - 1))
            .map(|a| weight[a.source] * a.weight)
            .sum();
    }
    Ok(weight[to - 1])
}

/// Single-integrator transfer function from agent `c` to agent `o`.
///
/// `h_i = (Q_{N-i-1})_{o,c}` from the forest series. Coefficients that vanish
/// combinatorially are set to exactly zero: those above `N - d - 1`, and
/// those below the number of extra trees any forest rooted at `c` needs to
/// cover the nodes `c` cannot reach.
pub fn single_integrator_tf(g: &WeightedDigraph, c: usize, o: usize) -> Result<SingleIntegratorTF> {
    g.check_node(c)?;
    g.check_node(o)?;
    let n = g.node_count();
    let l = laplacian(g);
    let series = faddeev_leverrier(&l);
    let mut den = series.char_poly().coeffs().to_vec();
    for x in den.iter_mut().take(zero_eigenvalue_multiplicity(&l)) {
        *x = 0.0;
    }
    let denominator = Polynomial::new(den);

    let reach = g.bfs0(c - 1);
    let Some(d) = reach[o - 1] else {
        return Ok(SingleIntegratorTF {
            numerator: Polynomial::zero(),
            denominator,
            distance: None,
            theta: 0.0,
        });
    };
    let unreachable: Vec<bool> = reach.iter().map(Option::is_none).collect();
    let extra_roots = source_component_count(&g.out_adjacency0(), &unreachable);
    let top = n - d - 1;
    let raw = series.adjugate_entry(o - 1, c - 1);
    let coeffs = (0..=top)
        .map(|i| if i < extra_roots { 0.0 } else { raw.coeff(i) })
        .collect();
    Ok(SingleIntegratorTF {
        numerator: Polynomial::new(coeffs),
        denominator,
        distance: Some(d),
        theta: shortest_path_weight(g, c, o)?,
    })
}

/// Numerator for a common input fed to every node in `controlling`:
/// the sum of the individual single-integrator numerators.
pub fn multi_controlling_numerator(
    g: &WeightedDigraph,
    controlling: &[usize],
    o: usize,
) -> Result<Polynomial> {
    if controlling.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    controlling.iter().try_fold(Polynomial::zero(), |acc, &c| {
        Ok(&acc + &single_integrator_tf(g, c, o)?.numerator)
    })
}

/// Relative degree `(d_min + 1) * chi` of the network transfer function with
/// several controlling nodes, `d_min` being the distance from the nearest one.
pub fn multi_controlling_relative_degree(
    g: &WeightedDigraph,
    controlling: &[usize],
    o: usize,
    agent: &AgentModel,
) -> Result<usize> {
    let nearest = controlling
        .iter()
        .map(|&c| crate::graph::hop_distance(g, c, o))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min();
    let d = nearest.ok_or(Error::NoPath {
        from: controlling.first().copied().ok_or(Error::EmptyNodeSet)?,
        to: o,
    })?;
    Ok((d + 1) * agent.relative_degree().max(0) as usize)
}
