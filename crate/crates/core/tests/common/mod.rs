#![allow(dead_code)]

use netfunc::graph::{build_graph, Arc, WeightedDigraph};
use netfunc::netfunc::AgentModel;
use netfunc::poly::{Polynomial, RationalFunction};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// The six-node forest example; arcs 3->2 and 5->2 are unweighted.
pub fn six_node() -> WeightedDigraph {
    build_graph(
        6,
        &[
            Arc::new(1, 2, 0.6),
            Arc::new(2, 3, 0.4),
            Arc::unit(3, 2),
            Arc::unit(5, 2),
            Arc::new(4, 5, 0.8),
            Arc::new(3, 6, 1.5),
        ],
    )
    .unwrap()
}

/// The five-node worked example.
pub fn five_node() -> WeightedDigraph {
    build_graph(
        5,
        &[
            Arc::unit(1, 2),
            Arc::unit(2, 1),
            Arc::new(2, 3, 0.3),
            Arc::unit(3, 2),
            Arc::unit(4, 3),
            Arc::unit(5, 3),
            Arc::unit(5, 4),
            Arc::unit(4, 5),
            Arc::new(3, 5, 1.5),
        ],
    )
    .unwrap()
}

/// `M = (s + 1) / s^2` as a single integrator with a PI controller.
pub fn pi_agent() -> AgentModel {
    AgentModel::new(
        RationalFunction::from_coeffs(&[1.0], &[0.0, 1.0]).unwrap(),
        RationalFunction::from_coeffs(&[1.0, 1.0], &[0.0, 1.0]).unwrap(),
    )
    .unwrap()
}

pub fn weight(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.2..2.0)
}

/// Arc set of a random digraph: each ordered pair present with probability `p`.
pub fn random_topology(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if u != v && rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    arcs
}

/// Random topology in which every node is reachable from `root`: a random
/// spanning out-tree plus extra arcs with probability `p`.
pub fn reachable_topology(
    rng: &mut ChaCha8Rng,
    n: usize,
    root: usize,
    p: f64,
) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (1..=n).filter(|&v| v != root).collect();
    order.shuffle(rng);
    order.insert(0, root);
    let mut arcs = std::collections::BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        arcs.insert((parent, order[i]));
    }
    for (u, v) in random_topology(rng, n, p) {
        arcs.insert((u, v));
    }
    arcs.into_iter().collect()
}

pub fn weigh(rng: &mut ChaCha8Rng, n: usize, topology: &[(usize, usize)]) -> WeightedDigraph {
    let arcs: Vec<Arc> = topology
        .iter()
        .map(|&(u, v)| Arc::new(u, v, weight(rng)))
        .collect();
    build_graph(n, &arcs).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedDigraph {
    let t = random_topology(rng, n, p);
    weigh(rng, n, &t)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=degree).map(|_| rng.random_range(-2.0..2.0)).collect();
    c[degree] = rng.random_range(0.5..2.0);
    c
}

/// Proper agent with `deg psi <= 3`, optionally with an integrator.
pub fn random_agent(rng: &mut ChaCha8Rng, integrator: bool) -> AgentModel {
    let den_degree = rng.random_range(1..=3);
    let num_degree = rng.random_range(0..=den_degree);
    let mut den = random_poly(rng, den_degree);
    if integrator {
        den[0] = 0.0;
    }
    let num = random_poly(rng, num_degree);
    AgentModel::from_open_loop(RationalFunction::from_coeffs(&num, &den).unwrap()).unwrap()
}

pub fn coeff_close(a: &Polynomial, b: &Polynomial, tol: f64) -> bool {
    (a - b).max_abs_coeff() <= tol * b.max_abs_coeff().max(1.0)
}
