//! Independent oracles: direct evaluation of the closed-loop resolvent,
//! eigendecomposition identities, brute-force forest sums and pointwise
//! comparison reports.

mod eigen;
mod suite;

pub use eigen::{
    eigensum_identity_check, modal_tf_eval, EigenDecomposition, IdentityReport, IdentityStatus,
};
pub use suite::{run_suite, Check, CheckStatus, PairReport, SuiteOptions, VerifyReport};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{for_each_out_forest, laplacian, WeightedDigraph};
use crate::poly::{Polynomial, RationalFunction};
use crate::Matrix;

type CMatrix = nalgebra::DMatrix<Complex64>;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// `psi(s) I + phi(s) L`, the scaled closed-loop resolvent argument.
fn closed_loop_matrix(l: &Matrix, m: &RationalFunction, s: Complex64) -> CMatrix {
    let psi = m.den().eval(s);
    let phi = m.num().eval(s);
    CMatrix::from_fn(l.nrows(), l.ncols(), |i, j| {
        let diag = if i == j {
            psi
        } else {
            Complex64::new(0.0, 0.0)
        };
        diag + phi * l[(i, j)]
    })
}

fn check_node(l: &Matrix, node: usize) -> Result<()> {
    if node == 0 || node > l.nrows() {
        return Err(Error::NodeOutOfRange {
            index: node,
            node_count: l.nrows(),
        });
    }
    Ok(())
}

/// `e_o^T (I + M(s) L)^{-1} e_c M(s)` for a given Laplacian, computed as
/// `phi e_o^T (psi I + phi L)^{-1} e_c` by an LU solve.
///
/// Points where the LU pivots spread over more than ten orders of magnitude
/// are refused as singular: the solve would not be trustworthy there.
pub fn resolvent_eval_laplacian(
    l: &Matrix,
    c: usize,
    o: usize,
    m: &RationalFunction,
    s: Complex64,
) -> Result<Complex64> {
    check_node(l, c)?;
    check_node(l, o)?;
    let singular = || Error::SingularAtSample { re: s.re, im: s.im };
    let a = closed_loop_matrix(l, m, s);
    let lu = a.lu();
    let u = lu.u();
    let diag: Vec<f64> = u.diagonal().iter().map(|z| z.norm()).collect();
    let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if !(max > 0.0 && min > 1e-10 * max) {
        return Err(singular());
    }
    let mut e_c = DVector::zeros(l.nrows());
    e_c[c - 1] = Complex64::new(1.0, 0.0);
    let x = lu.solve(&e_c).ok_or_else(singular)?;
    let value = x[o - 1] * m.num().eval(s);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(singular())
    }
}

/// Resolvent oracle for the network `g` of identical agents with open loop `m`.
pub fn resolvent_tf_eval(
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    m: &RationalFunction,
    s: Complex64,
) -> Result<Complex64> {
    resolvent_eval_laplacian(&laplacian(g), c, o, m, s)
}

/// Same quantity through an explicit inverse, as a cross-check on the solve.
pub fn resolvent_tf_eval_inverse(
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    m: &RationalFunction,
    s: Complex64,
) -> Result<Complex64> {
    g.check_node(c)?;
    g.check_node(o)?;
    let inv = closed_loop_matrix(&laplacian(g), m, s)
        .try_inverse()
        .ok_or(Error::SingularAtSample { re: s.re, im: s.im })?;
    Ok(inv[(o - 1, c - 1)] * m.num().eval(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: [f64; 2],
    pub candidate: [f64; 2],
    pub oracle: [f64; 2],
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub samples: Vec<Sample>,
    pub max_err: f64,
    pub pass: bool,
    pub seed: u64,
}

/// How [`compare_tf`] draws its sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub n_samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            n_samples: 20,
            tol: 1e-8,
            seed: DEFAULT_SEED,
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Sum of `|p_i| |s|^i`, the scale against which `|p(s)|` is judged small.
fn eval_scale(p: &Polynomial, s: Complex64) -> f64 {
    let r = s.norm();
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.abs())
}

/// Point on the ring `0.5 <= |s| <= 2`, kept away from the real axis.
fn ring_point(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let r = rng.random_range(0.5..=2.0);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        if angle.sin().abs() >= 0.05 {
            return Complex64::from_polar(r, angle);
        }
    }
}

/// Compare `candidate` against the resolvent oracle at random sample points.
///
/// Points where the candidate denominator is tiny or the oracle solve is
/// singular are redrawn.
pub fn compare_tf(
    candidate: &RationalFunction,
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    m: &RationalFunction,
    sampling: Sampling,
) -> Result<ComparisonReport> {
    let l = laplacian(g);
    compare_laplacian(candidate, &l, c, o, m, sampling)
}

pub(crate) fn compare_laplacian(
    candidate: &RationalFunction,
    l: &Matrix,
    c: usize,
    o: usize,
    m: &RationalFunction,
    sampling: Sampling,
) -> Result<ComparisonReport> {
    if sampling.n_samples == 0 {
        return Err(Error::Dimension("at least one sample is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut samples = Vec::with_capacity(sampling.n_samples);
    let mut attempts = 0;
    while samples.len() < sampling.n_samples {
        attempts += 1;
        if attempts > 50 * sampling.n_samples {
            return Err(Error::AllSamplesRejected);
        }
        let s = ring_point(&mut rng);
        if candidate.den().eval(s).norm() < 1e-6 * eval_scale(candidate.den(), s) {
            continue;
        }
        let oracle = match resolvent_eval_laplacian(l, c, o, m, s) {
            Ok(v) => v,
            Err(Error::SingularAtSample { .. }) => continue,
            Err(e) => return Err(e),
        };
        let cand = candidate.eval(s);
        let diff = (cand - oracle).norm();
        let rel_err = if oracle.norm() > 0.0 {
            diff / oracle.norm()
        } else {
            diff
        };
        samples.push(Sample {
            s: pair(s),
            candidate: pair(cand),
            oracle: pair(oracle),
            rel_err,
        });
    }
    let max_err = samples.iter().map(|x| x.rel_err).fold(0.0, f64::max);
    Ok(ComparisonReport {
        samples,
        max_err,
        pass: max_err <= sampling.tol,
        seed: sampling.seed,
    })
}

/// Forest-weight matrices `W_0 .. W_{N-1}` by enumeration: `(W_k)_{ij}` is
/// the weight of the forests with `k` arcs in which `i` lies in the tree
/// rooted at `j`.
pub fn brute_force_forest_matrices(g: &WeightedDigraph, cap: usize) -> Result<Vec<Matrix>> {
    let n = g.node_count();
    let mut w = vec![Matrix::zeros(n, n); n];
    for_each_out_forest(g, cap, |f| {
        let k = f.arc_count();
        for i in 1..=n {
            w[k][(i - 1, f.root_of(i) - 1)] += f.weight();
        }
    })?;
    Ok(w)
}

/// `det(sI + L)` with `g_i` the total weight of the forests with `N - i` arcs.
pub fn brute_force_char_coeffs(g: &WeightedDigraph, cap: usize) -> Result<Polynomial> {
    let n = g.node_count();
    let mut coeffs = vec![0.0; n + 1];
    for_each_out_forest(g, cap, |f| coeffs[n - f.arc_count()] += f.weight())?;
    Ok(Polynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{build_graph, Arc, DEFAULT_ENUMERATION_CAP};
    use crate::netfunc::{expand_product_form, product_form_tf, AgentModel};
    use crate::spectral::faddeev_leverrier;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m_pi() -> RationalFunction {
        RationalFunction::from_coeffs(&[1.0, 1.0], &[0.0, 0.0, 1.0]).unwrap()
    }

    fn integrator() -> RationalFunction {
        RationalFunction::from_coeffs(&[1.0], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn single_node_resolvent() {
        let g = build_graph(1, &[]).unwrap();
        let v = resolvent_tf_eval(&g, 1, 1, &integrator(), c(1.0, 0.0)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_node_resolvent() {
        // (sI + L)^{-1} with L = [[1,-1],[-1,1]]: entry (1,1) = (s+1) / (s (s+2))
        let g = build_graph(2, &[Arc::unit(1, 2), Arc::unit(2, 1)]).unwrap();
        let v = resolvent_tf_eval(&g, 1, 1, &integrator(), c(1.0, 0.0)).unwrap();
        assert!((v - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let w = resolvent_tf_eval_inverse(&g, 1, 1, &integrator(), c(1.0, 0.0)).unwrap();
        assert!((v - w).norm() < 1e-15);
    }

    #[test]
    fn resolvent_at_pole_is_singular() {
        let g = build_graph(2, &[Arc::unit(1, 2), Arc::unit(2, 1)]).unwrap();
        let err = resolvent_tf_eval(&g, 1, 2, &integrator(), c(0.0, 0.0)).unwrap_err();
        assert_eq!(err.code(), "singular-at-sample");
    }

    #[test]
    fn worked_example_matches_oracle() {
        let g = five_node();
        let agent = AgentModel::from_open_loop(m_pi()).unwrap();
        let t = expand_product_form(&product_form_tf(&g, 1, 3, &agent).unwrap()).unwrap();
        let at_one = resolvent_tf_eval(&g, 1, 3, &m_pi(), c(1.0, 0.0)).unwrap();
        assert!((t.eval(c(1.0, 0.0)) - at_one).norm() <= 1e-8 * at_one.norm());
        let report = compare_tf(&t, &g, 1, 3, &m_pi(), Sampling::default()).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.samples.len(), 20);
        assert!(report.samples.iter().all(|x| x.s[1] != 0.0));
        let radii = report.samples.iter().map(|x| c(x.s[0], x.s[1]).norm());
        assert!(radii.into_iter().all(|r| (0.5..=2.0 + 1e-12).contains(&r)));
    }

    #[test]
    fn perturbed_candidate_fails() {
        let g = five_node();
        let agent = AgentModel::from_open_loop(m_pi()).unwrap();
        let t = expand_product_form(&product_form_tf(&g, 1, 3, &agent).unwrap()).unwrap();
        let mut num = t.num().coeffs().to_vec();
        num[1] += 1e-3;
        let bad = RationalFunction::new(Polynomial::new(num), t.den().clone()).unwrap();
        let report = compare_tf(&bad, &g, 1, 3, &m_pi(), Sampling::default()).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn comparison_is_deterministic_and_serializes() {
        let g = five_node();
        let agent = AgentModel::from_open_loop(m_pi()).unwrap();
        let t = expand_product_form(&product_form_tf(&g, 1, 3, &agent).unwrap()).unwrap();
        let a = compare_tf(&t, &g, 1, 3, &m_pi(), Sampling::default()).unwrap();
        let b = compare_tf(&t, &g, 1, 3, &m_pi(), Sampling::default()).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.starts_with(r#"{"samples":[{"s":["#));
        let back: ComparisonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn forest_char_coeffs() {
        let g = six_node();
        let bf = brute_force_char_coeffs(&g, DEFAULT_ENUMERATION_CAP).unwrap();
        let fl = faddeev_leverrier(&laplacian(&g));
        assert!((&bf - fl.char_poly()).max_abs_coeff() < 1e-9);
        assert_eq!(bf.coeff(0), 0.0);
        assert_eq!(bf.leading(), 1.0);
        let empty = build_graph(4, &[]).unwrap();
        assert_eq!(
            brute_force_char_coeffs(&empty, 9).unwrap(),
            Polynomial::s().pow(4)
        );
        let five = brute_force_char_coeffs(&five_node(), 9).unwrap();
        assert!((five.coeff(4) - 8.8).abs() < 1e-12);
        assert!(brute_force_char_coeffs(&g, 5).is_err());
    }

    #[test]
    fn forest_matrices_match_series() {
        let g = five_node();
        let w = brute_force_forest_matrices(&g, 9).unwrap();
        let fl = faddeev_leverrier(&laplacian(&g));
        for (a, b) in w.iter().zip(fl.q_matrices()) {
            assert!((a - b).abs().max() < 1e-9);
        }
    }
}
