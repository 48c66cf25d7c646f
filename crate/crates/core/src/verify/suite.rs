use serde::{Deserialize, Serialize};

use super::{
    brute_force_char_coeffs, brute_force_forest_matrices, compare_laplacian,
    eigensum_identity_check, IdentityStatus, Sampling,
};
use crate::error::{Error, Result};
use crate::graph::{
    enumerate_simple_paths, hop_distance, laplacian, WeightedDigraph, DEFAULT_ENUMERATION_CAP,
};
use crate::netfunc::{
    collocated_numerator, controllability_report, expand_product_form, multi_path_numerator,
    one_path_numerator, product_form_tf, relative_degree_co, shortest_path_weight,
    single_integrator_tf, AgentModel, DEFAULT_PATH_CAP,
};
use crate::poly::Polynomial;
use crate::spectral::{faddeev_leverrier, ForestSeries};
use crate::Matrix;

const COEFF_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Node-count cap for forest enumeration.
    pub cap: usize,
    pub path_cap: usize,
    /// Perturb the Laplacian fed to the series routes. Negative control: the
    /// forest checks must then fail (when the graph is small enough to
    /// enumerate).
    pub corrupt_laplacian: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: super::DEFAULT_SEED,
            cap: DEFAULT_ENUMERATION_CAP,
            path_cap: DEFAULT_PATH_CAP,
            corrupt_laplacian: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    fn measured(name: &str, max_err: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            status: if max_err <= tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            max_err: Some(max_err),
            detail: None,
        }
    }

    fn flag(name: &str, ok: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            max_err: None,
            detail: Some(detail),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Skipped,
            max_err: None,
            detail: Some(detail.into()),
        }
    }

    fn failed(name: &str, err: &Error) -> Self {
        Check::flag(name, false, err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub from: usize,
    pub to: usize,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub pass: bool,
    /// Checks on the graph as a whole.
    pub graph_checks: Vec<Check>,
    pub pairs: Vec<PairReport>,
}

impl VerifyReport {
    /// Failed checks with their scope, `graph` or `from->to`.
    pub fn failures(&self) -> impl Iterator<Item = (String, &Check)> {
        let graph = self.graph_checks.iter().map(|c| ("graph".to_string(), c));
        let pairs = self.pairs.iter().flat_map(|p| {
            p.checks
                .iter()
                .map(move |c| (format!("{}->{}", p.from, p.to), c))
        });
        graph
            .chain(pairs)
            .filter(|(_, c)| c.status == CheckStatus::Fail)
    }
}

fn coeff_err(a: &Polynomial, b: &Polynomial) -> f64 {
    (a - b).max_abs_coeff() / b.max_abs_coeff().max(1.0)
}

fn matrix_err(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

/// Run every applicable cross-check on the graph and on each `(c, o)` pair.
pub fn run_suite(
    g: &WeightedDigraph,
    agent: &AgentModel,
    pairs: &[(usize, usize)],
    opts: SuiteOptions,
) -> Result<VerifyReport> {
    for &(c, o) in pairs {
        g.check_node(c)?;
        g.check_node(o)?;
    }
    let l = laplacian(g);
    let mut l_series = l.clone();
    if opts.corrupt_laplacian {
        l_series[(0, 0)] += 0.5;
    }
    let series = faddeev_leverrier(&l_series);
    let mut graph_checks = Vec::new();

    match (
        brute_force_char_coeffs(g, opts.cap),
        brute_force_forest_matrices(g, opts.cap),
    ) {
        (Ok(bf_char), Ok(bf_q)) => {
            graph_checks.push(Check::measured(
                "char_poly_forests",
                coeff_err(series.char_poly(), &bf_char),
                COEFF_TOL,
            ));
            let err = series
                .q_matrices()
                .iter()
                .zip(&bf_q)
                .map(|(q, w)| matrix_err(q, w))
                .fold(0.0, f64::max);
            graph_checks.push(Check::measured("adjugate_forests", err, COEFF_TOL));
        }
        (Err(e @ Error::EnumerationCap { .. }), _) | (_, Err(e @ Error::EnumerationCap { .. })) => {
            graph_checks.push(Check::skipped("char_poly_forests", e.to_string()));
            graph_checks.push(Check::skipped("adjugate_forests", e.to_string()));
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    }
    let id = eigensum_identity_check(&l, g.node_count(), 1e-7);
    graph_checks.push(match id.status {
        IdentityStatus::Checked { max_err, .. } => Check::measured("eigensum", max_err, 1e-7),
        IdentityStatus::Skipped { reason } => Check::skipped("eigensum", reason),
    });

    let pairs = pairs
        .iter()
        .map(|&(c, o)| {
            Ok(PairReport {
                from: c,
                to: o,
                checks: pair_checks(g, agent, c, o, &series, &l, opts)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = graph_checks
        .iter()
        .chain(pairs.iter().flat_map(|p| &p.checks))
        .all(|c| c.status != CheckStatus::Fail);
    Ok(VerifyReport {
        seed: opts.seed,
        pass,
        graph_checks,
        pairs,
    })
}

fn pair_checks(
    g: &WeightedDigraph,
    agent: &AgentModel,
    c: usize,
    o: usize,
    series: &ForestSeries,
    l: &Matrix,
    opts: SuiteOptions,
) -> Result<Vec<Check>> {
    let n = g.node_count();
    let distance = hop_distance(g, c, o)?;
    let mut checks = Vec::new();

    let raw_h = series.adjugate_entry(o - 1, c - 1);
    checks.push(match distance {
        Some(d) => {
            let top = n - d - 1;
            let theta = shortest_path_weight(g, c, o)?;
            let above = (top + 1..n)
                .map(|i| raw_h.coeff(i).abs())
                .fold(0.0, f64::max);
            let lead = (raw_h.coeff(top) - theta).abs() / theta.max(1.0);
            let scale = raw_h.max_abs_coeff().max(1.0);
            Check::measured("numerator_pattern", (above / scale).max(lead), COEFF_TOL)
        }
        None => Check::measured("numerator_pattern", raw_h.max_abs_coeff(), COEFF_TOL),
    });

    checks.push(match controllability_report(g, c) {
        Ok(r) => Check::flag(
            "controllability",
            r.bound_holds(),
            format!("rank {} bound {}", r.actual_rank, r.bound),
        ),
        Err(e) => Check::failed("controllability", &e),
    });

    let Some(d) = distance else {
        let why = format!("no path from {c} to {o}");
        for name in ["product_form", "zero_structure", "grounded_numerators"] {
            checks.push(Check::skipped(name, why.clone()));
        }
        return Ok(checks);
    };

    let m = agent.open_loop();
    match product_form_tf(g, c, o, agent).and_then(|pf| Ok((expand_product_form(&pf)?, pf))) {
        Ok((t, pf)) => {
            let sampling = Sampling {
                seed: opts.seed,
                ..Sampling::default()
            };
            checks.push(match compare_laplacian(&t, l, c, o, &m, sampling) {
                Ok(r) => Check::measured("product_form", r.max_err, sampling.tol),
                Err(e) => Check::failed("product_form", &e),
            });
            let (_, rem) = t.num().div_rem(&agent.phi().pow(d + 1));
            let rem_err = rem.norm() / t.num().norm();
            let degree = t.relative_degree()?;
            let expected = relative_degree_co(agent, pf.distance) as i64;
            let err = if degree == expected {
                rem_err
            } else {
                f64::INFINITY
            };
            checks.push(Check {
                detail: Some(format!("relative degree {degree}")),
                ..Check::measured("zero_structure", err, 1e-8)
            });
        }
        Err(e) => {
            checks.push(Check::failed("product_form", &e));
            checks.push(Check::skipped("zero_structure", "product form unavailable"));
        }
    }

    let h = single_integrator_tf(g, c, o)?.numerator;
    let grounded = if c == o {
        collocated_numerator(g, c).map(|p| ("collocated", p))
    } else {
        match enumerate_simple_paths(g, c, o, 2) {
            Ok(paths) if paths.len() == 1 => {
                one_path_numerator(g, c, o).map(|p| ("unique path", p))
            }
            _ => multi_path_numerator(g, c, o, opts.path_cap).map(|p| ("path sum", p)),
        }
    };
    checks.push(match grounded {
        Ok((route, p)) => Check {
            detail: Some(route.into()),
            ..Check::measured("grounded_numerators", coeff_err(&p, &h), COEFF_TOL)
        },
        Err(e @ Error::PathCapExceeded { .. }) => {
            Check::skipped("grounded_numerators", e.to_string())
        }
        Err(e) => Check::failed("grounded_numerators", &e),
    });
    Ok(checks)
}
