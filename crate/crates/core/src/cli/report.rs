use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Failure, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::error::Result;
use crate::graph::{enumerate_out_forests, WeightedDigraph};
use crate::netfunc::{
    controllability_report, expand_product_form, product_form_tf, single_integrator_tf,
    steady_state_gain, AgentModel, ControllabilityReport, SteadyStateGain, PAIRING_TOL,
};
use crate::poly::{poly_roots, ComplexMultiset, DEFAULT_ROOT_TOL};
use crate::verify::{compare_tf, resolvent_tf_eval, Sampling};

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

fn pairs(values: &ComplexMultiset) -> Vec<ComplexPair> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub arcs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub pass: bool,
    /// Largest relative error against the resolvent oracle; absent when the
    /// comparison could not run.
    pub max_err: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub from: usize,
    pub to: usize,
    pub theta: f64,
    pub distance: usize,
    /// Single-integrator numerator `h`, ascending powers.
    pub h: Vec<f64>,
    /// `h / theta`.
    pub monic_h: Vec<f64>,
    pub lambda: Vec<ComplexPair>,
    pub gamma: Vec<ComplexPair>,
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub relative_degree: i64,
    /// Absent when the open loop has no integrator or the Laplacian has a
    /// repeated zero eigenvalue.
    pub steady_state_gain: Option<SteadyStateGain>,
    pub controllability: ControllabilityReport,
    pub verification: VerificationSummary,
}

impl AnalysisReport {
    pub fn build(
        g: &WeightedDigraph,
        agent: &AgentModel,
        c: usize,
        o: usize,
        seed: u64,
    ) -> Result<Self> {
        let pf = product_form_tf(g, c, o, agent)?;
        let si = single_integrator_tf(g, c, o)?;
        let t = expand_product_form(&pf)?;
        let sampling = Sampling {
            seed,
            ..Sampling::default()
        };
        let verification = match compare_tf(&t, g, c, o, &agent.open_loop(), sampling) {
            Ok(r) => VerificationSummary {
                pass: r.pass,
                max_err: Some(r.max_err),
                samples: r.samples.len(),
                seed,
            },
            Err(_) => VerificationSummary {
                pass: false,
                max_err: None,
                samples: 0,
                seed,
            },
        };
        Ok(AnalysisReport {
            graph: GraphSummary {
                nodes: g.node_count(),
                arcs: g.arcs().len(),
            },
            from: c,
            to: o,
            theta: pf.theta,
            distance: pf.distance,
            monic_h: si
                .monic_numerator()
                .map(|p| p.coeffs().to_vec())
                .unwrap_or_default(),
            h: si.numerator.coeffs().to_vec(),
            lambda: pairs(&pf.lambda_gains),
            gamma: pairs(&pf.gamma_gains),
            numerator: t.num().coeffs().to_vec(),
            denominator: t.den().coeffs().to_vec(),
            relative_degree: t.relative_degree()?,
            steady_state_gain: steady_state_gain(&pf).ok(),
            controllability: controllability_report(g, c)?,
            verification,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestEntry {
    /// `[from, to]`, 1-based.
    pub arcs: Vec<[usize; 2]>,
    pub roots: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestsReport {
    pub k: usize,
    pub root: Option<usize>,
    pub contains: Option<usize>,
    pub forests: Vec<ForestEntry>,
    pub total_weight: f64,
}

impl ForestsReport {
    pub fn build(
        g: &WeightedDigraph,
        k: usize,
        filter: Option<(usize, usize)>,
        cap: usize,
    ) -> Result<Self> {
        if let Some((root, contains)) = filter {
            g.check_node(root)?;
            g.check_node(contains)?;
        }
        let forests: Vec<ForestEntry> = enumerate_out_forests(g, k, cap)?
            .into_iter()
            .filter(|f| filter.is_none_or(|(r, v)| f.tree_contains(r, v)))
            .map(|f| ForestEntry {
                arcs: f.arcs().into_iter().map(|(u, v)| [u, v]).collect(),
                roots: f.roots(),
                weight: f.weight(),
            })
            .collect();
        Ok(ForestsReport {
            k,
            root: filter.map(|f| f.0),
            contains: filter.map(|f| f.1),
            total_weight: forests.iter().map(|f| f.weight).sum(),
            forests,
        })
    }
}

/// Seventeen significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    let (a, b) = (min.log10(), max.log10());
    (0..points)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64))
        .collect()
}

fn lin_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Points where the expanded transfer function sits on a pole, or evaluates
/// to zero, are written with empty magnitude and phase.
#[allow(clippy::too_many_arguments)]
pub(super) fn write_freqresp(
    out: &mut dyn Write,
    g: &WeightedDigraph,
    agent: &AgentModel,
    c: usize,
    o: usize,
    wmin: f64,
    wmax: f64,
    points: usize,
) -> std::result::Result<i32, Failure> {
    let t = expand_product_form(&product_form_tf(g, c, o, agent)?)?;
    let omegas = log_grid(wmin, wmax, points);
    let values: Vec<Option<Complex64>> = omegas
        .iter()
        .map(|&w| {
            let s = Complex64::new(0.0, w);
            let den = t.den().eval(s);
            let scale: f64 = t
                .den()
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, a)| a.abs() * w.powi(i as i32))
                .sum();
            let v = t.eval(s);
            (den.norm() > 1e-12 * scale && v.is_finite() && v.norm() > 0.0).then_some(v)
        })
        .collect();

    // spot-check five points against the resolvent, starting from an even
    // spread and moving on where the oracle is ill-conditioned
    let m = agent.open_loop();
    let spread = [0, points / 4, points / 2, 3 * points / 4, points - 1];
    let order = spread
        .into_iter()
        .chain((0..points).filter(|i| !spread.contains(i)));
    let mut checked = 0;
    for i in order {
        if checked == 5 {
            break;
        }
        let Some(v) = values[i] else { continue };
        let Ok(oracle) = resolvent_tf_eval(g, c, o, &m, Complex64::new(0.0, omegas[i])) else {
            continue;
        };
        checked += 1;
        let rel = (v - oracle).norm() / oracle.norm();
        if rel.is_nan() || rel > 1e-6 {
            return Err(Failure {
                code: EXIT_VERIFY_FAILED,
                message: format!(
                    "omega={}: expanded form and resolvent differ by {rel:e}",
                    omegas[i]
                ),
            });
        }
    }

    writeln!(out, "omega,mag_db,phase_deg")?;
    for (w, v) in omegas.iter().zip(values) {
        match v {
            Some(v) => writeln!(
                out,
                "{},{},{}",
                num(*w),
                num(20.0 * v.norm().log10()),
                num(v.arg().to_degrees())
            )?,
            None => writeln!(out, "{},,", num(*w))?,
        }
    }
    Ok(EXIT_OK)
}

pub(super) fn write_rootlocus(
    out: &mut dyn Write,
    agent: &AgentModel,
    g: Option<&WeightedDigraph>,
    pair: Option<(usize, usize)>,
    kmin: f64,
    kmax: f64,
    points: usize,
) -> std::result::Result<(), Failure> {
    let psi = agent.psi();
    let phi = agent.phi();
    let mut markers: Vec<(f64, &str)> = Vec::new();
    if let Some(g) = g {
        let real = |z: &Complex64| z.im.abs() <= PAIRING_TOL * z.norm().max(1.0);
        let lambdas =
            crate::spectral::laplacian_eigenvalues(&crate::graph::laplacian(g), DEFAULT_ROOT_TOL);
        markers.extend(lambdas.iter().filter(|z| real(z)).map(|z| (z.re, "lambda")));
        if let Some((c, o)) = pair {
            let gammas = single_integrator_tf(g, c, o)?.zero_gains()?;
            markers.extend(gammas.iter().filter(|z| real(z)).map(|z| (z.re, "gamma")));
        }
    }
    let with_markers = g.is_some();
    if with_markers {
        writeln!(out, "k,root_index,re,im,marker")?;
    } else {
        writeln!(out, "k,root_index,re,im")?;
    }
    let rows = lin_grid(kmin, kmax, points)
        .into_iter()
        .map(|k| (k, ""))
        .chain(markers);
    for (k, marker) in rows {
        let roots = poly_roots(&(&psi + &phi.scale(k)), DEFAULT_ROOT_TOL)?;
        for (i, z) in roots.iter().enumerate() {
            write!(out, "{},{},{},{}", num(k), i + 1, num(z.re), num(z.im))?;
            if with_markers {
                write!(out, ",{marker}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
