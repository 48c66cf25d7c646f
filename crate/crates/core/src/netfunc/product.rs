//! The closed-loop product form
//!
//! ```text
//!            theta * phi^(1+d) * prod_i (psi + gamma_i phi)
//! T_co(s) = -----------------------------------------------
//!                     prod_i (psi + lambda_i phi)
//! ```
//!
//! with `psi = a p`, `phi = b q`, `lambda_i` the Laplacian eigenvalues and
//! `gamma_i` the negated roots of the single-integrator numerator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::poly::{closed_loop_factor, ComplexMultiset, Polynomial, RationalFunction};

use super::{single_integrator_tf, AgentModel};

/// Conjugate gains are paired when they match within this tolerance, scaled by
/// `max(1, |k|)`.
pub const PAIRING_TOL: f64 = 1e-7;
/// A gain counts as zero when `|k| <= ZERO_GAIN_TOL * max |gain|`.
pub const ZERO_GAIN_TOL: f64 = 1e-8;
const IMAG_RESIDUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductFormTF {
    pub theta: f64,
    pub distance: usize,
    /// `N` Laplacian eigenvalues.
    pub lambda_gains: ComplexMultiset,
    /// `N - d - 1` zero gains.
    pub gamma_gains: ComplexMultiset,
    pub agent: AgentModel,
}

impl ProductFormTF {
    pub fn node_count(&self) -> usize {
        self.lambda_gains.len()
    }

    fn max_gain(&self) -> f64 {
        self.lambda_gains
            .max_norm()
            .max(self.gamma_gains.max_norm())
    }

    fn is_zero_gain(&self, k: Complex64) -> bool {
        k.norm() <= ZERO_GAIN_TOL * self.max_gain()
    }

    /// Evaluate the factored form directly at `s`, without expanding.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let psi = self.agent.psi().eval(s);
        let phi = self.agent.phi().eval(s);
        let num: Complex64 = self.gamma_gains.iter().map(|&k| psi + k * phi).product();
        let den: Complex64 = self.lambda_gains.iter().map(|&k| psi + k * phi).product();
        num * phi.powu(1 + self.distance as u32) * self.theta / den
    }
}

/// Real factor or a conjugate pair (stored with positive imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
enum GainUnit {
    Real(f64),
    Pair(Complex64),
}

impl GainUnit {
    fn size(&self) -> usize {
        match self {
            GainUnit::Real(_) => 1,
            GainUnit::Pair(_) => 2,
        }
    }

    /// `psi + k phi`, or the product over a conjugate pair.
    fn factor(&self, psi: &Polynomial, phi: &Polynomial) -> Result<Polynomial> {
        match *self {
            GainUnit::Real(k) => Ok(psi + &phi.scale(k)),
            GainUnit::Pair(k) => {
                let prod =
                    &closed_loop_factor(psi, phi, k) * &closed_loop_factor(psi, phi, k.conj());
                if prod.relative_imag_residue() > IMAG_RESIDUE_TOL {
                    return Err(Error::NonConjugateGains { re: k.re, im: k.im });
                }
                Ok(prod.real_part())
            }
        }
    }
}

/// Group gains into real values and conjugate pairs, greedily matching each
/// complex gain with its nearest conjugate.
fn pair_gains(gains: &[Complex64]) -> Result<Vec<GainUnit>> {
    let mut used = vec![false; gains.len()];
    let mut units = Vec::new();
    for i in 0..gains.len() {
        if used[i] {
            continue;
        }
        let k = gains[i];
        let tol = PAIRING_TOL * k.norm().max(1.0);
        used[i] = true;
        if k.im.abs() <= tol {
            units.push(GainUnit::Real(k.re));
            continue;
        }
        let target = k.conj();
        let partner = (0..gains.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (gains[a] - target)
                    .norm()
                    .total_cmp(&(gains[b] - target).norm())
            })
            .filter(|&j| (gains[j] - target).norm() <= tol)
            .ok_or(Error::NonConjugateGains { re: k.re, im: k.im })?;
        used[partner] = true;
        let mid = (k + gains[partner].conj()) * 0.5;
        units.push(GainUnit::Pair(Complex64::new(mid.re, mid.im.abs())));
    }
    Ok(units)
}

fn product_of(units: &[GainUnit], psi: &Polynomial, phi: &Polynomial) -> Result<Polynomial> {
    units
        .iter()
        .try_fold(Polynomial::one(), |acc, u| Ok(&acc * &u.factor(psi, phi)?))
}

/// Factored transfer function from the input of agent `c` to the output of
/// agent `o`.
pub fn product_form_tf(
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    agent: &AgentModel,
) -> Result<ProductFormTF> {
    let si = single_integrator_tf(g, c, o)?;
    let distance = si.distance.ok_or(Error::NoPath { from: c, to: o })?;
    Ok(ProductFormTF {
        theta: si.theta,
        distance,
        lambda_gains: si.eigenvalues(),
        gamma_gains: si.zero_gains()?,
        agent: agent.clone(),
    })
}

/// Multiply the product form out into a single real rational function.
pub fn expand_product_form(pf: &ProductFormTF) -> Result<RationalFunction> {
    let psi = pf.agent.psi();
    let phi = pf.agent.phi();
    let num = &phi.pow(1 + pf.distance) * &product_of(&pair_gains(&pf.gamma_gains)?, &psi, &phi)?;
    let den = product_of(&pair_gains(&pf.lambda_gains)?, &psi, &phi)?;
    RationalFunction::new(num.scale(pf.theta), den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Biproper `(psi + gamma phi) / (psi + lambda phi)`.
    Z,
    /// Feedback loop `phi / (psi + lambda phi)`.
    T,
    /// A Z and a T factor fused to keep a conjugate eigenvalue pair together.
    Mixed,
}

/// One block of the series form. `order` counts how many eigenvalues its
/// denominator carries; conjugate gains share a block of order 2.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFactor {
    pub kind: FactorKind,
    pub order: usize,
    pub tf: RationalFunction,
}

fn block(
    kind: FactorKind,
    gammas: &[GainUnit],
    lambdas: &[GainUnit],
    psi: &Polynomial,
    phi: &Polynomial,
) -> Result<SeriesFactor> {
    let order: usize = lambdas.iter().map(GainUnit::size).sum();
    let gamma_count: usize = gammas.iter().map(GainUnit::size).sum();
    let num = &phi.pow(order - gamma_count) * &product_of(gammas, psi, phi)?;
    Ok(SeriesFactor {
        kind,
        order,
        tf: RationalFunction::new(num, product_of(lambdas, psi, phi)?)?,
    })
}

/// Match zero gains with the eigenvalues reserved for Z blocks, keeping every
/// block real. `None` when no such matching exists.
fn match_z_blocks(
    gammas: &[GainUnit],
    lambdas: &[GainUnit],
) -> Option<Vec<(Vec<GainUnit>, Vec<GainUnit>)>> {
    let split = |units: &[GainUnit]| -> (Vec<GainUnit>, Vec<GainUnit>) {
        units.iter().partition(|u| matches!(u, GainUnit::Real(_)))
    };
    let (mut g_real, mut g_pair) = split(gammas);
    let (mut l_real, mut l_pair) = split(lambdas);
    g_real.reverse();
    g_pair.reverse();
    l_real.reverse();
    l_pair.reverse();
    let mut blocks = Vec::new();
    while !g_pair.is_empty() && !l_pair.is_empty() {
        blocks.push((vec![g_pair.pop()?], vec![l_pair.pop()?]));
    }
    while let Some(gp) = g_pair.pop() {
        let (a, b) = (l_real.pop()?, l_real.pop()?);
        blocks.push((vec![gp], vec![a, b]));
    }
    while let Some(lp) = l_pair.pop() {
        let (a, b) = (g_real.pop()?, g_real.pop()?);
        blocks.push((vec![a, b], vec![lp]));
    }
    if g_real.len() != l_real.len() {
        return None;
    }
    while let (Some(gr), Some(lr)) = (g_real.pop(), l_real.pop()) {
        blocks.push((vec![gr], vec![lr]));
    }
    Some(blocks)
}

/// Series form: biproper Z blocks followed by feedback T blocks, whose
/// product times `theta` is the full transfer function.
///
/// Eigenvalues are taken in `(re, im)` order. The zero eigenvalue always goes
/// to a T block; the smallest remaining ones fill the `N - d - 1` Z slots.
pub fn series_factors(pf: &ProductFormTF) -> Result<Vec<SeriesFactor>> {
    let psi = pf.agent.psi();
    let phi = pf.agent.phi();
    let mut lambdas = pair_gains(&pf.lambda_gains)?;
    let gammas = pair_gains(&pf.gamma_gains)?;

    let zero = lambdas.iter().position(|u| match *u {
        GainUnit::Real(k) => pf.is_zero_gain(Complex64::new(k, 0.0)),
        GainUnit::Pair(_) => false,
    });
    let mut t_units: Vec<GainUnit> = zero.map(|i| lambdas.remove(i)).into_iter().collect();
    let mut z_units = Vec::new();
    let mut z_slots = pf.node_count() - pf.distance - 1;
    for u in lambdas {
        if u.size() <= z_slots {
            z_slots -= u.size();
            z_units.push(u);
        } else {
            t_units.push(u);
        }
    }

    let mut factors = Vec::new();
    let mut z_gammas = gammas.clone();
    // A slot left over means only conjugate pairs remained: one of them has
    // to share a block with a real zero gain, or join the fused fallback.
    let spare_pair = (z_slots == 1)
        .then(|| t_units.iter().position(|u| matches!(u, GainUnit::Pair(_))))
        .flatten()
        .map(|p| t_units.remove(p));
    let mut mixed = None;
    if let Some(pair) = spare_pair {
        if let Some(r) = z_gammas.iter().position(|u| matches!(u, GainUnit::Real(_))) {
            mixed = Some((z_gammas.remove(r), pair));
        }
    }
    let matched = if z_slots == 0 || mixed.is_some() {
        match_z_blocks(&z_gammas, &z_units)
    } else {
        None
    };
    match matched {
        Some(blocks) => {
            for (gs, ls) in blocks {
                factors.push(block(FactorKind::Z, &gs, &ls, &psi, &phi)?);
            }
            if let Some((gu, lu)) = mixed {
                factors.push(block(FactorKind::Mixed, &[gu], &[lu], &psi, &phi)?);
            }
        }
        None => {
            // no real split exists: one fused block with everything not in T
            let mut ls = z_units;
            ls.extend(spare_pair);
            factors.push(block(FactorKind::Mixed, &gammas, &ls, &psi, &phi)?);
        }
    }
    for u in t_units {
        factors.push(block(FactorKind::T, &[], &[u], &psi, &phi)?);
    }
    Ok(factors)
}

fn zero_eigenvalue_count(pf: &ProductFormTF) -> usize {
    pf.lambda_gains
        .iter()
        .filter(|&&k| pf.is_zero_gain(k))
        .count()
}

/// Network part `S_co = T_co / M`: the product form with one `psi` (the zero
/// eigenvalue) dropped from the denominator and one `phi` from the numerator.
pub fn network_part(
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    agent: &AgentModel,
) -> Result<RationalFunction> {
    let pf = product_form_tf(g, c, o, agent)?;
    let zeros = zero_eigenvalue_count(&pf);
    if zeros != 1 {
        return Err(Error::MultipleZeroEigenvalues { count: zeros });
    }
    let psi = agent.psi();
    let phi = agent.phi();
    let nonzero: Vec<Complex64> = pf
        .lambda_gains
        .iter()
        .copied()
        .filter(|&k| !pf.is_zero_gain(k))
        .collect();
    let num = &phi.pow(pf.distance) * &product_of(&pair_gains(&pf.gamma_gains)?, &psi, &phi)?;
    let den = product_of(&pair_gains(&nonzero)?, &psi, &phi)?;
    RationalFunction::new(num.scale(pf.theta), den)
}

/// `M_s * S_co`, unreduced.
pub fn general_io_tf(
    network_part: &RationalFunction,
    open_loop_part: &RationalFunction,
) -> RationalFunction {
    open_loop_part.mul(network_part)
}

/// `(d + 1) * chi`.
pub fn relative_degree_co(agent: &AgentModel, distance: usize) -> usize {
    (distance + 1) * agent.relative_degree().max(0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteadyStateGain {
    Finite(f64),
    Infinite,
}

/// DC gain `theta * prod gamma / prod lambda` for an open loop with an
/// integrator. A zero gain cancels the zero eigenvalue and leaves a finite
/// value; otherwise the gain is infinite.
pub fn steady_state_gain(pf: &ProductFormTF) -> Result<SteadyStateGain> {
    if !pf.agent.has_integrator() {
        return Err(Error::NoIntegrator);
    }
    let zeros = zero_eigenvalue_count(pf);
    if zeros != 1 {
        return Err(Error::MultipleZeroEigenvalues { count: zeros });
    }
    let Some(cancel) = pf.gamma_gains.iter().position(|&k| pf.is_zero_gain(k)) else {
        return Ok(SteadyStateGain::Infinite);
    };
    let num: Complex64 = pf
        .gamma_gains
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != cancel)
        .map(|(_, &k)| k)
        .product();
    let den: Complex64 = pf
        .lambda_gains
        .iter()
        .copied()
        .filter(|&k| !pf.is_zero_gain(k))
        .product();
    Ok(SteadyStateGain::Finite((num / den).re * pf.theta))
}
