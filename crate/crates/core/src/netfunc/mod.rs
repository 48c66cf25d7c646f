//! Network transfer functions: single-integrator numerator and denominator,
//! the closed-loop product form for arbitrary agents, its series and
//! network/open-loop splits, zeros from grounded Laplacians and the
//! controllability bound.

mod controllability;
mod product;
mod single;
mod zeros;

pub use controllability::{controllability_matrix, controllability_report, ControllabilityReport};
pub use product::{
    expand_product_form, general_io_tf, network_part, product_form_tf, relative_degree_co,
    series_factors, steady_state_gain, FactorKind, ProductFormTF, SeriesFactor, SteadyStateGain,
    PAIRING_TOL, ZERO_GAIN_TOL,
};
pub use single::{
    multi_controlling_numerator, multi_controlling_relative_degree, shortest_path_weight,
    single_integrator_tf, SingleIntegratorTF,
};
pub use zeros::{collocated_numerator, multi_path_numerator, one_path_numerator, DEFAULT_PATH_CAP};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFunction};

/// One agent: plant `b/a` driven by controller `q/p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAgent")]
pub struct AgentModel {
    plant: RationalFunction,
    controller: RationalFunction,
}

#[derive(Deserialize)]
struct RawAgent {
    plant: RationalFunction,
    controller: RationalFunction,
}

impl TryFrom<RawAgent> for AgentModel {
    type Error = Error;
    fn try_from(raw: RawAgent) -> Result<Self> {
        AgentModel::new(raw.plant, raw.controller)
    }
}

impl AgentModel {
    /// Rejects a zero open-loop numerator or an improper open loop.
    pub fn new(plant: RationalFunction, controller: RationalFunction) -> Result<Self> {
        let agent = AgentModel { plant, controller };
        if agent.phi().is_zero() {
            return Err(Error::ZeroNumerator);
        }
        if agent.relative_degree() < 0 {
            return Err(Error::Dimension(format!(
                "open loop must be proper, relative degree is {}",
                agent.relative_degree()
            )));
        }
        Ok(agent)
    }

    /// Agent with a unit controller.
    pub fn from_open_loop(open_loop: RationalFunction) -> Result<Self> {
        AgentModel::new(open_loop, RationalFunction::one())
    }

    pub fn plant(&self) -> &RationalFunction {
        &self.plant
    }

    pub fn controller(&self) -> &RationalFunction {
        &self.controller
    }

    /// Open-loop numerator `phi = b q`.
    pub fn phi(&self) -> Polynomial {
        self.plant.num() * self.controller.num()
    }

    /// Open-loop denominator `psi = a p`.
    pub fn psi(&self) -> Polynomial {
        self.plant.den() * self.controller.den()
    }

    /// `M = b q / (a p)`.
    pub fn open_loop(&self) -> RationalFunction {
        RationalFunction::new(self.phi(), self.psi()).expect("psi is nonzero")
    }

    /// Relative degree of the open loop.
    pub fn relative_degree(&self) -> i64 {
        let den = self.psi().degree().unwrap_or(0) as i64;
        let num = self.phi().degree().unwrap_or(0) as i64;
        den - num
    }

    /// Whether `psi(0) = 0`.
    pub fn has_integrator(&self) -> bool {
        let psi = self.psi();
        psi.coeff(0).abs() <= 1e-12 * psi.max_abs_coeff()
    }
}

/// Where an exogenous signal enters the controlling agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputPort {
    /// Reference at the controller input, `M_s = M`.
    ControllerInput,
    /// Disturbance at the plant input, `M_s = G`.
    PlantInput,
    /// Disturbance added to the plant output, `M_s = 1`.
    PlantOutput,
}

/// The single-agent transfer function from the chosen input to the chosen
/// output, i.e. the open-loop part of a network transfer function.
#[derive(Debug, Clone, PartialEq)]
pub enum OpenLoopPart {
    Port(InputPort),
    Custom(RationalFunction),
}

/// Controlling/observing agents together with the signal path through them.
#[derive(Debug, Clone, PartialEq)]
pub struct PortSelection {
    pub controlling: usize,
    pub observing: usize,
    pub open_loop_part: OpenLoopPart,
}

impl PortSelection {
    pub fn new(controlling: usize, observing: usize, input: InputPort) -> Self {
        PortSelection {
            controlling,
            observing,
            open_loop_part: OpenLoopPart::Port(input),
        }
    }

    /// `M_s` for this selection.
    pub fn open_loop_tf(&self, agent: &AgentModel) -> RationalFunction {
        match &self.open_loop_part {
            OpenLoopPart::Port(InputPort::ControllerInput) => agent.open_loop(),
            OpenLoopPart::Port(InputPort::PlantInput) => agent.plant().clone(),
            OpenLoopPart::Port(InputPort::PlantOutput) => RationalFunction::one(),
            OpenLoopPart::Custom(m) => m.clone(),
        }
    }

    /// Transfer function `M_s * S_co` from the selected input to the output.
    pub fn transfer_function(
        &self,
        g: &crate::graph::WeightedDigraph,
        agent: &AgentModel,
    ) -> Result<RationalFunction> {
        let s = network_part(g, self.controlling, self.observing, agent)?;
        Ok(general_io_tf(&s, &self.open_loop_tf(agent)))
    }
}
