//! Transfer functions of consensus networks of identical SISO agents.
//!
//! A network of `N` agents, each with open loop `M(s) = b(s) q(s) / (a(s) p(s))`,
//! exchanges output differences over a weighted digraph with Laplacian `L`.
//! The transfer function from the input of agent `c` to the output of agent `o`
//! factors into closed-loop terms `a p + k b q`, one per Laplacian eigenvalue in
//! the denominator and one per root of the single-integrator numerator in the
//! numerator. This crate computes that factorization, its combinatorial
//! ingredients (out-forest weights, shortest paths, grounded Laplacians) and a
//! set of independent numerical oracles to check it.

pub mod cli;
pub mod error;
pub mod graph;
pub mod netfunc;
pub mod poly;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

/// Dense real matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs-and-forests.md")]
    mod graphs_and_forests {}
    #[doc = include_str!("../../../book/src/single-integrator.md")]
    mod single_integrator {}
    #[doc = include_str!("../../../book/src/product-form.md")]
    mod product_form {}
    #[doc = include_str!("../../../book/src/zeros.md")]
    mod zeros {}
    #[doc = include_str!("../../../book/src/controllability.md")]
    mod controllability {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
