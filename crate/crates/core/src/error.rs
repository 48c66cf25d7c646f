use thiserror::Error;

/// Errors raised by graph construction, algebra and network analysis.
///
/// Node indices carried in errors are 1-based, as they appear in input files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive weight {weight} on arc {from}->{to}")]
    NonPositiveWeight { from: usize, to: usize, weight: f64 },
    #[error("node index {index} out of range 1..={node_count}")]
    NodeOutOfRange { index: usize, node_count: usize },
    #[error("duplicate arc {from}->{to}")]
    DuplicateArc { from: usize, to: usize },
    #[error("self-arc on node {node}")]
    SelfArc { node: usize },
    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("path count exceeds cap {cap}")]
    PathCapExceeded { cap: usize },
    #[error("graph too large for enumeration: {node_count} nodes, cap {cap}")]
    EnumerationCap { node_count: usize, cap: usize },
    #[error("cannot remove every vertex of the graph")]
    RemovesAllVertices,

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("relative degree undefined for a zero numerator")]
    ZeroNumerator,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("no path from node {from} to node {to}")]
    NoPath { from: usize, to: usize },
    #[error("complex gain {re}{im:+}i has no conjugate partner")]
    NonConjugateGains { re: f64, im: f64 },
    #[error("Laplacian has {count} eigenvalues at zero; network part needs exactly one")]
    MultipleZeroEigenvalues { count: usize },
    #[error("open loop has no integrator")]
    NoIntegrator,
    #[error("expected exactly one path from {from} to {to}, found {count}")]
    PathNotUnique {
        from: usize,
        to: usize,
        count: usize,
    },
    #[error("empty set of controlling nodes")]
    EmptyNodeSet,
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular system at sample point {re}{im:+}i")]
    SingularAtSample { re: f64, im: f64 },
    #[error("all sample points were rejected")]
    AllSamplesRejected,
}

impl Error {
    /// Stable short code for scripting and test assertions.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositiveWeight { .. } => "non-positive-weight",
            Error::NodeOutOfRange { .. } => "node-out-of-range",
            Error::DuplicateArc { .. } => "duplicate-arc",
            Error::SelfArc { .. } => "self-arc",
            Error::EmptyGraph => "empty-graph",
            Error::PathCapExceeded { .. } => "path-cap-exceeded",
            Error::EnumerationCap { .. } => "enumeration-cap",
            Error::RemovesAllVertices => "removes-all-vertices",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::ZeroNumerator => "zero-numerator",
            Error::ZeroDenominator => "zero-denominator",
            Error::NoPath { .. } => "no-path",
            Error::NonConjugateGains { .. } => "non-conjugate-gains",
            Error::MultipleZeroEigenvalues { .. } => "multiple-zero-eigenvalues",
            Error::NoIntegrator => "no-integrator",
            Error::PathNotUnique { .. } => "path-not-unique",
            Error::EmptyNodeSet => "empty-node-set",
            Error::Dimension(_) => "dimension",
            Error::SingularAtSample { .. } => "singular-at-sample",
            Error::AllSamplesRejected => "all-samples-rejected",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
