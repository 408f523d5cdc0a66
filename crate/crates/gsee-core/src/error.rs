use thiserror::Error;

/// Errors surfaced by the estimation and simulation pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or plan parameter violates its domain.
    #[error("invalid input: {0}")]
    Domain(String),

    /// |g| = 1: the transverse-field Ising chain is gapless and the
    /// spectral-gap machinery does not apply.
    #[error("gapless model: |g| = 1 has no spectral gap (g = {g})")]
    Gapless { g: f64 },

    /// The requested initial overlap lies outside the range of the
    /// uniform-angle product-state family.
    #[error(
        "target overlap {target} unreachable: the product-state family peaks at {max_overlap}"
    )]
    UnreachableOverlap { target: f64, max_overlap: f64 },

    /// Rotation-synthesis corrections consumed the entire QSP error budget.
    #[error(
        "infeasible plan: eps0 = {eps0} is exhausted by rotation-synthesis \
         corrections (hamiltonian term {hamiltonian_term}, phase term {phase_term}); \
         dominant: {dominant}"
    )]
    InfeasiblePlan {
        eps0: f64,
        hamiltonian_term: f64,
        phase_term: f64,
        dominant: &'static str,
    },

    /// Antisymmetrization needs an alphabet of at least eta^2 symbols.
    #[error("alphabet too small: antisymmetrization requires N >= eta^2 (eta = {eta}, N = {n})")]
    AlphabetTooSmall { eta: u64, n: u64 },

    /// The reflector threshold must lie strictly inside the dense gap.
    #[error("mu = {mu} outside the open interval (E0, E1) = ({e0}, {e1})")]
    MuOutsideGap { mu: f64, e0: f64, e1: f64 },

    /// Configuration file or request validation failure.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors that indicate an infeasible amplitude-amplification
    /// plan rather than a malformed request.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::InfeasiblePlan { .. })
    }
}
