use crate::modulation::Dimensionality;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Gauss-Hermite rule of order {order} unavailable: {reason}")]
    HermiteRule { order: usize, reason: String },

    #[error("integrand is not finite at node {node} (value {value})")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error(
        "adaptive quadrature exceeded {limit} subdivisions \
         (partial estimate {estimate:e}, error indicator {error_estimate:e})"
    )]
    SubdivisionLimit {
        limit: usize,
        estimate: f64,
        error_estimate: f64,
    },

    #[error("dimensionality mismatch: constellation is {constellation:?}, noise is {noise:?}")]
    DimensionMismatch {
        constellation: Dimensionality,
        noise: Dimensionality,
    },

    #[error("mutual information {value} lies outside [0, {max}] beyond tolerance")]
    RateOutOfRange { value: f64, max: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{clamped} of {total} samples fell below the density floor")]
    DensityUnderflow { clamped: u64, total: u64 },

    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),
}
