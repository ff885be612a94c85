use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape descriptor: {0}")]
    InvalidShape(String),

    #[error("rasterization at h = {h} produced no interior cells")]
    EmptyRasterization { h: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "eigensolver did not converge: {converged} of {requested} pairs within tolerance \
         after a basis of {basis} vectors (worst relative residual {worst_residual:.3e})"
    )]
    NonConvergence {
        requested: usize,
        converged: usize,
        basis: usize,
        worst_residual: f64,
    },

    #[error("factorization broke down at pivot {pivot} (value {value:.3e})")]
    FactorizationBreakdown { pivot: usize, value: f64 },

    #[error("eigenfunction is below the zero threshold on every cell")]
    DegenerateEigenfunction,

    #[error("discs {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("disc {0} is not contained in the region")]
    OutsideRegion(usize),

    #[error("packing has no discs")]
    EmptyPacking,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
