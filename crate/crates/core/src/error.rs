use thiserror::Error;

use crate::oracle::EvalReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),
    #[error("series did not converge after {} terms (estimated error {:e})", .0.terms_used, .0.est_abs_error)]
    NotConverged(Box<EvalReport<f64>>),
    #[error("contour quadrature diverged (imaginary residue {residue:e})")]
    QuadratureDiverged { residue: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
