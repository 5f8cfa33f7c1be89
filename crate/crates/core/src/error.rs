use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElasticaError {
    #[error("grid size {0} is not a power of two (>= 4)")]
    NonPowerOfTwo(usize),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("component mismatch: {left} vs {right}")]
    ComponentMismatch { left: usize, right: usize },

    #[error("sample count {got} does not match grid size {expected}")]
    SampleCount { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("curvature degenerates: min kappa = {min_kappa:e} below threshold {threshold:e}")]
    DegenerateCurvature { min_kappa: f64, threshold: f64 },

    #[error("curve is not closed: |mean of v| = {defect:e}")]
    OpenLoop { defect: f64 },

    #[error("operator is singular (curvature vanishes identically)")]
    SingularOperator,

    #[error("dense solve failed: {0}")]
    SolverFailure(String),

    #[error("iteration did not converge after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("frame seed is not an orthonormal complement of u(0): defect {defect:e}")]
    BadSeed { defect: f64 },

    #[error("state is incompatible: frame periodicity defect {defect:e}")]
    Incompatible { defect: f64 },

    #[error("input is not real-valued: imaginary part {imag:e}")]
    NotReal { imag: f64 },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("explicit scheme unstable at t = {time}: norm growth {growth:e}")]
    Unstable { time: f64, growth: f64 },

    #[error("step failed at t = {time}: {source}")]
    StepFailed {
        time: f64,
        #[source]
        source: Box<ElasticaError>,
    },
}

pub type Result<T> = std::result::Result<T, ElasticaError>;
