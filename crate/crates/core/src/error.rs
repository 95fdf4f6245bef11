use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A kernel or problem parameter violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The Dirac kernel is a distribution and has no value at a point.
    #[error("the delta kernel has no pointwise evaluation")]
    NoPointwiseEvaluation,

    /// Asymptotics are requested for a kernel whose long-time behaviour is trivial.
    #[error("asymptotics trivial for {0} kernel")]
    TrivialAsymptotics(&'static str),

    /// The two Laplace inverters disagree beyond tolerance.
    #[error("inversion unreliable at t={t}: talbot={talbot}, gaver-stehfest={stehfest}")]
    InversionUnreliable { t: f64, talbot: f64, stehfest: f64 },

    /// Exponential-kernel trajectory needs beta > k.
    #[error("parameter regime invalid: beta={beta} must exceed urgency k={urgency}")]
    InvalidRegime { beta: f64, urgency: f64 },

    /// Impact of the delta kernel at the instant of an impulse trade.
    #[error("impact undefined pointwise: {0}")]
    UndefinedPointwise(String),

    /// Sampled trajectory grid unsuitable for the residual check.
    #[error("grid too coarse or non-uniform: {0}")]
    GridTooCoarse(String),

    /// A precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested combination is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The limit-order recursion of the binary tree never terminates.
    #[error("binary tree recursion diverges for p_up = {0}")]
    DivergentRecursion(f64),
}

pub type Result<T> = std::result::Result<T, ImpactError>;
