use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operand has degree {degree} in the infinitesimal; at most 1 is supported here")]
    UnsupportedDegree { degree: usize },

    #[error("two action-spectrum entries coincide at rank {rank}; perturb the shape by an infinitesimal")]
    TieInSpectrum { rank: usize },

    #[error("lattice tuples {first:?} and {second:?} both maximize the minimum action")]
    AmbiguousMaximizer { first: Vec<u64>, second: Vec<u64> },

    #[error("axes {first} and {second} both minimize the action")]
    AmbiguousMinimizer { first: usize, second: usize },

    #[error("({p}, {q}) are not relatively prime")]
    NotCoprime { p: i64, q: i64 },

    #[error("search budget exceeded after {explored} candidates (bound {bound})")]
    SearchBudgetExceeded { explored: usize, bound: usize },

    #[error("double point count is negative ({value})")]
    NegativeCount { value: i64 },

    #[error("double point count is not an integer (numerator {numerator} is odd)")]
    NonIntegral { numerator: i64 },

    #[error("recursion data for j = {j} is not integral: {what}")]
    NonIntegralData { j: usize, what: String },

    #[error("no sign makes (d, m) integral for ({p}, {q})")]
    NoIntegralSolution { p: i64, q: i64 },

    #[error("{value} is not a perfect square")]
    NotSquare { value: i64 },

    #[error("ratio {p}/{q} must exceed 6")]
    RatioTooSmall { p: i64, q: i64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the errors caused by coincident actions or non-unique optimizers.
    pub fn is_ambiguity(&self) -> bool {
        matches!(
            self,
            Error::TieInSpectrum { .. }
                | Error::AmbiguousMaximizer { .. }
                | Error::AmbiguousMinimizer { .. }
        )
    }
}
