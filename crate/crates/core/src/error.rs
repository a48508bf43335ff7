use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample contains a non-finite value: {0}")]
    NonFinite(f64),

    #[error("no default consistency constant for {estimator} at n = {n}")]
    UndefinedConstant { estimator: &'static str, n: usize },

    #[error("no solution: objective never reaches p = {p}")]
    NoSolution { p: f64 },

    #[error("asymptotic value is a discontinuity [{lower}, {upper}], not a scalar")]
    Discontinuous { lower: f64, upper: f64 },

    #[error("least-squares design is rank deficient")]
    RankDeficient,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
