use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("invalid code distance {0}: must be odd and at least 3")]
    InvalidDistance(usize),

    #[error("{kind} id {id} out of range (size {len})")]
    InvalidId {
        kind: &'static str,
        id: usize,
        len: usize,
    },

    #[error("perfect matching needs an even number of nodes, got {0}")]
    OddNodeCount(usize),

    #[error("curves never cross: {0}")]
    NoCrossing(String),

    #[error("resource cost diverges at alpha' = {0}")]
    Divergent(f64),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: if lo == 0.0 && hi == 1.0 {
                "[0, 1]"
            } else if lo == 0.0 && hi == 0.5 {
                "[0, 1/2]"
            } else {
                "bounded range"
            },
        })
    }
}

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: ">= 0",
        })
    }
}
