//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("not a valid rational literal: {0:?}")]
    BadRational(String),

    #[error("not a unit: series has zero constant term")]
    NotAUnit,

    #[error("log requires constant term 1, found {0}")]
    LogConstantTerm(String),

    #[error("exp requires zero constant term, found {0}")]
    ExpConstantTerm(String),

    #[error("reversion requires f(0) = 0 and f'(0) != 0")]
    RevertPrecondition,

    #[error("series order {have} too small, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("not rational of given degrees")]
    NotRational,

    #[error("Pade system is ambiguous: null space dimension {0} > 1")]
    PadeAmbiguous(usize),

    #[error("no operator at this (order, degree)")]
    NoOperator,

    #[error("underdetermined: increase series order")]
    Underdetermined,

    #[error("operator does not have maximally unipotent monodromy at 0")]
    NotMum,

    #[error("resonant recurrence: leading indicial value vanishes at step {0}")]
    ResonantRecurrence(usize),

    #[error("inconsistent log-solution system: operator not MUM or wrong holomorphic solution")]
    InconsistentFrobenius,

    #[error("indicial polynomial has a non-rational factor with coefficients {0:?}")]
    NonRationalIndicialFactor(Vec<String>),

    #[error("non-integrable: operator not in expected form")]
    NonIntegrable,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("no closed-form period for model {0:?}")]
    NoClosedForm(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("schema mismatch: {0}")]
    Schema(String),
}

impl Error {
    /// Tag an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
