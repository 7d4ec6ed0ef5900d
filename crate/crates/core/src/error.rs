use thiserror::Error;

use crate::compile::WellPosedness;
use crate::netlist::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network ({} diagnostic(s))", .0.len())]
    Invalid(Vec<Diagnostic>),

    #[error("{0}")]
    NotWellPosed(WellPosedness),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("i*omega*I - F is singular at omega = {omega} (condition number {condition:e})")]
    SingularFrequency { omega: f64, condition: f64 },

    #[error("linear solve failed: {0}")]
    Solve(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
