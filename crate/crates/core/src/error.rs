use std::fmt;

use thiserror::Error;

use crate::integrator::Trajectory;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("leading coefficient of the cubic is zero")]
    Degree,

    #[error("trajectory diverged at step {}", .0.step)]
    Diverged(Box<Divergence>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A blown-up integration run: the step where the guard tripped and every
/// finite sample produced before it.
#[derive(Clone)]
pub struct Divergence {
    pub step: usize,
    pub partial: Trajectory,
}

impl fmt::Debug for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Divergence")
            .field("step", &self.step)
            .field("samples", &self.partial.len())
            .field("last", &self.partial.samples.last().map(|s| s.x))
            .finish()
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
