//! Independent evaluation of both sides of Dixon's identity in its binomial,
//! hypergeometric, basic hypergeometric and Dirichlet-series forms.

pub mod dseries;
pub mod error;
pub mod exactcomb;
pub mod exec;
pub mod harness;
pub mod hyper;
pub mod qseries;
pub mod numerics;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numerics::{HpReal, Precision, SummationDiagnostics};
