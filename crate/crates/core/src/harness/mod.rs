//! Identity registry, verification reports, the suite grid and output.

mod config;
mod format;
mod registry;
mod report;
mod suite;

pub use config::*;
pub use format::*;
pub use registry::*;
pub use report::*;
pub use suite::*;
