//! Command-line front end for the `gridmono` toolkit.

pub mod args;
pub mod commands;
pub mod error;
pub mod eval;
pub mod request;

pub use commands::execute;
pub use error::CliError;
pub use request::RunRequest;

use gridmono::real::{parse_precision, PRECISION_ENV};

/// Rejects a set but malformed precision override instead of silently ignoring it.
pub fn check_precision_env() -> Result<(), CliError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) if parse_precision(&v).is_none() => Err(CliError::Usage(format!(
            "{PRECISION_ENV}=`{v}` is not an integer in {}..={}",
            gridmono::real::MIN_PRECISION_BITS,
            gridmono::real::MAX_PRECISION_BITS
        ))),
        _ => Ok(()),
    }
}
