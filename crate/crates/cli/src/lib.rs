//! Front end for `casimir-core`: flag and config-file parsing, parameter
//! sweeps, cached point records and CSV/JSON output.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod cache;
pub mod configfile;
pub mod error;
pub mod output;
pub mod point;
pub mod resolve;
pub mod run;

pub use error::CliError;
pub use run::{run, Outcome};

/// Exit status for a finished run: 0 converged, 2 some point unconverged.
pub fn exit_code(outcome: &Outcome) -> u8 {
    if outcome.converged {
        0
    } else {
        2
    }
}
