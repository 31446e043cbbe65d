//! Support code for the `dsalign` binary: input loading, run reports,
//! truth logs and the benchmark grid.

pub mod bench;
pub mod input;
pub mod report;
pub mod truth;

use std::fmt;

/// A check on results failed: oracle disagreement, a violated truth log or
/// an internally inconsistent alignment. The binary exits with status 1 for
/// these and status 2 for every other error.
#[derive(Debug)]
pub struct VerificationFailure(pub String);

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailure {}

/// Exit status for an error returned by any command.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let verification = err.chain().any(|e| {
        e.is::<VerificationFailure>()
            || matches!(
                e.downcast_ref::<dsalign::Error>(),
                Some(dsalign::Error::Internal(_))
            )
    });
    if verification {
        1
    } else {
        2
    }
}
