//! Exact global alignment of a plain string against a degenerate string
//! under affine gap penalties.

pub mod alignment;
pub mod alphabet;
pub mod dstring;
pub mod error;
pub mod oracle;
pub mod penalties;
pub mod sim;
pub mod wavefront;

pub use alignment::{Alignment, EventSummary, Events, Op};
pub use alphabet::Alphabet;
pub use dstring::{DString, DegenerateLetter, WidthColumn, WidthPos};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use penalties::Penalties;
pub use wavefront::{dwf_align, WavefrontAligner};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dstrings.md")]
    mod dstrings {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/wavefront.md")]
    mod wavefront {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
