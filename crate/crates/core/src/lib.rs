pub mod classify;
pub mod data;
pub mod error;
pub mod linalg;
pub mod pipelines;
pub mod regress;

pub use error::{Error, Result};

/// Runs every Rust listing in the README and the guide under `book/src` as a
/// doctest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/linalg.md")]
    mod linalg {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/least-squares.md")]
    mod least_squares {}
    #[doc = include_str!("../../../book/src/logistic.md")]
    mod logistic {}
    #[doc = include_str!("../../../book/src/optimizers.md")]
    mod optimizers {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/style.md")]
    mod style {}
    #[doc = include_str!("../../../book/src/academic.md")]
    mod academic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
