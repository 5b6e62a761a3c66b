//! Core of the INSPECT probing pipeline.
//!
//! Everything here is pure computation over in-memory data and builds
//! without `std`: the Java lexer and keyword taxonomy, structural metrics,
//! mutation operators, dataset construction, the embedding container codec,
//! the linear probe trainer, and result aggregation. File IO, the CLI and
//! parallel drivers live in the `inspect` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod embedstore;
pub mod lexer;
pub mod mutator;
pub mod probe;
pub mod report;
pub mod rng;
pub mod structure;
pub mod task;
pub mod taskgen;

pub use lexer::{tokenize, Token, TokenClass, TokenKind};
pub use task::Task;
