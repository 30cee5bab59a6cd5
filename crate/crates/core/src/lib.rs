pub mod cli;
pub mod diagnostics;
pub mod fstructure;
pub mod glue_core;
pub mod meaning;
pub mod prover;
mod syntax;

pub use syntax::ParseError;
