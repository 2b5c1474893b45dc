//! File formats, solver routing and the command-line surface of `briberon`.

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod format;
pub mod solve;
