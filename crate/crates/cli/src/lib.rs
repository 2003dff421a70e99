//! Library surface of the workbench: corpus parsing and task runners,
//! shared by the binary and the acceptance suite.

pub mod corpus;
pub mod runner;
