//! Command-line front end for `eraserlab-core`: built-in eraser scenarios,
//! basis sweeps, DSL execution, CSV output and plain-text state files.

pub mod commands;
pub mod csv;
pub mod statefile;
