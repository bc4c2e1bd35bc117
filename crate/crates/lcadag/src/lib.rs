//! File formats, DOT export, law oracles and the command-line front end for
//! [`lcadag_core`].

pub mod cli;
pub mod dot;
pub mod format;
pub mod oracle;

pub use lcadag_core as core;
