//! Library surface of the pipeline binary, exposed so integration tests can
//! drive the stages directly.

pub mod config;
pub mod io;
pub mod pipeline;
pub mod plot;
pub mod synth;
