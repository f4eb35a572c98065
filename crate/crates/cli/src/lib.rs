//! IO, file formats, experiment orchestration, and the command front end
//! for the `privsynth` core library.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod jsonfmt;
pub mod parallel;
pub mod pipeline;
