pub mod classical;
pub mod cli;
pub mod closed_forms;
pub mod dynamics;
pub mod error;
pub mod floquet;
pub mod format;
pub mod graph;
pub mod spectral;
