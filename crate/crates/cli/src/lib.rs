//! Experiment driver behind the `splinewidth` binary: JSON configs in,
//! CSV tables, SVG plots, a JSON summary and a run manifest out.

pub mod config;
pub mod experiments;
pub mod output;
pub mod svg;
