//! Experiment harness and I/O: JSON configuration, the reference
//! experiments, landscape scans, and CSV/SVG emission.

pub mod config;
pub mod experiment;
pub mod svg;

pub use config::{config_from_json, load_config, ExperimentConfig};
pub use experiment::{
    preset, run_experiment, run_inversion, run_scan, write_artifacts, ExperimentArtifacts,
    ExperimentId, ScanRequest,
};
pub use svg::{emit_svg, Series};
