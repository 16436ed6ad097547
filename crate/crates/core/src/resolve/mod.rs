//! Minimal cofree coresolutions and their dual projective resolutions.

mod contra;
mod coresolution;

pub use contra::{dualize_to_contramodule_resolution, ContraExt, ContramoduleResolution};
pub use coresolution::{
    betti_dims, minimal_coresolution, minimal_coresolution_with, CoresolutionStep, MinimalCoresolution, ResolutionReport,
    Retraction,
};
