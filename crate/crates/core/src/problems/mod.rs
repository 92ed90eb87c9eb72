//! Spatially discretised benchmark problems.

pub mod acoustic;
pub mod boussinesq;
pub mod io;
pub mod stencil;

pub use acoustic::{
    exact_acoustic_advection, multiscale_initial_data, AcousticAdvection, MultiscalePart,
    PressureProfile, ProblemError,
};
pub use boussinesq::{
    buoyancy_cross_section, gravity_wave_initial_data, Boussinesq, BoussinesqParams, Field,
    GravityWaveBubble, WallTreatment,
};
pub use stencil::{fd_weights, Stencil1D, StencilBias, StencilError};
