//! Fast-wave slow-wave spectral deferred corrections (fwsw-SDC) with
//! stability and dispersion analysis and two benchmark wave problems.
//!
//! The fast part of a split right-hand side is integrated implicitly and the
//! slow part explicitly, one node at a time, with sweeps that converge to the
//! collocation solution of a Radau, Lobatto or Legendre rule.

pub mod dispersion;
pub mod experiments;
pub mod linalg;
pub mod problems;
pub mod quadrature;
pub mod reference;
pub mod scalar;
pub mod sdc;

pub use dispersion::{DispersionCurve, DispersionScheme, WaveParams};
pub use experiments::{ExperimentError, Table};
pub use linalg::{CMatrix, GmresConfig, Scalar};
pub use problems::{AcousticAdvection, Boussinesq, BoussinesqParams};
pub use quadrature::{NodeFamily, QuadratureRule};
pub use reference::{LinearStepper, ReferenceScheme};
pub use scalar::{ScalarParams, StabilityGrid};
pub use sdc::{step, SdcConfig, SdcError, SplitSystem, StepOutcome, SweepState, UpdateMode};
