//! Transient heat conduction around a spherical ablation electrode.
//!
//! Closed-form parabolic and hyperbolic (Cattaneo-Vernotte) solutions on the
//! unbounded domain `r >= r0` and series solutions on the shell `[r0, r1]`,
//! plus an explicit finite-difference solver used as an independent check.

pub mod error;
pub mod fd_oracle;
pub mod finite_spectral;
pub mod infinite_hyperbolic;
pub mod infinite_parabolic;
pub mod params;
pub mod profile;
pub mod quad;
pub mod roots;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{derive_params, omega_roots, DerivedParams, Equation, OmegaRoots, PhysicalParams, RootBranch};
pub use quad::{QuadratureControl, SpecfunValue};
pub use profile::{compare, Model, Norm, Sample, TemperatureProfile};
