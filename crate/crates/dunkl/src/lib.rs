//! Dunkl harmonic analysis at desk scale.
//!
//! The crate builds reflection groups and their invariant weights, evaluates
//! the Dunkl kernel for the supported group kinds (trivial, rank-1, Z₂
//! coordinate products), and layers the Dunkl transform, translations,
//! convolution, Riesz transforms and a Dunkl-type BMO norm on top. Each
//! analytic statement that the library is built to check ships as a probe
//! returning a structured report.

pub mod bmo;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod operator;
pub mod report;
pub mod riesz;
pub mod series;
pub mod support;
pub mod tolerances;
pub mod transform;
pub mod translation;

pub use error::{DunklError, Result};
pub use geometry::{
    reflect, OrbitRegion, ReflectionGroup, RootSystemSpec, SquareMatrix, WeightContext,
};
pub use grid::{
    ball_measure, integrate_weighted, lp_norm, profile_of, radialize, Domain, GridFunction,
    GridSpec, RadialProfile,
};
pub use series::{GroupKind, KernelEvaluator};
pub use transform::{Engine, Spectrum};
