//! Tolerances and thresholds used by the probes and the acceptance suite.
//!
//! Values are measurement contracts for the default desk-scale grids, not
//! constants from the underlying theory (which states existence of bounds
//! but no numbers).

/// Relative L² agreement of k = 0 runs with classical Fourier/shift oracles.
pub const CLASSICAL_REDUCTION_L2: f64 = 1e-5;
/// Relative L² agreement of the truncated singular-integral route with the
/// classical truncated Hilbert oracle at k = 0.
pub const CLASSICAL_TRUNCATED_L2: f64 = 1e-3;
/// Relative residual of the kernel defining system on probe grids.
pub const KERNEL_SYSTEM_RESIDUAL: f64 = 1e-4;
/// Sup-norm error of the Gaussian fixed point of the transform.
pub const GAUSSIAN_FIXED_POINT: f64 = 1e-5;
/// |ratio - 1| for the Plancherel diagnostic on Schwartz-class samples.
pub const PLANCHEREL: f64 = 1e-6;
/// Relative L² round-trip error of inverse ∘ forward.
pub const ROUND_TRIP: f64 = 1e-6;
/// Radial (Rösler) vs spectral translation route agreement, relative to ‖f‖∞.
pub const ROUTE_AGREEMENT: f64 = 1e-4;
/// |mass - 1| for the rank-1 representing measure.
pub const MEASURE_MASS: f64 = 1e-8;
/// Relative mass allowed outside the predicted support.
pub const TOL_SUPPORT: f64 = 1e-6;
/// Relative peak required inside each orbit ball for sharpness.
pub const FLOOR_SUPPORT: f64 = 1e-3;
/// Pairwise route distances for the Riesz multiplier/truncated/heat triangle.
pub const RIESZ_ROUTE_TRIANGLE: f64 = 5e-2;
/// Residual of Σ_j R_j² + I on L² samples.
pub const RIESZ_SQUARE_IDENTITY: f64 = 1e-5;
/// Adjoint antisymmetry residual of the Riesz transforms.
pub const RIESZ_ANTISYMMETRY: f64 = 1e-5;
/// Allowed change of the Hörmander sup under grid doubling.
pub const HORMANDER_STABILITY: f64 = 0.2;
/// Weak pairing vs kernel double integral agreement.
pub const LEMMA41_AGREEMENT: f64 = 1e-3;
/// BMO score of constants.
pub const BMO_CONSTANT: f64 = 1e-10;
/// Allowed deviation of the k = 0 sgn BMO score from the interval oracle.
pub const BMO_SGN_ORACLE: f64 = 5e-2;
/// Stability of the L∞→BMO ratio under grid doubling / denser sampling.
pub const BMO_STABILITY: f64 = 0.15;
/// Slack factor for the proof-split diagnostic against the Hörmander sup.
pub const PROOF_SPLIT_SLACK: f64 = 1.1;
/// Default truncation of the singular-integral route.
pub const RIESZ_EPS: f64 = 1e-2;
/// Default heat-route time window.
pub const HEAT_T_MIN: f64 = 1e-4;
pub const HEAT_T_MAX: f64 = 1e3;
/// Default decay-certificate depth for the test class.
pub const TEST_CLASS_N_MAX: usize = 8;
