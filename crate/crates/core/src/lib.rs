//! Plane-pulse diffraction by a two-dimensional wedge.
//!
//! The exterior angle `Q = {phi < theta < 2pi}` of a wedge with opening `phi`
//! is hit by a plane pulse `F(t - n0·y)`. For Dirichlet–Dirichlet,
//! Neumann–Neumann and Dirichlet–Neumann faces the library evaluates the
//! reflected images, the Sommerfeld–Malyuzhinets diffracted wave, closed forms
//! for step and impulse pulses, long-time limits, critical-ray jumps,
//! stationary densities and limiting amplitudes.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.
//!
//! ```
//! use wedgewave::{BoundaryKind, Profile, Quadrature, Wedge};
//! use std::f64::consts::PI;
//!
//! let cfg = Wedge::new(PI / 3.0, PI / 4.0).unwrap();
//! let quad = Quadrature::default();
//! let s = wedgewave::timedomain::total(1.0, PI, 2.0, &Profile::Heaviside, &cfg, BoundaryKind::DD, &quad).unwrap();
//! let closed = wedgewave::heaviside::heaviside_diffracted(1.0, PI, 2.0, &cfg, BoundaryKind::DD).unwrap();
//! assert!((s.u_d - closed).norm() < 1e-9);
//! ```

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod heaviside;
pub mod kernels;
pub mod profiles;
pub mod quadrature;
pub mod scalar;
pub mod spectral;
pub mod timedomain;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::{classify, make_wedge, BoundaryKind, Sector, WedgeConfig, DEFAULT_EPS_RAY};
pub use heaviside::{b_of, heaviside_diffracted, i_of, l_of, longtime_limit, sobolev_total_from_ours, sobolev_u, total_longtime_limit, SobolevVars};
pub use kernels::{decay_bound, folded_z, h_kernel, z_kernel, DecayBound, KernelTermSet, TermKind};
pub use profiles::{eval_profile, incident, incident_polar, FieldSample, Profile, SmoothRamp, Tabulated};
pub use quadrature::{integrate, Estimate, QuadratureSpec};
pub use scalar::Real;
pub use spectral::{amplitude, limiting_amplitude, s_d, s_in, s_r, s_s};
pub use timedomain::{diffracted, diffracted_delta, jump, jump_law, reflected, reflected_delta, total, total_delta, DeltaField, Impulse};
pub use validation::{boundary_report, helmholtz_residual, oracle_quadrature, wave_residual, BoundaryMode, BoundaryReport};

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;

pub type Wedge = WedgeConfig<f64>;
pub type Wedge32 = WedgeConfig<f32>;
pub type Pulse = Profile<f64>;
pub type Pulse32 = Profile<f32>;
pub type Kernel = KernelTermSet<f64>;
pub type Quadrature = QuadratureSpec<f64>;
pub type Quadrature32 = QuadratureSpec<f32>;
pub type Sample = FieldSample<f64>;
pub type Report = BoundaryReport<f64>;
