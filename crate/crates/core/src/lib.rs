//! # UAM core
//!
//! Planar model of a unidirectional-thrust quadrotor carrying a rigid 1-DoF
//! arm that pushes on an inclined flat work surface.
//!
//! ## Modules
//!
//! - [`geometry`]: frames, angle conventions, the orthogonal-push pose constraint
//! - [`force_model`]: closed-form static-equilibrium contact force and thrust, singularity guard
//! - [`dynamics`]: composite rigid-body plant, penalty contact, RK4 integrator
//! - [`actuation`]: four-rotor allocation with per-rotor saturation
//! - [`estimation`]: IMU-based external wrench observer and contact detector
//! - [`control`]: baseline altitude/attitude control and the hybrid attitude/force controller
//! - [`harness`]: scenario configuration, case runner, telemetry, reports and plots

pub mod actuation;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod estimation;
pub mod force_model;
pub mod geometry;
pub mod harness;

pub use actuation::{allocate, achieved_wrench, Allocation, RotorCommand, RotorLayout};
pub use control::{Controller, Gains, Mode, Setpoint};
pub use dynamics::{ContactParams, PlanarState, UamParams, Wrench2D};
pub use error::{Error, Result};
pub use estimation::{ContactDetector, WrenchEstimate, WrenchObserver};
pub use force_model::{equilibrium_forces, EquilibriumSolution, MassGeometry};
pub use geometry::{PoseConfig, SurfaceDef, Vec2};
pub use harness::{run_case, run_table, SimCase, SimReport};

/// Standard gravity used by all fixtures [m/s²].
pub const GRAVITY: f64 = 9.81;
