//! Simulation of a prolate-ellipsoid rolling robot driven from inside by a
//! gyroscope in a two-axis gimbal.
//!
//! The shell rolls on a horizontal plane; all dynamics are written as
//! torques on the shell. See the cargo examples for entry points.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod integrator;
pub mod kinematics;
pub mod symbolic;
pub mod validation;

pub use error::{Error, Result};
