//! Vibration propagation from skin-mounted haptic units.
//!
//! [`materials`] and [`elastic`] hold the scalar physics, [`solver`] the
//! layered skin model, [`unit`] the encapsulation designs and their
//! material inequalities, [`optimizer`] the design search and [`signals`]
//! the vibrometer trace pipeline.

pub mod bessel;
pub mod elastic;
pub mod error;
pub mod io;
pub mod materials;
pub mod optimizer;
pub mod parallel;
pub mod signals;
pub mod solver;
pub mod unit;

pub use error::{Error, Result};
pub use materials::Material;
pub use parallel::Execution;
