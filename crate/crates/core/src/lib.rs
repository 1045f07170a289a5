//! Collective dynamics of two quantum emitters coupled through a
//! one-dimensional waveguide whose left- and right-propagating modes travel
//! at different velocities.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`config`]: system parameters, derived delays and phases, initial states.
//! * [`lambert`]: the multi-branch complex Lambert W function.
//! * [`dynamics`]: amplitude solvers (exact delay series, method-of-steps
//!   integration, Lambert-W pole sum, non-retarded closed form), decay rates
//!   and super/subradiance classification.
//! * [`field`]: radiated intensity from the four light-cone terms and
//!   detector-integrated energies.
//! * [`directionality`]: steady-state emission probabilities, the
//!   directionality parameter, optimum states and Fisher information.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration used by the
//!   spectral oracles.
//!
//! Units: rates are in units of the total decay rate `gamma` (normally 1),
//! times in `1/gamma`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod directionality;
pub mod dynamics;
mod error;
pub mod field;
pub mod lambert;
pub mod quadrature;

pub use config::{wrap_angle, FieldGeometry, InitialState, SystemConfig};
pub use dynamics::{AmplitudeSource, AmplitudeTrace, Solver, SolverMethod};
pub use error::{Error, Result};
pub use num_complex::Complex64;
