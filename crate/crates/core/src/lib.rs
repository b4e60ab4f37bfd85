//! Entanglement dynamics of two Heisenberg-coupled qubits, each damped by its
//! own Lorentzian (non-Markovian) vacuum bath.
//!
//! The crate offers three independent routes to the same dynamics:
//!
//! * closed-form rate functions ([`rates`]) feeding an integrating-factor
//!   solution of the reduced X-state equations ([`propagator`]),
//! * a fixed-step Runge–Kutta integration of those same reduced equations,
//! * a direct integration of the time-local master equation on the full 4×4
//!   density matrix ([`oracle`]).
//!
//! [`concurrence`] turns states into entanglement, [`regimes`] and [`sweep`]
//! drive parameter scans, and [`verify`] bundles the cross-checks.

pub mod concurrence;
pub mod error;
pub mod linalg;
pub mod model;
mod ode;
pub mod oracle;
pub mod propagator;
pub mod quadrature;
pub mod rates;
pub mod regimes;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
