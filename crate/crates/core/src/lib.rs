//! Exact symbolic-numeric toolkit for the planar Dunkl-Coulomb system.
//!
//! The library is organized around a small closed function class: finite
//! linear combinations of `x1^a * x2^eps * r^c * exp(-s r)` with exact
//! rational coefficients. Dunkl derivatives, reflections, and the Coulomb
//! potential all map this class into itself, so every algebraic statement
//! about the model (symmetry brackets, Casimir values, eigenvalue
//! equations) can be checked with zero rounding error.
//!
//! Layers, bottom to top:
//!
//! * [`rational`] - arbitrary-precision rational scalars.
//! * [`term`] - the canonical term representation and [`term::FunctionExpr`].
//! * [`operator`] - Dunkl operators and the symmetry-algebra catalogue.
//! * [`spectra`] - quantum numbers, energies, and level enumeration.
//! * [`orthopoly`] - exact Jacobi/Laguerre coefficients and Gaussian
//!   quadrature rules for the model's weight functions.
//! * [`wavefunction`] - bound-state eigenfunctions and inner products.
//! * [`verify`] - the runnable verification suite with mutation hooks.

pub mod error;
pub mod exec;
pub mod operator;
pub mod orthopoly;
pub mod rational;
pub mod spectra;
pub mod term;
pub mod verify;
pub mod wavefunction;

pub use error::Error;
pub use operator::{ModelParams, OperatorExpr};
pub use rational::Rational;
pub use spectra::QuantumNumbers;
pub use term::FunctionExpr;
