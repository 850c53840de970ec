//! Coordinate descent on positive-definite quadratics: runners for RCD, RPCD
//! and CCD, the expectation operators that govern their mean-squared
//! contraction, closed-form rate bounds, an exact-rational Sturm certifier
//! for the polynomial inequalities behind those bounds, and a derivative-free
//! search for worst-case Hessians.
//!
//! The unit of analysis is a unit-diagonal symmetric positive-definite
//! Hessian `A` with smallest eigenvalue `sigma`. `rho` of the expectation
//! operator `X -> E[T^T X T]` over an algorithm's random iteration matrix `T`
//! is the asymptotic per-epoch contraction factor of `E |x_k|^2`; everything
//! in this crate either computes that quantity, bounds it, or certifies the
//! bounds exactly.

pub mod bounds;
pub mod error;
pub mod exactpoly;
pub mod instances;
pub mod linalg;
pub mod neldermead;
pub mod objective;
pub mod operators;
pub mod rng;
pub mod runners;
pub mod worstcase;

pub use error::{Error, Result};
pub use instances::{QuadraticInstance, SignPattern};
pub use objective::{build_objective, Objective, ObjectiveSpec};
pub use operators::Restricted2x2;
pub use runners::{Algorithm, RunConfig, TrajectoryStats};
pub use worstcase::SearchResult;
