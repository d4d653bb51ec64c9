//! Numerical toolkit for LOCC inequalities on Gaussian coherent-state
//! ensembles.
//!
//! An *LOCC inequality* is an efficiently computable upper bound on the
//! fidelity with which any local-operations-and-classical-communication
//! process can simulate a given Gaussian unitary acting on coherent states
//! drawn from an i.i.d. Gaussian ensemble. Experimental violation of such a
//! bound certifies that the dynamics (e.g. the Newtonian interaction between
//! trapped oscillators) cannot be mediated by a local classical field.
//!
//! The crate is organised along the pipeline used to design such a test:
//!
//! - [`gaussian`]: symplectic forms, Williamson eigenvalues, Gaussian
//!   operator norms, partial-transpose signatures, matrix exponentials.
//! - [`geometry`]: the gravitational coupling matrix `g` of a 3D arrangement
//!   of one-dimensional oscillators, and norm bounds on it.
//! - [`locc`]: the bound for a general symplectic matrix, the passive
//!   (beam-splitter) variant driven by `g`, the two-oscillator closed form,
//!   the rotating-wave residual and the heterodyne lower bound.
//! - [`short_time`]: sensitivity `eta`, the small-time expansion with
//!   rigorous remainders, and the Toeplitz asymptotics of the line geometry.
//! - [`finite_dim`]: finite-dimensional benchmarks: the swap bound and
//!   teleportation classical thresholds.
//! - [`experiment`]: feasibility gatekeeping: modelling assumptions, noise
//!   budgets, torsion-pendulum criteria.
//!
//! All quantities are SI; every frequency named `omega` is an angular
//! frequency in rad/s unless a conversion flag says otherwise.

// negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod finite_dim;
pub mod gaussian;
pub mod geometry;
pub mod locc;
pub mod short_time;
pub mod subsets;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;
