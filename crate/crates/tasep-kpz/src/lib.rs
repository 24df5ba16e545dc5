//! Exact finite-time current statistics of the periodic TASEP and the
//! universal KPZ scaling functions it converges to in finite volume.
//!
//! The crate is organized in two layers that validate each other:
//!
//! * Microscopic layer: the totally asymmetric simple exclusion process on a
//!   periodic lattice of `L` sites with `N` particles. The module [`oracle`]
//!   computes current and height statistics by brute-force evolution of the
//!   deformed master equation; [`bethe`] solves the Bethe equation in its
//!   decoupled one-variable form and continues root frames along paths in the
//!   complex `B` plane; [`surface`] assembles the monodromy group, connected
//!   components and genus of the underlying compact Riemann surface; and
//!   [`heightprob`] evaluates the exact height-probability contour formula on
//!   that surface. [`spectrum`] enumerates all Bethe eigenstates at fixed
//!   fugacity and rebuilds generating functions from the spectral
//!   decomposition. [`betheopen`] covers the open boundary analogue.
//!
//! * Scaling layer: the module [`kpz`] evaluates the universal finite-volume
//!   KPZ fixed-point quantities built from half-integer polylogarithms: the
//!   function chi and its particle-hole deformations, eigenvalue gaps,
//!   prefactors theta, generating functions, cumulants, height distributions,
//!   stationary large deviations, and Brownian-bridge Monte Carlo
//!   cross-checks. [`largel`] verifies that the microscopic layer converges
//!   to the scaling layer as the system grows, and [`conformal`] covers the
//!   low-energy conformal (Tomonaga-Luttinger) regime at fixed fugacity.
//!
//! All numerical kernels (complex linear algebra, matrix exponentials,
//! polynomial root finding, quadrature, power series) live in [`num`] and are
//! self-contained.

pub mod num;
pub mod oracle;
pub mod bethe;
pub mod surface;
pub mod heightprob;
pub mod spectrum;
pub mod betheopen;
pub mod kpz;
pub mod largel;
pub mod conformal;

/// Crate version string embedded in CLI outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
