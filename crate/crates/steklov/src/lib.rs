//! Construction and numerical verification of Steklov/Robin isospectral domains.
//!
//! The crate builds flat surfaces and planar domains by gluing copies of a
//! polygonal tile along the edges of Schreier graphs of almost-conjugate
//! (Gassmann-equivalent) subgroup pairs, forms involution quotients with
//! mirror edges, and verifies isospectrality of the resulting Steklov,
//! Robin, and mixed eigenvalue problems with piecewise-linear finite
//! elements and exact discrete transplantation operators.
//!
//! Modules mirror the pipeline:
//!
//! * [`groups`] — finite groups as multiplication tables, Gassmann pairs,
//!   coset actions, exact rational intertwiners;
//! * [`schreier`] — edge-colored Cayley/Schreier graphs and their spectra;
//! * [`tiling`] — tiles, glued domains, involution quotients, conforming
//!   per-tile-identical meshes;
//! * [`spectral`] — stiffness/mass/boundary assembly, Dirichlet-to-Neumann
//!   Schur complements, Steklov/Robin/Dirichlet/Neumann eigensolves;
//! * [`verify`] — spectrum comparison, transplantation residuals, sloshing
//!   and density pipelines, nonisometry evidence;
//! * [`scene`] + [`cli`] — batch front end over config files.

pub mod cli;
pub mod error;
pub mod groups;
pub mod plot;
pub mod scene;
pub mod schreier;
pub mod spectral;
pub mod tiling;
pub mod verify;

pub use error::{Error, Result};
