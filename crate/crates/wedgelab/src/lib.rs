//! Minkowski wedge geometry, finite-dimensional modular theory, and
//! geometric modular action checks.
//!
//! The crate has three layers:
//!
//! * **Geometry**: Poincare transformations ([`geometry`]), wedge regions
//!   with their edge reflections and reflection words ([`wedges`]), and
//!   recovery of a Poincare map from wedge correspondence data
//!   ([`recognition`]).
//! * **Operators**: modular data (conjugation, modular operator, flow) for
//!   a vector state on a finite-dimensional algebra ([`tomita`]), and a
//!   lattice model of wedge conjugations built from momentum-space
//!   translation and boost representations ([`freemodel`]).
//! * **Checks**: condition-by-condition verification that a family of
//!   wedge conjugations acts geometrically ([`cgma`]), with machine-
//!   readable reports ([`report`]) and a command-line front end ([`cli`]).

pub mod cgma;
pub mod cli;
pub mod feasibility;
pub mod freemodel;
pub mod geometry;
pub mod recognition;
pub mod report;
pub mod sampling;
pub mod tomita;
pub mod wedges;
