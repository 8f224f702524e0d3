//! Exact-arithmetic engine for polygonal substitution tilings.
//!
//! The crate builds tilings such as the pinwheel from substitution rules
//! with coordinates in a quadratic field Q(√D), validates the defining
//! conditions of a substitution rule exactly, computes the group generated
//! by relative tile orientations, provides the G(p,q) rotation-group
//! calculus (presentations, normal forms, element orders, order spectra)
//! used to tell tiling systems apart, and evaluates a finite-horizon
//! version of the tiling metric.
//!
//! Run the bundled examples (`cargo run --example <name>`) for a tour, or
//! the `subtile` binary for the command-line interface.

pub mod cli;
pub mod geom;
pub mod gpq;
pub mod metric;
pub mod orient;
pub mod rules;
pub mod scalar;
pub mod svg;
pub mod tiling;
pub mod validate;

pub use geom::{classify_angle, polygon_congruence, AngleClass, Isometry2, Point2, Rotation2, Similarity2};
pub use rules::{builtin_system, load_system, load_system_unvalidated};
pub use scalar::QScalar;
pub use tiling::{Patch, PlacedTile, Prototile, SubstitutionSystem};
pub use validate::{validate_rule, ValidateOptions, ValidationReport};
