//! Finite truncations of profinite completions of group extensions.
//!
//! Everything is computed exactly on finite groups: character groups of
//! finite abelian groups, dual actions and their orbits, semidirect
//! reconstructions, wreath products, the lamplighter tower, Heisenberg
//! groups over finite rings, and low-index subgroups of finitely presented
//! groups.

pub mod abdual;
pub mod catalog;
pub mod charorbit;
pub mod cli;
pub mod error;
pub mod findex;
pub mod fingrp;
pub mod heisen;
pub mod lamptower;
pub mod report;
pub mod scalar;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
pub use fingrp::{FiniteGroup, GroupHom, Subgroup, DEFAULT_CAP};

/// Circle values at machine precision.
pub type Rotation = abdual::Rotation<i64>;
/// Integer matrices at machine precision.
pub type IntMatrix = abdual::IntMatrix<i64>;
/// Smith form at machine precision.
pub type SmithForm = abdual::SmithForm<i64>;
