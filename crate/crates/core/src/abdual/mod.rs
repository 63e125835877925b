//! Finite abelian groups, their characters, and Pontryagin duality.

mod group;
pub mod matrix;
pub mod rotation;
pub mod snf;

pub use group::{pairing, AbGroup, AbSubgroup, Character};
pub use matrix::IntMatrix;
pub use rotation::Rotation;
pub use snf::{smith_diagonal_and_right, smith_normal_form, SmithForm};
