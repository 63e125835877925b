//! Finite groups given by multiplication tables: construction, subgroups,
//! quotients, products, homomorphisms and isomorphism testing.

mod abelian;
mod group;
mod hom;
mod iso;
mod products;
mod subgroup;

pub use abelian::{abelian_structure, abelianization};
pub use group::{FiniteGroup, GroupJson, DEFAULT_CAP, FULL_ASSOCIATIVITY_LIMIT};
pub use hom::GroupHom;
pub use iso::{are_isomorphic, fingerprint, Fingerprint};
pub use products::{direct_product, semidirect_product, validate_action, SemidirectProduct};
pub use subgroup::{generate_subgroup, quotient, Subgroup};
