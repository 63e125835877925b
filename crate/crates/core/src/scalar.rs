//! Exact integer scalars.
//!
//! The integer linear algebra (matrices, Smith normal form) and the circle
//! values are generic over [`Scalar`]; the rest of the crate instantiates
//! them at `i64` through the aliases in the crate root. Machine integers
//! are fine for every table-sized computation here, while `BigInt` is
//! available when intermediate transforms might grow.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("value fits scalar")
    }

    fn of_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("value fits scalar")
    }

    /// Least non-negative residue modulo `m` (`m > 0`).
    fn rem_nonneg(&self, m: &Self) -> Self {
        self.mod_floor(m)
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}
