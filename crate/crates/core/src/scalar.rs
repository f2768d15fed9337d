use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssign, PrimInt, Signed, ToPrimitive};

/// Signed machine integer usable as the exact scalar of every computation in
/// this crate.
///
/// Residues of negative numbers and the non-positive Ω-valuations need a
/// signed type. Products of two residues must fit, which [`PrimePower`]
/// checks when it is built.
///
/// [`PrimePower`]: crate::digits::PrimePower
pub trait Int:
    PrimInt
    + Signed
    + Integer
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Hash
    + Default
    + Send
    + Sync
    + 'static
{
    /// Index into a table of length q. Callers guarantee `0 <= self < q`.
    #[inline]
    fn idx(self) -> usize {
        self.to_usize().expect("index out of usize range")
    }

    #[inline]
    fn from_idx(k: usize) -> Self {
        Self::from_usize(k).expect("index does not fit the scalar type")
    }
}

impl<T> Int for T where
    T: PrimInt
        + Signed
        + Integer
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Hash
        + Default
        + Send
        + Sync
        + 'static
{
}
