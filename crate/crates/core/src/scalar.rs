//! Integer scalar abstraction for the counting formulas.
//!
//! Point counts and bounds are exact integers. Everything that evaluates
//! them is generic over [`Count`], so the same code runs in `i64` for
//! ordinary sweeps and in `i128` when q^n gets large.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, PrimInt, Signed, ToPrimitive};

pub trait Count:
    PrimInt
    + Signed
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedMul
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("count fits in scalar type")
    }

    fn as_i128(self) -> i128 {
        self.to_i128().expect("count fits in i128")
    }
}

impl Count for i64 {}
impl Count for i128 {}

/// `base^exp` with overflow reported as a panic naming the operands.
pub fn ipow<T: Count>(base: T, exp: u32) -> T {
    num_traits::checked_pow(base, exp as usize)
        .unwrap_or_else(|| panic!("{base}^{exp} overflows the counting scalar"))
}
