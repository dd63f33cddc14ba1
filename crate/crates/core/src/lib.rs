//! Exact evaluation of stringy motives of linear quotient singularities.
//!
//! The crate is `no_std` (with `alloc`): every module is pure computation on
//! exact values.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod field;
pub mod linalg;
pub mod series;
pub mod stringy;
pub mod tuning;
pub mod covers;
pub mod groups;
pub mod motivic;
