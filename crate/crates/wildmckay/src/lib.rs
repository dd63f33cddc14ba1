//! JSON formats, a small expression language for motivic values, and the
//! command-line front end for `wildmckay-core`.

pub mod cli;
pub mod expr;
pub mod json;
