//! Exact computational engine for the modular representation theory of
//! finite groups at desk scale.
//!
//! The crate builds twisted group algebras of finite groups over concrete
//! finite fields, decomposes them into blocks, enumerates local pointed
//! groups and weights, runs the Fitting block recursion, and cross-checks
//! the resulting counting identities. Everything is exact; there is no
//! floating point anywhere.

pub mod error;
pub mod field;
pub mod fitting;
pub mod group;
pub mod algebra;
pub mod cyclotomic;
pub mod kstar;
pub mod modmat;
pub mod modsolve;
pub mod rep;
pub mod weights;

pub use error::{Error, Result};
