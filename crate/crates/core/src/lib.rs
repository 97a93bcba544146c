//! Exact linear algebra, skew group algebras, PBW checks for filtered quotients
//! of `T_k(V)#G`, Drinfeld orbifold parameters and twisted-product resolutions.

pub mod drinfeld;
pub mod error;
pub mod group;
pub mod oracle;
pub mod linear;
pub mod par;
pub mod pbw;
pub mod resolution;
pub mod skew;

pub use error::{Error, Result};
