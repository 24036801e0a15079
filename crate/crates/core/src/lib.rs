//! Exact computations with rational Cherednik algebras of complex reflection
//! groups: Dunkl operators, PBW normal forms, the t = 0 center, rank-one KZ
//! monodromy, and Hecke algebras of 2-orbifolds.

pub mod error;
pub mod exactalg;
pub mod cherednik;
pub mod cli;
pub mod dunkl;
pub mod hecke;
pub mod kz;
pub mod reflgroup;

pub use error::{Error, Result};
