//! Grade, height and Cohen–Macaulay checks for finitely presented commutative
//! algebras over QQ and prime fields, built on an exact Gröbner engine.

pub mod cmsense;
pub mod constructors;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod factor;
pub mod grade;
pub mod groebner;
pub mod homology;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalars;

pub use error::{Error, Result};
pub use ring::IntOrInf;
