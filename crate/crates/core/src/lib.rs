//! Finite-mode fermionic wedge calculus.
//!
//! Everything is exact finite linear algebra over a chosen scalar mode:
//! arbitrary-precision rationals for the correctness suites, binary64 for
//! the numeric estimate suites. The library covers the antisymmetric tensor
//! algebra (alternizer, wedge products, pairings, weighted norms), the
//! contraction machinery, graded Fock vectors with CAR ladder operators,
//! integral kernel operators with their symbols, and the kernel expansion
//! of arbitrary operators on the truncated Fock space.

pub mod bits;
pub mod bounds;
pub mod contract;
pub mod error;
pub mod expansion;
pub mod fock;
pub mod kernelop;
pub mod linalg;
pub mod modespace;
pub mod operator;
pub mod oracle;
pub mod scalar;
pub mod suites;
pub mod wedge;

pub use error::{Error, Result};
pub use modespace::{ModeSpace, Ms};
pub use scalar::Scalar;

/// Rational scalar used by the exact mode.
pub type Rational = num::rational::BigRational;
