//! Exact-arithmetic engine for key polynomials, non-symmetric Macdonald
//! polynomials, and almost symmetric Schur functions.

pub mod almost;
pub mod cache;
pub mod combinatorics;
pub mod diagram;
pub mod filling;
pub mod operators;
pub mod poly;
pub mod qt;
pub mod verify;

pub use almost::{AlmostError, AlmostSymFunction, TailBasis};
pub use combinatorics::{Composition, Partition, SigmaPair, Weight};
pub use filling::{Basement, Filling, StarLabel};
pub use poly::SparsePolynomial;
pub use qt::{QtError, QtPoly, QtRational};
