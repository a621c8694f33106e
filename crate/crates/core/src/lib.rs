//! Numerical laboratory for linear operators that narrow the strip
//! containing the zeros of a polynomial.
//!
//! Operators are applied exactly to polynomials; every claim about zero
//! locations is then checked by computing roots or counting zeros with the
//! argument principle. Class-membership tests are sampled falsification
//! tests: a `Pass` verdict is evidence, not proof.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod fourier;
pub mod ops;
pub mod poly;
pub mod quad;
pub mod random;
pub mod roots;
pub mod stripcls;
pub mod sturm;
pub mod suites;
pub mod symbol;
pub mod verdict;

pub type C64 = num_complex::Complex<f64>;

pub use error::{Error, Result};
pub use ops::{DiffOp, Family, MultiplierOp};
pub use poly::{MobiusMap, Poly};
pub use roots::{find_roots, Rect, Region, RootSet};
pub use symbol::{BivarTrunc, LinearOpTable};
pub use verdict::{SampleGrid, Status, Verdict, Witness};
