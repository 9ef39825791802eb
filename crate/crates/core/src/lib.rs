//! Exact and numeric algebra on third-order hypermatrices under the ternary
//! Bhattacharya-Mesner product.

pub mod dependence;
pub mod error;
pub mod hypermatrix;
pub mod io;
pub mod inverse;
pub mod matrix;
pub(crate) mod numeric;
pub mod nullity;
pub mod product;
pub mod random;
pub mod rank;
pub mod scalar;
pub mod util;

pub use error::{Error, Result};
pub use hypermatrix::{Hypermatrix, Shape, SliceSpec};
pub use matrix::Matrix;
pub use scalar::{Complex, ComplexField, Field, Fp, PrimeField, Rational, RationalField, Ring, Scalar, ScalarDomain};
pub use numeric::SolverConfig;
