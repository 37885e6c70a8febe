//! Dense linear-algebra kernels: matrix arithmetic, Householder QR,
//! symmetric eigensolvers and power iteration.

mod dense;
mod householder;
mod jacobi;
mod power;
mod qr;
pub mod vector;

pub use dense::DenseMatrix;
pub use householder::{HouseholderReflector, ReflectorStack, ZERO_COLUMN_TOL};
pub use jacobi::{jacobi_eigen, SymmetricEigen};
pub use power::{power_iterate, power_method, power_method_observed, PowerOptions, PowerResult};
pub use qr::{qr_factor, HouseholderQr};
