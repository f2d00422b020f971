//! Square roots of H-selfadjoint quaternion matrices.

// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod error;
pub mod json;
pub mod linalg;
pub mod omega;
pub mod quat_matrix;
pub mod quaternion;
pub mod roots;
pub mod verify;

pub use error::{QrootError, Result};
pub use quat_matrix::QuatMatrix;
pub use quaternion::Quaternion;
