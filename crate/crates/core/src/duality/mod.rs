//! Dualizing complexes by the diagonal formula and by finite duality, shriek functors and
//! the verification harness.

pub mod smooth;
pub mod dualizing;
pub mod shriek;
pub mod verify;
