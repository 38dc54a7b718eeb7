//! Exact computation of differential operators, dualizing complexes and shriek functors over
//! finitely presented algebras over a field.

pub mod complex;
pub mod derived;
pub mod diagonal;
pub mod duality;
pub mod error;
pub mod finite;
pub mod groebner;
pub mod invariants;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod par;
pub mod poly;
pub mod resolve;
pub mod ring;
pub mod scalar;
pub mod tower;

pub use complex::{ChainComplex, ChainMap};
pub use derived::Window;
pub use error::{Error, Result};
pub use matrix::{Matrix, Vector};
pub use module::{FPModule, ModuleMap, Subquotient};
pub use monomial::{Monomial, ModuleOrder, TermOrder};
pub use poly::{Poly, PolyRing};
pub use ring::{Ring, RingMap, RingPresentation};
pub use scalar::{Field, Scalar};
