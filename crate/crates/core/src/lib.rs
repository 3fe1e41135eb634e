//! Exact operator calculus for formal Kuranishi deformation theory of complex
//! structures on a polydisk chart and on flat tori.

pub mod calculus;
pub mod coef;
pub mod error;
pub mod forms;
pub mod funring;
pub mod fuzz;
pub mod hodge;
pub mod kuranishi;
pub mod parse;
pub mod scalars;
pub mod submanifold;

pub use coef::{CKey, Coef};
pub use error::{Error, Result};
pub use forms::{canonicalize, FormKey, Geometry, RawTerm, VForm};
pub use funring::{Basis, DerivKind, FunctionElement, RingKind};
pub use scalars::{GaussInt, GaussRat, MonomialIdeal, TMono, TSeries};
