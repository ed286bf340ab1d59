//! Quantale-enriched categories over topological theories, computed on
//! finite carriers.
//!
//! The crate is layered bottom-up: [`quantale`] values, [`vrel`] matrices,
//! [`theory`] monads with their `T_ξ` extension, [`tcat`] categories,
//! functors and modules, [`presheaf`] categories with Yoneda and colimits,
//! [`monadic`] for the presheaf monad and quotients, and [`topo`] for finite
//! topological spaces.

pub mod error;
pub mod monadic;
pub mod presheaf;
pub mod quantale;
pub mod tcat;
pub mod theory;
pub mod topo;
pub mod vrel;

pub use error::{Error, Result};
pub use quantale::{Distance, Quantale, Value};
pub use vrel::{Carrier, VRel};
pub use theory::{TSpace, Theory, TheoryKind, Verdict};
pub use tcat::{TCategory, TFunctor, TModule};
