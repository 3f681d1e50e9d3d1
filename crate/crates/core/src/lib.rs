//! Exact-arithmetic toolkit for generalized matrix algebras built from
//! Morita contexts, and for k-commuting linear maps on them.
//!
//! The layers, bottom up: [`ring`] (coefficients), [`solve`] (linear
//! systems over fields and `Z/n`), [`algebra`] (structure constants,
//! centers, Engel sets), [`morita`] (contexts and the algebra they
//! generate), [`maps`] and [`derivations`] (the classification checks),
//! [`families`] (standard examples), and [`oracle`] (definitional brute
//! force used to cross-check everything else).
//!
//! Around them: [`schema`] reads and writes the versioned JSON documents,
//! [`report`] holds the per-condition check lines, and [`sample`] draws
//! seeded random elements of a submodule.

pub mod algebra;
pub mod derivations;
pub mod error;
pub mod families;
pub mod linmap;
pub mod maps;
pub mod morita;
pub mod oracle;
pub mod report;
pub mod ring;
pub mod sample;
pub mod schema;
pub mod solve;

pub use algebra::{Algebra, Element, Submodule};
pub use error::{Error, Result};
pub use linmap::LinMap;
pub use morita::{build_gma, GMAlgebra, MoritaContext};
pub use ring::{RingSpec, Scalar};
