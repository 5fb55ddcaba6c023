//! Finite quantaloid-enriched category theory.

pub mod adjunction;
pub mod completion;
pub mod distributor;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod presheaf;
pub mod qcat;
pub mod quantaloid;
pub mod sample;
pub mod setenriched;
pub mod topology;

pub use completion::{Completion, Presingleton, Singleton};
pub use distributor::Distributor;
pub use error::{Error, Report, Result};
pub use lattice::SupLattice;
pub use presheaf::{Fiber, FiberKind, MapSite, OplaxTransform, Presheaf};
pub use qcat::{QCategory, QFunctor, TypedSet};
pub use quantaloid::{Cell, MapCell, Obj, Quantaloid};
pub use topology::Topology;
