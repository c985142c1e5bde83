//! Protected objects of finite groups and crossed modules on ribbon graphs.
//!
//! The Set case works with a finite group `G`: flat edge labellings of a
//! ribbon graph modulo vertex gauge transformations. The Cat case works with a
//! finite crossed module and produces a finite groupoid.

pub mod cat_protected;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod mcg;
pub mod ribbon;
pub mod xmod;

pub use cat_protected::{FiniteGroupoid, GroupoidFingerprint, IsomorphismVerdict, ProtectedGroupoid};
pub use error::{Error, Result};
pub use groups::{Elem, FiniteGroup, Group, GroupHom, Presentation, SurfaceTuple, TupleOrbit, Word};
pub use lattice::{InvarianceReport, ProtectedSet};
pub use mcg::SurfaceAutomorphism;
pub use ribbon::{End, HalfEdge, Move, MoveScript, RibbonGraph};
pub use xmod::{CrossedModule, NerveLevel};
