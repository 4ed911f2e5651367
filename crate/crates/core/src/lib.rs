//! Finite groupoid models of mapping stacks.
//!
//! Groupoids, functors and natural transformations with decidable
//! equivalence; functor groupoids and the exponential law; inertia and loop
//! groupoids of classifying groupoids; path groupoids and homotopy fibers;
//! integral homology of nerves; and Čech cocycles on finite Alexandrov
//! spaces.

pub mod equivalence;
pub mod error;
pub mod functor;
pub mod group;
pub mod groupoid;
pub mod loops;
pub mod mapping;
pub mod fibration;
pub mod homology;
pub mod cech;
pub mod format;
pub mod corpus;

pub use equivalence::{are_equivalent, skeleton, Equivalence, EquivalenceWitness, Refutation};
pub use error::{Error, Result};
pub use functor::{GroupoidFunctor, NaturalTransformation};
pub use group::{FiniteGroup, Perm};
pub use groupoid::{FiniteGroupoid, MorId, ObjId};
