//! Self-similarity of finite p-groups of degree p.
//!
//! A finite group `G` is self-similar of degree `p` exactly when it has a
//! simple virtual endomorphism `f: H → G` with `[G : H] = p`. This crate
//! searches for such endomorphisms, turns them into Mealy automata acting on
//! the `p`-ary tree, and checks the exponent and power-structure results on a
//! catalog of small p-groups.

pub mod catalog;
pub mod error;
pub mod group;
pub mod io;
pub mod morphism;
pub mod power;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use group::{ElemId, GroupTable, Perm, Subgroup};
pub use morphism::{GroupHom, SearchOutcome, VirtualEndomorphism};
pub use power::PowerProfile;
pub use tree::{MealyAutomaton, Portrait, Transversal};
pub use verify::TheoremReport;
