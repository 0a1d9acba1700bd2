//! Exact arithmetic for finite permutation groups: closure, subgroups,
//! commutators, series and Frattini quotients.

mod perm;
mod pgroup;
mod subgroup;
mod table;

pub use perm::Perm;
pub use pgroup::FrattiniQuotient;
pub use subgroup::{Subgroup, ALL_SUBGROUPS_LIMIT};
pub use table::{is_prime, log_p, GroupTable, DEFAULT_CLOSURE_CAP};

/// Index of an element in its [`GroupTable`].
pub type ElemId = u32;

/// Marks "not in the domain" in dense element maps.
pub const NONE: ElemId = ElemId::MAX;
