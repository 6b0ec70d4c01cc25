//! Cyclic-permutation machinery: arc systems on a cyclic order of `[n]`, the
//! injection certificate for the three-family bound, group deficiencies on
//! the `b * nbar` circle, circle accounting, and exact averaging over all
//! cyclic orders.

mod arcs;
mod circle;
mod expectation;
mod groups;
mod injection;
mod perm;

pub use arcs::{build_arc_circle, build_arcs3, ArcCircle, ArcKind, ArcLayout, ArcSystem3};
pub use circle::{
    circle_presence_count, circle_walk_certificate, circle_walk_unchecked, Incidence, PresenceCount,
    WalkCertificate, WalkGroup,
};
pub use expectation::{
    expectation_check, expectation_estimate, expectation_table, ExpectationRow, ExpectationTable,
    EXHAUSTIVE_LIMIT,
};
pub use groups::{
    deficiency_t, exact_cover, deficiency_exhaustive, DeficiencyResult, ExhaustiveSummary, GroupMember, GroupSystem,
};
pub use injection::{injection_certificate, injection_certificate_unchecked, InjectionCert, Tag};
pub use perm::{CyclicPerm, RootedPerms};
