//! Exhaustive verification toolkit for Arrovian social choice.
//!
//! The crate models weak orders, voter profiles and social welfare
//! functions over small finite domains, checks Arrow's axioms A1-A5 by
//! complete enumeration, searches the space of independent welfare functions
//! for every one satisfying A1-A4, and relates welfare functions to
//! ultrafilters of decisive coalitions. For an infinite electorate it works
//! over the algebra of finite and cofinite sets of naturals, where the
//! Fréchet rule gives a concrete non-dictatorial welfare function.
//!
//! Preference direction is fixed crate-wide: `x P y` means `x` is strictly
//! preferred to `y`.

pub mod arrow_search;
pub mod coalition;
pub mod error;
pub mod fc_infinite;
pub mod filters;
pub mod ks_bridge;
pub mod profiles;
pub mod relations;
pub mod swf;

pub use coalition::{Coalition, MAX_VOTERS};
pub use error::{Error, Result};
pub use profiles::{Domain, Profile, ProfileDomain, TriPartition};
pub use relations::{AlternativeSet, BinaryRelation, OrderViolation, PairStance, WeakOrder};
pub use swf::{AxiomReport, ExplicitSwf, PairwiseRuleSwf, Swf, WelfareFunction};
