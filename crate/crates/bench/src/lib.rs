//! Fixtures shared by the benchmarks.

use arrovian::swf::{borda, dictator, ExplicitSwf};
use arrovian::{Domain, ProfileDomain};

/// The weak-order domain with three alternatives and three voters
/// (2197 profiles).
pub fn weak_domain() -> ProfileDomain {
    ProfileDomain::new(3, 3, Domain::Weak).expect("within budget")
}

pub fn dictator_on_weak_domain() -> ExplicitSwf {
    dictator(weak_domain(), 0).expect("voter in range")
}

pub fn borda_on_weak_domain() -> ExplicitSwf {
    borda(weak_domain()).expect("domain is nonempty")
}
