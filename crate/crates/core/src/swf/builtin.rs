//! Reference welfare functions used by the tests, the CLI and the search.

use crate::error::{Error, Result};
use crate::profiles::{ProfileDomain, TriPartition};
use crate::relations::{PairStance, WeakOrder};

use super::{ExplicitSwf, PairwiseRuleSwf};

fn check_voter(domain: &ProfileDomain, v: usize) -> Result<()> {
    if v >= domain.n() {
        return Err(Error::Precondition(format!(
            "voter {v} does not exist among {} voters",
            domain.n()
        )));
    }
    Ok(())
}

fn voter_stance(t: &TriPartition, v: usize) -> PairStance {
    if t.first.contains(v) {
        PairStance::First
    } else if t.second.contains(v) {
        PairStance::Second
    } else {
        PairStance::Indifferent
    }
}

/// Voter `v`'s order is the verdict.
pub fn dictator(domain: ProfileDomain, v: usize) -> Result<ExplicitSwf> {
    check_voter(&domain, v)?;
    ExplicitSwf::from_fn(domain, |f| f.voter(v).clone())
}

/// The reverse of voter `v`'s order.
pub fn anti_dictator(domain: ProfileDomain, v: usize) -> Result<ExplicitSwf> {
    check_voter(&domain, v)?;
    ExplicitSwf::from_fn(domain, |f| f.voter(v).reversed())
}

/// Ignores the voters.
pub fn constant(domain: ProfileDomain, verdict: WeakOrder) -> Result<ExplicitSwf> {
    ExplicitSwf::from_fn(domain, |_| verdict.clone())
}

/// Rank-sum scoring. An alternative scores one point per voter for each
/// alternative that voter ranks strictly below it; equal totals are
/// indifferent in the verdict.
pub fn borda(domain: ProfileDomain) -> Result<ExplicitSwf> {
    let m = domain.m();
    ExplicitSwf::from_fn(domain, |f| {
        let scores: Vec<u64> = (0..m)
            .map(|x| {
                f.prefs()
                    .iter()
                    .map(|w| (0..m).filter(|&y| w.prefers(x, y)).count() as u64)
                    .sum()
            })
            .collect();
        let max = scores.iter().max().copied().unwrap_or(0);
        let ranks: Vec<u64> = scores.iter().map(|&s| max - s).collect();
        WeakOrder::from_ranks(&ranks).expect("m >= 1")
    })
}

/// Voter `v`'s stance on every pair.
pub fn dictator_rules(domain: ProfileDomain, v: usize) -> Result<PairwiseRuleSwf> {
    check_voter(&domain, v)?;
    Ok(PairwiseRuleSwf::from_fn(domain, |_, _, t| voter_stance(t, v)))
}

/// Strict pairwise majority, ties indifferent.
pub fn majority_rules(domain: ProfileDomain) -> PairwiseRuleSwf {
    PairwiseRuleSwf::from_fn(domain, |_, _, t| match t.first.len().cmp(&t.second.len()) {
        std::cmp::Ordering::Greater => PairStance::First,
        std::cmp::Ordering::Less => PairStance::Second,
        std::cmp::Ordering::Equal => PairStance::Indifferent,
    })
}

/// Every pair indifferent, whatever the votes.
pub fn constant_tie_rules(domain: ProfileDomain) -> PairwiseRuleSwf {
    PairwiseRuleSwf::from_fn(domain, |_, _, _| PairStance::Indifferent)
}
