//! Social welfare functions over a finite profile domain.
//!
//! Two representations are provided. [`ExplicitSwf`] stores one verdict per
//! profile. [`PairwiseRuleSwf`] stores, for every unordered pair `{x, y}`, a
//! stance for each way the electorate can split on that pair; that is the
//! quotient of the explicit table by independence (A4), so every
//! `PairwiseRuleSwf` satisfies A4 by construction, and its verdict on a
//! profile is assembled from the pair stances and may fail to be a weak order.

mod builtin;
mod checks;
mod file;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use builtin::{
    anti_dictator, borda, constant, constant_tie_rules, dictator, dictator_rules, majority_rules,
};
pub use checks::{
    check_independence, check_unanimity, find_dictator, full_report, AxiomOutcome, AxiomReport,
    IndependenceWitness, UnanimityWitness, Witness,
};
pub use file::{parse_swf_json, LoadedSwf, SwfFile};

use crate::error::{Error, Result};
use crate::profiles::{Domain, Profile, ProfileDomain, TriPartition};
use crate::relations::{to_canonical, validate_weak_order, BinaryRelation, OrderViolation, PairStance, WeakOrder};

/// Unordered pairs `(x, y)` with `x < y`, in lexicographic order.
pub fn unordered_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|x| (x + 1..m).map(move |y| (x, y)))
        .collect()
}

/// Position of `(x, y)`, `x < y`, in [`unordered_pairs`].
pub(crate) fn pair_index(m: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < m);
    x * (2 * m - x - 1) / 2 + (y - x - 1)
}

/// The assembled pair stances do not form a weak order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionFailure {
    pub profile: Profile,
    pub violation: OrderViolation,
}

impl std::fmt::Display for CompositionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verdict on {} is not a weak order: {}", self.profile, self.violation)
    }
}

/// Common view over both representations, addressed by profile index in
/// the function's [`ProfileDomain`].
pub trait WelfareFunction: Sync {
    fn domain(&self) -> &ProfileDomain;

    /// The verdict's stance on `(x, y)` for profile `index`.
    fn stance(&self, index: usize, x: usize, y: usize) -> PairStance;

    /// The full verdict for profile `index`.
    fn verdict(&self, index: usize) -> std::result::Result<WeakOrder, CompositionFailure>;

    /// True when independence holds by construction.
    fn structurally_independent(&self) -> bool;

    fn representation(&self) -> &'static str;
}

/// Split of profile `index` on `(x, y)`, computed without materializing it.
pub(crate) fn tripartition_at(d: &ProfileDomain, mut index: usize, x: usize, y: usize) -> TriPartition {
    let base = d.orders().len();
    let mut t = TriPartition {
        first: Default::default(),
        second: Default::default(),
        tie: Default::default(),
    };
    for v in (0..d.n()).rev() {
        let w = &d.orders()[index % base];
        index /= base;
        match w.stance(x, y) {
            PairStance::First => t.first.insert(v),
            PairStance::Second => t.second.insert(v),
            PairStance::Indifferent => t.tie.insert(v),
        }
    }
    t
}

/// A verdict for every profile of the domain.
#[derive(Clone, Debug)]
pub struct ExplicitSwf {
    domain: ProfileDomain,
    verdicts: Vec<WeakOrder>,
}

impl ExplicitSwf {
    pub fn from_fn(domain: ProfileDomain, mut rule: impl FnMut(&Profile) -> WeakOrder) -> Result<Self> {
        let mut verdicts = Vec::with_capacity(domain.len());
        for f in domain.iter() {
            let w = rule(&f);
            if w.m() != domain.m() {
                return Err(Error::Dimension(format!(
                    "verdict {w} on {f} ranks {} alternatives, expected {}",
                    w.m(),
                    domain.m()
                )));
            }
            verdicts.push(w);
        }
        Ok(ExplicitSwf { domain, verdicts })
    }

    /// Takes verdicts in domain order; the table must be total.
    pub fn from_verdicts(domain: ProfileDomain, verdicts: Vec<WeakOrder>) -> Result<Self> {
        if verdicts.len() != domain.len() {
            return Err(Error::Dimension(format!(
                "{} verdicts for a domain of {} profiles",
                verdicts.len(),
                domain.len()
            )));
        }
        if let Some(w) = verdicts.iter().find(|w| w.m() != domain.m()) {
            return Err(Error::Dimension(format!("verdict {w} has the wrong alternative count")));
        }
        Ok(ExplicitSwf { domain, verdicts })
    }

    pub fn verdicts(&self) -> &[WeakOrder] {
        &self.verdicts
    }

    pub fn verdict_for(&self, f: &Profile) -> Option<&WeakOrder> {
        self.domain.index_of(f).map(|i| &self.verdicts[i])
    }

    /// Reads the pair rules off the table. Fails with the first pair of
    /// profiles that agree on a pair but receive different stances.
    pub fn to_pairwise(&self) -> std::result::Result<PairwiseRuleSwf, IndependenceWitness> {
        check_independence(self)?;
        let d = &self.domain;
        let pairs = unordered_pairs(d.m());
        let tps = d.tripartitions();
        let mut rules = vec![vec![None; tps.len()]; pairs.len()];
        for i in 0..d.len() {
            for (p, &(x, y)) in pairs.iter().enumerate() {
                let t = tripartition_at(d, i, x, y);
                rules[p][tp_code(&t, d.n(), d.domain())] = Some(self.verdicts[i].stance(x, y));
            }
        }
        let rules = rules
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.expect("every split is reachable")).collect())
            .collect();
        Ok(PairwiseRuleSwf {
            domain: self.domain.clone(),
            rules,
        })
    }
}

impl WelfareFunction for ExplicitSwf {
    fn domain(&self) -> &ProfileDomain {
        &self.domain
    }

    fn stance(&self, index: usize, x: usize, y: usize) -> PairStance {
        self.verdicts[index].stance(x, y)
    }

    fn verdict(&self, index: usize) -> std::result::Result<WeakOrder, CompositionFailure> {
        Ok(self.verdicts[index].clone())
    }

    fn structurally_independent(&self) -> bool {
        false
    }

    fn representation(&self) -> &'static str {
        "explicit"
    }
}

/// Index of a tri-partition in [`crate::profiles::reachable_tripartitions`].
pub(crate) fn tp_code(t: &TriPartition, n: usize, domain: Domain) -> usize {
    let base = match domain {
        Domain::Weak => 3,
        Domain::Linear => 2,
    };
    (0..n).fold(0, |acc, v| {
        let digit = if t.first.contains(v) {
            0
        } else if t.second.contains(v) {
            1
        } else {
            2
        };
        acc * base + digit
    })
}

/// Per-pair stance tables: the independence quotient of an SWF.
#[derive(Clone, Debug)]
pub struct PairwiseRuleSwf {
    domain: ProfileDomain,
    /// `rules[pair_index][tp_code]`, stance on `(x, y)` with `x < y`.
    rules: Vec<Vec<PairStance>>,
}

impl PairwiseRuleSwf {
    /// Builds from a rule on `(x, y)`, `x < y`, and the split on that pair.
    pub fn from_fn(domain: ProfileDomain, mut rule: impl FnMut(usize, usize, &TriPartition) -> PairStance) -> Self {
        let tps = domain.tripartitions();
        let rules = unordered_pairs(domain.m())
            .into_iter()
            .map(|(x, y)| tps.iter().map(|t| rule(x, y, t)).collect())
            .collect();
        PairwiseRuleSwf { domain, rules }
    }

    /// Builds from explicit tables, rejecting unreachable or missing splits.
    pub fn from_tables(
        domain: ProfileDomain,
        tables: &HashMap<(usize, usize), Vec<(TriPartition, PairStance)>>,
    ) -> Result<Self> {
        let tps = domain.tripartitions();
        let n = domain.n();
        let mut rules = Vec::new();
        for (x, y) in unordered_pairs(domain.m()) {
            let entries = tables
                .get(&(x, y))
                .ok_or_else(|| Error::Precondition(format!("no rule table for pair ({x}, {y})")))?;
            let mut row = vec![None; tps.len()];
            for (t, s) in entries {
                t.validate(n)?;
                let code = tp_code(t, n, domain.domain());
                if code >= tps.len() || tps[code] != *t {
                    return Err(Error::Precondition(format!(
                        "split {t} on pair ({x}, {y}) cannot occur in the {} domain",
                        domain.domain().as_str()
                    )));
                }
                if row[code].replace(*s).is_some() {
                    return Err(Error::Precondition(format!("split {t} on pair ({x}, {y}) listed twice")));
                }
            }
            if let Some(missing) = row.iter().position(Option::is_none) {
                return Err(Error::Precondition(format!(
                    "rule for pair ({x}, {y}) is not total: split {} missing",
                    tps[missing]
                )));
            }
            rules.push(row.into_iter().map(Option::unwrap).collect());
        }
        Ok(PairwiseRuleSwf { domain, rules })
    }

    /// Stance for the ordered pair `(x, y)` given the split on it.
    pub fn rule(&self, x: usize, y: usize, t: &TriPartition) -> PairStance {
        let n = self.domain.n();
        let dom = self.domain.domain();
        if x < y {
            self.rules[pair_index(self.domain.m(), x, y)][tp_code(t, n, dom)]
        } else {
            self.rules[pair_index(self.domain.m(), y, x)][tp_code(&t.flipped(), n, dom)].flip()
        }
    }

    /// Rule tables keyed by `(x, y)`, `x < y`, splits in reachable order.
    pub fn tables(&self) -> Vec<((usize, usize), Vec<(TriPartition, PairStance)>)> {
        let tps = self.domain.tripartitions();
        unordered_pairs(self.domain.m())
            .into_iter()
            .zip(&self.rules)
            .map(|(pair, row)| (pair, tps.iter().copied().zip(row.iter().copied()).collect()))
            .collect()
    }

    /// Raw stance rows, indexed like [`PairwiseRuleSwf::tables`].
    pub fn rows(&self) -> &[Vec<PairStance>] {
        &self.rules
    }

    /// Expands to a verdict table, failing on the first profile whose
    /// stances do not compose.
    pub fn to_explicit(&self) -> std::result::Result<ExplicitSwf, CompositionFailure> {
        let verdicts = (0..self.domain.len())
            .map(|i| self.verdict(i))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ExplicitSwf {
            domain: self.domain.clone(),
            verdicts,
        })
    }
}

impl PartialEq for PairwiseRuleSwf {
    fn eq(&self, other: &Self) -> bool {
        self.domain.m() == other.domain.m()
            && self.domain.n() == other.domain.n()
            && self.domain.domain() == other.domain.domain()
            && self.rules == other.rules
    }
}

impl Eq for PairwiseRuleSwf {}

impl WelfareFunction for PairwiseRuleSwf {
    fn domain(&self) -> &ProfileDomain {
        &self.domain
    }

    fn stance(&self, index: usize, x: usize, y: usize) -> PairStance {
        self.rule(x, y, &tripartition_at(&self.domain, index, x, y))
    }

    fn verdict(&self, index: usize) -> std::result::Result<WeakOrder, CompositionFailure> {
        let m = self.domain.m();
        let mut rel = BinaryRelation::new(m);
        for (x, y) in unordered_pairs(m) {
            match self.stance(index, x, y) {
                PairStance::First => rel.set(x, y, true),
                PairStance::Second => rel.set(y, x, true),
                PairStance::Indifferent => {}
            }
        }
        match validate_weak_order(&rel) {
            Ok(()) => Ok(to_canonical(&rel).expect("validated")),
            Err(violation) => Err(CompositionFailure {
                profile: self.domain.profile(index),
                violation,
            }),
        }
    }

    fn structurally_independent(&self) -> bool {
        true
    }

    fn representation(&self) -> &'static str {
        "pairwise"
    }
}

/// Recomposes the verdict of `p` on `f` from its pair stances.
pub fn assemble(p: &PairwiseRuleSwf, f: &Profile) -> Result<std::result::Result<WeakOrder, CompositionFailure>> {
    let index = p.domain().index_of(f).ok_or_else(|| {
        Error::Precondition(format!("profile {f} is outside the function's domain"))
    })?;
    Ok(p.verdict(index))
}

/// Either representation, as loaded from a file.
#[derive(Clone, Debug)]
pub enum Swf {
    Explicit(ExplicitSwf),
    Pairwise(PairwiseRuleSwf),
}

impl Swf {
    pub fn as_dyn(&self) -> &dyn WelfareFunction {
        match self {
            Swf::Explicit(s) => s,
            Swf::Pairwise(s) => s,
        }
    }
}

impl WelfareFunction for Swf {
    fn domain(&self) -> &ProfileDomain {
        self.as_dyn().domain()
    }

    fn stance(&self, index: usize, x: usize, y: usize) -> PairStance {
        self.as_dyn().stance(index, x, y)
    }

    fn verdict(&self, index: usize) -> std::result::Result<WeakOrder, CompositionFailure> {
        self.as_dyn().verdict(index)
    }

    fn structurally_independent(&self) -> bool {
        self.as_dyn().structurally_independent()
    }

    fn representation(&self) -> &'static str {
        self.as_dyn().representation()
    }
}
