//! An infinite electorate `V = N` over the finite-cofinite algebra.
//!
//! Coalitions are restricted to sets that are finite or cofinite, each
//! stored as a mode plus a finite exception list, so membership, the
//! boolean operations and the filter questions below are all total
//! decisions. The cofinite sets form the Fréchet filter, which on this
//! algebra is a free ultrafilter: exactly one of `A`, `Aᶜ` is cofinite.
//! Deciding each pair by which part of the split is cofinite therefore
//! gives a welfare function obeying unanimity and independence that no
//! voter dictates.
//!
//! This does not conflict with the impossibility result for pairwise
//! computable rules over recursive coalitions. That result concerns rules
//! handed opaque program indices for arbitrary recursive sets; here the
//! rule sees transparent descriptions of a strictly smaller algebra. Whether
//! the coded form of the Fréchet rule is pairwise computable over the full
//! recursive algebra is left open. The converse direction (a decidable
//! decisive family forces a dictator) is not implemented.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{to_canonical, BinaryRelation, PairStance, WeakOrder};

/// Naturals checked pointwise by the sampled property runs.
pub const SAMPLE_BOUND: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FcMode {
    Finite,
    Cofinite,
}

/// A finite set (`exceptions` are the members) or a cofinite set
/// (`exceptions` are the non-members).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FcSet {
    mode: FcMode,
    exceptions: BTreeSet<u64>,
}

impl FcSet {
    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Self {
        FcSet {
            mode: FcMode::Finite,
            exceptions: members.into_iter().collect(),
        }
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(excluded: I) -> Self {
        FcSet {
            mode: FcMode::Cofinite,
            exceptions: excluded.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    pub fn naturals() -> Self {
        Self::cofinite([])
    }

    pub fn mode(&self) -> FcMode {
        self.mode
    }

    pub fn exceptions(&self) -> &BTreeSet<u64> {
        &self.exceptions
    }

    pub fn is_cofinite(&self) -> bool {
        self.mode == FcMode::Cofinite
    }

    pub fn member(&self, v: u64) -> bool {
        self.exceptions.contains(&v) == (self.mode == FcMode::Finite)
    }

    pub fn complement(&self) -> Self {
        let mode = match self.mode {
            FcMode::Finite => FcMode::Cofinite,
            FcMode::Cofinite => FcMode::Finite,
        };
        FcSet {
            mode,
            exceptions: self.exceptions.clone(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use FcMode::*;
        match (self.mode, other.mode) {
            (Finite, Finite) => Self::finite(self.exceptions.union(&other.exceptions).copied()),
            (Cofinite, Cofinite) => Self::cofinite(self.exceptions.intersection(&other.exceptions).copied()),
            (Finite, Cofinite) => Self::cofinite(other.exceptions.difference(&self.exceptions).copied()),
            (Cofinite, Finite) => Self::cofinite(self.exceptions.difference(&other.exceptions).copied()),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    /// Least natural in both sets, if any.
    fn least_common(&self, other: &Self) -> Option<u64> {
        let both = self.intersect(other);
        match both.mode {
            FcMode::Finite => both.exceptions.first().copied(),
            FcMode::Cofinite => (0..).find(|v| !both.exceptions.contains(v)),
        }
    }
}

pub fn fc_union(a: &FcSet, b: &FcSet) -> FcSet {
    a.union(b)
}

pub fn fc_intersect(a: &FcSet, b: &FcSet) -> FcSet {
    a.intersect(b)
}

pub fn fc_complement(a: &FcSet) -> FcSet {
    a.complement()
}

pub fn fc_member(a: &FcSet, v: u64) -> bool {
    a.member(v)
}

impl fmt::Display for FcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.mode {
            FcMode::Finite => "fin",
            FcMode::Cofinite => "cof",
        };
        let items: Vec<String> = self.exceptions.iter().map(u64::to_string).collect();
        write!(f, "{tag}{{{}}}", items.join(","))
    }
}

impl FromStr for FcSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mode, rest) = if let Some(rest) = s.strip_prefix("fin") {
            (FcMode::Finite, rest)
        } else if let Some(rest) = s.strip_prefix("cof") {
            (FcMode::Cofinite, rest)
        } else {
            return Err(Error::parse("column 1", format!("expected `fin{{...}}` or `cof{{...}}`, found `{s}`")));
        };
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::parse("column 4", "expected a braced list of naturals"))?;
        let mut exceptions = BTreeSet::new();
        if !body.trim().is_empty() {
            let mut column = 5;
            for item in body.split(',') {
                let v: u64 = item
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("column {column}"), format!("`{}` is not a natural", item.trim())))?;
                if !exceptions.insert(v) {
                    return Err(Error::parse(format!("column {column}"), format!("duplicate element {v}")));
                }
                column += item.len() + 1;
            }
        }
        Ok(FcSet { mode, exceptions })
    }
}

impl Serialize for FcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FcSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A split of `N` on one pair: who prefers the first alternative, who the
/// second, and who is indifferent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FcTriple {
    first: FcSet,
    second: FcSet,
    tie: FcSet,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FcTripleFile {
    first: FcSet,
    second: FcSet,
    tie: FcSet,
}

impl<'de> Deserialize<'de> for FcTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = FcTripleFile::deserialize(d)?;
        FcTriple::new(f.first, f.second, f.tie).map_err(serde::de::Error::custom)
    }
}

impl FcTriple {
    /// Rejects overlapping parts and uncovered naturals, naming the least
    /// offending natural.
    pub fn new(first: FcSet, second: FcSet, tie: FcSet) -> Result<Self> {
        for (a, b) in [(&first, &second), (&first, &tie), (&second, &tie)] {
            if let Some(v) = a.least_common(b) {
                return Err(Error::InvalidTriple {
                    reason: "parts overlap",
                    witness: v,
                });
            }
        }
        let uncovered = first.union(&second).union(&tie).complement();
        if let Some(v) = uncovered.least_common(&FcSet::naturals()) {
            return Err(Error::InvalidTriple {
                reason: "parts do not cover the naturals",
                witness: v,
            });
        }
        let cofinite = [&first, &second, &tie].iter().filter(|p| p.is_cofinite()).count();
        if cofinite != 1 {
            return Err(Error::Internal(format!("valid split with {cofinite} cofinite parts")));
        }
        Ok(FcTriple { first, second, tie })
    }

    pub fn first(&self) -> &FcSet {
        &self.first
    }

    pub fn second(&self) -> &FcSet {
        &self.second
    }

    pub fn tie(&self) -> &FcSet {
        &self.tie
    }

    pub fn part(&self, stance: PairStance) -> &FcSet {
        match stance {
            PairStance::First => &self.first,
            PairStance::Second => &self.second,
            PairStance::Indifferent => &self.tie,
        }
    }

    /// The stance whose part is cofinite.
    pub fn cofinite_part(&self) -> PairStance {
        PairStance::ALL
            .into_iter()
            .find(|&s| self.part(s).is_cofinite())
            .expect("validated split has a cofinite part")
    }

    pub fn flipped(&self) -> Self {
        FcTriple {
            first: self.second.clone(),
            second: self.first.clone(),
            tie: self.tie.clone(),
        }
    }
}

impl fmt::Display for FcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.first, self.second, self.tie)
    }
}

/// A total decision from splits to stances.
pub trait PairVerdictRule: Sync {
    fn stance(&self, t: &FcTriple) -> PairStance;

    /// Decisive-membership test: does `a` win against its complement?
    fn decides(&self, a: &FcSet) -> bool {
        let t = FcTriple::new(a.clone(), a.complement(), FcSet::empty()).expect("a set and its complement split N");
        self.stance(&t) == PairStance::First
    }
}

/// The verdict follows whichever part is cofinite.
#[derive(Clone, Copy, Debug, Default)]
pub struct FrechetRule;

impl PairVerdictRule for FrechetRule {
    fn stance(&self, t: &FcTriple) -> PairStance {
        t.cofinite_part()
    }
}

/// The verdict follows the stance of the given voter.
#[derive(Clone, Copy, Debug)]
pub struct DictatorRule(pub u64);

impl PairVerdictRule for DictatorRule {
    fn stance(&self, t: &FcTriple) -> PairStance {
        PairStance::ALL
            .into_iter()
            .find(|&s| t.part(s).member(self.0))
            .expect("validated split covers every natural")
    }
}

pub fn frechet_stance(t: &FcTriple) -> PairStance {
    FrechetRule.stance(t)
}

pub fn dictator_stance(v0: u64, t: &FcTriple) -> PairStance {
    DictatorRule(v0).stance(t)
}

/// Whether `a` belongs to the Fréchet filter.
pub fn decide_frechet_membership(a: &FcSet) -> bool {
    a.is_cofinite()
}

/// A split on which `v0` prefers the first alternative and everyone else
/// the second.
pub fn non_dictatorship_witness(v0: u64) -> FcTriple {
    FcTriple::new(FcSet::finite([v0]), FcSet::cofinite([v0]), FcSet::empty()).expect("singleton and its complement")
}

/// A profile over `N` in which all voters outside a finite set share the
/// `tail` order, so every pair split is finite or cofinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FcProfile {
    pub exceptions: BTreeMap<u64, WeakOrder>,
    pub tail: WeakOrder,
}

impl FcProfile {
    pub fn new(exceptions: BTreeMap<u64, WeakOrder>, tail: WeakOrder) -> Result<Self> {
        if let Some((v, w)) = exceptions.iter().find(|(_, w)| w.m() != tail.m()) {
            return Err(Error::Dimension(format!(
                "voter {v} ranks {} alternatives, tail ranks {}",
                w.m(),
                tail.m()
            )));
        }
        Ok(FcProfile { exceptions, tail })
    }

    pub fn m(&self) -> usize {
        self.tail.m()
    }

    pub fn voter(&self, v: u64) -> &WeakOrder {
        self.exceptions.get(&v).unwrap_or(&self.tail)
    }

    pub fn split(&self, x: usize, y: usize) -> FcTriple {
        let mut parts: [Vec<u64>; 3] = Default::default();
        for (&v, w) in &self.exceptions {
            parts[w.stance(x, y).index()].push(v);
        }
        let tail = self.tail.stance(x, y);
        let exceptional: Vec<u64> = self.exceptions.keys().copied().collect();
        let [first, second, tie] = PairStance::ALL.map(|s| {
            if s == tail {
                // tail voters plus exceptions with this stance
                let others = exceptional.iter().copied().filter(|v| !parts[s.index()].contains(v));
                FcSet::cofinite(others)
            } else {
                FcSet::finite(parts[s.index()].iter().copied())
            }
        });
        FcTriple::new(first, second, tie).expect("profile splits partition N")
    }
}

/// Verdict relation assembled pair by pair, then validated.
pub fn assemble_fc_verdict(rule: &dyn PairVerdictRule, f: &FcProfile) -> Result<WeakOrder> {
    let m = f.m();
    let mut rel = BinaryRelation::new(m);
    for x in 0..m {
        for y in x + 1..m {
            match rule.stance(&f.split(x, y)) {
                PairStance::First => rel.set(x, y, true),
                PairStance::Second => rel.set(y, x, true),
                PairStance::Indifferent => {}
            }
        }
    }
    to_canonical(&rel)
}

pub fn random_fc_set(rng: &mut impl Rng) -> FcSet {
    let size = rng.random_range(0..8);
    let exceptions: Vec<u64> = (0..size).map(|_| rng.random_range(0..SAMPLE_BOUND)).collect();
    if rng.random_bool(0.5) {
        FcSet::finite(exceptions)
    } else {
        FcSet::cofinite(exceptions)
    }
}

pub fn random_fc_profile(rng: &mut impl Rng, orders: &[WeakOrder]) -> FcProfile {
    let tail = orders[rng.random_range(0..orders.len())].clone();
    let count = rng.random_range(0..12);
    let exceptions = (0..count)
        .map(|_| {
            let v = rng.random_range(0..SAMPLE_BOUND);
            (v, orders[rng.random_range(0..orders.len())].clone())
        })
        .collect();
    FcProfile { exceptions, tail }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of the sampled filter-axiom run on the Fréchet family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FcFilterReport {
    pub seed: u64,
    pub samples: usize,
    pub empty_excluded: bool,
    pub naturals_included: bool,
    pub upward_closure_failures: usize,
    pub intersection_failures: usize,
    pub complement_failures: usize,
    /// Naturals `v < bound` with no member shown to exclude `v`.
    pub freeness_failures: usize,
    pub freeness_bound: u64,
}

impl FcFilterReport {
    pub fn passed(&self) -> bool {
        self.empty_excluded
            && self.naturals_included
            && self.upward_closure_failures == 0
            && self.intersection_failures == 0
            && self.complement_failures == 0
            && self.freeness_failures == 0
    }
}

pub fn validate_fc_filter_axioms(seed: u64, samples: usize) -> FcFilterReport {
    let mut rng = seeded_rng(seed);
    let mut upward = 0;
    let mut meet = 0;
    let mut complement = 0;
    for _ in 0..samples {
        let a = random_fc_set(&mut rng);
        let b = random_fc_set(&mut rng);
        let (ma, mb) = (decide_frechet_membership(&a), decide_frechet_membership(&b));
        if ma && !decide_frechet_membership(&a.union(&b)) {
            upward += 1;
        }
        if ma && mb && !decide_frechet_membership(&a.intersect(&b)) {
            meet += 1;
        }
        if ma == decide_frechet_membership(&a.complement()) {
            complement += 1;
        }
    }
    let freeness_failures = (0..100)
        .filter(|&v| {
            let member = FcSet::cofinite([v]);
            !(decide_frechet_membership(&member) && !member.member(v))
        })
        .count();
    FcFilterReport {
        seed,
        samples,
        empty_excluded: !decide_frechet_membership(&FcSet::empty()),
        naturals_included: decide_frechet_membership(&FcSet::naturals()),
        upward_closure_failures: upward,
        intersection_failures: meet,
        complement_failures: complement,
        freeness_failures,
        freeness_bound: 100,
    }
}

/// Every verdict of `rule` on sampled profiles over `m` alternatives that
/// fails to be a weak order, with the sample index.
pub fn multi_pair_failures(rule: &dyn PairVerdictRule, m: usize, seed: u64, samples: usize) -> Result<Vec<(usize, FcProfile)>> {
    let orders = crate::relations::enumerate_weak_orders(m)?;
    let mut rng = seeded_rng(seed);
    let mut failures = Vec::new();
    for i in 0..samples {
        let f = random_fc_profile(&mut rng, &orders);
        match assemble_fc_verdict(rule, &f) {
            Ok(_) => {}
            Err(Error::NotWeakOrder(_)) => failures.push((i, f)),
            Err(e) => return Err(e),
        }
    }
    Ok(failures)
}
