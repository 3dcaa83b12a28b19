//! Voter profiles over a finite electorate.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_VOTERS};
use crate::error::{Error, Result};
use crate::relations::{
    enumerate_linear_orders, enumerate_weak_orders, AlternativeSet, BinaryRelation, PairStance,
    WeakOrder,
};

/// Default cap on the number of profiles an enumeration may produce.
pub const DEFAULT_PROFILE_BUDGET: u128 = 10_000_000;

/// Which individual preferences are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Every weak order (ties allowed).
    Weak,
    /// Strict linear orders only.
    Linear,
}

impl Domain {
    pub fn orders(self, m: usize) -> Result<Vec<WeakOrder>> {
        match self {
            Domain::Weak => enumerate_weak_orders(m),
            Domain::Linear => enumerate_linear_orders(m),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Weak => "weak",
            Domain::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Domain::Weak),
            "linear" => Ok(Domain::Linear),
            other => Err(Error::parse("domain", format!("expected \"weak\" or \"linear\", got {other:?}"))),
        }
    }
}

/// One weak order per voter, all over the same alternatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeakOrder>", into = "Vec<WeakOrder>")]
pub struct Profile {
    prefs: Vec<WeakOrder>,
}

impl Profile {
    pub fn new(prefs: Vec<WeakOrder>) -> Result<Self> {
        let n = prefs.len();
        if !(1..=MAX_VOTERS).contains(&n) {
            return Err(Error::VoterRange {
                n,
                min: 1,
                max: MAX_VOTERS,
            });
        }
        let m = prefs[0].m();
        if let Some(v) = prefs.iter().position(|w| w.m() != m) {
            return Err(Error::Dimension(format!(
                "voter {v} ranks {} alternatives, voter 0 ranks {m}",
                prefs[v].m()
            )));
        }
        Ok(Profile { prefs })
    }

    /// Every voter holds `w`.
    pub fn unanimous(w: &WeakOrder, n: usize) -> Result<Self> {
        Profile::new(vec![w.clone(); n])
    }

    pub fn m(&self) -> usize {
        self.prefs[0].m()
    }

    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    pub fn voter(&self, v: usize) -> &WeakOrder {
        &self.prefs[v]
    }

    pub fn prefs(&self) -> &[WeakOrder] {
        &self.prefs
    }

    /// A copy with voter `v`'s order replaced.
    pub fn with_voter(&self, v: usize, w: WeakOrder) -> Result<Self> {
        let mut prefs = self.prefs.clone();
        prefs[v] = w;
        Profile::new(prefs)
    }

    pub fn to_texts(&self, alts: &AlternativeSet) -> Vec<String> {
        self.prefs.iter().map(|w| w.to_text(alts)).collect()
    }
}

impl TryFrom<Vec<WeakOrder>> for Profile {
    type Error = Error;

    fn try_from(prefs: Vec<WeakOrder>) -> Result<Self> {
        Profile::new(prefs)
    }
}

impl From<Profile> for Vec<WeakOrder> {
    fn from(p: Profile) -> Self {
        p.prefs
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let texts: Vec<String> = self.prefs.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", texts.join(", "))
    }
}

/// The three-voter cyclic profile `A>B>C`, `C>A>B`, `B>C>A`.
pub fn condorcet_profile() -> Profile {
    let prefs = ["A>B>C", "C>A>B", "B>C>A"]
        .iter()
        .map(|s| s.parse().expect("static order"))
        .collect();
    Profile::new(prefs).expect("static profile")
}

/// How the voters split on an ordered pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Coalition; 3]", into = "[Coalition; 3]")]
pub struct TriPartition {
    /// Voters preferring `x` to `y`.
    pub first: Coalition,
    /// Voters preferring `y` to `x`.
    pub second: Coalition,
    /// Voters indifferent between them.
    pub tie: Coalition,
}

impl TriPartition {
    /// `tie` is the rest of `0..n`.
    pub fn new(first: Coalition, second: Coalition, n: usize) -> Result<Self> {
        let t = TriPartition {
            first,
            second,
            tie: first.union(second).complement(n),
        };
        t.validate(n)?;
        Ok(t)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let full = Coalition::full(n);
        let parts = [self.first, self.second, self.tie];
        if parts.iter().any(|p| !p.is_subset(full)) {
            return Err(Error::Precondition(format!("tri-partition {self} mentions voters outside 0..{n}")));
        }
        if !self.first.intersection(self.second).is_empty()
            || !self.first.intersection(self.tie).is_empty()
            || !self.second.intersection(self.tie).is_empty()
        {
            return Err(Error::Precondition(format!("tri-partition {self} is not disjoint")));
        }
        if self.first.union(self.second).union(self.tie) != full {
            return Err(Error::Precondition(format!("tri-partition {self} does not cover 0..{n}")));
        }
        Ok(())
    }

    /// The part holding voters with the given stance.
    pub fn part(&self, stance: PairStance) -> Coalition {
        match stance {
            PairStance::First => self.first,
            PairStance::Second => self.second,
            PairStance::Indifferent => self.tie,
        }
    }

    /// The same split seen from the reversed pair `(y, x)`.
    pub fn flipped(&self) -> Self {
        TriPartition {
            first: self.second,
            second: self.first,
            tie: self.tie,
        }
    }
}

impl TryFrom<[Coalition; 3]> for TriPartition {
    type Error = Error;

    fn try_from(parts: [Coalition; 3]) -> Result<Self> {
        let [first, second, tie] = parts;
        let t = TriPartition { first, second, tie };
        let n = first.union(second).union(tie).0.checked_ilog2().map_or(0, |b| b as usize + 1);
        t.validate(n)?;
        Ok(t)
    }
}

impl From<TriPartition> for [Coalition; 3] {
    fn from(t: TriPartition) -> Self {
        [t.first, t.second, t.tie]
    }
}

impl std::fmt::Display for TriPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.first, self.second, self.tie)
    }
}

fn check_pair(m: usize, x: usize, y: usize) -> Result<()> {
    for a in [x, y] {
        if a >= m {
            return Err(Error::UnknownAlternative { index: a, m });
        }
    }
    if x == y {
        return Err(Error::SamePair(x));
    }
    Ok(())
}

/// Splits the voters by their stance on `(x, y)`.
pub fn pair_partition(f: &Profile, x: usize, y: usize) -> Result<TriPartition> {
    check_pair(f.m(), x, y)?;
    Ok(pair_partition_unchecked(f, x, y))
}

pub(crate) fn pair_partition_unchecked(f: &Profile, x: usize, y: usize) -> TriPartition {
    let mut t = TriPartition {
        first: Coalition::EMPTY,
        second: Coalition::EMPTY,
        tie: Coalition::EMPTY,
    };
    for (v, w) in f.prefs().iter().enumerate() {
        match w.stance(x, y) {
            PairStance::First => t.first.insert(v),
            PairStance::Second => t.second.insert(v),
            PairStance::Indifferent => t.tie.insert(v),
        }
    }
    t
}

/// `f = g` on `{x, y}`: every voter takes the same stance on the pair.
pub fn agrees_on_pair(f: &Profile, g: &Profile, x: usize, y: usize) -> Result<bool> {
    if f.n() != g.n() || f.m() != g.m() {
        return Err(Error::Dimension(format!(
            "profiles have shapes (m={}, n={}) and (m={}, n={})",
            f.m(),
            f.n(),
            g.m(),
            g.n()
        )));
    }
    check_pair(f.m(), x, y)?;
    Ok(f.prefs()
        .iter()
        .zip(g.prefs())
        .all(|(a, b)| a.stance(x, y) == b.stance(x, y)))
}

/// `x P y` iff strictly more voters prefer `x` to `y` than the reverse.
/// Ties leave both directions unset.
pub fn pairwise_majority(f: &Profile) -> BinaryRelation {
    let m = f.m();
    let mut rel = BinaryRelation::new(m);
    for x in 0..m {
        for y in 0..m {
            if x == y {
                continue;
            }
            let t = pair_partition_unchecked(f, x, y);
            rel.set(x, y, t.first.len() > t.second.len());
        }
    }
    rel
}

/// Every tri-partition of `0..n` a domain can produce, in a fixed order.
///
/// Each voter gets a digit (0 = first, 1 = second, 2 = tie; voter 0 most
/// significant) and the codes are listed in increasing order. The linear
/// domain never produces ties, so its digits range over {0, 1} only.
pub fn reachable_tripartitions(n: usize, domain: Domain) -> Vec<TriPartition> {
    let base: usize = match domain {
        Domain::Weak => 3,
        Domain::Linear => 2,
    };
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut t = TriPartition {
                first: Coalition::EMPTY,
                second: Coalition::EMPTY,
                tie: Coalition::EMPTY,
            };
            for v in (0..n).rev() {
                match code % base {
                    0 => t.first.insert(v),
                    1 => t.second.insert(v),
                    _ => t.tie.insert(v),
                }
                code /= base;
            }
            t
        })
        .collect()
}

/// The finite set of all profiles over a domain, with a stable indexing.
///
/// Profile `i` assigns voter `v` the order at digit `v` of `i` written in
/// base `|orders|`, voter 0 most significant (odometer order with the last
/// voter turning fastest).
#[derive(Clone, Debug)]
pub struct ProfileDomain {
    m: usize,
    n: usize,
    domain: Domain,
    orders: Vec<WeakOrder>,
    order_index: HashMap<WeakOrder, usize>,
    size: usize,
}

impl ProfileDomain {
    pub fn new(m: usize, n: usize, domain: Domain) -> Result<Self> {
        ProfileDomain::with_budget(m, n, domain, DEFAULT_PROFILE_BUDGET)
    }

    pub fn with_budget(m: usize, n: usize, domain: Domain, budget: u128) -> Result<Self> {
        if !(1..=MAX_VOTERS).contains(&n) {
            return Err(Error::VoterRange {
                n,
                min: 1,
                max: MAX_VOTERS,
            });
        }
        let orders = domain.orders(m)?;
        let size = (orders.len() as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::Budget { size, budget });
        }
        let order_index = orders
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(ProfileDomain {
            m,
            n,
            domain,
            orders,
            order_index,
            size: size as usize,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Order indices of each voter in profile `index`.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let base = self.orders.len();
        let mut digits = vec![0; self.n];
        for d in digits.iter_mut().rev() {
            *d = index % base;
            index /= base;
        }
        digits
    }

    pub fn profile(&self, index: usize) -> Profile {
        let prefs = self
            .digits(index)
            .into_iter()
            .map(|d| self.orders[d].clone())
            .collect();
        Profile { prefs }
    }

    /// Position of `f` in the enumeration, if it belongs to this domain.
    pub fn index_of(&self, f: &Profile) -> Option<usize> {
        if f.n() != self.n || f.m() != self.m {
            return None;
        }
        let base = self.orders.len();
        f.prefs().iter().try_fold(0usize, |acc, w| {
            self.order_index.get(w).map(|&d| acc * base + d)
        })
    }

    pub fn contains(&self, f: &Profile) -> bool {
        self.index_of(f).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.size).map(move |i| self.profile(i))
    }

    pub fn tripartitions(&self) -> Vec<TriPartition> {
        reachable_tripartitions(self.n, self.domain)
    }
}

/// Iterator over every profile of a domain.
pub struct ProfileIter {
    domain: ProfileDomain,
    next: usize,
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.next >= self.domain.len() {
            return None;
        }
        let p = self.domain.profile(self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.domain.len() - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ProfileIter {}

/// Enumerates `W^n` or `L^n` in odometer order, within the default budget.
pub fn enumerate_profiles(m: usize, n: usize, domain: Domain) -> Result<ProfileIter> {
    Ok(ProfileIter {
        domain: ProfileDomain::new(m, n, domain)?,
        next: 0,
    })
}

/// On-disk profile: `{"m":3,"n":3,"labels":["A","B","C"],"prefs":["A>B>C",...]}`.
///
/// Only `prefs` is required; `m` falls back to the label count or to the
/// alternatives named in the first preference, `n` to the number of
/// preferences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub prefs: Vec<String>,
}

impl ProfileFile {
    pub fn from_profile(f: &Profile, alts: &AlternativeSet) -> Self {
        ProfileFile {
            m: Some(f.m()),
            n: Some(f.n()),
            labels: Some(alts.labels()),
            prefs: f.to_texts(alts),
        }
    }

    /// Checks the decoded document and builds the profile.
    pub fn resolve(&self) -> Result<(AlternativeSet, Profile)> {
        let alts = match (&self.labels, self.m) {
            (_, Some(0)) => return Err(Error::parse("field `m`", "must be at least 1")),
            (Some(labels), m) => {
                if let Some(m) = m.filter(|&m| m != labels.len()) {
                    return Err(Error::parse(
                        "field `labels`",
                        format!("{} labels for m = {m}", labels.len()),
                    ));
                }
                AlternativeSet::with_labels(labels.clone())?
            }
            (None, Some(m)) => AlternativeSet::new(m)?,
            (None, None) => {
                let first = self
                    .prefs
                    .first()
                    .ok_or_else(|| Error::parse("field `prefs`", "no preferences listed"))?;
                let w: WeakOrder = first.parse().map_err(|e| match e {
                    Error::Parse { location, message } => Error::parse(format!("field `prefs[0]` {location}"), message),
                    other => other,
                })?;
                AlternativeSet::new(w.m())?
            }
        };
        if let Some(n) = self.n.filter(|&n| n != self.prefs.len()) {
            return Err(Error::parse(
                "field `n`",
                format!("n = {n} but {} preferences listed", self.prefs.len()),
            ));
        }
        let prefs = self
            .prefs
            .iter()
            .enumerate()
            .map(|(i, text)| {
                WeakOrder::parse(text, &alts).map_err(|e| match e {
                    Error::Parse { location, message } => {
                        Error::parse(format!("field `prefs[{i}]` {location}"), message)
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((alts, Profile::new(prefs)?))
    }
}

fn json_location(e: &serde_json::Error) -> String {
    format!("line {} column {}", e.line(), e.column())
}

/// Parses a profile document, reporting the line or field at fault.
pub fn parse_profile_json(text: &str) -> Result<(AlternativeSet, Profile)> {
    let file: ProfileFile =
        serde_json::from_str(text).map_err(|e| Error::parse(json_location(&e), e.to_string()))?;
    file.resolve()
}
