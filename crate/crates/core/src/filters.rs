//! Filters and ultrafilters on a finite voter set.
//!
//! A [`CoalitionFamily`] is a set of subsets of `0..n`, stored as a bitset
//! indexed by subset mask. On a finite ground set every filter is fixed and
//! every ultrafilter is principal; the exhaustive scans here confirm that
//! for small `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// Largest ground set a family can live on.
pub const MAX_GROUND: usize = 12;

/// Largest ground set [`enumerate_filters`] scans (2^(2^4) families).
pub const MAX_ENUMERATED_GROUND: usize = 4;

/// A family of subsets of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionFamily {
    n: usize,
    /// Bit `mask` set iff the subset `mask` is a member.
    words: Vec<u64>,
}

fn subsets(n: usize) -> usize {
    1 << n
}

impl CoalitionFamily {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::VoterRange {
                n,
                min: 0,
                max: MAX_GROUND,
            });
        }
        Ok(CoalitionFamily {
            n,
            words: vec![0; subsets(n).div_ceil(64)],
        })
    }

    pub fn from_members<I: IntoIterator<Item = Coalition>>(n: usize, members: I) -> Result<Self> {
        let mut fam = CoalitionFamily::empty(n)?;
        for c in members {
            if !c.is_subset(Coalition::full(n)) {
                return Err(Error::Precondition(format!("member {c} is not a subset of 0..{n}")));
            }
            fam.insert(c);
        }
        Ok(fam)
    }

    /// Decodes a family over `n <= 6` from the bitset of its member masks.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!(n <= 6);
        let keep = if subsets(n) == 64 { u64::MAX } else { (1u64 << subsets(n)) - 1 };
        CoalitionFamily {
            n,
            words: vec![bits & keep],
        }
    }

    /// `{U : v in U}`.
    pub fn principal(n: usize, v: usize) -> Result<Self> {
        if v >= n {
            return Err(Error::Precondition(format!("voter {v} outside 0..{n}")));
        }
        CoalitionFamily::upward_closure_of(n, Coalition::singleton(v))
    }

    /// `{U : base is a subset of U}`.
    pub fn upward_closure_of(n: usize, base: Coalition) -> Result<Self> {
        let mut fam = CoalitionFamily::empty(n)?;
        for mask in 0..subsets(n) as u64 {
            if base.is_subset(Coalition(mask)) {
                fam.insert(Coalition(mask));
            }
        }
        Ok(fam)
    }

    pub fn power_set(n: usize) -> Result<Self> {
        CoalitionFamily::upward_closure_of(n, Coalition::EMPTY)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, c: Coalition) -> bool {
        let i = c.0 as usize;
        i < subsets(self.n) && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, c: Coalition) {
        let i = c.0 as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> impl Iterator<Item = Coalition> + '_ {
        (0..subsets(self.n) as u64)
            .map(Coalition)
            .filter(|&c| self.contains(c))
    }

    pub fn is_subfamily(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Intersection of all members; the full ground set for an empty family.
    pub fn intersection(&self) -> Coalition {
        self.members()
            .fold(Coalition::full(self.n), Coalition::intersection)
    }

    /// The smallest family containing `self` that is upward closed and
    /// closed under pairwise intersection.
    pub fn closure(&self) -> Self {
        let mut fam = self.clone();
        loop {
            let members: Vec<Coalition> = fam.members().collect();
            let mut grown = fam.clone();
            for &a in &members {
                for &b in &members {
                    grown.insert(a.intersection(b));
                }
                for mask in 0..subsets(self.n) as u64 {
                    if a.is_subset(Coalition(mask)) {
                        grown.insert(Coalition(mask));
                    }
                }
            }
            if grown == fam {
                return fam;
            }
            fam = grown;
        }
    }
}

impl std::fmt::Debug for CoalitionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CoalitionFamily(n={}, {self})", self.n)
    }
}

impl std::fmt::Display for CoalitionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let members: Vec<String> = self.members().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", members.join(", "))
    }
}

/// Why a family is not a filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum FilterViolation {
    /// A filter has at least one member (and hence the ground set).
    Empty,
    /// (F1): `member` is in the family, its superset is not.
    UpwardClosure { member: Coalition, superset: Coalition },
    /// (F2): `a` and `b` are members, `a ∩ b` is not.
    Intersection { a: Coalition, b: Coalition },
    /// (F3): the empty set is a member.
    Proper,
}

impl std::fmt::Display for FilterViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FilterViolation::Empty => write!(f, "the family is empty"),
            FilterViolation::UpwardClosure { member, superset } => {
                write!(f, "(F1) {member} is a member but its superset {superset} is not")
            }
            FilterViolation::Intersection { a, b } => {
                write!(f, "(F2) {a} and {b} are members but their intersection {} is not", a.intersection(*b))
            }
            FilterViolation::Proper => write!(f, "(F3) the empty set is a member"),
        }
    }
}

/// Checks (F1), (F2), (F3) in that order.
pub fn is_filter(fam: &CoalitionFamily) -> std::result::Result<(), FilterViolation> {
    if fam.is_empty() {
        return Err(FilterViolation::Empty);
    }
    let members: Vec<Coalition> = fam.members().collect();
    for &a in &members {
        for mask in 0..subsets(fam.n) as u64 {
            let b = Coalition(mask);
            if a.is_subset(b) && !fam.contains(b) {
                return Err(FilterViolation::UpwardClosure { member: a, superset: b });
            }
        }
    }
    for &a in &members {
        for &b in &members {
            if !fam.contains(a.intersection(b)) {
                return Err(FilterViolation::Intersection { a, b });
            }
        }
    }
    if fam.contains(Coalition::EMPTY) {
        return Err(FilterViolation::Proper);
    }
    Ok(())
}

/// A proper filter strictly finer than `fam`, if one exists.
///
/// Any strictly finer filter contains some absent set `B`, and then also the
/// filter generated by `fam` and `B`; so it suffices to try every one-set
/// extension and close it.
pub fn strictly_finer_filter(fam: &CoalitionFamily) -> Option<CoalitionFamily> {
    (0..subsets(fam.n) as u64).map(Coalition).find_map(|b| {
        if fam.contains(b) {
            return None;
        }
        let mut extended = fam.clone();
        extended.insert(b);
        let generated = extended.closure();
        (!generated.contains(Coalition::EMPTY)).then_some(generated)
    })
}

/// Maximality: no filter is strictly finer.
pub fn is_ultrafilter_maximal(fam: &CoalitionFamily) -> Result<bool> {
    if let Err(v) = is_filter(fam) {
        return Err(Error::Precondition(format!("not a filter: {v}")));
    }
    Ok(strictly_finer_filter(fam).is_none())
}

/// A filter holding exactly one of `A`, `Aᶜ` for every `A`.
pub fn is_ultrafilter_complement(fam: &CoalitionFamily) -> bool {
    is_filter(fam).is_ok()
        && (0..subsets(fam.n) as u64).all(|mask| {
            let a = Coalition(mask);
            fam.contains(a) != fam.contains(a.complement(fam.n))
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Fixedness {
    /// The members share `intersection`, which is nonempty.
    Fixed { intersection: Coalition },
    /// The members have empty intersection.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterClassification {
    pub is_filter: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<FilterViolation>,
    pub is_ultrafilter: bool,
    pub fixedness: Fixedness,
    /// The voter `v` with `fam = {U : v in U}`, if the family has that form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<usize>,
}

pub fn classify(fam: &CoalitionFamily) -> FilterClassification {
    let violation = is_filter(fam).err();
    let meet = fam.intersection();
    let fixedness = if meet.is_empty() {
        Fixedness::Free
    } else {
        Fixedness::Fixed { intersection: meet }
    };
    let generator = (meet.len() == 1)
        .then(|| meet.min().expect("nonempty"))
        .filter(|&v| CoalitionFamily::principal(fam.n, v).as_ref() == Ok(fam));
    FilterClassification {
        is_filter: violation.is_none(),
        violation,
        is_ultrafilter: is_ultrafilter_complement(fam),
        fixedness,
        generator,
    }
}

/// Every filter on `0..n`, found by testing all `2^(2^n)` families in
/// increasing order of their member bitset.
pub fn enumerate_filters(n: usize) -> Result<Vec<CoalitionFamily>> {
    if n > MAX_ENUMERATED_GROUND {
        return Err(Error::VoterRange {
            n,
            min: 0,
            max: MAX_ENUMERATED_GROUND,
        });
    }
    let families = 1u64 << subsets(n);
    Ok((0..families)
        .into_par_iter()
        .map(|bits| CoalitionFamily::from_bits(n, bits))
        .filter(|fam| is_filter(fam).is_ok())
        .collect())
}

/// On-disk family: `{"n":3,"members":[[0],[0,1],[0,2],[0,1,2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub members: Vec<Coalition>,
}

impl FamilyFile {
    pub fn from_family(fam: &CoalitionFamily) -> Self {
        FamilyFile {
            n: fam.n,
            members: fam.members().collect(),
        }
    }

    pub fn resolve(&self) -> Result<CoalitionFamily> {
        let mut fam = CoalitionFamily::empty(self.n).map_err(|e| Error::parse("field `n`", e.to_string()))?;
        for (i, &c) in self.members.iter().enumerate() {
            if !c.is_subset(Coalition::full(self.n)) {
                return Err(Error::parse(
                    format!("field `members[{i}]`"),
                    format!("{c} is not a subset of 0..{}", self.n),
                ));
            }
            if fam.contains(c) {
                return Err(Error::parse(format!("field `members[{i}]`"), format!("{c} listed twice")));
            }
            fam.insert(c);
        }
        Ok(fam)
    }
}

impl Serialize for CoalitionFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyFile::from_family(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoalitionFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FamilyFile::deserialize(deserializer)?
            .resolve()
            .map_err(serde::de::Error::custom)
    }
}

pub fn parse_family_json(text: &str) -> Result<CoalitionFamily> {
    let file: FamilyFile = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    file.resolve()
}
