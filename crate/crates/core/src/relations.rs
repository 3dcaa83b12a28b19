//! Binary relations and weak orders over a finite set of alternatives.
//!
//! Throughout the crate `x P y` means that `x` is strictly preferred to `y`.
//! A relation is a weak order when it is asymmetric (O1) and negatively
//! transitive (O2); such relations are stored canonically as an ordered
//! partition of the alternatives into indifference classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest alternative count supported by the enumerators.
pub const MAX_ENUMERATED_ALTERNATIVES: usize = 5;

/// Default display label of alternative `i`: `A`, `B`, ... then `X26`, ...
pub fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("X{i}")
    }
}

/// The alternatives `0..m`, optionally carrying display names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl AlternativeSet {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::AlternativeRange {
                m,
                min: 1,
                max: usize::MAX,
            });
        }
        Ok(AlternativeSet {
            size: m,
            labels: None,
        })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut set = AlternativeSet::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(['>', '~', ',']) || l.trim() != l {
                return Err(Error::parse(
                    format!("labels[{i}]"),
                    format!("label {l:?} must be nonempty and free of '>', '~', ',' and padding"),
                ));
            }
            if labels[..i].contains(l) {
                return Err(Error::parse(
                    format!("labels[{i}]"),
                    format!("duplicate label {l:?}"),
                ));
            }
        }
        set.labels = Some(labels);
        Ok(set)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => default_label(i),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.size).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == name),
            None => (0..self.size).find(|&i| default_label(i) == name),
        }
    }
}

/// An arbitrary binary relation on `0..m`, `holds[x][y]` meaning `x P y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    m: usize,
    holds: Vec<bool>,
}

impl BinaryRelation {
    /// The empty relation (everything indifferent).
    pub fn new(m: usize) -> Self {
        BinaryRelation {
            m,
            holds: vec![false; m * m],
        }
    }

    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = BinaryRelation::new(m);
        for &(x, y) in pairs {
            for a in [x, y] {
                if a >= m {
                    return Err(Error::UnknownAlternative { index: a, m });
                }
            }
            rel.set(x, y, true);
        }
        Ok(rel)
    }

    /// Builds from a square boolean table.
    pub fn from_table(table: &[Vec<bool>]) -> Result<Self> {
        let m = table.len();
        let mut rel = BinaryRelation::new(m);
        for (x, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Dimension(format!(
                    "row {x} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (y, &b) in row.iter().enumerate() {
                rel.set(x, y, b);
            }
        }
        Ok(rel)
    }

    /// Decodes bit `x * m + y` of `bits` as `x P y`.
    pub fn from_bits(m: usize, bits: u64) -> Self {
        let mut rel = BinaryRelation::new(m);
        for i in 0..m * m {
            rel.holds[i] = bits >> i & 1 == 1;
        }
        rel
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.holds[x * self.m + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.holds[x * self.m + y] = value;
    }

    /// All `(x, y)` with `x P y`, in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|x| (0..self.m).map(move |y| (x, y)))
            .filter(|&(x, y)| self.get(x, y))
            .collect()
    }
}

/// Why a relation fails to be a weak order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum OrderViolation {
    /// `x P y` and `y P x` (O1).
    Asymmetry { x: usize, y: usize },
    /// `not x P y`, `not y P z`, yet `x P z` (O2).
    NegativeTransitivity { x: usize, y: usize, z: usize },
}

impl OrderViolation {
    pub fn describe(&self, alts: &AlternativeSet) -> String {
        match *self {
            OrderViolation::Asymmetry { x, y } => format!(
                "(O1) asymmetry fails: {0}P{1} and {1}P{0}",
                alts.label(x),
                alts.label(y)
            ),
            OrderViolation::NegativeTransitivity { x, y, z } => format!(
                "(O2) negative transitivity fails at ({0},{1},{2}): not {0}P{1}, not {1}P{2}, but {0}P{2}",
                alts.label(x),
                alts.label(y),
                alts.label(z)
            ),
        }
    }

    /// Alternatives named by the witness.
    pub fn alternatives(&self) -> Vec<usize> {
        match *self {
            OrderViolation::Asymmetry { x, y } => vec![x, y],
            OrderViolation::NegativeTransitivity { x, y, z } => vec![x, y, z],
        }
    }
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.alternatives().into_iter().max().unwrap_or(0) + 1;
        f.write_str(&self.describe(&AlternativeSet::new(m).expect("m >= 1")))
    }
}

pub type ValidationResult = std::result::Result<(), OrderViolation>;

/// Checks (O1) then (O2), returning the lexicographically first witness.
pub fn validate_weak_order(rel: &BinaryRelation) -> ValidationResult {
    let m = rel.m();
    for x in 0..m {
        for y in 0..m {
            if rel.get(x, y) && rel.get(y, x) {
                return Err(OrderViolation::Asymmetry { x, y });
            }
        }
    }
    for x in 0..m {
        for y in 0..m {
            if rel.get(x, y) {
                continue;
            }
            for z in 0..m {
                if !rel.get(y, z) && rel.get(x, z) {
                    return Err(OrderViolation::NegativeTransitivity { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// The restriction of a weak order to an ordered pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStance {
    /// `x P y`.
    First,
    /// `y P x`.
    Second,
    Indifferent,
}

impl PairStance {
    pub const ALL: [PairStance; 3] = [PairStance::First, PairStance::Second, PairStance::Indifferent];

    /// The stance on the reversed pair `(y, x)`.
    pub fn flip(self) -> Self {
        match self {
            PairStance::First => PairStance::Second,
            PairStance::Second => PairStance::First,
            PairStance::Indifferent => PairStance::Indifferent,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PairStance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairStance::First => "first",
            PairStance::Second => "second",
            PairStance::Indifferent => "indifferent",
        })
    }
}

/// A weak order, stored as the class index of every alternative.
///
/// Class `0` is the most preferred; class indices are dense, so two weak
/// orders are equal iff they induce the same relation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeakOrder {
    rank: Vec<u8>,
}

impl WeakOrder {
    /// Canonicalizes an arbitrary rank vector (lower rank = better).
    pub fn from_ranks<T: Into<u64> + Copy>(ranks: &[T]) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::AlternativeRange {
                m: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        let mut levels: Vec<u64> = ranks.iter().map(|&r| r.into()).collect();
        levels.sort_unstable();
        levels.dedup();
        let rank = ranks
            .iter()
            .map(|&r| levels.binary_search(&r.into()).expect("present") as u8)
            .collect();
        Ok(WeakOrder { rank })
    }

    /// Builds from an ordered list of indifference classes covering `0..m`.
    pub fn from_classes(m: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut rank = vec![u8::MAX; m];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::Precondition(format!("class {c} is empty")));
            }
            for &x in class {
                if x >= m {
                    return Err(Error::UnknownAlternative { index: x, m });
                }
                if rank[x] != u8::MAX {
                    return Err(Error::Precondition(format!("alternative {x} appears twice")));
                }
                rank[x] = c as u8;
            }
        }
        if let Some(x) = rank.iter().position(|&r| r == u8::MAX) {
            return Err(Error::Precondition(format!("alternative {x} missing")));
        }
        WeakOrder::from_ranks(&rank)
    }

    /// Strict linear order listing alternatives from best to worst.
    pub fn linear(best_to_worst: &[usize]) -> Result<Self> {
        let classes: Vec<Vec<usize>> = best_to_worst.iter().map(|&x| vec![x]).collect();
        WeakOrder::from_classes(best_to_worst.len(), &classes)
    }

    /// Total indifference on `m` alternatives.
    pub fn indifferent(m: usize) -> Self {
        WeakOrder { rank: vec![0; m] }
    }

    pub fn m(&self) -> usize {
        self.rank.len()
    }

    pub fn ranks(&self) -> &[u8] {
        &self.rank
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x] as usize
    }

    pub fn class_count(&self) -> usize {
        self.rank.iter().max().map_or(0, |&r| r as usize + 1)
    }

    /// Indifference classes, best first, members ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.class_count()];
        for (x, &r) in self.rank.iter().enumerate() {
            classes[r as usize].push(x);
        }
        classes
    }

    pub fn is_linear(&self) -> bool {
        self.class_count() == self.m()
    }

    /// `x P y`.
    #[inline]
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.rank[x] < self.rank[y]
    }

    /// Stance on `(x, y)`, skipping the argument checks of [`pair_stance`].
    #[inline]
    pub fn stance(&self, x: usize, y: usize) -> PairStance {
        match self.rank[x].cmp(&self.rank[y]) {
            std::cmp::Ordering::Less => PairStance::First,
            std::cmp::Ordering::Greater => PairStance::Second,
            std::cmp::Ordering::Equal => PairStance::Indifferent,
        }
    }

    /// The induced relation `x P y` iff `x`'s class precedes `y`'s.
    pub fn relation(&self) -> BinaryRelation {
        let m = self.m();
        let mut rel = BinaryRelation::new(m);
        for x in 0..m {
            for y in 0..m {
                rel.set(x, y, self.prefers(x, y));
            }
        }
        rel
    }

    /// The same classes in the opposite order.
    pub fn reversed(&self) -> Self {
        let top = self.class_count() as u8 - 1;
        WeakOrder {
            rank: self.rank.iter().map(|&r| top - r).collect(),
        }
    }

    pub fn to_text(&self, alts: &AlternativeSet) -> String {
        self.classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|&x| alts.label(x))
                    .collect::<Vec<_>>()
                    .join("~")
            })
            .collect::<Vec<_>>()
            .join(">")
    }

    /// Parses `"A>B~C"`: classes separated by `>`, members of a class by `~`.
    pub fn parse(text: &str, alts: &AlternativeSet) -> Result<Self> {
        let m = alts.size();
        let mut rank = vec![u8::MAX; m];
        let mut column = 0usize;
        for (c, class) in text.split('>').enumerate() {
            for name in class.split('~') {
                let trimmed = name.trim();
                let at = format!("column {}", column + 1);
                if trimmed.is_empty() {
                    return Err(Error::parse(at, "empty alternative name"));
                }
                let x = alts
                    .index_of(trimmed)
                    .ok_or_else(|| Error::parse(at.clone(), format!("unknown alternative {trimmed:?}")))?;
                if rank[x] != u8::MAX {
                    return Err(Error::parse(at, format!("alternative {trimmed:?} listed twice")));
                }
                rank[x] = c as u8;
                column += name.len() + 1;
            }
        }
        if let Some(x) = rank.iter().position(|&r| r == u8::MAX) {
            return Err(Error::parse(
                "end of order",
                format!("alternative {:?} missing", alts.label(x)),
            ));
        }
        Ok(WeakOrder { rank })
    }
}

impl fmt::Debug for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeakOrder({self})")
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alts = AlternativeSet::new(self.m()).expect("m >= 1");
        f.write_str(&self.to_text(&alts))
    }
}

/// Parses with default labels; the alternative count is the number of names.
impl FromStr for WeakOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s.split(['>', '~']).count();
        WeakOrder::parse(s, &AlternativeSet::new(m)?)
    }
}

impl Serialize for WeakOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeakOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Converts a validated weak order relation to its canonical classes.
pub fn to_canonical(rel: &BinaryRelation) -> Result<WeakOrder> {
    validate_weak_order(rel).map_err(Error::NotWeakOrder)?;
    let m = rel.m();
    if m == 0 {
        return Err(Error::AlternativeRange {
            m,
            min: 1,
            max: usize::MAX,
        });
    }
    // In a weak order, the number of strictly better alternatives is
    // constant on indifference classes and increases down the order.
    let above: Vec<u64> = (0..m)
        .map(|x| (0..m).filter(|&y| rel.get(y, x)).count() as u64)
        .collect();
    let order = WeakOrder::from_ranks(&above)?;
    if order.relation() != *rel {
        return Err(Error::Internal(format!(
            "canonical form {order} does not reproduce its input"
        )));
    }
    Ok(order)
}

/// Stance of `w` on `(x, y)`.
pub fn pair_stance(w: &WeakOrder, x: usize, y: usize) -> Result<PairStance> {
    let m = w.m();
    for a in [x, y] {
        if a >= m {
            return Err(Error::UnknownAlternative { index: a, m });
        }
    }
    if x == y {
        return Err(Error::SamePair(x));
    }
    Ok(w.stance(x, y))
}

fn check_enumeration_range(m: usize) -> Result<()> {
    if !(1..=MAX_ENUMERATED_ALTERNATIVES).contains(&m) {
        return Err(Error::AlternativeRange {
            m,
            min: 1,
            max: MAX_ENUMERATED_ALTERNATIVES,
        });
    }
    Ok(())
}

/// Every rank vector over `0..m` in lexicographic order (alternative 0 most
/// significant), calling `visit` on each.
fn for_each_rank_vector(m: usize, mut visit: impl FnMut(&[u8])) {
    let mut rank = vec![0u8; m];
    loop {
        visit(&rank);
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            rank[i] += 1;
            if (rank[i] as usize) < m {
                break;
            }
            rank[i] = 0;
        }
    }
}

/// All weak orders on `m` alternatives.
///
/// Orders are listed lexicographically by their rank vector
/// `(rank(0), ..., rank(m-1))`, where rank is the index of the alternative's
/// class counting from the top. For `m = 2` that is `A~B`, `A>B`, `B>A`.
pub fn enumerate_weak_orders(m: usize) -> Result<Vec<WeakOrder>> {
    check_enumeration_range(m)?;
    let mut out = Vec::new();
    for_each_rank_vector(m, |rank| {
        let top = *rank.iter().max().expect("m >= 1");
        // dense: every class index 0..=top is used
        if (0..=top).all(|c| rank.contains(&c)) {
            out.push(WeakOrder {
                rank: rank.to_vec(),
            });
        }
    });
    Ok(out)
}

/// All strict linear orders on `m` alternatives, in the same rank-vector order.
pub fn enumerate_linear_orders(m: usize) -> Result<Vec<WeakOrder>> {
    Ok(enumerate_weak_orders(m)?
        .into_iter()
        .filter(WeakOrder::is_linear)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> AlternativeSet {
        AlternativeSet::new(3).unwrap()
    }

    /// Oracle: every relation on `m` alternatives that passes validation.
    fn brute_force_weak_orders(m: usize) -> Vec<BinaryRelation> {
        (0..1u64 << (m * m))
            .map(|bits| BinaryRelation::from_bits(m, bits))
            .filter(|r| validate_weak_order(r).is_ok())
            .collect()
    }

    #[test]
    fn linear_and_empty_relations_validate() {
        let lin = BinaryRelation::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(validate_weak_order(&lin), Ok(()));
        assert_eq!(validate_weak_order(&BinaryRelation::new(3)), Ok(()));
    }

    #[test]
    fn cycle_fails_negative_transitivity() {
        let cycle = BinaryRelation::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let err = validate_weak_order(&cycle).unwrap_err();
        assert_eq!(err, OrderViolation::NegativeTransitivity { x: 0, y: 2, z: 1 });
    }

    #[test]
    fn reflexive_entry_breaks_asymmetry() {
        let rel = BinaryRelation::from_pairs(2, &[(1, 1)]).unwrap();
        assert_eq!(
            validate_weak_order(&rel),
            Err(OrderViolation::Asymmetry { x: 1, y: 1 })
        );
    }

    #[test]
    fn canonical_forms() {
        let lin = BinaryRelation::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(to_canonical(&lin).unwrap().classes(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(to_canonical(&BinaryRelation::new(3)).unwrap().classes(), vec![vec![0, 1, 2]]);

        let rel = BinaryRelation::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        let w = to_canonical(&rel).unwrap();
        assert_eq!(w.classes(), vec![vec![0, 1], vec![2]]);
        assert_eq!(w.relation(), rel);
    }

    #[test]
    fn canonical_rejects_invalid() {
        let cycle = BinaryRelation::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(to_canonical(&cycle), Err(Error::NotWeakOrder(_))));
    }

    #[test]
    fn enumeration_counts_match_relation_filter() {
        assert_eq!(enumerate_weak_orders(1).unwrap().len(), 1);
        for m in 1..=3 {
            let oracle = brute_force_weak_orders(m);
            let listed = enumerate_weak_orders(m).unwrap();
            assert_eq!(listed.len(), oracle.len());
            let mut rels: Vec<_> = listed.iter().map(|w| w.relation()).collect();
            rels.dedup();
            assert_eq!(rels.len(), listed.len());
            for r in &oracle {
                assert!(rels.contains(r));
            }
        }
        assert_eq!(enumerate_weak_orders(2).unwrap().len(), 3);
        assert_eq!(enumerate_weak_orders(3).unwrap().len(), 13);
        assert_eq!(enumerate_weak_orders(5).unwrap().len(), 541);
    }

    #[test]
    fn enumeration_order_is_documented() {
        let two: Vec<String> = enumerate_weak_orders(2).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(two, ["A~B", "A>B", "B>A"]);
        let lin: Vec<String> = enumerate_linear_orders(3).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(lin, ["A>B>C", "A>C>B", "B>A>C", "C>A>B", "B>C>A", "C>B>A"]);
    }

    #[test]
    fn linear_counts() {
        assert_eq!(enumerate_linear_orders(2).unwrap().len(), 2);
        assert_eq!(enumerate_linear_orders(3).unwrap().len(), 6);
        assert_eq!(enumerate_linear_orders(4).unwrap().len(), 24);
    }

    #[test]
    fn enumeration_range() {
        assert!(matches!(enumerate_weak_orders(0), Err(Error::AlternativeRange { .. })));
        assert!(matches!(enumerate_linear_orders(6), Err(Error::AlternativeRange { .. })));
    }

    #[test]
    fn stances() {
        let abc_order: WeakOrder = "A>B>C".parse().unwrap();
        assert_eq!(pair_stance(&abc_order, 0, 1).unwrap(), PairStance::First);
        assert_eq!(pair_stance(&abc_order, 2, 0).unwrap(), PairStance::Second);
        let tied: WeakOrder = "A~B>C".parse().unwrap();
        assert_eq!(pair_stance(&tied, 0, 1).unwrap(), PairStance::Indifferent);
        assert_eq!(pair_stance(&tied, 1, 1), Err(Error::SamePair(1)));
        assert!(pair_stance(&tied, 0, 3).is_err());
    }

    #[test]
    fn text_round_trip() {
        let alts = AlternativeSet::with_labels(vec!["red".into(), "green".into(), "blue".into()]).unwrap();
        let w = WeakOrder::parse("blue>red~green", &alts).unwrap();
        assert_eq!(w.to_text(&alts), "blue>red~green");
        for w in enumerate_weak_orders(4).unwrap() {
            let text = w.to_string();
            assert_eq!(text.parse::<WeakOrder>().unwrap(), w);
        }
        // members inside a class are printed in index order
        assert_eq!("C~A>B".parse::<WeakOrder>().unwrap().to_string(), "A~C>B");
    }

    #[test]
    fn parse_errors_name_the_column() {
        let err = WeakOrder::parse("A>Q>C", &abc()).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                location: "column 3".into(),
                message: "unknown alternative \"Q\"".into()
            }
        );
        assert!(WeakOrder::parse("A>B", &abc()).is_err());
        assert!(WeakOrder::parse("A>B>A>C", &abc()).is_err());
        assert!(WeakOrder::parse("A>>B~C", &abc()).is_err());
    }

    #[test]
    fn reversal() {
        let w: WeakOrder = "A~B>C>D".parse().unwrap();
        assert_eq!(w.reversed().to_string(), "D>C>A~B");
    }

    /// Weak-order lemma (i)-(iii) and indifference as an equivalence, checked
    /// on every enumerated order for m <= 4.
    #[test]
    fn weak_order_lemmas_hold_exhaustively() {
        for m in 1..=4 {
            for w in enumerate_weak_orders(m).unwrap() {
                let p = |a: usize, b: usize| w.prefers(a, b);
                let ind = |a: usize, b: usize| !p(a, b) && !p(b, a);
                for x in 0..m {
                    assert!(ind(x, x));
                    for y in 0..m {
                        assert_eq!(ind(x, y), ind(y, x));
                        for z in 0..m {
                            assert!(!p(x, z) || p(x, y) || p(y, z));
                            assert!(!(p(x, y) && p(y, z)) || p(x, z));
                            assert!(!((!p(y, x) && p(y, z)) || (p(x, y) && !p(z, y))) || p(x, z));
                            assert!(!(ind(x, y) && ind(y, z)) || ind(x, z));
                        }
                    }
                }
                assert_eq!(to_canonical(&w.relation()).unwrap(), w);
            }
        }
    }
}
