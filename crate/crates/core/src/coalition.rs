//! Voter subsets of a finite electorate, stored as bitmasks.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest electorate a [`Coalition`] can address.
pub const MAX_VOTERS: usize = 64;

/// A subset of the voters `0..n`, bit `v` set iff voter `v` is a member.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(pub u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    /// The grand coalition `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VOTERS);
        if n == MAX_VOTERS {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        Coalition(1u64 << v)
    }

    pub fn from_voters<I: IntoIterator<Item = usize>>(voters: I) -> Self {
        Coalition(voters.into_iter().fold(0, |acc, v| acc | (1u64 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VOTERS && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    /// Complement relative to the ground set `0..n`.
    pub fn complement(self, n: usize) -> Self {
        Coalition(!self.0 & Coalition::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn voters(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.voters().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

// Serialized as a sorted voter array, e.g. `[0, 2]`.
impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.voters())
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let voters = Vec::<usize>::deserialize(deserializer)?;
        let mut c = Coalition::EMPTY;
        for v in voters {
            if v >= MAX_VOTERS {
                return Err(serde::de::Error::custom(format!(
                    "voter {v} exceeds the supported maximum of {}",
                    MAX_VOTERS - 1
                )));
            }
            if c.contains(v) {
                return Err(serde::de::Error::custom(format!("voter {v} listed twice")));
            }
            c.insert(v);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_stays_inside_ground_set() {
        let c = Coalition::from_voters([0, 2]);
        assert_eq!(c.complement(4), Coalition::from_voters([1, 3]));
        assert_eq!(Coalition::full(64).complement(64), Coalition::EMPTY);
    }

    #[test]
    fn voters_iterate_in_order() {
        let c = Coalition::from_voters([5, 1, 3]);
        assert_eq!(c.voters().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(c.to_string(), "{1,3,5}");
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,3,5]");
    }

    #[test]
    fn duplicate_voters_rejected() {
        assert!(serde_json::from_str::<Coalition>("[1,1]").is_err());
        assert!(serde_json::from_str::<Coalition>("[64]").is_err());
    }
}
