//! JSON documents for welfare functions.
//!
//! ```json
//! {"kind":"explicit","m":3,"n":1,"domain":"linear","entries":[[["A>B>C"],"A>B>C"], ...]}
//! {"kind":"pairwise","m":3,"n":2,"domain":"linear","rules":{"A,B":[[[[0,1],[],[]],"first"], ...], ...}}
//! ```
//!
//! `m`, `n`, `domain` and `labels` may be omitted; they are then inferred
//! from the entries (a domain is linear unless some order or split has a tie).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{Domain, Profile, ProfileDomain, TriPartition};
use crate::relations::{AlternativeSet, PairStance, WeakOrder};

use super::{ExplicitSwf, PairwiseRuleSwf, Swf, WelfareFunction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SwfFile {
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Domain>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        entries: Vec<(Vec<String>, String)>,
    },
    Pairwise {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Domain>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        rules: BTreeMap<String, Vec<(TriPartition, PairStance)>>,
    },
}

/// A decoded function together with the alternative names it was written with.
#[derive(Clone, Debug)]
pub struct LoadedSwf {
    pub alts: AlternativeSet,
    pub swf: Swf,
}

fn alternative_set(m: Option<usize>, labels: &Option<Vec<String>>, fallback_m: impl FnOnce() -> Option<usize>) -> Result<AlternativeSet> {
    match labels {
        Some(l) => {
            if let Some(m) = m {
                if m != l.len() {
                    return Err(Error::parse("field `labels`", format!("{} labels for m = {m}", l.len())));
                }
            }
            AlternativeSet::with_labels(l.clone())
        }
        None => {
            let m = m
                .or_else(fallback_m)
                .ok_or_else(|| Error::parse("field `m`", "missing and cannot be inferred"))?;
            AlternativeSet::new(m)
        }
    }
}

fn located(at: String) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Parse { location, message } => Error::parse(format!("{at} {location}"), message),
        other => Error::parse(at, other.to_string()),
    }
}

impl SwfFile {
    pub fn from_explicit(s: &ExplicitSwf, alts: &AlternativeSet) -> Self {
        let d = s.domain();
        SwfFile::Explicit {
            m: Some(d.m()),
            n: Some(d.n()),
            domain: Some(d.domain()),
            labels: Some(alts.labels()),
            entries: d
                .iter()
                .zip(s.verdicts())
                .map(|(f, w)| (f.to_texts(alts), w.to_text(alts)))
                .collect(),
        }
    }

    pub fn from_pairwise(s: &PairwiseRuleSwf, alts: &AlternativeSet) -> Self {
        let d = s.domain();
        SwfFile::Pairwise {
            m: Some(d.m()),
            n: Some(d.n()),
            domain: Some(d.domain()),
            labels: Some(alts.labels()),
            rules: s
                .tables()
                .into_iter()
                .map(|((x, y), table)| (format!("{},{}", alts.label(x), alts.label(y)), table))
                .collect(),
        }
    }

    pub fn from_swf(s: &Swf, alts: &AlternativeSet) -> Self {
        match s {
            Swf::Explicit(e) => SwfFile::from_explicit(e, alts),
            Swf::Pairwise(p) => SwfFile::from_pairwise(p, alts),
        }
    }

    /// Validates the document and builds the function.
    pub fn resolve(&self) -> Result<LoadedSwf> {
        match self {
            SwfFile::Explicit {
                m,
                n,
                domain,
                labels,
                entries,
            } => {
                let alts = alternative_set(*m, labels, || {
                    entries.first().map(|(_, v)| v.split(['>', '~']).count())
                })?;
                let n = n
                    .or_else(|| entries.first().map(|(p, _)| p.len()))
                    .ok_or_else(|| Error::parse("field `n`", "missing and cannot be inferred"))?;
                let mut parsed = Vec::with_capacity(entries.len());
                for (i, (profile, verdict)) in entries.iter().enumerate() {
                    let prefs = profile
                        .iter()
                        .enumerate()
                        .map(|(v, t)| WeakOrder::parse(t, &alts).map_err(located(format!("field `entries[{i}][0][{v}]`"))))
                        .collect::<Result<Vec<_>>>()?;
                    let f = Profile::new(prefs).map_err(located(format!("field `entries[{i}][0]`")))?;
                    let w = WeakOrder::parse(verdict, &alts).map_err(located(format!("field `entries[{i}][1]`")))?;
                    parsed.push((f, w));
                }
                let domain = domain.unwrap_or_else(|| {
                    if parsed.iter().all(|(f, _)| f.prefs().iter().all(WeakOrder::is_linear)) {
                        Domain::Linear
                    } else {
                        Domain::Weak
                    }
                });
                let d = ProfileDomain::new(alts.size(), n, domain)?;
                let mut verdicts: Vec<Option<WeakOrder>> = vec![None; d.len()];
                for (i, (f, w)) in parsed.into_iter().enumerate() {
                    let at = format!("field `entries[{i}]`");
                    let index = d.index_of(&f).ok_or_else(|| {
                        Error::parse(at.clone(), format!("profile {f} is outside the {} domain", domain.as_str()))
                    })?;
                    if verdicts[index].replace(w).is_some() {
                        return Err(Error::parse(at, format!("profile {f} listed twice")));
                    }
                }
                if let Some(missing) = verdicts.iter().position(Option::is_none) {
                    return Err(Error::parse(
                        "field `entries`",
                        format!("verdict table is not total: profile {} missing", d.profile(missing)),
                    ));
                }
                let swf = ExplicitSwf::from_verdicts(d, verdicts.into_iter().map(Option::unwrap).collect())?;
                Ok(LoadedSwf {
                    alts,
                    swf: Swf::Explicit(swf),
                })
            }
            SwfFile::Pairwise {
                m,
                n,
                domain,
                labels,
                rules,
            } => {
                let alts = alternative_set(*m, labels, || {
                    // k(k-1)/2 pairs
                    let pairs = rules.len();
                    (2..=26).find(|k| k * (k - 1) / 2 == pairs)
                })?;
                let n = n
                    .or_else(|| {
                        rules.values().flatten().next().map(|(t, _)| {
                            let all = t.first.union(t.second).union(t.tie);
                            all.0.checked_ilog2().map_or(0, |b| b as usize + 1)
                        })
                    })
                    .ok_or_else(|| Error::parse("field `n`", "missing and cannot be inferred"))?;
                let domain = domain.unwrap_or_else(|| {
                    if rules.values().flatten().any(|(t, _)| !t.tie.is_empty()) {
                        Domain::Weak
                    } else {
                        Domain::Linear
                    }
                });
                let mut tables = HashMap::new();
                for (key, table) in rules {
                    let at = format!("field `rules.{key}`");
                    let names: Vec<&str> = key.split(',').collect();
                    let [a, b] = names[..] else {
                        return Err(Error::parse(at, "pair key must read \"X,Y\""));
                    };
                    let idx = |name: &str| {
                        alts.index_of(name.trim())
                            .ok_or_else(|| Error::parse(at.clone(), format!("unknown alternative {name:?}")))
                    };
                    let (x, y) = (idx(a)?, idx(b)?);
                    if x == y {
                        return Err(Error::parse(at, "pair names one alternative twice"));
                    }
                    // normalize to x < y
                    let entries: Vec<(TriPartition, PairStance)> = if x < y {
                        table.clone()
                    } else {
                        table.iter().map(|(t, s)| (t.flipped(), s.flip())).collect()
                    };
                    if tables.insert((x.min(y), x.max(y)), entries).is_some() {
                        return Err(Error::parse(at, "pair listed twice"));
                    }
                }
                let d = ProfileDomain::new(alts.size(), n, domain)?;
                let swf = PairwiseRuleSwf::from_tables(d, &tables).map_err(located("field `rules`".into()))?;
                Ok(LoadedSwf {
                    alts,
                    swf: Swf::Pairwise(swf),
                })
            }
        }
    }
}

/// Parses and validates a welfare-function document.
pub fn parse_swf_json(text: &str) -> Result<LoadedSwf> {
    let file: SwfFile = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    file.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swf::{dictator, dictator_rules, full_report};

    #[test]
    fn explicit_round_trip() {
        let d = ProfileDomain::new(3, 2, Domain::Linear).unwrap();
        let alts = AlternativeSet::new(3).unwrap();
        let s = dictator(d, 1).unwrap();
        let text = serde_json::to_string(&SwfFile::from_explicit(&s, &alts)).unwrap();
        let loaded = parse_swf_json(&text).unwrap();
        match &loaded.swf {
            Swf::Explicit(e) => assert_eq!(e.verdicts(), s.verdicts()),
            _ => panic!("wrong kind"),
        }
        assert_eq!(full_report(&loaded.swf).dictator(), Some(1));
    }

    #[test]
    fn pairwise_round_trip_and_inference() {
        let d = ProfileDomain::new(3, 2, Domain::Weak).unwrap();
        let alts = AlternativeSet::new(3).unwrap();
        let s = dictator_rules(d, 0).unwrap();
        let mut value = serde_json::to_value(SwfFile::from_pairwise(&s, &alts)).unwrap();
        let obj = value.as_object_mut().unwrap();
        for k in ["m", "n", "domain", "labels"] {
            obj.remove(k);
        }
        let loaded = parse_swf_json(&value.to_string()).unwrap();
        match loaded.swf {
            Swf::Pairwise(p) => assert_eq!(p, s),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn minimal_explicit_document_infers_shape() {
        let orders = ["A>B>C", "A>C>B", "B>A>C", "C>A>B", "B>C>A", "C>B>A"];
        let entries: Vec<String> = orders.iter().map(|o| format!("[[\"{o}\"],\"{o}\"]")).collect();
        let text = format!("{{\"kind\":\"explicit\",\"entries\":[{}]}}", entries.join(","));
        let loaded = parse_swf_json(&text).unwrap();
        assert_eq!(loaded.swf.domain().domain(), Domain::Linear);
        assert_eq!(loaded.swf.domain().n(), 1);
    }

    #[test]
    fn reversed_pair_keys_are_normalized() {
        let text = r#"{"kind":"pairwise","n":1,"domain":"linear","rules":{
            "B,A":[[[[0],[],[]],"first"],[[[],[0],[]],"second"]],
            "A,C":[[[[0],[],[]],"first"],[[[],[0],[]],"second"]],
            "B,C":[[[[0],[],[]],"first"],[[[],[0],[]],"second"]]}}"#;
        let loaded = parse_swf_json(text).unwrap();
        assert_eq!(crate::swf::find_dictator(&loaded.swf), Some(0));
    }

    #[test]
    fn errors() {
        let missing = r#"{"kind":"explicit","m":3,"n":1,"domain":"linear","entries":[[["A>B>C"],"A>B>C"]]}"#;
        match parse_swf_json(missing) {
            Err(Error::Parse { location, message }) => {
                assert_eq!(location, "field `entries`");
                assert!(message.contains("not total"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let outside = r#"{"kind":"explicit","m":3,"n":1,"domain":"linear","entries":[[["A~B>C"],"A>B>C"]]}"#;
        assert!(parse_swf_json(outside).is_err());
        let bad_kind = r#"{"kind":"magic","entries":[]}"#;
        assert!(parse_swf_json(bad_kind).is_err());
        let unknown_field = r#"{"kind":"explicit","entries":[],"extra":1}"#;
        assert!(parse_swf_json(unknown_field).is_err());
        let partial_rules = r#"{"kind":"pairwise","m":3,"n":1,"domain":"linear","rules":{"A,B":[[[[0],[],[]],"first"]]}}"#;
        assert!(parse_swf_json(partial_rules).is_err());
    }
}
