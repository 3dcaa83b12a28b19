//! Decisive coalitions of a welfare function and the ultrafilter
//! correspondence.
//!
//! A coalition `U` is decisive for `s` when, for every ordered pair
//! `(x, y)` and every profile in which all members of `U` strictly prefer
//! `x` to `y`, the verdict also has `x P y`. Voters outside `U` range freely
//! over the domain. The family extracted here is the set of *all* such
//! coalitions, computed by an exact scan of the finite domain.
//!
//! For functions satisfying A1-A4 the family is an ultrafilter, and on a
//! finite electorate every ultrafilter is principal, generated by the
//! dictator. Conversely every ultrafilter `u` yields the welfare function
//! `x P y` iff `{v : x P_v y}` is in `u`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::filters::{classify, is_filter, is_ultrafilter_complement, CoalitionFamily, FilterClassification, Fixedness, MAX_GROUND};
use crate::profiles::{Domain, ProfileDomain};
use crate::relations::{to_canonical, BinaryRelation, PairStance};
use crate::swf::{find_dictator, full_report, tripartition_at, ExplicitSwf, WelfareFunction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisiveFamily {
    pub family: CoalitionFamily,
    /// Representation of the function it came from.
    pub representation: String,
    pub m: usize,
    pub domain: Domain,
}

/// The decisive family without checking A1-A4 first.
pub fn extract_decisive_family_raw(s: &dyn WelfareFunction) -> Result<DecisiveFamily> {
    let d = s.domain();
    let (m, n) = (d.m(), d.n());
    if n > MAX_GROUND {
        return Err(Error::VoterRange { n, min: 1, max: MAX_GROUND });
    }
    let subsets = 1usize << n;
    // bad[U]: some profile has all of U preferring x while the verdict does not
    let mut bad = (0..d.len())
        .into_par_iter()
        .fold(
            || vec![false; subsets],
            |mut bad, i| {
                for x in 0..m {
                    for y in 0..m {
                        if x != y && s.stance(i, x, y) != PairStance::First {
                            bad[tripartition_at(d, i, x, y).first.0 as usize] = true;
                        }
                    }
                }
                bad
            },
        )
        .reduce(
            || vec![false; subsets],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(a, b)| *a |= b);
                a
            },
        );
    // subsets of a bad coalition are bad
    for v in 0..n {
        for mask in 0..subsets {
            if mask & (1 << v) != 0 && bad[mask] {
                bad[mask & !(1 << v)] = true;
            }
        }
    }
    let members = (0..subsets).filter(|&mask| !bad[mask]).map(|mask| Coalition(mask as u64));
    Ok(DecisiveFamily {
        family: CoalitionFamily::from_members(n, members)?,
        representation: s.representation().to_string(),
        m,
        domain: d.domain(),
    })
}

/// The decisive family of a function satisfying A1-A4.
pub fn extract_decisive_family(s: &dyn WelfareFunction) -> Result<DecisiveFamily> {
    let report = full_report(s);
    if !report.premises_hold() {
        return Err(Error::NotArrovian {
            failed: report.failed(),
        });
    }
    extract_decisive_family_raw(s)
}

/// The welfare function whose verdict ranks `x` above `y` exactly when the
/// voters doing so form a member of `u`.
pub fn swf_from_ultrafilter(u: &CoalitionFamily, m: usize, n: usize, domain: Domain) -> Result<ExplicitSwf> {
    if u.n() != n {
        return Err(Error::Dimension(format!("family is over {} voters, domain has {n}", u.n())));
    }
    if let Err(v) = is_filter(u) {
        return Err(Error::Precondition(format!("not a filter: {v}")));
    }
    if !is_ultrafilter_complement(u) {
        return Err(Error::Precondition("filter is not an ultrafilter".into()));
    }
    let pd = ProfileDomain::new(m, n, domain)?;
    let mut verdicts = Vec::with_capacity(pd.len());
    for i in 0..pd.len() {
        let mut rel = BinaryRelation::new(m);
        for x in 0..m {
            for y in 0..m {
                if x != y && u.contains(tripartition_at(&pd, i, x, y).first) {
                    rel.set(x, y, true);
                }
            }
        }
        let w = to_canonical(&rel).map_err(|e| {
            Error::Internal(format!("ultrafilter verdict on {} is not a weak order: {e}", pd.profile(i)))
        })?;
        verdicts.push(w);
    }
    ExplicitSwf::from_verdicts(pd, verdicts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ks2Report {
    pub dictator: Option<usize>,
    pub family: CoalitionFamily,
    pub classification: FilterClassification,
    /// No dictator exactly when the family is free, and any dictator is
    /// the family's generator.
    pub consistent: bool,
}

pub fn verify_ks2(s: &dyn WelfareFunction) -> Result<Ks2Report> {
    let family = extract_decisive_family(s)?.family;
    let classification = classify(&family);
    let dictator = find_dictator(s);
    let free = classification.fixedness == Fixedness::Free;
    let consistent = dictator.is_none() == free && classification.generator == dictator;
    Ok(Ks2Report {
        dictator,
        family,
        classification,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::enumerate_filters;
    use crate::swf::{borda, dictator, majority_rules};
    use crate::WeakOrder;

    fn linear(m: usize, n: usize) -> ProfileDomain {
        ProfileDomain::new(m, n, Domain::Linear).unwrap()
    }

    /// Direct reading of the definition, one coalition at a time.
    fn decisive_oracle(s: &dyn WelfareFunction, u: Coalition) -> bool {
        let d = s.domain();
        (0..d.len()).all(|i| {
            let f = d.profile(i);
            (0..d.m()).all(|x| {
                (0..d.m()).all(|y| {
                    x == y
                        || !u.voters().all(|v| f.voter(v).prefers(x, y))
                        || s.verdict(i).unwrap().prefers(x, y)
                })
            })
        })
    }

    #[test]
    fn dictators_extract_principal_families() {
        for (n, v) in [(2, 1), (3, 0), (1, 0)] {
            let s = dictator(linear(3, n), v).unwrap();
            let fam = extract_decisive_family(&s).unwrap().family;
            assert_eq!(fam, CoalitionFamily::principal(n, v).unwrap());
            for mask in 0..1u64 << n {
                assert_eq!(fam.contains(Coalition(mask)), decisive_oracle(&s, Coalition(mask)));
            }
        }
    }

    #[test]
    fn non_arrovian_input_is_rejected_but_raw_family_is_available() {
        let s = borda(linear(3, 2)).unwrap();
        assert!(matches!(extract_decisive_family(&s), Err(Error::NotArrovian { .. })));
        let raw = extract_decisive_family_raw(&s).unwrap().family;
        for mask in 0..4 {
            assert_eq!(raw.contains(Coalition(mask)), decisive_oracle(&s, Coalition(mask)));
        }
        let maj = majority_rules(linear(3, 3));
        assert!(extract_decisive_family(&maj).is_err());
        let raw = extract_decisive_family_raw(&maj).unwrap().family;
        // a full-domain majority with three voters is not transitive, yet pairs decide
        assert!(raw.contains(Coalition::full(3)));
        assert!(!raw.contains(Coalition::singleton(0)));
    }

    #[test]
    fn ultrafilter_rule_is_the_projection() {
        for domain in [Domain::Linear, Domain::Weak] {
            for v in 0..2 {
                let u = CoalitionFamily::principal(2, v).unwrap();
                let s = swf_from_ultrafilter(&u, 3, 2, domain).unwrap();
                for (i, f) in s.domain().iter().enumerate() {
                    assert_eq!(&s.verdicts()[i], f.voter(v));
                }
                assert!(full_report(&s).premises_hold());
            }
        }
    }

    #[test]
    fn round_trip_over_all_ultrafilters() {
        for n in 1..=3 {
            let ultras: Vec<_> = enumerate_filters(n)
                .unwrap()
                .into_iter()
                .filter(is_ultrafilter_complement)
                .collect();
            assert_eq!(ultras.len(), n);
            for u in ultras {
                let s = swf_from_ultrafilter(&u, 3, n, Domain::Linear).unwrap();
                assert_eq!(extract_decisive_family(&s).unwrap().family, u);
            }
        }
    }

    #[test]
    fn non_ultrafilters_are_refused() {
        let f = CoalitionFamily::from_members(2, [Coalition::full(2)]).unwrap();
        assert!(matches!(
            swf_from_ultrafilter(&f, 3, 2, Domain::Linear),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ks2_reports() {
        let r = verify_ks2(&dictator(linear(3, 2), 1).unwrap()).unwrap();
        assert_eq!(r.dictator, Some(1));
        assert_eq!(
            r.classification.fixedness,
            Fixedness::Fixed {
                intersection: Coalition::singleton(1)
            }
        );
        assert!(r.consistent);
        let r = verify_ks2(&dictator(linear(3, 3), 0).unwrap()).unwrap();
        assert_eq!(r.classification.generator, Some(0));
        assert!(r.consistent);
        let constant = crate::swf::constant(linear(3, 2), WeakOrder::indifferent(3)).unwrap();
        assert!(verify_ks2(&constant).is_err());
    }
}
