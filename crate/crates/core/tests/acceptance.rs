//! Acceptance run: criteria 1-10, one line each.
//!
//! Each criterion produces a JSON record with no timing data in it, so
//! criterion 10 can rerun 1-9 and compare the records byte for byte. Time
//! limits are checked separately against the pinned constants below.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arrovian::arrow_search::search_arrovian;
use arrovian::fc_infinite::{
    dictator_stance, fc_member, frechet_stance, multi_pair_failures, non_dictatorship_witness, random_fc_profile,
    random_fc_set, seeded_rng, DictatorRule, FcProfile, FcSet, FcTriple, FrechetRule, PairVerdictRule,
    SAMPLE_BOUND,
};
use arrovian::filters::{
    classify, enumerate_filters, is_ultrafilter_complement, is_ultrafilter_maximal, CoalitionFamily, Fixedness,
};
use arrovian::ks_bridge::{extract_decisive_family, swf_from_ultrafilter};
use arrovian::profiles::{condorcet_profile, pairwise_majority};
use arrovian::relations::{enumerate_weak_orders, validate_weak_order, BinaryRelation};
use arrovian::swf::dictator;
use arrovian::{AlternativeSet, Domain, OrderViolation, PairStance, ProfileDomain, WelfareFunction};
use rand::Rng;
use serde_json::{json, Value};

const LEMMA_LIMIT: Duration = Duration::from_secs(5);
const FILTER_SCAN_LIMIT: Duration = Duration::from_secs(60);
const SEARCH_LIMIT: Duration = Duration::from_secs(60);

const PROFILE_SEED: u64 = 20_240_701;
const PROFILE_SAMPLES: usize = 1000;
const MEMBERSHIP_SEED: u64 = 4;
const MEMBERSHIP_SAMPLES: usize = 500;
const ALGEBRA_SEED: u64 = 9;
const ALGEBRA_SAMPLES: usize = 1000;

struct Outcome {
    passed: bool,
    summary: String,
    record: Value,
}

fn outcome(passed: bool, summary: impl Into<String>, record: Value) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
        record,
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

/// Asymmetric and negatively transitive, read straight off the table.
fn is_weak_order_oracle(r: &BinaryRelation) -> bool {
    let m = r.m();
    for x in 0..m {
        for y in 0..m {
            if r.get(x, y) && r.get(y, x) {
                return false;
            }
            for z in 0..m {
                if r.get(x, y) && !r.get(x, z) && !r.get(z, y) {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut violations = [0usize; 4];
    let mut orders = Vec::new();
    for m in 1..=4 {
        let list = enumerate_weak_orders(m).unwrap();
        orders.push(list.len());
        for w in &list {
            let p = |x, y| w.prefers(x, y);
            let ind = |x, y| !p(x, y) && !p(y, x);
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if p(x, z) && !(p(x, y) || p(y, z)) {
                            violations[0] += 1;
                        }
                        if p(x, y) && p(y, z) && !p(x, z) {
                            violations[1] += 1;
                        }
                        if ((!p(y, x) && p(y, z)) || (p(x, y) && !p(z, y))) && !p(x, z) {
                            violations[2] += 1;
                        }
                        let equivalence = ind(x, x) && (!ind(x, y) || ind(y, x)) && (!(ind(x, y) && ind(y, z)) || ind(x, z));
                        if !equivalence {
                            violations[3] += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = violations.iter().all(|&v| v == 0) && orders[3] == 75 && within(elapsed, LEMMA_LIMIT);
    outcome(
        passed,
        format!("{} orders checked at m=4, violations {:?}, {:.2?}", orders[3], violations, elapsed),
        json!({
            "orders_per_m": orders,
            "violations": {
                "transitive_incomparability": violations[0],
                "transitivity": violations[1],
                "mixed_transitivity": violations[2],
                "indifference_equivalence": violations[3],
            },
        }),
    )
}

fn criterion_2() -> Outcome {
    let expected = [1usize, 3, 13, 75];
    let mut counts = Vec::new();
    let mut oracle_counts = Vec::new();
    let mut sets_agree = true;
    for m in 1..=4 {
        let listed: BTreeSet<Vec<bool>> = enumerate_weak_orders(m)
            .unwrap()
            .iter()
            .map(|w| {
                let r = w.relation();
                (0..m * m).map(|i| r.get(i / m, i % m)).collect()
            })
            .collect();
        let oracle: BTreeSet<Vec<bool>> = (0..1u64 << (m * m))
            .map(|bits| BinaryRelation::from_bits(m, bits))
            .filter(is_weak_order_oracle)
            .map(|r| (0..m * m).map(|i| r.get(i / m, i % m)).collect())
            .collect();
        sets_agree &= listed == oracle;
        counts.push(listed.len());
        oracle_counts.push(oracle.len());
    }
    let passed = counts == expected && oracle_counts == expected && sets_agree;
    outcome(
        passed,
        format!("counts {counts:?}, oracle {oracle_counts:?}"),
        json!({ "counts": counts, "oracle_counts": oracle_counts, "sets_agree": sets_agree }),
    )
}

fn criterion_3() -> Outcome {
    let alts = AlternativeSet::new(3).unwrap();
    let f = condorcet_profile();
    let majority = pairwise_majority(&f);
    let edges: Vec<String> = majority
        .pairs()
        .into_iter()
        .map(|(x, y)| format!("{}>{}", alts.label(x), alts.label(y)))
        .collect();
    let cyclic = majority.get(0, 1) && majority.get(1, 2) && majority.get(2, 0);
    let violation = validate_weak_order(&majority).err();
    let involved: BTreeSet<usize> = violation.as_ref().map(|v| v.alternatives().into_iter().collect()).unwrap_or_default();
    let passed = cyclic
        && matches!(violation, Some(OrderViolation::NegativeTransitivity { .. }))
        && involved == BTreeSet::from([0, 1, 2]);
    outcome(
        passed,
        format!(
            "profiles {}, majority {{{}}}, {}",
            f,
            edges.join(", "),
            violation.as_ref().map_or("no violation".into(), |v| v.describe(&alts))
        ),
        json!({ "profile": f, "majority": edges, "cyclic": cyclic, "violation": violation }),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut discrepancies = 0usize;
    let mut n4_time = Duration::ZERO;
    for n in 1..=4 {
        let t = Instant::now();
        let filters = enumerate_filters(n).unwrap();
        let mut not_fixed = 0;
        let mut test_mismatch = 0;
        let mut ultras = BTreeSet::new();
        for f in &filters {
            if !matches!(classify(f).fixedness, Fixedness::Fixed { .. }) {
                not_fixed += 1;
            }
            let maximal = is_ultrafilter_maximal(f).unwrap();
            if maximal != is_ultrafilter_complement(f) {
                test_mismatch += 1;
            }
            if maximal {
                ultras.insert(serde_json::to_string(f).unwrap());
            }
        }
        let principal: BTreeSet<String> = (0..n)
            .map(|v| serde_json::to_string(&CoalitionFamily::principal(n, v).unwrap()).unwrap())
            .collect();
        let ultra_mismatch = ultras.symmetric_difference(&principal).count();
        let count_ok = filters.len() == (1 << n) - 1;
        discrepancies += not_fixed + test_mismatch + ultra_mismatch + usize::from(!count_ok);
        if n == 4 {
            n4_time = t.elapsed();
        }
        rows.push(json!({
            "n": n,
            "filters": filters.len(),
            "not_fixed": not_fixed,
            "maximal_vs_complement_mismatches": test_mismatch,
            "ultrafilters": ultras.len(),
            "non_principal_or_missing": ultra_mismatch,
        }));
    }
    let passed = discrepancies == 0 && within(n4_time, FILTER_SCAN_LIMIT);
    outcome(
        passed,
        format!(
            "{} discrepancies over n=1..4, n=4 scan {:.2?} (total {:.2?})",
            discrepancies,
            n4_time,
            start.elapsed()
        ),
        json!({ "per_n": rows, "discrepancies": discrepancies }),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cert = search_arrovian(3, 2, Domain::Linear).unwrap();
    let elapsed = start.elapsed();
    let dictators: Vec<Option<usize>> = cert.survivors.iter().map(|s| s.dictator).collect();
    let passed = cert.survivors.len() == 2
        && dictators.iter().all(Option::is_some)
        && cert.non_dictatorial == 0
        && cert.accounts_for_space()
        && within(elapsed, SEARCH_LIMIT);
    outcome(
        passed,
        format!(
            "{} survivors, dictators {:?}, {} nodes, explored {} + pruned {} = {}, {:.2?}",
            cert.survivors.len(),
            dictators,
            cert.nodes,
            cert.explored_leaves,
            cert.pruned_leaves,
            cert.space,
            elapsed
        ),
        serde_json::to_value(&cert).unwrap(),
    )
}

fn criterion_6() -> Outcome {
    let mut cases = Vec::new();
    let mut failures = 0usize;
    let mut check = |label: String, s: &dyn WelfareFunction, expected: Option<usize>| {
        let family = extract_decisive_family(s).unwrap().family;
        let c = classify(&family);
        let ok = c.is_ultrafilter && c.generator.is_some() && c.generator == arrovian::swf::find_dictator(s) && (expected.is_none() || c.generator == expected);
        failures += usize::from(!ok);
        cases.push(json!({ "case": label, "generator": c.generator, "ok": ok }));
        family
    };
    let mut survivor_families = Vec::new();
    for n in [1, 2] {
        let cert = search_arrovian(3, n, Domain::Linear).unwrap();
        for (i, s) in cert.survivor_swfs().iter().enumerate() {
            survivor_families.push(check(format!("search n={n} survivor {i}"), s, None));
        }
    }
    for n in 1..=3 {
        for v in 0..n {
            let s = dictator(ProfileDomain::new(3, n, Domain::Linear).unwrap(), v).unwrap();
            check(format!("dictator({v}) n={n}"), &s, Some(v));
        }
    }
    let distinct: BTreeSet<String> = survivor_families[1..]
        .iter()
        .map(|f| serde_json::to_string(f).unwrap())
        .collect();
    let injective = distinct.len() == survivor_families.len() - 1;
    let mut round_trips = Vec::new();
    for n in 1..=3 {
        for u in enumerate_filters(n).unwrap().into_iter().filter(is_ultrafilter_complement) {
            let s = swf_from_ultrafilter(&u, 3, n, Domain::Linear).unwrap();
            let back = extract_decisive_family(&s).unwrap().family;
            let ok = back == u;
            failures += usize::from(!ok);
            round_trips.push(json!({ "n": n, "generator": classify(&u).generator, "ok": ok }));
        }
    }
    failures += usize::from(!injective);
    outcome(
        failures == 0,
        format!(
            "{} extractions, {} round trips, n=2 survivors injective: {}, failures {}",
            cases.len(),
            round_trips.len(),
            injective,
            failures
        ),
        json!({ "extractions": cases, "round_trips": round_trips, "injective": injective }),
    )
}

/// `g` differs from `f` everywhere except in each voter's stance on `(x, y)`.
fn scramble_off_pair(rng: &mut impl Rng, f: &FcProfile, x: usize, y: usize, orders: &[arrovian::WeakOrder]) -> FcProfile {
    let mut pick = |w: &arrovian::WeakOrder| {
        let same: Vec<_> = orders.iter().filter(|o| o.stance(x, y) == w.stance(x, y)).collect();
        same[rng.random_range(0..same.len())].clone()
    };
    let exceptions = f.exceptions.iter().map(|(&v, w)| (v, pick(w))).collect();
    let tail = pick(&f.tail);
    FcProfile::new(exceptions, tail).unwrap()
}

fn criterion_7() -> Outcome {
    let unanimity = frechet_stance(&FcTriple::new(FcSet::naturals(), FcSet::empty(), FcSet::empty()).unwrap())
        == PairStance::First
        && frechet_stance(&FcTriple::new(FcSet::empty(), FcSet::naturals(), FcSet::empty()).unwrap())
            == PairStance::Second;

    let orders = enumerate_weak_orders(3).unwrap();
    let mut rng = seeded_rng(PROFILE_SEED);
    let mut independence_failures = 0usize;
    let mut unanimity_failures = 0usize;
    for _ in 0..PROFILE_SAMPLES {
        let f = random_fc_profile(&mut rng, &orders);
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let g = scramble_off_pair(&mut rng, &f, x, y, &orders);
            let vf = arrovian::fc_infinite::assemble_fc_verdict(&FrechetRule, &f);
            let vg = arrovian::fc_infinite::assemble_fc_verdict(&FrechetRule, &g);
            if let (Ok(vf), Ok(vg)) = (vf, vg) {
                if vf.stance(x, y) != vg.stance(x, y) {
                    independence_failures += 1;
                }
            }
            let t = f.split(x, y);
            if t.first().is_cofinite() && t.first().exceptions().is_empty() && frechet_stance(&t) != PairStance::First {
                unanimity_failures += 1;
            }
        }
    }
    let composition_failures = multi_pair_failures(&FrechetRule, 3, PROFILE_SEED, PROFILE_SAMPLES).unwrap().len();
    let defeated = (0..100u64)
        .filter(|&v0| {
            let w = non_dictatorship_witness(v0);
            dictator_stance(v0, &w) == PairStance::First && frechet_stance(&w) == PairStance::Second
        })
        .count();
    let passed = unanimity
        && unanimity_failures == 0
        && independence_failures == 0
        && composition_failures == 0
        && defeated == 100;
    outcome(
        passed,
        format!(
            "seed {PROFILE_SEED}: {PROFILE_SAMPLES} profiles, composition failures {composition_failures}, independence failures {independence_failures}, dictators defeated {defeated}/100"
        ),
        json!({
            "seed": PROFILE_SEED,
            "profiles": PROFILE_SAMPLES,
            "unanimity": unanimity && unanimity_failures == 0,
            "independence_failures": independence_failures,
            "composition_failures": composition_failures,
            "dictators_defeated": defeated,
        }),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = seeded_rng(MEMBERSHIP_SEED);
    let mut disagreements = Vec::new();
    for i in 0..MEMBERSHIP_SAMPLES {
        let a = random_fc_set(&mut rng);
        let v0 = rng.random_range(0..SAMPLE_BOUND);
        if DictatorRule(v0).decides(&a) != fc_member(&a, v0) {
            disagreements.push(json!({ "sample": i, "set": a, "voter": v0 }));
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "seed {MEMBERSHIP_SEED}: {} disagreements over {MEMBERSHIP_SAMPLES} sets",
            disagreements.len()
        ),
        json!({ "seed": MEMBERSHIP_SEED, "samples": MEMBERSHIP_SAMPLES, "disagreements": disagreements }),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = seeded_rng(ALGEBRA_SEED);
    let mut mismatches = 0usize;
    for _ in 0..ALGEBRA_SAMPLES {
        let a = random_fc_set(&mut rng);
        let b = random_fc_set(&mut rng);
        let (u, i, c) = (a.union(&b), a.intersect(&b), a.complement());
        for v in 0..SAMPLE_BOUND {
            let (x, y) = (a.member(v), b.member(v));
            mismatches += usize::from(u.member(v) != (x || y));
            mismatches += usize::from(i.member(v) != (x && y));
            mismatches += usize::from(c.member(v) == x);
        }
    }
    outcome(
        mismatches == 0,
        format!("seed {ALGEBRA_SEED}: {mismatches} pointwise mismatches over {ALGEBRA_SAMPLES} cases"),
        json!({ "seed": ALGEBRA_SEED, "cases": ALGEBRA_SAMPLES, "range": SAMPLE_BOUND, "mismatches": mismatches }),
    )
}

type Criterion = fn() -> Outcome;

const CRITERIA: [Criterion; 9] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
];

fn main() -> ExitCode {
    let mut all = true;
    let mut first_run = Vec::new();
    for (i, criterion) in CRITERIA.iter().enumerate() {
        let o = criterion();
        all &= o.passed;
        println!("criterion {}: {}  {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.summary);
        first_run.push(serde_json::to_string(&o.record).unwrap());
    }
    let second_run: Vec<String> = CRITERIA
        .iter()
        .map(|c| serde_json::to_string(&c().record).unwrap())
        .collect();
    let differing: Vec<usize> = (0..CRITERIA.len()).filter(|&i| first_run[i] != second_run[i]).map(|i| i + 1).collect();
    let deterministic = differing.is_empty();
    all &= deterministic;
    let bytes: usize = first_run.iter().map(String::len).sum();
    println!(
        "criterion 10: {}  rerun of 1-9 {} ({} bytes of JSON){}",
        if deterministic { "PASS" } else { "FAIL" },
        if deterministic { "byte-identical" } else { "differs" },
        bytes,
        if deterministic { String::new() } else { format!(", differing criteria {differing:?}") }
    );
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance.json");
    let records: Vec<Value> = first_run.iter().map(|s| serde_json::from_str(s).unwrap()).collect();
    if std::fs::write(&path, serde_json::to_string_pretty(&records).unwrap()).is_ok() {
        println!("records written to {}", path.display());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
