//! Complete search for every welfare function satisfying A1-A4.
//!
//! The search runs over the pairwise representation, so independence (A4)
//! holds for every candidate. A candidate assigns a stance to each *cell*:
//! an unordered pair `{x, y}` together with one reachable split of the
//! electorate on it. Unanimity (A3) fixes the cells where everyone agrees.
//! A2 becomes one ternary constraint per profile and triple of alternatives:
//! the three stances the profile selects must form a weak order. The search
//! maintains generalized arc consistency on these constraints and branches
//! on cells in `(pair, split)` order, trying `first`, `second`, then
//! `indifferent`.
//!
//! Every complete assignment is either reached as a leaf or removed by a
//! recorded pruning step, and the certificate accounts for both, so
//! `explored_leaves + pruned_leaves == 3^cells`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::profiles::{Domain, ProfileDomain, TriPartition};
use crate::relations::{validate_weak_order, AlternativeSet, BinaryRelation, PairStance};
use crate::swf::{full_report, pair_index, tp_code, tripartition_at, unordered_pairs, PairwiseRuleSwf, SwfFile};

pub const CERTIFICATE_SCHEMA: &str = "arrovian.certificate/1";

/// Default cap on search nodes before the search reports itself incomplete.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Bitset over [`PairStance::ALL`].
type Values = u8;
const ALL_VALUES: Values = 0b111;

fn bit(s: PairStance) -> Values {
    1 << s.index()
}

fn values_of(d: Values) -> impl Iterator<Item = PairStance> {
    PairStance::ALL.into_iter().filter(move |&s| d & bit(s) != 0)
}

/// One decision of the search: the verdict on `pair` under one split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCell {
    /// `(x, y)` with `x < y`.
    pub pair: (usize, usize),
    /// Position of the split in the domain's reachable order.
    pub tripartition_id: usize,
    pub tripartition: TriPartition,
}

/// Cells, unanimity requirements and composition constraints for one
/// `(m, n, domain)`.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    domain: ProfileDomain,
    cells: Vec<SearchCell>,
    /// Stance forced by A3, if any.
    forced: Vec<Option<PairStance>>,
    /// Cell triples `(xy, xz, yz)` for alternatives `x < y < z`.
    constraints: Vec<[usize; 3]>,
    /// Constraints mentioning each cell.
    watchers: Vec<Vec<usize>>,
    /// `allowed[a][b][c]`: stances on `(x,y)`, `(x,z)`, `(y,z)` compose.
    allowed: [[[bool; 3]; 3]; 3],
}

/// Stance triples on `(x,y)`, `(x,z)`, `(y,z)` that make a weak order on
/// `{x, y, z}`; obtained by validating each of the 27 candidate relations.
pub fn composable_triples() -> [[[bool; 3]; 3]; 3] {
    let mut allowed = [[[false; 3]; 3]; 3];
    for a in PairStance::ALL {
        for b in PairStance::ALL {
            for c in PairStance::ALL {
                let mut rel = BinaryRelation::new(3);
                for (s, (x, y)) in [(a, (0, 1)), (b, (0, 2)), (c, (1, 2))] {
                    match s {
                        PairStance::First => rel.set(x, y, true),
                        PairStance::Second => rel.set(y, x, true),
                        PairStance::Indifferent => {}
                    }
                }
                allowed[a.index()][b.index()][c.index()] = validate_weak_order(&rel).is_ok();
            }
        }
    }
    allowed
}

impl SearchProblem {
    pub fn new(m: usize, n: usize, domain: Domain) -> Result<Self> {
        let pd = ProfileDomain::new(m, n, domain)?;
        let tps = pd.tripartitions();
        let everyone = Coalition::full(n);
        let mut cells = Vec::new();
        let mut forced = Vec::new();
        for pair in unordered_pairs(m) {
            for (id, t) in tps.iter().enumerate() {
                cells.push(SearchCell {
                    pair,
                    tripartition_id: id,
                    tripartition: *t,
                });
                forced.push(if t.first == everyone {
                    Some(PairStance::First)
                } else if t.second == everyone {
                    Some(PairStance::Second)
                } else {
                    None
                });
            }
        }
        let cell_of = |x: usize, y: usize, t: &TriPartition| pair_index(m, x, y) * tps.len() + tp_code(t, n, domain);
        let mut seen = BTreeSet::new();
        for i in 0..pd.len() {
            for x in 0..m {
                for y in x + 1..m {
                    for z in y + 1..m {
                        let xy = cell_of(x, y, &tripartition_at(&pd, i, x, y));
                        let xz = cell_of(x, z, &tripartition_at(&pd, i, x, z));
                        let yz = cell_of(y, z, &tripartition_at(&pd, i, y, z));
                        seen.insert([xy, xz, yz]);
                    }
                }
            }
        }
        let constraints: Vec<[usize; 3]> = seen.into_iter().collect();
        let mut watchers = vec![Vec::new(); cells.len()];
        for (k, c) in constraints.iter().enumerate() {
            for &cell in c {
                if !watchers[cell].contains(&k) {
                    watchers[cell].push(k);
                }
            }
        }
        Ok(SearchProblem {
            domain: pd,
            cells,
            forced,
            constraints,
            watchers,
            allowed: composable_triples(),
        })
    }

    pub fn cells(&self) -> &[SearchCell] {
        &self.cells
    }

    pub fn constraints(&self) -> &[[usize; 3]] {
        &self.constraints
    }

    /// Stance A3 forces on a cell, if any.
    pub fn forced(&self, cell: usize) -> Option<PairStance> {
        self.forced[cell]
    }

    /// Index of the cell for `(x, y)`, `x < y`, under split `t`.
    pub fn cell_index(&self, x: usize, y: usize, t: &TriPartition) -> usize {
        let per_pair = match self.domain.domain() {
            Domain::Weak => 3usize.pow(self.domain.n() as u32),
            Domain::Linear => 1 << self.domain.n(),
        };
        pair_index(self.domain.m(), x, y) * per_pair + tp_code(t, self.domain.n(), self.domain.domain())
    }

    fn supported(&self, k: usize, domains: &[Values]) -> [Values; 3] {
        let [c0, c1, c2] = self.constraints[k];
        let mut support = [0; 3];
        for a in values_of(domains[c0]) {
            for b in values_of(domains[c1]) {
                for c in values_of(domains[c2]) {
                    if self.allowed[a.index()][b.index()][c.index()] {
                        support[0] |= bit(a);
                        support[1] |= bit(b);
                        support[2] |= bit(c);
                    }
                }
            }
        }
        support
    }

    /// Generalized arc consistency from the given dirty cells. Returns the
    /// violated constraint on wipe-out.
    fn enforce(&self, domains: &mut [Values], dirty: impl IntoIterator<Item = usize>) -> std::result::Result<(), usize> {
        let mut queue: Vec<usize> = Vec::new();
        let mut queued = vec![false; self.constraints.len()];
        for cell in dirty {
            for &k in &self.watchers[cell] {
                if !queued[k] {
                    queued[k] = true;
                    queue.push(k);
                }
            }
        }
        while let Some(k) = queue.pop() {
            queued[k] = false;
            let support = self.supported(k, domains);
            for (pos, &cell) in self.constraints[k].iter().enumerate() {
                let reduced = domains[cell] & support[pos];
                if reduced == 0 {
                    return Err(k);
                }
                if reduced != domains[cell] {
                    domains[cell] = reduced;
                    for &j in &self.watchers[cell] {
                        if !queued[j] {
                            queued[j] = true;
                            queue.push(j);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn to_swf(&self, domains: &[Values]) -> PairwiseRuleSwf {
        let per_pair = self.domain.tripartitions().len();
        PairwiseRuleSwf::from_fn(self.domain.clone(), |x, y, t| {
            let cell = pair_index(self.domain.m(), x, y) * per_pair + tp_code(t, self.domain.n(), self.domain.domain());
            values_of(domains[cell]).next().expect("assigned")
        })
    }
}

/// Why a partial assignment cannot be completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conflict {
    /// A unanimity cell was assigned a stance other than the forced one.
    Unanimity { cell: usize, required: PairStance },
    /// The cells of this composition constraint cannot form a weak order.
    Composition { cells: [usize; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Propagation {
    Conflict(Conflict),
    /// No conflict; lists every unassigned cell whose domain shrank, with
    /// the stances that remain.
    Consistent { reduced: Vec<(usize, Vec<PairStance>)> },
}

/// Checks a partial assignment against A3 and propagates the composition
/// constraints. Sound: a consistent completion is never excluded.
pub fn propagate(problem: &SearchProblem, assignment: &[Option<PairStance>]) -> Result<Propagation> {
    if assignment.len() != problem.cells.len() {
        return Err(Error::Dimension(format!(
            "assignment covers {} cells, problem has {}",
            assignment.len(),
            problem.cells.len()
        )));
    }
    for (cell, a) in assignment.iter().enumerate() {
        if let (Some(value), Some(required)) = (a, problem.forced[cell]) {
            if *value != required {
                return Ok(Propagation::Conflict(Conflict::Unanimity { cell, required }));
            }
        }
    }
    let mut domains: Vec<Values> = assignment.iter().map(|a| a.map_or(ALL_VALUES, bit)).collect();
    let dirty: Vec<usize> = (0..domains.len()).filter(|&c| assignment[c].is_some()).collect();
    let before = domains.clone();
    if let Err(k) = problem.enforce(&mut domains, dirty) {
        return Ok(Propagation::Conflict(Conflict::Composition {
            cells: problem.constraints[k],
        }));
    }
    let reduced = (0..domains.len())
        .filter(|&c| domains[c] != before[c])
        .map(|c| (c, values_of(domains[c]).collect()))
        .collect();
    Ok(Propagation::Consistent { reduced })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParameters {
    pub m: usize,
    pub n: usize,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub dictator: Option<usize>,
    pub rules: SwfFile,
}

/// Outcome of a complete search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub schema: String,
    pub parameters: SearchParameters,
    pub cells: usize,
    pub unanimity_cells: usize,
    pub constraints: usize,
    /// `3^cells`, the number of complete stance assignments.
    pub space: u64,
    pub nodes: u64,
    pub explored_leaves: u64,
    pub pruned_leaves: u64,
    pub survivors: Vec<Survivor>,
    pub all_dictatorial: bool,
    /// Survivors that also satisfy A5.
    pub non_dictatorial: usize,
    #[serde(skip)]
    swfs: Vec<PairwiseRuleSwf>,
}

impl SearchCertificate {
    /// Survivors as welfare functions (empty on a deserialized certificate).
    pub fn survivor_swfs(&self) -> &[PairwiseRuleSwf] {
        &self.swfs
    }

    pub fn accounts_for_space(&self) -> bool {
        self.explored_leaves.checked_add(self.pruned_leaves) == Some(self.space)
    }
}

/// Snapshot handed to a progress callback.
#[derive(Clone, Copy, Debug)]
pub struct SearchProgress {
    pub nodes: u64,
    pub survivors: usize,
}

pub type ProgressFn = Arc<dyn Fn(SearchProgress) + Send + Sync>;

#[derive(Clone)]
pub struct SearchOptions {
    pub node_budget: u64,
    /// Permits the long-running linear `n = 3` search.
    pub allow_long: bool,
    pub parallel: bool,
    /// Called every `progress_every` nodes.
    pub progress: Option<ProgressFn>,
    pub progress_every: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            allow_long: false,
            parallel: true,
            progress: None,
            progress_every: 1_000_000,
        }
    }
}

#[derive(Default)]
struct Tally {
    explored: u64,
    pruned: u64,
    survivors: Vec<Vec<Values>>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.explored += other.explored;
        self.pruned += other.pruned;
        self.survivors.extend(other.survivors);
        self
    }
}

fn live(domains: &[Values]) -> u64 {
    domains.iter().map(|d| d.count_ones() as u64).product()
}

struct Searcher<'a> {
    problem: &'a SearchProblem,
    options: &'a SearchOptions,
    nodes: &'a AtomicU64,
    found: &'a AtomicU64,
}

impl Searcher<'_> {
    fn tick(&self) -> Result<()> {
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if nodes > self.options.node_budget {
            return Err(Error::SearchIncomplete {
                nodes,
                budget: self.options.node_budget,
            });
        }
        if let Some(progress) = &self.options.progress {
            if self.options.progress_every > 0 && nodes % self.options.progress_every == 0 {
                progress(SearchProgress {
                    nodes,
                    survivors: self.found.load(Ordering::Relaxed) as usize,
                });
            }
        }
        Ok(())
    }

    /// Explores the subtree below `domains`, which are arc consistent.
    fn explore(&self, domains: Vec<Values>, tally: &mut Tally) -> Result<()> {
        self.tick()?;
        let Some(cell) = domains.iter().position(|d| d.count_ones() > 1) else {
            tally.explored += 1;
            self.found.fetch_add(1, Ordering::Relaxed);
            tally.survivors.push(domains);
            return Ok(());
        };
        for child in self.children(&domains, cell, tally) {
            self.explore(child, tally)?;
        }
        Ok(())
    }

    /// Consistent children of branching on `cell`, pruning recorded.
    fn children(&self, domains: &[Values], cell: usize, tally: &mut Tally) -> Vec<Vec<Values>> {
        let share = live(domains) / domains[cell].count_ones() as u64;
        let mut out = Vec::new();
        for value in values_of(domains[cell]) {
            let mut child = domains.to_vec();
            child[cell] = bit(value);
            match self.problem.enforce(&mut child, [cell]) {
                Ok(()) => {
                    tally.pruned += share - live(&child);
                    out.push(child);
                }
                Err(_) => tally.pruned += share,
            }
        }
        out
    }
}

/// Finds every welfare function on `m = 3` alternatives satisfying A1-A4
/// (within the independent, pairwise representation), with default options.
pub fn search_arrovian(m: usize, n: usize, domain: Domain) -> Result<SearchCertificate> {
    search_arrovian_with(m, n, domain, &SearchOptions::default())
}

pub fn search_arrovian_with(m: usize, n: usize, domain: Domain, options: &SearchOptions) -> Result<SearchCertificate> {
    if m != 3 {
        return Err(Error::AlternativeRange { m, min: 3, max: 3 });
    }
    let max_n = match domain {
        Domain::Linear => 3,
        Domain::Weak => 2,
    };
    if !(1..=max_n).contains(&n) {
        return Err(Error::VoterRange { n, min: 1, max: max_n });
    }
    if domain == Domain::Linear && n == 3 && !options.allow_long {
        return Err(Error::Precondition(
            "the linear n = 3 search is long-running; enable it explicitly".into(),
        ));
    }
    let problem = SearchProblem::new(m, n, domain)?;
    let cells = problem.cells.len();
    let space = 3u64
        .checked_pow(cells as u32)
        .ok_or_else(|| Error::Internal(format!("3^{cells} overflows")))?;

    let nodes = AtomicU64::new(0);
    let found = AtomicU64::new(0);
    let searcher = Searcher {
        problem: &problem,
        options,
        nodes: &nodes,
        found: &found,
    };

    let mut root = vec![ALL_VALUES; cells];
    let mut tally = Tally::default();
    for (cell, forced) in problem.forced.iter().enumerate() {
        if let Some(s) = forced {
            root[cell] = bit(*s);
        }
    }
    let forced_cells: Vec<usize> = (0..cells).filter(|&c| problem.forced[c].is_some()).collect();
    let after_forcing = live(&root);
    tally.pruned += space - after_forcing;
    match problem.enforce(&mut root, forced_cells) {
        Ok(()) => {
            tally.pruned += after_forcing - live(&root);
            searcher.tick()?;
            match root.iter().position(|d| d.count_ones() > 1) {
                None => {
                    tally.explored += 1;
                    tally.survivors.push(root);
                }
                Some(cell) => {
                    let children = searcher.children(&root, cell, &mut tally);
                    let sub: Vec<Result<Tally>> = if options.parallel {
                        children
                            .into_par_iter()
                            .map(|child| {
                                let mut t = Tally::default();
                                searcher.explore(child, &mut t).map(|()| t)
                            })
                            .collect()
                    } else {
                        children
                            .into_iter()
                            .map(|child| {
                                let mut t = Tally::default();
                                searcher.explore(child, &mut t).map(|()| t)
                            })
                            .collect()
                    };
                    for t in sub {
                        tally = tally.merge(t?);
                    }
                }
            }
        }
        Err(_) => tally.pruned += after_forcing,
    }

    let alts = AlternativeSet::new(m)?;
    let mut swfs = Vec::new();
    let mut survivors = Vec::new();
    for assignment in &tally.survivors {
        let swf = problem.to_swf(assignment);
        let report = full_report(&swf);
        if !report.premises_hold() {
            return Err(Error::Internal(format!(
                "search survivor fails {} under the independent checkers",
                report.failed()
            )));
        }
        survivors.push(Survivor {
            dictator: report.dictator(),
            rules: SwfFile::from_pairwise(&swf, &alts),
        });
        swfs.push(swf);
    }
    let certificate = SearchCertificate {
        schema: CERTIFICATE_SCHEMA.to_string(),
        parameters: SearchParameters { m, n, domain },
        cells,
        unanimity_cells: problem.forced.iter().filter(|f| f.is_some()).count(),
        constraints: problem.constraints.len(),
        space,
        nodes: nodes.load(Ordering::Relaxed),
        explored_leaves: tally.explored,
        pruned_leaves: tally.pruned,
        all_dictatorial: survivors.iter().all(|s| s.dictator.is_some()),
        non_dictatorial: survivors.iter().filter(|s| s.dictator.is_none()).count(),
        survivors,
        swfs,
    };
    if !certificate.accounts_for_space() {
        return Err(Error::Internal(format!(
            "explored {} + pruned {} != space {}",
            certificate.explored_leaves, certificate.pruned_leaves, certificate.space
        )));
    }
    Ok(certificate)
}
