//! Many-to-many matching between user pairs and SC pairs.
//!
//! A [`Matching`] holds both sides of the assignment Φ and enforces the
//! capacities H (pairs per SC pair) and V (SC pairs per user pair). Two
//! schemes build one:
//!
//! * [`scas1`]: SC pairs greedily admit their highest-CRNN pairs, then pairwise
//!   swaps run while they raise total secrecy EE without hurting either
//!   swapping pair.
//! * [`scas2`]: starting from any feasible matching, swaps run whenever they
//!   raise total secrecy EE.
//!
//! [`random_assignment`] is the RA-NOMA baseline and [`exhaustive_best`] the
//! brute-force oracle for tiny instances.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::ChannelState;
use crate::config::{ScPairing, SystemConfig};
use crate::error::{Error, Result};
use crate::system::SystemView;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `(sc_ma, sc_bc)` of every SC pair.
    units: Vec<(usize, usize)>,
    pair_to_units: Vec<BTreeSet<usize>>,
    unit_to_pairs: Vec<BTreeSet<usize>>,
    max_pairs_per_unit: usize,
    max_units_per_pair: usize,
}

/// SC pairs for a config: `(i, i)` or every `(i, j)`.
pub fn sc_units(cfg: &SystemConfig) -> Vec<(usize, usize)> {
    let n = cfg.subcarriers;
    match cfg.sc_pairing {
        ScPairing::Diagonal => (0..n).map(|i| (i, i)).collect(),
        ScPairing::Full => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
    }
}

impl Matching {
    pub fn empty(
        pairs: usize,
        units: Vec<(usize, usize)>,
        max_pairs_per_unit: usize,
        max_units_per_pair: usize,
    ) -> Self {
        let n_units = units.len();
        Self {
            units,
            pair_to_units: vec![BTreeSet::new(); pairs],
            unit_to_pairs: vec![BTreeSet::new(); n_units],
            max_pairs_per_unit,
            max_units_per_pair,
        }
    }

    pub fn for_config(cfg: &SystemConfig) -> Self {
        Self::empty(
            cfg.pairs,
            sc_units(cfg),
            cfg.max_pairs_per_sc,
            cfg.max_scs_per_pair,
        )
    }

    pub fn pair_count(&self) -> usize {
        self.pair_to_units.len()
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn unit(&self, u: usize) -> (usize, usize) {
        self.units[u]
    }

    /// Φ(m)
    pub fn units_of(&self, m: usize) -> &BTreeSet<usize> {
        &self.pair_to_units[m]
    }

    /// Φ(SC)
    pub fn pairs_on(&self, u: usize) -> &BTreeSet<usize> {
        &self.unit_to_pairs[u]
    }

    pub fn contains(&self, m: usize, u: usize) -> bool {
        self.pair_to_units[m].contains(&u)
    }

    /// c_{m,i,j}
    pub fn indicator(&self, m: usize, sc_ma: usize, sc_bc: usize) -> u8 {
        self.pair_to_units[m]
            .iter()
            .any(|&u| self.units[u] == (sc_ma, sc_bc)) as u8
    }

    pub fn edge_count(&self) -> usize {
        self.pair_to_units.iter().map(BTreeSet::len).sum()
    }

    /// `(pair, unit)` assignments in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pair_to_units
            .iter()
            .enumerate()
            .flat_map(|(m, us)| us.iter().map(move |&u| (m, u)))
            .collect()
    }

    pub fn occupied_units(&self) -> Vec<usize> {
        (0..self.unit_count())
            .filter(|&u| !self.unit_to_pairs[u].is_empty())
            .collect()
    }

    pub fn can_assign(&self, m: usize, u: usize) -> bool {
        !self.contains(m, u)
            && self.pair_to_units[m].len() < self.max_units_per_pair
            && self.unit_to_pairs[u].len() < self.max_pairs_per_unit
    }

    pub fn assign(&mut self, m: usize, u: usize) -> Result<()> {
        if m >= self.pair_count() || u >= self.unit_count() {
            return Err(Error::InvalidMatching(format!(
                "no pair {m} or SC pair {u}"
            )));
        }
        if !self.can_assign(m, u) {
            return Err(Error::InvalidMatching(format!(
                "cannot assign pair {m} to SC pair {u}"
            )));
        }
        self.pair_to_units[m].insert(u);
        self.unit_to_pairs[u].insert(m);
        Ok(())
    }

    pub fn remove(&mut self, m: usize, u: usize) -> bool {
        let had = self.pair_to_units[m].remove(&u);
        self.unit_to_pairs[u].remove(&m);
        had
    }

    /// Verify capacities and that both directions of Φ agree.
    pub fn check(&self) -> Result<()> {
        for (m, us) in self.pair_to_units.iter().enumerate() {
            if us.len() > self.max_units_per_pair {
                return Err(Error::InvalidMatching(format!(
                    "pair {m} holds {} SC pairs, cap is {}",
                    us.len(),
                    self.max_units_per_pair
                )));
            }
            for &u in us {
                if u >= self.unit_count() || !self.unit_to_pairs[u].contains(&m) {
                    return Err(Error::InvalidMatching(format!(
                        "SC pair {u} in Φ({m}) but {m} not in Φ({u})"
                    )));
                }
            }
        }
        for (u, ms) in self.unit_to_pairs.iter().enumerate() {
            if ms.len() > self.max_pairs_per_unit {
                return Err(Error::InvalidMatching(format!(
                    "SC pair {u} holds {} pairs, cap is {}",
                    ms.len(),
                    self.max_pairs_per_unit
                )));
            }
            for &m in ms {
                if m >= self.pair_count() || !self.pair_to_units[m].contains(&u) {
                    return Err(Error::InvalidMatching(format!(
                        "pair {m} in Φ({u}) but {u} not in Φ({m})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Execute Φ → Φ_{n,j}^{m,i}.
    pub fn apply_swap(&mut self, p: &SwapProposal) -> Result<()> {
        p.check(self)?;
        self.pair_to_units[p.m].remove(&p.unit_i);
        self.pair_to_units[p.m].insert(p.unit_j);
        self.pair_to_units[p.n].remove(&p.unit_j);
        self.pair_to_units[p.n].insert(p.unit_i);
        self.unit_to_pairs[p.unit_i].remove(&p.m);
        self.unit_to_pairs[p.unit_i].insert(p.n);
        self.unit_to_pairs[p.unit_j].remove(&p.n);
        self.unit_to_pairs[p.unit_j].insert(p.m);
        Ok(())
    }

    /// One line per SC pair: `index: m1,m2,...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, ms) in self.unit_to_pairs.iter().enumerate() {
            let list: Vec<String> = ms.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{u}: {}", list.join(","));
        }
        out
    }

    /// Parse [`Matching::to_text`] output for a config's dimensions.
    pub fn from_text(text: &str, cfg: &SystemConfig) -> Result<Self> {
        let mut matching = Self::for_config(cfg);
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no + 1,
                message,
            };
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| parse_err(format!("expected `index: pairs`, got `{line}`")))?;
            let u: usize = head
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad SC pair index `{head}`")))?;
            for item in tail.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let m: usize = item
                    .parse()
                    .map_err(|_| parse_err(format!("bad pair index `{item}`")))?;
                matching.assign(m, u)?;
            }
        }
        Ok(matching)
    }
}

/// A candidate exchange: `m` gives SC pair `unit_i` to `n` and takes `unit_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapProposal {
    pub m: usize,
    pub n: usize,
    pub unit_i: usize,
    pub unit_j: usize,
}

impl SwapProposal {
    pub fn check(&self, matching: &Matching) -> Result<()> {
        let ok = self.m != self.n
            && self.unit_i != self.unit_j
            && self.m < matching.pair_count()
            && self.n < matching.pair_count()
            && matching.contains(self.m, self.unit_i)
            && matching.contains(self.n, self.unit_j)
            && !matching.contains(self.n, self.unit_i)
            && !matching.contains(self.m, self.unit_j);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMatching(format!(
                "not a valid swap: {self:?}"
            )))
        }
    }
}

/// Fractional transmit power split of `p_budget` among `members` on BC
/// subcarrier `sc`: weights G^(-λ) of each pair's CRNN.
pub fn ftpa_power(
    members: &[usize],
    ch: &ChannelState,
    sc: usize,
    p_budget: f64,
    lambda: f64,
) -> Result<Vec<f64>> {
    if members.is_empty() {
        return Err(Error::InvalidMatching(
            "FTPA needs at least one member".into(),
        ));
    }
    let mut weights = Vec::with_capacity(members.len());
    for &m in members {
        let g = ch.crnn_pair(m, sc);
        if lambda > 0.0 && g <= 0.0 {
            return Err(Error::SingularWeight { pair: m, lambda });
        }
        weights.push(if lambda == 0.0 { 1.0 } else { g.powf(-lambda) });
    }
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| p_budget * w / total).collect())
}

/// Outcome of a swap-matching run.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub matching: Matching,
    /// Matching the swap phase started from.
    pub initial: Matching,
    /// Accepted swaps in order; replaying them on `initial` gives `matching`.
    pub history: Vec<SwapProposal>,
    /// Accepted swaps (match operations).
    pub swaps: usize,
    /// Scans of the proposal list; each accepted swap starts a new one.
    pub sweeps: usize,
    /// False when the run stopped at L_m sweeps.
    pub converged: bool,
    /// Proposals evaluated in each sweep.
    pub evaluated_per_sweep: Vec<usize>,
    /// Total secrecy EE at the start and after each accepted swap.
    pub ee_trajectory: Vec<f64>,
}

/// Which improving proposal of a scan is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Selection {
    First,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Acceptance {
    /// Total EE rises and neither swapping pair loses.
    PairwiseImproving,
    /// Total EE rises.
    GlobalImproving,
}

/// Upper bound on proposals per sweep, ½·M·H·V·(N−V).
pub fn proposal_bound(cfg: &SystemConfig) -> usize {
    let n = cfg.units();
    let v = cfg.max_scs_per_pair.min(n);
    cfg.pairs * cfg.max_pairs_per_sc * v * (n - v) / 2
}

fn check_capacity(cfg: &SystemConfig) -> Result<()> {
    if cfg.pairs * cfg.max_scs_per_pair.min(cfg.units()) == 0 || cfg.max_pairs_per_sc == 0 {
        return Err(Error::InfeasibleCapacity(format!(
            "M = {}, V = {}, H = {}, SC pairs = {}",
            cfg.pairs,
            cfg.max_scs_per_pair,
            cfg.max_pairs_per_sc,
            cfg.units()
        )));
    }
    Ok(())
}

/// SCAS-1's first phase: SC pairs in descending order of their best CRNN each
/// admit their highest-CRNN available pairs until full.
pub fn greedy_crnn(ch: &ChannelState, cfg: &SystemConfig) -> Result<Matching> {
    check_capacity(cfg)?;
    let mut matching = Matching::for_config(cfg);
    let crnn = |m: usize, u: usize| ch.crnn_pair(m, matching_bc(cfg, u));
    let mut order: Vec<(usize, f64)> = (0..matching.unit_count())
        .map(|u| {
            let best = (0..cfg.pairs)
                .map(|m| crnn(m, u))
                .fold(f64::NEG_INFINITY, f64::max);
            (u, best)
        })
        .collect();
    // descending best CRNN, lowest index first on ties
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    // one admission per SC pair per round, until a full round admits nobody
    loop {
        let mut admitted = false;
        for &(u, _) in &order {
            if matching.pairs_on(u).len() >= cfg.max_pairs_per_sc {
                continue;
            }
            let pick = (0..cfg.pairs).filter(|&m| matching.can_assign(m, u)).fold(
                None::<(usize, f64)>,
                |best, m| {
                    let g = crnn(m, u);
                    match best {
                        Some((_, bg)) if bg >= g => best,
                        _ => Some((m, g)),
                    }
                },
            );
            if let Some((m, _)) = pick {
                matching.assign(m, u)?;
                admitted = true;
            }
        }
        if !admitted {
            break;
        }
    }
    Ok(matching)
}

fn matching_bc(cfg: &SystemConfig, u: usize) -> usize {
    match cfg.sc_pairing {
        ScPairing::Diagonal => u,
        ScPairing::Full => u % cfg.subcarriers,
    }
}

/// SCAS-1: CRNN-greedy admission followed by pairwise swap refinement.
pub fn scas1(ch: &ChannelState, cfg: &SystemConfig) -> Result<MatchReport> {
    let init = greedy_crnn(ch, cfg)?;
    Ok(swap_search(
        SystemView::new(ch, cfg),
        init,
        Acceptance::PairwiseImproving,
        Selection::Best,
    ))
}

/// SCAS-2: global-EE swap search from `init`.
pub fn scas2(ch: &ChannelState, cfg: &SystemConfig, init: Matching) -> Result<MatchReport> {
    check_capacity(cfg)?;
    init.check()?;
    if init.pair_count() != cfg.pairs
        || init.unit_count() != cfg.units()
        || init.max_pairs_per_unit != cfg.max_pairs_per_sc
        || init.max_units_per_pair != cfg.max_scs_per_pair
    {
        return Err(Error::InvalidMatching(
            "initial matching does not fit the configuration".into(),
        ));
    }
    Ok(swap_search(
        SystemView::new(ch, cfg),
        init,
        Acceptance::GlobalImproving,
        Selection::First,
    ))
}

/// Shared swap engine. Proposals are scanned in lexicographic
/// `(m, n, unit_i, unit_j)` order with `m < n`; the scan restarts after each
/// accepted swap.
fn swap_search(
    view: SystemView<'_>,
    mut matching: Matching,
    rule: Acceptance,
    selection: Selection,
) -> MatchReport {
    let cfg = view.cfg;
    // Swaps keep every SC pair's occupancy, so the equal split is fixed.
    let budgets = view.equal_budgets(&matching);
    let p_total = cfg.circuit_power + budgets.iter().sum::<f64>();

    // cached per-unit rates as (pair, r_sec)
    let mut unit_cache: Vec<Vec<(usize, f64)>> = (0..matching.unit_count())
        .map(|u| {
            view.unit_rates(&matching, u, budgets[u])
                .into_iter()
                .map(|(m, r)| (m, r.r_sec))
                .collect()
        })
        .collect();
    let unit_sum = |c: &[(usize, f64)]| c.iter().map(|(_, r)| r).sum::<f64>();
    let mut total: f64 = unit_cache.iter().map(|c| unit_sum(c)).sum();

    let mut report = MatchReport {
        matching: matching.clone(),
        initial: matching.clone(),
        history: Vec::new(),
        swaps: 0,
        sweeps: 0,
        converged: false,
        evaluated_per_sweep: Vec::new(),
        ee_trajectory: vec![total / p_total],
    };

    let pairs = matching.pair_count();
    while report.sweeps < cfg.max_iterations {
        report.sweeps += 1;
        let mut evaluated = 0;
        let mut chosen: Option<Candidate> = None;
        'scan: for m in 0..pairs {
            for n in (m + 1)..pairs {
                let units_m: Vec<usize> = matching.units_of(m).iter().copied().collect();
                let units_n: Vec<usize> = matching.units_of(n).iter().copied().collect();
                for &ui in &units_m {
                    if matching.contains(n, ui) {
                        continue;
                    }
                    for &uj in &units_n {
                        if matching.contains(m, uj) {
                            continue;
                        }
                        evaluated += 1;
                        let rates_on = |u: usize, members: &[usize]| -> Vec<(usize, f64)> {
                            members
                                .iter()
                                .copied()
                                .zip(view.rates_for(&matching, u, members, budgets[u]))
                                .map(|(k, r)| (k, r.r_sec))
                                .collect()
                        };
                        let new_i = rates_on(ui, &swapped(matching.pairs_on(ui), m, n));
                        let new_j = rates_on(uj, &swapped(matching.pairs_on(uj), n, m));
                        let new_total =
                            total - unit_sum(&unit_cache[ui]) - unit_sum(&unit_cache[uj])
                                + unit_sum(&new_i)
                                + unit_sum(&new_j);
                        if !(new_total > total) {
                            continue;
                        }
                        if rule == Acceptance::PairwiseImproving {
                            let before = |k: usize| {
                                pair_share(&unit_cache[ui], k) + pair_share(&unit_cache[uj], k)
                            };
                            let after = |k: usize| pair_share(&new_i, k) + pair_share(&new_j, k);
                            let no_loser = after(m) >= before(m)
                                && after(n) >= before(n)
                                && unit_sum(&new_i) >= unit_sum(&unit_cache[ui])
                                && unit_sum(&new_j) >= unit_sum(&unit_cache[uj]);
                            if !no_loser {
                                continue;
                            }
                        }
                        let better = chosen.as_ref().is_none_or(|c| new_total > c.total);
                        if better {
                            chosen = Some(Candidate {
                                proposal: SwapProposal {
                                    m,
                                    n,
                                    unit_i: ui,
                                    unit_j: uj,
                                },
                                new_i,
                                new_j,
                                total: new_total,
                            });
                        }
                        if selection == Selection::First {
                            break 'scan;
                        }
                    }
                }
            }
        }
        report.evaluated_per_sweep.push(evaluated);
        let Some(c) = chosen else {
            report.converged = true;
            break;
        };
        matching
            .apply_swap(&c.proposal)
            .expect("scanned proposals are valid");
        debug_assert!(matching.check().is_ok());
        unit_cache[c.proposal.unit_i] = c.new_i;
        unit_cache[c.proposal.unit_j] = c.new_j;
        // recompute from the cache to avoid drift
        total = unit_cache.iter().map(|c| unit_sum(c)).sum();
        report.swaps += 1;
        report.history.push(c.proposal);
        report.ee_trajectory.push(total / p_total);
    }
    report.matching = matching;
    report
}

struct Candidate {
    proposal: SwapProposal,
    new_i: Vec<(usize, f64)>,
    new_j: Vec<(usize, f64)>,
    total: f64,
}

fn swapped(members: &BTreeSet<usize>, out: usize, inn: usize) -> Vec<usize> {
    let mut v: Vec<usize> = members.iter().copied().filter(|&k| k != out).collect();
    v.push(inn);
    v.sort_unstable();
    v
}

fn pair_share(cache: &[(usize, f64)], k: usize) -> f64 {
    cache
        .iter()
        .find(|(m, _)| *m == k)
        .map(|(_, r)| *r)
        .unwrap_or(0.0)
}

/// RA-NOMA: visit every `(pair, SC pair)` edge in random order and keep it
/// when both capacities allow. The result is a maximal feasible matching.
pub fn random_assignment<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Matching {
    let mut matching = Matching::for_config(cfg);
    let mut edges: Vec<(usize, usize)> = (0..cfg.pairs)
        .flat_map(|m| (0..matching.unit_count()).map(move |u| (m, u)))
        .collect();
    edges.shuffle(rng);
    for (m, u) in edges {
        if matching.can_assign(m, u) {
            matching.assign(m, u).expect("capacity checked");
        }
    }
    matching
}

/// Largest number of feasible matchings [`exhaustive_best`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Count feasible matchings (the empty one included), stopping early once
/// `limit` is exceeded.
pub fn count_feasible(cfg: &SystemConfig, limit: u64) -> u64 {
    let mut scratch = Matching::for_config(cfg);
    let edges: Vec<(usize, usize)> = (0..cfg.pairs)
        .flat_map(|m| (0..scratch.unit_count()).map(move |u| (m, u)))
        .collect();
    let mut count = 0u64;
    enumerate(&mut scratch, &edges, 0, &mut |_| {
        count += 1;
        count <= limit
    });
    count
}

/// Visit feasible matchings, excluding an edge before including it, so the
/// visit order is lexicographic in the edge-indicator string. The visitor
/// returns false to stop.
fn enumerate(
    matching: &mut Matching,
    edges: &[(usize, usize)],
    idx: usize,
    visit: &mut dyn FnMut(&Matching) -> bool,
) -> bool {
    if idx == edges.len() {
        return visit(matching);
    }
    if !enumerate(matching, edges, idx + 1, visit) {
        return false;
    }
    let (m, u) = edges[idx];
    if matching.can_assign(m, u) {
        matching.assign(m, u).expect("capacity checked");
        let go_on = enumerate(matching, edges, idx + 1, visit);
        matching.remove(m, u);
        return go_on;
    }
    true
}

/// Best non-empty feasible matching under the equal relay split, by brute force.
///
/// Ties go to the lexicographically smallest edge-indicator string.
pub fn exhaustive_best(ch: &ChannelState, cfg: &SystemConfig) -> Result<(Matching, f64)> {
    check_capacity(cfg)?;
    let count = count_feasible(cfg, EXHAUSTIVE_LIMIT);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!(
            "more than {EXHAUSTIVE_LIMIT} feasible matchings"
        )));
    }
    let view = SystemView::new(ch, cfg);
    let mut scratch = Matching::for_config(cfg);
    let edges: Vec<(usize, usize)> = (0..cfg.pairs)
        .flat_map(|m| (0..scratch.unit_count()).map(move |u| (m, u)))
        .collect();
    let mut best: Option<(Matching, f64)> = None;
    enumerate(&mut scratch, &edges, 0, &mut |mat| {
        if mat.edge_count() > 0 {
            let ee = view.equal_split_ee(mat).ee;
            if best.as_ref().is_none_or(|(_, b)| ee > *b) {
                best = Some((mat.clone(), ee));
            }
        }
        true
    });
    best.ok_or_else(|| Error::InfeasibleCapacity("no non-empty matching exists".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{generate_topology, rng_from_seed, sample_channels};
    use num_complex::Complex64;

    fn small(m: usize, n: usize, h: usize, v: usize) -> SystemConfig {
        SystemConfig {
            pairs: m,
            subcarriers: n,
            max_pairs_per_sc: h,
            max_scs_per_pair: v,
            ..SystemConfig::default()
        }
    }

    fn instance(cfg: &SystemConfig, seed: u64) -> ChannelState {
        let mut rng = rng_from_seed(seed);
        let topo = generate_topology(cfg, &mut rng);
        sample_channels(&topo, cfg, &mut rng)
    }

    #[test]
    fn ftpa_equal_split_at_zero_decay() {
        let ch = instance(&small(3, 1, 3, 1), 1);
        let p = ftpa_power(&[0, 1, 2], &ch, 0, 3.0, 0.0).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn ftpa_single_member_takes_budget() {
        let ch = instance(&small(2, 1, 2, 1), 2);
        assert_eq!(ftpa_power(&[1], &ch, 0, 2.5, 0.7).unwrap(), vec![2.5]);
    }

    #[test]
    fn ftpa_weights_by_substitution() {
        // CRNNs {1, 2} with λ = 1 → weights {2/3, 1/3}
        let mut ch = ChannelState::uniform(2, 1, Complex64::new(1.0, 0.0), 1.0);
        let two = Complex64::new(2f64.sqrt(), 0.0);
        ch.g_a[1][0] = two;
        ch.g_b[1][0] = two;
        let p = ftpa_power(&[0, 1], &ch, 0, 3.0, 1.0).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ftpa_rejects_zero_crnn() {
        let mut ch = ChannelState::uniform(2, 1, Complex64::new(1.0, 0.0), 1.0);
        ch.g_a[0][0] = Complex64::new(0.0, 0.0);
        assert!(matches!(
            ftpa_power(&[0, 1], &ch, 0, 1.0, 0.5),
            Err(Error::SingularWeight { pair: 0, .. })
        ));
        assert!(ftpa_power(&[0, 1], &ch, 0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn assign_enforces_caps() {
        let cfg = small(3, 2, 1, 1);
        let mut mt = Matching::for_config(&cfg);
        mt.assign(0, 0).unwrap();
        assert!(mt.assign(1, 0).is_err(), "H = 1");
        assert!(mt.assign(0, 1).is_err(), "V = 1");
        assert!(mt.assign(0, 0).is_err(), "duplicate");
        mt.check().unwrap();
        assert_eq!(mt.indicator(0, 0, 0), 1);
        assert_eq!(mt.indicator(1, 0, 0), 0);
    }

    #[test]
    fn swap_preserves_invariants() {
        let cfg = small(2, 2, 1, 1);
        let mut mt = Matching::for_config(&cfg);
        mt.assign(0, 0).unwrap();
        mt.assign(1, 1).unwrap();
        let p = SwapProposal {
            m: 0,
            n: 1,
            unit_i: 0,
            unit_j: 1,
        };
        mt.apply_swap(&p).unwrap();
        mt.check().unwrap();
        assert!(mt.contains(0, 1) && mt.contains(1, 0));
        assert!(mt.apply_swap(&p).is_err());
    }

    #[test]
    fn text_form() {
        let cfg = small(3, 3, 2, 2);
        let mut mt = Matching::for_config(&cfg);
        mt.assign(0, 0).unwrap();
        mt.assign(2, 0).unwrap();
        mt.assign(1, 2).unwrap();
        assert_eq!(mt.to_text(), "0: 0,2\n1: \n2: 1\n");
        assert_eq!(Matching::from_text(&mt.to_text(), &cfg).unwrap(), mt);
        assert!(Matching::from_text("0: 0,1,2\n", &cfg).is_err());
        assert!(Matching::from_text("zero: 1\n", &cfg).is_err());
    }

    #[test]
    fn forced_single_matching() {
        let cfg = small(1, 1, 1, 1);
        let ch = instance(&cfg, 5);
        let report = scas1(&ch, &cfg).unwrap();
        assert_eq!(report.matching.edges(), vec![(0, 0)]);
        let (best, _) = exhaustive_best(&ch, &cfg).unwrap();
        assert_eq!(best.edges(), vec![(0, 0)]);
    }

    #[test]
    fn greedy_prefers_dominant_crnn() {
        // pair 0 dominates SC 0, pair 1 is the only good pair on SC 1
        let cfg = small(2, 2, 1, 1);
        let mut ch = ChannelState::uniform(2, 2, Complex64::new(1e-3, 0.0), 1e-9);
        ch.g_a[0][0] = Complex64::new(1e-1, 0.0);
        ch.g_b[0][0] = Complex64::new(1e-1, 0.0);
        ch.g_a[1][1] = Complex64::new(1e-2, 0.0);
        ch.g_b[1][1] = Complex64::new(1e-2, 0.0);
        let mt = greedy_crnn(&ch, &cfg).unwrap();
        assert!(mt.contains(0, 0) && mt.contains(1, 1));
    }

    #[test]
    fn random_assignment_is_maximal_and_reproducible() {
        let cfg = SystemConfig::default();
        let a = random_assignment(&cfg, &mut rng_from_seed(9));
        let b = random_assignment(&cfg, &mut rng_from_seed(9));
        assert_eq!(a, b);
        a.check().unwrap();
        let cap = (cfg.max_pairs_per_sc * cfg.units()).min(cfg.max_scs_per_pair * cfg.pairs);
        assert_eq!(a.edge_count(), cap);
        for m in 0..cfg.pairs {
            for u in 0..cfg.units() {
                assert!(!a.can_assign(m, u));
            }
        }
    }

    #[test]
    fn h_equal_m_allows_full_sharing() {
        let cfg = small(3, 2, 3, 2);
        let mt = random_assignment(&cfg, &mut rng_from_seed(4));
        mt.check().unwrap();
        assert_eq!(mt.edge_count(), 6);
    }

    #[test]
    fn feasible_counts() {
        // Σ_k C(2,k)² k! = 1 + 4 + 2
        assert_eq!(count_feasible(&small(2, 2, 1, 1), 100), 7);
        // Σ_k C(3,k)² k! = 1 + 9 + 18 + 6
        assert_eq!(count_feasible(&small(3, 3, 1, 1), 100), 34);
        assert_eq!(count_feasible(&small(3, 3, 1, 1), 10), 11);
    }

    #[test]
    fn exhaustive_refuses_large() {
        let cfg = SystemConfig::default();
        let ch = instance(&cfg, 1);
        assert!(matches!(
            exhaustive_best(&ch, &cfg),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn scas2_rejects_mismatched_init() {
        let cfg = small(2, 2, 1, 1);
        let ch = instance(&cfg, 3);
        let other = Matching::for_config(&small(3, 2, 1, 1));
        assert!(scas2(&ch, &cfg, other).is_err());
    }

    #[test]
    fn scas2_keeps_optimal_init() {
        let cfg = small(2, 2, 1, 1);
        let ch = instance(&cfg, 21);
        let first = scas2(&ch, &cfg, random_assignment(&cfg, &mut rng_from_seed(1))).unwrap();
        let again = scas2(&ch, &cfg, first.matching.clone()).unwrap();
        assert_eq!(again.swaps, 0);
        assert_eq!(again.matching, first.matching);
    }

    #[test]
    fn proposal_bound_value() {
        // ½·10·3·4·6
        assert_eq!(proposal_bound(&SystemConfig::default()), 360);
    }
}
