//! Whole-network evaluation: turns a matching plus per-SC-pair relay budgets
//! into [`ScAllocation`]s and sums their secrecy rates.

use crate::channel::ChannelState;
use crate::config::{PowerMode, SystemConfig};
use crate::matching::Matching;
use crate::rates::{
    allocation_rates, system_ee, EnergyEfficiency, Jamming, PairRates, ScAllocation,
};

/// Borrowed view of one trial's channel and constants.
#[derive(Debug, Clone, Copy)]
pub struct SystemView<'a> {
    pub ch: &'a ChannelState,
    pub cfg: &'a SystemConfig,
    pub jamming: Jamming,
}

impl<'a> SystemView<'a> {
    pub fn new(ch: &'a ChannelState, cfg: &'a SystemConfig) -> Self {
        Self {
            ch,
            cfg,
            jamming: Jamming::from_config(cfg),
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.cfg.sc_bandwidth()
    }

    /// Per-SC uplink powers of pair `m`: its budgets split evenly over its SC pairs.
    pub fn uplink(&self, matching: &Matching, m: usize) -> (f64, f64) {
        let v = matching.units_of(m).len().max(1) as f64;
        (self.cfg.user_power_a / v, self.cfg.user_power_b / v)
    }

    /// Relay power cap of a single SC pair under [`PowerMode::PerScCap`].
    pub fn unit_cap(&self) -> f64 {
        self.cfg.relay_power / self.cfg.units() as f64
    }

    /// Equal relay split used before power optimization: every occupied SC
    /// pair gets the same share, empty ones get nothing.
    pub fn equal_budgets(&self, matching: &Matching) -> Vec<f64> {
        let occupied = matching.occupied_units();
        let mut budgets = vec![0.0; matching.unit_count()];
        if occupied.is_empty() {
            return budgets;
        }
        let share = match self.cfg.power_mode {
            PowerMode::Global => self.cfg.relay_power / occupied.len() as f64,
            PowerMode::PerScCap => self.unit_cap(),
        };
        for u in occupied {
            budgets[u] = share;
        }
        budgets
    }

    pub fn allocation_for(
        &self,
        matching: &Matching,
        unit: usize,
        members: &[usize],
        relay_power: f64,
    ) -> ScAllocation {
        let (sc_ma, sc_bc) = matching.unit(unit);
        let (uplink_a, uplink_b) = members.iter().map(|&m| self.uplink(matching, m)).unzip();
        ScAllocation {
            sc_ma,
            sc_bc,
            members: members.to_vec(),
            relay_power,
            uplink_a,
            uplink_b,
        }
    }

    /// Rates of `members` sharing `unit`; uplink powers follow `matching`.
    pub fn rates_for(
        &self,
        matching: &Matching,
        unit: usize,
        members: &[usize],
        relay_power: f64,
    ) -> Vec<PairRates> {
        if members.is_empty() {
            return Vec::new();
        }
        let alloc = self.allocation_for(matching, unit, members, relay_power);
        allocation_rates(&alloc, self.ch, self.jamming, self.bandwidth())
    }

    pub fn unit_rates(
        &self,
        matching: &Matching,
        unit: usize,
        relay_power: f64,
    ) -> Vec<(usize, PairRates)> {
        let members: Vec<usize> = matching.pairs_on(unit).iter().copied().collect();
        let rates = self.rates_for(matching, unit, &members, relay_power);
        members.into_iter().zip(rates).collect()
    }

    /// Σ r_sec over the members of `unit`.
    pub fn unit_secrecy(&self, matching: &Matching, unit: usize, relay_power: f64) -> f64 {
        self.unit_rates(matching, unit, relay_power)
            .iter()
            .map(|(_, r)| r.r_sec)
            .sum()
    }

    /// Rates of every assignment as `(pair, unit, rates)`, ordered by unit then pair.
    pub fn all_rates(
        &self,
        matching: &Matching,
        budgets: &[f64],
    ) -> Vec<(usize, usize, PairRates)> {
        (0..matching.unit_count())
            .flat_map(|u| {
                self.unit_rates(matching, u, budgets[u])
                    .into_iter()
                    .map(move |(m, r)| (m, u, r))
            })
            .collect()
    }

    /// Total secrecy rate of each pair, summed over its SC pairs.
    pub fn pair_secrecy(&self, matching: &Matching, budgets: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; matching.pair_count()];
        for (m, _, r) in self.all_rates(matching, budgets) {
            out[m] += r.r_sec;
        }
        out
    }

    pub fn ee(&self, matching: &Matching, budgets: &[f64]) -> EnergyEfficiency {
        let rates: Vec<PairRates> = self
            .all_rates(matching, budgets)
            .into_iter()
            .map(|(_, _, r)| r)
            .collect();
        let transmit: f64 = budgets.iter().sum();
        system_ee(&rates, transmit, self.cfg)
    }

    /// EE under the equal relay split.
    pub fn equal_split_ee(&self, matching: &Matching) -> EnergyEfficiency {
        self.ee(matching, &self.equal_budgets(matching))
    }
}
