//! Random instances shared by the integration tests.
#![allow(dead_code)]

use noma_lab::channel::{rng_from_seed, ChannelState};
use noma_lab::config::dbm_to_w;
use noma_lab::harness::{trial_channels, trial_random_matching};
use noma_lab::matching::Matching;
use noma_lab::SystemConfig;
use rand::Rng;

/// A small network with randomized sizes, geometry and powers.
pub fn random_config(seed: u64) -> SystemConfig {
    let mut rng = rng_from_seed(seed);
    SystemConfig {
        pairs: rng.random_range(1..=5),
        subcarriers: rng.random_range(1..=5),
        max_pairs_per_sc: rng.random_range(1..=3),
        max_scs_per_pair: rng.random_range(1..=3),
        cell_radius: rng.random_range(10.0..60.0),
        eve_distance: rng.random_range(40.0..800.0),
        noise_psd: dbm_to_w(rng.random_range(-170.0..-130.0)),
        relay_power: dbm_to_w(rng.random_range(30.0..50.0)),
        user_power_a: rng.random_range(0.05..0.5),
        user_power_b: rng.random_range(0.05..0.5),
        alpha1: rng.random_range(0.0..1.0),
        alpha2: rng.random_range(0.0..1.0),
        rng_seed: rng.random(),
        ..SystemConfig::default()
    }
}

pub struct Instance {
    pub cfg: SystemConfig,
    pub ch: ChannelState,
    pub matching: Matching,
    /// Relay budget per SC pair, summing to P_s over the occupied ones.
    pub budgets: Vec<f64>,
}

pub fn random_instance(seed: u64) -> Instance {
    let cfg = random_config(seed);
    let ch = trial_channels(&cfg, cfg.rng_seed);
    let matching = trial_random_matching(&cfg, cfg.rng_seed);
    let mut rng = rng_from_seed(seed ^ 0x5EED);
    let mut budgets: Vec<f64> = (0..matching.unit_count())
        .map(|u| {
            if matching.pairs_on(u).is_empty() {
                0.0
            } else {
                rng.random_range(0.05..1.0)
            }
        })
        .collect();
    let sum: f64 = budgets.iter().sum();
    if sum > 0.0 {
        budgets.iter_mut().for_each(|b| *b *= cfg.relay_power / sum);
    }
    Instance {
        cfg,
        ch,
        matching,
        budgets,
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
