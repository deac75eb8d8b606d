//! Network geometry and block-fading channel realizations.
//!
//! Every link gain is `sqrt(10^(-L/10)) * CN(0, 1)` where `L` is the Hata urban
//! median path loss for the link distance. One realization holds for a whole
//! transmission cycle.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// The random stream used everywhere a reproducible draw is needed.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.distance(Point::ORIGIN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub rs_position: Point,
    /// `(A_m, B_m)` per user pair.
    pub user_positions: Vec<(Point, Point)>,
    pub eve_position: Point,
}

impl Topology {
    /// Check the geometric invariants against `cfg`.
    pub fn check(&self, cfg: &SystemConfig) -> Result<()> {
        let slack = 1e-9;
        for (m, (a, b)) in self.user_positions.iter().enumerate() {
            for p in [a, b] {
                if p.distance(self.rs_position) > cfg.cell_radius + slack {
                    return Err(Error::InvalidConfig(format!(
                        "user of pair {m} lies outside the cell"
                    )));
                }
            }
        }
        let eve = self.eve_position.distance(self.rs_position);
        if (eve - cfg.eve_distance).abs() > slack {
            return Err(Error::InvalidConfig(format!(
                "eavesdropper at {eve} m, expected {} m",
                cfg.eve_distance
            )));
        }
        Ok(())
    }
}

/// Complex gains for every link on every SC.
///
/// Indexing is `[pair][sc]` for user links and `[sc]` for the relay to
/// eavesdropper link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    /// A_m → RS (MA phase)
    pub h_ar: Vec<Vec<Complex64>>,
    /// B_m → RS (MA phase)
    pub h_br: Vec<Vec<Complex64>>,
    /// A_m → eavesdropper (MA phase)
    pub h_ae: Vec<Vec<Complex64>>,
    /// B_m → eavesdropper (MA phase)
    pub h_be: Vec<Vec<Complex64>>,
    /// RS → A_m (BC phase)
    pub g_a: Vec<Vec<Complex64>>,
    /// RS → B_m (BC phase)
    pub g_b: Vec<Vec<Complex64>>,
    /// RS → eavesdropper (BC phase)
    pub g_e: Vec<Complex64>,
    /// Noise power per SC, W.
    pub sigma2: f64,
}

impl ChannelState {
    pub fn pairs(&self) -> usize {
        self.h_ar.len()
    }

    pub fn subcarriers(&self) -> usize {
        self.g_e.len()
    }

    /// CRNN of user A_m on BC subcarrier `sc`, |g|²/σ².
    pub fn crnn_a(&self, pair: usize, sc: usize) -> f64 {
        self.g_a[pair][sc].norm_sqr() / self.sigma2
    }

    pub fn crnn_b(&self, pair: usize, sc: usize) -> f64 {
        self.g_b[pair][sc].norm_sqr() / self.sigma2
    }

    /// Pair-level CRNN: the weaker of the two users' CRNNs.
    pub fn crnn_pair(&self, pair: usize, sc: usize) -> f64 {
        self.crnn_a(pair, sc).min(self.crnn_b(pair, sc))
    }

    /// Build a state with every gain set to `gain` (test and example fixture).
    pub fn uniform(pairs: usize, subcarriers: usize, gain: Complex64, sigma2: f64) -> Self {
        let grid = vec![vec![gain; subcarriers]; pairs];
        Self {
            h_ar: grid.clone(),
            h_br: grid.clone(),
            h_ae: grid.clone(),
            h_be: grid.clone(),
            g_a: grid.clone(),
            g_b: grid,
            g_e: vec![gain; subcarriers],
            sigma2,
        }
    }
}

/// Hata urban median path loss in dB with the small/medium-city mobile
/// antenna correction.
pub fn path_loss_db(distance: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    let log_f = cfg.carrier_freq.log10();
    let log_hb = cfg.h_base.log10();
    let a_hm = (1.1 * log_f - 0.7) * cfg.h_mobile - (1.56 * log_f - 0.8);
    let d_km = distance / 1000.0;
    Ok(69.55 + 26.16 * log_f - 13.82 * log_hb - a_hm + (44.9 - 6.55 * log_hb) * d_km.log10())
}

/// Linear power attenuation for a link of length `distance`, with the
/// configured minimum distance applied.
pub fn attenuation(distance: f64, cfg: &SystemConfig) -> f64 {
    let d = distance.max(cfg.min_distance);
    // d >= min_distance > 0 for a validated config
    let loss = path_loss_db(d, cfg).expect("clamped distance is positive");
    10f64.powf(-loss / 10.0)
}

/// One circularly-symmetric CN(0, 1) sample.
pub fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Rayleigh-faded gain with mean power `attenuation`.
pub fn rayleigh_gain<R: Rng + ?Sized>(attenuation: f64, rng: &mut R) -> Complex64 {
    cn01(rng) * attenuation.sqrt()
}

fn uniform_in_disk<R: Rng + ?Sized>(center: Point, radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    let p = Point::polar(r, theta);
    Point {
        x: center.x + p.x,
        y: center.y + p.y,
    }
}

/// Place M user pairs in the cell and the eavesdropper on its ring.
///
/// `A_m` is uniform in the cell; `B_m` is uniform within `pairing_radius` of
/// `A_m`, redrawn until it also lies in the cell.
pub fn generate_topology<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Topology {
    let rs = Point::ORIGIN;
    let mut users = Vec::with_capacity(cfg.pairs);
    for _ in 0..cfg.pairs {
        let a = uniform_in_disk(rs, cfg.cell_radius, rng);
        let b = loop {
            let b = uniform_in_disk(a, cfg.pairing_radius, rng);
            if b.norm() <= cfg.cell_radius {
                break b;
            }
        };
        users.push((a, b));
    }
    let bearing = 2.0 * PI * rng.random::<f64>();
    let eve = Point::polar(cfg.eve_distance, bearing);
    let topo = Topology {
        rs_position: rs,
        user_positions: users,
        eve_position: eve,
    };
    debug_assert!(topo.check(cfg).is_ok());
    topo
}

/// Draw one block-fading realization for every link and SC.
pub fn sample_channels<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &SystemConfig,
    rng: &mut R,
) -> ChannelState {
    let n = cfg.subcarriers;
    let rs = topo.rs_position;
    let eve = topo.eve_position;
    let draw_link = |dist: f64, rng: &mut R| -> Vec<Complex64> {
        let att = attenuation(dist, cfg);
        (0..n).map(|_| rayleigh_gain(att, rng)).collect()
    };

    let m = topo.user_positions.len();
    let (mut h_ar, mut h_br, mut h_ae, mut h_be, mut g_a, mut g_b) = (
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
    );
    for &(a, b) in &topo.user_positions {
        h_ar.push(draw_link(a.distance(rs), rng));
        h_br.push(draw_link(b.distance(rs), rng));
        h_ae.push(draw_link(a.distance(eve), rng));
        h_be.push(draw_link(b.distance(eve), rng));
        g_a.push(draw_link(a.distance(rs), rng));
        g_b.push(draw_link(b.distance(rs), rng));
    }
    let g_e = draw_link(rs.distance(eve), rng);
    ChannelState {
        h_ar,
        h_br,
        h_ae,
        h_be,
        g_a,
        g_b,
        g_e,
        sigma2: cfg.sigma2(),
    }
}
