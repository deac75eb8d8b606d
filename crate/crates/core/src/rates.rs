//! Analytical rates for two-way AF relaying with NOMA cochannel interference.
//!
//! Signals are represented by their statistics only. For a user pair `m` on SC
//! pair `(i, j)` this module evaluates the amplification normalizer, the SINRs
//! at `A_m` and `B_m` with the other members' forwarded signals treated as
//! interference, the eavesdropper's equivalent 2×2 MIMO rate and the
//! worst-case secrecy sum rate, with and without cooperative jamming.
//!
//! All rates are in bit/s and carry the 1/2 pre-log of the two-phase cycle.

use num_complex::Complex64;

use crate::channel::ChannelState;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// One SC pair `(i, j)` and the user pairs sharing it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScAllocation {
    /// MA-phase subcarrier `i`.
    pub sc_ma: usize,
    /// BC-phase subcarrier `j`.
    pub sc_bc: usize,
    /// The set K, ordered, without duplicates.
    pub members: Vec<usize>,
    /// P_{R,j}, W.
    pub relay_power: f64,
    /// P_{A_m,i} for each member, aligned with `members`.
    pub uplink_a: Vec<f64>,
    /// P_{B_m,i} for each member, aligned with `members`.
    pub uplink_b: Vec<f64>,
}

impl ScAllocation {
    pub fn new(
        sc_ma: usize,
        sc_bc: usize,
        members: Vec<usize>,
        relay_power: f64,
        uplink_a: Vec<f64>,
        uplink_b: Vec<f64>,
    ) -> Result<Self> {
        let alloc = Self {
            sc_ma,
            sc_bc,
            members,
            relay_power,
            uplink_a,
            uplink_b,
        };
        alloc.check()?;
        Ok(alloc)
    }

    /// Every member transmits `(pa, pb)` on this SC.
    pub fn with_uniform_uplink(
        sc: usize,
        members: Vec<usize>,
        relay_power: f64,
        pa: f64,
        pb: f64,
    ) -> Self {
        let k = members.len();
        Self {
            sc_ma: sc,
            sc_bc: sc,
            members,
            relay_power,
            uplink_a: vec![pa; k],
            uplink_b: vec![pb; k],
        }
    }

    pub fn check(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::InvalidMatching(msg.to_string()));
        if self.members.is_empty() {
            return invalid("an SC allocation needs at least one member");
        }
        if self.uplink_a.len() != self.members.len() || self.uplink_b.len() != self.members.len() {
            return invalid("uplink power vectors must align with members");
        }
        let mut sorted = self.members.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.members.len() {
            return invalid("duplicate member");
        }
        if !(self.relay_power >= 0.0) {
            return invalid("relay power must be >= 0");
        }
        if self
            .uplink_a
            .iter()
            .chain(&self.uplink_b)
            .any(|p| !(*p >= 0.0))
        {
            return invalid("uplink powers must be >= 0");
        }
        Ok(())
    }

    fn position(&self, pair: usize, unit: usize) -> Result<usize> {
        self.members
            .iter()
            .position(|&k| k == pair)
            .ok_or(Error::NotAMember { pair, unit })
    }

    /// Received uplink powers `(P_A|h_AR|², P_B|h_BR|²)` of member `k` at the RS.
    fn at_relay(&self, ch: &ChannelState, k: usize) -> (f64, f64) {
        let m = self.members[k];
        (
            self.uplink_a[k] * ch.h_ar[m][self.sc_ma].norm_sqr(),
            self.uplink_b[k] * ch.h_br[m][self.sc_ma].norm_sqr(),
        )
    }

    /// Received uplink powers of member `k` at the eavesdropper.
    fn at_eve(&self, ch: &ChannelState, k: usize) -> (f64, f64) {
        let m = self.members[k];
        (
            self.uplink_a[k] * ch.h_ae[m][self.sc_ma].norm_sqr(),
            self.uplink_b[k] * ch.h_be[m][self.sc_ma].norm_sqr(),
        )
    }
}

/// Cooperative-jamming setting for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Jamming {
    Off,
    On {
        /// Fraction of `A_m`'s power spent on artificial noise.
        alpha1: f64,
        /// Fraction of `B_m`'s power spent on artificial noise.
        alpha2: f64,
        /// Add the RS-side forwarded-message term to the eavesdropper's MA
        /// noise covariance.
        strict_leakage: bool,
    },
}

impl Jamming {
    pub fn from_config(cfg: &SystemConfig) -> Self {
        if cfg.cj_enabled {
            Jamming::On {
                alpha1: cfg.alpha1,
                alpha2: cfg.alpha2,
                strict_leakage: cfg.eve_cov_strict_paper,
            }
        } else {
            Jamming::Off
        }
    }
}

/// Worst-case secrecy accounting for one pair on one SC pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairRates {
    pub r_a: f64,
    pub r_b: f64,
    pub r_e: f64,
    pub r_sec: f64,
}

impl PairRates {
    pub fn from_parts(r_a: f64, r_b: f64, r_e: f64) -> Self {
        Self {
            r_a,
            r_b,
            r_e,
            r_sec: (r_a + r_b - r_e).max(0.0),
        }
    }
}

/// Equivalent two-phase channel seen by the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveChannel2x2 {
    /// Rows: MA phase, BC phase. Columns: `A_m`, `B_m`.
    pub h: [[Complex64; 2]; 2],
    /// `(ET, ER)`, the diagonal of Q_E.
    pub q_diag: [f64; 2],
}

/// αᵢ = sqrt(Σ_K (P_A|h_AR|² + P_B|h_BR|²) + σ²).
pub fn alpha_normalizer(alloc: &ScAllocation, ch: &ChannelState) -> f64 {
    let total: f64 = (0..alloc.members.len())
        .map(|k| {
            let (sa, sb) = alloc.at_relay(ch, k);
            sa + sb
        })
        .sum();
    (total + ch.sigma2).sqrt()
}

/// γᵢ: the normalizer of the forwarded signal once the RS has removed the
/// artificial noise.
pub fn gamma_normalizer(alloc: &ScAllocation, ch: &ChannelState, alpha1: f64, alpha2: f64) -> f64 {
    let total: f64 = (0..alloc.members.len())
        .map(|k| {
            let (sa, sb) = alloc.at_relay(ch, k);
            (1.0 - alpha1) * sa + (1.0 - alpha2) * sb
        })
        .sum();
    (total + ch.sigma2).sqrt()
}

/// Amplifying coefficient β = sqrt(P_R)/α (γ under jamming).
pub fn amplification(alloc: &ScAllocation, ch: &ChannelState, jamming: Jamming) -> f64 {
    let norm = match jamming {
        Jamming::Off => alpha_normalizer(alloc, ch),
        Jamming::On { alpha1, alpha2, .. } => gamma_normalizer(alloc, ch, alpha1, alpha2),
    };
    alloc.relay_power.sqrt() / norm
}

/// Cochannel interference `(I_Am, I_Bm)` without jamming, as the full sum over
/// K minus the pair's own term.
pub fn interference_terms(alloc: &ScAllocation, ch: &ChannelState, m: usize) -> Result<(f64, f64)> {
    let own = alloc.position(m, alloc.sc_bc)?;
    let a2 = alpha_normalizer(alloc, ch).powi(2);
    interference_with(alloc, ch, own, a2, 1.0, 1.0)
}

/// `(I'_Am, I'_Bm)` under jamming: only message power is forwarded.
pub fn interference_terms_cj(
    alloc: &ScAllocation,
    ch: &ChannelState,
    m: usize,
    alpha1: f64,
    alpha2: f64,
) -> Result<(f64, f64)> {
    let own = alloc.position(m, alloc.sc_bc)?;
    let g2 = gamma_normalizer(alloc, ch, alpha1, alpha2).powi(2);
    interference_with(alloc, ch, own, g2, 1.0 - alpha1, 1.0 - alpha2)
}

fn interference_with(
    alloc: &ScAllocation,
    ch: &ChannelState,
    own: usize,
    norm2: f64,
    keep_a: f64,
    keep_b: f64,
) -> Result<(f64, f64)> {
    let m = alloc.members[own];
    let j = alloc.sc_bc;
    let pr = alloc.relay_power;
    let ga2 = ch.g_a[m][j].norm_sqr();
    let gb2 = ch.g_b[m][j].norm_sqr();
    let forwarded = |k: usize| {
        let (sa, sb) = alloc.at_relay(ch, k);
        keep_a * sa + keep_b * sb
    };
    let full: f64 = (0..alloc.members.len()).map(forwarded).sum();
    let mine = forwarded(own);
    let i_a = pr * ga2 * full / norm2 - pr * ga2 * mine / norm2;
    let i_b = pr * gb2 * full / norm2 - pr * gb2 * mine / norm2;
    Ok((i_a.max(0.0), i_b.max(0.0)))
}

/// `(SNR_Am, SNR_Bm)` without jamming.
pub fn sinr_pair_nocj(alloc: &ScAllocation, ch: &ChannelState, m: usize) -> Result<(f64, f64)> {
    let own = alloc.position(m, alloc.sc_bc)?;
    let a2 = alpha_normalizer(alloc, ch).powi(2);
    let (i_a, i_b) = interference_with(alloc, ch, own, a2, 1.0, 1.0)?;
    let (sa, sb) = alloc.at_relay(ch, own);
    let j = alloc.sc_bc;
    let pr = alloc.relay_power;
    let ga2 = ch.g_a[m][j].norm_sqr();
    let gb2 = ch.g_b[m][j].norm_sqr();
    let s2 = ch.sigma2;
    let snr_a = pr * ga2 * sb / a2 / (i_a + (pr * ga2 / a2 + 1.0) * s2);
    let snr_b = pr * gb2 * sa / a2 / (i_b + (pr * gb2 / a2 + 1.0) * s2);
    Ok((snr_a, snr_b))
}

/// `(SNR'_Am, SNR'_Bm)` under jamming with splits `alpha1`, `alpha2`.
pub fn sinr_pair_cj(
    alloc: &ScAllocation,
    ch: &ChannelState,
    m: usize,
    alpha1: f64,
    alpha2: f64,
) -> Result<(f64, f64)> {
    let own = alloc.position(m, alloc.sc_bc)?;
    let g2 = gamma_normalizer(alloc, ch, alpha1, alpha2).powi(2);
    let (i_a, i_b) = interference_with(alloc, ch, own, g2, 1.0 - alpha1, 1.0 - alpha2)?;
    let (sa, sb) = alloc.at_relay(ch, own);
    let j = alloc.sc_bc;
    let pr = alloc.relay_power;
    let ga2 = ch.g_a[m][j].norm_sqr();
    let gb2 = ch.g_b[m][j].norm_sqr();
    let s2 = ch.sigma2;
    let snr_a = (1.0 - alpha2) * pr * ga2 * sb / g2 / (i_a + (pr * ga2 / g2 + 1.0) * s2);
    let snr_b = (1.0 - alpha1) * pr * gb2 * sa / g2 / (i_b + (pr * gb2 / g2 + 1.0) * s2);
    Ok((snr_a, snr_b))
}

/// Build the eavesdropper's equivalent channel and noise covariance for pair `m`.
pub fn eve_channel(
    alloc: &ScAllocation,
    ch: &ChannelState,
    m: usize,
    jamming: Jamming,
) -> Result<EveChannel2x2> {
    let own = alloc.position(m, alloc.sc_bc)?;
    let (i, j) = (alloc.sc_ma, alloc.sc_bc);
    let pr = alloc.relay_power;
    let pa = alloc.uplink_a[own];
    let pb = alloc.uplink_b[own];
    let ge = ch.g_e[j];
    let ge2 = ge.norm_sqr();
    let s2 = ch.sigma2;
    let k_all = 0..alloc.members.len();

    match jamming {
        Jamming::Off => {
            let a = alpha_normalizer(alloc, ch);
            let a2 = a * a;
            let h = [
                [ch.h_ae[m][i] * pa.sqrt(), ch.h_be[m][i] * pb.sqrt()],
                [
                    ge * ch.h_ar[m][i] * (pr.sqrt() * pa.sqrt() / a),
                    ge * ch.h_br[m][i] * (pr.sqrt() * pb.sqrt() / a),
                ],
            ];
            let eve_sum: f64 = k_all
                .clone()
                .map(|k| {
                    let (ea, eb) = alloc.at_eve(ch, k);
                    ea + eb
                })
                .sum();
            let (ea, eb) = alloc.at_eve(ch, own);
            let et = eve_sum - (ea + eb) + s2;

            let fwd_sum: f64 = k_all
                .map(|k| {
                    let (sa, sb) = alloc.at_relay(ch, k);
                    pr * ge2 * sa / a2 + pr * ge2 * sb / a2
                })
                .sum();
            let (sa, sb) = alloc.at_relay(ch, own);
            let er =
                fwd_sum - (pr * ge2 * sa / a2 + pr * ge2 * sb / a2) + (pr * ge2 / a2) * s2 + s2;
            Ok(EveChannel2x2 {
                h,
                q_diag: [et.max(s2), er.max(s2)],
            })
        }
        Jamming::On {
            alpha1,
            alpha2,
            strict_leakage,
        } => {
            let (ka, kb) = (1.0 - alpha1, 1.0 - alpha2);
            let g = gamma_normalizer(alloc, ch, alpha1, alpha2);
            let g2 = g * g;
            let h = [
                [
                    ch.h_ae[m][i] * (ka * pa).sqrt(),
                    ch.h_be[m][i] * (kb * pb).sqrt(),
                ],
                [
                    ge * ch.h_ar[m][i] * ((ka * pr * pa).sqrt() / g),
                    ge * ch.h_br[m][i] * ((kb * pr * pb).sqrt() / g),
                ],
            ];
            // MA phase: other members' messages, everyone's artificial noise.
            let msg_sum: f64 = k_all
                .clone()
                .map(|k| {
                    let (ea, eb) = alloc.at_eve(ch, k);
                    ka * ea + kb * eb
                })
                .sum();
            let (ea, eb) = alloc.at_eve(ch, own);
            let noise_sum: f64 = k_all
                .clone()
                .map(|k| {
                    let (ea, eb) = alloc.at_eve(ch, k);
                    alpha1 * ea + alpha2 * eb
                })
                .sum();
            let mut et = msg_sum - (ka * ea + kb * eb) + s2 + noise_sum;
            if strict_leakage {
                let leak: f64 = k_all
                    .clone()
                    .map(|k| {
                        let (sa, sb) = alloc.at_relay(ch, k);
                        ka * sa + kb * sb
                    })
                    .sum();
                et += leak;
            }

            let fwd_sum: f64 = k_all
                .map(|k| {
                    let (sa, sb) = alloc.at_relay(ch, k);
                    pr * ge2 * (ka * sa) / g2 + pr * ge2 * (kb * sb) / g2
                })
                .sum();
            let (sa, sb) = alloc.at_relay(ch, own);
            let er = fwd_sum - (pr * ge2 * (ka * sa) / g2 + pr * ge2 * (kb * sb) / g2)
                + (pr * ge2 / g2) * s2
                + s2;
            Ok(EveChannel2x2 {
                h,
                q_diag: [et.max(s2), er.max(s2)],
            })
        }
    }
}

/// (B/2)·log₂ det(I + H Hᴴ Q⁻¹) for diagonal Q.
///
/// With G = Q^(-1/2) H the determinant is 1 + ‖G‖²_F + |det G|².
pub fn eve_rate(evec: &EveChannel2x2, bandwidth: f64) -> f64 {
    let [q1, q2] = evec.q_diag;
    let (s1, s2) = (q1.sqrt(), q2.sqrt());
    let g11 = evec.h[0][0] / s1;
    let g12 = evec.h[0][1] / s1;
    let g21 = evec.h[1][0] / s2;
    let g22 = evec.h[1][1] / s2;
    let frob = g11.norm_sqr() + g12.norm_sqr() + g21.norm_sqr() + g22.norm_sqr();
    let det = g11 * g22 - g12 * g21;
    0.5 * bandwidth * (1.0 + frob + det.norm_sqr()).log2()
}

/// Legitimate, eavesdropper and worst-case secrecy rates for pair `m`.
pub fn secrecy_rate(
    alloc: &ScAllocation,
    ch: &ChannelState,
    m: usize,
    jamming: Jamming,
    bandwidth: f64,
) -> Result<PairRates> {
    let (snr_a, snr_b) = match jamming {
        Jamming::Off => sinr_pair_nocj(alloc, ch, m)?,
        Jamming::On { alpha1, alpha2, .. } => sinr_pair_cj(alloc, ch, m, alpha1, alpha2)?,
    };
    let r_a = 0.5 * bandwidth * (1.0 + snr_a).log2();
    let r_b = 0.5 * bandwidth * (1.0 + snr_b).log2();
    let r_e = eve_rate(&eve_channel(alloc, ch, m, jamming)?, bandwidth);
    Ok(PairRates::from_parts(r_a, r_b, r_e))
}

/// Rates of every member of `alloc`, in member order.
pub fn allocation_rates(
    alloc: &ScAllocation,
    ch: &ChannelState,
    jamming: Jamming,
    bandwidth: f64,
) -> Vec<PairRates> {
    alloc
        .members
        .iter()
        .map(|&m| {
            secrecy_rate(alloc, ch, m, jamming, bandwidth).expect("member of its own allocation")
        })
        .collect()
}

/// System secrecy energy efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEfficiency {
    /// bit/s/W
    pub ee: f64,
    /// Σ r_sec, bit/s
    pub r_total: f64,
    /// P_c + P_T, W
    pub p_total: f64,
}

/// η_E = Σ r_sec / (P_c + P_T).
pub fn system_ee(rates: &[PairRates], transmit_power: f64, cfg: &SystemConfig) -> EnergyEfficiency {
    let r_total: f64 = rates.iter().map(|r| r.r_sec).sum();
    let p_total = cfg.circuit_power + transmit_power;
    EnergyEfficiency {
        ee: r_total / p_total,
        r_total,
        p_total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn alpha_is_sigma_without_uplink_power() {
        let ch = ChannelState::uniform(2, 1, one(), 0.25);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 1.0, 0.0, 0.0);
        assert_eq!(alpha_normalizer(&alloc, &ch), 0.5);
    }

    #[test]
    fn alpha_single_pair_substitution() {
        // P_A|h_A|² = 1, P_B|h_B|² = 3, σ² = 1
        let mut ch = ChannelState::uniform(1, 1, one(), 1.0);
        ch.h_br[0][0] = Complex64::new(3f64.sqrt(), 0.0);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 1.0, 1.0, 1.0);
        assert!((alpha_normalizer(&alloc, &ch) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_limits() {
        let mut ch = ChannelState::uniform(2, 1, Complex64::new(0.3, -0.7), 0.1);
        ch.h_br[1][0] = Complex64::new(1.2, 0.4);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 2.0, 0.7, 0.4);
        assert_eq!(
            gamma_normalizer(&alloc, &ch, 0.0, 0.0),
            alpha_normalizer(&alloc, &ch)
        );
        assert!((gamma_normalizer(&alloc, &ch, 1.0, 1.0) - 0.1f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_pair_has_no_interference() {
        let ch = ChannelState::uniform(1, 1, Complex64::new(0.5, 0.5), 0.3);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 2.0, 1.0, 1.0);
        assert_eq!(interference_terms(&alloc, &ch, 0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn rejects_non_member() {
        let ch = ChannelState::uniform(3, 1, one(), 1.0);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 1.0, 1.0, 1.0);
        assert!(matches!(
            interference_terms(&alloc, &ch, 2),
            Err(Error::NotAMember { pair: 2, .. })
        ));
        assert!(secrecy_rate(&alloc, &ch, 2, Jamming::Off, 1.0).is_err());
    }

    #[test]
    fn zero_relay_power_zero_sinr() {
        let ch = ChannelState::uniform(2, 1, Complex64::new(0.8, 0.1), 0.2);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 0.0, 1.0, 1.0);
        assert_eq!(sinr_pair_nocj(&alloc, &ch, 1).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn unit_single_pair_sinr_by_hand() {
        // P_R = |g|² = P = |h|² = σ² = 1: α² = 3, SNR = (1/3)/((1/3 + 1)·1) = 1/4
        let ch = ChannelState::uniform(1, 1, one(), 1.0);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 1.0, 1.0, 1.0);
        let (a, b) = sinr_pair_nocj(&alloc, &ch, 0).unwrap();
        assert!((a - 0.25).abs() < 1e-15 && (b - 0.25).abs() < 1e-15);
    }

    #[test]
    fn full_jamming_silences_messages() {
        let ch = ChannelState::uniform(2, 1, Complex64::new(0.6, -0.2), 0.5);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 3.0, 1.0, 2.0);
        assert_eq!(sinr_pair_cj(&alloc, &ch, 0, 1.0, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn eve_single_pair_et_is_noise() {
        let ch = ChannelState::uniform(1, 1, Complex64::new(0.4, 0.9), 0.7);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 1.5, 1.0, 1.0);
        let evec = eve_channel(&alloc, &ch, 0, Jamming::Off).unwrap();
        assert_eq!(evec.q_diag[0], 0.7);
    }

    #[test]
    fn blind_eavesdropper() {
        let mut ch = ChannelState::uniform(2, 1, Complex64::new(0.4, 0.9), 0.7);
        ch.h_ae = vec![vec![Complex64::new(0.0, 0.0)]; 2];
        ch.h_be = ch.h_ae.clone();
        ch.g_e = vec![Complex64::new(0.0, 0.0)];
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 1.5, 1.0, 1.0);
        let evec = eve_channel(&alloc, &ch, 1, Jamming::Off).unwrap();
        assert!(evec.h.iter().flatten().all(|h| h.norm() == 0.0));
        assert_eq!(evec.q_diag[0], 0.7);
        assert_eq!(eve_rate(&evec, 1e3), 0.0);
        let r = secrecy_rate(&alloc, &ch, 1, Jamming::Off, 1e3).unwrap();
        assert_eq!(r.r_sec, r.r_a + r.r_b);
    }

    #[test]
    fn diagonal_eve_channel_rate() {
        let evec = EveChannel2x2 {
            h: [
                [Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(0.0, 3.0)],
            ],
            q_diag: [0.5, 2.0],
        };
        let expected = 0.5 * 10.0 * ((1.0 + 4.0 / 0.5) * (1.0 + 9.0 / 2.0f64)).log2();
        assert!((eve_rate(&evec, 10.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn dead_broadcast_link_hinges_to_zero() {
        let mut ch = ChannelState::uniform(1, 1, Complex64::new(0.5, 0.2), 0.1);
        ch.g_a[0][0] = Complex64::new(0.0, 0.0);
        ch.g_b[0][0] = Complex64::new(0.0, 0.0);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0], 1.0, 1.0, 1.0);
        let r = secrecy_rate(&alloc, &ch, 0, Jamming::Off, 1e3).unwrap();
        assert_eq!(r.r_a + r.r_b, 0.0);
        assert_eq!(r.r_sec, 0.0);
    }

    #[test]
    fn amplifier_normalization() {
        let ch = ChannelState::uniform(2, 1, Complex64::new(0.3, 0.4), 0.2);
        let alloc = ScAllocation::with_uniform_uplink(0, vec![0, 1], 7.0, 0.5, 0.25);
        let beta = amplification(&alloc, &ch, Jamming::Off);
        let a = alpha_normalizer(&alloc, &ch);
        assert!((beta * beta * a * a - 7.0).abs() < 1e-12);
    }

    #[test]
    fn ee_arithmetic() {
        let cfg = SystemConfig {
            circuit_power: 0.5,
            ..SystemConfig::default()
        };
        let rates = [PairRates::from_parts(4e5, 6e5, 0.0)];
        let ee = system_ee(&rates, 1.5, &cfg);
        assert_eq!(ee.r_total, 1e6);
        assert_eq!(ee.ee, 5e5);
        assert_eq!(system_ee(&[PairRates::default()], 1.5, &cfg).ee, 0.0);
        let scaled = [PairRates::from_parts(8e5, 12e5, 0.0)];
        assert_eq!(system_ee(&scaled, 1.5, &cfg).ee, 2.0 * ee.ee);
    }

    #[test]
    fn allocation_validation() {
        assert!(ScAllocation::new(0, 0, vec![], 1.0, vec![], vec![]).is_err());
        assert!(ScAllocation::new(0, 0, vec![1, 1], 1.0, vec![1.0; 2], vec![1.0; 2]).is_err());
        assert!(ScAllocation::new(0, 0, vec![1], -1.0, vec![1.0], vec![1.0]).is_err());
        assert!(ScAllocation::new(0, 0, vec![1], 1.0, vec![-1.0], vec![1.0]).is_err());
        assert!(ScAllocation::new(0, 1, vec![0, 2], 1.0, vec![1.0; 2], vec![0.0; 2]).is_ok());
    }
}
