//! Scenario constants and the flat `key = value` config format.
//!
//! Powers are stored in watts and the noise density in W/Hz. Text values may
//! carry a unit suffix (`46dBm`, `300mW`, `1dBW`, `-150dBm/Hz`, `4.5MHz`); the
//! conversion to linear units happens once, here.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How MA-phase and BC-phase subcarriers are combined into allocation units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScPairing {
    /// Unit `i` uses SC `i` in both phases (N units).
    Diagonal,
    /// Every ordered `(i, j)` is its own unit (N² units).
    Full,
}

/// Which relay power constraint the power allocator enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMode {
    /// Relay power over all occupied SC pairs sums to `P_s`.
    Global,
    /// Each SC pair carries at most `P_s / N`.
    PerScCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// M
    pub pairs: usize,
    /// N
    pub subcarriers: usize,
    /// H
    pub max_pairs_per_sc: usize,
    /// V
    pub max_scs_per_pair: usize,
    /// Hz
    pub bandwidth_total: f64,
    /// Relay peak power P_s, W.
    pub relay_power: f64,
    /// P_Am, W.
    pub user_power_a: f64,
    /// P_Bm, W.
    pub user_power_b: f64,
    /// P_c, W.
    pub circuit_power: f64,
    /// N0, W/Hz.
    pub noise_psd: f64,
    /// R_min, bit/s.
    pub rate_min: f64,
    pub lambda_ftpa: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub cj_enabled: bool,
    /// Relative Dinkelbach tolerance.
    pub epsilon: f64,
    /// L_m
    pub max_iterations: usize,
    pub rng_seed: u64,
    /// m
    pub cell_radius: f64,
    /// m
    pub eve_distance: f64,
    /// MHz
    pub carrier_freq: f64,
    /// m
    pub h_base: f64,
    /// m
    pub h_mobile: f64,
    /// Max distance between the two users of a pair, m.
    pub pairing_radius: f64,
    /// Path-loss distances are clamped from below to this value, m.
    pub min_distance: f64,
    /// Keep the RS-side leakage term in the CJ eavesdropper MA covariance.
    pub eve_cov_strict_paper: bool,
    pub sc_pairing: ScPairing,
    pub power_mode: PowerMode,
}

pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            pairs: 10,
            subcarriers: 10,
            max_pairs_per_sc: 3,
            max_scs_per_pair: 4,
            bandwidth_total: 4.5e6,
            relay_power: dbm_to_w(46.0),
            user_power_a: 0.3,
            user_power_b: 0.3,
            circuit_power: db_to_linear(1.0),
            noise_psd: dbm_to_w(-150.0),
            rate_min: 0.0,
            lambda_ftpa: 0.4,
            alpha1: 0.5,
            alpha2: 0.5,
            cj_enabled: false,
            epsilon: 1e-4,
            max_iterations: 50,
            rng_seed: 1,
            cell_radius: 30.0,
            eve_distance: 500.0,
            carrier_freq: 900.0,
            h_base: 30.0,
            h_mobile: 1.5,
            pairing_radius: 5.0,
            min_distance: 1.0,
            eve_cov_strict_paper: false,
            sc_pairing: ScPairing::Diagonal,
            power_mode: PowerMode::Global,
        }
    }
}

/// Every key accepted by [`SystemConfig::set`], in canonical output order.
pub const CONFIG_KEYS: &[&str] = &[
    "M",
    "N",
    "H",
    "V",
    "bandwidth_total",
    "P_s",
    "P_Am",
    "P_Bm",
    "P_c",
    "N0",
    "R_min",
    "lambda_ftpa",
    "alpha1",
    "alpha2",
    "cj_enabled",
    "epsilon",
    "L_m",
    "rng_seed",
    "cell_radius",
    "eve_distance",
    "carrier_freq",
    "h_base",
    "h_mobile",
    "pairing_radius",
    "min_distance",
    "eve_cov_strict_paper",
    "sc_pairing",
    "power_mode",
];

impl SystemConfig {
    /// Per-SC bandwidth B.
    pub fn sc_bandwidth(&self) -> f64 {
        self.bandwidth_total / self.subcarriers as f64
    }

    /// Noise power on one SC, σ² = N0·B.
    pub fn sigma2(&self) -> f64 {
        self.noise_psd * self.sc_bandwidth()
    }

    /// Number of allocation units (SC pairs).
    pub fn units(&self) -> usize {
        match self.sc_pairing {
            ScPairing::Diagonal => self.subcarriers,
            ScPairing::Full => self.subcarriers * self.subcarriers,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.pairs == 0 || self.subcarriers == 0 {
            return bad("M and N must be at least 1".into());
        }
        if self.max_pairs_per_sc == 0 || self.max_scs_per_pair == 0 {
            return bad("H and V must be at least 1".into());
        }
        let positive = [
            ("bandwidth_total", self.bandwidth_total),
            ("P_s", self.relay_power),
            ("P_Am", self.user_power_a),
            ("P_Bm", self.user_power_b),
            ("P_c", self.circuit_power),
            ("N0", self.noise_psd),
            ("epsilon", self.epsilon),
            ("cell_radius", self.cell_radius),
            ("eve_distance", self.eve_distance),
            ("carrier_freq", self.carrier_freq),
            ("h_base", self.h_base),
            ("h_mobile", self.h_mobile),
            ("min_distance", self.min_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        for (name, v) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(self.rate_min.is_finite() && self.rate_min >= 0.0) {
            return bad(format!("R_min must be >= 0, got {}", self.rate_min));
        }
        if !(self.lambda_ftpa.is_finite() && self.lambda_ftpa >= 0.0) {
            return bad(format!(
                "lambda_ftpa must be >= 0, got {}",
                self.lambda_ftpa
            ));
        }
        if !(self.pairing_radius.is_finite() && self.pairing_radius >= 0.0) {
            return bad("pairing_radius must be >= 0".into());
        }
        if self.max_iterations == 0 {
            return bad("L_m must be at least 1".into());
        }
        if self.sc_bandwidth() <= 0.0 {
            return bad("per-SC bandwidth must be positive".into());
        }
        Ok(())
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "M" => self.pairs = parse_num(key, value)?,
            "N" => self.subcarriers = parse_num(key, value)?,
            "H" => self.max_pairs_per_sc = parse_num(key, value)?,
            "V" => self.max_scs_per_pair = parse_num(key, value)?,
            "bandwidth_total" => self.bandwidth_total = parse_bandwidth(key, value)?,
            "P_s" => self.relay_power = parse_power(key, value)?,
            "P_Am" => self.user_power_a = parse_power(key, value)?,
            "P_Bm" => self.user_power_b = parse_power(key, value)?,
            "P_c" => self.circuit_power = parse_power(key, value)?,
            "N0" => self.noise_psd = parse_psd(key, value)?,
            "R_min" => self.rate_min = parse_num(key, value)?,
            "lambda_ftpa" => self.lambda_ftpa = parse_num(key, value)?,
            "alpha1" => self.alpha1 = parse_num(key, value)?,
            "alpha2" => self.alpha2 = parse_num(key, value)?,
            "cj_enabled" => self.cj_enabled = parse_bool(key, value)?,
            "epsilon" => self.epsilon = parse_num(key, value)?,
            "L_m" => self.max_iterations = parse_num(key, value)?,
            "rng_seed" => self.rng_seed = parse_num(key, value)?,
            "cell_radius" => self.cell_radius = parse_length(key, value)?,
            "eve_distance" => self.eve_distance = parse_length(key, value)?,
            "carrier_freq" => self.carrier_freq = parse_freq_mhz(key, value)?,
            "h_base" => self.h_base = parse_length(key, value)?,
            "h_mobile" => self.h_mobile = parse_length(key, value)?,
            "pairing_radius" => self.pairing_radius = parse_length(key, value)?,
            "min_distance" => self.min_distance = parse_length(key, value)?,
            "eve_cov_strict_paper" => self.eve_cov_strict_paper = parse_bool(key, value)?,
            "sc_pairing" => {
                self.sc_pairing = match value {
                    "diagonal" => ScPairing::Diagonal,
                    "full" => ScPairing::Full,
                    _ => return Err(bad_value(key, "expected `diagonal` or `full`")),
                }
            }
            "power_mode" => {
                self.power_mode = match value {
                    "global" => PowerMode::Global,
                    "per_sc_cap" => PowerMode::PerScCap,
                    _ => return Err(bad_value(key, "expected `global` or `per_sc_cap`")),
                }
            }
            other => return Err(Error::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parse a config document on top of the defaults. The result is validated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (line_no, key, value) in key_values(text)? {
            cfg.set(&key, &value).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Canonical text form; `parse(to_text())` reproduces `self` exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("M", self.pairs.to_string());
        kv("N", self.subcarriers.to_string());
        kv("H", self.max_pairs_per_sc.to_string());
        kv("V", self.max_scs_per_pair.to_string());
        kv("bandwidth_total", format!("{}Hz", self.bandwidth_total));
        kv("P_s", format!("{}W", self.relay_power));
        kv("P_Am", format!("{}W", self.user_power_a));
        kv("P_Bm", format!("{}W", self.user_power_b));
        kv("P_c", format!("{}W", self.circuit_power));
        kv("N0", format!("{}W/Hz", self.noise_psd));
        kv("R_min", self.rate_min.to_string());
        kv("lambda_ftpa", self.lambda_ftpa.to_string());
        kv("alpha1", self.alpha1.to_string());
        kv("alpha2", self.alpha2.to_string());
        kv("cj_enabled", self.cj_enabled.to_string());
        kv("epsilon", self.epsilon.to_string());
        kv("L_m", self.max_iterations.to_string());
        kv("rng_seed", self.rng_seed.to_string());
        kv("cell_radius", self.cell_radius.to_string());
        kv("eve_distance", self.eve_distance.to_string());
        kv("carrier_freq", self.carrier_freq.to_string());
        kv("h_base", self.h_base.to_string());
        kv("h_mobile", self.h_mobile.to_string());
        kv("pairing_radius", self.pairing_radius.to_string());
        kv("min_distance", self.min_distance.to_string());
        kv(
            "eve_cov_strict_paper",
            self.eve_cov_strict_paper.to_string(),
        );
        kv(
            "sc_pairing",
            match self.sc_pairing {
                ScPairing::Diagonal => "diagonal",
                ScPairing::Full => "full",
            }
            .into(),
        );
        kv(
            "power_mode",
            match self.power_mode {
                PowerMode::Global => "global",
                PowerMode::PerScCap => "per_sc_cap",
            }
            .into(),
        );
        out
    }
}

/// Split a document into `(line, key, value)` triples, skipping blanks and `#` comments.
pub(crate) fn key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        out.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn bad_value(key: &str, message: impl Into<String>) -> Error {
    Error::BadValue {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| bad_value(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(bad_value(key, format!("expected a boolean, got `{value}`"))),
    }
}

/// Strip the first matching suffix (case-sensitive) and return the numeric part.
fn with_suffix<'a>(value: &'a str, suffix: &str) -> Option<&'a str> {
    value.strip_suffix(suffix).map(str::trim)
}

fn parse_power(key: &str, value: &str) -> Result<f64> {
    if let Some(v) = with_suffix(value, "dBm") {
        return Ok(dbm_to_w(parse_num(key, v)?));
    }
    if let Some(v) = with_suffix(value, "dBW").or_else(|| with_suffix(value, "dB")) {
        return Ok(db_to_linear(parse_num(key, v)?));
    }
    if let Some(v) = with_suffix(value, "mW") {
        return Ok(parse_num::<f64>(key, v)? * 1e-3);
    }
    if let Some(v) = with_suffix(value, "W") {
        return parse_num(key, v);
    }
    parse_num(key, value)
}

fn parse_psd(key: &str, value: &str) -> Result<f64> {
    if let Some(v) = with_suffix(value, "dBm/Hz") {
        return Ok(dbm_to_w(parse_num(key, v)?));
    }
    if let Some(v) = with_suffix(value, "W/Hz") {
        return parse_num(key, v);
    }
    parse_num(key, value)
}

fn parse_bandwidth(key: &str, value: &str) -> Result<f64> {
    for (suffix, scale) in [("MHz", 1e6), ("kHz", 1e3), ("Hz", 1.0)] {
        if let Some(v) = with_suffix(value, suffix) {
            return Ok(parse_num::<f64>(key, v)? * scale);
        }
    }
    parse_num(key, value)
}

fn parse_freq_mhz(key: &str, value: &str) -> Result<f64> {
    for (suffix, scale) in [("GHz", 1e3), ("MHz", 1.0)] {
        if let Some(v) = with_suffix(value, suffix) {
            return Ok(parse_num::<f64>(key, v)? * scale);
        }
    }
    parse_num(key, value)
}

fn parse_length(key: &str, value: &str) -> Result<f64> {
    if let Some(v) = with_suffix(value, "km") {
        return Ok(parse_num::<f64>(key, v)? * 1e3);
    }
    if let Some(v) = with_suffix(value, "m") {
        return parse_num(key, v);
    }
    parse_num(key, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SystemConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.relay_power - 39.810717055349734).abs() < 1e-12);
    }

    #[test]
    fn sigma2_from_psd_and_bandwidth() {
        // -150 dBm/Hz = 1e-15 mW/Hz over 450 kHz
        let cfg = SystemConfig::parse("N0 = -150dBm/Hz\nN = 10\nbandwidth_total = 4.5MHz").unwrap();
        let expected = 1e-15 * 1e-3 * 450e3;
        assert!((cfg.sigma2() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn power_suffixes() {
        let mut cfg = SystemConfig::default();
        cfg.set("P_s", "46dBm").unwrap();
        assert!((cfg.relay_power - 39.810717055349734).abs() < 1e-9);
        cfg.set("P_Am", "300mW").unwrap();
        assert!((cfg.user_power_a - 0.3).abs() < 1e-15);
        cfg.set("P_Bm", "0.25W").unwrap();
        assert_eq!(cfg.user_power_b, 0.25);
        cfg.set("P_c", "1dBW").unwrap();
        assert!((cfg.circuit_power - 1.2589254117941673).abs() < 1e-12);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = SystemConfig::parse("# header\n\nH = 2 # inline\nV=1\n").unwrap();
        assert_eq!(cfg.max_pairs_per_sc, 2);
        assert_eq!(cfg.max_scs_per_pair, 1);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(matches!(
            SystemConfig::parse("Q = 3"),
            Err(Error::Parse { line: 1, .. })
        ));
        let err = SystemConfig::parse("M = ten").unwrap_err().to_string();
        assert!(err.contains('M'), "{err}");
        assert!(SystemConfig::parse("just a line").is_err());
    }

    #[test]
    fn rejects_invariant_violations() {
        assert!(SystemConfig::parse("alpha1 = 1.5").is_err());
        assert!(SystemConfig::parse("M = 0").is_err());
        assert!(SystemConfig::parse("P_s = -1W").is_err());
        assert!(SystemConfig::parse("N0 = 0").is_err());
    }

    #[test]
    fn text_round_trip() {
        let cfg = SystemConfig {
            cj_enabled: true,
            alpha1: 0.3,
            sc_pairing: ScPairing::Full,
            power_mode: PowerMode::PerScCap,
            ..SystemConfig::default()
        };
        let back = SystemConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }
}
