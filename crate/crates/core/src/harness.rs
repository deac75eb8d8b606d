//! Monte Carlo driver: scenarios, per-trial pipelines, statistics and CSV.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{generate_topology, rng_from_seed, sample_channels, ChannelState};
use crate::config::{db_to_linear, dbm_to_w, key_values, SystemConfig};
use crate::error::{Error, Result};
use crate::matching::{random_assignment, scas1, scas2, MatchReport, Matching};
use crate::power::{dinkelbach_allocate, SolveReport};
use crate::system::SystemView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// SCAS-1 matching, then Dinkelbach power allocation.
    Sspa1,
    /// SCAS-2 matching, then Dinkelbach power allocation.
    Sspa2,
    /// Random matching with the equal relay split and FTPA.
    RaNoma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Sspa1, Scheme::Sspa2, Scheme::RaNoma];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Sspa1 => "SSPA-1",
            Scheme::Sspa2 => "SSPA-2",
            Scheme::RaNoma => "RA-NOMA",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        match norm.as_str() {
            "SSPA1" => Ok(Scheme::Sspa1),
            "SSPA2" => Ok(Scheme::Sspa2),
            "RANOMA" => Ok(Scheme::RaNoma),
            _ => Err(Error::BadValue {
                key: "schemes".into(),
                message: format!("unknown scheme `{s}` (expected SSPA-1, SSPA-2 or RA-NOMA)"),
            }),
        }
    }
}

/// Sweep parameters beyond the plain config keys.
pub const DERIVED_SWEEPS: &[&str] = &["sigma2_dBm", "Pc_dB", "P_Am_over_sigma2_dB"];

/// Apply one sweep point to a config.
///
/// `sigma2_dBm` sets the per-SC noise power through N0, `Pc_dB` sets P_c in
/// dBW, `P_Am_over_sigma2_dB` sets both user powers relative to σ². Any
/// config key is also accepted.
pub fn apply_sweep(cfg: &SystemConfig, param: &str, value: f64) -> Result<SystemConfig> {
    let mut out = cfg.clone();
    match param {
        "sigma2_dBm" => out.noise_psd = dbm_to_w(value) / out.sc_bandwidth(),
        "Pc_dB" => out.circuit_power = db_to_linear(value),
        "P_Am_over_sigma2_dB" => {
            let p = out.sigma2() * db_to_linear(value);
            out.user_power_a = p;
            out.user_power_b = p;
        }
        key => {
            let text = if value.fract() == 0.0 && value.abs() < 1e15 {
                format!("{}", value as i64)
            } else {
                format!("{value}")
            };
            out.set(key, &text)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = Error;

    /// `param: v1, v2, ...`
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: String| Error::BadValue {
            key: "sweep".into(),
            message,
        };
        let (param, list) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `param: v1, v2, ...`, got `{s}`")))?;
        let values = list
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("bad sweep value `{v}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sweep {
            param: param.trim().to_string(),
            values,
        })
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}: {}", self.param, vals.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub base: SystemConfig,
    pub sweep: Sweep,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
}

pub const BUILTIN_SCENARIOS: &[&str] = &[
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9",
];

const DEFAULT_TRIALS: usize = 200;

/// Keys a scenario file accepts on top of [`crate::config::CONFIG_KEYS`].
pub const SCENARIO_KEYS: &[&str] = &["name", "sweep", "schemes", "trials"];

impl Scenario {
    pub fn builtin(name: &str) -> Result<Self> {
        use Scheme::*;
        let base = SystemConfig::default();
        let cj = SystemConfig {
            cj_enabled: true,
            ..base.clone()
        };
        let sweep = |param: &str, values: &[f64]| Sweep {
            param: param.to_string(),
            values: values.to_vec(),
        };
        let (cfg, sweep, schemes) = match name {
            "fig2" => (base, sweep("M", &[4.0, 6.0, 8.0, 10.0]), vec![Sspa1]),
            "fig3" => (base, sweep("M", &[4.0, 6.0, 8.0, 10.0]), vec![Sspa2]),
            "fig4" => (base, sweep("M", &[10.0]), Scheme::ALL.to_vec()),
            "fig5" => (
                base,
                sweep("P_Am_over_sigma2_dB", &[110.0, 120.0, 130.0, 140.0, 150.0]),
                Scheme::ALL.to_vec(),
            ),
            "fig6" => (
                base,
                sweep("Pc_dB", &[0.1, 0.5, 1.0, 1.5]),
                Scheme::ALL.to_vec(),
            ),
            "fig7" => (
                cj,
                sweep("sigma2_dBm", &[-110.0, -100.0, -90.0, -80.0, -70.0]),
                Scheme::ALL.to_vec(),
            ),
            "fig8" => (cj, sweep("N", &[6.0, 8.0, 10.0]), vec![Sspa1]),
            "fig9" => (cj, sweep("M", &[4.0, 6.0, 8.0, 10.0]), vec![Sspa2]),
            other => {
                return Err(Error::UnknownScenario {
                    name: other.to_string(),
                    available: BUILTIN_SCENARIOS.join(", "),
                })
            }
        };
        Ok(Scenario {
            name: name.to_string(),
            base: cfg,
            sweep,
            schemes,
            trials: DEFAULT_TRIALS,
        })
    }

    /// Parse a scenario file: config keys plus `name`, `sweep`, `schemes` and
    /// `trials`. Missing keys take the defaults of a single-point custom run.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sc = Scenario {
            name: "custom".into(),
            base: SystemConfig::default(),
            sweep: Sweep {
                param: "M".into(),
                values: vec![SystemConfig::default().pairs as f64],
            },
            schemes: Scheme::ALL.to_vec(),
            trials: DEFAULT_TRIALS,
        };
        let mut explicit_sweep = false;
        for (line, key, value) in key_values(text)? {
            explicit_sweep |= key == "sweep";
            sc.set(&key, &value).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        if !explicit_sweep {
            sc.sweep.values = vec![sc.base.pairs as f64];
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Apply a scenario key or a config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "name" => self.name = value.trim().to_string(),
            "sweep" => self.sweep = value.parse()?,
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "trials" => {
                self.trials = value.trim().parse().map_err(|_| Error::BadValue {
                    key: key.into(),
                    message: format!("expected a count, got `{value}`"),
                })?
            }
            _ => self.base.set(key, value)?,
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.sweep.values.is_empty() {
            return bad("sweep needs at least one value");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.schemes.is_empty() {
            return bad("at least one scheme is required");
        }
        for &v in &self.sweep.values {
            self.config_at(v)?.validate()?;
        }
        Ok(())
    }

    pub fn config_at(&self, value: f64) -> Result<SystemConfig> {
        apply_sweep(&self.base, &self.sweep.param, value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub scheme: Scheme,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub trial: usize,
    pub seed: u64,
    pub total_r_sec: f64,
    pub ee: f64,
    pub match_ops: usize,
    pub solver_iters: usize,
    pub converged: bool,
}

impl ResultRow {
    /// True for the placeholder row of a trial with no feasible allocation.
    pub fn is_infeasible(&self) -> bool {
        !self.converged && self.ee == 0.0 && self.match_ops == 0 && self.solver_iters == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Order rows by (sweep value, scheme name, trial).
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.sweep_value
                .total_cmp(&b.sweep_value)
                .then_with(|| a.scheme.name().cmp(b.scheme.name()))
                .then(a.trial.cmp(&b.trial))
        });
    }

    /// EE values of one scheme at one sweep point, in trial order.
    pub fn ee_values(&self, scheme: Scheme, sweep_value: f64) -> Vec<f64> {
        let mut rows: Vec<&ResultRow> = self
            .rows
            .iter()
            .filter(|r| r.scheme == scheme && r.sweep_value == sweep_value)
            .collect();
        rows.sort_by_key(|r| r.trial);
        rows.into_iter().map(|r| r.ee).collect()
    }

    /// Sweep values present, ascending.
    pub fn sweep_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.sweep_value).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn schemes(&self) -> Vec<Scheme> {
        let mut v: Vec<Scheme> = self.rows.iter().map(|r| r.scheme).collect();
        v.sort_by_key(|s| s.name());
        v.dedup();
        v
    }
}

/// Seed of trial `trial` under base seed `base`. Independent of the sweep
/// value, so every sweep point and scheme sees the same random stream.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    splitmix64(splitmix64(base) ^ trial as u64)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Network realization of one trial.
pub fn trial_channels(cfg: &SystemConfig, seed: u64) -> ChannelState {
    let mut rng = rng_from_seed(seed);
    let topo = generate_topology(cfg, &mut rng);
    sample_channels(&topo, cfg, &mut rng)
}

/// Random matching of one trial, shared by RA-NOMA and the SCAS-2 start.
pub fn trial_random_matching(cfg: &SystemConfig, seed: u64) -> Matching {
    random_assignment(cfg, &mut rng_from_seed(splitmix64(seed ^ 0xA5A5_A5A5)))
}

/// Everything one scheme produced on one trial.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub matching: Matching,
    pub budgets: Vec<f64>,
    pub total_r_sec: f64,
    pub ee: f64,
    pub match_report: Option<MatchReport>,
    pub solve_report: Option<SolveReport>,
}

impl TrialOutcome {
    pub fn match_ops(&self) -> usize {
        self.match_report.as_ref().map_or(0, |r| r.swaps)
    }

    pub fn solver_iters(&self) -> usize {
        self.solve_report.as_ref().map_or(0, |r| r.iterations)
    }

    pub fn converged(&self) -> bool {
        self.match_report.as_ref().is_none_or(|r| r.converged)
            && self.solve_report.as_ref().is_none_or(|r| r.converged)
    }
}

/// Run one scheme on one trial's network.
pub fn run_pipeline(cfg: &SystemConfig, scheme: Scheme, seed: u64) -> Result<TrialOutcome> {
    let ch = trial_channels(cfg, seed);
    let view = SystemView::new(&ch, cfg);
    let (matching, match_report) = match scheme {
        Scheme::Sspa1 => {
            let r = scas1(&ch, cfg)?;
            (r.matching.clone(), Some(r))
        }
        Scheme::Sspa2 => {
            let r = scas2(&ch, cfg, trial_random_matching(cfg, seed))?;
            (r.matching.clone(), Some(r))
        }
        Scheme::RaNoma => (trial_random_matching(cfg, seed), None),
    };
    let (budgets, solve_report) = match scheme {
        Scheme::RaNoma => (view.equal_budgets(&matching), None),
        _ => {
            let (alloc, rep) = dinkelbach_allocate(&matching, &ch, cfg)?;
            (alloc.relay, Some(rep))
        }
    };
    let ee = view.ee(&matching, &budgets);
    Ok(TrialOutcome {
        matching,
        budgets,
        total_r_sec: ee.r_total,
        ee: ee.ee,
        match_report,
        solve_report,
    })
}

/// Regenerate the row for (`scheme`, `sweep_value`, `trial`) in isolation.
pub fn replay_row(
    sc: &Scenario,
    scheme: Scheme,
    sweep_value: f64,
    trial: usize,
) -> Result<ResultRow> {
    let cfg = sc.config_at(sweep_value)?;
    let seed = trial_seed(cfg.rng_seed, trial);
    let base = ResultRow {
        scenario: sc.name.clone(),
        scheme,
        sweep_param: sc.sweep.param.clone(),
        sweep_value,
        trial,
        seed,
        total_r_sec: 0.0,
        ee: 0.0,
        match_ops: 0,
        solver_iters: 0,
        converged: false,
    };
    match run_pipeline(&cfg, scheme, seed) {
        Ok(out) => Ok(ResultRow {
            total_r_sec: out.total_r_sec,
            ee: out.ee,
            match_ops: out.match_ops(),
            solver_iters: out.solver_iters(),
            converged: out.converged(),
            ..base
        }),
        // an infeasible trial stays in the table, flagged
        Err(Error::RateInfeasible { .. } | Error::InfeasibleCapacity(_)) => Ok(base),
        Err(e) => Err(e),
    }
}

/// Run every (sweep value, trial, scheme) of a scenario. Trials run on the
/// current rayon pool; the output order does not depend on scheduling.
pub fn run_scenario(sc: &Scenario) -> Result<ResultTable> {
    sc.validate()?;
    let jobs: Vec<(f64, usize, Scheme)> = sc
        .sweep
        .values
        .iter()
        .flat_map(|&v| (0..sc.trials).flat_map(move |t| sc.schemes.iter().map(move |&s| (v, t, s))))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(v, t, s)| replay_row(sc, s, v, t))
        .collect::<Result<Vec<_>>>()?;
    let mut table = ResultTable { rows };
    table.sort();
    Ok(table)
}

/// [`run_scenario`] on a dedicated pool of `threads` workers (0 = rayon default).
pub fn run_scenario_with_threads(sc: &Scenario, threads: usize) -> Result<ResultTable> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_scenario(sc))
}

/// Empirical CDF with ties merged: `(value, fraction ≤ value)`, ascending.
pub fn cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("cdf of an empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = frac,
            _ => out.push((v, frac)),
        }
    }
    Ok(out)
}

/// Sample mean with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

pub fn mean_ci(values: &[f64]) -> MeanCi {
    let n = values.len();
    if n == 0 {
        return MeanCi {
            mean: f64::NAN,
            lo: f64::NAN,
            hi: f64::NAN,
            n,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let half = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        1.96 * (var / n as f64).sqrt()
    } else {
        0.0
    };
    MeanCi {
        mean,
        lo: mean - half,
        hi: mean + half,
        n,
    }
}

/// One-sided 95% lower confidence bound on mean(a − b) for paired samples.
pub fn paired_lower_bound(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "paired samples differ in length");
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    if d.len() < 2 {
        return mean;
    }
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    mean - 1.645 * (var / n).sqrt()
}

/// Welch one-sided 95% lower bound on mean(a) − mean(b) for independent samples.
pub fn welch_lower_bound(a: &[f64], b: &[f64]) -> f64 {
    let stats = |x: &[f64]| {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        (m, v / n)
    };
    let (ma, va) = stats(a);
    let (mb, vb) = stats(b);
    ma - mb - 1.645 * (va + vb).sqrt()
}

pub const CSV_HEADER: [&str; 11] = [
    "scenario",
    "scheme",
    "sweep_param",
    "sweep_value",
    "trial",
    "seed",
    "total_r_sec_bps",
    "ee_bps_per_w",
    "match_ops",
    "solver_iters",
    "converged",
];

/// Write the table as CSV, sorted by (sweep value, scheme, trial).
pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> Result<()> {
    let mut sorted = table.clone();
    sorted.sort();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &sorted.rows {
        w.write_record([
            r.scenario.clone(),
            r.scheme.name().to_string(),
            r.sweep_param.clone(),
            r.sweep_value.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.total_r_sec.to_string(),
            r.ee.to_string(),
            r.match_ops.to_string(),
            r.solver_iters.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_csv(table, std::io::BufWriter::new(file))
}

pub fn parse_csv<R: Read>(input: R) -> Result<ResultTable> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let num = |k: usize| -> Result<f64> {
            field(k).parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad {} `{}`", CSV_HEADER[k], field(k)),
            })
        };
        let int = |k: usize| -> Result<u64> {
            field(k).parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad {} `{}`", CSV_HEADER[k], field(k)),
            })
        };
        rows.push(ResultRow {
            scenario: field(0).to_string(),
            scheme: field(1).parse()?,
            sweep_param: field(2).to_string(),
            sweep_value: num(3)?,
            trial: int(4)? as usize,
            seed: int(5)?,
            total_r_sec: num(6)?,
            ee: num(7)?,
            match_ops: int(8)? as usize,
            solver_iters: int(9)? as usize,
            converged: match field(10) {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("bad converged `{other}`"),
                    })
                }
            },
        });
    }
    Ok(ResultTable { rows })
}

pub fn read_csv(path: &Path) -> Result<ResultTable> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_examples() {
        assert_eq!(cdf(&[5.0]).unwrap(), vec![(5.0, 1.0)]);
        assert_eq!(
            cdf(&[1.0, 1.0, 2.0]).unwrap(),
            vec![(1.0, 2.0 / 3.0), (2.0, 1.0)]
        );
        assert!(cdf(&[]).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!("sspa2".parse::<Scheme>().unwrap(), Scheme::Sspa2);
        assert!("OFDMA".parse::<Scheme>().is_err());
    }

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_SCENARIOS {
            Scenario::builtin(name).unwrap().validate().unwrap();
        }
        assert!(matches!(
            Scenario::builtin("nosuch"),
            Err(Error::UnknownScenario { .. })
        ));
    }

    #[test]
    fn derived_sweeps() {
        let cfg = SystemConfig::default();
        let c = apply_sweep(&cfg, "sigma2_dBm", -90.0).unwrap();
        assert!((c.sigma2() - 1e-12).abs() < 1e-24);
        let c = apply_sweep(&cfg, "Pc_dB", 0.0).unwrap();
        assert!((c.circuit_power - 1.0).abs() < 1e-15);
        let c = apply_sweep(&cfg, "P_Am_over_sigma2_dB", 120.0).unwrap();
        assert!((c.user_power_a / c.sigma2() - 1e12).abs() < 1e-3);
        let c = apply_sweep(&cfg, "N", 6.0).unwrap();
        assert_eq!(c.subcarriers, 6);
        assert!(apply_sweep(&cfg, "N", 6.5).is_err());
        assert!(apply_sweep(&cfg, "bogus", 1.0).is_err());
    }

    #[test]
    fn scenario_text() {
        let sc = Scenario::parse(
            "name = tiny\nsweep = N: 2, 3\nschemes = RA-NOMA, SSPA-1\ntrials = 3\nM = 2\n",
        )
        .unwrap();
        assert_eq!(sc.name, "tiny");
        assert_eq!(sc.sweep.values, vec![2.0, 3.0]);
        assert_eq!(sc.schemes, vec![Scheme::RaNoma, Scheme::Sspa1]);
        assert_eq!(sc.base.pairs, 2);
        assert!(Scenario::parse("trials = 0\n").is_err());
        assert!(Scenario::parse("sweep = N:\n").is_err());
        assert!(Scenario::parse("schemes = OMA\n").is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        let s: std::collections::BTreeSet<u64> = (0..1000).map(|t| trial_seed(42, t)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn paired_bound() {
        let a = [2.0, 3.0, 4.0];
        let b = [1.0, 2.0, 3.0];
        assert!((paired_lower_bound(&a, &b) - 1.0).abs() < 1e-12);
    }
}
