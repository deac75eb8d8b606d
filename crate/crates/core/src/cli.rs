//! Command-line front end. `run_cli` is everything the binary does; it takes
//! explicit output streams so tests can drive it in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};

use crate::config::{SystemConfig, CONFIG_KEYS};
use crate::error::{Error, Result};
use crate::harness::{
    emit_csv, mean_ci, run_scenario_with_threads, trial_channels, trial_random_matching,
    trial_seed, ResultTable, Scenario, BUILTIN_SCENARIOS, SCENARIO_KEYS,
};
use crate::matching::{exhaustive_best, scas2};
use crate::power::{dinkelbach_allocate, grid_oracle};
use crate::system::SystemView;

pub const THREADS_ENV: &str = "NOMA_LAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

/// Default number of oracle instances.
const ORACLE_INSTANCES: usize = 3;
const ORACLE_GRID: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Run,
    Validate,
    Oracle,
    ListScenarios,
}

/// A parsed command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    /// Built-in scenario name or path to a config/scenario file.
    pub target: Option<String>,
    /// `--set` assignments, in command-line order.
    pub overrides: Vec<(String, String)>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub verbose: u8,
}

#[derive(Debug, Parser)]
#[command(
    name = "noma-lab",
    version,
    about = "Secure resource allocation simulator for NOMA two-way relay networks"
)]
struct Args {
    #[command(subcommand)]
    verb: VerbArgs,
    /// Progress messages on stderr.
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Debug, clap::Args)]
struct Shared {
    /// Override a config or scenario key; repeatable, applied in order.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_override)]
    set: Vec<(String, String)>,
    /// Base seed (replaces rng_seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per sweep point (instances for `oracle`).
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum VerbArgs {
    /// Run a built-in scenario or a scenario file and write a CSV.
    Run {
        scenario: String,
        /// CSV destination [default: <scenario name>.csv].
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Check a config or scenario file.
    Validate {
        config: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// Compare the optimizers against exhaustive and grid search on small instances.
    Oracle {
        config: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// Print the built-in scenario names.
    ListScenarios,
}

fn parse_override(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let k = k.trim();
    if !CONFIG_KEYS.contains(&k) && !SCENARIO_KEYS.contains(&k) {
        return Err(format!("unknown key `{k}`"));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

pub fn parse_args<I, T>(argv: I) -> std::result::Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let mut cmd = Command {
        verb: Verb::ListScenarios,
        target: None,
        overrides: Vec::new(),
        out: None,
        seed: None,
        trials: None,
        verbose: args.verbose,
    };
    let mut take = |shared: Shared| {
        cmd.overrides = shared.set;
        cmd.seed = shared.seed;
        cmd.trials = shared.trials;
    };
    let (verb, target, out) = match args.verb {
        VerbArgs::Run {
            scenario,
            out,
            shared,
        } => {
            take(shared);
            (Verb::Run, Some(scenario), out)
        }
        VerbArgs::Validate { config, shared } => {
            take(shared);
            (Verb::Validate, Some(config), None)
        }
        VerbArgs::Oracle { config, shared } => {
            take(shared);
            (Verb::Oracle, Some(config), None)
        }
        VerbArgs::ListScenarios => (Verb::ListScenarios, None, None),
    };
    cmd.verb = verb;
    cmd.target = target;
    cmd.out = out;
    Ok(cmd)
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InfeasibleCapacity(_) | Error::RateInfeasible { .. } => EXIT_INFEASIBLE,
        _ => EXIT_INVALID,
    }
}

/// Built-in name first, then a file path.
pub fn resolve_scenario(target: &str) -> Result<Scenario> {
    if BUILTIN_SCENARIOS.contains(&target) {
        return Scenario::builtin(target);
    }
    let path = Path::new(target);
    if path.is_file() {
        return Scenario::from_file(path);
    }
    Scenario::builtin(target)
}

/// Scenario for `cmd` with its overrides, seed and trial count applied.
pub fn build_scenario(cmd: &Command) -> Result<Scenario> {
    let target = cmd
        .target
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("no scenario given".into()))?;
    let mut sc = resolve_scenario(target)?;
    for (k, v) in &cmd.overrides {
        sc.set(k, v)?;
    }
    if let Some(seed) = cmd.seed {
        sc.base.rng_seed = seed;
    }
    if let Some(t) = cmd.trials {
        sc.trials = t;
    }
    sc.validate()?;
    Ok(sc)
}

/// Worker count from `NOMA_LAB_THREADS`; unset or 0 means rayon's default.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| Error::BadValue {
            key: THREADS_ENV.into(),
            message: format!("expected a thread count, got `{v}`"),
        }),
    }
}

/// One `scheme mean_ee ci95_lo ci95_hi trials` line per scheme and sweep
/// point, each sweep point introduced by a `# param = value` comment.
/// Infeasible trials are left out of the statistics.
pub fn summarize(table: &ResultTable, param: &str) -> String {
    let mut out = String::from("# scheme mean_ee ci95_lo ci95_hi trials\n");
    for v in table.sweep_values() {
        out.push_str(&format!("# {param} = {v}\n"));
        for s in table.schemes() {
            let ee: Vec<f64> = table
                .rows
                .iter()
                .filter(|r| r.scheme == s && r.sweep_value == v && !r.is_infeasible())
                .map(|r| r.ee)
                .collect();
            let ci = mean_ci(&ee);
            out.push_str(&format!(
                "{s} {:e} {:e} {:e} {}\n",
                ci.mean, ci.lo, ci.hi, ci.n
            ));
        }
    }
    out
}

fn relative_gap(reference: f64, value: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        (reference - value) / reference.abs()
    }
}

/// Oracle comparison on `instances` trials of `cfg`, as printable lines.
pub fn oracle_report(cfg: &SystemConfig, instances: usize) -> Result<String> {
    let mut out = String::from(
        "# instance seed scas2_ee exhaustive_ee match_gap dinkelbach_ee grid_ee power_gap\n",
    );
    let (mut worst_match, mut worst_power) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..instances {
        let seed = trial_seed(cfg.rng_seed, i);
        let ch = trial_channels(cfg, seed);
        let view = SystemView::new(&ch, cfg);
        let (best, best_ee) = exhaustive_best(&ch, cfg)?;
        let local = scas2(&ch, cfg, trial_random_matching(cfg, seed))?;
        let local_ee = view.equal_split_ee(&local.matching).ee;
        let (alloc, _) = dinkelbach_allocate(&best, &ch, cfg)?;
        let dink_ee = view.ee(&best, &alloc.relay).ee;
        let (_, grid_ee) = grid_oracle(&best, &ch, cfg, ORACLE_GRID)?;
        let gm = relative_gap(best_ee, local_ee);
        let gp = relative_gap(grid_ee, dink_ee);
        worst_match = worst_match.max(gm);
        worst_power = worst_power.max(gp);
        out.push_str(&format!(
            "{i} {seed} {local_ee:e} {best_ee:e} {gm:e} {dink_ee:e} {grid_ee:e} {gp:e}\n"
        ));
    }
    out.push_str(&format!(
        "# worst match_gap {worst_match:e}, worst power_gap {worst_power:e} (positive = optimizer below oracle)\n"
    ));
    Ok(out)
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match cmd.verb {
        Verb::ListScenarios => {
            for name in BUILTIN_SCENARIOS {
                let sc = Scenario::builtin(name)?;
                let schemes: Vec<&str> = sc.schemes.iter().map(|s| s.name()).collect();
                writeln!(out, "{name}\t{}\t{}", sc.sweep, schemes.join(",")).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Verb::Validate => {
            let sc = build_scenario(cmd)?;
            writeln!(
                out,
                "ok: {} ({} sweep point(s), {} scheme(s), {} trial(s))",
                sc.name,
                sc.sweep.values.len(),
                sc.schemes.len(),
                sc.trials
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Verb::Oracle => {
            let sc = build_scenario(cmd)?;
            let report = oracle_report(&sc.base, cmd.trials.unwrap_or(ORACLE_INSTANCES))?;
            out.write_all(report.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Verb::Run => {
            let sc = build_scenario(cmd)?;
            let threads = threads_from_env()?;
            let path = cmd
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", sc.name)));
            if cmd.verbose > 0 {
                let _ = writeln!(
                    err,
                    "running {}: {} x {} trials x {} scheme(s)",
                    sc.name,
                    sc.sweep,
                    sc.trials,
                    sc.schemes.len()
                );
            }
            let table = run_scenario_with_threads(&sc, threads)?;
            emit_csv(&table, &path)?;
            out.write_all(summarize(&table, &sc.sweep.param).as_bytes())
                .map_err(io)?;
            let infeasible = table.rows.iter().filter(|r| r.is_infeasible()).count();
            if cmd.verbose > 0 {
                let _ = writeln!(err, "wrote {} rows to {}", table.rows.len(), path.display());
            }
            for v in table.sweep_values() {
                for s in table.schemes() {
                    let all_bad = table
                        .rows
                        .iter()
                        .filter(|r| r.scheme == s && r.sweep_value == v)
                        .all(|r| r.is_infeasible());
                    if all_bad {
                        let _ = writeln!(
                            err,
                            "error: {s} is infeasible on every trial at {} = {v}",
                            sc.sweep.param
                        );
                        return Ok(EXIT_INFEASIBLE);
                    }
                }
            }
            if infeasible > 0 {
                let _ = writeln!(err, "warning: {infeasible} infeasible trial(s) recorded");
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parse `argv`, execute, and return the process exit status.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cmd = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
