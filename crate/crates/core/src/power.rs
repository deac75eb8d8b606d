//! Relay power allocation for a fixed matching.
//!
//! Rates on an SC pair depend on the relay budget P_{R,j} only through its
//! total, so the decision variables are the per-SC-pair budgets; each budget is
//! split among the members by FTPA for reporting. [`dinkelbach_allocate`] runs
//! the parametric outer loop on η = R_sec / (P_c + P_T) and solves each inner
//! problem with a log-barrier Newton method. [`grid_oracle`] brute-forces the
//! same problem on a lattice for small instances.

use crate::channel::ChannelState;
use crate::config::{PowerMode, SystemConfig};
use crate::error::{Error, Result};
use crate::matching::{ftpa_power, Matching};
use crate::system::SystemView;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// p_{m,j} as `[pair][sc pair]`; zero where the pair is not assigned.
    pub p: Vec<Vec<f64>>,
    /// P_{R,j} per SC pair.
    pub relay: Vec<f64>,
    /// Parametric level u_E the allocation was produced at.
    pub u_e: f64,
    /// Share of the allocated total held by each SC pair.
    pub fractions: Vec<f64>,
}

impl PowerAllocation {
    /// Split per-SC-pair budgets among members by FTPA.
    pub fn from_budgets(
        matching: &Matching,
        ch: &ChannelState,
        cfg: &SystemConfig,
        budgets: &[f64],
        u_e: f64,
    ) -> Result<Self> {
        let mut p = vec![vec![0.0; matching.unit_count()]; matching.pair_count()];
        for (u, &budget) in budgets.iter().enumerate() {
            let members: Vec<usize> = matching.pairs_on(u).iter().copied().collect();
            if members.is_empty() {
                continue;
            }
            let (_, sc_bc) = matching.unit(u);
            let split = ftpa_power(&members, ch, sc_bc, budget, cfg.lambda_ftpa)?;
            for (m, share) in members.into_iter().zip(split) {
                p[m][u] = share;
            }
        }
        let total: f64 = budgets.iter().sum();
        let fractions = budgets
            .iter()
            .map(|&b| if total > 0.0 { b / total } else { 0.0 })
            .collect();
        Ok(Self {
            p,
            relay: budgets.to_vec(),
            u_e,
            fractions,
        })
    }

    pub fn total(&self) -> f64 {
        self.relay.iter().sum()
    }

    /// Check nonnegativity, member sums, the budget rule of `mode`, and
    /// that the fractions add up to one.
    pub fn check(&self, cfg: &SystemConfig, mode: PowerMode) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (u, &relay) in self.relay.iter().enumerate() {
            let sum: f64 = self.p.iter().map(|row| row[u]).sum();
            if self.p.iter().any(|row| row[u] < 0.0) || relay < 0.0 {
                return bad(format!("negative power on SC pair {u}"));
            }
            if (sum - relay).abs() > 1e-9 * relay.max(f64::MIN_POSITIVE) {
                return bad(format!("SC pair {u}: members hold {sum} W of {relay} W"));
            }
        }
        let total = self.total();
        if total == 0.0 {
            return Ok(());
        }
        match mode {
            PowerMode::Global => {
                if (total - cfg.relay_power).abs() > 1e-9 * cfg.relay_power {
                    return bad(format!(
                        "allocated {total} W, budget is {} W",
                        cfg.relay_power
                    ));
                }
            }
            PowerMode::PerScCap => {
                let cap = cfg.relay_power / cfg.units() as f64;
                if let Some(u) = self.relay.iter().position(|&r| r > cap * (1.0 + 1e-9)) {
                    return bad(format!("SC pair {u} exceeds the {cap} W cap"));
                }
            }
        }
        let frac: f64 = self.fractions.iter().sum();
        if (frac - 1.0).abs() > 1e-9 {
            return bad(format!("fractions sum to {frac}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Outer iterations ℓ.
    pub iterations: usize,
    pub converged: bool,
    /// |R_sec − u_E·(P_c + P_T)| at the last iterate, bit/s.
    pub residual: f64,
    /// u_E at the start and after every outer iteration.
    pub ee_trajectory: Vec<f64>,
    /// No strictly feasible start for the rate floors was found and the
    /// equal split was returned instead.
    pub fallback: bool,
}

/// Feasible set of the per-SC-pair budgets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Domain {
    /// x ≥ 0, Σx = total.
    Simplex { total: f64 },
    /// 0 ≤ x ≤ cap.
    Box { cap: f64 },
}

impl Domain {
    fn for_mode(mode: PowerMode, cfg: &SystemConfig) -> Self {
        match mode {
            PowerMode::Global => Domain::Simplex {
                total: cfg.relay_power,
            },
            PowerMode::PerScCap => Domain::Box {
                cap: cfg.relay_power / cfg.units() as f64,
            },
        }
    }

    /// Largest budget a single coordinate can take.
    fn reach(self) -> f64 {
        match self {
            Domain::Simplex { total } => total,
            Domain::Box { cap } => cap,
        }
    }

    fn equal(self, dims: usize) -> Vec<f64> {
        match self {
            Domain::Simplex { total } => vec![total / dims as f64; dims],
            Domain::Box { cap } => vec![cap; dims],
        }
    }

    /// Pull `x` slightly into the interior.
    fn interior(self, x: &[f64]) -> Vec<f64> {
        const ETA: f64 = 1e-3;
        match self {
            Domain::Simplex { total } => {
                let even = total / x.len() as f64;
                x.iter().map(|&v| (1.0 - ETA) * v + ETA * even).collect()
            }
            Domain::Box { cap } => x
                .iter()
                .map(|&v| v.clamp(ETA * cap, (1.0 - ETA) * cap))
                .collect(),
        }
    }
}

/// Objective that is a sum of per-coordinate terms, each also contributing to
/// one or more constrained groups (the pairs' rates).
pub(crate) trait Separable {
    fn dims(&self) -> usize;
    fn groups(&self) -> usize;
    /// `(group, value)` contributions of coordinate `k` at `x`.
    fn contributions(&self, k: usize, x: f64) -> Vec<(usize, f64)>;
}

#[derive(Debug, Clone)]
struct Evaluation {
    total: f64,
    groups: Vec<f64>,
}

fn evaluate<S: Separable + ?Sized>(obj: &S, x: &[f64]) -> Evaluation {
    let mut groups = vec![0.0; obj.groups()];
    let mut total = 0.0;
    for (k, &xk) in x.iter().enumerate() {
        for (g, v) in obj.contributions(k, xk) {
            groups[g] += v;
            total += v;
        }
    }
    Evaluation { total, groups }
}

/// Inner problem: maximize Σ values − price·Σx over `domain`, with every
/// group's value at least `floor` when `floor > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BarrierSpec {
    pub domain: Domain,
    pub price: f64,
    pub floor: f64,
}

impl BarrierSpec {
    fn objective(&self, eval: &Evaluation, x: &[f64]) -> f64 {
        eval.total - self.price * x.iter().sum::<f64>()
    }

    fn floors_hold(&self, eval: &Evaluation) -> bool {
        self.floor <= 0.0 || eval.groups.iter().all(|&g| g > self.floor)
    }

    fn constraint_count(&self, dims: usize, groups: usize) -> usize {
        let box_side = matches!(self.domain, Domain::Box { .. }) as usize;
        dims * (1 + box_side) + if self.floor > 0.0 { groups } else { 0 }
    }

    /// Barrier function; `None` outside the strict interior.
    fn phi(&self, eval: &Evaluation, x: &[f64], t: f64, scale: f64) -> Option<f64> {
        let mut val = t * self.objective(eval, x) / scale;
        for &xk in x {
            if !(xk > 0.0) {
                return None;
            }
            val += xk.ln();
            if let Domain::Box { cap } = self.domain {
                if !(cap - xk > 0.0) {
                    return None;
                }
                val += (cap - xk).ln();
            }
        }
        if self.floor > 0.0 {
            for &g in &eval.groups {
                if !(g - self.floor > 0.0) {
                    return None;
                }
                val += (g - self.floor).ln();
            }
        }
        Some(val)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BarrierOutcome {
    pub x: Vec<f64>,
    #[allow(dead_code)]
    pub newton_steps: usize,
}

const GAP_TOLERANCE: f64 = 1e-6;
/// Relative central-difference step for rate gradients. Rates carry about
/// 1e-12 relative evaluation noise, which a much smaller step amplifies.
pub const GRADIENT_STEP: f64 = 1e-4;
const CURVATURE_STEP: f64 = 1e-3;
const MAX_CENTERING_STEPS: usize = 60;

/// Log-barrier path following from the strictly feasible point `x0`.
///
/// The barrier weight grows by 10 until the duality-gap proxy drops below
/// `GAP_TOLERANCE` (relative to the objective scale). Each centering round
/// takes Newton steps with a diagonal Hessian, the budget equality enforced by
/// projecting the step onto Σd = 0, and Armijo backtracking.
pub(crate) fn barrier_maximize<S: Separable + ?Sized>(
    obj: &S,
    spec: &BarrierSpec,
    x0: &[f64],
) -> BarrierOutcome {
    let dims = obj.dims();
    let mut x = x0.to_vec();
    let mut eval = evaluate(obj, &x);
    let scale = spec
        .objective(&eval, &x)
        .abs()
        .max(eval.total.abs())
        .max(1.0);
    let constraints = spec.constraint_count(dims, obj.groups()) as f64;
    let mut newton_steps = 0;
    let mut t = 1.0;
    loop {
        for _ in 0..MAX_CENTERING_STEPS {
            let Some(phi_now) = spec.phi(&eval, &x, t, scale) else {
                break;
            };
            let (grad, hess) = barrier_derivatives(obj, spec, &x, &eval, t, scale);
            let weights: Vec<f64> = hess
                .iter()
                .zip(&x)
                .map(|(&h, &xk)| 1.0 / -h.min(-1.0 / (xk * xk)))
                .collect();
            let dir: Vec<f64> = match spec.domain {
                Domain::Simplex { .. } => {
                    let nu = grad.iter().zip(&weights).map(|(g, w)| g * w).sum::<f64>()
                        / weights.iter().sum::<f64>();
                    grad.iter()
                        .zip(&weights)
                        .map(|(g, w)| w * (g - nu))
                        .collect()
                }
                Domain::Box { .. } => grad.iter().zip(&weights).map(|(g, w)| w * g).collect(),
            };
            let decrement: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            if !(decrement > 1e-10) {
                break;
            }
            let mut step = 1.0f64;
            for (&xk, &dk) in x.iter().zip(&dir) {
                if dk < 0.0 {
                    step = step.min(0.99 * xk / -dk);
                }
                if let Domain::Box { cap } = spec.domain {
                    if dk > 0.0 {
                        step = step.min(0.99 * (cap - xk) / dk);
                    }
                }
            }
            let mut accepted = None;
            for _ in 0..50 {
                let mut trial: Vec<f64> =
                    x.iter().zip(&dir).map(|(xk, dk)| xk + step * dk).collect();
                if let Domain::Simplex { total } = spec.domain {
                    let s: f64 = trial.iter().sum();
                    trial.iter_mut().for_each(|v| *v *= total / s);
                }
                let trial_eval = evaluate(obj, &trial);
                if let Some(phi_trial) = spec.phi(&trial_eval, &trial, t, scale) {
                    if phi_trial >= phi_now + 0.25 * step * decrement {
                        accepted = Some((trial, trial_eval));
                        break;
                    }
                }
                step *= 0.5;
            }
            newton_steps += 1;
            match accepted {
                Some((nx, ne)) => {
                    x = nx;
                    eval = ne;
                }
                None => break,
            }
        }
        if constraints / t < GAP_TOLERANCE {
            break;
        }
        t *= 10.0;
    }
    BarrierOutcome { x, newton_steps }
}

/// Gradient and diagonal Hessian of the barrier function. The smooth part is
/// differenced numerically, the log terms analytically.
fn barrier_derivatives<S: Separable + ?Sized>(
    obj: &S,
    spec: &BarrierSpec,
    x: &[f64],
    eval: &Evaluation,
    t: f64,
    scale: f64,
) -> (Vec<f64>, Vec<f64>) {
    let weight = t / scale;
    let mut grad = Vec::with_capacity(x.len());
    let mut hess = Vec::with_capacity(x.len());
    for (k, &xk) in x.iter().enumerate() {
        let h1 = GRADIENT_STEP * xk;
        let h2 = CURVATURE_STEP * xk;
        let at = |v: f64| obj.contributions(k, v);
        let (base, up1, dn1, up2, dn2) =
            (at(xk), at(xk + h1), at(xk - h1), at(xk + h2), at(xk - h2));
        let sum = |c: &[(usize, f64)]| c.iter().map(|(_, v)| v).sum::<f64>();
        let d1 = (sum(&up1) - sum(&dn1)) / (2.0 * h1);
        let d2 = (sum(&up2) - 2.0 * sum(&base) + sum(&dn2)) / (h2 * h2);
        let mut g = weight * (d1 - spec.price) + 1.0 / xk;
        let mut h = weight * d2 - 1.0 / (xk * xk);
        if let Domain::Box { cap } = spec.domain {
            g -= 1.0 / (cap - xk);
            h -= 1.0 / ((cap - xk) * (cap - xk));
        }
        if spec.floor > 0.0 {
            for (i, &(group, v0)) in base.iter().enumerate() {
                let slack = eval.groups[group] - spec.floor;
                let dg = (up1[i].1 - dn1[i].1) / (2.0 * h1);
                let d2g = (up2[i].1 - 2.0 * v0 + dn2[i].1) / (h2 * h2);
                g += dg / slack;
                h += d2g / slack - dg * dg / (slack * slack);
            }
        }
        grad.push(g);
        hess.push(h);
    }
    (grad, hess)
}

/// Total secrecy rate of the occupied SC pairs as a function of their budgets.
struct RateObjective<'a> {
    view: SystemView<'a>,
    matching: &'a Matching,
    units: Vec<usize>,
    members: Vec<Vec<usize>>,
    group_of: Vec<usize>,
    groups: usize,
}

impl<'a> RateObjective<'a> {
    fn new(view: SystemView<'a>, matching: &'a Matching) -> Self {
        let units = matching.occupied_units();
        let members = units
            .iter()
            .map(|&u| matching.pairs_on(u).iter().copied().collect())
            .collect();
        // every pair is its own group, matched or not
        let group_of = (0..matching.pair_count()).collect();
        Self {
            view,
            matching,
            units,
            members,
            group_of,
            groups: matching.pair_count(),
        }
    }

    /// Spread per-occupied-unit values over all SC pairs.
    fn full_budgets(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.matching.unit_count()];
        for (&u, &v) in self.units.iter().zip(x) {
            out[u] = v;
        }
        out
    }
}

impl Separable for RateObjective<'_> {
    fn dims(&self) -> usize {
        self.units.len()
    }

    fn groups(&self) -> usize {
        self.groups
    }

    fn contributions(&self, k: usize, x: f64) -> Vec<(usize, f64)> {
        let members = &self.members[k];
        self.view
            .rates_for(self.matching, self.units[k], members, x)
            .into_iter()
            .zip(members)
            .map(|(r, &m)| (self.group_of[m], r.r_sec))
            .collect()
    }
}

/// Upper bound on each pair's secrecy rate: every SC pair independently at
/// its best sampled budget.
fn rate_ceiling(obj: &RateObjective<'_>, domain: Domain) -> Vec<f64> {
    const SAMPLES: usize = 64;
    let mut best = vec![0.0f64; obj.groups()];
    for k in 0..obj.dims() {
        let mut unit_best = vec![0.0f64; obj.groups()];
        for i in 0..=SAMPLES {
            let x = domain.reach() * i as f64 / SAMPLES as f64;
            for (g, v) in obj.contributions(k, x) {
                unit_best[g] = unit_best[g].max(v);
            }
        }
        for (b, u) in best.iter_mut().zip(unit_best) {
            *b += u;
        }
    }
    best
}

fn check_floor(obj: &RateObjective<'_>, domain: Domain, floor: f64) -> Result<()> {
    if floor <= 0.0 {
        return Ok(());
    }
    let ceiling = rate_ceiling(obj, domain);
    if let Some((pair, &best)) = ceiling
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < floor)
        .min_by(|a, b| a.1.total_cmp(b.1))
    {
        return Err(Error::RateInfeasible {
            pair,
            best_rate: best,
            rate_min: floor,
        });
    }
    Ok(())
}

/// Solve max R_sec(x) − u·(P_c + Σx) starting near `start`; keeps whichever of
/// the barrier result and the start scores higher.
fn inner_from(obj: &RateObjective<'_>, spec: &BarrierSpec, start: &[f64]) -> Vec<f64> {
    if obj.dims() == 1 {
        if let Domain::Simplex { total } = spec.domain {
            return vec![total];
        }
    }
    let x0 = spec.domain.interior(start);
    let out = barrier_maximize(obj, spec, &x0).x;
    let score = |x: &[f64]| {
        let e = evaluate(obj, x);
        spec.floors_hold(&e).then(|| spec.objective(&e, x))
    };
    match (score(&out), score(start)) {
        (Some(a), Some(b)) if b > a => start.to_vec(),
        (None, Some(_)) => start.to_vec(),
        _ => out,
    }
}

/// One inner solve at level `u` from the equal split.
pub fn inner_solve(
    matching: &Matching,
    ch: &ChannelState,
    u: f64,
    cfg: &SystemConfig,
) -> Result<PowerAllocation> {
    if !(u >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "parametric level u = {u} must be ≥ 0"
        )));
    }
    matching.check()?;
    let view = SystemView::new(ch, cfg);
    let obj = RateObjective::new(view, matching);
    if obj.dims() == 0 {
        return PowerAllocation::from_budgets(
            matching,
            ch,
            cfg,
            &vec![0.0; matching.unit_count()],
            u,
        );
    }
    let domain = Domain::for_mode(cfg.power_mode, cfg);
    check_floor(&obj, domain, cfg.rate_min)?;
    let spec = BarrierSpec {
        domain,
        price: u,
        floor: cfg.rate_min,
    };
    let x = inner_from(&obj, &spec, &domain.equal(obj.dims()));
    PowerAllocation::from_budgets(matching, ch, cfg, &obj.full_budgets(&x), u)
}

/// Dinkelbach power allocation under the configured budget mode.
pub fn dinkelbach_allocate(
    matching: &Matching,
    ch: &ChannelState,
    cfg: &SystemConfig,
) -> Result<(PowerAllocation, SolveReport)> {
    solve_mode(matching, ch, cfg, cfg.power_mode)
}

/// Dinkelbach power allocation with each SC pair capped at P_s / (SC pairs)
/// and no total-budget equality.
pub fn per_sc_cap_mode(
    matching: &Matching,
    ch: &ChannelState,
    cfg: &SystemConfig,
) -> Result<(PowerAllocation, SolveReport)> {
    solve_mode(matching, ch, cfg, PowerMode::PerScCap)
}

fn solve_mode(
    matching: &Matching,
    ch: &ChannelState,
    cfg: &SystemConfig,
    mode: PowerMode,
) -> Result<(PowerAllocation, SolveReport)> {
    matching.check()?;
    let cfg = SystemConfig {
        power_mode: mode,
        ..cfg.clone()
    };
    let cfg = &cfg;
    let view = SystemView::new(ch, cfg);
    let obj = RateObjective::new(view, matching);
    if obj.dims() == 0 {
        let alloc = PowerAllocation::from_budgets(
            matching,
            ch,
            cfg,
            &vec![0.0; matching.unit_count()],
            0.0,
        )?;
        let report = SolveReport {
            iterations: 0,
            converged: true,
            residual: 0.0,
            ee_trajectory: vec![0.0],
            fallback: false,
        };
        return Ok((alloc, report));
    }
    let domain = Domain::for_mode(mode, cfg);
    let floor = cfg.rate_min;
    check_floor(&obj, domain, floor)?;

    let ratio = |x: &[f64]| {
        let e = evaluate(&obj, x);
        let p = cfg.circuit_power + x.iter().sum::<f64>();
        (e, p)
    };

    let mut x = domain.equal(obj.dims());
    let mut fallback = false;
    if floor > 0.0 && !ratio(&x).0.groups.iter().all(|&g| g > floor) {
        // phase 1: the floor-free rate maximizer as a starting point
        let free = BarrierSpec {
            domain,
            price: 0.0,
            floor: 0.0,
        };
        let candidate = inner_from(&obj, &free, &x);
        if ratio(&candidate).0.groups.iter().all(|&g| g > floor) {
            x = candidate;
        } else {
            fallback = true;
        }
    }

    let (e0, p0) = ratio(&x);
    let mut u = e0.total / p0;
    let mut report = SolveReport {
        iterations: 0,
        converged: false,
        residual: 0.0,
        ee_trajectory: vec![u],
        fallback,
    };
    if fallback {
        let alloc = PowerAllocation::from_budgets(matching, ch, cfg, &obj.full_budgets(&x), u)?;
        return Ok((alloc, report));
    }

    while report.iterations < cfg.max_iterations {
        report.iterations += 1;
        let spec = BarrierSpec {
            domain,
            price: u,
            floor,
        };
        let candidate = inner_from(&obj, &spec, &x);
        let (ec, pc) = ratio(&candidate);
        let f = ec.total - u * pc;
        // a non-improving inner result keeps the current point, where F = 0
        if f > 0.0 {
            x = candidate;
        }
        let (e, p) = ratio(&x);
        report.residual = (e.total - u * p).abs();
        u = e.total / p;
        report.ee_trajectory.push(u);
        if report.residual <= cfg.epsilon * e.total.abs() {
            report.converged = true;
            break;
        }
    }
    let alloc = PowerAllocation::from_budgets(matching, ch, cfg, &obj.full_budgets(&x), u)?;
    Ok((alloc, report))
}

/// Largest number of occupied SC pairs [`grid_oracle`] accepts.
pub const GRID_MAX_DIMS: usize = 4;

/// Brute-force the budget problem on a lattice with `grid_points` steps per
/// dimension (levels 0, 1/g, ..., 1 of the domain's reach). Lattices with `g`
/// dividing `g'` are nested. Returns the best feasible point and its EE.
pub fn grid_oracle(
    matching: &Matching,
    ch: &ChannelState,
    cfg: &SystemConfig,
    grid_points: usize,
) -> Result<(PowerAllocation, f64)> {
    matching.check()?;
    if grid_points == 0 {
        return Err(Error::InvalidConfig("grid needs at least one step".into()));
    }
    let view = SystemView::new(ch, cfg);
    let obj = RateObjective::new(view, matching);
    let dims = obj.dims();
    if dims > GRID_MAX_DIMS {
        return Err(Error::TooLarge(format!(
            "{dims} occupied SC pairs, grid oracle handles at most {GRID_MAX_DIMS}"
        )));
    }
    if dims == 0 {
        let alloc = PowerAllocation::from_budgets(
            matching,
            ch,
            cfg,
            &vec![0.0; matching.unit_count()],
            0.0,
        )?;
        return Ok((alloc, 0.0));
    }
    let domain = Domain::for_mode(cfg.power_mode, cfg);
    let g = grid_points;
    let level = |i: usize| domain.reach() * i as f64 / g as f64;
    // cached contributions per (dimension, level)
    let table: Vec<Vec<Vec<(usize, f64)>>> = (0..dims)
        .map(|k| (0..=g).map(|i| obj.contributions(k, level(i))).collect())
        .collect();

    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut best_rates = vec![f64::NEG_INFINITY; obj.groups()];
    let mut idx = vec![0usize; dims];
    let mut group_sum = vec![0.0; obj.groups()];
    loop {
        let feasible_sum = match domain {
            Domain::Simplex { .. } => idx.iter().sum::<usize>() == g,
            Domain::Box { .. } => true,
        };
        if feasible_sum {
            group_sum.iter_mut().for_each(|v| *v = 0.0);
            let mut total = 0.0;
            let mut power = cfg.circuit_power;
            for (k, &i) in idx.iter().enumerate() {
                for &(grp, v) in &table[k][i] {
                    group_sum[grp] += v;
                    total += v;
                }
                power += level(i);
            }
            for (b, &s) in best_rates.iter_mut().zip(&group_sum) {
                *b = b.max(s);
            }
            let ok = cfg.rate_min <= 0.0 || group_sum.iter().all(|&s| s >= cfg.rate_min);
            let ee = total / power;
            if ok && best.as_ref().is_none_or(|(_, b)| ee > *b) {
                best = Some((idx.clone(), ee));
            }
        }
        // odometer over the lattice, last dimension fastest
        let mut k = dims;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if idx[k] < g {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    match best {
        Some((idx, ee)) => {
            let x: Vec<f64> = idx.iter().map(|&i| level(i)).collect();
            let alloc =
                PowerAllocation::from_budgets(matching, ch, cfg, &obj.full_budgets(&x), ee)?;
            Ok((alloc, ee))
        }
        None => {
            let (pair, &best_rate) = best_rates
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .expect("at least one pair");
            Err(Error::RateInfeasible {
                pair,
                best_rate,
                rate_min: cfg.rate_min,
            })
        }
    }
}

/// Central-difference gradient of the total secrecy rate with respect to each
/// SC pair's budget; zero for empty SC pairs.
pub fn secrecy_gradient(
    matching: &Matching,
    ch: &ChannelState,
    cfg: &SystemConfig,
    budgets: &[f64],
    rel_step: f64,
) -> Vec<f64> {
    let view = SystemView::new(ch, cfg);
    (0..matching.unit_count())
        .map(|u| {
            if matching.pairs_on(u).is_empty() {
                return 0.0;
            }
            let h = rel_step * budgets[u];
            (view.unit_secrecy(matching, u, budgets[u] + h)
                - view.unit_secrecy(matching, u, budgets[u] - h))
                / (2.0 * h)
        })
        .collect()
}
