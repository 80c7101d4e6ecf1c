//! The structural search loop.
//!
//! Each outer iteration grows the incumbent circuit by an identity-like
//! block, simplifies it, re-optimizes its angles with Adam and accepts the
//! proposal with the Metropolis rule
//! `P = min(1, exp(-β ΔC / |C0|))`, where `C0` is the cost of the optimized
//! initial circuit. The baseline for `ΔC` is the last accepted cost; the
//! best accepted state is what the search returns.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::insertion::{insert, InsertionPolicy};
use crate::problems::Problem;
use crate::simplification::{simplify, simplify_structural_with, RewriteReport, SimplifyConfig};
use crate::simulator::cost_and_gradient;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub max_steps: usize,
    /// Relative cost change counted as stalled.
    pub convergence_tol: f64,
    /// Consecutive stalled steps before stopping.
    pub patience: usize,
    /// Times a stall restarts the moment estimates instead of stopping.
    pub restarts: usize,
    /// Learning-rate factor applied at each restart.
    pub restart_lr_factor: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 0.01,
            max_steps: 2000,
            convergence_tol: 1e-7,
            patience: 25,
            restarts: 3,
            restart_lr_factor: 1.0,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::Config("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    pub cost: f64,
    pub steps: usize,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// Adam on the circuit angles, starting from the circuit's current values.
/// Returns the best parameters seen.
pub fn optimize_continuous(circuit: &Circuit, problem: &Problem, config: &AdamConfig) -> Result<OptimizeResult> {
    config.validate()?;
    let mut work = circuit.clone();
    let mut params = circuit.params().to_vec();
    if params.is_empty() {
        return Ok(OptimizeResult {
            cost: finite(problem.cost(circuit)?)?,
            params,
            steps: 0,
        });
    }
    let mut m = vec![0.0; params.len()];
    let mut v = vec![0.0; params.len()];
    let mut best = (f64::INFINITY, params.clone());
    let mut prev_cost: Option<f64> = None;
    let mut stalled = 0;
    let mut steps = 0;
    let mut lr = config.learning_rate;
    let mut restarts_left = config.restarts;
    let mut t = 0;
    while steps < config.max_steps {
        work.set_params(&params)?;
        let (cost, grad) = cost_and_gradient(&work, problem)?;
        finite(cost)?;
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence("non-finite gradient".into()));
        }
        if cost < best.0 {
            best = (cost, params.clone());
        }
        if let Some(prev) = prev_cost {
            if (cost - prev).abs() <= config.convergence_tol * cost.abs() {
                stalled += 1;
                if stalled >= config.patience {
                    if restarts_left == 0 {
                        break;
                    }
                    restarts_left -= 1;
                    lr *= config.restart_lr_factor;
                    stalled = 0;
                    t = 0;
                    m.iter_mut().for_each(|x| *x = 0.0);
                    v.iter_mut().for_each(|x| *x = 0.0);
                }
            } else {
                stalled = 0;
            }
        }
        prev_cost = Some(cost);
        steps += 1;
        t += 1;
        let (c1, c2) = (1.0 - BETA1.powi(t), 1.0 - BETA2.powi(t));
        for k in 0..params.len() {
            m[k] = BETA1 * m[k] + (1.0 - BETA1) * grad[k];
            v[k] = BETA2 * v[k] + (1.0 - BETA2) * grad[k] * grad[k];
            params[k] -= lr * (m[k] / c1) / ((v[k] / c2).sqrt() + EPS);
        }
    }
    if steps == config.max_steps {
        work.set_params(&params)?;
        let cost = finite(problem.cost(&work)?)?;
        if cost < best.0 {
            best = (cost, params);
        }
    }
    Ok(OptimizeResult {
        params: best.1,
        cost: best.0,
        steps,
    })
}

fn finite(cost: f64) -> Result<f64> {
    if cost.is_finite() {
        Ok(cost)
    } else {
        Err(Error::Divergence(format!("cost became {cost}")))
    }
}

/// Metropolis rule: downhill and equal moves pass, uphill moves pass with
/// probability `exp(-β (new − old) / |C0|)`.
pub fn metropolis_accept(new_cost: f64, old_cost: f64, initial_cost: f64, beta: f64, rng: &mut impl Rng) -> bool {
    let delta = new_cost - old_cost;
    if delta <= 0.0 {
        return true;
    }
    let scale = initial_cost.abs().max(1e-12);
    rng.random::<f64>() < (-beta * delta / scale).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostAwareStage {
    /// Rule 6 only on the re-optimized proposal.
    #[default]
    PostOptimization,
    /// Rule 6 before optimization as well.
    Both,
    Never,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VansConfig {
    pub max_outer_iters: usize,
    pub beta: f64,
    /// Whether a proposal with exactly the incumbent cost is accepted.
    pub accept_equal: bool,
    pub insertion: InsertionPolicy,
    pub insertions_per_iter: usize,
    pub simplification: SimplifyConfig,
    pub cost_aware_stage: CostAwareStage,
    pub optimizer: AdamConfig,
    /// Draw the initial angles uniformly from `(-π, π)`.
    pub randomize_initial: bool,
    pub seed: u64,
}

impl Default for VansConfig {
    fn default() -> Self {
        VansConfig {
            max_outer_iters: 50,
            beta: 500.0,
            accept_equal: true,
            insertion: InsertionPolicy::default(),
            insertions_per_iter: 1,
            simplification: SimplifyConfig::default(),
            cost_aware_stage: CostAwareStage::PostOptimization,
            optimizer: AdamConfig::default(),
            randomize_initial: true,
            seed: 0,
        }
    }
}

impl VansConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::Config("beta must be positive".into()));
        }
        if self.insertions_per_iter == 0 {
            return Err(Error::Config("insertions_per_iter must be at least 1".into()));
        }
        if !(self.simplification.threshold >= 0.0) {
            return Err(Error::Config("simplification threshold must be non-negative".into()));
        }
        self.insertion.validate()?;
        self.optimizer.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Insert,
    SimplifyOnly,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Insert => "insert",
            MoveKind::SimplifyOnly => "simplify-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub outer_iter: usize,
    pub cost: f64,
    pub n_cnots: usize,
    pub n_params: usize,
    pub accepted: bool,
    pub move_kind: MoveKind,
}

#[derive(Debug, Clone)]
pub struct VansResult {
    /// Best accepted circuit, angles included.
    pub best_circuit: Circuit,
    pub best_params: Vec<f64>,
    pub best_cost: f64,
    /// Cost of the optimized initial circuit.
    pub initial_cost: f64,
    pub trajectory: Vec<TrajectoryRecord>,
}

pub fn run_vans(problem: &Problem, initial: &Circuit, config: &VansConfig) -> Result<VansResult> {
    run_vans_observed(problem, initial, config, |_, _| {})
}

/// As [`run_vans`], calling `observer` with each record and the proposal
/// it describes.
pub fn run_vans_observed(
    problem: &Problem,
    initial: &Circuit,
    config: &VansConfig,
    mut observer: impl FnMut(&TrajectoryRecord, &Circuit),
) -> Result<VansResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut start = initial.clone();
    if config.randomize_initial {
        let angles: Vec<f64> = (0..start.count_params())
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        start.set_params(&angles)?;
    }
    let opt = optimize_continuous(&start, problem, &config.optimizer)?;
    start.set_params(&opt.params)?;
    let initial_cost = opt.cost;
    let mut incumbent = (start.clone(), opt.cost);
    let mut best = (start, opt.cost);
    let mut trajectory = Vec::with_capacity(config.max_outer_iters);

    for outer_iter in 1..=config.max_outer_iters {
        let proposal = match propose(problem, &incumbent.0, config, &mut rng) {
            Ok(p) => p,
            Err(e @ Error::Divergence(_)) => return Err(e),
            Err(_) => continue,
        };
        let (circuit, cost) = proposal;
        let accepted = if cost == incumbent.1 && !config.accept_equal {
            false
        } else {
            metropolis_accept(cost, incumbent.1, initial_cost, config.beta, &mut rng)
        };
        let record = TrajectoryRecord {
            outer_iter,
            cost,
            n_cnots: circuit.count_cnots(),
            n_params: circuit.count_params(),
            accepted,
            move_kind: if circuit.len() > incumbent.0.len() {
                MoveKind::Insert
            } else {
                MoveKind::SimplifyOnly
            },
        };
        observer(&record, &circuit);
        trajectory.push(record);
        if accepted {
            if cost < best.1 {
                best = (circuit.clone(), cost);
            }
            incumbent = (circuit, cost);
        }
    }
    Ok(VansResult {
        best_params: best.0.params().to_vec(),
        best_circuit: best.0,
        best_cost: best.1,
        initial_cost,
        trajectory,
    })
}

fn propose(
    problem: &Problem,
    incumbent: &Circuit,
    config: &VansConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Circuit, f64)> {
    let zero_input = problem.zero_input();
    let mut circuit = incumbent.clone();
    for _ in 0..config.insertions_per_iter {
        circuit = insert(&circuit, &config.insertion, rng)?;
    }
    let circuit = match config.cost_aware_stage {
        CostAwareStage::Both => simplify(&circuit, problem, &config.simplification)?.0,
        _ => simplify_structural_with(&circuit, zero_input)?.0,
    };
    let (mut circuit, mut cost) = optimized(circuit, problem, &config.optimizer)?;
    if config.cost_aware_stage != CostAwareStage::Never && config.simplification.cost_aware {
        let (pruned, report) = simplify(&circuit, problem, &config.simplification)?;
        if changed(&report, &pruned, &circuit) {
            (circuit, cost) = optimized(pruned, problem, &config.optimizer)?;
        }
    } else {
        let (pruned, report) = simplify_structural_with(&circuit, zero_input)?;
        if changed(&report, &pruned, &circuit) {
            (circuit, cost) = optimized(pruned, problem, &config.optimizer)?;
        }
    }
    Ok((circuit, cost))
}

fn changed(report: &RewriteReport, after: &Circuit, before: &Circuit) -> bool {
    !report.is_noop() || !after.same_structure(before)
}

fn optimized(mut circuit: Circuit, problem: &Problem, config: &AdamConfig) -> Result<(Circuit, f64)> {
    let opt = optimize_continuous(&circuit, problem, config)?;
    circuit.set_params(&opt.params)?;
    Ok((circuit, opt.cost))
}

/// Trajectory as CSV with a header row.
pub fn trajectory_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::from("outer_iter,cost,n_cnots,n_params,accepted,move_kind\n");
    for r in records {
        writeln!(
            out,
            "{},{:.16e},{},{},{},{}",
            r.outer_iter,
            r.cost,
            r.n_cnots,
            r.n_params,
            r.accepted,
            r.move_kind.as_str()
        )
        .expect("writing to a String cannot fail");
    }
    out
}
