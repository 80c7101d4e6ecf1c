//! Shared per-seed driver: run, save, reload and check.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Value};
use vans_core::circuit::{read_circuit, write_circuit, BlockTemplate, Circuit};
use vans_core::problems::{AutoencoderVariant, Problem};
use vans_core::simulator::{circuit_to_unitary, expectation, StateVector, MAX_DENSE_QUBITS};
use vans_core::vans::{run_vans_observed, trajectory_csv, TrajectoryRecord, VansResult};

use crate::config::{resolve_seeds, RunConfig};
use crate::error::CliError;
use crate::output::{create_run_dir, default_run_dir, num, trajectory_dat, write_file, write_json};
use crate::RunArgs;

pub struct RunContext {
    pub command: &'static str,
    pub config: RunConfig,
    pub seeds: Vec<u64>,
    pub dir: PathBuf,
    pub verify: bool,
    pub gnuplot: bool,
}

impl RunContext {
    /// Merges the config file, `overrides` and the shared flags. Nothing is
    /// written until [`RunContext::create`].
    pub fn load(
        command: &'static str,
        args: &RunArgs,
        overrides: impl FnOnce(&mut RunConfig),
    ) -> Result<Self, CliError> {
        let mut config = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        overrides(&mut config);
        if let Some(m) = args.max_iters {
            config.vans.max_outer_iters = m;
        }
        let env = std::env::var("VANS_SEED").ok();
        let seeds = resolve_seeds(args.seed.as_deref(), env.as_deref(), &config.output.seeds)?;
        config.output.seeds = seeds.clone();
        let dir = args
            .out
            .clone()
            .or_else(|| config.output.dir.clone())
            .unwrap_or_else(|| default_run_dir(command));
        config.output.dir = Some(dir.clone());
        Ok(RunContext {
            command,
            config,
            seeds,
            dir,
            verify: args.verify,
            gnuplot: args.emit_gnuplot,
        })
    }

    /// Creates the run directory and records the effective configuration.
    pub fn create(&self) -> Result<(), CliError> {
        create_run_dir(&self.dir)?;
        write_file(&self.dir.join("config.toml"), &self.config.to_toml())
    }

    pub fn seed_dir(&self, seed: u64) -> PathBuf {
        self.dir.join(format!("seed-{seed}"))
    }

    /// Top-level summary with the configuration echoed back.
    pub fn write_summary(&self, extra: Value, seeds: Vec<Value>) -> Result<(), CliError> {
        let config = serde_json::to_value(&self.config).expect("config serializes");
        let mut summary = json!({
            "command": self.command,
            "config": config,
            "seeds": seeds,
        });
        if let (Value::Object(map), Value::Object(more)) = (&mut summary, extra) {
            map.extend(more);
        }
        write_json(&self.dir.join("summary.json"), &summary)
    }
}

pub struct SeedRun {
    pub seed: u64,
    pub dir: PathBuf,
    pub result: VansResult,
    /// Cost of the saved circuit through the dense simulator, when checked.
    pub dense_cost: Option<f64>,
    pub wall_time_s: f64,
}

impl SeedRun {
    /// Fields every subcommand reports per seed.
    pub fn summary(&self) -> Value {
        let r = &self.result;
        json!({
            "seed": self.seed,
            "best_cost": num(r.best_cost),
            "initial_cost": num(r.initial_cost),
            "n_cnots": r.best_circuit.count_cnots(),
            "n_two_qubit_gates": r.best_circuit.count_two_qubit_gates(),
            "n_params": r.best_circuit.count_params(),
            "n_gates": r.best_circuit.len(),
            "outer_iters": r.trajectory.len(),
            "accepted_moves": r.trajectory.iter().filter(|t| t.accepted).count(),
            "dense_cost": self.dense_cost.map(num),
            "wall_time_s": num(self.wall_time_s),
        })
    }
}

/// Runs one seed and writes `trajectory.csv` and `best_circuit.txt` into
/// `seed-<k>/`. The saved circuit is read back and its cost recomputed; a
/// mismatch is a verification failure.
pub fn run_seed(
    ctx: &RunContext,
    seed: u64,
    problem: &Problem,
    initial: &Circuit,
    dictionary: &[BlockTemplate],
    observer: impl FnMut(&TrajectoryRecord, &Circuit),
) -> Result<SeedRun, CliError> {
    let config = ctx.config.vans_config(seed, dictionary)?;
    let start = std::time::Instant::now();
    let result = run_vans_observed(problem, initial, &config, observer)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    if !result.best_cost.is_finite() {
        return Err(CliError::Divergence(format!("seed {seed}: best cost {}", result.best_cost)));
    }
    let dir = ctx.seed_dir(seed);
    std::fs::create_dir(&dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    write_file(&dir.join("trajectory.csv"), &trajectory_csv(&result.trajectory))?;
    let circuit_path = dir.join("best_circuit.txt");
    write_file(&circuit_path, &write_circuit(&result.best_circuit))?;
    if ctx.gnuplot {
        write_file(
            &dir.join("trajectory.dat"),
            &trajectory_dat(result.initial_cost, &result.trajectory),
        )?;
    }

    let saved = reload(&circuit_path)?;
    let recomputed = problem.cost(&saved)?;
    check_close("reloaded circuit", recomputed, result.best_cost)?;
    let dense_cost = if ctx.verify {
        let d = dense_cost(problem, &saved)?;
        if let Some(d) = d {
            check_close("dense simulation", d, result.best_cost)?;
        }
        d
    } else {
        None
    };
    Ok(SeedRun {
        seed,
        dir,
        result,
        dense_cost,
        wall_time_s,
    })
}

fn reload(path: &Path) -> Result<Circuit, CliError> {
    read_circuit(path).map_err(|e| CliError::Verification(format!("{}: {e}", path.display())))
}

fn check_close(what: &str, got: f64, want: f64) -> Result<(), CliError> {
    let tol = 1e-9 * want.abs().max(1.0);
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{what} gives cost {got:.16e}, the search reported {want:.16e}"
        )))
    }
}

fn apply_dense(u: &DMatrix<Complex64>, state: &StateVector) -> Result<StateVector, CliError> {
    let v = u * DVector::from_column_slice(state.amplitudes());
    Ok(StateVector::from_amplitudes(v.iter().copied().collect())?)
}

/// Cost of `circuit` evaluated through its full unitary. `None` above the
/// dense size limit.
pub fn dense_cost(problem: &Problem, circuit: &Circuit) -> Result<Option<f64>, CliError> {
    if circuit.n_qubits() > MAX_DENSE_QUBITS {
        eprintln!(
            "note: dense check skipped above {MAX_DENSE_QUBITS} qubits ({} here)",
            circuit.n_qubits()
        );
        return Ok(None);
    }
    let u = circuit_to_unitary(circuit)?;
    let cost = match problem {
        Problem::Vqe(p) => {
            let out = apply_dense(&u, &StateVector::zero(circuit.n_qubits()))?;
            expectation(&out, p.hamiltonian())?
        }
        Problem::Autoencoder(p) => {
            let n_trash = p.n_trash();
            let mask = (1usize << n_trash) - 1;
            let weight = |b: usize| match p.variant() {
                AutoencoderVariant::Global => f64::from(u8::from(b & mask != 0)),
                AutoencoderVariant::Local => (b & mask).count_ones() as f64 / n_trash as f64,
            };
            let mut total = 0.0;
            for (w, s) in p.weights().iter().zip(p.states()) {
                let out = apply_dense(&u, s)?;
                let c: f64 = out
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(b, a)| a.norm_sqr() * weight(b))
                    .sum();
                total += w * c;
            }
            total
        }
        Problem::Compilation(p) => {
            let mut total = 0.0;
            for (input, target) in p.inputs().iter().zip(p.targets()) {
                let out = apply_dense(&u, input)?;
                total += out
                    .amplitudes()
                    .iter()
                    .zip(target.amplitudes())
                    .map(|(a, t)| (a - t).norm_sqr())
                    .sum::<f64>();
            }
            total
        }
    };
    Ok(Some(cost))
}
