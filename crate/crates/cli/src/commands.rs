use std::path::Path;

use serde_json::{json, Value};
use vans_core::circuit::{build_hea, build_product_ansatz, read_circuit, write_circuit, Circuit, Gate};
use vans_core::insertion::InsertionPolicy;
use vans_core::problems::{
    diagnostic_unitary_distance, encode_decode_fidelity, exact_ground, load_pauli_sum, qft_unitary,
    read_states, read_unitary, tfim_hamiltonian, training_set_for_unitary, xxz_hamiltonian,
    AutoencoderVariant, Problem,
};
use vans_core::simplification::{simplify_structural_with, SimplifyConfig};
use vans_core::simulator::{circuit_to_unitary, expectation, PauliSum, StateVector, MAX_DENSE_QUBITS};

use crate::config::{AutoencoderSection, InitialKind, ProblemKind, ProblemSection, RunConfig, VariantName};
use crate::error::CliError;
use crate::output::{create_run_dir, num, table_csv, table_dat, write_file, write_json};
use crate::run::{run_seed, RunContext};
use crate::{AutoencodeArgs, BaselineArgs, CompileArgs, ProblemArgs, SimplifyArgs, VqeArgs};

fn apply_problem_args(c: &mut RunConfig, a: &ProblemArgs) {
    let p = &mut c.problem;
    if let Some(k) = a.problem {
        p.kind = k.into();
    }
    if let Some(n) = a.n {
        p.n = n;
    }
    if let Some(j) = a.j {
        p.j = j;
    }
    if let Some(g) = a.g {
        p.g = g;
    }
    if let Some(d) = a.delta {
        p.delta = d;
    }
    if let Some(f) = &a.file {
        p.file = Some(f.clone());
    }
}

/// The Hamiltonian described by the problem section and a short label.
fn hamiltonian(p: &ProblemSection) -> Result<(PauliSum, String), CliError> {
    let chain = |name: &str| {
        if p.n < 2 {
            Err(CliError::Config(format!("the {name} chain needs at least two sites")))
        } else {
            Ok(())
        }
    };
    match p.kind {
        ProblemKind::Tfim => {
            chain("TFIM")?;
            Ok((tfim_hamiltonian(p.n, p.j, p.g), format!("tfim n={} J={} g={}", p.n, p.j, p.g)))
        }
        ProblemKind::Xxz => {
            chain("XXZ")?;
            Ok((
                xxz_hamiltonian(p.n, p.delta, p.g),
                format!("xxz n={} delta={} g={}", p.n, p.delta, p.g),
            ))
        }
        ProblemKind::PauliFile => {
            let path = p
                .file
                .as_ref()
                .ok_or_else(|| CliError::Config("problem.kind = \"pauli-file\" needs problem.file".into()))?;
            let h = load_pauli_sum(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Ok((h, path.display().to_string()))
        }
    }
}

fn ground_energy(h: &PauliSum) -> Result<Option<f64>, CliError> {
    if h.n_qubits() > MAX_DENSE_QUBITS {
        return Ok(None);
    }
    Ok(Some(exact_ground(h)?.ground_energy))
}

fn relative_error(cost: f64, e0: Option<f64>) -> Option<f64> {
    e0.map(|e| (cost - e).abs() / e.abs().max(1e-12))
}

pub fn vqe(a: &VqeArgs) -> Result<(), CliError> {
    let ctx = RunContext::load("vqe", &a.run, |c| apply_problem_args(c, &a.problem))?;
    let (h, label) = hamiltonian(&ctx.config.problem)?;
    let n = h.n_qubits();
    let exact = ground_energy(&h)?;
    let problem = Problem::vqe(h);
    let initial = ctx.config.initial_circuit(n)?;
    let dictionary = InsertionPolicy::default().dictionary;
    ctx.config.vans_config(0, &dictionary)?;
    ctx.create()?;

    match exact {
        Some(e) => println!("vqe {label}: exact ground energy {e:.12}"),
        None => println!("vqe {label}"),
    }
    let mut seeds = Vec::new();
    for &seed in &ctx.seeds {
        let run = run_seed(&ctx, seed, &problem, &initial, &dictionary, |_, _| {})?;
        let r = &run.result;
        let rel = relative_error(r.best_cost, exact);
        let mut s = run.summary();
        s["relative_error"] = rel.map_or(Value::Null, num);
        write_json(&run.dir.join("summary.json"), &s)?;
        println!(
            "seed {seed}: energy {:.12}{} cnots {} params {}",
            r.best_cost,
            rel.map(|x| format!(" rel.err {x:.3e}")).unwrap_or_default(),
            r.best_circuit.count_cnots(),
            r.best_circuit.count_params()
        );
        seeds.push(s);
    }
    let best = best_seed(&seeds);
    ctx.write_summary(
        json!({
            "problem": label,
            "n_qubits": n,
            "exact_energy": exact.map(num),
            "best_seed": best,
        }),
        seeds,
    )
}

fn best_seed(seeds: &[Value]) -> Value {
    seeds
        .iter()
        .filter(|s| s["best_cost"].is_f64())
        .min_by(|a, b| a["best_cost"].as_f64().unwrap().total_cmp(&b["best_cost"].as_f64().unwrap()))
        .map_or(Value::Null, |s| s["seed"].clone())
}

/// States from one input: the ground state of a `.pauli` Hamiltonian, or
/// every state in a state file.
fn load_states(path: &Path) -> Result<Vec<StateVector>, CliError> {
    let wrap = |e: vans_core::Error| CliError::Config(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "pauli") {
        let h = load_pauli_sum(path).map_err(wrap)?;
        Ok(vec![exact_ground(&h).map_err(wrap)?.ground_state])
    } else {
        read_states(path).map_err(wrap)
    }
}

fn load_all(paths: &[std::path::PathBuf]) -> Result<Vec<StateVector>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(load_states(p)?);
    }
    Ok(out)
}

fn fidelity_stats(circuit: &Circuit, states: &[StateVector], n_trash: usize) -> Result<Value, CliError> {
    if states.is_empty() {
        return Ok(Value::Null);
    }
    let f: Vec<f64> = states
        .iter()
        .map(|s| encode_decode_fidelity(circuit, s, n_trash))
        .collect::<Result<_, _>>()?;
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let min = f.iter().copied().fold(f64::INFINITY, f64::min);
    let max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(json!({ "mean": num(mean), "min": num(min), "max": num(max) }))
}

type AutoencoderSetup = (Problem, Option<Problem>, Vec<StateVector>, Vec<StateVector>);

fn autoencoder_problems(s: &AutoencoderSection) -> Result<AutoencoderSetup, CliError> {
    if s.train.is_empty() {
        return Err(CliError::Config("the autoencoder needs at least one training input".into()));
    }
    let variant = match s.variant {
        VariantName::Local => AutoencoderVariant::Local,
        VariantName::Global => AutoencoderVariant::Global,
    };
    let train = load_all(&s.train)?;
    let test = load_all(&s.test)?;
    let problem = Problem::autoencoder_uniform(train.clone(), s.n_trash, variant)?;
    let test_problem = if test.is_empty() {
        None
    } else {
        Some(Problem::autoencoder_uniform(test.clone(), s.n_trash, variant)?)
    };
    Ok((problem, test_problem, train, test))
}

pub fn autoencode(a: &AutoencodeArgs) -> Result<(), CliError> {
    let ctx = RunContext::load("autoencode", &a.run, |c| {
        let s = &mut c.autoencoder;
        if !a.train.is_empty() {
            s.train = a.train.clone();
        }
        if !a.test.is_empty() {
            s.test = a.test.clone();
        }
        if let Some(t) = a.n_trash {
            s.n_trash = t;
        }
        if let Some(v) = a.variant {
            s.variant = v.into();
        }
    })?;
    let s = &ctx.config.autoencoder;
    let (problem, test_problem, train, test) = autoencoder_problems(s)?;
    let n = problem.n_qubits();
    let initial = ctx.config.initial_circuit(n)?;
    let dictionary = InsertionPolicy::default().dictionary;
    ctx.config.vans_config(0, &dictionary)?;
    ctx.create()?;
    println!(
        "autoencode: {} training and {} test states on {n} qubits, {} trash",
        train.len(),
        test.len(),
        s.n_trash
    );

    let mut seeds = Vec::new();
    for &seed in &ctx.seeds {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let run = run_seed(&ctx, seed, &problem, &initial, &dictionary, |rec, circ| {
            if rec.accepted {
                let t = test_problem.as_ref().map_or(f64::NAN, |p| p.cost(circ).unwrap_or(f64::NAN));
                rows.push(vec![rec.outer_iter as f64, rec.cost, t]);
            }
        })?;
        let header = ["outer_iter", "train_cost", "test_cost"];
        write_file(&run.dir.join("test_costs.csv"), &table_csv(&header, &rows))?;
        if ctx.gnuplot {
            write_file(&run.dir.join("test_costs.dat"), &table_dat(&header, &rows))?;
        }
        let best = &run.result.best_circuit;
        let test_cost = test_problem.as_ref().map(|p| p.cost(best)).transpose()?;
        let mut summary = run.summary();
        summary["test_cost"] = test_cost.map_or(Value::Null, num);
        summary["train_fidelity"] = fidelity_stats(best, &train, s.n_trash)?;
        summary["test_fidelity"] = fidelity_stats(best, &test, s.n_trash)?;
        write_json(&run.dir.join("summary.json"), &summary)?;
        println!(
            "seed {seed}: train cost {:.3e}{} cnots {}",
            run.result.best_cost,
            test_cost.map(|c| format!(" test cost {c:.3e}")).unwrap_or_default(),
            best.count_cnots()
        );
        seeds.push(summary);
    }
    ctx.write_summary(json!({ "n_qubits": n, "best_seed": best_seed(&seeds) }), seeds)
}

pub fn compile(a: &CompileArgs) -> Result<(), CliError> {
    let ctx = RunContext::load("compile", &a.run, |c| {
        let s = &mut c.compile;
        if let Some(n) = a.qft {
            s.target = "qft".into();
            s.n = n;
        }
        if let Some(u) = &a.unitary {
            s.target = "file".into();
            s.unitary_file = Some(u.clone());
        }
        if let Some(k) = a.training_size {
            s.training_size = k;
        }
    })?;
    let s = &ctx.config.compile;
    let (target, label) = match s.target.as_str() {
        "qft" => (qft_unitary(s.n)?, format!("qft n={}", s.n)),
        "file" => {
            let path = s
                .unitary_file
                .as_ref()
                .ok_or_else(|| CliError::Config("compile.target = \"file\" needs compile.unitary_file".into()))?;
            let u = read_unitary(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            (u, path.display().to_string())
        }
        other => return Err(CliError::Config(format!("unknown compile target `{other}`"))),
    };
    let n = target.nrows().trailing_zeros() as usize;
    let mut initial = ctx.config.initial_circuit(n)?;
    if ctx.config.initial.kind == InitialKind::Product {
        initial.push(Gate::GlobalPhase, &[0.0])?;
    }
    let dictionary = InsertionPolicy::compilation(n).dictionary;
    ctx.config.vans_config(0, &dictionary)?;
    training_set_for_unitary(&target, s.training_size, 0)?;
    ctx.create()?;
    println!("compile {label}: {} training pairs", s.training_size);

    let mut seeds = Vec::new();
    for &seed in &ctx.seeds {
        let problem = Problem::compilation(training_set_for_unitary(&target, s.training_size, seed)?)?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let run = run_seed(&ctx, seed, &problem, &initial, &dictionary, |rec, circ| {
            rows.push(vec![
                rec.outer_iter as f64,
                f64::from(u8::from(rec.accepted)),
                circ.count_two_qubit_gates() as f64,
                rec.cost,
            ]);
        })?;
        let header = ["outer_iter", "accepted", "n_two_qubit", "cost"];
        write_file(&run.dir.join("two_qubit_gates.csv"), &table_csv(&header, &rows))?;
        if ctx.gnuplot {
            write_file(&run.dir.join("two_qubit_gates.dat"), &table_dat(&header, &rows))?;
        }
        let best = &run.result.best_circuit;
        let distance = diagnostic_unitary_distance(best, &target)?;
        let mut summary = run.summary();
        summary["unitary_distance"] = num(distance);
        write_json(&run.dir.join("summary.json"), &summary)?;
        println!(
            "seed {seed}: training cost {:.3e} unitary distance {distance:.3e} two-qubit gates {}",
            run.result.best_cost,
            best.count_two_qubit_gates()
        );
        seeds.push(summary);
    }
    ctx.write_summary(
        json!({ "target": label, "n_qubits": n, "best_seed": best_seed(&seeds) }),
        seeds,
    )
}

pub fn baseline_hea(a: &BaselineArgs) -> Result<(), CliError> {
    let ctx = RunContext::load("baseline-hea", &a.run, |c| {
        apply_problem_args(c, &a.problem);
        if !a.layers.is_empty() {
            c.baseline.layers = a.layers.clone();
        }
        if a.autoencoder {
            c.baseline.autoencoder = true;
        }
        if !a.train.is_empty() {
            c.autoencoder.train = a.train.clone();
        }
        c.vans.max_outer_iters = 0;
    })?;
    let (problem, label, exact) = if ctx.config.baseline.autoencoder {
        let (p, ..) = autoencoder_problems(&ctx.config.autoencoder)?;
        (p, format!("autoencoder, {} trash", ctx.config.autoencoder.n_trash), None)
    } else {
        let (h, label) = hamiltonian(&ctx.config.problem)?;
        let exact = ground_energy(&h)?;
        (Problem::vqe(h), label, exact)
    };
    let n = problem.n_qubits();
    if n < 2 && ctx.config.baseline.layers.iter().any(|&l| l > 0) {
        return Err(CliError::Config("layered baselines need at least two qubits".into()));
    }
    let dictionary = InsertionPolicy::default().dictionary;
    ctx.config.vans_config(0, &dictionary)?;
    if ctx.config.baseline.layers.is_empty() {
        return Err(CliError::Config("baseline needs at least one layer count".into()));
    }
    ctx.create()?;
    println!("baseline-hea {label}");

    let mut rows = Vec::new();
    let mut seeds = Vec::new();
    for &layers in &ctx.config.baseline.layers {
        let initial = if layers == 0 {
            build_product_ansatz(n)
        } else {
            build_hea(n, layers)
        };
        for &seed in &ctx.seeds {
            // With no outer iterations the search reduces to one optimization
            // of the randomly initialized ansatz.
            let r = ctx.config.vans_config(seed, &dictionary)?;
            let result = vans_core::vans::run_vans(&problem, &initial, &r)?;
            if !result.best_cost.is_finite() {
                return Err(CliError::Divergence(format!("layers {layers}, seed {seed}")));
            }
            let path = ctx.dir.join(format!("layers-{layers}-seed-{seed}.txt"));
            write_file(&path, &write_circuit(&result.best_circuit))?;
            let saved = read_circuit(&path).map_err(|e| CliError::Verification(e.to_string()))?;
            let again = problem.cost(&saved)?;
            if (again - result.best_cost).abs() > 1e-9 * result.best_cost.abs().max(1.0) {
                return Err(CliError::Verification(format!(
                    "{} gives {again:.16e}, expected {:.16e}",
                    path.display(),
                    result.best_cost
                )));
            }
            let rel = relative_error(result.best_cost, exact);
            let shown = if ctx.config.baseline.autoencoder {
                format!("{:.3e}", result.best_cost)
            } else {
                format!("{:.12}", result.best_cost)
            };
            println!(
                "layers {layers} seed {seed}: cost {shown}{}",
                rel.map(|x| format!(" rel.err {x:.3e}")).unwrap_or_default()
            );
            rows.push(vec![
                layers as f64,
                seed as f64,
                result.best_cost,
                rel.unwrap_or(f64::NAN),
                initial.count_cnots() as f64,
                initial.count_params() as f64,
            ]);
            seeds.push(json!({
                "layers": layers,
                "seed": seed,
                "cost": num(result.best_cost),
                "relative_error": rel.map_or(Value::Null, num),
                "n_cnots": initial.count_cnots(),
                "n_params": initial.count_params(),
            }));
        }
    }
    let header = ["layers", "seed", "cost", "relative_error", "n_cnots", "n_params"];
    write_file(&ctx.dir.join("baseline.csv"), &table_csv(&header, &rows))?;
    if ctx.gnuplot {
        write_file(&ctx.dir.join("baseline.dat"), &table_dat(&header, &rows))?;
    }
    ctx.write_summary(
        json!({ "problem": label, "n_qubits": n, "exact_energy": exact.map(num) }),
        seeds,
    )
}

/// `1 − |⟨a|b⟩|²` between the images of `|0…0⟩`.
fn zero_state_infidelity(a: &Circuit, b: &Circuit) -> Result<f64, CliError> {
    let (ua, ub) = (circuit_to_unitary(a)?, circuit_to_unitary(b)?);
    let overlap: num_complex::Complex64 = ua.column(0).iter().zip(ub.column(0).iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(1.0 - overlap.norm_sqr())
}

/// `1 − |tr(A†B)| / 2^n`, zero exactly when the unitaries agree up to a
/// global phase.
fn unitary_mismatch(a: &Circuit, b: &Circuit) -> Result<f64, CliError> {
    let (ua, ub) = (circuit_to_unitary(a)?, circuit_to_unitary(b)?);
    let tr: num_complex::Complex64 = ua.iter().zip(ub.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(1.0 - tr.norm() / ua.nrows() as f64)
}

fn dense_energy(c: &Circuit, h: &PauliSum) -> Result<f64, CliError> {
    let u = circuit_to_unitary(c)?;
    let state = StateVector::from_amplitudes(u.column(0).iter().copied().collect())?;
    Ok(expectation(&state, h)?)
}

pub fn simplify(a: &SimplifyArgs) -> Result<(), CliError> {
    let circuit = read_circuit(&a.circuit).map_err(|e| CliError::Config(format!("{}: {e}", a.circuit.display())))?;
    let n = circuit.n_qubits();
    if a.verify && n > 6 {
        return Err(CliError::Config(format!("--verify supports up to 6 qubits, the circuit has {n}")));
    }
    let hamiltonian = match &a.hamiltonian {
        Some(path) => {
            if a.general_input {
                return Err(CliError::Config(
                    "cost-aware removal needs the all-zeros input; drop --general-input".into(),
                ));
            }
            let h = load_pauli_sum(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if h.n_qubits() != n {
                return Err(CliError::Config(format!(
                    "Hamiltonian has {} qubits, the circuit has {n}",
                    h.n_qubits()
                )));
            }
            Some(h)
        }
        None => None,
    };
    if let Some(dir) = &a.out {
        create_run_dir(dir)?;
    }

    let (out, report, costs) = match &hamiltonian {
        Some(h) => {
            let problem = Problem::vqe(h.clone());
            let config = SimplifyConfig {
                threshold: a.threshold,
                cost_aware: true,
                ..SimplifyConfig::default()
            };
            let (out, report) = vans_core::simplification::simplify(&circuit, &problem, &config)?;
            let costs = (problem.cost(&circuit)?, problem.cost(&out)?);
            (out, report, Some(costs))
        }
        None => {
            let (out, report) = simplify_structural_with(&circuit, !a.general_input)?;
            (out, report, None)
        }
    };

    let mut check = Value::Null;
    if a.verify {
        check = match (&hamiltonian, costs) {
            (Some(h), Some((before, _))) => {
                let (eb, ea) = (dense_energy(&circuit, h)?, dense_energy(&out, h)?);
                let budget = a.threshold * before.abs() + 1e-10;
                if ea - eb > budget {
                    return Err(CliError::Verification(format!(
                        "energy rose from {eb:.12} to {ea:.12}, budget {budget:.3e}"
                    )));
                }
                json!({ "energy_before": num(eb), "energy_after": num(ea) })
            }
            _ if a.general_input => {
                let d = unitary_mismatch(&circuit, &out)?;
                if d > 1e-10 {
                    return Err(CliError::Verification(format!("unitaries differ: mismatch {d:.3e}")));
                }
                json!({ "unitary_mismatch": num(d) })
            }
            _ => {
                let d = zero_state_infidelity(&circuit, &out)?;
                if d > 1e-10 {
                    return Err(CliError::Verification(format!("prepared states differ: infidelity {d:.3e}")));
                }
                json!({ "state_infidelity": num(d) })
            }
        };
    }

    let summary = json!({
        "input": a.circuit.display().to_string(),
        "general_input": a.general_input,
        "gates_before": circuit.len(),
        "gates_after": out.len(),
        "cnots_before": circuit.count_cnots(),
        "cnots_after": out.count_cnots(),
        "params_before": circuit.count_params(),
        "params_after": out.count_params(),
        "gates_removed": report.gates_removed,
        "rotations_fused": report.rotations_fused,
        "passes": report.passes,
        "rule_counts": report.rule_counts,
        "cost_before": costs.map(|c| num(c.0)),
        "cost_after": costs.map(|c| num(c.1)),
        "verification": check,
    });
    match &a.out {
        Some(dir) => {
            write_file(&dir.join("circuit.txt"), &write_circuit(&out))?;
            write_json(&dir.join("report.json"), &summary)?;
            println!(
                "{} -> {} gates, {} -> {} CNOTs ({report})",
                circuit.len(),
                out.len(),
                circuit.count_cnots(),
                out.count_cnots()
            );
        }
        None => {
            print!("{}", write_circuit(&out));
            eprintln!("{report}");
        }
    }
    Ok(())
}
