use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use vans_core::circuit::read_circuit;
use vans_core::problems::{exact_ground, tfim_hamiltonian, Problem};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data");

fn vans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vans"))
        .args(args)
        .env_remove("VANS_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn vqe_run_layout_and_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let res = vans(&[
        "vqe", "--problem", "tfim", "--n", "3", "--max-iters", "6", "--seed", "4,5", "--out", p(&out),
        "--verify", "--emit-gnuplot",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));

    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["command"], "vqe");
    assert_eq!(summary["config"]["output"]["seeds"], serde_json::json!([4, 5]));
    assert_eq!(summary["config"]["vans"]["max_outer_iters"], 6);
    assert!(out.join("config.toml").exists());

    let e0 = exact_ground(&tfim_hamiltonian(3, 1.0, 1.0)).unwrap().ground_energy;
    assert!((summary["exact_energy"].as_f64().unwrap() - e0).abs() < 1e-12);
    let problem = Problem::vqe(tfim_hamiltonian(3, 1.0, 1.0));
    for seed in [4, 5] {
        let dir = out.join(format!("seed-{seed}"));
        for f in ["trajectory.csv", "trajectory.dat", "best_circuit.txt", "summary.json"] {
            assert!(dir.join(f).exists(), "missing {f}");
        }
        let s = json(&dir.join("summary.json"));
        let circuit = read_circuit(dir.join("best_circuit.txt")).unwrap();
        let cost = problem.cost(&circuit).unwrap();
        assert!((cost - s["best_cost"].as_f64().unwrap()).abs() < 1e-12);
        let rel = (cost - e0).abs() / e0.abs();
        assert!((rel - s["relative_error"].as_f64().unwrap()).abs() < 1e-12);
        assert!((s["dense_cost"].as_f64().unwrap() - cost).abs() < 1e-10);
        assert_eq!(s["n_cnots"].as_u64().unwrap() as usize, circuit.count_cnots());
        let csv = std::fs::read_to_string(dir.join("trajectory.csv")).unwrap();
        assert_eq!(csv.lines().count(), 7);
    }
}

#[test]
fn run_directories_are_never_reused() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    std::fs::create_dir(&out).unwrap();
    let res = vans(&["vqe", "--n", "2", "--max-iters", "1", "--seed", "0", "--out", p(&out)]);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("already exists"));
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 0);
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_key = write(tmp.path(), "a.toml", "[vans]\nbetta = 3.0\n");
    let bad_value = write(tmp.path(), "b.toml", "[vans]\nbeta = -3.0\n");
    let no_file = write(tmp.path(), "c.toml", "[problem]\nkind = \"pauli-file\"\nfile = \"missing.pauli\"\n");
    for cfg in [&bad_key, &bad_value, &no_file] {
        let out = tmp.path().join(cfg.file_stem().unwrap());
        let res = vans(&["vqe", "--config", p(cfg), "--out", p(&out)]);
        assert_eq!(code(&res), 2, "{}", cfg.display());
        assert!(!out.exists(), "nothing is written for a rejected config");
    }
    let res = vans(&["vqe", "--seed", "x", "--out", p(&tmp.path().join("d"))]);
    assert_eq!(code(&res), 2);
    let res = vans(&["vqe", "--n", "1", "--out", p(&tmp.path().join("e"))]);
    assert_eq!(code(&res), 2);
}

#[test]
fn seeds_follow_flag_then_env_then_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", "[problem]\nn = 2\n[vans]\nmax_outer_iters = 1\n[output]\nseeds = [7]\n");
    let run = |name: &str, seed: Option<&str>, env: Option<&str>| -> Vec<String> {
        let out = tmp.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_vans"));
        cmd.args(["vqe", "--config", p(&cfg), "--out", p(&out)]).env_remove("VANS_SEED");
        if let Some(s) = seed {
            cmd.args(["--seed", s]);
        }
        if let Some(e) = env {
            cmd.env("VANS_SEED", e);
        }
        assert!(cmd.output().unwrap().status.success());
        let mut dirs: Vec<String> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.starts_with("seed-"))
            .collect();
        dirs.sort();
        dirs
    };
    assert_eq!(run("a", None, None), ["seed-7"]);
    assert_eq!(run("b", None, Some("3")), ["seed-3"]);
    assert_eq!(run("c", Some("1,2"), Some("3")), ["seed-1", "seed-2"]);
}

#[test]
fn reruns_with_one_seed_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for out in [&a, &b] {
        let res = vans(&["vqe", "--problem", "xxz", "--n", "3", "--max-iters", "4", "--seed", "9", "--out", p(out)]);
        assert_eq!(code(&res), 0, "{}", stderr(&res));
    }
    for f in ["trajectory.csv", "best_circuit.txt"] {
        let x = std::fs::read(a.join("seed-9").join(f)).unwrap();
        let y = std::fs::read(b.join("seed-9").join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
}

#[test]
fn pauli_file_run_reaches_chemical_accuracy() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "h2.toml",
        &format!(
            "[problem]\nkind = \"pauli-file\"\nfile = \"{DATA}/h2/h2_0.74.pauli\"\n\
             [initial]\nkind = \"hea\"\nlayers = 2\n\
             [vans]\nmax_outer_iters = 40\ninsertions_per_iter = 2\n\
             [optimizer]\nlearning_rate = 0.05\n"
        ),
    );
    let out = tmp.path().join("run");
    let res = vans(&["vqe", "--config", p(&cfg), "--seed", "0", "--out", p(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("summary.json"));
    let gap = s["seeds"][0]["best_cost"].as_f64().unwrap() - s["exact_energy"].as_f64().unwrap();
    assert!(gap <= 1.6e-3, "{gap}");
}

#[test]
fn divergence_exits_with_four() {
    let tmp = tempfile::tempdir().unwrap();
    let h = write(tmp.path(), "huge.pauli", "QUBITS 2\n1e308 ZI\n1e308 IZ\n");
    let res = vans(&[
        "vqe", "--problem", "pauli-file", "--file", p(&h), "--seed", "0", "--max-iters", "1", "--out",
        p(&tmp.path().join("run")),
    ]);
    assert_eq!(code(&res), 4, "{}", stderr(&res));
}

#[test]
fn compile_one_qubit_fourier_transform() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = write(tmp.path(), "c.toml", "[vans]\nbeta = 1e9\n");
    let res = vans(&[
        "compile", "--config", p(&cfg), "--qft", "1", "--training-size", "2", "--max-iters", "5", "--seed", "0",
        "--out", p(&out), "--emit-gnuplot",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("seed-0/summary.json"));
    assert!(s["unitary_distance"].as_f64().unwrap() < 1e-10, "{s}");
    let csv = std::fs::read_to_string(out.join("seed-0/two_qubit_gates.csv")).unwrap();
    assert!(csv.starts_with("outer_iter,accepted,n_two_qubit,cost\n"));
    assert_eq!(csv.lines().count(), 6);
    assert!(out.join("seed-0/two_qubit_gates.dat").exists());
}

#[test]
fn compile_from_a_unitary_file() {
    let tmp = tempfile::tempdir().unwrap();
    // Columns of CNOT with control on qubit 0.
    let cols = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]];
    let mut text = String::from("STATES 4 QUBITS 2\n");
    for c in cols {
        for x in c {
            text.push_str(&format!("{x} 0\n"));
        }
    }
    let u = write(tmp.path(), "cnot.states", &text);
    let out = tmp.path().join("run");
    let res = vans(&[
        "compile", "--unitary", p(&u), "--training-size", "4", "--max-iters", "3", "--seed", "0", "--out",
        p(&out), "--verify",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("seed-0/summary.json"));
    assert!(s["unitary_distance"].as_f64().unwrap() < 1e-6, "{s}");

    let not_unitary = write(tmp.path(), "bad.states", "STATES 2 QUBITS 1\n1 0\n0 0\n1 0\n0 0\n");
    let res = vans(&["compile", "--unitary", p(&not_unitary), "--out", p(&tmp.path().join("bad"))]);
    assert_eq!(code(&res), 2);
}

#[test]
fn compressible_autoencoder_data_costs_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    // Two 3-qubit states of the form |a⟩ ⊗ |0⟩ on the last qubit.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut text = String::from("STATES 2 QUBITS 3\n");
    for amps in [[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, s, 0.0, 0.0, 0.0, s, 0.0]] {
        for a in amps {
            text.push_str(&format!("{a:.17e} 0\n"));
        }
    }
    let states = write(tmp.path(), "train.states", &text);
    let cfg = write(tmp.path(), "c.toml", "[vans]\nrandomize_initial = false\n");
    let out = tmp.path().join("run");
    let res = vans(&[
        "autoencode", "--config", p(&cfg), "--train", p(&states), "--test", p(&states), "--n-trash", "1",
        "--max-iters", "2", "--seed", "0", "--out", p(&out), "--verify",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("seed-0/summary.json"));
    assert_eq!(s["initial_cost"].as_f64().unwrap(), 0.0);
    assert!(s["test_fidelity"]["min"].as_f64().unwrap() > 1.0 - 1e-12);
    let csv = std::fs::read_to_string(out.join("seed-0/test_costs.csv")).unwrap();
    assert!(csv.starts_with("outer_iter,train_cost,test_cost\n"));
}

#[test]
fn h2_autoencoder_reports_fidelities() {
    let tmp = tempfile::tempdir().unwrap();
    let train: Vec<String> = ["0.50", "0.74", "1.00"].iter().map(|b| format!("{DATA}/h2/h2_{b}.pauli")).collect();
    let test = format!("{DATA}/h2/h2_0.90.pauli");
    let out = tmp.path().join("run");
    let res = vans(&[
        "autoencode", "--train", &train.join(","), "--test", &test, "--max-iters", "10", "--seed", "0", "--out",
        p(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("seed-0/summary.json"));
    for key in ["train_fidelity", "test_fidelity"] {
        let f = &s[key];
        let (lo, mean, hi) = (f["min"].as_f64().unwrap(), f["mean"].as_f64().unwrap(), f["max"].as_f64().unwrap());
        assert!(lo <= mean && mean <= hi && hi <= 1.0, "{key}: {f}");
    }
    let csv = std::fs::read_to_string(out.join("seed-0/test_costs.csv")).unwrap();
    let accepted = s["accepted_moves"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), accepted + 1);
}

#[test]
fn baseline_rows_cover_every_layer_and_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let res = vans(&[
        "baseline-hea", "--problem", "tfim", "--n", "4", "--layers", "0,4", "--seed", "0,1", "--out", p(&out),
        "--emit-gnuplot",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let s = json(&out.join("summary.json"));
    let rows = s["seeds"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["n_cnots"], 0);
    let e0 = s["exact_energy"].as_f64().unwrap();
    for r in rows {
        assert!(r["cost"].as_f64().unwrap() >= e0 - 1e-10);
    }
    let deep = rows.iter().filter(|r| r["layers"] == 4).map(|r| r["cost"].as_f64().unwrap());
    assert!(deep.fold(f64::INFINITY, f64::min) - e0 < 1e-3);
    assert_eq!(std::fs::read_to_string(out.join("baseline.csv")).unwrap().lines().count(), 5);
    assert!(out.join("baseline.dat").exists());
    assert!(out.join("layers-4-seed-1.txt").exists());
}

#[test]
fn simplify_cancels_cnot_pairs() {
    let tmp = tempfile::tempdir().unwrap();
    let c = write(tmp.path(), "c.txt", "QUBITS 2\nRX 0 0.3\nCNOT 0 1\nCNOT 0 1\n");
    let out = tmp.path().join("s");
    let res = vans(&["simplify", p(&c), "--general-input", "--out", p(&out), "--verify"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let r = json(&out.join("report.json"));
    assert_eq!(r["rule_counts"][2], 1);
    assert_eq!(r["cnots_after"], 0);
    let circuit = read_circuit(out.join("circuit.txt")).unwrap();
    assert_eq!(circuit.len(), 1);
}

#[test]
fn simplify_drops_leading_gates_on_the_zero_state() {
    let tmp = tempfile::tempdir().unwrap();
    let c = write(tmp.path(), "c.txt", "QUBITS 2\nCNOT 0 1\nRZ 0 0.4\nRX 0 0.7\nCNOT 0 1\n");
    let res = vans(&["simplify", p(&c), "--verify"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = String::from_utf8(res.stdout).unwrap();
    let circuit = vans_core::circuit::parse_circuit(&text).unwrap();
    assert_eq!(circuit.gates(), read_circuit(&c).unwrap().gates()[2..].to_vec().as_slice());

    // On general inputs the leading gates stay.
    let res = vans(&["simplify", p(&c), "--general-input"]);
    let text = String::from_utf8(res.stdout).unwrap();
    assert_eq!(vans_core::circuit::parse_circuit(&text).unwrap().len(), 4);
}

#[test]
fn simplify_verifies_a_random_five_qubit_circuit() {
    use std::fmt::Write as _;
    let tmp = tempfile::tempdir().unwrap();
    let mut text = String::from("QUBITS 5\n");
    let mut x: u64 = 12345;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    for _ in 0..80 {
        let q = (next() % 5) as usize;
        match next() % 4 {
            0 => writeln!(text, "RZ {q} {}", (next() % 7) as f64 * 0.5 - 1.0).unwrap(),
            1 => writeln!(text, "RX {q} {}", (next() % 3) as f64 * std::f64::consts::PI).unwrap(),
            _ => writeln!(text, "CNOT {q} {}", (q + 1 + (next() % 4) as usize) % 5).unwrap(),
        }
    }
    let c = write(tmp.path(), "c.txt", &text);
    let out = tmp.path().join("s");
    let res = vans(&["simplify", p(&c), "--general-input", "--verify", "--out", p(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let r = json(&out.join("report.json"));
    assert!(r["verification"]["unitary_mismatch"].as_f64().unwrap() < 1e-10);
    assert!(r["gates_after"].as_u64() < r["gates_before"].as_u64());
}

#[test]
fn simplify_with_a_hamiltonian_respects_the_budget() {
    let tmp = tempfile::tempdir().unwrap();
    let h = write(tmp.path(), "h.pauli", "QUBITS 2\n-1 ZI\n-1 IZ\n-0.5 XX\n");
    let c = write(tmp.path(), "c.txt", "QUBITS 2\nRX 0 1e-7\nRX 1 0.2\nCNOT 0 1\nRX 1 1e-8\n");
    let out = tmp.path().join("s");
    let res = vans(&["simplify", p(&c), "--hamiltonian", p(&h), "--threshold", "1e-3", "--verify", "--out", p(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let r = json(&out.join("report.json"));
    let (before, after) = (r["cost_before"].as_f64().unwrap(), r["cost_after"].as_f64().unwrap());
    assert!(after - before <= 1e-3 * before.abs() + 1e-12);
    assert!(r["gates_after"].as_u64() < r["gates_before"].as_u64());

    let res = vans(&["simplify", p(&c), "--hamiltonian", p(&h), "--general-input"]);
    assert_eq!(code(&res), 2);
}

#[test]
fn simplify_rejects_bad_input() {
    let tmp = tempfile::tempdir().unwrap();
    let c = write(tmp.path(), "c.txt", "QUBITS 2\nCNOT 0 0\n");
    assert_eq!(code(&vans(&["simplify", p(&c)])), 2);
    let big = write(tmp.path(), "big.txt", "QUBITS 7\nRX 6 0.1\n");
    assert_eq!(code(&vans(&["simplify", p(&big), "--verify"])), 2);
}
