//! Property checks shared by the property tests and the acceptance gate.
//! Each returns a one-line summary on success and the first violation on
//! failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vans_core::circuit::{build_hea, BlockTemplate, Circuit};
use vans_core::insertion::{insert, InsertionPolicy, PositionMode};
use vans_core::problems::{tfim_hamiltonian, AutoencoderVariant, Problem};
use vans_core::simplification::simplify_structural;
use vans_core::simulator::{circuit_to_unitary, cost_and_gradient, StateVector};
use vans_core::vans::{metropolis_accept, run_vans, VansConfig};

use super::*;

pub type Check = Result<String, String>;

/// Every dictionary block at zero angles is the identity.
pub fn zero_blocks_are_identity() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=4 {
        let dim = 1usize << n;
        let mut blocks = Vec::new();
        for q in 0..n {
            blocks.push(BlockTemplate::Rotation.instantiate(&[q]).unwrap());
            for t in 0..n {
                if t != q {
                    blocks.push(BlockTemplate::Entangler.instantiate(&[q, t]).unwrap());
                    blocks.push(BlockTemplate::Kak.instantiate(&[q, t]).unwrap());
                }
            }
        }
        for block in blocks {
            let circ = block.to_circuit(n, &vec![0.0; block.n_params()]).unwrap();
            for u in [dense_unitary(&circ), circuit_to_unitary(&circ).unwrap()] {
                let err = (u - Mat::identity(dim, dim)).iter().map(|x| x.norm()).fold(0.0, f64::max);
                worst = worst.max(err);
            }
            count += 1;
        }
    }
    if worst <= 1e-12 {
        Ok(format!("{count} blocks, max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation from identity {worst:.3e} > 1e-12"))
    }
}

/// The 500-circuit corpus used by the simplification properties.
pub fn rule_corpus() -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..500)
        .map(|_| {
            let n = rng.random_range(1..=6);
            let len = rng.random_range(0..=40);
            random_rule_circuit(&mut rng, n, len)
        })
        .collect()
}

/// Rules 1 to 5 keep `V|0…0⟩` up to a global phase.
pub fn simplification_preserves_zero_state(corpus: &[Circuit]) -> Check {
    let mut worst: f64 = 0.0;
    for (i, circ) in corpus.iter().enumerate() {
        let (out, _) = simplify_structural(circ).map_err(|e| format!("circuit {i}: {e}"))?;
        let zero = StateVector::zero(circ.n_qubits());
        let a = dense_apply(&dense_unitary(circ), &zero);
        let b = dense_apply(&dense_unitary(&out), &zero);
        let err = infidelity(&a, &b).abs();
        if err > 1e-10 {
            return Err(format!("circuit {i}: infidelity {err:.3e}\n{}", vans_core::circuit::write_circuit(circ)));
        }
        worst = worst.max(err);
    }
    Ok(format!("{} circuits, max infidelity {worst:.1e}", corpus.len()))
}

/// A second pass changes nothing and no pass adds gates.
pub fn simplification_idempotent(corpus: &[Circuit]) -> Check {
    let mut removed = 0;
    for (i, circ) in corpus.iter().enumerate() {
        let (once, _) = simplify_structural(circ).map_err(|e| format!("circuit {i}: {e}"))?;
        let (twice, report) = simplify_structural(&once).map_err(|e| format!("circuit {i}: {e}"))?;
        if once.len() > circ.len() {
            return Err(format!("circuit {i}: grew from {} to {} gates", circ.len(), once.len()));
        }
        if twice != once || !report.is_noop() {
            return Err(format!(
                "circuit {i}: second pass changed the circuit\n{}",
                vans_core::circuit::write_circuit(circ)
            ));
        }
        removed += circ.len() - once.len();
    }
    Ok(format!("{} circuits, {removed} gates removed in total", corpus.len()))
}

fn sample_problems(rng: &mut ChaCha8Rng, n: usize) -> Vec<Problem> {
    let mut out = vec![Problem::vqe(random_hamiltonian(rng, n, 6))];
    if n >= 2 {
        let states: Vec<StateVector> = (0..3).map(|_| random_state(rng, n)).collect();
        let variant = if rng.random_bool(0.5) {
            AutoencoderVariant::Local
        } else {
            AutoencoderVariant::Global
        };
        out.push(Problem::autoencoder_uniform(states, rng.random_range(1..n), variant).unwrap());
    }
    let count = rng.random_range(1..=(1usize << n).min(4));
    let inputs = random_orthonormal(rng, n, count);
    let pairs = inputs.into_iter().map(|s| (s, random_state(rng, n))).collect();
    out.push(Problem::compilation(pairs).unwrap());
    out
}

/// Inserting with zero angle spread leaves every cost unchanged.
pub fn zero_epsilon_insertion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for _ in 0..60 {
        let n = rng.random_range(1..=4);
        let len = rng.random_range(0..12);
        let circ = random_full_circuit(&mut rng, n, len);
        for problem in sample_problems(&mut rng, n) {
            let mut policies = vec![InsertionPolicy::default(), InsertionPolicy::compilation(n)];
            for p in &mut policies {
                p.epsilon_init = 0.0;
                p.position_mode = if rng.random_bool(0.5) { PositionMode::End } else { PositionMode::Anywhere };
            }
            for policy in policies {
                let before = problem.cost(&circ).map_err(|e| e.to_string())?;
                let grown = insert(&circ, &policy, &mut rng).map_err(|e| e.to_string())?;
                let after = problem.cost(&grown).map_err(|e| e.to_string())?;
                let delta = (after - before).abs();
                if delta > 1e-10 {
                    return Err(format!("cost moved by {delta:.3e} after a zero-angle insertion"));
                }
                worst = worst.max(delta);
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} insertions, max |ΔC| {worst:.1e}"))
}

/// Adjoint gradients agree with central differences.
pub fn gradients_match_finite_differences() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 100 {
        let n = rng.random_range(1..=4);
        let len = rng.random_range(1..14);
        let circ = random_full_circuit(&mut rng, n, len);
        let problems = sample_problems(&mut rng, n);
        let problem = &problems[rng.random_range(0..problems.len())];
        let (_, grad) = cost_and_gradient(&circ, problem).map_err(|e| e.to_string())?;
        let scale = grad.iter().fold(1.0f64, |m, g| m.max(g.abs()));
        let base = circ.params().to_vec();
        for k in 0..base.len() {
            let mut plus = base.clone();
            plus[k] += h;
            let mut minus = base.clone();
            minus[k] -= h;
            let cp = problem.cost(&circ.clone().with_params(&plus).unwrap()).unwrap();
            let cm = problem.cost(&circ.clone().with_params(&minus).unwrap()).unwrap();
            let fd = (cp - cm) / (2.0 * h);
            let rel = (grad[k] - fd).abs() / scale;
            if rel > 1e-6 {
                return Err(format!("pair {pairs}, slot {k}: adjoint {} vs difference {fd}", grad[k]));
            }
            worst = worst.max(rel);
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, max relative error {worst:.1e}"))
}

/// Empirical uphill acceptance frequency matches the formula.
pub fn metropolis_frequency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 10_000;
    let mut summary = Vec::new();
    for (beta, c0, delta) in [(100.0, -2.0, 0.02), (100.0, 4.0, 0.01), (10.0, 1.0, 0.05), (500.0, -10.0, 0.005)] {
        let old = c0 * 0.9;
        let hits = (0..trials)
            .filter(|_| metropolis_accept(old + delta, old, c0, beta, &mut rng))
            .count();
        let freq = hits as f64 / trials as f64;
        let expected = (-beta * delta / f64::abs(c0)).exp();
        if (freq - expected).abs() > 0.02 {
            return Err(format!("β={beta}, ΔC/|C0|={}: {freq:.4} vs {expected:.4}", delta / c0.abs()));
        }
        summary.push(format!("{freq:.3}/{expected:.3}"));
    }
    Ok(format!("observed/expected {}", summary.join(", ")))
}

/// Two runs with one seed produce bit-identical trajectories.
pub fn seeded_runs_reproduce() -> Check {
    let problem = Problem::vqe(tfim_hamiltonian(3, 1.0, 1.0));
    let config = VansConfig {
        max_outer_iters: 6,
        seed: 17,
        ..VansConfig::default()
    };
    let initial = build_hea(3, 1);
    let a = run_vans(&problem, &initial, &config).map_err(|e| e.to_string())?;
    let b = run_vans(&problem, &initial, &config).map_err(|e| e.to_string())?;
    let bits = |r: &vans_core::vans::VansResult| -> Vec<(u64, usize, usize, bool)> {
        r.trajectory
            .iter()
            .map(|t| (t.cost.to_bits(), t.n_cnots, t.n_params, t.accepted))
            .collect()
    };
    if bits(&a) != bits(&b) || a.best_circuit != b.best_circuit || a.best_cost.to_bits() != b.best_cost.to_bits() {
        return Err("trajectories differ between identical runs".into());
    }
    Ok(format!("{} records identical", a.trajectory.len()))
}
