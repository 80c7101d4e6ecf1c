//! Cost functions and their targets.
//!
//! A [`Problem`] is a sum over input states of a function of the circuit
//! output. VQE uses the single input `|0…0⟩`; the autoencoder and
//! compilation problems carry their own training states.

mod compile;
mod hamiltonians;
mod spectrum;

pub use compile::{
    build_compilation_training_set, diagnostic_unitary_distance, parse_states, qft_unitary,
    read_states, read_unitary, training_set_for_unitary, write_states,
};
pub use hamiltonians::{load_pauli_sum, tfim_hamiltonian, xxz_hamiltonian};
pub use spectrum::{exact_ground, SpectrumResult};

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::simulator::{apply_circuit, inner, lower, run_prims, PauliMask, PauliSum, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutoencoderVariant {
    /// All trash qubits measured together.
    Global,
    /// Each trash qubit measured on its own.
    Local,
}

#[derive(Debug, Clone)]
pub struct VqeProblem {
    h: PauliSum,
    masks: Vec<(PauliMask, f64)>,
    inputs: Vec<StateVector>,
}

impl VqeProblem {
    pub fn hamiltonian(&self) -> &PauliSum {
        &self.h
    }
}

#[derive(Debug, Clone)]
pub struct AutoencoderProblem {
    weights: Vec<f64>,
    inputs: Vec<StateVector>,
    n_trash: usize,
    variant: AutoencoderVariant,
}

impl AutoencoderProblem {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[StateVector] {
        &self.inputs
    }

    /// Size of the trash subsystem, made of the trailing qubits.
    pub fn n_trash(&self) -> usize {
        self.n_trash
    }

    pub fn variant(&self) -> AutoencoderVariant {
        self.variant
    }

    /// Weight of basis index `b` in the cost: the fraction of trash qubits
    /// reading 1 (local) or whether any does (global).
    fn trash_weight(&self, b: usize) -> f64 {
        let trash = b & ((1usize << self.n_trash) - 1);
        match self.variant {
            AutoencoderVariant::Local => trash.count_ones() as f64 / self.n_trash as f64,
            AutoencoderVariant::Global => (trash != 0) as u8 as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompilationProblem {
    inputs: Vec<StateVector>,
    targets: Vec<StateVector>,
    n: usize,
}

impl CompilationProblem {
    pub fn inputs(&self) -> &[StateVector] {
        &self.inputs
    }

    pub fn targets(&self) -> &[StateVector] {
        &self.targets
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    Vqe(VqeProblem),
    Autoencoder(AutoencoderProblem),
    Compilation(CompilationProblem),
}

impl Problem {
    /// Energy minimization of `h` starting from `|0…0⟩`.
    pub fn vqe(h: PauliSum) -> Problem {
        let masks = h.masks();
        let inputs = vec![StateVector::zero(h.n_qubits())];
        Problem::Vqe(VqeProblem { h, masks, inputs })
    }

    /// Compression of weighted states into the leading `n - n_trash` qubits.
    pub fn autoencoder(
        training: Vec<(f64, StateVector)>,
        n_trash: usize,
        variant: AutoencoderVariant,
    ) -> Result<Problem> {
        let Some(first) = training.first() else {
            return Err(Error::InvalidProblem("empty autoencoder training set".into()));
        };
        let n = first.1.n_qubits();
        if n_trash == 0 || n_trash >= n {
            return Err(Error::InvalidProblem(format!(
                "trash size {n_trash} must lie in [1, {n})"
            )));
        }
        let total: f64 = training.iter().map(|(p, _)| p).sum();
        if training.iter().any(|(p, _)| !(*p > 0.0)) || (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProblem(
                "autoencoder weights must be positive and sum to 1".into(),
            ));
        }
        if let Some((_, s)) = training.iter().find(|(_, s)| s.n_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.n_qubits(),
            });
        }
        let (weights, inputs) = training.into_iter().unzip();
        Ok(Problem::Autoencoder(AutoencoderProblem {
            weights,
            inputs,
            n_trash,
            variant,
        }))
    }

    /// Uniform weights over `states`.
    pub fn autoencoder_uniform(
        states: Vec<StateVector>,
        n_trash: usize,
        variant: AutoencoderVariant,
    ) -> Result<Problem> {
        let p = 1.0 / states.len().max(1) as f64;
        Problem::autoencoder(states.into_iter().map(|s| (p, s)).collect(), n_trash, variant)
    }

    /// Matching of `V|in_j⟩` to `target_j`. Inputs must be pairwise
    /// orthogonal.
    pub fn compilation(pairs: Vec<(StateVector, StateVector)>) -> Result<Problem> {
        let Some(first) = pairs.first() else {
            return Err(Error::InvalidProblem("empty compilation training set".into()));
        };
        let n = first.0.n_qubits();
        for (a, b) in &pairs {
            for s in [a, b] {
                if s.n_qubits() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: s.n_qubits(),
                    });
                }
            }
        }
        for i in 0..pairs.len() {
            for j in 0..i {
                let overlap = pairs[i].0.inner(&pairs[j].0)?.norm();
                if overlap > 1e-10 {
                    return Err(Error::InvalidProblem(format!(
                        "compilation inputs {j} and {i} overlap by {overlap:e}"
                    )));
                }
            }
        }
        let (inputs, targets) = pairs.into_iter().unzip();
        Ok(Problem::Compilation(CompilationProblem { inputs, targets, n }))
    }

    pub fn n_qubits(&self) -> usize {
        self.inputs()[0].n_qubits()
    }

    /// Whether every input is `|0…0⟩`, which licenses the leading-gate
    /// simplification rules.
    pub fn zero_input(&self) -> bool {
        matches!(self, Problem::Vqe(_))
    }

    pub(crate) fn inputs(&self) -> &[StateVector] {
        match self {
            Problem::Vqe(p) => &p.inputs,
            Problem::Autoencoder(p) => &p.inputs,
            Problem::Compilation(p) => &p.inputs,
        }
    }

    pub(crate) fn check_circuit(&self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                got: circuit.n_qubits(),
            });
        }
        Ok(())
    }

    /// Cost contribution of output `idx` and its adjoint seed.
    pub(crate) fn output_term(&self, idx: usize, phi: &[Complex64]) -> (f64, Vec<Complex64>) {
        match self {
            Problem::Vqe(p) => {
                let mut h_phi = vec![Complex64::new(0.0, 0.0); phi.len()];
                for (mask, coeff) in &p.masks {
                    for (b, o) in h_phi.iter_mut().enumerate() {
                        *o += *coeff * mask.apply_at(phi, b);
                    }
                }
                (inner(phi, &h_phi).re, h_phi)
            }
            Problem::Autoencoder(p) => {
                let w = p.weights[idx];
                let seed: Vec<Complex64> = phi
                    .iter()
                    .enumerate()
                    .map(|(b, a)| a * (w * p.trash_weight(b)))
                    .collect();
                (inner(phi, &seed).re, seed)
            }
            Problem::Compilation(p) => {
                let target = p.targets[idx].amplitudes();
                let seed: Vec<Complex64> = phi.iter().zip(target).map(|(a, t)| a - t).collect();
                (seed.iter().map(|d| d.norm_sqr()).sum(), seed)
            }
        }
    }

    /// Cost of the circuit, forward pass only.
    pub fn cost(&self, circuit: &Circuit) -> Result<f64> {
        self.check_circuit(circuit)?;
        let prims = lower(circuit);
        let mut total = 0.0;
        for (idx, input) in self.inputs().iter().enumerate() {
            let mut phi = input.amplitudes().to_vec();
            run_prims(&mut phi, &prims, circuit.params());
            total += self.output_cost(idx, &phi);
        }
        Ok(total)
    }

    fn output_cost(&self, idx: usize, phi: &[Complex64]) -> f64 {
        match self {
            Problem::Vqe(p) => p
                .masks
                .iter()
                .map(|(mask, c)| *c * mask.matrix_element(phi, phi).re)
                .sum(),
            Problem::Autoencoder(p) => {
                p.weights[idx]
                    * phi
                        .iter()
                        .enumerate()
                        .map(|(b, a)| a.norm_sqr() * p.trash_weight(b))
                        .sum::<f64>()
            }
            Problem::Compilation(p) => phi
                .iter()
                .zip(p.targets[idx].amplitudes())
                .map(|(a, t)| (a - t).norm_sqr())
                .sum(),
        }
    }
}

/// `⟨0…0|U† H U|0…0⟩`.
pub fn vqe_cost(circuit: &Circuit, h: &PauliSum) -> Result<f64> {
    let out = apply_circuit(&StateVector::zero(circuit.n_qubits()), circuit)?;
    crate::simulator::expectation(&out, h)
}

/// Autoencoder cost, global or local per the problem's variant.
pub fn autoencoder_cost(circuit: &Circuit, problem: &Problem) -> Result<f64> {
    match problem {
        Problem::Autoencoder(_) => problem.cost(circuit),
        _ => Err(Error::InvalidProblem("not an autoencoder problem".into())),
    }
}

/// `Σ_j ‖target_j − V|in_j⟩‖²`, sensitive to global phase.
pub fn compilation_cost(circuit: &Circuit, problem: &Problem) -> Result<f64> {
    match problem {
        Problem::Compilation(p) => {
            if circuit.n_qubits() != p.n {
                return Err(Error::DimensionMismatch {
                    expected: p.n,
                    got: circuit.n_qubits(),
                });
            }
            problem.cost(circuit)
        }
        _ => Err(Error::InvalidProblem("not a compilation problem".into())),
    }
}

/// Fidelity between `state` and its image under encode, reset the trash to
/// `|0…0⟩`, decode.
///
/// With `V|ψ⟩ = Σ_t |a_t⟩|t⟩` over trash values `t`, the decoded state is
/// `V†(ρ_A ⊗ |0⟩⟨0|)V` and the fidelity is `Σ_t |⟨a_0|a_t⟩|²`.
pub fn encode_decode_fidelity(circuit: &Circuit, state: &StateVector, n_trash: usize) -> Result<f64> {
    let phi = apply_circuit(state, circuit)?;
    let amps = phi.amplitudes();
    let n_keep = state.n_qubits() - n_trash;
    let block = |t: usize| -> Vec<Complex64> {
        (0..1usize << n_keep).map(|k| amps[(k << n_trash) | t]).collect()
    };
    let a0 = block(0);
    Ok((0..1usize << n_trash)
        .map(|t| inner(&a0, &block(t)).norm_sqr())
        .sum::<f64>()
        .min(1.0))
}
