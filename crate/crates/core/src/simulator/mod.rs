//! Exact dense statevector simulation.
//!
//! Basis states are labelled big-endian: qubit 0 is the most significant bit
//! of the amplitude index. Gates are applied in place over amplitude pairs;
//! no dense operator is ever formed except by [`circuit_to_unitary`].

mod adjoint;
mod pauli;

pub use adjoint::{cost_and_gradient, cost_gradient};
pub use pauli::{Pauli, PauliString, PauliSum};
pub(crate) use pauli::PauliMask;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register for which dense operators are materialized.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Largest register accepted by statevector paths.
pub const MAX_STATE_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits <= MAX_STATE_QUBITS, "too many qubits for a statevector");
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector must be normalized to within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidProblem(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        let s = StateVector { n_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProblem(format!("state has norm {norm}")));
        }
        Ok(s)
    }

    /// Normalizes `amps` before wrapping them.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidProblem("cannot normalize a zero vector".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.n_qubits, other.n_qubits)?;
        Ok(inner(&self.amps, &other.amps))
    }

    /// Probability that `qubit` measures 0.
    pub fn prob_zero(&self, qubit: usize) -> f64 {
        let bit = 1usize << (self.n_qubits - 1 - qubit);
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Primitive operation after expanding composite gates.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Prim {
    /// `exp(-iθP/2)` with θ read from `slot`.
    Rotation { mask: PauliMask, slot: usize },
    Cnot { control: usize, target: usize },
    Phase { slot: usize },
}

fn bit(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

fn single(n: usize, q: usize, p: Pauli) -> PauliMask {
    let mut ops = vec![Pauli::I; n];
    ops[q] = p;
    PauliMask::from_word(&ops)
}

fn double(n: usize, a: usize, b: usize, p: Pauli) -> PauliMask {
    let mut ops = vec![Pauli::I; n];
    ops[a] = p;
    ops[b] = p;
    PauliMask::from_word(&ops)
}

/// Expands a circuit into primitive rotations, CNOTs and phases.
///
/// The general two-qubit gate on `(a, b)` with angles `t[0..15]` runs as
/// `Z(t0) X(t1) Z(t2)` on `a`, `Z(t3) X(t4) Z(t5)` on `b`, then `XX(t6)`,
/// `YY(t7)`, `ZZ(t8)`, then `Z(t9) X(t10) Z(t11)` on `a` and
/// `Z(t12) X(t13) Z(t14)` on `b` (time order).
pub(crate) fn lower(circuit: &Circuit) -> Vec<Prim> {
    let n = circuit.n_qubits();
    let mut out = Vec::with_capacity(circuit.len());
    for (i, gate) in circuit.gates().iter().enumerate() {
        let s = circuit.slots(i).start;
        match *gate {
            Gate::RotZ(q) => out.push(Prim::Rotation { mask: single(n, q, Pauli::Z), slot: s }),
            Gate::RotX(q) => out.push(Prim::Rotation { mask: single(n, q, Pauli::X), slot: s }),
            Gate::Cnot { control, target } => out.push(Prim::Cnot {
                control: bit(n, control),
                target: bit(n, target),
            }),
            Gate::GlobalPhase => out.push(Prim::Phase { slot: s }),
            Gate::Kak(a, b) => {
                let zxz = |q: usize, base: usize, out: &mut Vec<Prim>| {
                    out.push(Prim::Rotation { mask: single(n, q, Pauli::Z), slot: base });
                    out.push(Prim::Rotation { mask: single(n, q, Pauli::X), slot: base + 1 });
                    out.push(Prim::Rotation { mask: single(n, q, Pauli::Z), slot: base + 2 });
                };
                zxz(a, s, &mut out);
                zxz(b, s + 3, &mut out);
                for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
                    out.push(Prim::Rotation { mask: double(n, a, b, p), slot: s + 6 + k });
                }
                zxz(a, s + 9, &mut out);
                zxz(b, s + 12, &mut out);
            }
        }
    }
    out
}

/// Applies `exp(-iθP/2) = cos(θ/2) − i sin(θ/2) P` in place.
pub(crate) fn apply_rotation(amps: &mut [Complex64], mask: &PauliMask, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    let mis = Complex64::new(0.0, -s);
    if mask.x == 0 {
        let plus = Complex64::new(c, -s);
        let minus = Complex64::new(c, s);
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= if mask.sign(b) > 0.0 { plus } else { minus };
        }
        return;
    }
    let low = mask.x & mask.x.wrapping_neg();
    for b0 in 0..amps.len() {
        if b0 & low != 0 {
            continue;
        }
        let b1 = b0 ^ mask.x;
        let (a0, a1) = (amps[b0], amps[b1]);
        // P|b0⟩ = phase·sign(b0)|b1⟩ and P|b1⟩ = phase·sign(b1)|b0⟩
        let p0 = mask.phase * mask.sign(b1) * a1;
        let p1 = mask.phase * mask.sign(b0) * a0;
        amps[b0] = c * a0 + mis * p0;
        amps[b1] = c * a1 + mis * p1;
    }
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    for b in 0..amps.len() {
        if b & control != 0 && b & target == 0 {
            amps.swap(b, b | target);
        }
    }
}

pub(crate) fn apply_prim(amps: &mut [Complex64], prim: &Prim, params: &[f64], inverse: bool) {
    let sign = if inverse { -1.0 } else { 1.0 };
    match *prim {
        Prim::Rotation { mask, slot } => apply_rotation(amps, &mask, sign * params[slot]),
        Prim::Cnot { control, target } => apply_cnot(amps, control, target),
        Prim::Phase { slot } => {
            let ph = Complex64::from_polar(1.0, sign * params[slot]);
            for a in amps.iter_mut() {
                *a *= ph;
            }
        }
    }
}

pub(crate) fn run_prims(amps: &mut [Complex64], prims: &[Prim], params: &[f64]) {
    for p in prims {
        apply_prim(amps, p, params, false);
    }
}

/// `U|ψ⟩` for the circuit's unitary `U`.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    check_dims(circuit.n_qubits(), state.n_qubits())?;
    let mut out = state.clone();
    run_prims(&mut out.amps, &lower(circuit), circuit.params());
    Ok(out)
}

/// `⟨ψ|H|ψ⟩`.
pub fn expectation(state: &StateVector, h: &PauliSum) -> Result<f64> {
    check_dims(h.n_qubits(), state.n_qubits())?;
    let amps = state.amplitudes();
    let value: Complex64 = h
        .masks()
        .iter()
        .map(|(mask, c)| *c * mask.matrix_element(amps, amps))
        .sum();
    debug_assert!(
        value.im.abs() < 1e-10,
        "expectation of a Hermitian operator has imaginary part {}",
        value.im
    );
    Ok(value.re)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// The circuit's full `2^n × 2^n` unitary. Column `j` is the circuit applied
/// to basis state `|j⟩`.
pub fn circuit_to_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "dense unitary",
            max: MAX_DENSE_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let prims = lower(circuit);
    let mut m = DMatrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|a| *a = ZERO);
        col[j] = Complex64::new(1.0, 0.0);
        run_prims(&mut col, &prims, circuit.params());
        m.column_mut(j).copy_from_slice(&col);
    }
    Ok(m)
}
