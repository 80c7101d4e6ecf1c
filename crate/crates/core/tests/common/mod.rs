#![allow(dead_code)]

pub mod props;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vans_core::circuit::{Circuit, Gate, KAK_PARAMS};
use vans_core::simulator::{PauliString, PauliSum, StateVector};

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli2(p: char) -> Mat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let data = match p {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, i, -i, z],
        'Z' => [o, z, z, -o],
        _ => panic!("unknown Pauli {p}"),
    };
    // Column-major: entries are (0,0), (1,0), (0,1), (1,1).
    Mat::from_column_slice(2, 2, &data)
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Embeds per-qubit 2×2 factors, qubit 0 as the leftmost tensor factor.
pub fn embed(n: usize, factors: &[(usize, Mat)]) -> Mat {
    let mut out = Mat::identity(1, 1);
    for q in 0..n {
        let f = factors
            .iter()
            .find(|(p, _)| *p == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| pauli2('I'));
        out = kron(&out, &f);
    }
    out
}

pub fn pauli_word(word: &str) -> Mat {
    let n = word.len();
    let factors: Vec<(usize, Mat)> = word.chars().enumerate().map(|(q, p)| (q, pauli2(p))).collect();
    embed(n, &factors)
}

/// `exp(-iθP/2)` for an involutory `P`.
pub fn exp_pauli(p: &Mat, theta: f64) -> Mat {
    let dim = p.nrows();
    Mat::identity(dim, dim) * c((theta / 2.0).cos(), 0.0) - p * c(0.0, (theta / 2.0).sin())
}

fn projector(bit: usize) -> Mat {
    let mut m = Mat::zeros(2, 2);
    m[(bit, bit)] = c(1.0, 0.0);
    m
}

pub fn gate_matrix(n: usize, gate: &Gate, angles: &[f64]) -> Mat {
    let dim = 1usize << n;
    match *gate {
        Gate::RotZ(q) => exp_pauli(&embed(n, &[(q, pauli2('Z'))]), angles[0]),
        Gate::RotX(q) => exp_pauli(&embed(n, &[(q, pauli2('X'))]), angles[0]),
        Gate::Cnot { control, target } => {
            embed(n, &[(control, projector(0))])
                + embed(n, &[(control, projector(1)), (target, pauli2('X'))])
        }
        Gate::GlobalPhase => Mat::identity(dim, dim) * Complex64::from_polar(1.0, angles[0]),
        Gate::Kak(a, b) => {
            assert_eq!(angles.len(), KAK_PARAMS);
            let zxz = |q: usize, t: &[f64]| -> Mat {
                let z = embed(n, &[(q, pauli2('Z'))]);
                let x = embed(n, &[(q, pauli2('X'))]);
                exp_pauli(&z, t[2]) * exp_pauli(&x, t[1]) * exp_pauli(&z, t[0])
            };
            let mut core = Mat::identity(dim, dim);
            for (k, p) in ['X', 'Y', 'Z'].into_iter().enumerate() {
                let pp = embed(n, &[(a, pauli2(p)), (b, pauli2(p))]);
                core = exp_pauli(&pp, angles[6 + k]) * core;
            }
            zxz(b, &angles[12..15])
                * zxz(a, &angles[9..12])
                * core
                * zxz(b, &angles[3..6])
                * zxz(a, &angles[0..3])
        }
    }
}

/// Product of the gate matrices, first gate rightmost.
pub fn dense_unitary(circuit: &Circuit) -> Mat {
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    let mut u = Mat::identity(dim, dim);
    for (i, g) in circuit.gates().iter().enumerate() {
        u = gate_matrix(n, g, circuit.gate_params(i)) * u;
    }
    u
}

pub fn dense_hamiltonian(h: &PauliSum) -> Mat {
    let dim = 1usize << h.n_qubits();
    let mut m = Mat::zeros(dim, dim);
    for t in h.terms() {
        m += pauli_word(&t.word()) * c(t.coefficient, 0.0);
    }
    m
}

pub fn dense_apply(u: &Mat, state: &StateVector) -> Vec<Complex64> {
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    (u * v).iter().copied().collect()
}

pub fn overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `1 − |⟨a|b⟩|²` for unit vectors.
pub fn infidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    1.0 - overlap(a, b).norm_sqr()
}

/// Largest entry of `|a − e^{iφ} b|` with the phase chosen from the trace.
pub fn phase_adjusted_distance(a: &Mat, b: &Mat) -> f64 {
    let tr: Complex64 = (b.adjoint() * a).trace();
    let phase = if tr.norm() > 1e-12 { tr / tr.norm() } else { c(1.0, 0.0) };
    (a - b * phase).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Ground energy by shifted power iteration on the dense matrix.
pub fn power_iteration_ground(h: &PauliSum, iterations: usize) -> f64 {
    let m = dense_hamiltonian(h);
    let dim = m.nrows();
    let shift: f64 = h.terms().iter().map(|t| t.coefficient.abs()).sum();
    let shifted = Mat::identity(dim, dim) * c(shift, 0.0) - &m;
    let mut v = nalgebra::DVector::from_fn(dim, |i, _| c(1.0 + 0.1 * i as f64, 0.05 * (i % 3) as f64));
    v /= c(v.norm(), 0.0);
    for _ in 0..iterations {
        v = &shifted * &v;
        v /= c(v.norm(), 0.0);
    }
    (v.adjoint() * &m * &v)[(0, 0)].re
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..10) {
        0 => 0.0,
        1 => std::f64::consts::PI,
        2 => 2.0 * std::f64::consts::PI,
        _ => rng.random_range(-4.0..4.0),
    }
}

/// Random RotZ/RotX/CNOT circuit biased towards runs on the same wire so
/// that every rewrite rule has material to act on.
pub fn random_rule_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut circ = Circuit::new(n);
    let mut last_q = 0;
    for _ in 0..len {
        let q = if rng.random_bool(0.5) { last_q } else { rng.random_range(0..n) };
        last_q = q;
        if n >= 2 && rng.random_bool(0.3) {
            let mut t = rng.random_range(0..n);
            while t == q {
                t = rng.random_range(0..n);
            }
            circ.push(Gate::Cnot { control: q, target: t }, &[]).unwrap();
        } else if rng.random_bool(0.5) {
            circ.push(Gate::RotZ(q), &[random_angle(rng)]).unwrap();
        } else {
            circ.push(Gate::RotX(q), &[random_angle(rng)]).unwrap();
        }
    }
    circ
}

/// Random circuit over the whole gate set, KAK and global phase included.
pub fn random_full_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut circ = random_rule_circuit(rng, n, len);
    if n >= 2 {
        let a = rng.random_range(0..n);
        let b = (a + 1 + rng.random_range(0..n - 1)) % n;
        let angles: Vec<f64> = (0..KAK_PARAMS).map(|_| rng.random_range(-3.0..3.0)).collect();
        let pos = rng.random_range(0..=circ.len());
        circ.insert(pos, Gate::Kak(a, b), &angles).unwrap();
    }
    let pos = rng.random_range(0..=circ.len());
    circ.insert(pos, Gate::GlobalPhase, &[rng.random_range(-3.0..3.0)]).unwrap();
    circ
}

pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> PauliSum {
    let list: Vec<PauliString> = (0..terms)
        .map(|_| {
            let word: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
            PauliString::parse(&word, rng.random_range(-1.0..1.0)).unwrap()
        })
        .collect();
    PauliSum::new(n, list).unwrap()
}

/// `count` orthonormal random states via Gram-Schmidt.
pub fn random_orthonormal(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<StateVector> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    while out.len() < count {
        let mut v = random_state(rng, n).into_amplitudes();
        for _ in 0..2 {
            for b in &out {
                let ov = overlap(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        out.push(v);
    }
    out.into_iter().map(|v| StateVector::normalized(v).unwrap()).collect()
}
