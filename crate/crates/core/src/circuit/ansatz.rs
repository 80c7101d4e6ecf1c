//! Fixed initial and baseline ansatzes.

use super::{Circuit, Gate};

/// `RotZ, RotX, RotZ` on every qubit, no entanglers. Angles start at zero.
pub fn build_product_ansatz(n_qubits: usize) -> Circuit {
    assert!(n_qubits >= 1, "product ansatz needs at least one qubit");
    let mut c = Circuit::new(n_qubits);
    for q in 0..n_qubits {
        for g in [Gate::RotZ(q), Gate::RotX(q), Gate::RotZ(q)] {
            c.push(g, &[0.0]).expect("valid by construction");
        }
    }
    c
}

/// Layered hardware-efficient ansatz in a brick pattern.
///
/// Each layer applies `RotZ, RotX` to every qubit, then CNOTs on neighbour
/// pairs `(0,1), (2,3), ...` on odd layers and `(1,2), (3,4), ...` on even
/// layers. On even layers with an even qubit count the ring is closed with
/// `(n-1, 0)`.
pub fn build_hea(n_qubits: usize, layers: usize) -> Circuit {
    assert!(n_qubits >= 2, "HEA needs at least two qubits");
    let mut c = Circuit::new(n_qubits);
    for layer in 1..=layers {
        for q in 0..n_qubits {
            c.push(Gate::RotZ(q), &[0.0]).expect("valid by construction");
            c.push(Gate::RotX(q), &[0.0]).expect("valid by construction");
        }
        let first = if layer % 2 == 1 { 0 } else { 1 };
        let mut q = first;
        while q + 1 < n_qubits {
            c.push(Gate::Cnot { control: q, target: q + 1 }, &[])
                .expect("valid by construction");
            q += 2;
        }
        if first == 1 && n_qubits % 2 == 0 {
            c.push(Gate::Cnot { control: n_qubits - 1, target: 0 }, &[])
                .expect("valid by construction");
        }
    }
    c
}
