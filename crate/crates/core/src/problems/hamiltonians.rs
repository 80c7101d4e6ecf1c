use std::path::Path;

use crate::error::Result;
use crate::simulator::{Pauli, PauliString, PauliSum};

/// Periodic transverse-field Ising chain `−J Σ X_j X_{j+1} − g Σ Z_j`.
pub fn tfim_hamiltonian(n: usize, j: f64, g: f64) -> PauliSum {
    assert!(n >= 2, "TFIM needs at least two sites");
    let bonds = (0..n).map(|k| {
        PauliString::on(n, &[(k, Pauli::X), ((k + 1) % n, Pauli::X)], -j)
    });
    let field = (0..n).map(|k| PauliString::on(n, &[(k, Pauli::Z)], -g));
    PauliSum::new(n, bonds.chain(field)).expect("consistent word lengths")
}

/// Periodic XXZ chain in a longitudinal field
/// `Σ (X_j X_{j+1} + Y_j Y_{j+1} + Δ Z_j Z_{j+1}) + g Σ Z_j`.
pub fn xxz_hamiltonian(n: usize, delta: f64, g: f64) -> PauliSum {
    assert!(n >= 2, "XXZ needs at least two sites");
    let mut terms = Vec::with_capacity(4 * n);
    for k in 0..n {
        let next = (k + 1) % n;
        terms.push(PauliString::on(n, &[(k, Pauli::X), (next, Pauli::X)], 1.0));
        terms.push(PauliString::on(n, &[(k, Pauli::Y), (next, Pauli::Y)], 1.0));
        terms.push(PauliString::on(n, &[(k, Pauli::Z), (next, Pauli::Z)], delta));
    }
    for k in 0..n {
        terms.push(PauliString::on(n, &[(k, Pauli::Z)], g));
    }
    PauliSum::new(n, terms).expect("consistent word lengths")
}

/// Loads a Hamiltonian in the Pauli-sum text format.
pub fn load_pauli_sum(path: impl AsRef<Path>) -> Result<PauliSum> {
    PauliSum::load(path)
}
