use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simulator::{PauliSum, StateVector, MAX_DENSE_QUBITS};

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    pub ground_state: StateVector,
}

/// Lowest eigenpair of `h` by dense Hermitian diagonalization.
pub fn exact_ground(h: &PauliSum) -> Result<SpectrumResult> {
    let n = h.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "dense diagonalization",
            max: MAX_DENSE_QUBITS,
            got: n,
        });
    }
    let dense = h.to_dense();
    let dim = dense.len();
    let m = DMatrix::from_fn(dim, dim, |r, c| dense[r][c]);
    let eig = m.symmetric_eigen();
    let (k, &e0) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
    // Fix the arbitrary phase: largest component real and positive.
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .expect("non-empty eigenvector");
    let phase = pivot.conj() / pivot.norm();
    let v = v.into_iter().map(|a| a * phase).collect();
    Ok(SpectrumResult {
        ground_energy: e0,
        ground_state: StateVector::normalized(v)?,
    })
}
