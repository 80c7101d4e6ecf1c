//! Reverse-sweep (adjoint) gradients.
//!
//! Every supported cost is a sum over input states of a function of the
//! output state `ψ = U|in⟩`. Each problem supplies, per output, its cost
//! contribution and a seed vector `λ` with `dC = 2 Re⟨λ|dψ⟩`. One backward
//! sweep per input then recovers every angle derivative: for a rotation
//! `exp(-iθP/2)` the derivative is `Im⟨λ_k|P|ψ_k⟩`, and for a global phase
//! `e^{iφ}` it is `-2 Im⟨λ_k|ψ_k⟩`.

use num_complex::Complex64;

use super::{apply_prim, inner, lower, run_prims, Prim};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::problems::Problem;

/// Gradient of the problem cost with respect to the circuit angles.
pub fn cost_gradient(circuit: &Circuit, problem: &Problem) -> Result<Vec<f64>> {
    Ok(cost_and_gradient(circuit, problem)?.1)
}

/// Cost and gradient from one forward and one backward pass per input.
pub fn cost_and_gradient(circuit: &Circuit, problem: &Problem) -> Result<(f64, Vec<f64>)> {
    problem.check_circuit(circuit)?;
    let prims = lower(circuit);
    let params = circuit.params();
    let mut grad = vec![0.0; params.len()];
    let mut total = 0.0;
    for (idx, input) in problem.inputs().iter().enumerate() {
        let mut phi: Vec<Complex64> = input.amplitudes().to_vec();
        run_prims(&mut phi, &prims, params);
        let (cost, mut lam) = problem.output_term(idx, &phi);
        total += cost;
        if params.is_empty() {
            continue;
        }
        for prim in prims.iter().rev() {
            match prim {
                Prim::Rotation { mask, slot } => {
                    grad[*slot] += mask.matrix_element(&lam, &phi).im;
                }
                Prim::Phase { slot } => grad[*slot] += -2.0 * inner(&lam, &phi).im,
                Prim::Cnot { .. } => {}
            }
            apply_prim(&mut phi, prim, params, true);
            apply_prim(&mut lam, prim, params, true);
        }
    }
    Ok((total, grad))
}
