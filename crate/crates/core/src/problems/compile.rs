use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::simulator::{circuit_to_unitary, inner, StateVector, MAX_DENSE_QUBITS};

/// `U_{jk} = ω^{jk} / √(2^n)` with `ω = exp(2πi / 2^n)`.
pub fn qft_unitary(n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "QFT unitary",
            max: MAX_DENSE_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    Ok(DMatrix::from_fn(dim, dim, |j, k| {
        // Reduce jk mod 2^n before scaling so large exponents stay exact.
        let e = (j * k) % dim;
        Complex64::from_polar(scale, 2.0 * PI * e as f64 / dim as f64)
    }))
}

/// `N` orthonormal random inputs paired with their QFT images.
pub fn build_compilation_training_set(
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(StateVector, StateVector)>> {
    training_set_for_unitary(&qft_unitary(n)?, count, seed)
}

/// `N` orthonormal random inputs paired with their images under `u`.
pub fn training_set_for_unitary(
    u: &DMatrix<Complex64>,
    count: usize,
    seed: u64,
) -> Result<Vec<(StateVector, StateVector)>> {
    check_unitary(u)?;
    let dim = u.nrows();
    if count == 0 || count > dim {
        return Err(Error::InvalidProblem(format!(
            "training set size {count} must lie in [1, {dim}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        // Two Gram-Schmidt sweeps keep the overlaps at machine precision.
        for _ in 0..2 {
            for b in &basis {
                let ov = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
        .into_iter()
        .map(|v| {
            let t: Vec<Complex64> = (0..dim)
                .map(|r| (0..dim).map(|c| u[(r, c)] * v[c]).sum())
                .collect();
            Ok((StateVector::normalized(v)?, StateVector::normalized(t)?))
        })
        .collect()
}

fn check_unitary(u: &DMatrix<Complex64>) -> Result<()> {
    let dim = u.nrows();
    if dim < 2 || !dim.is_power_of_two() || u.ncols() != dim {
        return Err(Error::InvalidProblem(format!(
            "target must be a 2^n x 2^n matrix, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let err = (u.adjoint() * u - DMatrix::identity(dim, dim)).camax();
    if err > 1e-8 {
        return Err(Error::InvalidProblem(format!("target is not unitary (deviation {err:e})")));
    }
    Ok(())
}

/// Reads a target unitary stored column by column in the state format.
pub fn read_unitary(path: impl AsRef<Path>) -> Result<DMatrix<Complex64>> {
    let columns = read_states(path)?;
    let dim = columns.first().map_or(0, |c| c.dim());
    if columns.len() != dim {
        return Err(Error::InvalidProblem(format!(
            "unitary file holds {} columns of dimension {dim}",
            columns.len()
        )));
    }
    let u = DMatrix::from_fn(dim, dim, |r, c| columns[c].amplitudes()[r]);
    check_unitary(&u)?;
    Ok(u)
}

/// Squared Frobenius distance `‖target − V‖²`.
pub fn diagnostic_unitary_distance(circuit: &Circuit, target: &DMatrix<Complex64>) -> Result<f64> {
    let v = circuit_to_unitary(circuit)?;
    if v.shape() != target.shape() {
        return Err(Error::DimensionMismatch {
            expected: target.nrows().trailing_zeros() as usize,
            got: circuit.n_qubits(),
        });
    }
    Ok((target - v).iter().map(|x| x.norm_sqr()).sum())
}

/// Serializes states as `STATES <N> QUBITS <n>` followed by one
/// `re im` line per amplitude, state after state.
pub fn write_states(states: &[StateVector]) -> String {
    let n = states.first().map_or(0, |s| s.n_qubits());
    let mut out = format!("STATES {} QUBITS {n}\n", states.len());
    for s in states {
        for a in s.amplitudes() {
            writeln!(out, "{:.16e} {:.16e}", a.re, a.im).expect("writing to a String cannot fail");
        }
    }
    out
}

pub fn parse_states(text: &str) -> Result<Vec<StateVector>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing `STATES <N> QUBITS <n>` header".into(),
    })?;
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (count, n) = match tokens.as_slice() {
        ["STATES", c, "QUBITS", n] => (
            c.parse::<usize>().map_err(|_| err(line, format!("bad state count `{c}`")))?,
            n.parse::<usize>().map_err(|_| err(line, format!("bad qubit count `{n}`")))?,
        ),
        _ => return Err(err(line, format!("expected `STATES <N> QUBITS <n>`, got `{header}`"))),
    };
    if n == 0 || n > crate::simulator::MAX_STATE_QUBITS {
        return Err(err(line, format!("unsupported qubit count {n}")));
    }
    let dim = 1usize << n;
    let mut states = Vec::with_capacity(count);
    for _ in 0..count {
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (line, l) = lines
                .next()
                .ok_or_else(|| err(0, "unexpected end of state file".into()))?;
            let parts: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<_>>()
                .filter(|p: &Vec<f64>| p.len() == 2)
                .ok_or_else(|| err(line, format!("expected `<re> <im>`, got `{l}`")))?;
            amps.push(Complex64::new(parts[0], parts[1]));
        }
        states.push(StateVector::from_amplitudes(amps)?);
    }
    if let Some((line, l)) = lines.next() {
        return Err(err(line, format!("trailing content `{l}`")));
    }
    Ok(states)
}

pub fn read_states(path: impl AsRef<Path>) -> Result<Vec<StateVector>> {
    parse_states(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qft_small_cases() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u1 = qft_unitary(1).unwrap();
        assert!((u1[(1, 1)] - Complex64::new(-h, 0.0)).norm() < 1e-15);
        let u2 = qft_unitary(2).unwrap();
        assert!((u2[(1, 1)] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((u2[(3, 3)] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((u2[(2, 3)] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn qft_is_unitary() {
        for n in 1..=5 {
            let u = qft_unitary(n).unwrap();
            let err = (u.adjoint() * &u - DMatrix::identity(1 << n, 1 << n)).camax();
            assert!(err < 1e-12, "n={n}: {err}");
        }
    }

    #[test]
    fn training_inputs_are_orthonormal_and_deterministic() {
        let set = build_compilation_training_set(3, 4, 11).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let g = set[i].0.inner(&set[j].0).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        let again = build_compilation_training_set(3, 4, 11).unwrap();
        assert_eq!(set[2].1, again[2].1);
        assert!(build_compilation_training_set(2, 5, 0).is_err());
    }

    #[test]
    fn unitary_files_round_trip() {
        let u = qft_unitary(2).unwrap();
        let cols: Vec<StateVector> = (0..4)
            .map(|c| StateVector::from_amplitudes(u.column(c).iter().copied().collect()).unwrap())
            .collect();
        let path = std::env::temp_dir().join(format!("vans-unitary-{}.txt", std::process::id()));
        std::fs::write(&path, write_states(&cols)).unwrap();
        let back = read_unitary(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert!((back - &u).camax() < 1e-15);
        let a = training_set_for_unitary(&u, 3, 5).unwrap();
        let b = build_compilation_training_set(2, 3, 5).unwrap();
        assert_eq!(a[1].1, b[1].1);
        assert!(training_set_for_unitary(&(u * Complex64::new(2.0, 0.0)), 2, 0).is_err());
    }

    #[test]
    fn states_round_trip() {
        let set = build_compilation_training_set(2, 3, 1).unwrap();
        let states: Vec<_> = set.into_iter().map(|p| p.1).collect();
        let back = parse_states(&write_states(&states)).unwrap();
        assert_eq!(back, states);
        assert!(parse_states("STATES 1 QUBITS 1\n1 0\n").is_err());
        assert!(parse_states("STATES 1 QUBITS 1\n1 0\n0 0\n0 0\n").is_err());
    }
}
