//! Pauli strings, Pauli sums, and the Hamiltonian text format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use super::StateVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Bitmask form of a Pauli word on `n` qubits: `P = i^{ny} X^x Z^z`.
///
/// Qubit `q` maps to bit `n - 1 - q` of the basis index (qubit 0 is the most
/// significant bit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PauliMask {
    pub x: usize,
    pub z: usize,
    /// `i^{ny}`.
    pub phase: Complex64,
}

impl PauliMask {
    pub fn from_word(ops: &[Pauli]) -> PauliMask {
        let n = ops.len();
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for (q, p) in ops.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
            }
        }
        PauliMask {
            x,
            z,
            phase: Complex64::i().powu(ny),
        }
    }

    /// Sign `(-1)^{|b & z|}`.
    #[inline]
    pub fn sign(&self, b: usize) -> f64 {
        if (b & self.z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(P ψ)[b]`.
    #[inline]
    pub fn apply_at(&self, amps: &[Complex64], b: usize) -> Complex64 {
        let src = b ^ self.x;
        self.phase * self.sign(src) * amps[src]
    }

    /// `⟨λ|P|ψ⟩`.
    pub fn matrix_element(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        bra.iter()
            .enumerate()
            .map(|(b, l)| l.conj() * self.apply_at(ket, b))
            .sum()
    }
}

/// One weighted Pauli word. The coefficient is real, so each term is Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub ops: Vec<Pauli>,
    pub coefficient: f64,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>, coefficient: f64) -> Self {
        PauliString { ops, coefficient }
    }

    /// Parses a word such as `"XZIY"`.
    pub fn parse(word: &str, coefficient: f64) -> Option<Self> {
        let ops = word.chars().map(Pauli::from_char).collect::<Option<Vec<_>>>()?;
        Some(PauliString { ops, coefficient })
    }

    /// Word with `ops` placed on the given qubits and identity elsewhere.
    pub fn on(n_qubits: usize, placed: &[(usize, Pauli)], coefficient: f64) -> Self {
        let mut ops = vec![Pauli::I; n_qubits];
        for &(q, p) in placed {
            ops[q] = p;
        }
        PauliString { ops, coefficient }
    }

    pub fn word(&self) -> String {
        self.ops.iter().map(|p| p.as_char()).collect()
    }
}

/// A real-weighted sum of Pauli words over a common qubit count. Terms with
/// equal words are merged on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<Pauli>, f64> = BTreeMap::new();
        let mut order: Vec<Vec<Pauli>> = Vec::new();
        for t in terms {
            if t.ops.len() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    got: t.ops.len(),
                });
            }
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "non-finite coefficient on {}",
                    t.word()
                )));
            }
            match merged.get_mut(&t.ops) {
                Some(c) => *c += t.coefficient,
                None => {
                    merged.insert(t.ops.clone(), t.coefficient);
                    order.push(t.ops);
                }
            }
        }
        let terms = order
            .into_iter()
            .map(|ops| {
                let c = merged[&ops];
                PauliString::new(ops, c)
            })
            .collect();
        Ok(PauliSum { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub(crate) fn masks(&self) -> Vec<(PauliMask, f64)> {
        self.terms
            .iter()
            .map(|t| (PauliMask::from_word(&t.ops), t.coefficient))
            .collect()
    }

    /// `H|ψ⟩` as a raw amplitude vector.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        self.check_dim(state)?;
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (mask, coeff) in self.masks() {
            for (b, o) in out.iter_mut().enumerate() {
                *o += coeff * mask.apply_at(amps, b);
            }
        }
        Ok(out)
    }

    /// Dense `2^n × 2^n` matrix, row-major.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (mask, coeff) in self.masks() {
            // P|b⟩ = phase · sign(b) |b ^ x⟩
            for b in 0..dim {
                m[b ^ mask.x][b] += coeff * mask.phase * mask.sign(b);
            }
        }
        m
    }

    fn check_dim(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: state.n_qubits(),
            });
        }
        Ok(())
    }

    /// Parses the Pauli-sum text format:
    ///
    /// ```text
    /// # comment
    /// QUBITS 4
    /// -0.4804 ZIII
    /// 0.1 XXYY
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line, msg };
            let Some(n) = n else {
                if tokens.len() != 2 || tokens[0] != "QUBITS" {
                    return Err(err(format!("expected `QUBITS <n>` header, got `{content}`")));
                }
                let parsed: usize = tokens[1]
                    .parse()
                    .map_err(|_| err(format!("bad qubit count `{}`", tokens[1])))?;
                if parsed == 0 {
                    return Err(err("Pauli sum needs at least one qubit".into()));
                }
                n = Some(parsed);
                continue;
            };
            if tokens.len() != 2 {
                return Err(err(format!("expected `<coefficient> <word>`, got `{content}`")));
            }
            let coefficient = parse_real(tokens[0], line)?;
            let term = PauliString::parse(tokens[1], coefficient)
                .ok_or_else(|| err(format!("bad Pauli word `{}`", tokens[1])))?;
            if term.ops.len() != n {
                return Err(err(format!(
                    "word `{}` has length {} but the header says {n} qubits",
                    tokens[1],
                    term.ops.len()
                )));
            }
            terms.push(term);
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `QUBITS <n>` header".into(),
        })?;
        PauliSum::new(n, terms)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PauliSum::parse(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n_qubits)?;
        for t in &self.terms {
            writeln!(f, "{:.16e} {}", t.coefficient, t.word())?;
        }
        Ok(())
    }
}

fn parse_real(token: &str, line: usize) -> Result<f64> {
    if let Ok(x) = token.parse::<f64>() {
        if x.is_finite() {
            return Ok(x);
        }
    }
    let lower = token.to_ascii_lowercase().replace("inf", "");
    if lower.contains('j') || lower.contains('i') {
        return Err(Error::NonRealCoefficient {
            line,
            token: token.to_string(),
        });
    }
    Err(Error::Parse {
        line,
        msg: format!("bad coefficient `{token}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_words_merge() {
        let h = PauliSum::parse("QUBITS 2\n1.0 ZI\n1.0 ZI\n-0.5 XX\n").unwrap();
        assert_eq!(h.terms().len(), 2);
        assert_eq!(h.terms()[0].coefficient, 2.0);
        assert_eq!(h.terms()[1].word(), "XX");
    }

    #[test]
    fn word_length_must_match_header() {
        let e = PauliSum::parse("QUBITS 3\n1.0 ZI\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn complex_coefficients_are_rejected() {
        for tok in ["0.5+0.1j", "1j", "(0.2+0.3i)"] {
            let e = PauliSum::parse(&format!("QUBITS 1\n{tok} Z\n")).unwrap_err();
            assert!(matches!(e, Error::NonRealCoefficient { .. }), "{tok}: {e}");
        }
        assert!(matches!(
            PauliSum::parse("QUBITS 1\nabc Z\n").unwrap_err(),
            Error::Parse { .. }
        ));
        assert!(PauliSum::parse("QUBITS 1\n1.0 Q\n").is_err());
        assert!(PauliSum::parse("1.0 Z\n").is_err());
    }

    #[test]
    fn display_round_trips() {
        let h = PauliSum::parse("QUBITS 3\n0.123456789012345678 XYZ\n-2 IIZ\n").unwrap();
        assert_eq!(PauliSum::parse(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn y_mask_matches_matrix() {
        // Y = [[0, -i], [i, 0]]
        let h = PauliSum::new(1, [PauliString::parse("Y", 1.0).unwrap()]).unwrap();
        let m = h.to_dense();
        assert_eq!(m[0][1], Complex64::new(0.0, -1.0));
        assert_eq!(m[1][0], Complex64::new(0.0, 1.0));
        assert_eq!(m[0][0], Complex64::new(0.0, 0.0));
    }
}
