//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of gates over `n_qubits` wires together
//! with a flat vector of angles. Each parameterized gate owns a contiguous
//! range of angle slots; slots are laid out in gate order, so the mapping
//! between slots and gates is a bijection by construction.

mod ansatz;
mod blocks;
mod text;

pub use ansatz::{build_hea, build_product_ansatz};
pub use blocks::{
    build_kak_block, build_one_qubit_block, build_two_qubit_block, BlockTemplate, DictionaryBlock,
};
pub use text::{parse_circuit, read_circuit, write_circuit};

use std::fmt;

use crate::error::{Error, Result};

/// Number of angles carried by a general two-qubit gate.
pub const KAK_PARAMS: usize = 15;

/// Reporting weight of one general two-qubit gate in CNOT equivalents.
pub const KAK_CNOT_WEIGHT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    RotZ,
    RotX,
    Cnot,
    Kak,
    GlobalPhase,
}

impl GateKind {
    pub fn n_params(self) -> usize {
        match self {
            GateKind::RotZ | GateKind::RotX | GateKind::GlobalPhase => 1,
            GateKind::Cnot => 0,
            GateKind::Kak => KAK_PARAMS,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::RotZ | GateKind::RotX => 1,
            GateKind::Cnot | GateKind::Kak => 2,
            GateKind::GlobalPhase => 0,
        }
    }
}

/// A gate and the wires it acts on.
///
/// `RotZ(θ) = exp(-iθZ/2)` and `RotX(θ) = exp(-iθX/2)`. `Kak` is the
/// 15-angle general two-qubit gate
/// `(u1⊗u2)·exp(-i(θx XX + θy YY + θz ZZ)/2)·(u3⊗u4)` where each `u` is a
/// Z-X-Z rotation triplet. `GlobalPhase(φ)` multiplies the state by `e^{iφ}`;
/// it only matters for phase-sensitive costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    RotZ(usize),
    RotX(usize),
    Cnot { control: usize, target: usize },
    Kak(usize, usize),
    GlobalPhase,
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::RotZ(_) => GateKind::RotZ,
            Gate::RotX(_) => GateKind::RotX,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Kak(..) => GateKind::Kak,
            Gate::GlobalPhase => GateKind::GlobalPhase,
        }
    }

    pub fn n_params(&self) -> usize {
        self.kind().n_params()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (arr, len) = match *self {
            Gate::RotZ(q) | Gate::RotX(q) => ([q, 0], 1),
            Gate::Cnot { control, target } => ([control, target], 2),
            Gate::Kak(a, b) => ([a, b], 2),
            Gate::GlobalPhase => ([0, 0], 0),
        };
        arr.into_iter().take(len)
    }

    pub fn acts_on(&self, qubit: usize) -> bool {
        self.qubits().any(|q| q == qubit)
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Gate::RotZ(_) | Gate::RotX(_))
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Kak(..))
    }

    /// Same gate with qubits relabelled through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::RotZ(q) => Gate::RotZ(map(q)),
            Gate::RotX(q) => Gate::RotX(map(q)),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: map(control),
                target: map(target),
            },
            Gate::Kak(a, b) => Gate::Kak(map(a), map(b)),
            Gate::GlobalPhase => Gate::GlobalPhase,
        }
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::InvalidGate(format!(
                    "{self} references qubit {q} on a {n_qubits}-qubit circuit"
                )));
            }
        }
        match *self {
            Gate::Cnot { control, target } if control == target => Err(Error::InvalidGate(
                format!("CNOT control and target are both {control}"),
            )),
            Gate::Kak(a, b) if a == b => Err(Error::InvalidGate(format!(
                "two-qubit gate acts twice on qubit {a}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::RotZ(q) => write!(f, "RZ({q})"),
            Gate::RotX(q) => write!(f, "RX({q})"),
            Gate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            Gate::Kak(a, b) => write!(f, "KAK({a},{b})"),
            Gate::GlobalPhase => write!(f, "PHASE"),
        }
    }
}

/// A gate together with its own angles, detached from any circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: Gate,
    pub angles: Vec<f64>,
}

impl Op {
    pub fn new(gate: Gate, angles: Vec<f64>) -> Self {
        Op { gate, angles }
    }

    pub fn fixed(gate: Gate) -> Self {
        Op { gate, angles: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    /// First angle slot of each gate.
    offsets: Vec<usize>,
    params: Vec<f64>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            offsets: Vec::new(),
            params: Vec::new(),
        }
    }

    /// Builds a circuit from detached ops, validating every gate.
    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = Op>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for op in ops {
            c.push(op.gate, &op.angles)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::ParamCount {
                expected: self.params.len(),
                got: params.len(),
            });
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    pub fn with_params(mut self, params: &[f64]) -> Result<Self> {
        self.set_params(params)?;
        Ok(self)
    }

    /// Angle slots owned by gate `index`.
    pub fn slots(&self, index: usize) -> std::ops::Range<usize> {
        let start = self.offsets[index];
        start..start + self.gates[index].n_params()
    }

    pub fn gate_params(&self, index: usize) -> &[f64] {
        &self.params[self.slots(index)]
    }

    pub fn push(&mut self, gate: Gate, angles: &[f64]) -> Result<()> {
        self.insert(self.gates.len(), gate, angles)
    }

    pub fn insert(&mut self, index: usize, gate: Gate, angles: &[f64]) -> Result<()> {
        gate.check(self.n_qubits)?;
        if angles.len() != gate.n_params() {
            return Err(Error::ParamCount {
                expected: gate.n_params(),
                got: angles.len(),
            });
        }
        if index > self.gates.len() {
            return Err(Error::InvalidCircuit(format!(
                "insert position {index} past end of {}-gate circuit",
                self.gates.len()
            )));
        }
        let slot = if index == self.gates.len() {
            self.params.len()
        } else {
            self.offsets[index]
        };
        self.params.splice(slot..slot, angles.iter().copied());
        self.gates.insert(index, gate);
        self.offsets.insert(index, slot);
        for off in &mut self.offsets[index + 1..] {
            *off += angles.len();
        }
        Ok(())
    }

    /// Removes gate `index` and returns it with its angles.
    pub fn remove(&mut self, index: usize) -> Op {
        let range = self.slots(index);
        let width = range.len();
        let angles: Vec<f64> = self.params.drain(range).collect();
        let gate = self.gates.remove(index);
        self.offsets.remove(index);
        for off in &mut self.offsets[index..] {
            *off -= width;
        }
        Op { gate, angles }
    }

    /// Appends every gate of `other` (which must share the qubit count).
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        for op in other.ops() {
            self.push(op.gate, &op.angles)?;
        }
        Ok(())
    }

    /// Detached copies of every gate with its angles, in order.
    pub fn ops(&self) -> Vec<Op> {
        (0..self.gates.len())
            .map(|i| Op::new(self.gates[i], self.gate_params(i).to_vec()))
            .collect()
    }

    pub fn count_cnots(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Cnot { .. } => 1,
                Gate::Kak(..) => KAK_CNOT_WEIGHT,
                _ => 0,
            })
            .sum()
    }

    pub fn count_two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn count_params(&self) -> usize {
        self.params.len()
    }

    /// Number of two-qubit gates acting on the unordered pair `{a, b}`.
    pub fn pair_count(&self, a: usize, b: usize) -> usize {
        self.gates
            .iter()
            .filter(|g| g.is_two_qubit() && g.acts_on(a) && g.acts_on(b))
            .count()
    }

    pub fn contains_kind(&self, kind: GateKind) -> bool {
        self.gates.iter().any(|g| g.kind() == kind)
    }

    /// Structural equality: same wires and gate sequence, angles ignored.
    pub fn same_structure(&self, other: &Circuit) -> bool {
        self.n_qubits == other.n_qubits && self.gates == other.gates
    }

    /// The inverse circuit: reversed order with every angle negated.
    ///
    /// The general two-qubit gate is not closed under this map, so circuits
    /// containing one are rejected.
    pub fn inverse(&self) -> Result<Circuit> {
        if self.contains_kind(GateKind::Kak) {
            return Err(Error::UnsupportedGate(
                "inverse of a general two-qubit gate".into(),
            ));
        }
        let ops = self.ops().into_iter().rev().map(|mut op| {
            for a in &mut op.angles {
                *a = -*a;
            }
            op
        });
        Circuit::from_ops(self.n_qubits, ops)
    }

    /// Checks the slot bookkeeping invariants.
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidCircuit("zero qubits".into()));
        }
        let mut next = 0;
        for (i, g) in self.gates.iter().enumerate() {
            g.check(self.n_qubits)?;
            if self.offsets[i] != next {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} starts at slot {} but {next} expected",
                    self.offsets[i]
                )));
            }
            next += g.n_params();
        }
        if next != self.params.len() {
            return Err(Error::InvalidCircuit(format!(
                "{} angle slots but gates reference {next}",
                self.params.len()
            )));
        }
        Ok(())
    }
}
