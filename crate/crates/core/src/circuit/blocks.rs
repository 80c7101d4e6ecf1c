//! Identity-initializable gate blocks inserted during the structural search.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Shape of a dictionary entry, before it is bound to concrete qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockTemplate {
    /// `RotZ, RotX, RotZ` on one qubit: a general single-qubit unitary.
    Rotation,
    /// `CNOT, RotZ(c), RotX(c), RotZ(t), RotX(t), CNOT`.
    Entangler,
    /// One general two-qubit gate.
    Kak,
}

impl BlockTemplate {
    pub fn arity(self) -> usize {
        match self {
            BlockTemplate::Rotation => 1,
            BlockTemplate::Entangler | BlockTemplate::Kak => 2,
        }
    }

    /// Binds the template to `qubits`; for two-qubit blocks the first qubit
    /// is the control.
    pub fn instantiate(self, qubits: &[usize]) -> Result<DictionaryBlock> {
        if qubits.len() != self.arity() {
            return Err(Error::InvalidBlock(format!(
                "{self:?} block takes {} qubits, got {}",
                self.arity(),
                qubits.len()
            )));
        }
        match self {
            BlockTemplate::Rotation => Ok(build_one_qubit_block(qubits[0])),
            BlockTemplate::Entangler => build_two_qubit_block(qubits[0], qubits[1]),
            BlockTemplate::Kak => build_kak_block(qubits[0], qubits[1]),
        }
    }
}

/// A template bound to concrete qubits. All angles zero gives the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryBlock {
    pub template: BlockTemplate,
    pub qubits: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl DictionaryBlock {
    pub fn arity(&self) -> usize {
        self.template.arity()
    }

    pub fn n_params(&self) -> usize {
        self.gates.iter().map(Gate::n_params).sum()
    }

    /// Appends the block to `circuit` with the given angles.
    pub fn append_to(&self, circuit: &mut Circuit, angles: &[f64]) -> Result<()> {
        self.insert_into(circuit, circuit.len(), angles)
    }

    /// Inserts the block before gate `position`.
    pub fn insert_into(&self, circuit: &mut Circuit, position: usize, angles: &[f64]) -> Result<()> {
        if angles.len() != self.n_params() {
            return Err(Error::ParamCount {
                expected: self.n_params(),
                got: angles.len(),
            });
        }
        let mut rest = angles;
        for (k, gate) in self.gates.iter().enumerate() {
            let (mine, tail) = rest.split_at(gate.n_params());
            circuit.insert(position + k, *gate, mine)?;
            rest = tail;
        }
        Ok(())
    }

    /// The block alone on `n_qubits` wires.
    pub fn to_circuit(&self, n_qubits: usize, angles: &[f64]) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        self.append_to(&mut c, angles)?;
        Ok(c)
    }
}

pub fn build_one_qubit_block(qubit: usize) -> DictionaryBlock {
    DictionaryBlock {
        template: BlockTemplate::Rotation,
        qubits: vec![qubit],
        gates: vec![Gate::RotZ(qubit), Gate::RotX(qubit), Gate::RotZ(qubit)],
    }
}

pub fn build_two_qubit_block(control: usize, target: usize) -> Result<DictionaryBlock> {
    if control == target {
        return Err(Error::InvalidBlock(format!(
            "two-qubit block needs distinct qubits, got {control} twice"
        )));
    }
    let cnot = Gate::Cnot { control, target };
    Ok(DictionaryBlock {
        template: BlockTemplate::Entangler,
        qubits: vec![control, target],
        gates: vec![
            cnot,
            Gate::RotZ(control),
            Gate::RotX(control),
            Gate::RotZ(target),
            Gate::RotX(target),
            cnot,
        ],
    })
}

pub fn build_kak_block(a: usize, b: usize) -> Result<DictionaryBlock> {
    if a == b {
        return Err(Error::InvalidBlock(format!(
            "two-qubit block needs distinct qubits, got {a} twice"
        )));
    }
    Ok(DictionaryBlock {
        template: BlockTemplate::Kak,
        qubits: vec![a, b],
        gates: vec![Gate::Kak(a, b)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_counts() {
        assert_eq!(build_one_qubit_block(3).n_params(), 3);
        let b = build_two_qubit_block(0, 1).unwrap();
        assert_eq!(b.n_params(), 4);
        let c = b.to_circuit(2, &[0.0; 4]).unwrap();
        assert_eq!((c.count_cnots(), c.count_params()), (2, 4));
        assert_eq!(build_kak_block(1, 0).unwrap().n_params(), 15);
    }

    #[test]
    fn equal_qubits_rejected() {
        assert!(matches!(
            build_two_qubit_block(2, 2),
            Err(Error::InvalidBlock(_))
        ));
        assert!(build_kak_block(0, 0).is_err());
        assert!(BlockTemplate::Entangler.instantiate(&[1]).is_err());
    }

    #[test]
    fn insert_keeps_prefix_and_suffix() {
        let mut c = Circuit::new(2);
        c.push(Gate::RotX(0), &[0.5]).unwrap();
        c.push(Gate::RotX(1), &[0.7]).unwrap();
        build_one_qubit_block(1)
            .insert_into(&mut c, 1, &[0.1, 0.2, 0.3])
            .unwrap();
        assert_eq!(c.params(), &[0.5, 0.1, 0.2, 0.3, 0.7]);
        c.validate().unwrap();
    }
}
