//! Stochastic growth of a circuit by identity-initialized blocks.
//!
//! Two-qubit blocks prefer pairs that are not yet entangled: an unordered
//! pair `{a, b}` is drawn with weight `(1 + cnots(a, b))^(-bias)`, and the
//! control/target orientation is a fair coin.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{BlockTemplate, Circuit, DictionaryBlock, Gate, KAK_CNOT_WEIGHT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionMode {
    #[default]
    End,
    /// Uniform over the `len + 1` gaps of the circuit.
    Anywhere,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InsertionPolicy {
    /// Standard deviation of the angles given to freshly inserted gates.
    pub epsilon_init: f64,
    pub dictionary: Vec<BlockTemplate>,
    /// Sampling weight per dictionary entry.
    pub block_weights: Vec<f64>,
    pub connectivity_bias: f64,
    pub position_mode: PositionMode,
}

impl Default for InsertionPolicy {
    fn default() -> Self {
        InsertionPolicy::with_dictionary(vec![BlockTemplate::Rotation, BlockTemplate::Entangler])
    }
}

impl InsertionPolicy {
    /// Uniform weights over `dictionary`, default angle spread and bias.
    pub fn with_dictionary(dictionary: Vec<BlockTemplate>) -> Self {
        let w = 1.0 / dictionary.len().max(1) as f64;
        InsertionPolicy {
            epsilon_init: 0.01,
            block_weights: vec![w; dictionary.len()],
            dictionary,
            connectivity_bias: 1.0,
            position_mode: PositionMode::End,
        }
    }

    /// The general two-qubit gate alone, falling back to the single-qubit
    /// block when there is only one wire.
    pub fn compilation(n_qubits: usize) -> Self {
        if n_qubits < 2 {
            InsertionPolicy::with_dictionary(vec![BlockTemplate::Rotation])
        } else {
            InsertionPolicy::with_dictionary(vec![BlockTemplate::Kak])
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dictionary.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        if self.block_weights.len() != self.dictionary.len() {
            return Err(Error::Config(format!(
                "{} block weights for {} dictionary entries",
                self.block_weights.len(),
                self.dictionary.len()
            )));
        }
        if self.block_weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Config("block weights must be non-negative".into()));
        }
        let total: f64 = self.block_weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("block weights sum to {total}, not 1")));
        }
        if !(self.epsilon_init >= 0.0) || !self.epsilon_init.is_finite() {
            return Err(Error::Config("epsilon_init must be a non-negative number".into()));
        }
        if !(self.connectivity_bias > 0.0) || !self.connectivity_bias.is_finite() {
            return Err(Error::Config("connectivity_bias must be positive".into()));
        }
        Ok(())
    }
}

/// Where a block lands: its qubits (control first) and the gate index it is
/// inserted before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub qubits: Vec<usize>,
    pub position: usize,
}

/// Draws a dictionary entry according to the policy weights.
pub fn choose_block(policy: &InsertionPolicy, rng: &mut impl Rng) -> Result<BlockTemplate> {
    policy.validate()?;
    let dist = WeightedIndex::new(&policy.block_weights)
        .map_err(|e| Error::Config(format!("block weights: {e}")))?;
    Ok(policy.dictionary[dist.sample(rng)])
}

/// As [`choose_block`], restricted to blocks that fit on `n_qubits` wires.
fn choose_fitting_block(policy: &InsertionPolicy, n_qubits: usize, rng: &mut impl Rng) -> Result<BlockTemplate> {
    policy.validate()?;
    let weights: Vec<f64> = policy
        .dictionary
        .iter()
        .zip(&policy.block_weights)
        .map(|(b, &w)| if b.arity() <= n_qubits { w } else { 0.0 })
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|_| {
        Error::InvalidBlock(format!("no dictionary block fits on {n_qubits} qubit(s)"))
    })?;
    Ok(policy.dictionary[dist.sample(rng)])
}

fn pair_cnots(circuit: &Circuit, a: usize, b: usize) -> usize {
    circuit
        .gates()
        .iter()
        .filter(|g| g.acts_on(a) && g.acts_on(b))
        .map(|g| match g {
            Gate::Cnot { .. } => 1,
            Gate::Kak(..) => KAK_CNOT_WEIGHT,
            _ => 0,
        })
        .sum()
}

pub fn choose_placement(
    circuit: &Circuit,
    block: BlockTemplate,
    policy: &InsertionPolicy,
    rng: &mut impl Rng,
) -> Result<Placement> {
    let n = circuit.n_qubits();
    if block.arity() > n {
        return Err(Error::InvalidBlock(format!(
            "{block:?} block needs {} qubits but the circuit has {n}",
            block.arity()
        )));
    }
    let qubits = match block.arity() {
        1 => vec![rng.random_range(0..n)],
        _ => {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let weights: Vec<f64> = pairs
                .iter()
                .map(|&(a, b)| (1.0 + pair_cnots(circuit, a, b) as f64).powf(-policy.connectivity_bias))
                .collect();
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::Config(format!("pair weights: {e}")))?;
            let (a, b) = pairs[dist.sample(rng)];
            if rng.random::<bool>() {
                vec![a, b]
            } else {
                vec![b, a]
            }
        }
    };
    let position = match policy.position_mode {
        PositionMode::End => circuit.len(),
        PositionMode::Anywhere => rng.random_range(0..=circuit.len()),
    };
    Ok(Placement { qubits, position })
}

/// One insertion step: a sampled block on sampled qubits, angles drawn from
/// `Normal(0, epsilon_init²)`. Returns the grown circuit and the block.
pub fn insert_block(
    circuit: &Circuit,
    policy: &InsertionPolicy,
    rng: &mut impl Rng,
) -> Result<(Circuit, DictionaryBlock)> {
    let template = choose_fitting_block(policy, circuit.n_qubits(), rng)?;
    let placement = choose_placement(circuit, template, policy, rng)?;
    let block = template.instantiate(&placement.qubits)?;
    let angles: Vec<f64> = (0..block.n_params())
        .map(|_| policy.epsilon_init * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut grown = circuit.clone();
    block.insert_into(&mut grown, placement.position, &angles)?;
    Ok((grown, block))
}

pub fn insert(circuit: &Circuit, policy: &InsertionPolicy, rng: &mut impl Rng) -> Result<Circuit> {
    Ok(insert_block(circuit, policy, rng)?.0)
}
