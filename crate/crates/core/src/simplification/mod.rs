//! Rewrite rules that shrink a circuit without changing what it computes.
//!
//! Two gates are *consecutive* when nothing acts on their shared wire in
//! between; gates on other wires may sit between them in the gate list.
//! Structural rules:
//!
//! 1. a CNOT whose control wire has not been touched yet is removed
//!    (zero input only);
//! 2. a leading `RotZ` on a wire is removed (zero input only);
//! 3. two consecutive identical CNOTs cancel;
//! 4. consecutive same-axis rotations merge, and rotations with
//!    `|θ| < 1e-12` are dropped;
//! 5. runs of four or more single-qubit rotations collapse to an Euler
//!    triplet.
//!
//! Rule 6 ([`cost_aware_removal`]) deletes gates whose removal barely moves
//! the cost. General two-qubit gates are barriers for every structural rule.

mod euler;

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;

use euler::Axis;

use crate::circuit::{Circuit, Gate, GateKind, Op};
use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::simulator::cost_gradient;

const ZERO_ANGLE: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewriteReport {
    pub gates_removed: usize,
    pub rotations_fused: usize,
    /// Rewrite passes that changed the circuit.
    pub passes: usize,
    /// Applications of rules 1 through 6, in order.
    pub rule_counts: [usize; 6],
}

impl RewriteReport {
    pub fn is_noop(&self) -> bool {
        self.gates_removed == 0 && self.rotations_fused == 0 && self.rule_counts == [0; 6]
    }

    pub fn absorb(&mut self, other: &RewriteReport) {
        self.gates_removed += other.gates_removed;
        self.rotations_fused += other.rotations_fused;
        self.passes += other.passes;
        for (a, b) in self.rule_counts.iter_mut().zip(other.rule_counts) {
            *a += b;
        }
    }
}

impl fmt::Display for RewriteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gates_removed = {}", self.gates_removed)?;
        writeln!(f, "rotations_fused = {}", self.rotations_fused)?;
        writeln!(f, "passes = {}", self.passes)?;
        for (i, c) in self.rule_counts.iter().enumerate() {
            writeln!(f, "rule{} = {c}", i + 1)?;
        }
        Ok(())
    }
}

/// Order in which rule 6 tries its candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateOrder {
    /// Ascending gradient magnitude, CNOTs last.
    #[default]
    Gradient,
    /// Gate-list order.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateSelector {
    pub order: CandidateOrder,
    /// Tentative deletions per call; `None` means `min(10, gate count)`.
    pub max_candidates: Option<usize>,
}

impl Default for CandidateSelector {
    fn default() -> Self {
        CandidateSelector {
            order: CandidateOrder::Gradient,
            max_candidates: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifyConfig {
    /// Relative cost increase tolerated by rule 6.
    pub threshold: f64,
    pub selector: CandidateSelector,
    pub cost_aware: bool,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            threshold: 1e-4,
            selector: CandidateSelector::default(),
            cost_aware: true,
        }
    }
}

fn rotation_axis(gate: &Gate) -> Option<(usize, Axis)> {
    match *gate {
        Gate::RotZ(q) => Some((q, Axis::Z)),
        Gate::RotX(q) => Some((q, Axis::X)),
        _ => None,
    }
}

fn rotation_gate(q: usize, axis: Axis) -> Gate {
    match axis {
        Axis::Z => Gate::RotZ(q),
        Axis::X => Gate::RotX(q),
    }
}

/// Maps an angle into `(-2π, 2π]`; rotations have period `4π`.
fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % (4.0 * PI);
    if t <= -2.0 * PI {
        t += 4.0 * PI;
    } else if t > 2.0 * PI {
        t -= 4.0 * PI;
    }
    t
}

fn prev_on_wire(ops: &[Op], i: usize, q: usize) -> Option<usize> {
    (0..i).rev().find(|&j| ops[j].gate.acts_on(q))
}

fn next_on_wire(ops: &[Op], i: usize, q: usize) -> Option<usize> {
    (i + 1..ops.len()).find(|&j| ops[j].gate.acts_on(q))
}

fn commutes_through(cnot: &Gate, rot: &Gate) -> bool {
    match (*cnot, *rot) {
        (Gate::Cnot { control, .. }, Gate::RotZ(q)) => control == q,
        (Gate::Cnot { target, .. }, Gate::RotX(q)) => target == q,
        _ => false,
    }
}

/// Moves each rotation toward the front through every CNOT it commutes with.
fn commute_front(ops: &mut Vec<Op>) -> usize {
    let mut moves = 0;
    for i in 0..ops.len() {
        let Some((q, _)) = rotation_axis(&ops[i].gate) else {
            continue;
        };
        let mut k = i;
        while let Some(j) = prev_on_wire(ops, k, q) {
            if !commutes_through(&ops[j].gate, &ops[k].gate) {
                break;
            }
            let op = ops.remove(k);
            ops.insert(j, op);
            k = j;
            moves += 1;
        }
    }
    moves
}

/// Commutes single-qubit rotations toward the front: `RotZ` through a
/// CNOT's control and `RotX` through its target.
pub fn canonicalize(circuit: &Circuit) -> Result<Circuit> {
    if circuit.contains_kind(GateKind::Kak) {
        return Err(Error::UnsupportedGate(
            "canonicalization of general two-qubit gates".into(),
        ));
    }
    let mut ops = circuit.ops();
    commute_front(&mut ops);
    Circuit::from_ops(circuit.n_qubits(), ops)
}

fn rule_untouched_control(ops: &mut Vec<Op>) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < ops.len() {
        if let Gate::Cnot { control, .. } = ops[i].gate {
            if prev_on_wire(ops, i, control).is_none() {
                ops.remove(i);
                count += 1;
                continue;
            }
        }
        i += 1;
    }
    count
}

fn rule_leading_z(ops: &mut Vec<Op>) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < ops.len() {
        if let Gate::RotZ(q) = ops[i].gate {
            if prev_on_wire(ops, i, q).is_none() {
                ops.remove(i);
                count += 1;
                continue;
            }
        }
        i += 1;
    }
    count
}

fn rule_cnot_pairs(ops: &mut Vec<Op>) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < ops.len() {
        if let Gate::Cnot { control, target } = ops[i].gate {
            let j = next_on_wire(ops, i, control);
            if j.is_some() && j == next_on_wire(ops, i, target) {
                let j = j.expect("checked");
                if ops[j].gate == ops[i].gate {
                    ops.remove(j);
                    ops.remove(i);
                    count += 1;
                    continue;
                }
            }
        }
        i += 1;
    }
    count
}

fn rule_merge(ops: &mut Vec<Op>) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < ops.len() {
        let Some((q, axis)) = rotation_axis(&ops[i].gate) else {
            i += 1;
            continue;
        };
        if let Some(j) = next_on_wire(ops, i, q) {
            if rotation_axis(&ops[j].gate) == Some((q, axis)) {
                let theta = ops.remove(j).angles[0];
                ops[i].angles[0] = normalize_angle(ops[i].angles[0] + theta);
                count += 1;
                continue;
            }
        }
        if ops[i].angles[0].abs() < ZERO_ANGLE {
            ops.remove(i);
            count += 1;
            continue;
        }
        i += 1;
    }
    count
}

fn rule_euler(ops: &mut Vec<Op>, zero_input: bool) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < ops.len() {
        let Some((q, first_axis)) = rotation_axis(&ops[i].gate) else {
            i += 1;
            continue;
        };
        let prev = prev_on_wire(ops, i, q);
        if prev.is_some_and(|p| ops[p].gate.is_rotation()) {
            i += 1;
            continue;
        }
        let mut run = vec![i];
        while let Some(j) = next_on_wire(ops, *run.last().expect("non-empty"), q) {
            if !ops[j].gate.is_rotation() {
                break;
            }
            run.push(j);
        }
        let at_front = zero_input && prev.is_none();
        let fuse = run.len() >= 4 || (at_front && run.len() == 3 && first_axis == Axis::X);
        if !fuse {
            i += 1;
            continue;
        }
        let outer = match prev.map(|p| ops[p].gate) {
            _ if at_front => Axis::Z,
            Some(Gate::Cnot { target, .. }) if target == q => Axis::X,
            _ => Axis::Z,
        };
        let seq: Vec<(Axis, f64)> = run
            .iter()
            .map(|&j| (rotation_axis(&ops[j].gate).expect("rotation").1, ops[j].angles[0]))
            .collect();
        let fused = euler::decompose(&euler::product(&seq), outer);
        for &j in run.iter().rev() {
            ops.remove(j);
        }
        for (k, (axis, theta)) in fused.into_iter().enumerate() {
            ops.insert(i + k, Op::new(rotation_gate(q, axis), vec![normalize_angle(theta)]));
        }
        count += 1;
        i += 1;
    }
    count
}

/// Structural rules 1–5 to a fixed point, for circuits run on `|0…0⟩`.
pub fn simplify_structural(circuit: &Circuit) -> Result<(Circuit, RewriteReport)> {
    simplify_structural_with(circuit, true)
}

/// Structural rules to a fixed point. Rules 1 and 2 only hold on the
/// all-zeros input and are skipped unless `zero_input` is set.
pub fn simplify_structural_with(circuit: &Circuit, zero_input: bool) -> Result<(Circuit, RewriteReport)> {
    let mut ops = circuit.ops();
    let mut report = RewriteReport::default();
    let cap = 10 * ops.len() + 10;
    let mut iterations = 0;
    loop {
        if iterations >= cap {
            return Err(Error::TerminationFailure(iterations));
        }
        iterations += 1;
        let moved = commute_front(&mut ops);
        let mut counts = [0usize; 5];
        if zero_input {
            counts[0] = rule_untouched_control(&mut ops);
            counts[1] = rule_leading_z(&mut ops);
        }
        counts[2] = rule_cnot_pairs(&mut ops);
        counts[3] = rule_merge(&mut ops);
        counts[4] = rule_euler(&mut ops, zero_input);
        for (a, b) in report.rule_counts.iter_mut().zip(counts) {
            *a += b;
        }
        if moved > 0 || counts.iter().any(|&c| c > 0) {
            report.passes += 1;
        }
        if counts.iter().all(|&c| c == 0) {
            break;
        }
    }
    report.rotations_fused = report.rule_counts[3] + report.rule_counts[4];
    report.gates_removed = circuit.len().saturating_sub(ops.len());
    let out = Circuit::from_ops(circuit.n_qubits(), ops)?;
    Ok((out, report))
}

fn candidate_order(circuit: &Circuit, problem: &Problem, selector: &CandidateSelector) -> Result<Vec<usize>> {
    let eligible = |g: &Gate| !matches!(g, Gate::GlobalPhase);
    let mut idx: Vec<usize> = (0..circuit.len()).filter(|&i| eligible(&circuit.gates()[i])).collect();
    if selector.order == CandidateOrder::Gradient {
        let grad = cost_gradient(circuit, problem)?;
        let score = |i: usize| -> f64 {
            let slots = circuit.slots(i);
            if slots.is_empty() {
                f64::INFINITY
            } else {
                grad[slots].iter().map(|g| g * g).sum::<f64>().sqrt()
            }
        };
        idx.sort_by(|&a, &b| score(a).total_cmp(&score(b)).then(a.cmp(&b)));
    }
    Ok(idx)
}

fn op_key(op: &Op) -> (Gate, Vec<u64>) {
    (op.gate, op.angles.iter().map(|a| a.to_bits()).collect())
}

/// Rule 6: tentatively deletes gates, in selector order, keeping a deletion
/// when the cost stays within `threshold` (relative to the entry cost, with
/// a floor of `1e-6` on its magnitude) of the entry value.
pub fn cost_aware_removal(
    circuit: &Circuit,
    problem: &Problem,
    threshold: f64,
    selector: &CandidateSelector,
) -> Result<(Circuit, RewriteReport)> {
    if !(threshold >= 0.0) {
        return Err(Error::Config(format!("threshold must be non-negative, got {threshold}")));
    }
    let zero_input = problem.zero_input();
    let entry_cost = problem.cost(circuit)?;
    let budget = entry_cost + threshold * entry_cost.abs().max(1e-6);
    let limit = selector.max_candidates.unwrap_or_else(|| circuit.len().min(10));
    let mut report = RewriteReport::default();
    let mut current = circuit.clone();
    let mut tried: HashSet<(Gate, Vec<u64>)> = HashSet::new();
    let mut attempts = 0;
    'outer: while attempts < limit {
        let order = candidate_order(&current, problem, selector)?;
        let ops = current.ops();
        for i in order {
            if attempts >= limit {
                break 'outer;
            }
            if !tried.insert(op_key(&ops[i])) {
                continue;
            }
            attempts += 1;
            let mut trial = current.clone();
            trial.remove(i);
            if problem.cost(&trial)? <= budget {
                report.rule_counts[5] += 1;
                let (next, sub) = simplify_structural_with(&trial, zero_input)?;
                report.absorb(&sub);
                current = next;
                continue 'outer;
            }
        }
        break;
    }
    report.gates_removed = circuit.len().saturating_sub(current.len());
    report.rotations_fused = report.rule_counts[3] + report.rule_counts[4];
    Ok((current, report))
}

/// Structural rules, then rule 6 (when enabled), then structural rules again.
pub fn simplify(circuit: &Circuit, problem: &Problem, config: &SimplifyConfig) -> Result<(Circuit, RewriteReport)> {
    let zero_input = problem.zero_input();
    let (mut current, mut report) = simplify_structural_with(circuit, zero_input)?;
    if config.cost_aware {
        let (next, sub) = cost_aware_removal(&current, problem, config.threshold, &config.selector)?;
        report.absorb(&sub);
        let (next, sub) = simplify_structural_with(&next, zero_input)?;
        report.absorb(&sub);
        current = next;
    }
    report.gates_removed = circuit.len().saturating_sub(current.len());
    report.rotations_fused = report.rule_counts[3] + report.rule_counts[4];
    Ok((current, report))
}
