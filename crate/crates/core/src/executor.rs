//! Runs a [`Program`] on a central state vector while enforcing that every
//! gate stays on one node and every condition bit arrives over the
//! classical channel before it is read.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate_model::NodeId;
use crate::protocol::{Instruction, Program, Tag};
use crate::statevector::{Basis, MeasurementRecord, StateVector, Unitary, IMPOSSIBLE_BRANCH};

/// Default cap on measurements for exhaustive enumeration.
pub const DEFAULT_MEASUREMENT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityViolation {
    pub instruction: usize,
    pub reason: String,
}

impl fmt::Display for LocalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "instruction {}: {}", self.instruction, self.reason)
    }
}

/// Static check that gates are local and classical dataflow is sound.
pub fn check_locality(program: &Program) -> std::result::Result<(), Vec<LocalityViolation>> {
    let layout = &program.layout;
    let mut violations = Vec::new();
    // tag -> node holding the bit, and the set of nodes it was delivered to
    let mut holder: HashMap<&Tag, &NodeId> = HashMap::new();
    let mut delivered: HashSet<(&Tag, &NodeId)> = HashSet::new();

    for (i, ins) in program.instructions.iter().enumerate() {
        let mut flag = |reason: String| {
            violations.push(LocalityViolation {
                instruction: i,
                reason,
            })
        };
        let qubits = ins.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= layout.len()) {
            flag(format!("qubit index {q} outside the register"));
            continue;
        }
        match ins {
            Instruction::BellPrep { local, remote, nodes } => {
                if layout.owner(*local) != &nodes.0 || layout.owner(*remote) != &nodes.1 {
                    flag(format!(
                        "Bell pair {}/{} not owned by {}/{}",
                        layout.label(*local),
                        layout.label(*remote),
                        nodes.0,
                        nodes.1
                    ));
                }
            }
            Instruction::Send { tag, from, to } => match holder.get(tag) {
                None => flag(format!("sends `{tag}` before it is measured")),
                Some(&h) if h != from && !delivered.contains(&(tag, from)) => {
                    flag(format!("node {from} sends `{tag}` it does not hold"))
                }
                Some(_) => {
                    delivered.insert((tag, to));
                }
            },
            _ => {
                let node = ins.node().expect("local instruction");
                for &q in &qubits {
                    let owner = layout.owner(q);
                    if owner != node {
                        flag(format!(
                            "node {node} touches {} owned by {owner}",
                            layout.label(q)
                        ));
                    }
                }
                if let Some(tag) = ins.condition() {
                    let local = holder.get(tag) == Some(&node);
                    if !local && !delivered.contains(&(tag, node)) {
                        flag(format!("node {node} reads `{tag}` which was never sent to it"));
                    }
                }
                if let Some(tag) = ins.produces() {
                    if holder.insert(tag, node).is_some() {
                        flag(format!("tag `{tag}` produced twice"));
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Message {
    pub tag: Tag,
    pub from: NodeId,
    pub to: NodeId,
    pub bit: u8,
}

/// Instantaneous, ordered classical delivery.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClassicalChannel {
    pub messages: Vec<Message>,
    pub received: BTreeMap<NodeId, BTreeMap<Tag, u8>>,
}

impl ClassicalChannel {
    pub fn deliver(&mut self, tag: Tag, from: NodeId, to: NodeId, bit: u8) {
        self.received.entry(to.clone()).or_default().insert(tag.clone(), bit);
        self.messages.push(Message { tag, from, to, bit });
    }

    pub fn read(&self, node: &NodeId, tag: &Tag) -> Option<u8> {
        self.received.get(node).and_then(|m| m.get(tag)).copied()
    }
}

/// One executed instruction with its resolved classical data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub index: usize,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bit: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub applied: Option<bool>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>3} {}", self.index, self.text)?;
        match (self.bit, self.probability, self.applied) {
            (Some(b), Some(p), _) => write!(f, " = {b} p={p:.12}"),
            (Some(b), None, Some(applied)) => {
                write!(f, " = {b} {}", if applied { "applied" } else { "skipped" })
            }
            (Some(b), None, None) => write!(f, " bit={b}"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchResult {
    /// Outcomes in program measurement order.
    pub outcomes: Vec<(Tag, u8)>,
    pub probability: f64,
    pub final_state: StateVector,
    pub measurements: Vec<MeasurementRecord>,
    pub channel: ClassicalChannel,
    pub trace: Vec<TraceEntry>,
}

impl BranchResult {
    /// Outcome bits as a string, e.g. `"0110"`.
    pub fn bits(&self) -> String {
        self.outcomes.iter().map(|(_, b)| char::from(b'0' + b)).collect()
    }

    pub fn outcome(&self, tag: &str) -> Option<u8> {
        self.outcomes.iter().find(|(t, _)| t.as_str() == tag).map(|(_, b)| *b)
    }

    /// State of the data qubits with every measured ancilla factored out.
    pub fn data_state(&self, program: &Program) -> Result<StateVector> {
        let keep: Vec<usize> = (0..program.data_qubits).collect();
        let mut fixed = BTreeMap::new();
        for m in &self.measurements {
            fixed.insert(m.qubit, m.outcome);
        }
        for q in program.data_qubits..program.num_qubits() {
            if !fixed.contains_key(&q) {
                return Err(Error::UnmeasuredAncilla(program.layout.label(q).to_string()));
            }
        }
        fixed.retain(|q, _| *q >= program.data_qubits);
        let fixed: Vec<_> = fixed.into_iter().collect();
        self.final_state.extract_subregister(&keep, &fixed)
    }

    pub fn render_trace(&self) -> String {
        self.trace.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Execution state shared by the forced, enumerated and sampled drivers.
#[derive(Clone)]
struct Run {
    state: StateVector,
    pc: usize,
    outcomes: Vec<(Tag, u8)>,
    probability: f64,
    measurements: Vec<MeasurementRecord>,
    channel: ClassicalChannel,
    trace: Vec<TraceEntry>,
    local_bits: HashMap<(NodeId, Tag), u8>,
}

struct PendingMeasure {
    qubit: usize,
    basis: Basis,
}

impl Run {
    fn new(program: &Program, input: &StateVector) -> Result<Self> {
        let n = program.num_qubits();
        let state = if input.num_qubits() == program.data_qubits && n > program.data_qubits {
            input.extend_zero(n - program.data_qubits)?
        } else if input.num_qubits() == n {
            input.clone()
        } else {
            return Err(Error::SizeMismatch {
                expected: program.data_qubits,
                found: input.num_qubits(),
            });
        };
        Ok(Run {
            state,
            pc: 0,
            outcomes: Vec::new(),
            probability: 1.0,
            measurements: Vec::new(),
            channel: ClassicalChannel::default(),
            trace: Vec::new(),
            local_bits: HashMap::new(),
        })
    }

    fn read_bit(&self, node: &NodeId, tag: &Tag) -> Result<u8> {
        self.local_bits
            .get(&(node.clone(), tag.clone()))
            .copied()
            .or_else(|| self.channel.read(node, tag))
            .ok_or_else(|| Error::UnresolvedTag(tag.to_string()))
    }

    fn log(&mut self, program: &Program, bit: Option<u8>, probability: Option<f64>, applied: Option<bool>) {
        self.trace.push(TraceEntry {
            index: self.pc,
            text: program.instructions[self.pc].render(&program.layout),
            bit,
            probability,
            applied,
        });
    }

    /// Runs until the next measurement (left pending) or the end.
    fn advance(&mut self, program: &Program) -> Result<Option<PendingMeasure>> {
        while let Some(ins) = program.instructions.get(self.pc) {
            match ins {
                Instruction::BellPrep { local, remote, .. } => {
                    self.state.prepare_bell(*local, *remote)?;
                    self.log(program, None, None, None);
                }
                Instruction::LocalMcx { controls, target, .. } => {
                    self.state.apply_controlled_u(controls, *target, &Unitary::x())?;
                    self.log(program, None, None, None);
                }
                Instruction::LocalMcu {
                    controls, target, u, ..
                } => {
                    self.state.apply_controlled_u(controls, *target, u)?;
                    self.log(program, None, None, None);
                }
                Instruction::MeasureZ { qubit, .. } => {
                    return Ok(Some(PendingMeasure {
                        qubit: *qubit,
                        basis: Basis::Z,
                    }))
                }
                Instruction::MeasureX { qubit, .. } => {
                    return Ok(Some(PendingMeasure {
                        qubit: *qubit,
                        basis: Basis::X,
                    }))
                }
                Instruction::Send { tag, from, to } => {
                    let bit = self.read_bit(from, tag)?;
                    self.channel.deliver(tag.clone(), from.clone(), to.clone(), bit);
                    self.log(program, Some(bit), None, None);
                }
                Instruction::CondX { node, qubit, tag } => {
                    let bit = self.read_bit(node, tag)?;
                    if bit == 1 {
                        self.state.apply(*qubit, &Unitary::x())?;
                    }
                    self.log(program, Some(bit), None, Some(bit == 1));
                }
                Instruction::CondMcz {
                    node,
                    controls,
                    target,
                    tag,
                } => {
                    let bit = self.read_bit(node, tag)?;
                    if bit == 1 {
                        self.state.apply_controlled_u(controls, *target, &Unitary::z())?;
                    }
                    self.log(program, Some(bit), None, Some(bit == 1));
                }
            }
            self.pc += 1;
        }
        Ok(None)
    }

    fn resolve(&mut self, program: &Program, pending: &PendingMeasure, outcome: u8) -> Result<()> {
        let ins = &program.instructions[self.pc];
        let (node, tag) = match ins {
            Instruction::MeasureZ { node, tag, .. } | Instruction::MeasureX { node, tag, .. } => (node, tag),
            _ => unreachable!("pending measurement points at a measure instruction"),
        };
        let record = self
            .state
            .measure_forced(pending.qubit, pending.basis, outcome)
            .map_err(|e| match e {
                Error::ImpossibleBranch {
                    outcome, probability, ..
                } => Error::ImpossibleMeasurement {
                    tag: tag.to_string(),
                    qubit: program.layout.label(pending.qubit).to_string(),
                    outcome,
                    probability,
                },
                other => other,
            })?;
        self.probability *= record.probability;
        self.measurements.push(record);
        self.outcomes.push((tag.clone(), record.outcome));
        self.local_bits.insert((node.clone(), tag.clone()), record.outcome);
        self.log(program, Some(record.outcome), Some(record.probability), None);
        self.pc += 1;
        Ok(())
    }

    fn finish(self) -> BranchResult {
        BranchResult {
            outcomes: self.outcomes,
            probability: self.probability,
            final_state: self.state,
            measurements: self.measurements,
            channel: self.channel,
            trace: self.trace,
        }
    }
}

fn ensure_local(program: &Program) -> Result<()> {
    check_locality(program).map_err(Error::Locality)
}

/// Runs one branch with every measurement outcome supplied by `forced`.
pub fn execute_branch(program: &Program, input: &StateVector, forced: &BTreeMap<Tag, u8>) -> Result<BranchResult> {
    ensure_local(program)?;
    let mut run = Run::new(program, input)?;
    while let Some(pending) = run.advance(program)? {
        let tag = program.instructions[run.pc].produces().expect("measure");
        let bit = *forced.get(tag).ok_or_else(|| Error::MissingOutcome(tag.to_string()))?;
        run.resolve(program, &pending, bit)?;
    }
    Ok(run.finish())
}

/// Maps a bit string (program measurement order) to forced outcomes.
pub fn forced_from_bits(program: &Program, bits: &str) -> Result<BTreeMap<Tag, u8>> {
    let expected = program.tags.len();
    if bits.chars().count() != expected {
        return Err(Error::BranchLength {
            expected,
            found: bits.chars().count(),
            order: program.tags.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
        });
    }
    program
        .tags
        .iter()
        .zip(bits.chars())
        .map(|(t, c)| match c {
            '0' => Ok((t.clone(), 0)),
            '1' => Ok((t.clone(), 1)),
            _ => Err(Error::Scenario(format!("branch bit `{c}` is not 0 or 1"))),
        })
        .collect()
}

/// Every branch with nonzero probability, ordered lexicographically by
/// outcome bits in program measurement order.
pub fn enumerate_branches(program: &Program, input: &StateVector) -> Result<Vec<BranchResult>> {
    enumerate_branches_with_limit(program, input, DEFAULT_MEASUREMENT_LIMIT)
}

pub fn enumerate_branches_with_limit(program: &Program, input: &StateVector, limit: usize) -> Result<Vec<BranchResult>> {
    let count = program.num_measurements();
    if count > limit {
        return Err(Error::MeasurementLimit { count, limit });
    }
    ensure_local(program)?;
    let mut out = Vec::new();
    let mut stack = vec![Run::new(program, input)?];
    while let Some(mut run) = stack.pop() {
        match run.advance(program)? {
            None => out.push(run.finish()),
            Some(pending) => {
                let p1 = run.state.probability(pending.qubit, pending.basis, 1)?;
                let p0 = run.state.probability(pending.qubit, pending.basis, 0)?;
                // push 1 first so 0 is explored first
                if p1 > IMPOSSIBLE_BRANCH {
                    let mut one = run.clone();
                    one.resolve(program, &pending, 1)?;
                    stack.push(one);
                }
                if p0 > IMPOSSIBLE_BRANCH {
                    run.resolve(program, &pending, 0)?;
                    stack.push(run);
                }
            }
        }
    }
    Ok(out)
}

/// One branch with outcomes drawn from the Born rule, reproducible per seed.
pub fn run_sampled(program: &Program, input: &StateVector, seed: u64) -> Result<BranchResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_with_rng(program, input, &mut rng)
}

pub fn run_with_rng<R: Rng + ?Sized>(program: &Program, input: &StateVector, rng: &mut R) -> Result<BranchResult> {
    ensure_local(program)?;
    let mut run = Run::new(program, input)?;
    while let Some(pending) = run.advance(program)? {
        let p0 = run.state.probability(pending.qubit, pending.basis, 0)?;
        let outcome = if rng.random::<f64>() < p0 { 0 } else { 1 };
        run.resolve(program, &pending, outcome)?;
    }
    Ok(run.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate_model::{plan_groups, DistributedGateSpec, Ownership};
    use crate::protocol::compile;
    use num_complex::Complex64;

    fn bipartite_case1() -> Program {
        let own = Ownership::new([("A1", "A"), ("B1", "B"), ("B2", "B")]).unwrap();
        let spec = DistributedGateSpec::toffoli(["A1", "B1"], "B2");
        compile(&plan_groups(&spec, &own).unwrap(), &spec.u)
    }

    fn tripartite() -> Program {
        let own = Ownership::new([("A1", "A"), ("B1", "B"), ("C", "C")]).unwrap();
        let spec = DistributedGateSpec::toffoli(["A1", "B1"], "C");
        compile(&plan_groups(&spec, &own).unwrap(), &spec.u)
    }

    fn d_state() -> StateVector {
        let d: Vec<_> = (0..8)
            .map(|k| Complex64::new(0.1 + 0.05 * k as f64, 0.02 * k as f64 - 0.07))
            .collect();
        let n = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(d.into_iter().map(|z| z / n).collect()).unwrap()
    }

    /// d_6 and d_7 exchanged: the Toffoli image of [`d_state`].
    fn toffoli_image(s: &StateVector) -> Vec<Complex64> {
        let mut a = s.amplitudes().to_vec();
        a.swap(6, 7);
        a
    }

    #[test]
    fn locality_ok_for_compiled() {
        assert_eq!(check_locality(&bipartite_case1()), Ok(()));
        assert_eq!(check_locality(&tripartite()), Ok(()));
    }

    #[test]
    fn cross_node_gate_rejected() {
        let mut p = bipartite_case1();
        let a1 = p.layout.index_of("A1").unwrap();
        let b2 = p.layout.index_of("B2").unwrap();
        p.instructions.insert(
            0,
            Instruction::LocalMcx {
                node: NodeId::new("A"),
                controls: vec![a1],
                target: b2,
            },
        );
        let v = check_locality(&p).unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].instruction, 0);
        assert!(matches!(
            execute_branch(&p, &d_state(), &BTreeMap::new()),
            Err(Error::Locality(_))
        ));
    }

    #[test]
    fn unsent_condition_rejected() {
        let mut p = bipartite_case1();
        p.instructions.retain(|i| !matches!(i, Instruction::Send { tag, .. } if tag.as_str() == "z_A"));
        let v = check_locality(&p).unwrap_err();
        assert!(v[0].reason.contains("never sent"), "{v:?}");
    }

    #[test]
    fn bipartite_case1_branch_00() {
        let p = bipartite_case1();
        let input = d_state();
        let forced = forced_from_bits(&p, "00").unwrap();
        let r = execute_branch(&p, &input, &forced).unwrap();
        assert!((r.probability - 0.25).abs() < 1e-15);
        let data = r.data_state(&p).unwrap();
        for (a, b) in data.amplitudes().iter().zip(toffoli_image(&input)) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    /// Full 32×32 matrix product of the circuit on the forced branch,
    /// built independently of the executor.
    #[test]
    fn bipartite_case1_branch_11_matches_matrix_oracle() {
        let p = bipartite_case1();
        let input = d_state();
        let r = execute_branch(&p, &input, &forced_from_bits(&p, "11").unwrap()).unwrap();

        // qubits: A1=0 B1=1 B2=2 A_e=3 B_e1=4, MSB first
        let n = 5;
        let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
        let dim = 1 << n;
        let perm = |f: &dyn Fn(usize) -> usize| -> Vec<Vec<f64>> {
            let mut m = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                m[f(i)][i] = 1.0;
            }
            m
        };
        let flip = |q: usize| move |i: usize| i ^ (1 << (n - 1 - q));
        let cnot = |c: usize, t: usize| move |i: usize| if bit(i, c) == 1 { flip(t)(i) } else { i };
        let h = |q: usize| {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut m = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                let j = flip(q)(i);
                m[i][i] = if bit(i, q) == 1 { -s } else { s };
                m[j][i] = s;
            }
            m
        };
        let proj = |q: usize, b: usize| {
            let mut m = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                if bit(i, q) == b {
                    m[i][i] = 1.0;
                }
            }
            m
        };
        let mul = |m: &Vec<Vec<f64>>, v: &Vec<Complex64>| -> Vec<Complex64> {
            m.iter().map(|row| row.iter().zip(v).map(|(x, a)| a * x).sum()).collect()
        };
        let mut v = input.extend_zero(2).unwrap().amplitudes().to_vec();
        v = mul(&h(3), &v);
        v = mul(&perm(&cnot(3, 4)), &v);
        v = mul(&perm(&cnot(0, 3)), &v);
        v = mul(&proj(3, 1), &v);
        v = mul(&perm(&flip(4)), &v); // z_A = 1
        v = mul(&perm(&|i| if bit(i, 1) == 1 && bit(i, 4) == 1 { flip(2)(i) } else { i }), &v);
        v = mul(&h(4), &v);
        v = mul(&proj(4, 1), &v);
        // x_A = 1: Z on A1
        v = v
            .iter()
            .enumerate()
            .map(|(i, a)| if bit(i, 0) == 1 { -a } else { *a })
            .collect();
        let norm_sqr: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm_sqr - 0.25).abs() < 1e-12);
        let v: Vec<_> = v.iter().map(|a| a / norm_sqr.sqrt()).collect();

        assert!((r.probability - norm_sqr).abs() < 1e-12);
        for (a, b) in r.final_state.amplitudes().iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
        let data = r.data_state(&p).unwrap();
        for (a, b) in data.amplitudes().iter().zip(toffoli_image(&input)) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn local_program_on_all_ones() {
        let own = Ownership::new([("C1", "C"), ("C2", "C"), ("C3", "C")]).unwrap();
        let spec = DistributedGateSpec::toffoli(["C1", "C2"], "C3");
        let p = compile(&plan_groups(&spec, &own).unwrap(), &spec.u);
        let r = execute_branch(&p, &StateVector::basis(3, 0b110).unwrap(), &BTreeMap::new()).unwrap();
        assert_eq!(r.final_state, StateVector::basis(3, 0b111).unwrap());
        let all = enumerate_branches(&p, &StateVector::basis(3, 0b110).unwrap()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].probability, 1.0);
    }

    #[test]
    fn enumerate_counts_and_order() {
        let p = bipartite_case1();
        let rs = enumerate_branches(&p, &d_state()).unwrap();
        let bits: Vec<_> = rs.iter().map(BranchResult::bits).collect();
        assert_eq!(bits, ["00", "01", "10", "11"]);
        for r in &rs {
            assert!((r.probability - 0.25).abs() < 1e-12);
        }
        let rs = enumerate_branches(&tripartite(), &d_state()).unwrap();
        assert_eq!(rs.len(), 16);
        let total: f64 = rs.iter().map(|r| r.probability).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn enumerate_limit() {
        assert_eq!(
            enumerate_branches_with_limit(&tripartite(), &d_state(), 3).unwrap_err(),
            Error::MeasurementLimit { count: 4, limit: 3 }
        );
    }

    #[test]
    fn sampled_is_deterministic() {
        let p = tripartite();
        let a = run_sampled(&p, &d_state(), 42).unwrap();
        let b = run_sampled(&p, &d_state(), 42).unwrap();
        assert_eq!(a, b);
        let all = enumerate_branches(&p, &d_state()).unwrap();
        let same = all.iter().find(|r| r.bits() == a.bits()).unwrap();
        assert_eq!(same.final_state, a.final_state);
    }

    #[test]
    fn branch_length_and_missing_outcome() {
        let p = bipartite_case1();
        assert_eq!(
            forced_from_bits(&p, "000").unwrap_err(),
            Error::BranchLength { expected: 2, found: 3, order: "z_A x_A".into() }
        );
        let mut forced = BTreeMap::new();
        forced.insert(Tag::new("z_A"), 0);
        assert_eq!(
            execute_branch(&p, &d_state(), &forced).unwrap_err(),
            Error::MissingOutcome("x_A".into())
        );
    }

    #[test]
    fn impossible_branch_names_measurement() {
        // measure a data qubit that is definitely |0>
        let own = Ownership::new([("A1", "A")]).unwrap();
        let p = Program {
            instructions: vec![Instruction::MeasureZ {
                node: NodeId::new("A"),
                qubit: 0,
                tag: Tag::new("m"),
            }],
            layout: own,
            data_qubits: 1,
            tags: vec![Tag::new("m")],
        };
        let err = execute_branch(&p, &StateVector::zero(1).unwrap(), &forced_from_bits(&p, "1").unwrap()).unwrap_err();
        assert!(matches!(err, Error::ImpossibleMeasurement { ref tag, ref qubit, .. } if tag == "m" && qubit == "A1"));
        let rs = enumerate_branches(&p, &StateVector::zero(1).unwrap()).unwrap();
        assert_eq!(rs.len(), 1);
    }

    #[test]
    fn trace_lines() {
        let p = bipartite_case1();
        let r = execute_branch(&p, &d_state(), &forced_from_bits(&p, "10").unwrap()).unwrap();
        let text = r.render_trace();
        assert_eq!(text.lines().count(), p.instructions.len());
        assert!(text.contains("  2 measure_z A A_e -> z_A = 1 p=0.500000000000\n"));
        assert!(text.contains("cond_x B B_e1 if z_A = 1 applied"));
        assert!(text.contains("cond_mcz A [] -> A1 if x_A = 0 skipped"));
        assert_eq!(r.channel.messages.len(), 2);
        assert_eq!(r.channel.read(&NodeId::new("B"), &Tag::new("z_A")), Some(1));
    }
}
