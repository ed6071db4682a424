//! Equivalence checking of the compiled protocol against the monolithic
//! controlled-U, branch by branch.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::executor::{enumerate_branches, run_sampled};
use crate::gate_model::{plan_groups, DistributedGateSpec, Ownership};
use crate::protocol::{compile, Program};
use crate::resources::{account, ResourceReport};
use crate::statevector::{StateVector, Unitary};

pub const DEFAULT_TOL: f64 = 1e-12;

/// The target gate applied directly, ignoring node boundaries.
pub fn apply_ideal(spec: &DistributedGateSpec, own: &Ownership, input: &StateVector) -> Result<StateVector> {
    if input.num_qubits() != own.len() {
        return Err(Error::SizeMismatch {
            expected: own.len(),
            found: input.num_qubits(),
        });
    }
    let lookup = |l: &str| {
        own.index_of(l)
            .ok_or_else(|| Error::InvalidSpec(vec![crate::gate_model::ValidationError::UnknownLabel(l.to_string())]))
    };
    let controls = spec.controls.iter().map(|c| lookup(c)).collect::<Result<Vec<_>>>()?;
    let target = lookup(&spec.target)?;
    let mut out = input.clone();
    out.apply_controlled_u(&controls, target, &spec.u)?;
    Ok(out)
}

/// Complex-Gaussian amplitudes, normalized.
pub fn random_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<StateVector> {
    let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps)
}

/// Random 2×2 unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary {
    let mut g = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (g(), g());
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    // second column orthogonal to (a, b), with a random phase
    let phase = g();
    let phase = phase / phase.norm();
    let (c, d) = (-b.conj() * phase, a.conj() * phase);
    Unitary::new([[a, c], [b, d]]).expect("constructed unitary")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchCheck {
    pub input: usize,
    pub bits: String,
    pub probability: f64,
    pub max_deviation: f64,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecSummary {
    pub controls: Vec<String>,
    pub target: String,
    pub u: String,
    pub nodes: Vec<String>,
    pub control_groups: usize,
    pub data_qubits: usize,
    pub total_qubits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub spec: SpecSummary,
    pub tolerance: f64,
    pub inputs: usize,
    pub branches: Vec<BranchCheck>,
    pub max_deviation: f64,
    /// Largest |1 - Σ p| over inputs.
    pub max_probability_defect: f64,
    pub resources: ResourceReport,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &BranchCheck> {
        self.branches.iter().filter(|b| !b.pass)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        writeln!(
            f,
            "gate: controlled-{} [{}] -> {}",
            s.u,
            s.controls.join(","),
            s.target
        )?;
        writeln!(
            f,
            "nodes: {}  control groups: {}  qubits: {} data + {} Bell",
            s.nodes.join(","),
            s.control_groups,
            s.data_qubits,
            s.total_qubits - s.data_qubits
        )?;
        writeln!(
            f,
            "inputs: {}  branches checked: {}  failures: {}",
            self.inputs,
            self.branches.len(),
            self.failures().count()
        )?;
        writeln!(f, "max deviation: {:.3e} (tolerance {:.1e})", self.max_deviation, self.tolerance)?;
        writeln!(f, "max probability defect: {:.3e}", self.max_probability_defect)?;
        for b in self.failures().take(10) {
            writeln!(
                f,
                "  FAIL input {} branch {}: deviation {:.3e}, fidelity {:.12}",
                b.input, b.bits, b.max_deviation, b.fidelity
            )?;
        }
        writeln!(f, "resources: {}", self.resources.summary())?;
        write!(f, "result: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

fn summary(spec: &DistributedGateSpec, own: &Ownership, program: &Program, groups: usize) -> SpecSummary {
    SpecSummary {
        controls: spec.controls.clone(),
        target: spec.target.clone(),
        u: spec.u.to_string(),
        nodes: own.nodes().iter().map(ToString::to_string).collect(),
        control_groups: groups,
        data_qubits: program.data_qubits,
        total_qubits: program.num_qubits(),
    }
}

fn check_branch(
    ideal: &StateVector,
    input: usize,
    bits: String,
    probability: f64,
    final_data: Result<StateVector>,
    tol: f64,
) -> BranchCheck {
    let (max_deviation, fidelity) = match final_data {
        Ok(data) => (
            data.max_deviation(ideal).unwrap_or(f64::INFINITY),
            data.fidelity(ideal).unwrap_or(0.0),
        ),
        Err(_) => (f64::INFINITY, 0.0),
    };
    BranchCheck {
        input,
        bits,
        probability,
        max_deviation,
        fidelity,
        pass: max_deviation <= tol,
    }
}

fn assemble(
    spec: &DistributedGateSpec,
    own: &Ownership,
    program: &Program,
    groups: usize,
    inputs: usize,
    per_input: Vec<(Vec<BranchCheck>, f64)>,
    tol: f64,
) -> VerificationReport {
    let mut branches = Vec::new();
    let mut max_defect: f64 = 0.0;
    for (checks, defect) in per_input {
        max_defect = max_defect.max(defect);
        branches.extend(checks);
    }
    let max_deviation = branches.iter().map(|b| b.max_deviation).fold(0.0, f64::max);
    let pass = branches.iter().all(|b| b.pass) && !branches.is_empty();
    VerificationReport {
        spec: summary(spec, own, program, groups),
        tolerance: tol,
        inputs,
        branches,
        max_deviation,
        max_probability_defect: max_defect,
        resources: account(program),
        pass,
    }
}

/// Compiles `spec`, enumerates every branch for each input and compares
/// the data-qubit state with [`apply_ideal`] amplitude by amplitude.
pub fn verify_gate(
    spec: &DistributedGateSpec,
    own: &Ownership,
    inputs: &[StateVector],
    tol: f64,
) -> Result<VerificationReport> {
    let plan = plan_groups(spec, own)?;
    let program = compile(&plan, &spec.u);
    let per_input = inputs
        .par_iter()
        .enumerate()
        .map(|(k, input)| {
            let ideal = apply_ideal(spec, own, input)?;
            let branches = enumerate_branches(&program, input)?;
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            let checks = branches
                .iter()
                .map(|b| check_branch(&ideal, k, b.bits(), b.probability, b.data_state(&program), tol))
                .collect();
            Ok((checks, (1.0 - total).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, own, &program, plan.control_groups.len(), inputs.len(), per_input, tol))
}

/// Like [`verify_gate`] but draws `shots` seeded branches per input.
pub fn verify_sampled(
    spec: &DistributedGateSpec,
    own: &Ownership,
    inputs: &[StateVector],
    shots: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let plan = plan_groups(spec, own)?;
    let program = compile(&plan, &spec.u);
    let per_input = inputs
        .par_iter()
        .enumerate()
        .map(|(k, input)| {
            let ideal = apply_ideal(spec, own, input)?;
            let mut checks = Vec::with_capacity(shots);
            for s in 0..shots {
                let shot_seed = seed ^ ((k as u64) << 32) ^ s as u64;
                let b = run_sampled(&program, input, shot_seed)?;
                checks.push(check_branch(&ideal, k, b.bits(), b.probability, b.data_state(&program), tol));
            }
            Ok((checks, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, own, &program, plan.control_groups.len(), inputs.len(), per_input, tol))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthRow {
    /// Bits over the gate's controls then target.
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTable {
    pub columns: Vec<String>,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    /// Rows whose output differs from their input.
    pub fn changed(&self) -> impl Iterator<Item = &TruthRow> {
        self.rows.iter().filter(|r| r.input != r.output)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.columns.join(" "))?;
        for r in &self.rows {
            writeln!(f, "{} -> {}", r.input, r.output)?;
        }
        Ok(())
    }
}

/// Basis-state behaviour over the gate's qubits (other qubits held at 0),
/// obtained by running every branch of the compiled protocol.
pub fn truth_table(spec: &DistributedGateSpec, own: &Ownership) -> Result<TruthTable> {
    if !spec.u.is_permutation(1e-12) {
        return Err(Error::NonPermutation);
    }
    let plan = plan_groups(spec, own)?;
    let program = compile(&plan, &spec.u);
    let gate_qubits: Vec<usize> = spec
        .controls
        .iter()
        .chain(std::iter::once(&spec.target))
        .map(|l| own.index_of(l).expect("validated"))
        .collect();
    let n = own.len();
    let k = gate_qubits.len();
    let mask = |q: usize| 1usize << (n - 1 - q);

    let mut rows = Vec::with_capacity(1 << k);
    for row in 0..1usize << k {
        let input_bits: String = (0..k).map(|p| if row >> (k - 1 - p) & 1 == 1 { '1' } else { '0' }).collect();
        let index = gate_qubits
            .iter()
            .enumerate()
            .filter(|(p, _)| row >> (k - 1 - p) & 1 == 1)
            .fold(0, |acc, (_, &q)| acc | mask(q));
        let input = StateVector::basis(n, index)?;
        let mut output: Option<usize> = None;
        for b in enumerate_branches(&program, &input)? {
            let data = b.data_state(&program)?;
            let hit = data
                .amplitudes()
                .iter()
                .position(|a| (a.norm() - 1.0).abs() < 1e-12)
                .filter(|&i| data.amplitudes().iter().enumerate().all(|(j, a)| j == i || a.norm() < 1e-12));
            match (hit, output) {
                (Some(i), None) => output = Some(i),
                (Some(i), Some(o)) if i == o => {}
                _ => return Err(Error::NonDeterministic { input: input_bits }),
            }
        }
        let out = output.ok_or_else(|| Error::NonDeterministic {
            input: input_bits.clone(),
        })?;
        let output_bits = gate_qubits
            .iter()
            .map(|&q| if out & mask(q) != 0 { '1' } else { '0' })
            .collect();
        rows.push(TruthRow {
            input: input_bits,
            output: output_bits,
        });
    }
    Ok(TruthTable {
        columns: spec.controls.iter().chain(std::iter::once(&spec.target)).cloned().collect(),
        rows,
    })
}
