//! Resource accounting in the conventions of the published comparison
//! tables: Bell pairs, auxiliary qubits, applied operations (the group and
//! target gates only; corrections and Bell preparation are listed apart)
//! and single-qubit measurements.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate_model::plan_groups;
use crate::protocol::{compile, Instruction, Program};
use crate::scenario::{fig2_parametric, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    /// Multi-controlled X: NOT, CNOT, Toffoli and wider.
    Mcx,
    /// Multi-controlled Z.
    Mcz,
    /// Multi-controlled U other than X or Z.
    Mcu(String),
    Hadamard,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OpTally {
    pub kind: GateKind,
    /// Number of qubits the gate acts on, controls included.
    pub arity: usize,
    pub count: usize,
}

impl OpTally {
    pub fn name(&self) -> String {
        match (&self.kind, self.arity) {
            (GateKind::Mcx, 1) => "X".into(),
            (GateKind::Mcx, 2) => "CNOT".into(),
            (GateKind::Mcx, 3) => "Toffoli".into(),
            (GateKind::Mcx, k) => format!("{k}-qubit Toffoli"),
            (GateKind::Mcz, 1) => "Z".into(),
            (GateKind::Mcz, 2) => "CZ".into(),
            (GateKind::Mcz, k) => format!("{k}-qubit CZ"),
            (GateKind::Mcu(u), 1) => u.clone(),
            (GateKind::Mcu(u), k) => format!("{k}-qubit controlled-{u}"),
            (GateKind::Hadamard, _) => "Hadamard".into(),
        }
    }
}

impl fmt::Display for OpTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.count, self.name())
    }
}

fn add(tallies: &mut Vec<OpTally>, kind: GateKind, arity: usize, count: usize) {
    match tallies.iter_mut().find(|t| t.kind == kind && t.arity == arity) {
        Some(t) => t.count += count,
        None => tallies.push(OpTally { kind, arity, count }),
    }
    tallies.sort_by(|a, b| (a.arity, &a.kind).cmp(&(b.arity, &b.kind)));
}

fn render(tallies: &[OpTally]) -> String {
    if tallies.is_empty() {
        return "-".into();
    }
    tallies.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ResourceReport {
    pub entangled_pairs: usize,
    pub auxiliary_qubits: usize,
    pub unconditional_ops: Vec<OpTally>,
    pub conditional_corrections: Vec<OpTally>,
    pub single_qubit_measurements: usize,
    pub classical_bits_sent: usize,
}

impl ResourceReport {
    /// Count of unconditional gates of `kind` acting on `arity` qubits.
    pub fn ops(&self, kind: &GateKind, arity: usize) -> usize {
        self.unconditional_ops
            .iter()
            .find(|t| &t.kind == kind && t.arity == arity)
            .map_or(0, |t| t.count)
    }

    pub fn total_ops(&self) -> usize {
        self.unconditional_ops.iter().map(|t| t.count).sum()
    }

    pub fn operations(&self) -> String {
        render(&self.unconditional_ops)
    }

    pub fn summary(&self) -> String {
        format!(
            "pairs={} aux={} ops={{{}}} corrections={{{}}} SM={} bits={}",
            self.entangled_pairs,
            self.auxiliary_qubits,
            self.operations(),
            render(&self.conditional_corrections),
            self.single_qubit_measurements,
            self.classical_bits_sent
        )
    }
}

fn kind_of(u: &crate::statevector::Unitary) -> GateKind {
    match u.name() {
        Some("X") => GateKind::Mcx,
        Some("Z") => GateKind::Mcz,
        Some(n) => GateKind::Mcu(n.to_string()),
        None => GateKind::Mcu("U".into()),
    }
}

/// Counts taken directly from the instruction stream.
pub fn account(program: &Program) -> ResourceReport {
    let mut r = ResourceReport::default();
    for ins in &program.instructions {
        match ins {
            Instruction::BellPrep { .. } => r.entangled_pairs += 1,
            Instruction::LocalMcx { controls, .. } => add(&mut r.unconditional_ops, GateKind::Mcx, controls.len() + 1, 1),
            Instruction::LocalMcu { controls, u, .. } => {
                add(&mut r.unconditional_ops, kind_of(u), controls.len() + 1, 1)
            }
            Instruction::MeasureZ { .. } | Instruction::MeasureX { .. } => r.single_qubit_measurements += 1,
            Instruction::Send { .. } => r.classical_bits_sent += 1,
            Instruction::CondX { .. } => add(&mut r.conditional_corrections, GateKind::Mcx, 1, 1),
            Instruction::CondMcz { controls, .. } => {
                add(&mut r.conditional_corrections, GateKind::Mcz, controls.len() + 1, 1)
            }
        }
    }
    r
}

fn published(pairs: usize, ops: &[(GateKind, usize, usize)], sm: usize) -> ResourceReport {
    let mut r = ResourceReport {
        entangled_pairs: pairs,
        single_qubit_measurements: sm,
        classical_bits_sent: sm,
        ..ResourceReport::default()
    };
    for (kind, arity, count) in ops {
        add(&mut r.unconditional_ops, kind.clone(), *arity, *count);
    }
    r
}

/// Published counts of the one-ebit-per-qubit baseline for the three-node,
/// `n`-qubits-per-node scenario: 3n−1 pairs, 3n−1 CNOTs, one 3n-qubit
/// Toffoli, 3n−1 Hadamards and 2(3n−1) measurements.
pub fn baseline_teleport(n: usize) -> ResourceReport {
    assert!(n >= 1, "baseline defined for n >= 1");
    let m = 3 * n - 1;
    published(
        m,
        &[
            (GateKind::Mcx, 2, m),
            (GateKind::Mcx, 3 * n, 1),
            (GateKind::Hadamard, 1, m),
        ],
        2 * m,
    )
}

/// A published row that is echoed, not simulated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublishedRow {
    pub method: &'static str,
    pub entangled: usize,
    pub auxiliary: usize,
    pub operations: &'static str,
    pub measurements: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Table1Case {
    BipartiteCase1,
    BipartiteCase2,
    Tripartite,
}

impl Table1Case {
    pub const ALL: [Table1Case; 3] = [Table1Case::BipartiteCase1, Table1Case::BipartiteCase2, Table1Case::Tripartite];

    pub fn scenario_name(self) -> &'static str {
        match self {
            Table1Case::BipartiteCase1 => "bipartite_case1",
            Table1Case::BipartiteCase2 => "bipartite_case2",
            Table1Case::Tripartite => "tripartite",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Table1Case::BipartiteCase1 => "Bipartite: Case 1",
            Table1Case::BipartiteCase2 => "Bipartite: Case 2",
            Table1Case::Tripartite => "Tripartite",
        }
    }

    /// Published counts for the one-ebit-per-qubit method.
    pub fn teleport(self) -> ResourceReport {
        match self {
            Table1Case::BipartiteCase1 => published(
                1,
                &[(GateKind::Mcx, 2, 1), (GateKind::Mcx, 3, 1), (GateKind::Hadamard, 1, 1)],
                2,
            ),
            Table1Case::BipartiteCase2 | Table1Case::Tripartite => published(
                2,
                &[(GateKind::Mcx, 2, 2), (GateKind::Mcx, 3, 1), (GateKind::Hadamard, 1, 2)],
                4,
            ),
        }
    }

    /// Published counts for the qudit controlled-elevation method.
    pub fn ce_published(self) -> PublishedRow {
        match self {
            Table1Case::BipartiteCase1 | Table1Case::BipartiteCase2 => PublishedRow {
                method: "CE",
                entangled: 1,
                auxiliary: 4,
                operations: "3 CE, 2 CNOT",
                measurements: "2 SM, 1 FM",
            },
            Table1Case::Tripartite => PublishedRow {
                method: "CE",
                entangled: 4,
                auxiliary: 4,
                operations: "3 CE, 3 CNOT",
                measurements: "3 SM, 1 FM",
            },
        }
    }
}

/// Accounts the compiled protocol for a scenario.
pub fn account_scenario(scenario: &Scenario) -> Result<ResourceReport> {
    let r = scenario.resolve()?;
    let plan = plan_groups(&r.spec, &r.ownership)?;
    Ok(account(&compile(&plan, &r.spec.u)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub case: Table1Case,
    pub proposed: ResourceReport,
    pub teleport: ResourceReport,
    pub ce: PublishedRow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub proposed: ResourceReport,
    pub baseline: ResourceReport,
}

/// Table 1 with the proposed column computed by compiling the bundled scenarios.
pub fn table1() -> Result<Vec<Table1Row>> {
    Table1Case::ALL
        .iter()
        .map(|&case| {
            let s = Scenario::bundled(case.scenario_name()).expect("bundled scenario");
            Ok(Table1Row {
                case,
                proposed: account_scenario(&s)?,
                teleport: case.teleport(),
                ce: case.ce_published(),
            })
        })
        .collect()
}

pub fn table2(n_values: &[usize]) -> Result<Vec<Table2Row>> {
    n_values
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::Scenario("table 2 needs n >= 1".into()));
            }
            Ok(Table2Row {
                n,
                proposed: account_scenario(&fig2_parametric(n))?,
                baseline: baseline_teleport(n),
            })
        })
        .collect()
}

pub fn render_table1(rows: &[Table1Row]) -> String {
    let mut out = String::new();
    out.push_str("Table 1: bipartite and tripartite Toffoli\n");
    out.push_str(&format!(
        "{:<18} {:<22} {:>9} {:>5}  {:<36} {}\n",
        "type", "method", "entangled", "aux", "operations", "measurements"
    ));
    for row in rows {
        let title = row.case.title();
        out.push_str(&format!(
            "{:<18} {:<22} {:>9} {:>5}  {:<36} {}\n",
            title,
            "CE (not simulated)",
            row.ce.entangled,
            row.ce.auxiliary,
            row.ce.operations,
            row.ce.measurements
        ));
        for (method, r) in [("teleport", &row.teleport), ("proposed", &row.proposed)] {
            out.push_str(&format!(
                "{:<18} {:<22} {:>9} {:>5}  {:<36} {} SM\n",
                "",
                method,
                r.entangled_pairs,
                r.auxiliary_qubits,
                r.operations(),
                r.single_qubit_measurements
            ));
        }
    }
    out
}

pub fn render_table2(rows: &[Table2Row]) -> String {
    let mut out = String::new();
    out.push_str("Table 2: 3 nodes x n qubits, controlled-X over 3n qubits\n");
    out.push_str(&format!(
        "{:>3} | {:>5} {:>3} {:>3}  {:<44} | {:>5} {:>3} {:>3}  {}\n",
        "n", "pairs", "aux", "SM", "proposed operations", "pairs", "aux", "SM", "teleport operations"
    ));
    for row in rows {
        let (p, b) = (&row.proposed, &row.baseline);
        out.push_str(&format!(
            "{:>3} | {:>5} {:>3} {:>3}  {:<44} | {:>5} {:>3} {:>3}  {}\n",
            row.n,
            p.entangled_pairs,
            p.auxiliary_qubits,
            p.single_qubit_measurements,
            p.operations(),
            b.entangled_pairs,
            b.auxiliary_qubits,
            b.single_qubit_measurements,
            b.operations()
        ));
    }
    out
}

/// Both tables as text.
pub fn render_tables(n_values: &[usize]) -> Result<String> {
    Ok(format!(
        "{}\n{}",
        render_table1(&table1()?),
        render_table2(&table2(n_values)?)
    ))
}
