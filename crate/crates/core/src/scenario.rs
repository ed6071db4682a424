//! JSON scenario files and the bundled reference setups.
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "bipartite_case1",
//!   "nodes": ["A", "B"],
//!   "qubits": [{"label": "A1", "node": "A"}, {"label": "B1", "node": "B"}, {"label": "B2", "node": "B"}],
//!   "controls": ["A1", "B1"],
//!   "target": "B2",
//!   "u": "X",
//!   "seed": 1,
//!   "mode": "exhaustive",
//!   "shots": 100
//! }
//! ```
//!
//! `u` is `"X"`, `"Z"`, `"H"`, `"I"` or a 2×2 matrix of `[re, im]` pairs.
//! `input`, when present, is a list of `[re, im]` amplitudes over the data
//! qubits in declaration order.

use std::collections::HashSet;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate_model::{validate_spec, DistributedGateSpec, Ownership};
use crate::statevector::{StateVector, Unitary};

pub const SCENARIO_VERSION: u32 = 1;

/// Names accepted by [`Scenario::bundled`]; `fig2_parametric` takes an
/// optional `:n` suffix (default 2).
pub const BUNDLED: [&str; 4] = ["bipartite_case1", "bipartite_case2", "tripartite", "fig2_parametric"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitDecl {
    pub label: String,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateMatrix {
    Named(String),
    Explicit([[[f64; 2]; 2]; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exhaustive,
    Sampled,
}

fn default_shots() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<String>,
    pub qubits: Vec<QubitDecl>,
    pub controls: Vec<String>,
    pub target: String,
    pub u: GateMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_shots")]
    pub shots: usize,
}

/// A scenario turned into library types.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub ownership: Ownership,
    pub spec: DistributedGateSpec,
    pub input: Option<StateVector>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Looks up a bundled scenario, e.g. `tripartite` or `fig2_parametric:4`.
    pub fn bundled(name: &str) -> Option<Self> {
        let (base, arg) = match name.split_once(':') {
            Some((b, a)) => (b, Some(a)),
            None => (name, None),
        };
        match (base, arg) {
            ("bipartite_case1", None) => Some(toffoli(
                "bipartite_case1",
                &[("A1", "A"), ("B1", "B"), ("B2", "B")],
                &["A1", "B1"],
                "B2",
            )),
            ("bipartite_case2", None) => Some(toffoli(
                "bipartite_case2",
                &[("A1", "A"), ("A2", "A"), ("B1", "B")],
                &["A1", "A2"],
                "B1",
            )),
            ("tripartite", None) => Some(toffoli(
                "tripartite",
                &[("A1", "A"), ("B1", "B"), ("C", "C")],
                &["A1", "B1"],
                "C",
            )),
            ("fig2_parametric", arg) => {
                let n = match arg {
                    None => 2,
                    Some(a) => a.parse().ok().filter(|&n| n >= 1)?,
                };
                Some(fig2_parametric(n))
            }
            _ => None,
        }
    }

    /// Checks the scenario and builds the ownership map, gate and optional input.
    pub fn resolve(&self) -> Result<Resolved> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported version {} (expected {SCENARIO_VERSION})",
                self.version
            )));
        }
        let mut nodes = HashSet::new();
        for n in &self.nodes {
            if !nodes.insert(n.as_str()) {
                return Err(Error::Scenario(format!("duplicate node `{n}`")));
            }
        }
        for q in &self.qubits {
            if !nodes.contains(q.node.as_str()) {
                return Err(Error::Scenario(format!(
                    "qubit `{}` is owned by undeclared node `{}`",
                    q.label, q.node
                )));
            }
        }
        let ownership = Ownership::new(self.qubits.iter().map(|q| (q.label.as_str(), q.node.as_str())))?;
        let u = match &self.u {
            GateMatrix::Named(name) => match name.as_str() {
                "X" | "x" => Unitary::x(),
                "Z" | "z" => Unitary::z(),
                "H" | "h" => Unitary::h(),
                "I" | "i" => Unitary::identity(),
                other => return Err(Error::Scenario(format!("unknown gate `{other}`"))),
            },
            GateMatrix::Explicit(m) => {
                let c = |e: [f64; 2]| Complex64::new(e[0], e[1]);
                Unitary::new_unchecked([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
            }
        };
        let spec = DistributedGateSpec::new(self.controls.iter().cloned(), self.target.clone(), u);
        validate_spec(&spec, &ownership).map_err(Error::InvalidSpec)?;

        let input = match &self.input {
            None => None,
            Some(amps) => {
                let want = 1usize << ownership.len();
                if amps.len() != want {
                    return Err(Error::Scenario(format!(
                        "input has {} amplitudes, expected {want}",
                        amps.len()
                    )));
                }
                Some(StateVector::from_amplitudes(
                    amps.iter().map(|a| Complex64::new(a[0], a[1])).collect(),
                )?)
            }
        };
        Ok(Resolved { ownership, spec, input })
    }
}

fn toffoli(name: &str, qubits: &[(&str, &str)], controls: &[&str], target: &str) -> Scenario {
    let mut nodes: Vec<String> = Vec::new();
    for (_, n) in qubits {
        if !nodes.iter().any(|m| m == n) {
            nodes.push(n.to_string());
        }
    }
    Scenario {
        version: SCENARIO_VERSION,
        name: name.to_string(),
        nodes,
        qubits: qubits
            .iter()
            .map(|(l, n)| QubitDecl {
                label: l.to_string(),
                node: n.to_string(),
            })
            .collect(),
        controls: controls.iter().map(|c| c.to_string()).collect(),
        target: target.to_string(),
        u: GateMatrix::Named("X".into()),
        input: None,
        seed: 1,
        mode: Mode::Exhaustive,
        shots: default_shots(),
    }
}

/// Three nodes A, B, C with `n` qubits each; every qubit but `C<n>` is a
/// control and `C<n>` is the target.
pub fn fig2_parametric(n: usize) -> Scenario {
    let labels: Vec<(String, &str)> = ["A", "B", "C"]
        .iter()
        .flat_map(|node| (1..=n).map(move |i| (format!("{node}{i}"), *node)))
        .collect();
    let target = format!("C{n}");
    let qubits: Vec<(&str, &str)> = labels.iter().map(|(l, n)| (l.as_str(), *n)).collect();
    let controls: Vec<&str> = qubits.iter().map(|(l, _)| *l).filter(|l| *l != target).collect();
    toffoli(&format!("fig2_parametric_n{n}"), &qubits, &controls, &target)
}
