//! Network description, qubit ownership, and grouping of a global gate's
//! controls by owning node.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Unitary, UNITARY_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(label: impl Into<String>) -> Self {
        NodeId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

/// Register order and the node owning each qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ownership {
    labels: Vec<String>,
    owners: Vec<NodeId>,
    index: BTreeMap<String, usize>,
}

impl Ownership {
    pub fn new<L, N>(qubits: impl IntoIterator<Item = (L, N)>) -> Result<Self>
    where
        L: Into<String>,
        N: Into<NodeId>,
    {
        let mut own = Ownership {
            labels: Vec::new(),
            owners: Vec::new(),
            index: BTreeMap::new(),
        };
        for (label, node) in qubits {
            own.push(label.into(), node.into())?;
        }
        Ok(own)
    }

    fn push(&mut self, label: String, node: NodeId) -> Result<usize> {
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        self.owners.push(node);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Owner of the qubit at register `index`.
    pub fn owner(&self, index: usize) -> &NodeId {
        &self.owners[index]
    }

    pub fn owner_of(&self, label: &str) -> Option<&NodeId> {
        self.index_of(label).map(|i| &self.owners[i])
    }

    /// Distinct nodes in order of first ownership.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut seen = HashSet::new();
        self.owners
            .iter()
            .filter(|n| seen.insert(*n))
            .cloned()
            .collect()
    }
}

/// A controlled-`u` gate whose operands may live on different nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedGateSpec {
    pub controls: Vec<String>,
    pub target: String,
    pub u: Unitary,
}

impl DistributedGateSpec {
    pub fn new<S: Into<String>>(controls: impl IntoIterator<Item = S>, target: impl Into<String>, u: Unitary) -> Self {
        DistributedGateSpec {
            controls: controls.into_iter().map(Into::into).collect(),
            target: target.into(),
            u,
        }
    }

    pub fn toffoli<S: Into<String>>(controls: impl IntoIterator<Item = S>, target: impl Into<String>) -> Self {
        Self::new(controls, target, Unitary::x())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ValidationError {
    UnknownLabel(String),
    DuplicateControl(String),
    TargetInControls(String),
    NonUnitary(f64),
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::UnknownLabel(l) => write!(f, "unknown qubit `{l}`"),
            ValidationError::DuplicateControl(l) => write!(f, "control `{l}` listed twice"),
            ValidationError::TargetInControls(l) => write!(f, "target `{l}` is also a control"),
            ValidationError::NonUnitary(d) => write!(f, "u is not unitary (deviation {d:e})"),
        }
    }
}

/// Collects every problem with `spec` rather than stopping at the first.
pub fn validate_spec(spec: &DistributedGateSpec, own: &Ownership) -> std::result::Result<(), Vec<ValidationError>> {
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for c in &spec.controls {
        if own.index_of(c).is_none() {
            errors.push(ValidationError::UnknownLabel(c.clone()));
        }
        if !seen.insert(c.as_str()) {
            errors.push(ValidationError::DuplicateControl(c.clone()));
        }
    }
    if own.index_of(&spec.target).is_none() {
        errors.push(ValidationError::UnknownLabel(spec.target.clone()));
    }
    if seen.contains(spec.target.as_str()) {
        errors.push(ValidationError::TargetInControls(spec.target.clone()));
    }
    let dev = spec.u.unitarity_deviation();
    if dev.is_nan() || dev > UNITARY_TOL {
        errors.push(ValidationError::NonUnitary(dev));
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetGroup {
    pub node: NodeId,
    pub controls: Vec<String>,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControlGroup {
    pub node: NodeId,
    pub controls: Vec<String>,
    /// Bell half held by the group's node.
    pub bell_local: String,
    /// Bell half held by the target node.
    pub bell_target: String,
}

/// Controls grouped by node, one Bell pair per non-target group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPlan {
    pub target_group: TargetGroup,
    pub control_groups: Vec<ControlGroup>,
    /// Data qubits followed by the generated Bell qubits.
    pub layout: Ownership,
    pub data_qubits: usize,
}

impl GroupPlan {
    /// Same plan with control groups reordered by `order` (a permutation
    /// of group positions). Bell qubits keep their labels but are laid out
    /// in the new group order.
    pub fn reordered(&self, order: &[usize]) -> Result<GroupPlan> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.control_groups.len()).collect::<Vec<_>>() {
            return Err(Error::BadPartition(format!("{order:?} is not a group permutation")));
        }
        let groups: Vec<_> = order.iter().map(|&i| self.control_groups[i].clone()).collect();
        let data = (0..self.data_qubits).map(|i| (self.layout.label(i).to_string(), self.layout.owner(i).clone()));
        let mut layout = Ownership::new(data)?;
        for g in &groups {
            layout.push(g.bell_local.clone(), g.node.clone())?;
            layout.push(g.bell_target.clone(), self.target_group.node.clone())?;
        }
        Ok(GroupPlan {
            target_group: self.target_group.clone(),
            control_groups: groups,
            layout,
            data_qubits: self.data_qubits,
        })
    }
}

fn fresh_label(own: &Ownership, base: String) -> String {
    let mut label = base;
    while own.index_of(&label).is_some() {
        label.push('\'');
    }
    label
}

/// Groups controls by owning node. Groups appear in order of first
/// appearance of their node in the control list; controls owned by the
/// target's node join the target group and need no Bell pair.
pub fn plan_groups(spec: &DistributedGateSpec, own: &Ownership) -> Result<GroupPlan> {
    validate_spec(spec, own).map_err(Error::InvalidSpec)?;

    let target_node = own.owner_of(&spec.target).expect("validated").clone();
    let mut target_group = TargetGroup {
        node: target_node.clone(),
        controls: Vec::new(),
        target: spec.target.clone(),
    };
    let mut grouped: Vec<(NodeId, Vec<String>)> = Vec::new();
    for c in &spec.controls {
        let node = own.owner_of(c).expect("validated");
        if *node == target_node {
            target_group.controls.push(c.clone());
        } else if let Some((_, cs)) = grouped.iter_mut().find(|(n, _)| n == node) {
            cs.push(c.clone());
        } else {
            grouped.push((node.clone(), vec![c.clone()]));
        }
    }

    let mut layout = own.clone();
    let mut control_groups = Vec::with_capacity(grouped.len());
    for (k, (node, controls)) in grouped.into_iter().enumerate() {
        let bell_local = fresh_label(&layout, format!("{node}_e"));
        layout.push(bell_local.clone(), node.clone())?;
        let bell_target = fresh_label(&layout, format!("{target_node}_e{}", k + 1));
        layout.push(bell_target.clone(), target_node.clone())?;
        control_groups.push(ControlGroup {
            node,
            controls,
            bell_local,
            bell_target,
        });
    }

    Ok(GroupPlan {
        target_group,
        control_groups,
        layout,
        data_qubits: own.len(),
    })
}
