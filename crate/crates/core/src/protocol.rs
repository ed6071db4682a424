//! Compilation of a [`GroupPlan`] into a distributed instruction stream.
//!
//! Per control group the program prepares a Bell pair, folds the group's
//! controls onto the local half with a multi-controlled X, measures it in
//! Z and forwards the bit so the target node can repair its half. The
//! target node then runs one controlled-U over all Bell halves plus its
//! own controls. Finally each target-side half is measured in X and the
//! bit sent back, where a `|->` outcome triggers a multi-controlled Z over
//! the group's controls.

use std::fmt;

use serde::Serialize;

use crate::gate_model::{GroupPlan, NodeId, Ownership};
use crate::statevector::Unitary;

/// Name of a classical measurement result.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Tag(String);

impl Tag {
    pub fn new(name: impl Into<String>) -> Self {
        Tag(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Qubit operands are register indices into [`Program::layout`].
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    BellPrep {
        local: usize,
        remote: usize,
        nodes: (NodeId, NodeId),
    },
    LocalMcx {
        node: NodeId,
        controls: Vec<usize>,
        target: usize,
    },
    LocalMcu {
        node: NodeId,
        controls: Vec<usize>,
        target: usize,
        u: Unitary,
    },
    MeasureZ {
        node: NodeId,
        qubit: usize,
        tag: Tag,
    },
    MeasureX {
        node: NodeId,
        qubit: usize,
        tag: Tag,
    },
    Send {
        tag: Tag,
        from: NodeId,
        to: NodeId,
    },
    CondX {
        node: NodeId,
        qubit: usize,
        tag: Tag,
    },
    CondMcz {
        node: NodeId,
        controls: Vec<usize>,
        target: usize,
        tag: Tag,
    },
}

impl Instruction {
    /// Node executing a local instruction; `None` for Bell preparation and sends.
    pub fn node(&self) -> Option<&NodeId> {
        match self {
            Instruction::BellPrep { .. } | Instruction::Send { .. } => None,
            Instruction::LocalMcx { node, .. }
            | Instruction::LocalMcu { node, .. }
            | Instruction::MeasureZ { node, .. }
            | Instruction::MeasureX { node, .. }
            | Instruction::CondX { node, .. }
            | Instruction::CondMcz { node, .. } => Some(node),
        }
    }

    /// All qubits touched.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::BellPrep { local, remote, .. } => vec![*local, *remote],
            Instruction::LocalMcx { controls, target, .. }
            | Instruction::LocalMcu { controls, target, .. }
            | Instruction::CondMcz { controls, target, .. } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
            Instruction::MeasureZ { qubit, .. }
            | Instruction::MeasureX { qubit, .. }
            | Instruction::CondX { qubit, .. } => vec![*qubit],
            Instruction::Send { .. } => Vec::new(),
        }
    }

    /// The tag this instruction measures into.
    pub fn produces(&self) -> Option<&Tag> {
        match self {
            Instruction::MeasureZ { tag, .. } | Instruction::MeasureX { tag, .. } => Some(tag),
            _ => None,
        }
    }

    /// The tag a conditional instruction waits on.
    pub fn condition(&self) -> Option<&Tag> {
        match self {
            Instruction::CondX { tag, .. } | Instruction::CondMcz { tag, .. } => Some(tag),
            _ => None,
        }
    }

    /// One-line rendering with qubit labels resolved through `layout`.
    pub fn render(&self, layout: &Ownership) -> String {
        let l = |q: &usize| layout.label(*q).to_string();
        let list = |qs: &[usize]| qs.iter().map(l).collect::<Vec<_>>().join(",");
        match self {
            Instruction::BellPrep { local, remote, nodes } => {
                format!("bell_prep {}@{} {}@{}", l(local), nodes.0, l(remote), nodes.1)
            }
            Instruction::LocalMcx { node, controls, target } => {
                format!("mcx {node} [{}] -> {}", list(controls), l(target))
            }
            Instruction::LocalMcu { node, controls, target, u } => {
                format!("mcu {node} [{}] -> {} u={u}", list(controls), l(target))
            }
            Instruction::MeasureZ { node, qubit, tag } => format!("measure_z {node} {} -> {tag}", l(qubit)),
            Instruction::MeasureX { node, qubit, tag } => format!("measure_x {node} {} -> {tag}", l(qubit)),
            Instruction::Send { tag, from, to } => format!("send {tag} {from} -> {to}"),
            Instruction::CondX { node, qubit, tag } => format!("cond_x {node} {} if {tag}", l(qubit)),
            Instruction::CondMcz {
                node,
                controls,
                target,
                tag,
            } => format!("cond_mcz {node} [{}] -> {} if {tag}", list(controls), l(target)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    /// Data qubits first, then Bell qubits.
    pub layout: Ownership,
    pub data_qubits: usize,
    /// Measurement tags in program order.
    pub tags: Vec<Tag>,
}

impl Program {
    pub fn num_qubits(&self) -> usize {
        self.layout.len()
    }

    pub fn num_measurements(&self) -> usize {
        self.instructions.iter().filter(|i| i.produces().is_some()).count()
    }

    /// Rebuilds the tag table from the instruction stream.
    pub fn refresh_tags(&mut self) {
        self.tags = self.instructions.iter().filter_map(|i| i.produces().cloned()).collect();
    }
}

impl fmt::Display for Program {
    /// One instruction per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in &self.instructions {
            writeln!(f, "{}", ins.render(&self.layout))?;
        }
        Ok(())
    }
}

fn z_tag(node: &NodeId) -> Tag {
    Tag::new(format!("z_{node}"))
}

fn x_tag(node: &NodeId) -> Tag {
    Tag::new(format!("x_{node}"))
}

/// Emits the protocol for `plan`. When `u` is X the final gate is emitted
/// as a multi-controlled X.
pub fn compile(plan: &GroupPlan, u: &Unitary) -> Program {
    let layout = &plan.layout;
    let idx = |label: &str| layout.index_of(label).expect("plan labels are in its layout");
    let tnode = &plan.target_group.node;
    let mut out = Vec::new();

    for g in &plan.control_groups {
        let tag = z_tag(&g.node);
        let local = idx(&g.bell_local);
        out.push(Instruction::BellPrep {
            local,
            remote: idx(&g.bell_target),
            nodes: (g.node.clone(), tnode.clone()),
        });
        out.push(Instruction::LocalMcx {
            node: g.node.clone(),
            controls: g.controls.iter().map(|c| idx(c)).collect(),
            target: local,
        });
        out.push(Instruction::MeasureZ {
            node: g.node.clone(),
            qubit: local,
            tag: tag.clone(),
        });
        out.push(Instruction::Send {
            tag: tag.clone(),
            from: g.node.clone(),
            to: tnode.clone(),
        });
        out.push(Instruction::CondX {
            node: tnode.clone(),
            qubit: idx(&g.bell_target),
            tag,
        });
    }

    let controls: Vec<usize> = plan
        .control_groups
        .iter()
        .map(|g| idx(&g.bell_target))
        .chain(plan.target_group.controls.iter().map(|c| idx(c)))
        .collect();
    let target = idx(&plan.target_group.target);
    if u.approx_eq(&Unitary::x(), 1e-12) {
        out.push(Instruction::LocalMcx {
            node: tnode.clone(),
            controls,
            target,
        });
    } else {
        out.push(Instruction::LocalMcu {
            node: tnode.clone(),
            controls,
            target,
            u: *u,
        });
    }

    for g in &plan.control_groups {
        let tag = x_tag(&g.node);
        out.push(Instruction::MeasureX {
            node: tnode.clone(),
            qubit: idx(&g.bell_target),
            tag: tag.clone(),
        });
        out.push(Instruction::Send {
            tag: tag.clone(),
            from: tnode.clone(),
            to: g.node.clone(),
        });
        let (last, rest) = g.controls.split_last().expect("groups are non-empty");
        out.push(Instruction::CondMcz {
            node: g.node.clone(),
            controls: rest.iter().map(|c| idx(c)).collect(),
            target: idx(last),
            tag,
        });
    }

    let mut program = Program {
        instructions: out,
        layout: plan.layout.clone(),
        data_qubits: plan.data_qubits,
        tags: Vec::new(),
    };
    program.refresh_tags();
    program
}
