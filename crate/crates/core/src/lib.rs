//! Simulation and verification of remote multi-controlled gates built from
//! one Bell pair per control group, local gates and classical feedforward.
//!
//! The pipeline is: describe qubit ownership and the wanted gate
//! ([`gate_model`]), group the controls by node, compile the grouped plan
//! into a distributed instruction stream ([`protocol`]), run it on a dense
//! state vector with locality enforced ([`executor`]), and compare every
//! measurement branch against the ideal gate ([`verifier`]). Resource
//! counts come from [`resources`].
//!
//! ```
//! use telegate::prelude::*;
//!
//! let own = Ownership::new([("A1", "A"), ("B1", "B"), ("B2", "B")])?;
//! let spec = DistributedGateSpec::toffoli(["A1", "B1"], "B2");
//! let program = compile(&plan_groups(&spec, &own)?, &spec.u);
//!
//! let input = StateVector::basis(3, 0b110)?;
//! for branch in enumerate_branches(&program, &input)? {
//!     assert_eq!(branch.data_state(&program)?, StateVector::basis(3, 0b111)?);
//! }
//! # Ok::<(), telegate::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod executor;
pub mod gate_model;
pub mod protocol;
pub mod resources;
pub mod scenario;
pub mod statevector;
pub mod verifier;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::executor::{
        check_locality, enumerate_branches, execute_branch, forced_from_bits, run_sampled, BranchResult,
    };
    pub use crate::gate_model::{plan_groups, validate_spec, DistributedGateSpec, GroupPlan, NodeId, Ownership};
    pub use crate::protocol::{compile, Instruction, Program, Tag};
    pub use crate::resources::{account, baseline_teleport, GateKind, ResourceReport};
    pub use crate::scenario::Scenario;
    pub use crate::statevector::{Basis, StateVector, Unitary};
    pub use crate::verifier::{apply_ideal, random_state, random_unitary, truth_table, verify_gate};
}
