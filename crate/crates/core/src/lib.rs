//! Energy-aware virtual machine placement.
//!
//! The crate models a data center as a set of physical machines (CPU, memory
//! and a linear idle/busy power profile) and a set of virtual machines with
//! CPU and memory demands. Placements are scored on three objectives (energy,
//! resource waste and negated utilization) and searched with [`lamocs`], a
//! multi-objective cuckoo search whose worst nests are refilled from one
//! learning automaton per VM. Generic GA and PSO baselines, an exhaustive
//! oracle for small instances and an experiment harness are included.

pub mod baselines;
pub mod error;
pub mod experiments;
pub mod instance;
pub mod lamocs;
pub mod objectives;
pub mod search;
pub mod seed;

pub use error::{Error, Result};
pub use instance::{
    FeasibilityReport, GeneratorConfig, PhysicalMachine, Placement, PlacementProblem,
    VirtualMachine,
};
pub use objectives::{MetricsRow, ObjectiveVector};
pub use search::{Solution, SolveResult};
