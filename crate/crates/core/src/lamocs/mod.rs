//! Learning-automata guided multi-objective cuckoo search.
//!
//! Each generation every nest lays a Lévy-flight egg in random-key space; an
//! egg that dominates a randomly chosen nest replaces it. The population is
//! then ranked by non-dominated sorting with a crowding tie-break, and the
//! worst `ceil(pa · pop)` nests are abandoned: the worse half is refilled by
//! sampling one learning automaton per VM, the rest with uniform-random keys.
//! Every automaton is penalized for the machine the worst nest gave its VM and
//! rewarded for the machine of the current min-energy feasible nest. All
//! feasible solutions evaluated during a run feed a Pareto archive; the final
//! answer is the archive member with the least energy.

mod automata;
mod brute;
mod levy;
mod pareto;
mod solver;

pub use automata::{init_ensemble, sample_placement, AutomataEnsemble, LearningAutomaton};
pub use brute::{brute_force, for_each_assignment, MAX_ASSIGNMENTS};
pub use levy::{levy_keys, Mantegna};
pub use pareto::{
    crowding_distances, dominates, is_antichain, non_dominated_ranks, worst_first, ParetoArchive,
    ARCHIVE_CAPACITY,
};
pub use solver::{solve, solve_with_observer, Lamocs, SolverParams, StepReport};
