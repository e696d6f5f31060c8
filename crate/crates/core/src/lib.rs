//! Exact max-plus linear algebra for fully actuated systems under time-window
//! constraints.
//!
//! * [`scalar`], [`matrix`], [`star`]: exact arithmetic over ℝ ∪ {−∞, +∞},
//!   Kleene star with divergence saturation, star-matrix predicates.
//! * [`precedence`]: solvability of `x ≥ A ⊗ x`, block matrices `M_[K]`, DOT export.
//! * [`pteg`]: the `Π` recursion, the consistency trichotomy, trajectory synthesis.
//! * [`invariance`]: the lifted system, the `S_{k+2}` iteration of φ and the
//!   maximal controlled-invariant subsemimodule.
//! * [`problem`], [`sweep`]: JSON problem files and parameter sweeps.
//!
//! Heavy loops (large Kleene stars and products, sweeps) run on rayon when the
//! `parallel` feature is enabled; see [`par`].

pub mod error;
pub mod invariance;
pub mod matrix;
pub mod par;
pub mod precedence;
pub mod problem;
pub mod pteg;
pub mod scalar;
pub mod star;
pub mod sweep;

pub use error::{Infeasibility, MaxPlusError, ParseScalarError};
pub use invariance::{
    analyze, invariant_member, lift_system, maximal_invariant, phi_iterate, psi, s_matrix,
    s_matrix_oracle, successor_state, Analysis, LiftedSystem, PhiClass, PhiReport,
};
pub use matrix::{mat_oplus, mat_otimes, TropicalMatrix};
pub use par::Execution;
pub use precedence::{
    build_block_matrix, export_dot, finite_weak_feasibility, solve_precedence, BlockMatrixSpec,
    PrecedenceSystem,
};
pub use problem::{parse_override, ProblemError, ProblemFile};
pub use pteg::{
    check_consistency, pi_sequence, synthesize_trajectory, validate_trajectory, ConsistencyVerdict,
    PiIter, PtegSystem, Trajectory,
};
pub use scalar::{scalar_oplus, scalar_otimes, ExtendedScalar};
pub use star::{has_positive_circuit, image_equal, image_member, is_star_matrix, kleene_star};
pub use sweep::{sweep_parameter, SweepPoint};
