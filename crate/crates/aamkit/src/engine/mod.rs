//! Generic adaptive alternating minimization over an abstract cost and a
//! schedule of constraint-set pairs, with property checkers and convergence
//! diagnostics.
//!
//! The iteration alternates exact projections: at step `n` it minimizes the
//! cost over the revealed first-argument set with the previous second
//! argument fixed, then over the revealed second-argument set with the
//! fresh first argument fixed. With constant sets this is the classical
//! alternating minimization algorithm; with sets converging in Hausdorff
//! distance it is the adaptive variant, whose cost settles at the optimum
//! of the limit sets when the three/four-point properties hold and the
//! drift is summable through the cost's modulus of continuity.

pub mod checks;
pub mod cost;
pub mod diagnostics;
pub mod modulus;
pub mod run;
pub mod schedule;
pub mod set;
pub mod trace;

pub use checks::{check_four_point, check_three_point, Violation, ViolationReport, CHECK_TOL};
pub use cost::{CostFunction, Side};
pub use diagnostics::{drift_inequality_check, recursion_diagnostic, DiagRow, DiagnosticReport};
pub use modulus::{estimate_modulus, ModulusTable};
pub use run::{run_aam, run_aam_instrumented, run_classical, Instrumentation, MEMBERSHIP_TOL};
pub use schedule::{SetSchedule, SetSequence};
pub use set::{grid_hausdorff, hausdorff_distance, ProjectableSet};
pub use trace::{AamTrace, StoppingRule, Termination, TraceRecord};
