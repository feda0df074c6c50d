//! Divisor classes of the hyperelliptic Weierstrass divisor and of the g¹₂
//! divisor, computed by the method of test curves with exact arithmetic.
//!
//! The pipeline: [`families`] lists test families as degree vectors,
//! [`solver`] pairs them with the general class ansatz over the [`basis`]
//! and solves the resulting overdetermined system with [`exactlin`], and
//! [`closedform`] evaluates the closed formulas the solution is checked
//! against. [`output`] renders and parses the exported records.

pub mod basis;
pub mod closedform;
pub mod exactlin;
pub mod families;
pub mod output;
pub mod solver;
pub mod surfcalc;

pub use basis::{Ambient, BasisElement, DivisorExpression, Marking, View};
pub use closedform::{
    closed_form, hg12_closed_form, hgw_closed_form, verify_range, VerificationReport,
};
pub use exactlin::Rational;
pub use families::Target;
pub use solver::{assemble_system, solve_coefficients, CoefficientReport, Relation, SolverError};
