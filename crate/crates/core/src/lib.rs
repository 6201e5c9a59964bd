//! Exact solver for coalitional games with transferable utility whose
//! payoff distributions are constrained by mixed-integer linear
//! (in)equalities.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`linsys`] — exact rational linear constraint systems with player and
//!   auxiliary variables, renaming and substitution.
//! * [`solver`] — rational simplex, bounded-integer feasibility,
//!   Fourier–Motzkin projection and a semilinear (finite union of cells)
//!   set algebra.
//! * [`game`] — TU games, worth oracles, constrained games and their
//!   consequence sets.
//! * [`stability`] — imputations, core and bargaining-set membership and
//!   non-emptiness.
//! * [`values`] — excesses, nucleolus, kernel, Shapley values.
//! * [`reductions`] — Boolean/QBF machinery and hardness-instance
//!   generators used as cross-checking batteries.
//! * [`format`] — the textual game/QBF/point formats used by the CLI.

pub mod error;
pub mod format;
pub mod game;
pub mod limits;
pub mod linsys;
pub mod logic;
pub mod rational;
pub mod reductions;
pub mod solver;
pub mod stability;
pub mod values;

pub use error::Error;
pub use game::{Coalition, ConstrainedGame, TuReduction, WorthFn};
pub use limits::Limits;
pub use linsys::{ConstraintSystem, LinearRow, PayoffPoint, Relation, Variable};
pub use rational::Rat;
pub use solver::{Cell, LpOutcome, SemilinearSet};
pub use stability::{BargainingVerdict, CoreVerdict, NonemptinessResult};
pub use values::ExtRat;
