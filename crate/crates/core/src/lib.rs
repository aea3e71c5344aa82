//! Determinacy inference for Prolog programs with cut.

pub mod depthk;
pub mod detinfer;
pub mod frontend;
pub mod normalize;
pub mod oracle;
pub mod pipeline;
pub mod pos;
pub mod report;
pub mod success;
pub mod term;

pub use frontend::{parse, FrontendError, Program};
pub use term::{Clause, FreshVars, Goal, PredKey, Term, Var};
