//! Conjunctive pattern evaluation with filters, negation as failure and
//! grouped counting over frozen graphs.

mod datatype;
mod eval;
mod pattern;
mod plan;
mod value;

pub use datatype::{is_supported_datatype, is_valid_for_datatype, SUPPORTED_DATATYPES};
pub use eval::{evaluate, lang_matches, Interrupted, Solution};
pub use pattern::{ArithOp, Binding, CompareOp, Expr, Pattern, Slot, TriplePattern, Variable};
pub use plan::{compile_regex, plan, plan_with, Ordering, Plan, PlanError};
pub use value::{Numeric, TypeError, Val};
