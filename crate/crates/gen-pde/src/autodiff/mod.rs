//! Exact derivatives for model training: forward-mode second-order jets over
//! the inputs `(x, t)`, and a reverse-mode tape over jets for parameter
//! gradients. No numerical differentiation appears in the training path;
//! finite differences exist only as the verification oracle in
//! [`check_gradient`].

mod check;
mod ctx;
mod jet;
mod param;
mod tape;

pub use check::{check_gradient, rel_dev, REL_FLOOR};
pub use ctx::{DirectCtx, JetCtx, TapeCtx};
pub use jet::{jet_op, jet_seed, Jet2, JetField, JetOpKind, DIV_GUARD, EXP_CLAMP};
pub use param::{ParamLayout, ParamRole, ParamVector, Segment};
pub use tape::{Tape, TapeMark, Var};
