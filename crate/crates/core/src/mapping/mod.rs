//! Matching expressions written by the administrator.
//!
//! Operation expressions combine substituent operations with `AND` / `OR`
//! (`AND` binds tighter). Data expressions compute one leaf from others:
//!
//! ```text
//! expr    := sum ("concat" sum)*
//! sum     := product (("+" | "-") product)*
//! product := factor (("*" | "/") factor)*
//! factor  := number | "-" number | string | path | "(" expr ")"
//! path    := "<" [operation ":"] words ">"
//! ```

mod dataexpr;
mod lexer;
mod opexpr;
mod plan;
mod validate;

pub use dataexpr::{
    evaluate, format_number, parse_data_expr, parse_data_expr_refs, parse_data_expr_syntax, BinOp, Bindings,
    DataExpr, EvalError, PathRef, Value, PLAIN_RENDERING_LIMIT,
};
pub use opexpr::{parse_operation_expr, parse_operation_expr_syntax, OperationExpr};
pub use plan::{MatchingPlan, OperationPlan};
pub use validate::{validate_plan, Issue, IssueKind, Severity, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown operation {name} at position {position}")]
    UnknownOperation { name: String, position: usize },
    #[error("unresolved path {path} at position {position}")]
    UnresolvedPath { path: String, position: usize },
}

impl ExprError {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Self::Syntax {
            position,
            message: message.into(),
        }
    }

    pub fn position(&self) -> Option<usize> {
        match self {
            Self::Syntax { position, .. }
            | Self::UnknownOperation { position, .. }
            | Self::UnresolvedPath { position, .. } => Some(*position),
        }
    }
}
