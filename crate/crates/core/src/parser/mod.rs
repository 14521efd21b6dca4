//! Text front end: the expression grammar, the [`ExprNode`] tree and the
//! canonical printer.

mod ast;
mod grammar;

pub use ast::ExprNode;
pub use grammar::{parse, parse_lincomb};
