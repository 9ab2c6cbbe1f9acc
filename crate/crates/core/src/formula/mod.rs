//! Formula algebra: syntax tree, textual grammar, and structural utilities.

mod ast;
mod ops;
mod parser;
mod render;

pub use ast::{Atom, Formula, PredicateSymbol, Term};
pub use ops::{free_variables, normalize_duals, substitute};
pub use parser::{parse_formula, parse_formula_file, ParseError, RESERVED};
pub use render::render_formula;

pub(crate) use parser::strip_comment;
