use std::fmt;

use super::ast::{Atom, Formula, Term};

const QUANT: u8 = 0;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNTIL: u8 = 5;
const UNARY: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => QUANT,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Until(..) => UNTIL,
        _ => UNARY,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) if !c.is_empty() && c.bytes().all(|b| b.is_ascii_digit()) => {
                f.write_str(c)
            }
            Term::Const(c) => {
                f.write_str("\"")?;
                for ch in c.chars() {
                    if ch == '"' || ch == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{ch}")?;
                }
                f.write_str("\"")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn operand(out: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(out, "({g})")
    } else {
        write!(out, "{g}")
    }
}

fn binary(
    out: &mut fmt::Formatter<'_>,
    lhs: &Formula,
    op: &str,
    rhs: &Formula,
    level: u8,
    right_assoc: bool,
) -> fmt::Result {
    let (lp, rp) = (precedence(lhs), precedence(rhs));
    let (wrap_l, wrap_r) = if right_assoc {
        (lp <= level, rp < level)
    } else {
        (lp < level, rp <= level)
    };
    operand(out, lhs, wrap_l)?;
    write!(out, " {op} ")?;
    operand(out, rhs, wrap_r)
}

/// Renders in the grammar accepted by [`parse_formula`](super::parse_formula), adding only the
/// parentheses that precedence requires.
impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(out, "{a}"),
            Formula::Not(g) => {
                out.write_str("!")?;
                operand(out, g, precedence(g) < UNARY)
            }
            Formula::Always(g) => {
                out.write_str("[]")?;
                operand(out, g, precedence(g) < UNARY)
            }
            Formula::Eventually(g) => {
                out.write_str("<>")?;
                operand(out, g, precedence(g) < UNARY)
            }
            Formula::Oblig(g) => write!(out, "O({g})"),
            Formula::Perm(g) => write!(out, "P({g})"),
            Formula::Forb(g) => write!(out, "Forb({g})"),
            Formula::And(a, b) => binary(out, a, "&", b, AND, false),
            Formula::Or(a, b) => binary(out, a, "|", b, OR, false),
            Formula::Implies(a, b) => binary(out, a, "->", b, IMPLIES, true),
            Formula::Until(a, b) => binary(out, a, "U", b, UNTIL, true),
            Formula::Forall(v, g) => write!(out, "forall {v}. {g}"),
            Formula::Exists(v, g) => write!(out, "exists {v}. {g}"),
        }
    }
}

/// Render a formula as grammar text.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    #[test]
    fn renders_deontic_operators() {
        assert_eq!(
            render_formula(&Formula::oblig(Formula::pred("fair", &["x"]))),
            "O(fair(x))"
        );
        assert_eq!(render_formula(&Formula::perm(Formula::prop("p"))), "P(p)");
        assert_eq!(
            render_formula(&Formula::forb(Formula::prop("p"))),
            "Forb(p)"
        );
    }

    #[test]
    fn parenthesizes_nested_until() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        let r = Formula::prop("r");
        let left = Formula::until(Formula::until(p.clone(), q.clone()), r.clone());
        assert_eq!(render_formula(&left), "(p U q) U r");
        let right = Formula::until(p, Formula::until(q, r));
        assert_eq!(render_formula(&right), "p U q U r");
        for f in [left, right] {
            assert_eq!(parse_formula(&render_formula(&f)).unwrap(), f);
        }
    }

    #[test]
    fn quantifier_operands_are_wrapped() {
        let f = Formula::and(
            Formula::forall("x", Formula::pred("p", &["x"])),
            Formula::prop("q"),
        );
        let text = render_formula(&f);
        assert_eq!(text, "(forall x. p(x)) & q");
        assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn quoted_constants_round_trip() {
        let f = Formula::atom(
            "p",
            vec![
                Term::constant("a \"b\""),
                Term::constant("12"),
                Term::var("v"),
            ],
        );
        assert_eq!(parse_formula(&render_formula(&f)).unwrap(), f);
    }
}
