use std::fmt;

use super::syntax::{DeonticOp, Formula};

// Binding strength, weakest first.
const PREC_ARROW: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) => PREC_ATOM,
        Formula::Not(_) | Formula::Id(_) | Formula::Ob(_) | Formula::Pm(_) | Formula::Fb(_) => {
            PREC_UNARY
        }
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Implies(..) | Formula::CondOb(..) | Formula::CondPm(..) | Formula::CondFb(..) => {
            PREC_ARROW
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

fn write_left_assoc(
    f: &mut fmt::Formatter<'_>,
    l: &Formula,
    op: &str,
    r: &Formula,
    prec: u8,
) -> fmt::Result {
    write_operand(f, l, precedence(l) < prec)?;
    write!(f, " {op} ")?;
    write_operand(f, r, precedence(r) <= prec)
}

fn write_arrow(f: &mut fmt::Formatter<'_>, l: &Formula, op: &str, r: &Formula) -> fmt::Result {
    write_operand(f, l, precedence(l) <= PREC_ARROW)?;
    write!(f, " {op} ")?;
    write_operand(f, r, false)
}

fn write_prefix(f: &mut fmt::Formatter<'_>, keyword: &str, g: &Formula) -> fmt::Result {
    write!(f, "{keyword} ")?;
    write_operand(f, g, precedence(g) < PREC_UNARY)
}

/// Prints in the concrete grammar accepted by [`parse_formula`](super::parse_formula),
/// using the fewest parentheses that preserve the tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                write_operand(f, g, precedence(g) < PREC_UNARY)
            }
            Formula::Id(g) => write_prefix(f, "Id", g),
            Formula::Ob(g) => write_prefix(f, DeonticOp::Ob.keyword(), g),
            Formula::Pm(g) => write_prefix(f, DeonticOp::Pm.keyword(), g),
            Formula::Fb(g) => write_prefix(f, DeonticOp::Fb.keyword(), g),
            Formula::And(l, r) => write_left_assoc(f, l, "&", r, PREC_AND),
            Formula::Or(l, r) => write_left_assoc(f, l, "|", r, PREC_OR),
            Formula::Implies(l, r) => write_arrow(f, l, "=>", r),
            Formula::CondOb(l, r) => write_arrow(f, l, "=Ob=>", r),
            Formula::CondPm(l, r) => write_arrow(f, l, "=Pm=>", r),
            Formula::CondFb(l, r) => write_arrow(f, l, "=Fb=>", r),
        }
    }
}
