use std::fmt::{self, Write};

use crate::syntax::{LinAtom, PropFormula, SpqFormula, Term};

/// Binding context of the position being printed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ctx {
    /// Anywhere a whole formula may appear.
    Top,
    /// Left operand of `&`.
    AndLeft,
    /// Operand of a unary operator or right operand of `&`.
    Unary,
}

fn write_prop(out: &mut impl Write, f: &PropFormula, ctx: Ctx) -> fmt::Result {
    match f {
        PropFormula::True => out.write_str("true"),
        PropFormula::False => out.write_str("false"),
        PropFormula::Var(v) => out.write_str(v),
        PropFormula::Not(a) => {
            out.write_char('~')?;
            write_prop(out, a, Ctx::Unary)
        }
        PropFormula::And(a, b) => {
            let wrap = ctx == Ctx::Unary;
            if wrap {
                out.write_char('(')?;
            }
            write_prop(out, a, Ctx::AndLeft)?;
            out.write_str(" & ")?;
            write_prop(out, b, Ctx::Unary)?;
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_term(out: &mut impl Write, t: &Term) -> fmt::Result {
    match t {
        Term::Budget(i) => write!(out, "b[{i}]"),
        Term::Cost(i, a) => {
            write!(out, "c[{i}](")?;
            write_prop(out, a, Ctx::Top)?;
            out.write_char(')')
        }
    }
}

fn write_atom(out: &mut impl Write, atom: &LinAtom) -> fmt::Result {
    out.write_char('(')?;
    for (k, (coeff, term)) in atom.summands().iter().enumerate() {
        let magnitude = coeff.unsigned_abs();
        if k == 0 {
            if *coeff < 0 {
                out.write_char('-')?;
            }
        } else if *coeff < 0 {
            out.write_str(" - ")?;
        } else {
            out.write_str(" + ")?;
        }
        if magnitude != 1 {
            write!(out, "{magnitude}*")?;
        }
        write_term(out, term)?;
    }
    write!(out, " >= {})", atom.bound())
}

fn write_formula(out: &mut impl Write, f: &SpqFormula, ctx: Ctx) -> fmt::Result {
    match f {
        SpqFormula::True => out.write_str("true"),
        SpqFormula::False => out.write_str("false"),
        SpqFormula::Prop(p) => out.write_str(p),
        SpqFormula::Atom(atom) => write_atom(out, atom),
        SpqFormula::Not(a) => match a.as_ref() {
            // `~(x & ~y)` is how `x -> y` is stored.
            SpqFormula::And(x, y) if matches!(y.as_ref(), SpqFormula::Not(_)) => {
                let SpqFormula::Not(y) = y.as_ref() else { unreachable!("matched above") };
                let wrap = ctx != Ctx::Top;
                if wrap {
                    out.write_char('(')?;
                }
                write_formula(out, x, Ctx::AndLeft)?;
                out.write_str(" -> ")?;
                write_formula(out, y, Ctx::Top)?;
                if wrap {
                    out.write_char(')')?;
                }
                Ok(())
            }
            _ => {
                out.write_char('~')?;
                write_formula(out, a, Ctx::Unary)
            }
        },
        SpqFormula::And(a, b) => {
            let wrap = ctx == Ctx::Unary;
            if wrap {
                out.write_char('(')?;
            }
            write_formula(out, a, Ctx::AndLeft)?;
            out.write_str(" & ")?;
            write_formula(out, b, Ctx::Unary)?;
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
        SpqFormula::Know(i, a) => {
            write!(out, "K{{{i}}} ")?;
            write_formula(out, a, Ctx::Unary)
        }
        SpqFormula::Common(g, a) => {
            write!(out, "C{{{g}}} ")?;
            write_formula(out, a, Ctx::Unary)
        }
        SpqFormula::Query(g, q, a) => {
            write!(out, "[? {g} : ")?;
            write_prop(out, q, Ctx::Top)?;
            out.write_str("] ")?;
            write_formula(out, a, Ctx::Unary)
        }
    }
}

/// Concrete syntax that parses back to the same formula.
pub fn print_formula(formula: &SpqFormula) -> String {
    formula.to_string()
}

pub fn print_prop(formula: &PropFormula) -> String {
    formula.to_string()
}

impl fmt::Display for SpqFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, Ctx::Top)
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prop(f, self, Ctx::Top)
    }
}

impl fmt::Display for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}
