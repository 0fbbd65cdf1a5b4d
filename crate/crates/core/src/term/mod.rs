//! Relation-algebra terms and equations.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! equation := expr '=' expr
//! expr     := meet ('+' meet)*          join
//! meet     := comp ('&' comp)*          meet
//! comp     := unary (';' unary)*        relative product
//! unary    := '-' unary | postfix       complement
//! postfix  := primary '~'*              converse
//! primary  := '0' | '1' | 'e' | 'x' N | '(' expr ')'
//! ```
//!
//! Binary operators associate to the left. Whitespace is ignored. The
//! canonical printer emits the fewest parentheses that re-parse to the same
//! tree, with single spaces around binary operators and `=`.
//!
//! Equation length counts every variable occurrence and every operation
//! symbol, the constants `0`, `1`, `e` included; `=` and parentheses are not
//! counted. So `(x1+x2)&x3 = x1&x3 + x2&x3` has length 12 and `x1;e = x1`
//! has length 4.

mod eval;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use eval::{eval, eval_bits, falsify, FalsifyMode, FalsifyOutcome, DEFAULT_FALSIFY_BUDGET};
pub use parser::{parse, parse_equation, parse_term, Parsed};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `x_i`, `i >= 1`.
    Var(u32),
    Zero,
    Top,
    /// The identity constant `1'`, written `e`.
    Id,
    Not(Box<Term>),
    Conv(Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Comp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(i)
    }

    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn conv(t: Term) -> Term {
        Term::Conv(Box::new(t))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn comp(a: Term, b: Term) -> Term {
        Term::Comp(Box::new(a), Box::new(b))
    }

    /// Number of symbols: variables, constants and operators.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::Top | Term::Id => 1,
            Term::Not(t) | Term::Conv(t) => 1 + t.size(),
            Term::Join(a, b) | Term::Meet(a, b) | Term::Comp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Zero | Term::Top | Term::Id => {}
            Term::Not(t) | Term::Conv(t) => t.collect_vars(out),
            Term::Join(a, b) | Term::Meet(a, b) | Term::Comp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Join(..) => 1,
            Term::Meet(..) => 2,
            Term::Comp(..) => 3,
            Term::Not(_) | Term::Conv(_) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Zero => write!(f, "0"),
            Term::Top => write!(f, "1"),
            Term::Id => write!(f, "e"),
            Term::Not(t) => {
                write!(f, "-")?;
                t.write_at(f, 4)
            }
            Term::Conv(t) => {
                if matches!(**t, Term::Not(_)) {
                    write!(f, "(")?;
                    t.write_at(f, 0)?;
                    write!(f, ")")?;
                } else {
                    t.write_at(f, 4)?;
                }
                write!(f, "~")
            }
            Term::Join(a, b) => binary(f, a, b, " + ", 1),
            Term::Meet(a, b) => binary(f, a, b, " & ", 2),
            Term::Comp(a, b) => binary(f, a, b, " ; ", 3),
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Term, b: &Term, op: &str, prec: u8) -> fmt::Result {
    a.write_at(f, prec)?;
    write!(f, "{op}")?;
    b.write_at(f, prec + 1)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// `lhs = rhs`. Inequalities `u <= v` are written `u + v = v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    /// Fails unless the variables used are exactly `x1..xk` for some `k`.
    pub fn new(lhs: Term, rhs: Term) -> Result<Self> {
        let eq = Equation { lhs, rhs };
        let vars = eq.vars();
        if let Some((pos, &v)) = vars.iter().enumerate().find(|(i, &v)| v != *i as u32 + 1) {
            return Err(Error::Usage(format!(
                "variables must be x1..xk without gaps; x{} is missing before x{v}",
                pos + 1
            )));
        }
        Ok(eq)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn var_count(&self) -> usize {
        self.vars().len()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Total number of operation symbols (constants included) and variable occurrences.
pub fn equation_length(eq: &Equation) -> usize {
    eq.lhs.size() + eq.rhs.size()
}

/// The relation-algebra axioms as equations: Huntington's boolean axioms,
/// then associativity, right distributivity, the identity law, the converse
/// laws and the triangle law (as `u + v = v`).
pub const RA_AXIOMS: [(&str, &str); 10] = [
    ("join commutative", "x1 + x2 = x2 + x1"),
    ("join associative", "(x1 + x2) + x3 = x1 + (x2 + x3)"),
    ("Huntington", "-(-x1 + -x2) + -(-x1 + x2) = x1"),
    ("composition associative", "(x1 ; x2) ; x3 = x1 ; (x2 ; x3)"),
    ("right distributive", "(x1 + x2) ; x3 = x1 ; x3 + x2 ; x3"),
    ("identity law", "x1 ; e = x1"),
    ("converse involution", "x1~~ = x1"),
    ("converse additive", "(x1 + x2)~ = x1~ + x2~"),
    ("converse of product", "(x1 ; x2)~ = x2~ ; x1~"),
    ("triangle law", "x1~ ; -(x1 ; x2) + -x2 = -x2"),
];

/// [`RA_AXIOMS`] parsed.
pub fn ra_axioms() -> Vec<(&'static str, Equation)> {
    RA_AXIOMS
        .iter()
        .map(|&(name, text)| (name, parse_equation(text).expect("axiom text parses")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> Equation {
        parse_equation(s).unwrap()
    }

    #[test]
    fn axioms_parse() {
        let ax = ra_axioms();
        assert_eq!(ax.len(), 10);
        for ((_, text), (_, e)) in RA_AXIOMS.iter().zip(&ax) {
            assert_eq!(&parse_equation(&e.to_string()).unwrap(), e, "{text}");
        }
    }

    #[test]
    fn lengths() {
        assert_eq!(equation_length(&eq("(x1+x2)&x3 = x1&x3 + x2&x3")), 12);
        assert_eq!(equation_length(&eq("x1 = x1")), 2);
        assert_eq!(equation_length(&eq("x1;e = x1")), 4);
    }

    #[test]
    fn canonical_printing() {
        for s in [
            "x1 ; e = x1",
            "-(x1 + x2) = -x1 & -x2",
            "x1~ ; -(x1 ; x2) + -x2 = -x2",
            "(-x1)~ = -x1~",
            "x1 + (x2 + x3) = x1 + x2 + x3",
            "x1 ; (x2 & x3) = x1 ; x2 & 1",
            "x1~~ = --x1",
        ] {
            assert_eq!(eq(s).to_string(), s);
        }
    }

    #[test]
    fn gaps_rejected() {
        assert!(Equation::new(Term::var(1), Term::var(3)).is_err());
        assert!(Equation::new(Term::var(2), Term::var(1)).is_ok());
        assert!(Equation::new(Term::Zero, Term::Top).is_ok());
    }
}
