//! Closed-form scalar expressions.
//!
//! Surfaces and curves are given as strings in a small grammar (see
//! `docs/grammar.md`), parsed into an [`Expr`] tree, differentiated
//! symbolically and evaluated either on plain `f64` bindings or on [`Jet`]
//! bindings.
//!
//! [`Jet`]: crate::jet::Jet

mod diff;
mod eval;
mod parse;

use std::fmt;

pub use eval::{EvalError, JetBindings, ScalarBindings};
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Exponents are constants; `x^y` with a variable exponent
/// is rejected by the parser.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Variable names referenced by the tree, sorted and deduplicated.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    // Constructors with 0/1 folding, used by `diff`.

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Num(v) if v == 0.0 => Expr::Num(0.0),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), Some(y)) if x >= 0.0 && y >= 0.0 => Expr::Num(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), _) if x == 0.0 => Expr::neg(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Num(0.0),
            (Some(x), Some(y)) if x >= 0.0 && y >= 0.0 => Expr::Num(x * y),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(x), _) if x == 0.0 => Expr::Num(0.0),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Expr, p: f64) -> Expr {
        if p == 0.0 {
            Expr::Num(1.0)
        } else if p == 1.0 {
            a
        } else {
            Expr::Pow(Box::new(a), p)
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }
}

// Negative literals only arise from folding; the parser reads `-2` as
// `Neg(Num(2))`, so they are printed as such to keep print/parse stable.
fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{})", -v)
    } else {
        write!(f, "{}", v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write_num(f, *v),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => write!(f, "(-{})", a),
            Expr::Add(a, b) => write!(f, "({} + {})", a, b),
            Expr::Sub(a, b) => write!(f, "({} - {})", a, b),
            Expr::Mul(a, b) => write!(f, "({} * {})", a, b),
            Expr::Div(a, b) => write!(f, "({} / {})", a, b),
            Expr::Pow(a, p) => {
                write!(f, "({}^", a)?;
                write_num(f, *p)?;
                f.write_str(")")
            }
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_fully_parenthesized() {
        let e = parse("-u^2 + 3*sin(v)/2").unwrap();
        assert_eq!(e.to_string(), "((-(u^2)) + ((3 * sin(v)) / 2))");
    }

    #[test]
    fn collects_variables() {
        let e = parse("x*y + sqrt(x^2 + 1) - t").unwrap();
        assert_eq!(e.variables(), vec!["t", "x", "y"]);
    }

    #[test]
    fn folding_constructors() {
        let x = Expr::var("x");
        assert_eq!(Expr::mul(Expr::Num(1.0), x.clone()), x);
        assert_eq!(Expr::mul(x.clone(), Expr::Num(0.0)), Expr::Num(0.0));
        assert_eq!(Expr::add(Expr::Num(0.0), x.clone()), x);
        assert_eq!(Expr::pow(x.clone(), 1.0), x);
        assert_eq!(Expr::neg(Expr::neg(x.clone())), x);
        assert_eq!(Expr::sub(Expr::Num(0.0), x.clone()), Expr::neg(x));
    }
}
