//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" unary)?        exponent must be constant
//! primary := number | ident | func "(" expr ")" | "(" expr ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::{Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {}", v),
            Tok::Ident(s) => write!(f, "identifier '{}'", s),
            Tok::Sym(c) => write!(f, "'{}'", c),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let v: f64 = text[start..i].parse().map_err(|_| ParseError {
                offset: start,
                expected: "number".into(),
                found: format!("'{}'", &text[start..i]),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: i,
                expected: "operator, number, identifier or parenthesis".into(),
                found: format!("'{}'", ch),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", c)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?;
        let vars = exponent.variables();
        if let Some(v) = vars.first() {
            return Err(ParseError {
                offset: at,
                expected: "constant exponent".into(),
                found: format!("identifier '{}'", v),
            });
        }
        let p = exponent.eval_scalar(&[]).ok().filter(|p| p.is_finite()).ok_or_else(|| ParseError {
            offset: at,
            expected: "finite constant exponent".into(),
            found: exponent.to_string(),
        })?;
        Ok(Expr::Pow(Box::new(base), p))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Tok::Sym('(') {
                        return Err(self.error(&format!("'(' after function {}", name)));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(func, Box::new(arg)))
                } else if *self.peek() == Tok::Sym('(') {
                    Err(ParseError {
                        offset: at,
                        expected: "known function (sin, cos, tan, sinh, cosh, exp, log, sqrt)".into(),
                        found: format!("identifier '{}'", name),
                    })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.error("operand")),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn sqrt_of_sum() {
        let e = parse("sqrt(u^2+1)").unwrap();
        let want = Expr::Call(
            Func::Sqrt,
            b(Expr::Add(b(Expr::Pow(b(Expr::var("u")), 2.0)), b(Expr::Num(1.0)))),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn product_node() {
        let e = parse("sinh(u)*cos(v)").unwrap();
        assert!(matches!(e, Expr::Mul(_, _)));
    }

    #[test]
    fn double_star_is_rejected() {
        let err = parse("2**x").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.found, "'*'");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("-u^2").unwrap(), Expr::Neg(b(Expr::Pow(b(Expr::var("u")), 2.0))));
        assert_eq!(parse("u^2^3").unwrap(), Expr::Pow(b(Expr::var("u")), 8.0));
        assert_eq!(parse("u^-1").unwrap(), Expr::Pow(b(Expr::var("u")), -1.0));
        assert_eq!(
            parse("a-b-c").unwrap(),
            Expr::Sub(b(Expr::Sub(b(Expr::var("a")), b(Expr::var("b")))), b(Expr::var("c")))
        );
        assert_eq!(
            parse("a/b*c").unwrap(),
            Expr::Mul(b(Expr::Div(b(Expr::var("a")), b(Expr::var("b")))), b(Expr::var("c")))
        );
        assert_eq!(parse("2.5e-1").unwrap(), Expr::Num(0.25));
        assert_eq!(parse(".5").unwrap(), Expr::Num(0.5));
    }

    #[test]
    fn error_positions() {
        let e = parse("x^y").unwrap_err();
        assert_eq!((e.offset, e.expected.as_str()), (2, "constant exponent"));
        let e = parse("sin x").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse("foo(x)").unwrap_err();
        assert_eq!(e.offset, 0);
        let e = parse("(x+1").unwrap_err();
        assert_eq!((e.offset, e.found.as_str()), (4, "end of input"));
        let e = parse("x $ 1").unwrap_err();
        assert_eq!((e.offset, e.found.as_str()), (2, "'$'"));
        let e = parse("x y").unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(parse("").unwrap_err().found, "end of input");
        // deterministic message
        assert_eq!(
            parse("2**x").unwrap_err().to_string(),
            "parse error at byte 2: expected operand, found '*'"
        );
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "sqrt(x^2+1)",
            "-(u1)^-0.5 * cosh(u2) / (1 + exp(-u1))",
            "a - (b - c) + -d^2",
            "log(1e-3 + x^2) * tan(0.1*y)",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{}", src);
        }
    }
}
