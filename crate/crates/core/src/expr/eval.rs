use std::collections::HashMap;

use thiserror::Error;

use super::{Expr, Func};
use crate::jet::{Jet, JetError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("{func} is undefined at {value:e}")]
    Domain { func: &'static str, value: f64 },
}

/// Name lookup for evaluation.
pub trait Bindings<T> {
    fn lookup(&self, name: &str) -> Option<&T>;
}

impl<T> Bindings<T> for [(&str, T)] {
    fn lookup(&self, name: &str) -> Option<&T> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

impl<T, const N: usize> Bindings<T> for [(&str, T); N] {
    fn lookup(&self, name: &str) -> Option<&T> {
        self.as_slice().lookup(name)
    }
}

impl<T> Bindings<T> for HashMap<String, T> {
    fn lookup(&self, name: &str) -> Option<&T> {
        self.get(name)
    }
}

pub type ScalarBindings = HashMap<String, f64>;
pub type JetBindings = HashMap<String, Jet>;

fn scalar_call(f: Func, x: f64) -> Result<f64, EvalError> {
    let domain = |func| EvalError::Domain { func, value: x };
    Ok(match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => {
            if x.cos() == 0.0 {
                return Err(domain("tan"));
            }
            x.tan()
        }
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Exp => x.exp(),
        Func::Log => {
            if !(x > 0.0) {
                return Err(domain("log"));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(domain("sqrt"));
            }
            x.sqrt()
        }
    })
}

fn jet_call(f: Func, x: &Jet) -> Result<Jet, JetError> {
    match f {
        Func::Sin => Ok(x.sin()),
        Func::Cos => Ok(x.cos()),
        Func::Tan => x.tan(),
        Func::Sinh => Ok(x.sinh()),
        Func::Cosh => Ok(x.cosh()),
        Func::Exp => Ok(x.exp()),
        Func::Log => x.ln(),
        Func::Sqrt => x.sqrt(),
    }
}

impl Expr {
    /// Evaluate on plain numbers.
    pub fn eval_scalar<B: Bindings<f64> + ?Sized>(&self, vars: &B) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(name) => *vars
                .lookup(name)
                .ok_or_else(|| EvalError::UnboundVariable(name.clone()))?,
            Expr::Neg(a) => -a.eval_scalar(vars)?,
            Expr::Add(a, b) => a.eval_scalar(vars)? + b.eval_scalar(vars)?,
            Expr::Sub(a, b) => a.eval_scalar(vars)? - b.eval_scalar(vars)?,
            Expr::Mul(a, b) => a.eval_scalar(vars)? * b.eval_scalar(vars)?,
            Expr::Div(a, b) => {
                let d = b.eval_scalar(vars)?;
                if d == 0.0 {
                    return Err(EvalError::Domain { func: "division", value: d });
                }
                a.eval_scalar(vars)? / d
            }
            Expr::Pow(a, p) => {
                let x = a.eval_scalar(vars)?;
                if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
                    if x == 0.0 && *p < 0.0 {
                        return Err(EvalError::Domain { func: "pow", value: x });
                    }
                    x.powi(*p as i32)
                } else {
                    if !(x > 0.0) {
                        return Err(EvalError::Domain { func: "pow", value: x });
                    }
                    x.powf(*p)
                }
            }
            Expr::Call(f, a) => scalar_call(*f, a.eval_scalar(vars)?)?,
        })
    }

    /// Evaluate on jet-valued bindings. Constants get the order of the
    /// lowest-order binding that the expression actually uses (order 0 if it
    /// uses none).
    pub fn eval_jet<B: Bindings<Jet> + ?Sized>(&self, vars: &B, order: usize) -> Result<Jet, EvalError> {
        Ok(match self {
            Expr::Num(v) => Jet::constant(*v, order),
            Expr::Var(name) => vars
                .lookup(name)
                .ok_or_else(|| EvalError::UnboundVariable(name.clone()))?
                .truncate(order),
            Expr::Neg(a) => -a.eval_jet(vars, order)?,
            Expr::Add(a, b) => a.eval_jet(vars, order)? + b.eval_jet(vars, order)?,
            Expr::Sub(a, b) => a.eval_jet(vars, order)? - b.eval_jet(vars, order)?,
            Expr::Mul(a, b) => a.eval_jet(vars, order)? * b.eval_jet(vars, order)?,
            Expr::Div(a, b) => a.eval_jet(vars, order)?.try_div(&b.eval_jet(vars, order)?)?,
            Expr::Pow(a, p) => a.eval_jet(vars, order)?.powf(*p)?,
            Expr::Call(f, a) => jet_call(*f, &a.eval_jet(vars, order)?)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;

    fn jet(c: &[f64]) -> Jet {
        Jet::from_coeffs(c.to_vec()).unwrap()
    }

    #[test]
    fn jet_examples() {
        let u = jet(&[1.0, 1.0, 0.0]);
        let v = jet(&[2.0, 0.0, 0.0]);
        let r = parse("u+v").unwrap().eval_jet(&[("u", u.clone()), ("v", v)], 2).unwrap();
        assert_eq!(r.coeffs(), &[3.0, 1.0, 0.0]);

        let r = parse("3").unwrap().eval_jet(&[("u", u)], 2).unwrap();
        assert_eq!(r.coeffs(), &[3.0, 0.0, 0.0]);
    }

    #[test]
    fn sqrt_of_one_plus_square() {
        // √(1+t²) = 1 + t²/2 + O(t⁴)
        let r = parse("sqrt(u^2+1)")
            .unwrap()
            .eval_jet(&[("u", Jet::variable(0.0, 3))], 3)
            .unwrap();
        for (a, b) in r.coeffs().iter().zip([1.0, 0.0, 0.5, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        // central differences on the closed form
        let f = |t: f64| (t * t + 1.0).sqrt();
        let h = 1e-3;
        let second = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert_abs_diff_eq!(r.derivative(2).unwrap(), second, epsilon = 1e-6);
    }

    #[test]
    fn errors() {
        let e = parse("u + w").unwrap();
        assert_eq!(
            e.eval_jet(&[("u", Jet::variable(0.0, 2))], 2),
            Err(EvalError::UnboundVariable("w".into()))
        );
        assert!(matches!(
            parse("log(u)").unwrap().eval_jet(&[("u", Jet::variable(-1.0, 2))], 2),
            Err(EvalError::Jet(JetError::Domain { func: "log", .. }))
        ));
        assert!(matches!(
            parse("u^0.5").unwrap().eval_scalar(&[("u", -1.0)]),
            Err(EvalError::Domain { func: "pow", .. })
        ));
        assert_eq!(parse("(-2)^3").unwrap().eval_scalar(&[] as &[(&str, f64)]), Ok(-8.0));
    }

    #[test]
    fn scalar_and_jet_agree_on_value() {
        let e = parse("sinh(u)*cos(v) - tan(u/3) + exp(-v^2)/sqrt(2+u)").unwrap();
        let s = e.eval_scalar(&[("u", 0.4), ("v", -1.3)]).unwrap();
        let j = e
            .eval_jet(&[("u", Jet::variable(0.4, 4)), ("v", Jet::constant(-1.3, 4))], 4)
            .unwrap();
        assert_abs_diff_eq!(s, j.value(), epsilon = 1e-14);
    }
}
