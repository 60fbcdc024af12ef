use super::{Expr, Func};

impl Expr {
    /// Symbolic partial derivative with respect to `var`.
    ///
    /// Only 0/1 folding is applied; results are checked numerically against
    /// jet evaluation rather than brought to a canonical form.
    pub fn diff(&self, var: &str) -> Expr {
        match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::Var(v) => Expr::Num(if v == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => Expr::neg(a.diff(var)),
            Expr::Add(a, b) => Expr::add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => Expr::sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(var), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => {
                // a'/b − a·b'/b²
                let da = a.diff(var);
                let db = b.diff(var);
                Expr::sub(
                    Expr::div(da, (**b).clone()),
                    Expr::div(Expr::mul((**a).clone(), db), Expr::pow((**b).clone(), 2.0)),
                )
            }
            Expr::Pow(a, p) => Expr::mul(
                Expr::mul(Expr::Num(*p), Expr::pow((**a).clone(), p - 1.0)),
                a.diff(var),
            ),
            Expr::Call(f, a) => {
                let da = a.diff(var);
                if da.as_num() == Some(0.0) {
                    return Expr::Num(0.0);
                }
                let arg = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, arg),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, arg)),
                    Func::Tan => Expr::pow(Expr::call(Func::Cos, arg), -2.0),
                    Func::Sinh => Expr::call(Func::Cosh, arg),
                    Func::Cosh => Expr::call(Func::Sinh, arg),
                    Func::Exp => Expr::call(Func::Exp, arg),
                    Func::Log => return Expr::div(da, arg),
                    Func::Sqrt => {
                        return Expr::div(da, Expr::mul(Expr::Num(2.0), Expr::call(Func::Sqrt, arg)))
                    }
                };
                Expr::mul(outer, da)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_rule() {
        let d = parse("u*v").unwrap().diff("u");
        assert_eq!(d, parse("v").unwrap());
    }

    #[test]
    fn chain_rule_through_sqrt() {
        let d = parse("sqrt(u^2+1)").unwrap().diff("u");
        let want = parse("u/sqrt(u^2+1)").unwrap();
        for u in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            let b = [("u", u)];
            assert_abs_diff_eq!(d.eval_scalar(&b).unwrap(), want.eval_scalar(&b).unwrap(), epsilon = 1e-14);
        }
    }

    #[test]
    fn unrelated_variable_gives_zero() {
        assert_eq!(parse("u^2").unwrap().diff("v").as_num(), Some(0.0));
        assert_eq!(parse("sin(u)*exp(u)").unwrap().diff("v").as_num(), Some(0.0));
    }
}
