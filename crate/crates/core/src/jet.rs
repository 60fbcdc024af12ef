//! Truncated Taylor series ("jets") in one variable.
//!
//! A jet of order `K` stores `a_0..=a_K` with
//! `f(t0 + h) = Σ a_k h^k + O(h^{K+1})`. All arithmetic is closed at fixed
//! order; binary operations between jets of different orders truncate to the
//! smaller order, which is the order at which the result is still exact.
//!
//! Elementary functions use the usual first-order recurrences obtained from
//! their differential equations (`b' = a'·b` for `exp`, `a·b' = p·a'·b` for
//! powers, and so on), so every function costs `O(K²)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

use crate::minkowski::{MinkVector, PseudoSphere};

/// Order used when nothing else is requested.
pub const DEFAULT_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero constant term")]
    DivisionByZeroConstantTerm,
    #[error("{func} is not analytic at {value:e}")]
    Domain { func: &'static str, value: f64 },
    #[error("composition needs an inner series without constant term (got {0:e})")]
    NonzeroInnerConstant(f64),
    #[error("series is not invertible: linear coefficient is {0:e}")]
    NonInvertibleSeries(f64),
    #[error("derivative of order {k} requested from a jet of order {order}")]
    OrderExceeded { k: usize, order: usize },
    #[error("a jet needs at least one coefficient")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn from_coeffs(c: Vec<f64>) -> Result<Self, JetError> {
        if c.is_empty() {
            return Err(JetError::Empty);
        }
        Ok(Jet { c })
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Jet { c }
    }

    pub fn zero(order: usize) -> Self {
        Jet::constant(0.0, order)
    }

    /// The independent variable expanded about `x0`: `x0 + h`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Jet::constant(x0, order);
        if order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    /// `h` itself, the identity series.
    pub fn identity(order: usize) -> Self {
        Jet::variable(0.0, order)
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    /// `k!·a_k`, the `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Result<f64, JetError> {
        if k > self.order() {
            return Err(JetError::OrderExceeded { k, order: self.order() });
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        Ok(fact * self.c[k])
    }

    /// Jet of the derivative; one order is lost. An order-0 jet yields an
    /// order-0 zero.
    pub fn deriv(&self) -> Jet {
        if self.order() == 0 {
            return Jet::zero(0);
        }
        Jet {
            c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect(),
        }
    }

    /// Antiderivative with constant term `c0`; one order is gained.
    pub fn integrate(&self, c0: f64) -> Jet {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(c0);
        c.extend(self.c.iter().enumerate().map(|(k, a)| a / (k + 1) as f64));
        Jet { c }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut c = self.c.clone();
        c.resize(order + 1, 0.0);
        Jet { c }
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet { c: self.c.iter().map(|a| a * k).collect() }
    }

    pub fn add_scalar(&self, k: f64) -> Jet {
        let mut j = self.clone();
        j.c[0] += k;
        j
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&a| a == 0.0)
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let a0 = self.c[0];
        if a0 == 0.0 {
            return Err(JetError::DivisionByZeroConstantTerm);
        }
        let n = self.c.len();
        let mut b = vec![0.0; n];
        b[0] = 1.0 / a0;
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.c[j] * b[k - j]).sum();
            b[k] = -s / a0;
        }
        Ok(Jet { c: b })
    }

    pub fn try_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        let n = self.c.len().min(rhs.c.len());
        let d0 = rhs.c[0];
        if d0 == 0.0 {
            return Err(JetError::DivisionByZeroConstantTerm);
        }
        let mut q = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| rhs.c[j] * q[k - j]).sum();
            q[k] = (self.c[k] - s) / d0;
        }
        Ok(Jet { c: q })
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut b = vec![0.0; n];
        b[0] = self.c[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.c[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet { c: b }
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a0 = self.c[0];
        if !(a0 > 0.0) {
            return Err(JetError::Domain { func: "log", value: a0 });
        }
        let n = self.c.len();
        let mut b = vec![0.0; n];
        b[0] = a0.ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * b[j] * self.c[k - j]).sum();
            b[k] = (self.c[k] - s / k as f64) / a0;
        }
        Ok(Jet { c: b })
    }

    /// `(sin a, cos a)` from the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.c[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet, JetError> {
        let (s, c) = self.sin_cos();
        s.try_div(&c).map_err(|_| JetError::Domain { func: "tan", value: self.c[0] })
    }

    /// `(sinh a, cosh a)` from the coupled recurrence.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.c[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = cc / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    /// Square root; the constant term must be positive unless the jet is
    /// identically zero.
    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a0 = self.c[0];
        if self.is_zero() {
            return Ok(self.clone());
        }
        if !(a0 > 0.0) {
            return Err(JetError::Domain { func: "sqrt", value: a0 });
        }
        let n = self.c.len();
        let mut b = vec![0.0; n];
        b[0] = a0.sqrt();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| b[j] * b[k - j]).sum();
            b[k] = (self.c[k] - s) / (2.0 * b[0]);
        }
        Ok(Jet { c: b })
    }

    /// Integer power by repeated squaring. Negative exponents need a nonzero
    /// constant term.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Real power. Integer-valued exponents go through [`Jet::powi`]; any
    /// other exponent needs a positive base.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let a0 = self.c[0];
        if !(a0 > 0.0) {
            return Err(JetError::Domain { func: "pow", value: a0 });
        }
        let n = self.c.len();
        let mut b = vec![0.0; n];
        b[0] = a0.powf(p);
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * self.c[j] * b[k - j])
                .sum();
            b[k] = s / (k as f64 * a0);
        }
        Ok(Jet { c: b })
    }

    /// `self ∘ inner`, with `inner` expanded about the same point and without
    /// constant term.
    pub fn compose(&self, inner: &Jet) -> Result<Jet, JetError> {
        if inner.c[0] != 0.0 {
            return Err(JetError::NonzeroInnerConstant(inner.c[0]));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Jet::constant(self.c[order], order);
        for k in (0..order).rev() {
            acc = (&acc * &inner).add_scalar(self.c[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `self ∘ g = h`.
    ///
    /// Newton's method on series, `g ← g − (s∘g − h)/(s'∘g)`, doubling the
    /// number of correct coefficients per step.
    pub fn invert_series(&self) -> Result<Jet, JetError> {
        if self.c[0] != 0.0 {
            return Err(JetError::NonzeroInnerConstant(self.c[0]));
        }
        let order = self.order();
        let a1 = self.coeff(1);
        if order == 0 || a1 == 0.0 || !a1.is_finite() {
            return Err(JetError::NonInvertibleSeries(a1));
        }
        let mut g = Jet::zero(order);
        g.c[1] = 1.0 / a1;
        // s' as an exact polynomial of the truncated s, padded back to `order`
        let ds = self.deriv().truncate(order);
        let mut prec = 1;
        while prec < order {
            prec = (2 * prec).min(order);
            let gp = g.truncate(prec);
            let residual = &self.truncate(prec).compose(&gp)? - &Jet::identity(prec);
            let slope = ds.truncate(prec).compose(&gp)?;
            g = &gp - &residual.try_div(&slope)?;
        }
        Ok(g)
    }
}

fn zip_with(a: &Jet, b: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
    Jet {
        c: a.c.iter().zip(&b.c).map(|(&x, &y)| f(x, y)).collect(),
    }
}

fn cauchy(a: &Jet, b: &Jet) -> Jet {
    let n = a.c.len().min(b.c.len());
    let mut c = vec![0.0; n];
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = (0..=k).map(|j| a.c[j] * b.c[k - j]).sum();
    }
    Jet { c }
}

macro_rules! jet_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Jet> for &'a Jet {
            type Output = Jet;
            fn $method(self, rhs: &'a Jet) -> Jet {
                $body(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &'a Jet) -> Jet {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<Jet> for &'a Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                $body(self, &rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a: &Jet, b: &Jet| zip_with(a, b, |x, y| x + y));
jet_binop!(Sub, sub, |a: &Jet, b: &Jet| zip_with(a, b, |x, y| x - y));
jet_binop!(Mul, mul, cauchy);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        *self = &*self + rhs;
    }
}

/// A Minkowski-vector-valued jet: three component jets of equal order.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVector(pub [Jet; 3]);

impl JetVector {
    pub fn new(x0: Jet, x1: Jet, x2: Jet) -> Self {
        let order = x0.order().min(x1.order()).min(x2.order());
        JetVector([x0.truncate(order), x1.truncate(order), x2.truncate(order)])
    }

    pub fn constant(v: &MinkVector, order: usize) -> Self {
        JetVector(v.0.map(|c| Jet::constant(c, order)))
    }

    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    /// The 0-jet, i.e. the vector at the expansion point.
    pub fn value(&self) -> MinkVector {
        MinkVector(std::array::from_fn(|i| self.0[i].value()))
    }

    /// Vector of `k`-th Taylor coefficients.
    pub fn coeff(&self, k: usize) -> MinkVector {
        MinkVector(std::array::from_fn(|i| self.0[i].coeff(k)))
    }

    /// Vector of `k`-th derivatives.
    pub fn derivative(&self, k: usize) -> Result<MinkVector, JetError> {
        Ok(MinkVector([
            self.0[0].derivative(k)?,
            self.0[1].derivative(k)?,
            self.0[2].derivative(k)?,
        ]))
    }

    pub fn deriv(&self) -> JetVector {
        JetVector(std::array::from_fn(|i| self.0[i].deriv()))
    }

    pub fn truncate(&self, order: usize) -> JetVector {
        JetVector(std::array::from_fn(|i| self.0[i].truncate(order)))
    }

    pub fn pairing(&self, other: &JetVector) -> Jet {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        &(&(a1 * b1) + &(a2 * b2)) - &(a0 * b0)
    }

    pub fn pairing_const(&self, v: &MinkVector) -> Jet {
        let [a0, a1, a2] = &self.0;
        &(&a1.scale(v[1]) + &a2.scale(v[2])) - &a0.scale(v[0])
    }

    pub fn wedge(&self, other: &JetVector) -> JetVector {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        JetVector([
            -(&(a1 * b2) - &(a2 * b1)),
            -(&(a0 * b2) - &(a2 * b0)),
            &(a0 * b1) - &(a1 * b0),
        ])
    }

    /// Multiply every component by a scalar jet.
    pub fn mul_jet(&self, k: &Jet) -> JetVector {
        JetVector(std::array::from_fn(|i| &self.0[i] * k))
    }

    pub fn div_jet(&self, k: &Jet) -> Result<JetVector, JetError> {
        let r = k.recip()?;
        Ok(self.mul_jet(&r))
    }

    pub fn scale(&self, k: f64) -> JetVector {
        JetVector(std::array::from_fn(|i| self.0[i].scale(k)))
    }

    pub fn compose(&self, inner: &Jet) -> Result<JetVector, JetError> {
        Ok(JetVector([
            self.0[0].compose(inner)?,
            self.0[1].compose(inner)?,
            self.0[2].compose(inner)?,
        ]))
    }

    /// Divide by `√|⟨v,v⟩|`, assuming the causal type does not change across
    /// the jet (guaranteed when the 0-jet is not lightlike).
    pub fn normalized(&self) -> Result<JetVector, JetError> {
        let q = self.pairing(self);
        let q = if q.value() < 0.0 { -q } else { q };
        let len = q.sqrt()?;
        self.div_jet(&len)
    }

    /// Largest absolute component coefficient.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(Jet::max_abs).fold(0.0, f64::max)
    }

    /// Residual of the 0-jet against a pseudo-sphere equation.
    pub fn sphere_residual(&self, s: PseudoSphere) -> f64 {
        s.residual(&self.value()).abs()
    }
}

impl Add for &JetVector {
    type Output = JetVector;
    fn add(self, rhs: &JetVector) -> JetVector {
        JetVector(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for &JetVector {
    type Output = JetVector;
    fn sub(self, rhs: &JetVector) -> JetVector {
        JetVector(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &JetVector {
    type Output = JetVector;
    fn neg(self) -> JetVector {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn jet(c: &[f64]) -> Jet {
        Jet::from_coeffs(c.to_vec()).unwrap()
    }

    fn assert_coeffs(j: &Jet, want: &[f64], tol: f64) {
        assert_eq!(j.order() + 1, want.len(), "order mismatch: {:?}", j.coeffs());
        for (a, b) in j.coeffs().iter().zip(want) {
            assert_abs_diff_eq!(*a, *b, epsilon = tol);
        }
    }

    #[test]
    fn arithmetic_examples() {
        assert_coeffs(&(jet(&[1.0, 1.0]) * jet(&[1.0, 1.0])), &[1.0, 2.0], 0.0);
        let q = jet(&[1.0, 0.0, 0.0]).try_div(&jet(&[1.0, 1.0, 0.0])).unwrap();
        assert_coeffs(&q, &[1.0, -1.0, 1.0], 1e-15);
        let a = jet(&[0.3, -2.0, 5.0]);
        assert_eq!(&a + &Jet::zero(2), a);
        assert_eq!(
            jet(&[1.0, 2.0]).try_div(&jet(&[0.0, 1.0])),
            Err(JetError::DivisionByZeroConstantTerm)
        );
    }

    #[test]
    fn mixed_orders_truncate_to_smaller() {
        let a = jet(&[1.0, 1.0, 1.0, 1.0]);
        let b = jet(&[2.0, 3.0]);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
    }

    #[test]
    fn elementary_examples() {
        let x = Jet::variable(0.0, 3);
        assert_coeffs(&x.sin(), &[0.0, 1.0, 0.0, -1.0 / 6.0], 1e-15);
        assert_coeffs(&jet(&[1.0, 2.0, 1.0]).sqrt().unwrap(), &[1.0, 1.0, 0.0], 1e-15);
        assert_coeffs(&Jet::zero(4).exp(), &[1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        let ln1p = Jet::variable(1.0, 4).ln().unwrap();
        assert_coeffs(&ln1p, &[0.0, 1.0, -0.5, 1.0 / 3.0, -0.25], 1e-15);
        let c = Jet::variable(0.0, 4).cos();
        assert_coeffs(&c, &[1.0, 0.0, -0.5, 0.0, 1.0 / 24.0], 1e-15);
        // tan x = x + x^3/3 + 2x^5/15
        let t = Jet::variable(0.0, 5).tan().unwrap();
        assert_coeffs(&t, &[0.0, 1.0, 0.0, 1.0 / 3.0, 0.0, 2.0 / 15.0], 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(jet(&[0.0, 1.0]).ln(), Err(JetError::Domain { func: "log", .. })));
        assert!(matches!(jet(&[-1.0, 1.0]).sqrt(), Err(JetError::Domain { func: "sqrt", .. })));
        assert!(matches!(jet(&[-1.0, 1.0]).powf(0.5), Err(JetError::Domain { func: "pow", .. })));
        // integer powers of negative bases are fine
        assert_coeffs(&jet(&[-1.0, 1.0, 0.0]).powf(2.0).unwrap(), &[1.0, -2.0, 1.0], 0.0);
        assert_eq!(jet(&[0.0, 0.0]).sqrt().unwrap(), jet(&[0.0, 0.0]));
    }

    #[test]
    fn powf_matches_binomial_series() {
        // (1+h)^(1/2) = 1 + h/2 - h^2/8 + h^3/16
        let r = Jet::variable(1.0, 3).powf(0.5).unwrap();
        assert_coeffs(&r, &[1.0, 0.5, -0.125, 0.0625], 1e-15);
        let inv = Jet::variable(2.0, 3).powi(-1).unwrap();
        assert_coeffs(&inv, &[0.5, -0.25, 0.125, -0.0625], 1e-15);
    }

    #[test]
    fn compose_examples() {
        let out = jet(&[0.0, 1.0, 0.0]).compose(&jet(&[0.0, 2.0, 0.0])).unwrap();
        assert_coeffs(&out, &[0.0, 2.0, 0.0], 0.0);
        // (h + h^2)^2 = h^2 + 2h^3 + h^4
        let out = jet(&[0.0, 0.0, 1.0, 0.0, 0.0])
            .compose(&jet(&[0.0, 1.0, 1.0, 0.0, 0.0]))
            .unwrap();
        assert_coeffs(&out, &[0.0, 0.0, 1.0, 2.0, 1.0], 0.0);
        let f = jet(&[0.5, -1.0, 3.0, 0.25]);
        assert_eq!(f.compose(&Jet::identity(3)).unwrap(), f);
        assert_eq!(
            f.compose(&jet(&[1.0, 1.0, 0.0, 0.0])),
            Err(JetError::NonzeroInnerConstant(1.0))
        );
    }

    #[test]
    fn invert_series_examples() {
        assert_coeffs(&jet(&[0.0, 2.0, 0.0, 0.0]).invert_series().unwrap(), &[0.0, 0.5, 0.0, 0.0], 0.0);
        assert_coeffs(
            &jet(&[0.0, 1.0, 1.0, 0.0]).invert_series().unwrap(),
            &[0.0, 1.0, -1.0, 2.0],
            1e-14,
        );
        assert_eq!(
            jet(&[0.0, 0.0, 1.0]).invert_series(),
            Err(JetError::NonInvertibleSeries(0.0))
        );
        let s = jet(&[0.0, 1.5, -0.3, 0.7, 0.1, -0.2, 0.05, 0.01]);
        let back = s.invert_series().unwrap().invert_series().unwrap();
        for k in 0..=7 {
            assert_abs_diff_eq!(back.coeff(k), s.coeff(k), epsilon = 1e-10);
        }
    }

    #[test]
    fn derivative_extraction() {
        let s = jet(&[0.0, 1.0, 0.0, -1.0 / 6.0]);
        assert_abs_diff_eq!(s.derivative(3).unwrap(), -1.0, epsilon = 1e-15);
        assert_eq!(jet(&[4.25, 1.0]).derivative(0).unwrap(), 4.25);
        assert_eq!(jet(&[5.0, 0.0, 3.0]).derivative(2).unwrap(), 6.0);
        assert_eq!(
            jet(&[5.0, 0.0, 3.0]).derivative(3),
            Err(JetError::OrderExceeded { k: 3, order: 2 })
        );
    }

    #[test]
    fn jet_vector_wedge_lifts_pointwise() {
        let a = JetVector::new(Jet::variable(1.0, 2), Jet::constant(0.5, 2), Jet::variable(-0.2, 2).sin());
        let b = JetVector::new(Jet::constant(2.0, 2), Jet::variable(0.3, 2).exp(), Jet::constant(1.0, 2));
        let w = a.wedge(&b).value();
        assert_eq!(w, a.value().wedge(&b.value()));
        assert!(w.pairing(&a.value()).abs() < 1e-14);
    }

    fn jet_strategy(order: usize) -> impl Strategy<Value = Jet> {
        proptest::collection::vec(-3.0..3.0f64, order + 1).prop_map(|c| Jet::from_coeffs(c).unwrap())
    }

    fn close(a: &Jet, b: &Jet, rel: f64) -> bool {
        let scale = 1.0 + a.max_abs().max(b.max_abs());
        (a - b).max_abs() <= rel * scale
    }

    proptest! {
        #[test]
        fn ring_axioms(a in jet_strategy(6), b in jet_strategy(6), c in jet_strategy(6)) {
            prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12));
            prop_assert!(close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-12));
            prop_assert!(close(&(&a * &b), &(&b * &a), 1e-12));
        }

        #[test]
        fn hyperbolic_identity(a in jet_strategy(6)) {
            let (s, c) = a.sinh_cosh();
            let lhs = &(&s * &s) - &(&c * &c);
            let scale = c.max_abs().powi(2).max(1.0);
            prop_assert!(close(&lhs, &Jet::constant(-1.0, 6), 1e-12 * scale));
        }

        #[test]
        fn inversion_round_trip(mut c in proptest::collection::vec(-2.0..2.0f64, 8), a1 in 0.2..3.0f64) {
            c[0] = 0.0;
            c[1] = a1;
            let s = Jet::from_coeffs(c).unwrap();
            let g = s.invert_series().unwrap();
            let id = s.compose(&g).unwrap();
            let scale = 1.0 + g.max_abs().powi(7);
            prop_assert!(close(&id, &Jet::identity(7), 1e-10 * scale));
        }
    }
}
