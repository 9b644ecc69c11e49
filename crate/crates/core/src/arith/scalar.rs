//! Elements of ℚ(p₁,…,p_m): rational functions in named parameters only.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{q, Atom, Error, Field, Poly, RatFunc, Result, Ring, Q};
use crate::parse::{is_param_name, parse_expr, Expr};

/// Canonical reduced fraction of polynomials in parameters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Scalar(RatFunc);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(RatFunc::zero())
    }

    pub fn one() -> Scalar {
        Scalar(RatFunc::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar(RatFunc::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar(RatFunc::from_q(super::qf(n, d)))
    }

    pub fn from_q(c: Q) -> Scalar {
        Scalar(RatFunc::from_q(c))
    }

    pub fn param(name: &str) -> Scalar {
        Scalar(RatFunc::param(name))
    }

    /// Wrap a rational function that contains no evaluation symbols.
    pub fn from_ratfunc(f: RatFunc) -> Option<Scalar> {
        f.atoms().iter().all(|a| !a.is_eval()).then_some(Scalar(f))
    }

    pub fn as_ratfunc(&self) -> &RatFunc {
        &self.0
    }

    pub fn into_ratfunc(self) -> RatFunc {
        self.0
    }

    pub fn as_q(&self) -> Option<Q> {
        self.0.as_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.0.atoms().iter().filter_map(|a| a.param_name().map(String::from)).collect()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.0.contains_atom(&Atom::param(name))
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        Scalar(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        Scalar(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        Scalar(self.0.mul(&o.0))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(Scalar(self.0.div(&o.0)?))
    }

    pub fn neg(&self) -> Scalar {
        Scalar(self.0.neg())
    }

    pub fn inv(&self) -> Result<Scalar> {
        Ok(Scalar(self.0.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        Ok(Scalar(self.0.pow(e)?))
    }

    pub fn scale(&self, c: &Q) -> Scalar {
        Scalar(self.0.scale(c))
    }

    /// Substitute parameter `name` by `v`.
    pub fn subst(&self, name: &str, v: &Scalar) -> Result<Scalar> {
        Ok(Scalar(self.0.substitute_atom(&Atom::param(name), &v.0)?))
    }

    pub fn derivative(&self, name: &str) -> Scalar {
        Scalar(self.0.derivative(&Atom::param(name)))
    }

    /// Numerator and denominator as polynomials.
    pub fn parts(&self) -> (&Poly, &Poly) {
        (self.0.numer(), self.0.denom())
    }

    pub fn parse(text: &str) -> Result<Scalar> {
        let e = parse_expr(text)?;
        scalar_from_expr(&e)
    }
}

pub fn scalar_from_expr(e: &Expr) -> Result<Scalar> {
    Ok(match e {
        Expr::Num(n) => Scalar::from_q(Q::from_integer(n.clone())),
        Expr::Ident(id, col) => {
            if !is_param_name(id) {
                return Err(Error::Syntax { column: *col, message: format!("'{id}' is not a parameter name") });
            }
            Scalar::param(id)
        }
        Expr::Eval(..) => {
            return Err(Error::Syntax { column: 0, message: "evaluation symbol inside a scalar".into() })
        }
        Expr::Neg(a) => scalar_from_expr(a)?.neg(),
        Expr::Add(a, b) => scalar_from_expr(a)?.add(&scalar_from_expr(b)?),
        Expr::Sub(a, b) => scalar_from_expr(a)?.sub(&scalar_from_expr(b)?),
        Expr::Mul(a, b) => scalar_from_expr(a)?.mul(&scalar_from_expr(b)?),
        Expr::Div(a, b) => scalar_from_expr(a)?.div(&scalar_from_expr(b)?)?,
        Expr::Pow(a, k) => scalar_from_expr(a)?.pow(*k)?,
    })
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        Scalar::parse(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

impl Field for Scalar {
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
}

/// Convenience: `Scalar` for an integer.
pub fn sc(n: i64) -> Scalar {
    Scalar::from_q(q(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        for t in ["r/(r-s)", "1/2", "-r+s^2", "(r+s)/(r*s-1)", "3*t^2-1/5"] {
            let a = Scalar::parse(t).unwrap();
            let b = Scalar::parse(&a.to_string()).unwrap();
            assert_eq!(a, b, "{t} printed as {a}");
        }
    }

    #[test]
    fn canonical_equality() {
        let a = Scalar::parse("r/(r-s) + s/(s-r)").unwrap();
        assert!(a.is_one());
        let b = Scalar::parse("(s^2-r^2)/(s-r)").unwrap();
        assert_eq!(b, Scalar::parse("s+r").unwrap());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::parse("1/(r-r)"), Err(Error::DivisionByZero));
    }
}
