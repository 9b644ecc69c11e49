//! The field of rational expressions in evaluation symbols `E[a;k]`.
//!
//! An [`MMElement`] is one reduced fraction in the parameters and the symbols
//! jointly. Scalar coefficients are therefore folded into the fraction rather
//! than kept separately, which still gives a unique normal form.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::scalar::scalar_from_expr;
use crate::arith::{Atom, Field, Poly, RatFunc, Ring, Scalar, Q};
use crate::error::{Error, Result};
use crate::parse::{is_param_name, parse_expr, Expr};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct MMElement(RatFunc);

/// `E[point;order]`.
pub fn sym(point: &Scalar, order: u32) -> MMElement {
    MMElement(RatFunc::atom(Atom::eval(point.as_ratfunc().clone(), order)))
}

/// `E[point;0]`.
pub fn e0(point: &Scalar) -> MMElement {
    sym(point, 0)
}

impl MMElement {
    pub fn zero() -> Self {
        MMElement(RatFunc::zero())
    }

    pub fn one() -> Self {
        MMElement(RatFunc::one())
    }

    pub fn int(n: i64) -> Self {
        MMElement(RatFunc::from_int(n))
    }

    pub fn scalar(c: &Scalar) -> Self {
        MMElement(c.as_ratfunc().clone())
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        MMElement(f)
    }

    pub fn as_ratfunc(&self) -> &RatFunc {
        &self.0
    }

    pub fn into_ratfunc(self) -> RatFunc {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// The value as a [`Scalar`] when no symbol occurs.
    pub fn as_scalar(&self) -> Option<Scalar> {
        Scalar::from_ratfunc(self.0.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        MMElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        MMElement(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        MMElement(self.0.mul(&o.0))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(MMElement(self.0.div(&o.0)?))
    }

    pub fn neg(&self) -> Self {
        MMElement(self.0.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(MMElement(self.0.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(MMElement(self.0.pow(e)?))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        MMElement(self.0.mul(c.as_ratfunc()))
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        MMElement(self.0.scale(c))
    }

    /// All evaluation symbols `(point, order)` that occur.
    pub fn symbols(&self) -> BTreeSet<(Scalar, u32)> {
        self.0
            .atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Eval(p, k) => Some((Scalar::from_ratfunc((*p).clone()).expect("points are scalars"), k)),
                Atom::Param(_) => None,
            })
            .collect()
    }

    /// Points of all symbols in numerator or denominator.
    pub fn support(&self) -> BTreeSet<Scalar> {
        self.symbols().into_iter().map(|(p, _)| p).collect()
    }

    /// Parameters occurring anywhere, including inside symbol points.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.0.atoms() {
            match a {
                Atom::Param(n) => {
                    out.insert(n.to_string());
                }
                Atom::Eval(p, _) => out.extend(Scalar::from_ratfunc((*p).clone()).unwrap().params()),
            }
        }
        out
    }

    /// `deg N − deg D` in the symbols when both are homogeneous.
    pub fn homogeneity_degree(&self) -> Option<i64> {
        fn deg(p: &Poly) -> Option<i64> {
            let mut d = None;
            for (m, _) in p.terms() {
                let k: u32 = m.factors().iter().filter(|(a, _)| a.is_eval()).map(|(_, e)| *e).sum();
                match d {
                    None => d = Some(k as i64),
                    Some(x) if x != k as i64 => return None,
                    _ => {}
                }
            }
            Some(d.unwrap_or(0))
        }
        if self.is_zero() {
            return Some(0);
        }
        Some(deg(self.0.numer())? - deg(self.0.denom())?)
    }

    /// Replace symbols by elements; unmapped atoms stay.
    pub fn map_symbols(&self, f: &dyn Fn(&Scalar, u32) -> Option<MMElement>) -> Result<MMElement> {
        let g = |a: &Atom| match a {
            Atom::Eval(p, k) => f(&Scalar::from_ratfunc((**p).clone()).unwrap(), *k).map(|m| m.0),
            Atom::Param(_) => None,
        };
        Ok(MMElement(self.0.substitute(&g)?))
    }

    /// Substitute a parameter, including inside symbol points.
    pub fn subst(&self, name: &str, v: &Scalar) -> Result<MMElement> {
        let x = Atom::param(name);
        let vr = v.as_ratfunc();
        let g = |a: &Atom| match a {
            Atom::Param(_) if *a == x => Some(vr.clone()),
            Atom::Eval(p, k) if p.contains_atom(&x) => {
                p.substitute_atom(&x, vr).ok().map(|q| RatFunc::atom(Atom::eval(q, *k)))
            }
            _ => None,
        };
        Ok(MMElement(self.0.substitute(&g)?))
    }

    pub fn parse(text: &str) -> Result<Self> {
        mm_from_expr(&parse_expr(text)?)
    }
}

pub fn mm_from_expr(e: &Expr) -> Result<MMElement> {
    Ok(match e {
        Expr::Num(_) | Expr::Ident(..) => {
            if let Expr::Ident(id, col) = e {
                if !is_param_name(id) {
                    return Err(Error::Syntax { column: *col, message: format!("'{id}' is not a parameter name") });
                }
            }
            MMElement::scalar(&scalar_from_expr(e)?)
        }
        Expr::Eval(p, k) => sym(&scalar_from_expr(p)?, *k),
        Expr::Neg(a) => mm_from_expr(a)?.neg(),
        Expr::Add(a, b) => mm_from_expr(a)?.add(&mm_from_expr(b)?),
        Expr::Sub(a, b) => mm_from_expr(a)?.sub(&mm_from_expr(b)?),
        Expr::Mul(a, b) => mm_from_expr(a)?.mul(&mm_from_expr(b)?),
        Expr::Div(a, b) => mm_from_expr(a)?.div(&mm_from_expr(b)?)?,
        Expr::Pow(a, k) => mm_from_expr(a)?.pow(*k)?,
    })
}

impl fmt::Display for MMElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for MMElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Ring for MMElement {
    fn zero() -> Self {
        MMElement::zero()
    }
    fn one() -> Self {
        MMElement::one()
    }
    fn is_zero(&self) -> bool {
        MMElement::is_zero(self)
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
        self.scale_q(c)
    }
}

impl Field for MMElement {
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: &str) -> MMElement {
        MMElement::parse(x).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(m("E[1;0]").mul(&m("E[1;0]")), m("E[1;0]^2"));
        assert_eq!(m("(E[r;0]^2 - E[s;0]^2)/(E[r;0]-E[s;0])"), m("E[r;0]+E[s;0]"));
        assert!(m("E[0;0]*(1/E[0;0])").is_one());
    }

    #[test]
    fn support_examples() {
        let pts = |x: &str| m(x).support().into_iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(pts("E[2;0]"), vec!["2"]);
        let mut v = pts("E[r;1]/E[0;0]");
        v.sort();
        assert_eq!(v, vec!["0", "r"]);
        assert!(pts("5").is_empty());
    }

    #[test]
    fn homogeneity_examples() {
        assert_eq!(m("E[1;0]*E[2;0]/E[3;1]").homogeneity_degree(), Some(1));
        assert_eq!(m("E[0;0]-1").homogeneity_degree(), None);
        assert_eq!(m("7").homogeneity_degree(), Some(0));
        assert_eq!(m("r*E[1;0]+s*E[2;3]").homogeneity_degree(), Some(1));
    }

    #[test]
    fn roundtrip_examples() {
        for t in ["E[0;0]^2 * E[1/2;1]", "E[r;0] - 2", "E[r/(r-s);2]/(E[s;0]+r)", "E[-1;0]"] {
            let a = m(t);
            assert_eq!(m(&a.to_string()), a, "{t} -> {a}");
        }
        assert!(matches!(MMElement::parse("E[0;0"), Err(Error::Syntax { column: 6, .. })));
    }

    #[test]
    fn symbols_unify_by_scalar_equality() {
        assert!(m("E[(r^2-1)/(r-1);0] - E[r+1;0]").is_zero());
    }
}
