//! Rational functions on the projective line kept in divisor form.
//!
//! A [`DivisorFunction`] is `c · Π (z − aᵢ)^{mᵢ}` with points in the
//! parameter field. Points compare by [`Scalar`] equality, so `r` and `s` are
//! distinct while `r` and `r` coincide.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{binomial, factorial, LaurentSeries, Ring, Scalar, Q};
use crate::error::{Error, Result};
use crate::parse::{parse_expr_at, Expr};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DivisorFunction {
    constant: Scalar,
    factors: BTreeMap<Scalar, i64>,
}

impl DivisorFunction {
    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    /// A nonzero constant function.
    pub fn constant(c: Scalar) -> Self {
        assert!(!c.is_zero(), "divisor functions are nonzero");
        DivisorFunction { constant: c, factors: BTreeMap::new() }
    }

    /// `z − a`.
    pub fn linear(a: Scalar) -> Self {
        Self::factor(a, 1)
    }

    /// `(z − a)^m`.
    pub fn factor(a: Scalar, m: i64) -> Self {
        let mut factors = BTreeMap::new();
        if m != 0 {
            factors.insert(a, m);
        }
        DivisorFunction { constant: Scalar::one(), factors }
    }

    pub fn from_parts(constant: Scalar, pairs: impl IntoIterator<Item = (Scalar, i64)>) -> Self {
        let mut out = Self::constant(constant);
        for (a, m) in pairs {
            out = out.mul(&Self::factor(a, m));
        }
        out
    }

    pub fn constant_part(&self) -> &Scalar {
        &self.constant
    }

    pub fn factors(&self) -> &BTreeMap<Scalar, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.constant.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zeros(&self) -> impl Iterator<Item = &Scalar> {
        self.factors.iter().filter(|(_, m)| **m > 0).map(|(a, _)| a)
    }

    pub fn poles(&self) -> impl Iterator<Item = &Scalar> {
        self.factors.iter().filter(|(_, m)| **m < 0).map(|(a, _)| a)
    }

    /// Multiplicity at a finite point (zero when the point is not special).
    pub fn order_at(&self, p: &Scalar) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn order_at_infinity(&self) -> i64 {
        -self.factors.values().sum::<i64>()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (a, m) in &o.factors {
            let e = factors.entry(a.clone()).or_insert(0);
            *e += m;
            if *e == 0 {
                factors.remove(a);
            }
        }
        DivisorFunction { constant: self.constant.mul(&o.constant), factors }
    }

    pub fn inv(&self) -> Self {
        DivisorFunction {
            constant: self.constant.inv().expect("nonzero constant"),
            factors: self.factors.iter().map(|(a, m)| (a.clone(), -m)).collect(),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        DivisorFunction {
            constant: self.constant.pow(e).expect("nonzero constant"),
            factors: self.factors.iter().map(|(a, m)| (a.clone(), m * e)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DivisorFunction { constant: self.constant.mul(c), factors: self.factors.clone() }
    }

    /// Parameters occurring in the constant or the points.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut s = self.constant.params();
        for a in self.factors.keys() {
            s.extend(a.params());
        }
        s
    }

    /// Replace a parameter everywhere (points may merge).
    pub fn subst(&self, name: &str, v: &Scalar) -> Result<Self> {
        let c = self.constant.subst(name, v)?;
        if c.is_zero() {
            return Err(Error::NotDivisorForm("constant vanishes".into()));
        }
        let mut out = Self::constant(c);
        for (a, m) in &self.factors {
            out = out.mul(&Self::factor(a.subst(name, v)?, *m));
        }
        Ok(out)
    }

    /// Taylor jet `a_0..a_N` at `p`, `a_k = ξ^{(k)}(p)/k!`.
    pub fn taylor_at(&self, p: &Scalar, n: usize) -> Result<PointJet> {
        let mut acc = vec![Scalar::zero(); n + 1];
        acc[0] = self.constant.clone();
        for (a, m) in &self.factors {
            let d = p.sub(a);
            let jet: Vec<Scalar> = if d.is_zero() {
                if *m < 0 {
                    return Err(Error::PoleAtPoint { point: p.to_string() });
                }
                (0..=n).map(|j| if j as i64 == *m { Scalar::one() } else { Scalar::zero() }).collect()
            } else {
                (0..=n)
                    .map(|j| d.pow(m - j as i64).expect("nonzero base").scale(&binomial(*m, j as u32)))
                    .collect()
            };
            acc = cauchy(&acc, &jet);
        }
        Ok(PointJet { base: p.clone(), coeffs: acc })
    }

    /// `ξ^{(k)}(t)`.
    pub fn eval_deriv(&self, t: &Scalar, k: u32) -> Result<Scalar> {
        let jet = self.taylor_at(t, k as usize)?;
        Ok(jet.coeffs[k as usize].scale(&factorial(k)))
    }

    pub fn value(&self, t: &Scalar) -> Result<Scalar> {
        self.eval_deriv(t, 0)
    }

    /// The function as a [`Scalar`] in the parameter `z`.
    pub fn to_scalar(&self, z: &str) -> Scalar {
        let zv = Scalar::param(z);
        let mut out = self.constant.clone();
        for (a, m) in &self.factors {
            out = out.mul(&zv.sub(a).pow(*m).expect("nonzero factor"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_at(text, 0)
    }

    /// Parse with error columns shifted by `offset`.
    pub fn parse_at(text: &str, offset: usize) -> Result<Self> {
        let e = parse_expr_at(text, offset)?;
        match eval_df(&e)? {
            DfVal::Lin(c1, c0) => lin_to_df(c1, c0),
            DfVal::Df(d) => Ok(d),
        }
    }
}

fn cauchy(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).fold(Scalar::zero(), |s, j| s.add(&a[j].mul(&b[k - j]))))
        .collect()
}

enum DfVal {
    /// `c1·z + c0`
    Lin(Scalar, Scalar),
    Df(DivisorFunction),
}

fn lin_to_df(c1: Scalar, c0: Scalar) -> Result<DivisorFunction> {
    if c1.is_zero() {
        if c0.is_zero() {
            return Err(Error::NotDivisorForm("the zero function".into()));
        }
        return Ok(DivisorFunction::constant(c0));
    }
    let root = c0.div(&c1)?.neg();
    Ok(DivisorFunction::linear(root).scale(&c1))
}

fn to_df(v: DfVal) -> Result<DivisorFunction> {
    match v {
        DfVal::Lin(c1, c0) => lin_to_df(c1, c0),
        DfVal::Df(d) => Ok(d),
    }
}

fn as_lin(v: &DfVal) -> Option<(Scalar, Scalar)> {
    match v {
        DfVal::Lin(a, b) => Some((a.clone(), b.clone())),
        DfVal::Df(d) if d.is_constant() => Some((Scalar::zero(), d.constant.clone())),
        DfVal::Df(_) => None,
    }
}

fn eval_df(e: &Expr) -> Result<DfVal> {
    let not_df = || Error::NotDivisorForm("expected a product of powers of linear factors in z".into());
    Ok(match e {
        Expr::Num(n) => DfVal::Lin(Scalar::zero(), Scalar::from_q(Q::from_integer(n.clone()))),
        Expr::Ident(id, _) if id == "z" => DfVal::Lin(Scalar::one(), Scalar::zero()),
        Expr::Ident(..) => DfVal::Lin(Scalar::zero(), crate::arith::scalar::scalar_from_expr(e)?),
        Expr::Eval(..) => return Err(not_df()),
        Expr::Neg(a) => match eval_df(a)? {
            DfVal::Lin(c1, c0) => DfVal::Lin(c1.neg(), c0.neg()),
            DfVal::Df(d) => DfVal::Df(d.scale(&Scalar::int(-1))),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (eval_df(a)?, eval_df(b)?);
            let ((a1, a0), (b1, b0)) = (as_lin(&x).ok_or_else(not_df)?, as_lin(&y).ok_or_else(not_df)?);
            if matches!(e, Expr::Add(..)) {
                DfVal::Lin(a1.add(&b1), a0.add(&b0))
            } else {
                DfVal::Lin(a1.sub(&b1), a0.sub(&b0))
            }
        }
        Expr::Mul(a, b) => {
            let (x, y) = (eval_df(a)?, eval_df(b)?);
            match (as_lin(&x), as_lin(&y)) {
                (Some((a1, a0)), Some((b1, b0))) if a1.is_zero() || b1.is_zero() => {
                    DfVal::Lin(a1.mul(&b0).add(&a0.mul(&b1)), a0.mul(&b0))
                }
                _ => DfVal::Df(to_df(x)?.mul(&to_df(y)?)),
            }
        }
        Expr::Div(a, b) => {
            let (x, y) = (eval_df(a)?, eval_df(b)?);
            match (as_lin(&x), as_lin(&y)) {
                (Some((a1, a0)), Some((b1, b0))) if b1.is_zero() => {
                    DfVal::Lin(a1.div(&b0)?, a0.div(&b0)?)
                }
                _ => DfVal::Df(to_df(x)?.div(&to_df(y)?)),
            }
        }
        Expr::Pow(a, k) => DfVal::Df(to_df(eval_df(a)?)?.pow(*k)),
    })
}

fn fmt_linear(a: &Scalar) -> String {
    if a.is_zero() {
        return "z".into();
    }
    if let Some(c) = a.as_q() {
        if c < Q::from_integer(0.into()) {
            return format!("(z+{})", Scalar::from_q(-c));
        }
        return format!("(z-{a})");
    }
    let s = a.to_string();
    if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        format!("(z-{s})")
    } else {
        format!("(z-({s}))")
    }
}

impl fmt::Display for DivisorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_one() || self.factors.is_empty() {
            let c = self.constant.to_string();
            if c.contains(['+', '-', '/']) {
                parts.push(format!("({c})"));
            } else {
                parts.push(c);
            }
        }
        for (a, m) in &self.factors {
            let base = fmt_linear(a);
            if *m == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{m}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl std::str::FromStr for DivisorFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Taylor data of a function at a point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointJet {
    pub base: Scalar,
    pub coeffs: Vec<Scalar>,
}

impl PointJet {
    /// `(T, [t_1..t_N])` with `Σ a_k w^k = T exp Σ t_k w^k`.
    pub fn log_coords(&self) -> Result<(Scalar, Vec<Scalar>)> {
        let a0 = self.coeffs.first().cloned().unwrap_or_else(Scalar::zero);
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv = a0.inv()?;
        let n = self.coeffs.len() as i64 - 1;
        let s = LaurentSeries::new("w", 0, n, self.coeffs.iter().map(|c| c.mul(&inv)).collect());
        let l = s.log()?;
        Ok((a0, (1..=n).map(|k| l.coeff(k).unwrap()).collect()))
    }

    /// Inverse of [`PointJet::log_coords`].
    pub fn exp_coords(base: Scalar, t_cap: &Scalar, t: &[Scalar]) -> Result<PointJet> {
        let n = t.len() as i64;
        let mut c = vec![Scalar::zero()];
        c.extend(t.iter().cloned());
        let e = LaurentSeries::new("w", 0, n, c).exp()?;
        Ok(PointJet { base, coeffs: e.terms().map(|(_, x)| x.times(t_cap)).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    fn df(x: &str) -> DivisorFunction {
        DivisorFunction::parse(x).unwrap()
    }

    #[test]
    fn group_law_examples() {
        assert_eq!(df("(z-1)").mul(&df("(z-1)^2")), df("(z-1)^3"));
        assert_eq!(df("2*(z-r)").inv(), df("1/2*(z-r)^-1"));
        assert!(df("(z-r)/(z-s)").mul(&df("(z-s)/(z-r)")).is_one());
    }

    #[test]
    fn eval_examples() {
        assert!(df("z-2").eval_deriv(&s("3"), 0).unwrap().is_one());
        assert_eq!(df("(z-s)^-1").eval_deriv(&s("t"), 1).unwrap(), s("-1/(t-s)^2"));
        assert_eq!(df("(z-r)/(z-s)").eval_deriv(&s("0"), 1).unwrap(), s("(r-s)/s^2"));
        assert!(matches!(df("1/(z-s)").value(&s("s")), Err(Error::PoleAtPoint { .. })));
    }

    #[test]
    fn taylor_examples() {
        let j = df("1/(1-z)").taylor_at(&s("0"), 3).unwrap();
        assert!(j.coeffs.iter().all(|c| c.is_one()));
        assert_eq!(df("z-s").taylor_at(&s("0"), 1).unwrap().coeffs, vec![s("-s"), s("1")]);
        let j = df("-s/(z-s)").taylor_at(&s("0"), 3).unwrap();
        assert_eq!(j.coeffs, vec![s("1"), s("1/s"), s("1/s^2"), s("1/s^3")]);
    }

    #[test]
    fn log_coords_of_shift_kernel() {
        let j = df("-s/(z-s)").taylor_at(&s("0"), 4).unwrap();
        let (t_cap, t) = j.log_coords().unwrap();
        assert!(t_cap.is_one());
        for (k, tk) in t.iter().enumerate() {
            let k = k as i64 + 1;
            assert_eq!(*tk, Scalar::one().div(&s("s").pow(k).unwrap().scale(&crate::arith::q(k))).unwrap());
        }
    }

    #[test]
    fn zero_constant_term() {
        let j = df("z").taylor_at(&s("0"), 2).unwrap();
        assert_eq!(j.log_coords(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn parse_forms() {
        let a = df("2*(z-1)^3*(z-r)^-1");
        assert_eq!(a.order_at(&s("1")), 3);
        assert_eq!(a.order_at(&s("r")), -1);
        assert_eq!(a.order_at_infinity(), -2);
        assert_eq!(df("(z+s)/(z-s)").order_at(&s("-s")), 1);
        assert_eq!(df(&a.to_string()), a);
        assert!(matches!(DivisorFunction::parse("z^2+1"), Err(Error::NotDivisorForm(_))));
    }
}
