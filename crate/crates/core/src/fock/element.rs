//! Fock vectors `Σ c · T^ℓ · Π t_k^{e_k}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::arith::{q, Ring, Scalar, Q};
use crate::error::{Error, Result};
use crate::parse::{parse_expr, Expr};

/// Exponents of `t_1, t_2, …` with trailing zeros removed.
pub type Exps = Vec<u32>;

fn trim(mut e: Exps) -> Exps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect()
}

/// Weighted degree `Σ k e_k`.
pub fn weight(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(i, x)| (i as u32 + 1) * x).sum()
}

/// Polynomial in `t_1, t_2, …`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPoly<C>(pub BTreeMap<Exps, C>);

impl<C: Ring> Default for TPoly<C> {
    fn default() -> Self {
        TPoly(BTreeMap::new())
    }
}

impl<C: Ring> TPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Vec::new(), c);
        }
        TPoly(m)
    }

    /// `t_k`, `k ≥ 1`.
    pub fn t(k: usize) -> Self {
        let mut e = vec![0; k];
        e[k - 1] = 1;
        let mut m = BTreeMap::new();
        m.insert(e, C::one());
        TPoly(m)
    }

    pub fn monomial(e: Exps, c: C) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(trim(e), c);
        }
        TPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, e: &Exps, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(e) {
            Some(x) => {
                *x = x.plus(c);
                if x.is_zero() {
                    self.0.remove(e);
                }
            }
            None => {
                self.0.insert(e.clone(), c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (e, c) in &o.0 {
            self.add_term(e, c);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    /// `self += c·o`.
    pub fn add_scaled(&mut self, o: &Self, c: &C) {
        for (e, x) in &o.0 {
            self.add_term(e, &x.times(c));
        }
    }

    pub fn neg(&self) -> Self {
        TPoly(self.0.iter().map(|(e, c)| (e.clone(), c.negate())).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut r = Self::zero();
        for (e, x) in &self.0 {
            r.add_term(e, &x.times(c));
        }
        r
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&C::one().scaled(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                r.add_term(&add_exps(e1, e2), &c1.times(c2));
            }
        }
        r
    }

    /// Multiply by the variable `t_k`.
    pub fn mul_var(&self, k: usize) -> Self {
        TPoly(
            self.0
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    if e2.len() < k {
                        e2.resize(k, 0);
                    }
                    e2[k - 1] += 1;
                    (e2, c.clone())
                })
                .collect(),
        )
    }

    /// `∂/∂t_k`.
    pub fn deriv(&self, k: usize) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.0 {
            let x = e.get(k - 1).copied().unwrap_or(0);
            if x > 0 {
                let mut e2 = e.clone();
                e2[k - 1] -= 1;
                r.add_term(&trim(e2), &c.scaled(&q(x as i64)));
            }
        }
        r
    }

    /// Largest index `k` with `t_k` present.
    pub fn max_var(&self) -> usize {
        self.0.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Largest weighted degree among the terms.
    pub fn max_weight(&self) -> u32 {
        self.0.keys().map(|e| weight(e)).max().unwrap_or(0)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TPoly<D> {
        let mut r = TPoly::zero();
        for (e, c) in &self.0 {
            r.add_term(e, &f(c));
        }
        r
    }
}

/// A finite sum over grades of `T^ℓ · TPoly`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockElement<C = Q> {
    comps: BTreeMap<i64, TPoly<C>>,
}

impl<C: Ring> Default for FockElement<C> {
    fn default() -> Self {
        FockElement { comps: BTreeMap::new() }
    }
}

impl<C: Ring> FockElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::graded(0, TPoly::one())
    }

    /// `T^l · p`.
    pub fn graded(l: i64, p: TPoly<C>) -> Self {
        let mut comps = BTreeMap::new();
        if !p.is_zero() {
            comps.insert(l, p);
        }
        FockElement { comps }
    }

    /// `T^l`.
    pub fn t_pow(l: i64) -> Self {
        Self::graded(l, TPoly::one())
    }

    /// `t_k`.
    pub fn t(k: usize) -> Self {
        Self::graded(0, TPoly::t(k))
    }

    pub fn constant(c: C) -> Self {
        Self::graded(0, TPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &TPoly<C>)> {
        self.comps.iter().map(|(l, p)| (*l, p))
    }

    pub fn component(&self, l: i64) -> TPoly<C> {
        self.comps.get(&l).cloned().unwrap_or_default()
    }

    pub fn grades(&self) -> Vec<i64> {
        self.comps.keys().copied().collect()
    }

    /// The grade when the vector is homogeneous and nonzero.
    pub fn grade(&self) -> Option<i64> {
        if self.comps.len() == 1 {
            self.comps.keys().next().copied()
        } else {
            None
        }
    }

    pub fn add_graded(&mut self, l: i64, p: &TPoly<C>) {
        if p.is_zero() {
            return;
        }
        let e = self.comps.entry(l).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.comps.remove(&l);
        }
    }

    /// `self += c·o`.
    pub fn add_scaled(&mut self, o: &Self, c: &C) {
        for (l, p) in &o.comps {
            let e = self.comps.entry(*l).or_default();
            e.add_scaled(p, c);
            if e.is_zero() {
                self.comps.remove(l);
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (l, p) in &o.comps {
            self.add_graded(*l, p);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn neg(&self) -> Self {
        FockElement { comps: self.comps.iter().map(|(l, p)| (*l, p.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = Self::zero();
        for (l, p) in &self.comps {
            r.add_graded(*l, &p.scale(c));
        }
        r
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&C::one().scaled(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (l1, p1) in &self.comps {
            for (l2, p2) in &o.comps {
                r.add_graded(l1 + l2, &p1.mul(p2));
            }
        }
        r
    }

    /// Multiply by `T^k`.
    pub fn shift_grade(&self, k: i64) -> Self {
        FockElement { comps: self.comps.iter().map(|(l, p)| (l + k, p.clone())).collect() }
    }

    /// `∂/∂t_k`.
    pub fn deriv(&self, k: usize) -> Self {
        let mut r = Self::zero();
        for (l, p) in &self.comps {
            r.add_graded(*l, &p.deriv(k));
        }
        r
    }

    /// `T ∂/∂T`: multiplies each component by its grade.
    pub fn grade_op(&self) -> Self {
        let mut r = Self::zero();
        for (l, p) in &self.comps {
            r.add_graded(*l, &p.scale_q(&q(*l)));
        }
        r
    }

    pub fn max_weight(&self) -> u32 {
        self.comps.values().map(|p| p.max_weight()).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> usize {
        self.comps.values().map(|p| p.max_var()).max().unwrap_or(0)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D + Copy) -> FockElement<D> {
        let mut r = FockElement::zero();
        for (l, p) in &self.comps {
            r.add_graded(*l, &p.map(f));
        }
        r
    }
}

impl FockElement<Q> {
    pub fn to_scalar(&self) -> FockElement<Scalar> {
        self.map(|c| Scalar::from_q(c.clone()))
    }

    /// Parse text such as `T^-1 * (3*t1^2 - t3)`.
    pub fn parse(text: &str) -> Result<Self> {
        from_expr(&parse_expr(text)?)
    }
}

impl FockElement<Scalar> {
    /// Rational coefficients, when every coefficient is a constant.
    pub fn to_q(&self) -> Option<FockElement<Q>> {
        let mut r = FockElement::zero();
        for (l, p) in &self.comps {
            let mut qp = TPoly::zero();
            for (e, c) in p.terms() {
                qp.add_term(e, &c.as_q()?);
            }
            r.add_graded(*l, &qp);
        }
        Some(r)
    }
}

fn from_expr(e: &Expr) -> Result<FockElement<Q>> {
    Ok(match e {
        Expr::Num(n) => FockElement::constant(Q::from_integer(n.clone())),
        Expr::Ident(id, col) => {
            if id == "T" {
                FockElement::t_pow(1)
            } else if let Some(k) = id.strip_prefix('t').and_then(|d| d.parse::<usize>().ok()).filter(|k| *k >= 1) {
                FockElement::t(k)
            } else {
                return Err(Error::Syntax { column: *col, message: format!("unknown Fock variable '{id}'") });
            }
        }
        Expr::Eval(..) => return Err(Error::Syntax { column: 0, message: "evaluation symbol in a Fock vector".into() }),
        Expr::Neg(a) => from_expr(a)?.neg(),
        Expr::Add(a, b) => from_expr(a)?.add(&from_expr(b)?),
        Expr::Sub(a, b) => from_expr(a)?.sub(&from_expr(b)?),
        Expr::Mul(a, b) => from_expr(a)?.mul(&from_expr(b)?),
        Expr::Div(a, b) => {
            let d = from_expr(b)?;
            let num = from_expr(a)?;
            match (d.grade(), d.comps.values().next()) {
                (Some(l), Some(p)) if p.0.len() == 1 && p.0.contains_key(&Vec::new()) => {
                    let c = p.0[&Vec::new()].clone();
                    num.shift_grade(-l).scale(&c.recip())
                }
                _ => return Err(Error::Syntax { column: 0, message: "division by a non-monomial in T".into() }),
            }
        }
        Expr::Pow(a, k) => {
            let base = from_expr(a)?;
            if *k >= 0 {
                (0..*k).fold(FockElement::one(), |acc, _| acc.mul(&base))
            } else if base == FockElement::t_pow(1) {
                FockElement::t_pow(*k)
            } else {
                return Err(Error::Syntax { column: 0, message: "negative powers apply to T only".into() });
            }
        }
    })
}

fn fmt_mono(e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, x) in e.iter().enumerate() {
        match x {
            0 => {}
            1 => parts.push(format!("t{}", i + 1)),
            _ => parts.push(format!("t{}^{x}", i + 1)),
        }
    }
    parts.join("*")
}

impl<C: Ring + fmt::Display> fmt::Display for FockElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, p) in self.comps.iter().rev() {
            for (e, c) in p.0.iter().rev() {
                let cs = c.to_string();
                let mono = fmt_mono(e);
                let tpart = match l {
                    0 => String::new(),
                    1 => "T".to_string(),
                    _ => format!("T^{l}"),
                };
                let body: Vec<&str> = [tpart.as_str(), mono.as_str()].into_iter().filter(|s| !s.is_empty()).collect();
                let body = body.join("*");
                let (neg, mag) = match cs.strip_prefix('-') {
                    Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                    _ => (false, cs.clone()),
                };
                let mag = if mag.contains(['+', '-']) { format!("({mag})") } else { mag };
                if !first {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                } else if neg {
                    write!(f, "-")?;
                }
                first = false;
                if body.is_empty() {
                    write!(f, "{mag}")?;
                } else if mag == "1" {
                    write!(f, "{body}")?;
                } else {
                    write!(f, "{mag}*{body}")?;
                }
            }
        }
        Ok(())
    }
}

/// Sign helper: `(−1)^n`.
pub fn sign(n: i64) -> Q {
    if n.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Nonnegative rational power check used by display tests.
pub fn is_negative_q(c: &Q) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let v = FockElement::parse("T^-1 * (3*t1^2 - t3)").unwrap();
        assert_eq!(v.grade(), Some(-1));
        let w = FockElement::parse(&v.to_string()).unwrap();
        assert_eq!(v, w, "{v}");
        let u = FockElement::parse("T^2/2 + t2 - 1").unwrap();
        assert_eq!(FockElement::parse(&u.to_string()).unwrap(), u, "{u}");
    }

    #[test]
    fn derivative_and_grade() {
        let v = FockElement::parse("T^2*t1^3*t2").unwrap();
        assert_eq!(v.deriv(1), FockElement::parse("3*T^2*t1^2*t2").unwrap());
        assert_eq!(v.grade_op(), v.scale_q(&q(2)));
    }
}
