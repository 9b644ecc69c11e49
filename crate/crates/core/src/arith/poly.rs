//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are [`Atom`]s: named parameters or evaluation symbols `E[a;k]`.
//! Terms are kept in a `BTreeMap` under the graded-lexicographic order, so the
//! leading term is always the last entry.
//!
//! Invariants:
//! - no stored coefficient is zero
//! - every [`Monomial`] is sorted by atom with strictly positive exponents

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::ratfunc::RatFunc;
use super::Q;

/// A polynomial variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// A transcendental parameter such as `r` or `s`.
    Param(Arc<str>),
    /// The evaluation symbol `E[point;order]`.
    Eval(Arc<RatFunc>, u32),
}

impl Atom {
    pub fn param(name: &str) -> Atom {
        Atom::Param(Arc::from(name))
    }

    pub fn eval(point: RatFunc, order: u32) -> Atom {
        Atom::Eval(Arc::new(point), order)
    }

    pub fn is_eval(&self) -> bool {
        matches!(self, Atom::Eval(..))
    }

    pub fn param_name(&self) -> Option<&str> {
        match self {
            Atom::Param(n) => Some(n),
            Atom::Eval(..) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Param(n) => write!(f, "{n}"),
            Atom::Eval(p, k) => write!(f, "E[{p};{k}]"),
        }
    }
}

/// A power product of atoms, sorted by atom.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(a: Atom, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    pub fn from_pairs(mut v: Vec<(Atom, u32)>) -> Monomial {
        v.retain(|(_, e)| *e > 0);
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(v.len());
        for (a, e) in v {
            match out.last_mut() {
                Some((b, f)) if *b == a => *f += e,
                _ => out.push((a, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        match self.0.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 == *a {
                let f = o.0[j].1;
                if f > *e {
                    return None;
                }
                if *e > f {
                    out.push((a.clone(), e - f));
                }
                j += 1;
            } else if j < o.0.len() && o.0[j].0 < *a {
                return None;
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (a, e) in &self.0 {
            let f = o.exponent(a);
            if f > 0 {
                out.push((a.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    /// Drop atom `a`, returning its exponent and the remaining monomial.
    pub fn split(&self, a: &Atom) -> (u32, Monomial) {
        let mut e = 0;
        let mut rest = Vec::with_capacity(self.0.len());
        for (b, f) in &self.0 {
            if b == a {
                e = *f;
            } else {
                rest.push((b.clone(), *f));
            }
        }
        (e, Monomial(rest))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic; the smallest atom is the most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    let c = a[i].1.cmp(&b[j].1);
                    if c != Ordering::Equal {
                        return c;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        match (i < a.len(), j < b.len()) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Poly {
        Poly::constant(Q::from_integer(n.into()))
    }

    pub fn atom(a: Atom) -> Poly {
        Poly::term(Q::one(), Monomial::var(a, 1))
    }

    pub fn term(c: Q, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.exponent(a) > 0)
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= o.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, q: &Q) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, q: &Q) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                r.add_term(m.mul(n), c * d);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn derivative(&self, a: &Atom) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(a);
            if e > 0 {
                let m2 = rest.mul(&Monomial::var(a.clone(), e - 1));
                r.add_term(m2, c * Q::from_integer(e.into()));
            }
        }
        r
    }

    /// Coefficients with respect to `a`, indexed by the power of `a`.
    pub fn to_univariate(&self, a: &Atom) -> Vec<Poly> {
        let mut out: Vec<Poly> = vec![Poly::zero(); self.degree_in(a) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(a);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(a: &Atom, coeffs: &[Poly]) -> Poly {
        let mut r = Poly::zero();
        for (e, p) in coeffs.iter().enumerate() {
            let x = Monomial::var(a.clone(), e as u32);
            for (m, c) in &p.terms {
                r.add_term(m.mul(&x), c.clone());
            }
        }
        r
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            for (n, e) in &d.terms {
                r.add_term(n.mul(&m), -(e * &c));
            }
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Substitute atoms by polynomials.
    pub fn substitute(&self, f: &dyn Fn(&Atom) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<Atom, Option<Poly>> = BTreeMap::new();
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (a, e) in m.factors() {
                let v = cache.entry(a.clone()).or_insert_with(|| f(a));
                match v {
                    Some(p) => t = t.mul(&p.pow(*e)),
                    None => kept.push((a.clone(), *e)),
                }
            }
            let km = Monomial::from_pairs(kept);
            for (n, d) in &t.terms {
                r.add_term(n.mul(&km), d.clone());
            }
        }
        r
    }
}

/// Greatest common divisor, normalized to leading coefficient one.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        let (m, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let mut g = m.leading().unwrap().0.clone();
        for n in other.terms.keys() {
            g = g.gcd(n);
            if g.is_one() {
                break;
            }
        }
        return Poly::term(Q::one(), g);
    }
    if a == b {
        return a.monic();
    }
    let va = a.atoms();
    let vb = b.atoms();
    if let Some(x) = va.difference(&vb).next() {
        return gcd(&content_in(a, x), b);
    }
    if let Some(x) = vb.difference(&va).next() {
        return gcd(a, &content_in(b, x));
    }
    // Cheap divisibility shortcut before the PRS.
    let (small, big) = if a.total_degree() <= b.total_degree() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.monic();
    }
    let x = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap()
        .clone();
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, &x);
    c.mul(&g).monic()
}

/// Content with respect to `x`: the gcd of the coefficients.
pub fn content_in(p: &Poly, x: &Atom) -> Poly {
    let coeffs = p.to_univariate(x);
    let mut g = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, x: &Atom) -> Poly {
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs(a: Poly, b: Poly, x: &Atom) -> Poly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        if b.degree_in(x) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&a, &b, x);
        if r.is_zero() {
            return primitive_part(&b, x);
        }
        a = b;
        b = primitive_part(&r, x);
    }
}

fn pseudo_rem(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let mut r = a.to_univariate(x);
    let bb = b.to_univariate(x);
    let m = bb.len() - 1;
    let lcb = &bb[m];
    loop {
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.len() < m + 1 {
            break;
        }
        let d = r.len() - 1 - m;
        let lcr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = c.mul(lcb);
        }
        for (i, bc) in bb.iter().enumerate() {
            r[i + d] = r[i + d].sub(&bc.mul(&lcr));
        }
    }
    Poly::from_univariate(x, &r)
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_q(&a))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Poly {
        Poly::atom(Atom::param(name))
    }

    #[test]
    fn graded_lex_orders_degree_first() {
        let r = Monomial::var(Atom::param("r"), 1);
        let s2 = Monomial::var(Atom::param("s"), 2);
        assert!(s2 > r);
        let rs = r.mul(&Monomial::var(Atom::param("s"), 1));
        let ss = Monomial::var(Atom::param("s"), 2);
        assert!(rs > ss);
    }

    #[test]
    fn exact_division_and_failure() {
        let (r, s) = (p("r"), p("s"));
        let num = s.mul(&s).sub(&r.mul(&r));
        let q = num.div_exact(&s.sub(&r)).unwrap();
        assert_eq!(q, s.add(&r));
        assert!(num.div_exact(&s.add(&Poly::one())).is_none());
    }

    #[test]
    fn gcd_of_products_of_linear_factors() {
        let (r, s, t) = (p("r"), p("s"), p("t"));
        let f1 = r.sub(&s);
        let f2 = s.sub(&t);
        let f3 = r.add(&t).add(&Poly::from_int(2));
        let a = f1.mul(&f2).mul(&f2);
        let b = f2.mul(&f3).mul(&f1);
        let g = gcd(&a, &b);
        assert_eq!(g, f1.mul(&f2).monic());
        assert!(gcd(&f1, &f3).is_one());
    }

    #[test]
    fn gcd_with_univariate_rational_coefficients() {
        let x = p("x");
        let half = Poly::constant(Q::new(1.into(), 2.into()));
        let a = x.mul(&x).sub(&half.mul(&half));
        let b = x.sub(&half).mul(&x.add(&Poly::from_int(3)));
        assert_eq!(gcd(&a, &b), x.sub(&half));
    }

    #[test]
    fn display_is_compact() {
        let (r, s) = (p("r"), p("s"));
        let e = r.sub(&s.scale(&Q::from_integer(2.into())));
        assert_eq!(e.to_string(), "r-2*s");
    }
}
