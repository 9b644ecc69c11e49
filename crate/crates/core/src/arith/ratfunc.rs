//! Reduced fractions of [`Poly`].
//!
//! Invariants:
//! - the denominator is nonzero with leading coefficient one
//! - numerator and denominator are coprime
//! - zero is stored as `0/1`

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{gcd, Atom, Monomial, Poly};
use super::{Error, Q};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_q(q: Q) -> RatFunc {
        RatFunc::from_poly(Poly::constant(q))
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_poly(Poly::from_int(n))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn atom(a: Atom) -> RatFunc {
        RatFunc::from_poly(Poly::atom(a))
    }

    pub fn param(name: &str) -> RatFunc {
        RatFunc::atom(Atom::param(name))
    }

    /// Build `n/d` in canonical form.
    pub fn new(n: Poly, d: Poly) -> Result<RatFunc, Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if n.is_zero() {
            return Ok(RatFunc::zero());
        }
        if let Some(c) = d.as_constant() {
            return Ok(RatFunc::from_poly(n.scale(&c.recip())));
        }
        let g = gcd(&n, &d);
        let (n, d) = if g.is_one() {
            (n, d)
        } else {
            (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
        };
        Ok(RatFunc::normalized(n, d))
    }

    /// Coprime inputs; only fixes the leading coefficient.
    fn normalized(n: Poly, d: Poly) -> RatFunc {
        let lc = d.leading_coeff();
        if lc.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let inv = lc.recip();
            RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.num.atoms();
        s.extend(self.den.atoms());
        s
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.num.contains_atom(a) || self.den.contains_atom(a)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return RatFunc::new(n, self.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        let d = b1.mul(&o.den);
        if g.is_one() {
            if n.is_zero() {
                return RatFunc::zero();
            }
            return RatFunc::normalized(n, d);
        }
        RatFunc::new(n, d).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Q) -> RatFunc {
        if q.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = o.den.div_exact(&g1).expect("gcd divides");
        let c = o.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        RatFunc::normalized(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<RatFunc, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, Error> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn derivative(&self, a: &Atom) -> RatFunc {
        let dn = self.num.derivative(a);
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        let dd = self.den.derivative(a);
        let n = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFunc::new(n, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Replace atoms by rational functions; unmapped atoms are kept.
    pub fn substitute(&self, f: &dyn Fn(&Atom) -> Option<RatFunc>) -> Result<RatFunc, Error> {
        let mut cache: BTreeMap<Atom, Option<RatFunc>> = BTreeMap::new();
        for a in self.atoms() {
            let v = f(&a);
            cache.insert(a, v);
        }
        if cache.values().all(|v| v.is_none()) {
            return Ok(self.clone());
        }
        let (n1, d1) = subst_poly(&self.num, &cache);
        let (n2, d2) = subst_poly(&self.den, &cache);
        RatFunc::new(n1.mul(&d2), d1.mul(&n2))
    }

    pub fn substitute_atom(&self, a: &Atom, v: &RatFunc) -> Result<RatFunc, Error> {
        self.substitute(&|b| (b == a).then(|| v.clone()))
    }
}

/// Substitute into a polynomial over a common denominator.
fn subst_poly(p: &Poly, map: &BTreeMap<Atom, Option<RatFunc>>) -> (Poly, Poly) {
    let mut maxdeg: BTreeMap<Atom, u32> = BTreeMap::new();
    for (a, v) in map {
        if v.as_ref().is_some_and(|r| !r.den.is_one()) {
            let d = p.degree_in(a);
            if d > 0 {
                maxdeg.insert(a.clone(), d);
            }
        }
    }
    let mut den = Poly::one();
    for (a, d) in &maxdeg {
        den = den.mul(&map[a].as_ref().unwrap().den.pow(*d));
    }
    let mut npow: BTreeMap<(Atom, u32), Poly> = BTreeMap::new();
    let mut dpow: BTreeMap<(Atom, u32), Poly> = BTreeMap::new();
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = Poly::constant(c.clone());
        let mut kept = Vec::new();
        let mut seen: BTreeSet<Atom> = BTreeSet::new();
        for (a, e) in m.factors() {
            match map.get(a).and_then(|v| v.as_ref()) {
                Some(v) => {
                    seen.insert(a.clone());
                    let pn = npow.entry((a.clone(), *e)).or_insert_with(|| v.num.pow(*e));
                    t = t.mul(pn);
                    if let Some(d) = maxdeg.get(a) {
                        if d > e {
                            let pd = dpow.entry((a.clone(), d - e)).or_insert_with(|| v.den.pow(d - e));
                            t = t.mul(pd);
                        }
                    }
                }
                None => kept.push((a.clone(), *e)),
            }
        }
        for (a, d) in &maxdeg {
            if !seen.contains(a) {
                let pd = dpow.entry((a.clone(), *d)).or_insert_with(|| map[a].as_ref().unwrap().den.pow(*d));
                t = t.mul(pd);
            }
        }
        let km = Monomial::from_pairs(kept);
        num = num.add(&t.mul_term(&km, &Q::one()));
    }
    (num, den)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let ns = self.num.to_string();
        let n_simple = self.num.len() == 1 && !ns[1..].contains(['+', '-']);
        if n_simple {
            write!(f, "{ns}")?;
        } else {
            write!(f, "({ns})")?;
        }
        let ds = self.den.to_string();
        let d_simple = self.den.len() == 1 && !ds.contains(['*', '/', '+', '-']);
        if d_simple {
            write!(f, "/{ds}")
        } else {
            write!(f, "/({ds})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> RatFunc {
        RatFunc::param(n)
    }

    #[test]
    fn symmetric_cancellation() {
        let (r, s) = (v("r"), v("s"));
        let a = r.div(&r.sub(&s)).unwrap();
        let b = s.div(&s.sub(&r)).unwrap();
        assert!(a.add(&b).is_one());
    }

    #[test]
    fn factor_cancellation() {
        let (r, s) = (v("r"), v("s"));
        let n = s.mul(&s).sub(&r.mul(&r));
        assert_eq!(n.div(&s.sub(&r)).unwrap(), s.add(&r));
    }

    #[test]
    fn pole_times_square() {
        let (t, s) = (v("t"), v("s"));
        let d = t.sub(&s);
        let x = d.inv().unwrap().mul(&d.pow(2).unwrap());
        assert_eq!(x, d);
    }

    #[test]
    fn substitution_with_denominators() {
        let (r, s) = (v("r"), v("s"));
        let f = r.mul(&r).add(&s);
        let half = RatFunc::from_q(Q::new(1.into(), 2.into()));
        let g = f.substitute_atom(&Atom::param("r"), &s.inv().unwrap().add(&half)).unwrap();
        let expect = s.inv().unwrap().add(&half).pow(2).unwrap().add(&s);
        assert_eq!(g, expect);
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert!(matches!(RatFunc::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn derivative_quotient_rule() {
        let (t, s) = (v("t"), v("s"));
        let f = t.sub(&s).inv().unwrap();
        let df = f.derivative(&Atom::param("t"));
        assert_eq!(df, t.sub(&s).pow(-2).unwrap().neg());
    }
}
