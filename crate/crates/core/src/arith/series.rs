//! Truncated Laurent series and iterated (flag-ordered) expansions.
//!
//! A [`LaurentSeries`] stores the coefficients of `u^lo ..= u^hi`; every
//! coefficient in that window is exact and nothing is known above `hi`.
//!
//! Invariants:
//! - `coeffs.len() == hi - lo + 1` (empty when `hi < lo`)
//! - a product is valid up to `min(a.lo + b.hi, b.lo + a.hi)`, which is the
//!   minimum of the truncation orders when both series start at zero

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{factorial, Atom, Error, Field, Poly, RatFunc, Result, Ring, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    var: Arc<str>,
    lo: i64,
    hi: i64,
    coeffs: Vec<C>,
}

impl<C: Ring> LaurentSeries<C> {
    pub fn new(var: &str, lo: i64, hi: i64, mut coeffs: Vec<C>) -> Self {
        let n = (hi - lo + 1).max(0) as usize;
        coeffs.resize(n, C::zero());
        LaurentSeries { var: Arc::from(var), lo, hi, coeffs }
    }

    pub fn zero(var: &str, lo: i64, hi: i64) -> Self {
        Self::new(var, lo, hi, Vec::new())
    }

    /// `c · u^k`, known exactly up to `hi`.
    pub fn monomial(var: &str, k: i64, c: C, hi: i64) -> Self {
        let mut s = Self::zero(var, k, hi);
        if hi >= k {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn from_fn(var: &str, lo: i64, hi: i64, f: impl Fn(i64) -> C) -> Self {
        let coeffs = (lo..=hi).map(f).collect();
        Self::new(var, lo, hi, coeffs)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Truncation order: the highest exponent whose coefficient is known.
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Coefficient of `u^k`, or `None` above the truncation order.
    pub fn coeff(&self, k: i64) -> Option<C> {
        if k > self.hi {
            None
        } else if k < self.lo {
            Some(C::zero())
        } else {
            Some(self.coeffs[(k - self.lo) as usize].clone())
        }
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&C> {
        if k < self.lo || k > self.hi {
            None
        } else {
            Some(&self.coeffs[(k - self.lo) as usize])
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms().find(|(_, c)| !c.is_zero()).map(|(k, _)| k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Restrict to `[lo, hi]` (padding with zeros below the stored window).
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        let hi = hi.min(self.hi);
        Self::from_fn(&self.var, lo, hi, |k| self.coeff(k).unwrap())
    }

    fn check_var(&self, o: &Self) {
        assert_eq!(self.var, o.var, "series in different variables");
    }

    pub fn plus(&self, o: &Self) -> Self {
        self.check_var(o);
        let lo = self.lo.min(o.lo);
        let hi = self.hi.min(o.hi);
        Self::from_fn(&self.var, lo, hi, |k| self.coeff(k).unwrap().plus(&o.coeff(k).unwrap()))
    }

    pub fn negate(&self) -> Self {
        LaurentSeries {
            var: self.var.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }

    pub fn scaled(&self, c: &Q) -> Self {
        LaurentSeries {
            var: self.var.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|x| x.scaled(c)).collect(),
        }
    }

    pub fn times_coeff(&self, c: &C) -> Self {
        LaurentSeries {
            var: self.var.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|x| x.times(c)).collect(),
        }
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { var: self.var.clone(), lo: self.lo + k, hi: self.hi + k, coeffs: self.coeffs.clone() }
    }

    pub fn times(&self, o: &Self) -> Self {
        self.check_var(o);
        let lo = self.lo + o.lo;
        let hi = (self.lo + o.hi).min(o.lo + self.hi);
        let mut out = vec![C::zero(); (hi - lo + 1).max(0) as usize];
        for (i, a) in self.terms() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.terms() {
                let k = i + j;
                if k > hi {
                    break;
                }
                if !b.is_zero() {
                    let idx = (k - lo) as usize;
                    out[idx] = out[idx].plus(&a.times(b));
                }
            }
        }
        LaurentSeries { var: self.var.clone(), lo, hi, coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::monomial(&self.var, 0, C::one(), i64::MAX / 4);
        for _ in 0..e {
            r = r.times(self);
        }
        if e == 0 {
            r = Self::monomial(&self.var, 0, C::one(), self.hi.max(0));
        }
        r
    }

    fn require_power_series(&self, what: &str) -> Result<()> {
        if self.terms().any(|(k, c)| k < 0 && !c.is_zero()) {
            return Err(Error::PrecisionLoss(format!("{what} needs a power series")));
        }
        if self.hi < 0 {
            return Err(Error::PrecisionLoss(format!("{what} of a series with empty window")));
        }
        Ok(())
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        self.require_power_series("exp")?;
        if !self.coeff(0).unwrap().is_zero() {
            return Err(Error::PrecisionLoss("exp needs a zero constant term".into()));
        }
        let n = self.hi as usize;
        let f: Vec<C> = (0..=self.hi).map(|k| self.coeff(k).unwrap()).collect();
        let mut e = vec![C::one()];
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    acc = acc.plus(&f[k].times(&e[m - k]).scaled(&super::q(k as i64)));
                }
            }
            e.push(acc.scaled(&super::qf(1, m as i64)));
        }
        Ok(Self::new(&self.var, 0, self.hi, e))
    }

    /// `log(f)` for `f` with constant term one.
    pub fn log(&self) -> Result<Self> {
        self.require_power_series("log")?;
        if self.coeff(0).unwrap() != C::one() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.hi as usize;
        let g: Vec<C> = (0..=self.hi).map(|k| self.coeff(k).unwrap()).collect();
        let mut l = vec![C::zero(); n + 1];
        for m in 1..=n {
            let mut acc = g[m].scaled(&super::q(m as i64));
            for k in 1..m {
                if !l[k].is_zero() {
                    acc = acc.minus(&l[k].times(&g[m - k]).scaled(&super::q(k as i64)));
                }
            }
            l[m] = acc.scaled(&super::qf(1, m as i64));
        }
        Ok(Self::new(&self.var, 0, self.hi, l))
    }

    /// `self(g(u))` for a power series `self` and `g` with positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.require_power_series("compose")?;
        g.require_power_series("compose")?;
        if !g.coeff(0).unwrap().is_zero() {
            return Err(Error::PrecisionLoss("inner series must have zero constant term".into()));
        }
        let v = g.valuation().unwrap_or(g.hi + 1).max(1);
        let hi = ((self.hi + 1) * v - 1).min(g.hi);
        let g = g.window(0, hi);
        let mut acc = Self::zero(&self.var, 0, hi);
        for k in (0..=self.hi).rev() {
            acc = acc.times(&g).window(0, hi);
            acc.coeffs[0] = acc.coeffs[0].plus(&self.coeff(k).unwrap());
        }
        Ok(LaurentSeries { var: g.var.clone(), ..acc })
    }
}

impl<C: Field> LaurentSeries<C> {
    /// Multiplicative inverse; fails on the truncated zero.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| Error::PrecisionLoss("inverse of truncated zero".into()))?;
        let rel = self.hi - v;
        let a0inv = self.coeff(v).unwrap().inverse()?;
        let mut b: Vec<C> = vec![a0inv.clone()];
        for n in 1..=rel {
            let mut acc = C::zero();
            for k in 1..=n {
                let a = self.coeff(v + k).unwrap();
                if !a.is_zero() {
                    acc = acc.plus(&a.times(&b[(n - k) as usize]));
                }
            }
            b.push(acc.times(&a0inv).negate());
        }
        Ok(Self::new(&self.var, -v, self.hi - 2 * v, b))
    }

    pub fn divide(&self, o: &Self) -> Result<Self> {
        Ok(self.times(&o.inverse()?))
    }
}

impl<C: Ring + fmt::Display> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{}^{k}", self.var)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.hi + 1)
    }
}

/// Series of each atom under `var ↦ center + u`, or `None` for constants.
type AtomSeries<'a> = dyn Fn(&Atom, i64) -> Result<Option<LaurentSeries<RatFunc>>> + 'a;

fn eval_poly_series(p: &Poly, var: &str, prec: i64, atom: &AtomSeries) -> Result<LaurentSeries<RatFunc>> {
    let mut cache: BTreeMap<Atom, Option<Vec<LaurentSeries<RatFunc>>>> = BTreeMap::new();
    let mut acc = LaurentSeries::<RatFunc>::zero(var, 0, prec);
    for (m, c) in p.terms() {
        let mut series = LaurentSeries::monomial(var, 0, RatFunc::from_q(c.clone()), prec);
        let mut consts = Vec::new();
        for (a, e) in m.factors() {
            if !cache.contains_key(a) {
                let v = atom(a, prec)?.map(|s| vec![LaurentSeries::monomial(var, 0, RatFunc::one(), prec), s]);
                cache.insert(a.clone(), v);
            }
            match cache.get_mut(a).unwrap() {
                Some(pows) => {
                    while pows.len() <= *e as usize {
                        let next = pows.last().unwrap().times(&pows[1]).window(0, prec);
                        pows.push(next);
                    }
                    series = series.times(&pows[*e as usize]).window(0, prec);
                }
                None => consts.push((a.clone(), *e)),
            }
        }
        if !consts.is_empty() {
            let k = RatFunc::from_poly(Poly::term(Q::from_integer(1.into()), super::Monomial::from_pairs(consts)));
            series = series.times_coeff(&k);
        }
        acc = acc.plus(&series);
    }
    Ok(acc)
}

/// Laurent expansion of `f` in `u = var − center`, coefficients for `u^lo ..= u^hi`.
///
/// Evaluation symbols whose point depends on `var` are Taylor-expanded:
/// `E[p(a+u);k] = Σ_j δ(u)^j/j! · E[p(a);k+j]` with `δ(u) = p(a+u) − p(a)`.
/// The returned series starts at `max(lo, valuation)`.
pub fn laurent_expand(f: &RatFunc, var: &str, center: &RatFunc, lo: i64, hi: i64) -> Result<LaurentSeries<RatFunc>> {
    let x = Atom::param(var);
    let atom_series = |a: &Atom, prec: i64| -> Result<Option<LaurentSeries<RatFunc>>> {
        match a {
            Atom::Param(_) if *a == x => {
                Ok(Some(LaurentSeries::new(var, 0, prec, vec![center.clone(), RatFunc::one()])))
            }
            Atom::Eval(p, k) if p.contains_atom(&x) => {
                let base = p.substitute_atom(&x, center)?;
                let delta = laurent_expand(p, var, center, 0, prec)?;
                if delta.valuation().is_some_and(|v| v < 0) {
                    return Err(Error::PoleAtPoint { point: p.to_string() });
                }
                let mut delta = delta.window(0, prec);
                delta.coeffs[0] = RatFunc::zero();
                let mut acc = LaurentSeries::zero(var, 0, prec);
                let mut dpow = LaurentSeries::monomial(var, 0, RatFunc::one(), prec);
                for j in 0..=prec {
                    let sym = RatFunc::atom(Atom::eval(base.clone(), k + j as u32));
                    let term = dpow.times_coeff(&sym.scale(&factorial(j as u32).recip()));
                    acc = acc.plus(&term);
                    dpow = dpow.times(&delta).window(0, prec);
                    if dpow.is_zero() {
                        break;
                    }
                }
                Ok(Some(acc))
            }
            _ => Ok(None),
        }
    };
    let mut prec = hi.max(0) + 2;
    let (den, vd) = loop {
        let d = eval_poly_series(f.denom(), var, prec, &atom_series)?;
        if let Some(v) = d.valuation() {
            break (d, v);
        }
        if prec > 4096 {
            return Err(Error::PrecisionLoss("denominator vanishes to high order".into()));
        }
        prec *= 2;
    };
    let need_d = (hi + 2 * vd).max(vd);
    let den = if need_d > den.hi() { eval_poly_series(f.denom(), var, need_d, &atom_series)? } else { den.window(0, need_d) };
    let need_n = (hi + vd).max(0);
    let num = eval_poly_series(f.numer(), var, need_n, &atom_series)?;
    let q = num.divide(&den)?;
    let start = match q.valuation() {
        Some(v) => lo.max(v.min(hi + 1)),
        None => lo.max(q.lo()),
    };
    Ok(q.window(start, hi))
}

/// Double series `Σ c_{ij} x^i y^j` from an iterated expansion.
///
/// `inner` was expanded first. Keys are `(inner exponent, outer exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleSeries {
    pub inner: Arc<str>,
    pub outer: Arc<str>,
    pub inner_lo: i64,
    pub inner_hi: i64,
    pub outer_lo: i64,
    pub outer_hi: i64,
    pub terms: BTreeMap<(i64, i64), RatFunc>,
}

impl DoubleSeries {
    /// Coefficient of `inner^i outer^j`, `None` outside the known window.
    pub fn coeff(&self, i: i64, j: i64) -> Option<RatFunc> {
        if i > self.inner_hi || j > self.outer_hi || i < self.inner_lo || j < self.outer_lo {
            return None;
        }
        Some(self.terms.get(&(i, j)).cloned().unwrap_or_else(RatFunc::zero))
    }

    /// Coefficient addressed by variable names.
    pub fn coeff_named(&self, a: &str, ea: i64, b: &str, eb: i64) -> Option<RatFunc> {
        if *self.inner == *a && *self.outer == *b {
            self.coeff(ea, eb)
        } else if *self.inner == *b && *self.outer == *a {
            self.coeff(eb, ea)
        } else {
            None
        }
    }

    pub fn minus(&self, o: &DoubleSeries) -> DoubleSeries {
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            let e = terms.entry(*k).or_insert_with(RatFunc::zero);
            *e = e.sub(v);
        }
        terms.retain(|_, v| !v.is_zero());
        DoubleSeries {
            terms,
            inner_lo: self.inner_lo.max(o.inner_lo),
            inner_hi: self.inner_hi.min(o.inner_hi),
            outer_lo: self.outer_lo.max(o.outer_lo),
            outer_hi: self.outer_hi.min(o.outer_hi),
            ..self.clone()
        }
    }
}

/// Expand `f` in `inner` first (about 0), then every coefficient in `outer`.
///
/// Windows are inclusive `(lo, hi)` exponent ranges.
pub fn iterated_laurent(
    f: &RatFunc,
    inner: &str,
    outer: &str,
    inner_win: (i64, i64),
    outer_win: (i64, i64),
) -> Result<DoubleSeries> {
    let zero = RatFunc::zero();
    let s1 = laurent_expand(f, inner, &zero, inner_win.0, inner_win.1)?;
    let mut terms = BTreeMap::new();
    for (i, c) in s1.terms() {
        if c.is_zero() {
            continue;
        }
        let s2 = laurent_expand(c, outer, &zero, outer_win.0, outer_win.1)?;
        for (j, d) in s2.terms() {
            if !d.is_zero() {
                terms.insert((i, j), d.clone());
            }
        }
    }
    Ok(DoubleSeries {
        inner: Arc::from(inner),
        outer: Arc::from(outer),
        inner_lo: inner_win.0,
        inner_hi: inner_win.1,
        outer_lo: outer_win.0,
        outer_hi: outer_win.1,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf, Scalar};

    fn rf(s: &str) -> RatFunc {
        Scalar::parse(s).unwrap().into_ratfunc()
    }

    #[test]
    fn inverse_monomial() {
        let s = laurent_expand(&rf("1/u"), "u", &RatFunc::zero(), -2, 2).unwrap();
        for k in -2..=2 {
            let c = s.coeff(k).unwrap();
            assert_eq!(c.is_one(), k == -1, "k={k}");
            assert!(k == -1 || c.is_zero());
        }
    }

    #[test]
    fn geometric_series() {
        let s = laurent_expand(&rf("1/(1-u)"), "u", &RatFunc::zero(), 0, 3).unwrap();
        for k in 0..=3 {
            assert!(s.coeff(k).unwrap().is_one());
        }
    }

    #[test]
    fn shifted_center_residue() {
        // 1/(s-r) about s = r has a simple pole with residue 1.
        let s = laurent_expand(&rf("1/(s-r)"), "s", &rf("r"), -3, 3).unwrap();
        assert!(s.coeff(-1).unwrap().is_one());
        for k in [-3, -2, 0, 1, 2, 3] {
            assert!(s.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn log_and_exp_roundtrip() {
        let one_plus_u = LaurentSeries::new("u", 0, 3, vec![q(1), q(1)]);
        let l = one_plus_u.log().unwrap();
        assert_eq!(l.coeff(1).unwrap(), q(1));
        assert_eq!(l.coeff(2).unwrap(), qf(-1, 2));
        assert_eq!(l.coeff(3).unwrap(), qf(1, 3));
        let back = l.exp().unwrap();
        assert_eq!(back, one_plus_u);
    }

    #[test]
    fn compose_with_geometric() {
        // exp(u) ∘ (u + u²) to order 3: 1 + u + 3/2 u² + 7/6 u³.
        let e = LaurentSeries::new("u", 0, 3, vec![q(0), q(1)]).exp().unwrap();
        let g = LaurentSeries::new("u", 0, 3, vec![q(0), q(1), q(1)]);
        let c = e.compose(&g).unwrap();
        assert_eq!(c.coeff(2).unwrap(), qf(3, 2));
        assert_eq!(c.coeff(3).unwrap(), qf(7, 6));
    }

    #[test]
    fn product_window_is_minimum() {
        let a = LaurentSeries::new("u", 0, 5, vec![q(1), q(2)]);
        let b = LaurentSeries::new("u", 0, 3, vec![q(1)]);
        assert_eq!(a.times(&b).hi(), 3);
        assert_eq!(a.plus(&b).hi(), 3);
    }

    #[test]
    fn empty_window_is_precision_loss() {
        let a = LaurentSeries::<Q>::zero("u", 0, -1);
        assert!(matches!(a.exp(), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn taylor_of_moving_symbol() {
        // E[s;0] about s = a is E[a;0] + u E[a;1] + u²/2 E[a;2] + …
        let e = RatFunc::atom(Atom::eval(rf("s"), 0));
        let s = laurent_expand(&e, "s", &rf("a"), 0, 2).unwrap();
        assert_eq!(s.coeff(1).unwrap(), RatFunc::atom(Atom::eval(rf("a"), 1)));
        assert_eq!(s.coeff(2).unwrap(), RatFunc::atom(Atom::eval(rf("a"), 2)).scale(&qf(1, 2)));
    }
}
