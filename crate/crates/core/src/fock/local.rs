//! Localization at `0`: `E[0;k] ↦ k!·T·h_k(t)` and back.

use std::collections::BTreeMap;

use crate::arith::{factorial, laurent_expand, Atom, Monomial, Poly, RatFunc, Scalar, Q};
use crate::error::{Error, Result};
use crate::mm::{sym, MMElement};

use super::element::{FockElement, TPoly};
use super::hpoly::h;
use super::vertex::FockSeries;

fn origin() -> RatFunc {
    RatFunc::zero()
}

fn origin_order(a: &Atom) -> Option<u32> {
    match a {
        Atom::Eval(p, k) if p.is_zero() => Some(*k),
        _ => None,
    }
}

fn not_fock(why: impl Into<String>) -> Error {
    Error::NotInFockSubring(why.into())
}

/// Image of `E[0;k]`.
pub fn local_symbol(k: u32) -> FockElement<Q> {
    FockElement::graded(1, h(k as i64).scale_q(&factorial(k)))
}

fn localize_monomial(m: &Monomial, cache: &mut BTreeMap<(u32, u32), FockElement<Q>>) -> Result<FockElement<Q>> {
    let mut acc = FockElement::one();
    for (a, e) in m.factors() {
        let k = origin_order(a).ok_or_else(|| not_fock(format!("{a} is not a symbol at 0")))?;
        let p = match cache.get(&(k, *e)) {
            Some(p) => p.clone(),
            None => {
                let base = local_symbol(k);
                let p = (0..*e).fold(FockElement::one(), |x, _| x.mul(&base));
                cache.insert((k, *e), p.clone());
                p
            }
        };
        acc = acc.mul(&p);
    }
    Ok(acc)
}

/// `F ↦` its Fock vector; `F` must be a polynomial in `E[0;k]` over `E[0;0]^e`.
pub fn localize(f: &MMElement) -> Result<FockElement<Q>> {
    let rf = f.as_ratfunc();
    let den = rf.denom();
    let e0 = Atom::eval(origin(), 0);
    let (dc, dm) = match den.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] => ((*c).clone(), (*m).clone()),
        _ => return Err(not_fock(format!("denominator {den} is not a power of E[0;0]"))),
    };
    let shift = dm.exponent(&e0) as i64;
    if dm.degree() as i64 != shift {
        return Err(not_fock(format!("denominator {den} is not a power of E[0;0]")));
    }
    let mut cache = BTreeMap::new();
    let mut acc = FockElement::zero();
    for (m, c) in rf.numer().terms() {
        acc.add_assign(&localize_monomial(m, &mut cache)?.scale_q(c));
    }
    Ok(acc.shift_grade(-shift).scale_q(&dc.recip()))
}

/// The polynomial in `a_j = E[0;j]/(j! E[0;0])` equal to `t_k`.
///
/// From `k a_k = Σ_j j t_j a_{k−j}`.
pub fn t_image(kmax: usize) -> Vec<MMElement> {
    let o = Scalar::zero();
    let e0 = sym(&o, 0);
    let a: Vec<MMElement> = (0..=kmax)
        .map(|j| sym(&o, j as u32).div(&e0.scale_q(&factorial(j as u32))).expect("E[0;0] is nonzero"))
        .collect();
    let mut t = vec![MMElement::zero()];
    for k in 1..=kmax {
        let mut acc = a[k].scale_q(&crate::arith::q(k as i64));
        for j in 1..k {
            acc = acc.sub(&t[j].mul(&a[k - j]).scale_q(&crate::arith::q(j as i64)));
        }
        t.push(acc.scale_q(&crate::arith::qf(1, k as i64)));
    }
    t
}

/// `T ↦ E[0;0]`, `t_k ↦` [`t_image`].
pub fn unlocalize(v: &FockElement<Q>) -> MMElement {
    let ts = t_image(v.max_var());
    let e0 = sym(&Scalar::zero(), 0);
    let mut acc = MMElement::zero();
    for (l, p) in v.components() {
        let tl = e0.pow(l).expect("E[0;0] is nonzero");
        for (e, c) in p.terms() {
            let mut m = tl.scale_q(c);
            for (i, x) in e.iter().enumerate() {
                if *x > 0 {
                    m = m.mul(&ts[i + 1].pow(*x as i64).expect("polynomial"));
                }
            }
            acc = acc.add(&m);
        }
    }
    acc
}

/// Expand `F(s)` in `s` at `0` on `[lo, hi]` and localize each coefficient.
pub fn localize_series(f: &MMElement, var: &str, lo: i64, hi: i64) -> Result<FockSeries> {
    let ser = laurent_expand(f.as_ratfunc(), var, &RatFunc::zero(), lo, hi)?;
    let mut coeffs = BTreeMap::new();
    for (k, c) in ser.terms() {
        if k < lo {
            continue;
        }
        let v = localize(&MMElement::from_ratfunc(c.clone()))?;
        if !v.is_zero() {
            coeffs.insert(k, v);
        }
    }
    Ok(FockSeries { lo, hi, coeffs })
}

/// Localize a polynomial in `E[0;k]` whose coefficients may carry parameters.
pub fn localize_scalar(f: &MMElement) -> Result<FockElement<Scalar>> {
    let rf = f.as_ratfunc();
    let den = rf.denom();
    let is_param = |a: &Atom| matches!(a, Atom::Param(_));
    // Split the denominator into a parameter-only part and a power of E[0;0].
    let e0 = Atom::eval(origin(), 0);
    let shift = den.terms().map(|(m, _)| m.exponent(&e0)).min().unwrap_or(0);
    let e0m = Monomial::var(e0.clone(), shift);
    let dpar = den.div_exact(&Poly::term(Q::from_integer(1.into()), e0m)).filter(|d| d.atoms().iter().all(is_param));
    let dpar = dpar.ok_or_else(|| not_fock(format!("denominator {den} is not a power of E[0;0]")))?;
    let dpar = RatFunc::from_poly(dpar);
    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in rf.numer().terms() {
        let (sym_part, par_part): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(a, _)| !is_param(a));
        let slot = groups.entry(Monomial::from_pairs(sym_part)).or_insert_with(Poly::zero);
        *slot = slot.add(&Poly::term(c.clone(), Monomial::from_pairs(par_part)));
    }
    let mut cache = BTreeMap::new();
    let mut acc = FockElement::zero();
    for (m, coef) in groups {
        let c = Scalar::from_ratfunc(RatFunc::from_poly(coef).div(&dpar)?).expect("parameters only");
        let v = localize_monomial(&m, &mut cache)?.to_scalar();
        acc.add_assign(&v.scale(&c));
    }
    Ok(acc.shift_grade(-(shift as i64)))
}

/// `t`-polynomial helper used by tests and the checker.
pub fn tpoly_of(v: &FockElement<Q>, l: i64) -> TPoly<Q> {
    v.component(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(s: &str) -> MMElement {
        MMElement::parse(s).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(localize(&m("E[0;0]")).unwrap(), FockElement::parse("T").unwrap());
        assert_eq!(localize(&m("E[0;1]")).unwrap(), FockElement::parse("T*t1").unwrap());
        assert_eq!(localize(&m("E[0;2]/E[0;0]^3")).unwrap(), FockElement::parse("T^-2*(2*t2 + t1^2)").unwrap());
        assert!(matches!(localize(&m("1/E[0;1]")), Err(Error::NotInFockSubring(_))));
        assert!(matches!(localize(&m("E[1;0]")), Err(Error::NotInFockSubring(_))));
    }

    #[test]
    fn roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut f = MMElement::zero();
            for _ in 0..3 {
                let mut term = MMElement::int(rng.gen_range(-4..=4));
                for _ in 0..rng.gen_range(0..3) {
                    term = term.mul(&sym(&Scalar::zero(), rng.gen_range(0..4)));
                }
                f = f.add(&term);
            }
            let f = f.div(&sym(&Scalar::zero(), 0).pow(rng.gen_range(0..3)).unwrap()).unwrap();
            let v = localize(&f).unwrap();
            assert_eq!(unlocalize(&v), f);
            assert_eq!(localize(&unlocalize(&v)).unwrap(), v);
        }
    }

    #[test]
    fn with_parameters() {
        let v = localize_scalar(&m("(s+1)*E[0;1]/(s*E[0;0])")).unwrap();
        assert_eq!(v.component(0).terms().next().unwrap().1, &Scalar::parse("(s+1)/s").unwrap());
    }
}
