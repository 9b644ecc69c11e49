//! Coefficients of `ψ(r)ψ⁺(s)`: `𝒢^<`, `𝒢^>`, the smooth `𝒢`, `X`, `Y` and `B`.
//!
//! `𝒢_{nm}` multiplies `r^n s^m`. `<` expands `r` first, `>` expands `s` first.

use std::collections::BTreeMap;

use crate::arith::{binomial, iterated_laurent, Atom, Monomial, Poly, RatFunc, Scalar, Q};
use crate::error::{Error, Result};
use crate::mm::MMElement;
use crate::ops::{fine_residue, make_psi, make_psi_plus, LocalEquation, SemigeomOp};

use super::element::{FockElement, TPoly};
use super::hpoly::h_scaled;
use super::local::{localize, localize_series, unlocalize};
use super::vertex::{vertex_coeff, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `r` inner.
    Less,
    /// `s` inner.
    Greater,
    /// `ψ(r)ψ⁺(s) − 1/(s−r)`, regular on the diagonal.
    Smooth,
}

impl Flavor {
    pub fn symbol(self) -> &'static str {
        match self {
            Flavor::Less => "<",
            Flavor::Greater => ">",
            Flavor::Smooth => "smooth",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "<" | "less" | "lt" => Some(Flavor::Less),
            ">" | "greater" | "gt" => Some(Flavor::Greater),
            "smooth" | "s" | "=" => Some(Flavor::Smooth),
            _ => None,
        }
    }
}

fn delta(n: i64, m: i64) -> bool {
    n + m + 1 == 0
}

/// `𝒢^f_{nm} v` from products of fermion coefficients.
pub fn g_coefficient(n: i64, m: i64, flavor: Flavor, v: &FockElement<Q>) -> FockElement<Q> {
    let greater = || vertex_coeff(Field::Psi, n, &vertex_coeff(Field::PsiPlus, m, v));
    let less = || vertex_coeff(Field::PsiPlus, m, &vertex_coeff(Field::Psi, n, v)).neg();
    match flavor {
        Flavor::Greater => greater(),
        Flavor::Less => less(),
        // Both expressions agree; use whichever needs no correction.
        Flavor::Smooth if n >= 0 => greater(),
        Flavor::Smooth => less(),
    }
}

pub fn psi_psi_plus_left() -> SemigeomOp {
    make_psi(&Scalar::param("r"))
}

pub fn psi_psi_plus_right() -> SemigeomOp {
    make_psi_plus(&Scalar::param("s"))
}

/// The geometric family `ψ(r)∘ψ⁺(s)`.
pub fn psi_psi_plus() -> SemigeomOp {
    psi_psi_plus_left().compose(&psi_psi_plus_right()).expect("composable")
}

fn is_rs(a: &Atom) -> bool {
    matches!(a.param_name(), Some("r") | Some("s"))
}

/// `𝒢^f_{nm} v` for all `(n, m)` in the windows, from the geometric
/// composition applied to `unlocalize(v)` and expanded with [`iterated_laurent`].
pub fn g_window_geometric(
    flavor: Flavor,
    v: &FockElement<Q>,
    nwin: (i64, i64),
    mwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), FockElement<Q>>> {
    let f = unlocalize(v);
    let mut out_mm = psi_psi_plus().apply(&f)?;
    if flavor == Flavor::Smooth {
        let pole = MMElement::from_ratfunc(RatFunc::param("s").sub(&RatFunc::param("r")).inv()?);
        out_mm = out_mm.sub(&pole.mul(&f));
    }
    let rf = out_mm.as_ratfunc();
    let er = Atom::eval(RatFunc::param("r"), 0);
    let es = Atom::eval(RatFunc::param("s"), 0);

    // Denominator = d(r,s) · (monomial in symbols).
    let den = rf.denom();
    let lead = den.terms().next().map(|(m, _)| m.clone()).unwrap_or_else(Monomial::one);
    let sym_den = Monomial::from_pairs(lead.factors().iter().filter(|(a, _)| !is_rs(a)).cloned().collect());
    let drs = den
        .div_exact(&Poly::term(Q::from_integer(1.into()), sym_den.clone()))
        .filter(|d| d.atoms().iter().all(is_rs))
        .ok_or_else(|| Error::NotInFockSubring(format!("denominator {den} does not split")))?;
    let drs = RatFunc::from_poly(drs);

    let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in rf.numer().terms() {
        let (syms, pars): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(a, _)| !is_rs(a));
        let slot = groups.entry(Monomial::from_pairs(syms)).or_insert_with(Poly::zero);
        *slot = slot.add(&Poly::term(c.clone(), Monomial::from_pairs(pars)));
    }

    let (inner, outer) = match flavor {
        Flavor::Less | Flavor::Smooth => ("r", "s"),
        Flavor::Greater => ("s", "r"),
    };
    let auto = i64::MIN / 4;
    let mut out: BTreeMap<(i64, i64), FockElement<Q>> = BTreeMap::new();
    for (mono, coef) in groups {
        let a = mono.exponent(&er) as i64 - sym_den.exponent(&er) as i64;
        let b = mono.exponent(&es) as i64 - sym_den.exponent(&es) as i64;
        // The part supported at 0.
        let mut rest_num = Vec::new();
        for (at, e) in mono.factors() {
            if *at != er && *at != es {
                rest_num.push((at.clone(), *e));
            }
        }
        let mut rest_den = Vec::new();
        for (at, e) in sym_den.factors() {
            if *at != er && *at != es {
                rest_den.push((at.clone(), *e));
            }
        }
        let rest = RatFunc::new(
            Poly::term(Q::from_integer(1.into()), Monomial::from_pairs(rest_num)),
            Poly::term(Q::from_integer(1.into()), Monomial::from_pairs(rest_den)),
        )?;
        let local = localize(&MMElement::from_ratfunc(rest))?;
        let c = RatFunc::from_poly(coef).div(&drs)?;
        let (iw, ow) = if inner == "r" { (nwin.1, mwin.1) } else { (mwin.1, nwin.1) };
        let ds = iterated_laurent(&c, inner, outer, (auto, iw), (auto, ow))?;
        let local = local.shift_grade(a + b);
        for (&(i0, j0), cf) in &ds.terms {
            let (i, j) = if inner == "r" { (i0, j0) } else { (j0, i0) };
            let cq = cf.as_constant().ok_or_else(|| Error::PrecisionLoss("symbolic coefficient".into()))?;
            for n in nwin.0..=nwin.1 {
                let hr = h_scaled(n - i, a);
                if hr.is_zero() {
                    continue;
                }
                for m in mwin.0..=mwin.1 {
                    let hs = h_scaled(m - j, b);
                    if hs.is_zero() {
                        continue;
                    }
                    let factor = FockElement::graded(0, hr.mul(&hs).scale_q(&cq));
                    out.entry((n, m)).or_default().add_assign(&factor.mul(&local));
                }
            }
        }
    }
    out.retain(|_, x| !x.is_zero());
    Ok(out)
}

/// `X^f_{ij} = 𝒢^f_{i,−j−1}`.
pub fn x_coefficient(i: i64, j: i64, flavor: Flavor, v: &FockElement<Q>) -> FockElement<Q> {
    g_coefficient(i, -j - 1, flavor, v)
}

/// Range of `n` where `𝒢_{n, c−n} v` can be nonzero.
fn y_range(c: i64, v: &FockElement<Q>) -> (i64, i64) {
    let d = v.max_weight() as i64;
    let grades = v.grades();
    let lmin = grades.first().copied().unwrap_or(0);
    let lmax = grades.last().copied().unwrap_or(0);
    (lmin - d - 2, c + lmax + d + 2)
}

/// `Y_{kl} = Σ_n C(n,k) 𝒢_{n, k+l−1−n}`: the `u^k s^{l−1}` coefficient of
/// the smooth part at `r = s + u`.
pub fn y_operator(k: u32, l: i64, v: &FockElement<Q>) -> FockElement<Q> {
    let c = k as i64 + l - 1;
    let (lo, hi) = y_range(c, v);
    let mut acc = FockElement::zero();
    for n in lo..=hi {
        let b = binomial(n, k);
        if b == Q::from_integer(0.into()) {
            continue;
        }
        acc.add_assign(&g_coefficient(n, c - n, Flavor::Smooth, v).scale_q(&b));
    }
    acc
}

/// `s^l` coefficient of the `0`-th residue of `ψ(r)ψ⁺(s)` at `r = s`,
/// computed on the geometric side and localized.
pub fn b_coefficient(l: i64, v: &FockElement<Q>) -> Result<FockElement<Q>> {
    let f = unlocalize(v);
    let eq = LocalEquation::new("r", Scalar::param("s"));
    let res = fine_residue(&psi_psi_plus(), &eq, 0, &f)?;
    localize_series(&res, "s", l, l)?.coeff(l)
}

/// Grade-preserving check helper: the `t`-polynomial of a single grade.
pub fn component(v: &FockElement<Q>, l: i64) -> TPoly<Q> {
    v.component(l)
}

/// `δ_{n+m+1}` as used by the flavor relations.
pub fn kronecker(n: i64, m: i64) -> bool {
    delta(n, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FockElement<Q> {
        FockElement::parse(s).unwrap()
    }

    #[test]
    fn flavors_differ_by_identity() {
        let v = f("T*t1 - t2");
        for n in -3..=3 {
            for m in -3..=3 {
                let d = g_coefficient(n, m, Flavor::Less, &v).sub(&g_coefficient(n, m, Flavor::Greater, &v));
                let want = if n + m + 1 == 0 { v.clone() } else { FockElement::zero() };
                assert_eq!(d, want, "{n} {m}");
            }
        }
    }

    #[test]
    fn geometric_route_agrees() {
        let v = f("T^-1*t1 + 2");
        for fl in [Flavor::Less, Flavor::Greater, Flavor::Smooth] {
            let w = g_window_geometric(fl, &v, (-3, 3), (-3, 3)).unwrap();
            for n in -3..=3 {
                for m in -3..=3 {
                    let a = w.get(&(n, m)).cloned().unwrap_or_default();
                    assert_eq!(a, g_coefficient(n, m, fl, &v), "{fl:?} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn y_matches_residue() {
        let v = f("T*t1^2 + t2");
        for l in -2..=2 {
            assert_eq!(y_operator(0, l, &v), b_coefficient(l - 1, &v).unwrap(), "l={l}");
        }
    }
}
