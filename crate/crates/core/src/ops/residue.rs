//! Residues and fusions along `u = var − center`.

use crate::arith::{laurent_expand, Atom, Poly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::mm::MMElement;

use super::SemigeomOp;

/// Local equation `u = var − center` with transversal direction `∂/∂var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEquation {
    pub var: String,
    pub center: Scalar,
}

impl LocalEquation {
    pub fn new(var: &str, center: Scalar) -> Self {
        LocalEquation { var: var.to_string(), center }
    }

    /// Read `u` from text such as `s-r`, choosing a parameter that enters
    /// with coefficient one. Parameters listed in `prefer` win ties.
    pub fn parse(text: &str, prefer: &[String]) -> Result<Self> {
        let u = Scalar::parse(text)?;
        let mut cands: Vec<String> = u
            .params()
            .into_iter()
            .filter(|p| u.derivative(p).is_one())
            .filter(|p| !u.sub(&Scalar::param(p)).depends_on(p))
            .collect();
        cands.sort_by_key(|p| !prefer.contains(p));
        let var = cands.into_iter().next().ok_or_else(|| Error::Syntax {
            column: 1,
            message: format!("'{text}' is not of the form parameter minus point"),
        })?;
        let center = Scalar::param(&var).sub(&u);
        Ok(LocalEquation { var, center })
    }
}

fn expand_coeff(f: &RatFunc, eq: &LocalEquation, n: i64) -> Result<RatFunc> {
    let s = laurent_expand(f, &eq.var, eq.center.as_ratfunc(), -n, -n)?;
    Ok(s.coeff(-n).unwrap_or_else(RatFunc::zero))
}

/// Order of the pole of `f` along `u = 0` (zero when regular).
pub fn pole_order(f: &MMElement, eq: &LocalEquation) -> Result<i64> {
    let s = laurent_expand(f.as_ratfunc(), &eq.var, eq.center.as_ratfunc(), i64::MIN / 4, 0)?;
    Ok(s.valuation().map_or(0, |v| (-v).max(0)))
}

/// Coefficient of `u^{−n}` in `family(F)`.
pub fn fine_residue(family: &SemigeomOp, eq: &LocalEquation, n: i64, f: &MMElement) -> Result<MMElement> {
    let g = family.apply(f)?;
    Ok(MMElement::from_ratfunc(expand_coeff(g.as_ratfunc(), eq, n)?))
}

/// The operator whose value on every `F` is the `u^{−n}` coefficient of `op(F)`.
pub fn fusion(op: &SemigeomOp, eq: &LocalEquation, n: i64) -> Result<SemigeomOp> {
    let coeff = MMElement::from_ratfunc(expand_coeff(op.prefactor.as_ratfunc(), eq, n)?);
    let moving = op.twist.params().contains(&eq.var);
    if moving {
        let order = pole_order(&op.prefactor, eq)?;
        if order > n {
            return Err(Error::NotExtractable(format!(
                "twist moves with {} and the prefactor pole has order {order} > {n}",
                eq.var
            )));
        }
    }
    let twist = op
        .twist
        .subst(&eq.var, &eq.center)
        .map_err(|e| Error::NotExtractable(format!("twist degenerates at {}: {e}", eq.center)))?;
    Ok(SemigeomOp::new(coeff, twist, op.degree))
}

/// Factors `y − x` of the composed prefactor's denominator, `x` a parameter
/// of `op1` and `y` one of `op2`.
pub fn singular_locus(op1: &SemigeomOp, op2: &SemigeomOp) -> Result<Vec<Scalar>> {
    let c = op1.compose(op2)?;
    let den = c.prefactor.as_ratfunc().denom();
    let mut out: Vec<Scalar> = Vec::new();
    for x in op1.params() {
        for y in op2.params() {
            if x == y {
                continue;
            }
            let cand = Poly::atom(Atom::param(&y)).sub(&Poly::atom(Atom::param(&x)));
            if den.div_exact(&cand).is_some() {
                let f = Scalar::param(&y).sub(&Scalar::param(&x));
                if !out.contains(&f) && !out.contains(&f.neg()) {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{make_gcal, make_m, make_psi, make_psi_plus, make_g};
    use crate::p1::DivisorFunction;

    fn m(x: &str) -> MMElement {
        MMElement::parse(x).unwrap()
    }

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    fn at(var: &str, c: &str) -> LocalEquation {
        LocalEquation::new(var, s(c))
    }

    #[test]
    fn fine_residue_examples() {
        let fam = make_m(DivisorFunction::parse("1/(z-s)").unwrap());
        assert!(fine_residue(&fam, &at("s", "0"), 1, &m("E[1;0]")).unwrap().is_zero());
        assert_eq!(fine_residue(&fam, &at("s", "0"), 1, &m("E[0;0]")).unwrap(), m("-E[0;0]"));
        let fam = make_m(DivisorFunction::parse("(z+s)/(z-s)").unwrap());
        assert_eq!(fine_residue(&fam, &at("s", "0"), 0, &m("E[0;0]")).unwrap(), m("-E[0;0]"));
    }

    #[test]
    fn gcal_self_fusion_is_minus_identity() {
        let g = make_gcal(&s("zp"), &s("zm")).unwrap();
        let f = fusion(&g, &at("zp", "zm"), 1).unwrap();
        assert!(f.scaled(&Scalar::int(-1)).is_identity());
    }

    #[test]
    fn gcal_pair_relations() {
        let gg = make_gcal(&s("zp"), &s("zm")).unwrap().compose(&make_gcal(&s("wp"), &s("wm")).unwrap()).unwrap();
        let a = fusion(&gg, &at("wp", "zm"), 1).unwrap();
        assert_eq!(a, make_gcal(&s("zp"), &s("wm")).unwrap());
        let b = fusion(&gg, &at("wm", "zp"), 1).unwrap();
        assert_eq!(b, make_gcal(&s("wp"), &s("zm")).unwrap().scaled(&Scalar::int(-1)));
    }

    #[test]
    fn psi_psi_plus_fusion() {
        let c = make_psi(&s("r")).compose(&make_psi_plus(&s("s"))).unwrap();
        let eq = LocalEquation::parse("s-r", &["s".into()]).unwrap();
        assert_eq!(eq, at("s", "r"));
        assert!(fusion(&c, &eq, 1).unwrap().is_identity());
        assert_eq!(pole_order(&c.prefactor, &eq).unwrap(), 1);
    }

    #[test]
    fn loci() {
        let c = singular_locus(&make_psi(&s("r")), &make_psi_plus(&s("s"))).unwrap();
        assert_eq!(c, vec![s("s-r")]);
        let mut c = singular_locus(&make_g(&s("a"), &s("b")), &make_g(&s("c"), &s("d"))).unwrap();
        c.sort();
        let mut e = vec![s("c-b"), s("d-a")];
        e.sort();
        assert_eq!(c, e);
        let mm = singular_locus(
            &make_m(DivisorFunction::parse("z-a").unwrap()),
            &make_m(DivisorFunction::parse("z-b").unwrap()),
        )
        .unwrap();
        assert!(mm.is_empty());
    }

    #[test]
    fn moving_twist_with_high_pole_is_not_extractable() {
        let op = SemigeomOp::new(m("1/(s-r)^2"), DivisorFunction::parse("z-s").unwrap(), 0);
        assert!(matches!(fusion(&op, &at("s", "r"), 1), Err(Error::NotExtractable(_))));
    }
}
