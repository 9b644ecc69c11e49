//! Semigeometric partial operators: a prefactor times the automorphism
//! induced by multiplying the argument function by a twist.

mod jet;
mod residue;
mod syntax;

pub use jet::{make_b_minus, JetOp};
pub use residue::{fine_residue, fusion, pole_order, singular_locus, LocalEquation};
pub use syntax::{parse_chain, OpChain, OpTerm};

use std::fmt;

use crate::arith::{binomial, Scalar};
use crate::error::{Error, Result};
use crate::mm::{e0, sym, MMElement};
use crate::p1::DivisorFunction;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemigeomOp {
    pub prefactor: MMElement,
    pub twist: DivisorFunction,
    pub degree: i64,
}

/// Refuse symbols sitting on a zero or pole of `xi`.
pub fn check_domain(xi: &DivisorFunction, f: &MMElement) -> Result<()> {
    for p in f.support() {
        if xi.order_at(&p) != 0 {
            return Err(Error::DomainViolation { point: p.to_string() });
        }
    }
    Ok(())
}

/// The automorphism `E[t;k] ↦ Σ_j C(k,j) ξ^{(k−j)}(t) E[t;j]`.
pub fn apply_twist(xi: &DivisorFunction, f: &MMElement) -> Result<MMElement> {
    if xi.is_one() {
        return Ok(f.clone());
    }
    check_domain(xi, f)?;
    let image = |t: &Scalar, k: u32| -> Option<MMElement> {
        let jet = xi.taylor_at(t, k as usize).expect("domain checked");
        let mut acc = MMElement::zero();
        for j in 0..=k {
            // ξ^{(k−j)}(t) = (k−j)!·a_{k−j}
            let d = jet.coeffs[(k - j) as usize].scale(&crate::arith::factorial(k - j));
            acc = acc.add(&sym(t, j).scale(&d.scale(&binomial(k as i64, j))));
        }
        Some(acc)
    };
    f.map_symbols(&image)
}

impl SemigeomOp {
    pub fn new(prefactor: MMElement, twist: DivisorFunction, degree: i64) -> Self {
        SemigeomOp { prefactor, twist, degree }
    }

    pub fn identity() -> Self {
        Self::new(MMElement::one(), DivisorFunction::one(), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.prefactor.is_one() && self.twist.is_one()
    }

    pub fn apply(&self, f: &MMElement) -> Result<MMElement> {
        Ok(self.prefactor.mul(&apply_twist(&self.twist, f)?))
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &SemigeomOp) -> Result<SemigeomOp> {
        let p = self.prefactor.mul(&apply_twist(&self.twist, &o.prefactor)?);
        Ok(SemigeomOp::new(p, self.twist.mul(&o.twist), self.degree + o.degree))
    }

    pub fn scaled(&self, c: &Scalar) -> SemigeomOp {
        SemigeomOp::new(self.prefactor.scale(c), self.twist.clone(), self.degree)
    }

    /// Parameters of the prefactor and the twist.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut s = self.prefactor.params();
        s.extend(self.twist.params());
        s
    }

    /// Substitute a parameter in prefactor and twist.
    pub fn subst(&self, name: &str, v: &Scalar) -> Result<SemigeomOp> {
        Ok(SemigeomOp::new(self.prefactor.subst(name, v)?, self.twist.subst(name, v)?, self.degree))
    }
}

impl fmt::Display for SemigeomOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * M[{}]", self.prefactor, self.twist)
    }
}

pub fn make_m(xi: DivisorFunction) -> SemigeomOp {
    SemigeomOp::new(MMElement::one(), xi, 0)
}

pub fn make_e(z: &Scalar) -> SemigeomOp {
    SemigeomOp::new(e0(z), DivisorFunction::one(), 1)
}

/// `Π E[zᵢ;0]^{kᵢ}` for a finite integer cycle.
pub fn make_ecycle(cycle: &[(Scalar, i64)]) -> SemigeomOp {
    let mut p = MMElement::one();
    let mut d = 0;
    for (z, k) in cycle {
        p = p.mul(&e0(z).pow(*k).expect("symbols are nonzero"));
        d += k;
    }
    SemigeomOp::new(p, DivisorFunction::one(), d)
}

fn ratio_df(num: &Scalar, den: &Scalar) -> DivisorFunction {
    DivisorFunction::linear(num.clone()).div(&DivisorFunction::linear(den.clone()))
}

pub fn make_f(zp: &Scalar, zm: &Scalar) -> SemigeomOp {
    make_ecycle(&[(zp.clone(), 1), (zm.clone(), -1)])
        .compose(&make_m(ratio_df(zm, zp)))
        .expect("multiplication operators have no domain")
}

pub fn make_g(zp: &Scalar, zm: &Scalar) -> SemigeomOp {
    make_ecycle(&[(zp.clone(), 1), (zm.clone(), -1)])
        .compose(&make_m(ratio_df(zp, zm)))
        .expect("multiplication operators have no domain")
}

/// `(−1/(r−s)) · G(r,s)`.
pub fn make_gcal(r: &Scalar, s: &Scalar) -> Result<SemigeomOp> {
    let c = Scalar::int(-1).div(&r.sub(s))?;
    Ok(make_g(r, s).scaled(&c))
}

pub fn make_phi(z0: &Scalar) -> SemigeomOp {
    SemigeomOp::new(e0(z0), DivisorFunction::factor(z0.clone(), -1), 1)
}

pub fn make_psi(z0: &Scalar) -> SemigeomOp {
    SemigeomOp::new(e0(z0), DivisorFunction::linear(z0.clone()), 1)
}

pub fn make_psi_plus(z0: &Scalar) -> SemigeomOp {
    SemigeomOp::new(e0(z0).inv().expect("nonzero"), DivisorFunction::factor(z0.clone(), -1), -1)
}

/// Multiplication by `−E[s;1]/E[s;0]`.
pub fn make_b_plus(s: &Scalar) -> SemigeomOp {
    let p = sym(s, 1).div(&e0(s)).expect("nonzero").neg();
    SemigeomOp::new(p, DivisorFunction::one(), 0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommutatorReport {
    Equal,
    /// `op₁op₂F = ratio · sign · op₂op₁F` with a symbol-free ratio.
    Ratio(Scalar),
    Fails { left: MMElement, right: MMElement },
}

/// Compare `op₁(op₂ F)` with `sign · op₂(op₁ F)`.
pub fn commutator_report(op1: &SemigeomOp, op2: &SemigeomOp, f: &MMElement, sign: i64) -> Result<CommutatorReport> {
    let left = op1.apply(&op2.apply(f)?)?;
    let right = op2.apply(&op1.apply(f)?)?.scale(&Scalar::int(sign));
    if left == right {
        return Ok(CommutatorReport::Equal);
    }
    if !right.is_zero() {
        if let Some(c) = left.div(&right)?.as_scalar() {
            return Ok(CommutatorReport::Ratio(c));
        }
    }
    Ok(CommutatorReport::Fails { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: &str) -> MMElement {
        MMElement::parse(x).unwrap()
    }

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    fn df(x: &str) -> DivisorFunction {
        DivisorFunction::parse(x).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(make_m(df("(z-1)/(z-2)")).apply(&m("E[3;0]")).unwrap(), m("2*E[3;0]"));
        assert_eq!(
            make_m(df("1/(z-s)")).apply(&m("E[t;1]")).unwrap(),
            m("E[t;1]/(t-s) - E[t;0]/(t-s)^2")
        );
        assert_eq!(
            make_m(df("z-1")).apply(&m("E[1;0]")),
            Err(Error::DomainViolation { point: "1".into() })
        );
        assert_eq!(make_m(DivisorFunction::one()).apply(&m("E[r;2]+1")).unwrap(), m("E[r;2]+1"));
    }

    #[test]
    fn catalog_examples() {
        assert!(make_g(&s("a"), &s("a")).is_identity());
        assert_eq!(make_psi(&s("r")).apply(&MMElement::one()).unwrap(), m("E[r;0]"));
        assert_eq!(make_psi_plus(&s("s")).apply(&MMElement::one()).unwrap(), m("1/E[s;0]"));
        assert_eq!(make_e(&s("z0")).degree, 1);
        assert_eq!(make_m(df("z-1")).degree, 0);
        assert_eq!(make_ecycle(&[(s("a"), 1), (s("b"), -1)]).prefactor, m("E[a;0]/E[b;0]"));
        assert_eq!(make_gcal(&s("r"), &s("r")), Err(Error::DivisionByZero));
    }

    #[test]
    fn compose_examples() {
        let c = make_psi(&s("r")).compose(&make_psi_plus(&s("s"))).unwrap();
        assert_eq!(c.prefactor, m("E[r;0]/((s-r)*E[s;0])"));
        assert_eq!(c.twist, df("(z-r)/(z-s)"));
        assert_eq!(c, make_gcal(&s("r"), &s("s")).unwrap().compose(&SemigeomOp::identity()).unwrap());
        let gg = make_g(&s("a"), &s("b")).compose(&make_g(&s("c"), &s("d"))).unwrap();
        assert_eq!(gg.twist, df("(z-a)*(z-c)/((z-b)*(z-d))"));
    }

    #[test]
    fn commutator_examples() {
        let f = m("E[a;0]");
        let (psi, psip) = (make_psi(&s("r")), make_psi_plus(&s("s")));
        assert_eq!(commutator_report(&psi, &psip, &f, -1).unwrap(), CommutatorReport::Equal);
        let (g1, g2) = (make_gcal(&s("r"), &s("s")).unwrap(), make_gcal(&s("u"), &s("v")).unwrap());
        assert_eq!(commutator_report(&g1, &g2, &f, 1).unwrap(), CommutatorReport::Equal);
        let xi = df("(z-1)*(z+2)/(z-3)");
        let rep = commutator_report(&make_m(xi.clone()), &make_e(&s("w")), &f, 1).unwrap();
        assert_eq!(rep, CommutatorReport::Ratio(xi.value(&s("w")).unwrap()));
    }
}
