//! First-order jets of multiplication operators.
//!
//! The τ-coefficient of `M_{1+τη}` over `K[τ]/(τ²)` is the derivation
//! `E[t;k] ↦ Σ_j C(k,j) η^{(k−j)}(t) E[t;j]` extended by Leibniz.

use crate::arith::{binomial, factorial, Atom, Scalar};
use crate::error::Result;
use crate::mm::{sym, MMElement};
use crate::p1::DivisorFunction;

use super::check_domain;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetOp {
    pub eta: DivisorFunction,
    /// Overall factor in front of the τ-coefficient.
    pub factor: Scalar,
}

/// `−d/dτ M_{1+τ/(z−s)}` at `τ = 0`.
pub fn make_b_minus(s: &Scalar) -> JetOp {
    JetOp { eta: DivisorFunction::factor(s.clone(), -1), factor: Scalar::int(-1) }
}

impl JetOp {
    fn image(&self, t: &Scalar, k: u32) -> MMElement {
        let jet = self.eta.taylor_at(t, k as usize).expect("domain checked");
        let mut acc = MMElement::zero();
        for j in 0..=k {
            let d = jet.coeffs[(k - j) as usize].scale(&factorial(k - j));
            acc = acc.add(&sym(t, j).scale(&d.scale(&binomial(k as i64, j))));
        }
        acc
    }

    pub fn apply(&self, f: &MMElement) -> Result<MMElement> {
        check_domain(&self.eta, f)?;
        let rf = f.as_ratfunc();
        let mut acc = MMElement::zero();
        for (t, k) in f.symbols() {
            let a = Atom::eval(t.as_ratfunc().clone(), k);
            let partial = MMElement::from_ratfunc(rf.derivative(&a));
            acc = acc.add(&partial.mul(&self.image(&t, k)));
        }
        Ok(acc.scale(&self.factor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ops::make_b_plus;

    fn m(x: &str) -> MMElement {
        MMElement::parse(x).unwrap()
    }

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    #[test]
    fn b_minus_examples() {
        let b = make_b_minus(&s("s"));
        assert!(b.apply(&MMElement::one()).unwrap().is_zero());
        assert_eq!(b.apply(&m("E[t;0]")).unwrap(), m("-E[t;0]/(t-s)"));
        assert!(matches!(b.apply(&m("E[s;0]")), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn bosons_commute_to_double_pole() {
        let bp = make_b_plus(&s("r"));
        let bm = make_b_minus(&s("s"));
        for f in ["E[a;0]", "E[a;1]*E[b;0]^2", "1/(E[a;0]+E[b;2])"] {
            let f = m(f);
            let lhs = bp.apply(&bm.apply(&f).unwrap()).unwrap().sub(&bm.apply(&bp.apply(&f).unwrap()).unwrap());
            assert_eq!(lhs, f.mul(&m("1/(r-s)^2")));
        }
    }
}
