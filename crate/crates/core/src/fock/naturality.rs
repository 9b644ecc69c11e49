//! Fock realizations against `localize ∘ geometric ∘ unlocalize`.

use crate::arith::{Scalar, Q};
use crate::error::Result;
use crate::ops::{make_b_minus, make_b_plus, make_e, make_m, make_phi, make_psi, make_psi_plus, OpTerm};
use crate::p1::DivisorFunction;

use super::element::FockElement;
use super::local::{localize_series, unlocalize};
use super::vertex::{b_minus_coeff, b_plus_coeff, vertex_coeff, Field, FockSeries};

/// Operators with both a geometric and a Fock form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Realized {
    Vertex(Field),
    BPlus,
    BMinus,
}

impl Realized {
    /// The operators named by the acceptance battery.
    pub const CORE: [Realized; 5] = [
        Realized::Vertex(Field::MzMinusS),
        Realized::Vertex(Field::MRatio),
        Realized::Vertex(Field::E),
        Realized::BPlus,
        Realized::BMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Realized::Vertex(f) => f.name(),
            Realized::BPlus => "B+",
            Realized::BMinus => "B-",
        }
    }

    /// The geometric operator with parameter `s`.
    pub fn geometric(self) -> OpTerm {
        let s = Scalar::param("s");
        let lin = || DivisorFunction::linear(s.clone());
        match self {
            Realized::Vertex(Field::Psi) => OpTerm::Semi(make_psi(&s)),
            Realized::Vertex(Field::PsiPlus) => OpTerm::Semi(make_psi_plus(&s)),
            Realized::Vertex(Field::Phi) => OpTerm::Semi(make_phi(&s)),
            Realized::Vertex(Field::E) => OpTerm::Semi(make_e(&s)),
            Realized::Vertex(Field::MzMinusS) => OpTerm::Semi(make_m(lin())),
            Realized::Vertex(Field::MInvZMinusS) => OpTerm::Semi(make_m(lin().inv())),
            Realized::Vertex(Field::MRatio) => {
                OpTerm::Semi(make_m(DivisorFunction::constant(s.neg()).mul(&lin().inv())))
            }
            Realized::BPlus => OpTerm::Semi(make_b_plus(&s)),
            Realized::BMinus => OpTerm::Jet(make_b_minus(&s)),
        }
    }

    pub fn fock_coeff(self, k: i64, v: &FockElement<Q>) -> FockElement<Q> {
        match self {
            Realized::Vertex(f) => vertex_coeff(f, k, v),
            Realized::BPlus => b_plus_coeff(k, v),
            Realized::BMinus => b_minus_coeff(k, v),
        }
    }
}

/// `localize(op(unlocalize v))` expanded in `s` on the window.
pub fn geometric_series(op: Realized, v: &FockElement<Q>, window: (i64, i64)) -> Result<FockSeries> {
    let g = op.geometric().apply(&unlocalize(v))?;
    localize_series(&g, "s", window.0, window.1)
}

/// First window index where the two sides differ, if any.
pub fn naturality_mismatch(op: Realized, v: &FockElement<Q>, window: (i64, i64)) -> Result<Option<i64>> {
    let geo = geometric_series(op, v, window)?;
    for k in window.0..=window.1 {
        if geo.coeff(k)? != op.fock_coeff(k, v) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_realizations_agree() {
        let vs = ["1", "T*t1", "T^-2*t2 + 3*t1^2", "T^2*t3"];
        let ops = [
            Realized::Vertex(Field::MzMinusS),
            Realized::Vertex(Field::MRatio),
            Realized::Vertex(Field::MInvZMinusS),
            Realized::Vertex(Field::E),
            Realized::Vertex(Field::Psi),
            Realized::Vertex(Field::PsiPlus),
            Realized::Vertex(Field::Phi),
            Realized::BPlus,
            Realized::BMinus,
        ];
        for v in vs {
            let v = FockElement::parse(v).unwrap();
            for op in ops {
                assert_eq!(naturality_mismatch(op, &v, (-4, 4)).unwrap(), None, "{} on {v}", op.name());
            }
        }
    }
}
