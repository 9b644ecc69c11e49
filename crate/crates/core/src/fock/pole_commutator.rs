//! Commutators of Laurent coefficients predicted from the pole of a composition.
//!
//! If `A(r)B(s) = q·B(s)A(r)` as rational families and the composition has a
//! pole of order `L` along `s = r` with fusions `C^{(m)}`, then
//! `A_k B_{k′} − q B_{k′} A_k = −Σ_{m=1}^{L} C(−k′−1, m−1) C^{(m)}_{k+k′+m}`
//! for constant `Γ`. The data `q`, `L`, `C^{(m)}` are read off the geometric side.

use std::collections::BTreeMap;

use crate::arith::{binomial, Scalar, Q};
use crate::error::{Error, Result};
use crate::ops::{commutator_report, fusion, pole_order, CommutatorReport, LocalEquation, SemigeomOp};

use super::element::FockElement;
use super::local::{localize_series, unlocalize};
use super::vertex::{anticommutator_matrix, FermionPair};

/// Fusion data of `A(r)B(s)` along `u = s − r`.
#[derive(Clone, Debug)]
pub struct PoleData {
    /// `A(r)B(s) = q · B(s)A(r)`.
    pub q: i64,
    pub order: i64,
    /// `C^{(m)}` for `m = 1..=order`, as operator families in `r`.
    pub fused: Vec<SemigeomOp>,
}

/// Read `q`, `L`, `C^{(m)}` from the geometric operators.
pub fn pole_data(a: &SemigeomOp, b: &SemigeomOp) -> Result<PoleData> {
    let ab = a.compose(b)?;
    let probe = crate::mm::MMElement::parse("E[a;0]*E[b;1]+E[c;0]^2")?;
    let q = match commutator_report(a, b, &probe, 1)? {
        CommutatorReport::Equal => 1,
        CommutatorReport::Ratio(c) if c == Scalar::int(-1) => -1,
        CommutatorReport::Ratio(c) => return Err(Error::BadConfig(format!("exchange factor {c} is not ±1"))),
        CommutatorReport::Fails { .. } => return Err(Error::BadConfig("families do not exchange".into())),
    };
    let eq = LocalEquation::new("s", Scalar::param("r"));
    let order = pole_order(&ab.prefactor, &eq)?;
    let fused = (1..=order).map(|m| fusion(&ab, &eq, m)).collect::<Result<Vec<_>>>()?;
    Ok(PoleData { q, order, fused })
}

/// `C^{(m)}_j v`, the `r^j` coefficient of the localized fused operator.
fn fused_coeff(op: &SemigeomOp, j: i64, v: &FockElement<Q>) -> Result<FockElement<Q>> {
    let g = op.apply(&unlocalize(v))?;
    localize_series(&g, "r", j, j)?.coeff(j)
}

/// Predicted `A_k B_{k′} − q B_{k′} A_k` on `v`.
pub fn predicted_bracket(data: &PoleData, k: i64, kp: i64, v: &FockElement<Q>) -> Result<FockElement<Q>> {
    let mut acc = FockElement::zero();
    for m in 1..=data.order {
        let c = binomial(-kp - 1, (m - 1) as u32);
        acc.add_assign(&fused_coeff(&data.fused[(m - 1) as usize], k + kp + m, v)?.scale_q(&c));
    }
    Ok(acc.neg())
}

/// Predicted brackets for all `(k, k′)` in the windows; each fused operator
/// is localized once over the needed range of `j = k + k′ + m`.
pub fn predicted_window(
    data: &PoleData,
    v: &FockElement<Q>,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), FockElement<Q>>> {
    let f = unlocalize(v);
    let mut series = Vec::new();
    for (i, op) in data.fused.iter().enumerate() {
        let m = i as i64 + 1;
        let g = op.apply(&f)?;
        series.push(localize_series(&g, "r", kwin.0 + kpwin.0 + m, kwin.1 + kpwin.1 + m)?);
    }
    let mut out = BTreeMap::new();
    for k in kwin.0..=kwin.1 {
        for kp in kpwin.0..=kpwin.1 {
            let mut acc = FockElement::zero();
            for (i, ser) in series.iter().enumerate() {
                let m = i as i64 + 1;
                let c = binomial(-kp - 1, (m - 1) as u32);
                acc.add_assign(&ser.coeff(k + kp + m)?.scale_q(&c));
            }
            out.insert((k, kp), acc.neg());
        }
    }
    Ok(out)
}

/// Compare the prediction for `ψ(r)ψ⁺(s)` with the computed anticommutators.
/// Returns the mismatching `(k, k′)`.
pub fn check_fermion_prediction(
    v: &FockElement<Q>,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<(PoleData, Vec<(i64, i64)>)> {
    let data = pole_data(&super::gcoef::psi_psi_plus_left(), &super::gcoef::psi_psi_plus_right())?;
    if data.q != -1 {
        return Err(Error::BadConfig(format!("expected fermionic exchange, found q = {}", data.q)));
    }
    let computed: BTreeMap<(i64, i64), FockElement<Q>> = anticommutator_matrix(FermionPair::PsiPlus, v, kwin, kpwin)?;
    let mut bad = Vec::new();
    let predicted = predicted_window(&data, v, kwin, kpwin)?;
    for (&(k, kp), c) in &computed {
        if predicted[&(k, kp)] != *c {
            bad.push((k, kp));
        }
    }
    Ok((data, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermion_pole_data() {
        let v = FockElement::parse("T*t1 - 2").unwrap();
        let (data, bad) = check_fermion_prediction(&v, (-3, 3), (-3, 3)).unwrap();
        assert_eq!(data.q, -1);
        assert_eq!(data.order, 1);
        assert!(data.fused[0].is_identity());
        assert!(bad.is_empty(), "{bad:?}");
        for k in -2..=2 {
            assert_eq!(predicted_window(&data, &v, (k, k), (-1, 1)).unwrap()[&(k, 0)], predicted_bracket(&data, k, 0, &v).unwrap());
        }
    }
}
