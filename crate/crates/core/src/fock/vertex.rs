//! Vertex operators on the Fock space and their Laurent coefficients.
//!
//! On `𝒱_l` every catalog operator has the shape
//! `T^{l+g} (−s)^{a l} exp(ε Σ s^k t_k) · (t_k ↦ t_k + δ/(k s^k))`,
//! so the coefficient of `s^k` is a finite sum and is computed exactly.

use std::collections::BTreeMap;

use crate::arith::{q, Q, RatFunc};
use crate::arith::iterated_laurent;
use crate::error::{Error, Result};

use super::element::{sign, FockElement, TPoly};
use super::hpoly::{h_scaled, shift_expand};
use super::hbasis::{composed_coeffs_z, from_integral, to_integral, HElem};

/// The operators with a vertex-type Fock realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Psi,
    PsiPlus,
    Phi,
    /// `E_s`.
    E,
    /// `M_{z−s}`.
    MzMinusS,
    /// `M_{1/(z−s)}`.
    MInvZMinusS,
    /// `M_{−s/(z−s)}`.
    MRatio,
}

impl Field {
    pub const ALL: [Field; 7] =
        [Field::Psi, Field::PsiPlus, Field::Phi, Field::E, Field::MzMinusS, Field::MInvZMinusS, Field::MRatio];

    pub fn name(self) -> &'static str {
        match self {
            Field::Psi => "psi",
            Field::PsiPlus => "psi+",
            Field::Phi => "phi",
            Field::E => "E",
            Field::MzMinusS => "M[z-s]",
            Field::MInvZMinusS => "M[1/(z-s)]",
            Field::MRatio => "M[-s/(z-s)]",
        }
    }

    pub fn from_name(s: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.name() == s).or(match s {
            "psi_plus" | "psiplus" => Some(Field::PsiPlus),
            "Es" | "E_s" => Some(Field::E),
            _ => None,
        })
    }

    pub fn spec(self) -> VertexSpec {
        let v = |grade_shift, factor_sign, exp_sign, subst_sign| VertexSpec { grade_shift, factor_sign, exp_sign, subst_sign };
        match self {
            Field::Psi => v(1, 1, 1, -1),
            Field::PsiPlus => v(-1, -1, -1, 1),
            Field::Phi => v(1, -1, 1, 1),
            Field::E => v(1, 0, 1, 0),
            Field::MzMinusS => v(0, 1, 0, -1),
            Field::MInvZMinusS => v(0, -1, 0, 1),
            Field::MRatio => v(0, 0, 0, 1),
        }
    }
}

/// `T^{g}(−s)^{a l} exp(ε Σ s^k t_k)` followed by `t_k ↦ t_k + δ/(k s^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexSpec {
    pub grade_shift: i64,
    pub factor_sign: i64,
    pub exp_sign: i64,
    pub subst_sign: i64,
}

/// Coefficients `A_k v` for `k` in a window, `A(s) = Σ A_k s^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSeries {
    pub lo: i64,
    pub hi: i64,
    pub coeffs: BTreeMap<i64, FockElement<Q>>,
}

impl FockSeries {
    pub fn coeff(&self, k: i64) -> Result<FockElement<Q>> {
        if k < self.lo || k > self.hi {
            return Err(Error::WindowTooSmall(format!("coefficient {k} outside [{}, {}]", self.lo, self.hi)));
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_default())
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> FockElement<Q>) -> Self {
        let coeffs = (lo..=hi).map(|k| (k, f(k))).filter(|(_, v)| !v.is_zero()).collect();
        FockSeries { lo, hi, coeffs }
    }
}

fn one_grade(spec: VertexSpec, k: i64, l: i64, p: &TPoly<Q>) -> TPoly<Q> {
    let shift = spec.factor_sign * l;
    let mut acc = TPoly::zero();
    for (d, qd) in shift_expand(p, spec.subst_sign) {
        let hh = h_scaled(k - shift + d as i64, spec.exp_sign);
        if !hh.is_zero() {
            acc.add_assign(&hh.mul(&qd));
        }
    }
    acc.scale_q(&sign(shift))
}

/// The coefficient of `s^k` in `field(s) v`.
pub fn vertex_coeff(field: Field, k: i64, v: &FockElement<Q>) -> FockElement<Q> {
    let spec = field.spec();
    let mut out = FockElement::zero();
    for (l, p) in v.components() {
        out.add_graded(l + spec.grade_shift, &one_grade(spec, k, l, p));
    }
    out
}

/// `field(s) v` on the inclusive window `[lo, hi]`.
pub fn vertex_apply(field: Field, v: &FockElement<Q>, window: (i64, i64)) -> FockSeries {
    FockSeries::from_fn(window.0, window.1, |k| vertex_coeff(field, k, v))
}

/// `M_{z−s}`: `T ↦ −sT`, `t_k ↦ t_k − 1/(k s^k)`.
pub fn fock_m_z_minus_s(v: &FockElement<Q>, window: (i64, i64)) -> FockSeries {
    vertex_apply(Field::MzMinusS, v, window)
}

/// `E_s`: multiplication by `T exp(Σ t_l s^l)`.
pub fn fock_e_s(v: &FockElement<Q>, window: (i64, i64)) -> FockSeries {
    vertex_apply(Field::E, v, window)
}

/// `B₊(s) = −Σ_l l t_l s^{l−1}`; coefficient of `s^k`.
pub fn b_plus_coeff(k: i64, v: &FockElement<Q>) -> FockElement<Q> {
    if k < 0 {
        return FockElement::zero();
    }
    let l = (k + 1) as usize;
    FockElement::t(l).mul(v).scale_q(&q(-(l as i64)))
}

/// `B₋(s) = Σ_l s^{−l−1} ∂_{t_l} + s^{−1}·grade`; coefficient of `s^k`.
pub fn b_minus_coeff(k: i64, v: &FockElement<Q>) -> FockElement<Q> {
    match k {
        -1 => v.grade_op(),
        k if k <= -2 => v.deriv((-k - 1) as usize),
        _ => FockElement::zero(),
    }
}

/// Which factor's parameter is expanded first in a composition `A(r)B(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    /// `s`, the parameter of the right factor.
    RightInner,
    /// `r`, the parameter of the left factor.
    LeftInner,
}

/// `A_K B_{K′} v` for all `(K, K′)` in the windows, read off one double
/// expansion of the composition `A(r)B(s)`.
///
/// On `𝒱_l` the composition is `R(r,s)·exp(ε_A Σ r^k t_k + ε_B Σ s^k t_k)`
/// followed by the joint shift, where `R = (−r)^{a_A(l+g_B)} (−s)^{a_B l}
/// (1 − s/r)^{−ε_B δ_A}` is expanded by [`iterated_laurent`] in the chosen order.
pub fn composed_coeffs(
    a: Field,
    b: Field,
    v: &FockElement<Q>,
    flag: Flag,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), FockElement<Q>>> {
    let (sa, sb) = (a.spec(), b.spec());
    let mut out: BTreeMap<(i64, i64), FockElement<Q>> = BTreeMap::new();
    for (l, p) in v.components() {
        let alpha = sa.factor_sign * (l + sb.grade_shift);
        let beta = sb.factor_sign * l;
        let c = sb.exp_sign * sa.subst_sign;
        let r = RatFunc::param("r");
        let s = RatFunc::param("s");
        let ratio = RatFunc::one().sub(&s.div(&r)?);
        let rr = r.neg().pow(alpha)?.mul(&s.neg().pow(beta)?).mul(&ratio.pow(-c)?);

        // Joint shift: first in x = 1/s, then each piece in y = 1/r.
        let mut qde: BTreeMap<(u32, u32), TPoly<Q>> = BTreeMap::new();
        for (e, qe) in shift_expand(p, sb.subst_sign) {
            for (d, qd) in shift_expand(&qe, sa.subst_sign) {
                qde.insert((d, e), qd);
            }
        }
        let dmax = qde.keys().map(|k| k.0 as i64).max().unwrap_or(0);
        let emax = qde.keys().map(|k| k.1 as i64).max().unwrap_or(0);
        let auto = i64::MIN / 4;
        let ds = match flag {
            Flag::RightInner => iterated_laurent(&rr, "s", "r", (auto, kpwin.1 + emax), (auto, kwin.1 + dmax))?,
            Flag::LeftInner => iterated_laurent(&rr, "r", "s", (auto, kwin.1 + dmax), (auto, kpwin.1 + emax))?,
        };
        let grade = l + sa.grade_shift + sb.grade_shift;
        for (&(i0, j0), cf) in &ds.terms {
            let (i, j) = match flag {
                Flag::RightInner => (j0, i0),
                Flag::LeftInner => (i0, j0),
            };
            let cq = cf.as_constant().ok_or_else(|| Error::PrecisionLoss("non-constant prefactor coefficient".into()))?;
            for kk in kwin.0..=kwin.1 {
                for kp in kpwin.0..=kpwin.1 {
                    let mut acc = TPoly::zero();
                    for (&(d, e), qd) in &qde {
                        let m = kk - i + d as i64;
                        let n = kp - j + e as i64;
                        if m < 0 || n < 0 {
                            continue;
                        }
                        let ha = h_scaled(m, sa.exp_sign);
                        let hb = h_scaled(n, sb.exp_sign);
                        if ha.is_zero() || hb.is_zero() {
                            continue;
                        }
                        acc.add_assign(&ha.mul(&hb).mul(qd));
                    }
                    if !acc.is_zero() {
                        out.entry((kk, kp)).or_default().add_graded(grade, &acc.scale_q(&cq));
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `[A_k, B_{k′}]_± v` by sequential coefficients.
pub fn bracket_seq(a: Field, k: i64, b: Field, kp: i64, v: &FockElement<Q>, anti: bool) -> FockElement<Q> {
    let ab = vertex_coeff(a, k, &vertex_coeff(b, kp, v));
    let ba = vertex_coeff(b, kp, &vertex_coeff(a, k, v));
    if anti {
        ab.add(&ba)
    } else {
        ab.sub(&ba)
    }
}

/// The pairs whose anticommutators are tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FermionPair {
    PsiPsi,
    PlusPlus,
    PsiPlus,
}

impl FermionPair {
    pub const ALL: [FermionPair; 3] = [FermionPair::PsiPsi, FermionPair::PlusPlus, FermionPair::PsiPlus];

    pub fn fields(self) -> (Field, Field) {
        match self {
            FermionPair::PsiPsi => (Field::Psi, Field::Psi),
            FermionPair::PlusPlus => (Field::PsiPlus, Field::PsiPlus),
            FermionPair::PsiPlus => (Field::Psi, Field::PsiPlus),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FermionPair::PsiPsi => "psi,psi",
            FermionPair::PlusPlus => "psi+,psi+",
            FermionPair::PsiPlus => "psi,psi+",
        }
    }
}

/// `[A_k, B_{k′}]₊ v` for every `(k, k′)` in the windows.
///
/// Each product is read from the double expansion of the corresponding
/// composition with the right factor's parameter inner. The sums are formed
/// in `h` coordinates and converted back at the end.
pub fn anticommutator_matrix(
    pair: FermionPair,
    v: &FockElement<Q>,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), FockElement<Q>>> {
    let (a, b) = pair.fields();
    let (z, den) = to_integral(&HElem::from_t(v));
    let ab = composed_coeffs_z(a, b, &z, Flag::RightInner, kwin, kpwin)?;
    let ba = composed_coeffs_z(b, a, &z, Flag::RightInner, kpwin, kwin)?;
    let mut out = BTreeMap::new();
    for k in kwin.0..=kwin.1 {
        for kp in kpwin.0..=kpwin.1 {
            let x = ab.get(&(k, kp)).cloned().unwrap_or_default();
            let y = ba.get(&(kp, k)).cloned().unwrap_or_default();
            out.insert((k, kp), from_integral(&x.add(&y), &den).to_t());
        }
    }
    Ok(out)
}

/// The same matrix from [`composed_coeffs`] in `t` coordinates; slow, kept as a cross-check.
pub fn anticommutator_matrix_t(
    pair: FermionPair,
    v: &FockElement<Q>,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), FockElement<Q>>> {
    let (a, b) = pair.fields();
    let ab = composed_coeffs(a, b, v, Flag::RightInner, kwin, kpwin)?;
    let ba = composed_coeffs(b, a, v, Flag::RightInner, kpwin, kwin)?;
    let mut out = BTreeMap::new();
    for k in kwin.0..=kwin.1 {
        for kp in kpwin.0..=kpwin.1 {
            let x = ab.get(&(k, kp)).cloned().unwrap_or_default();
            let y = ba.get(&(kp, k)).cloned().unwrap_or_default();
            out.insert((k, kp), x.add(&y));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anticommutator_routes_agree() {
        let v = f("T^-1*t1*t2 + 2*T");
        for p in FermionPair::ALL {
            assert_eq!(
                anticommutator_matrix(p, &v, (-3, 3), (-3, 3)).unwrap(),
                anticommutator_matrix_t(p, &v, (-3, 3), (-3, 3)).unwrap()
            );
        }
    }

    fn f(s: &str) -> FockElement<Q> {
        FockElement::parse(s).unwrap()
    }

    #[test]
    fn small_coefficients() {
        assert!(vertex_coeff(Field::Psi, -1, &f("1")).is_zero());
        assert_eq!(vertex_coeff(Field::Psi, 0, &f("1")), f("T"));
        assert_eq!(vertex_coeff(Field::PsiPlus, 0, &f("1")), f("T^-1"));
        assert_eq!(vertex_coeff(Field::Psi, -1, &f("T^-1")), f("-1"));
    }

    #[test]
    fn multiplication_operators() {
        let s = fock_m_z_minus_s(&f("T"), (-3, 3));
        assert_eq!(s.coeff(1).unwrap(), f("-T"));
        assert!(s.coeff(0).unwrap().is_zero());
        let s = fock_m_z_minus_s(&f("t2"), (-3, 3));
        assert_eq!(s.coeff(0).unwrap(), f("t2"));
        assert_eq!(s.coeff(-2).unwrap(), f("-1/2"));
        let e = fock_e_s(&f("1"), (0, 2));
        assert_eq!(e.coeff(0).unwrap(), f("T"));
        assert_eq!(e.coeff(1).unwrap(), f("T*t1"));
        assert_eq!(fock_e_s(&f("T"), (0, 1)).coeff(1).unwrap(), f("T^2*t1"));
        assert!(e.coeff(5).is_err());
    }

    #[test]
    fn composed_matches_sequential() {
        let v = f("T*t1 + T^-2*t2*t1 - 3");
        for (a, b) in [(Field::Psi, Field::PsiPlus), (Field::PsiPlus, Field::Psi), (Field::Psi, Field::Psi), (Field::Phi, Field::E)] {
            let m = composed_coeffs(a, b, &v, Flag::RightInner, (-3, 3), (-3, 3)).unwrap();
            for k in -3..=3 {
                for kp in -3..=3 {
                    let seq = vertex_coeff(a, k, &vertex_coeff(b, kp, &v));
                    assert_eq!(m.get(&(k, kp)).cloned().unwrap_or_default(), seq, "{a:?}{b:?} {k} {kp}");
                }
            }
        }
    }

    #[test]
    fn car_examples() {
        let m = anticommutator_matrix(FermionPair::PsiPlus, &f("1"), (0, 0), (-1, -1)).unwrap();
        assert_eq!(m[&(0, -1)], f("-1"));
        let m = anticommutator_matrix(FermionPair::PsiPsi, &f("t1*T"), (-2, 2), (-2, 2)).unwrap();
        assert!(m.values().all(|x| x.is_zero()));
        let m = anticommutator_matrix(FermionPair::PsiPlus, &f("T^2"), (2, 2), (1, 1)).unwrap();
        assert!(m[&(2, 1)].is_zero());
    }
}
