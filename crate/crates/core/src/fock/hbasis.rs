//! The same Fock space in the generators `h_n` of `exp(Σ t_k z^k) = Σ h_n z^n`.
//!
//! In these coordinates `exp(Σ s^k t_k)` is `Σ h_n s^n` and the shift
//! `t_k ↦ t_k + δ/(k s^k)` multiplies `Σ h_n z^n` by `(1 − z/s)^{−δ}`, i.e.
//! `h_n ↦ h_n − h_{n−1}/s` for `δ = −1` and `h_n ↦ Σ_j h_{n−j} s^{−j}` for `δ = 1`.
//! Both are linear in the generators, which keeps battery runs cheap.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;

use crate::arith::{iterated_laurent, q, qf, RatFunc, Ring, Q, Z};
use crate::error::{Error, Result};

use super::element::{Exps, FockElement, TPoly};
use super::hpoly::h;
use rustc_hash::FxHashMap;

use super::gcoef::Flavor;
use super::zpoly::{exp_series_z, shift_key, HKey, ZPoly, ZVec};
use super::vertex::{Field, Flag};

/// A Fock vector whose polynomial variables are `h_1, h_2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HElem(pub FockElement<Q>);

fn e_minus_cache() -> &'static RwLock<Vec<TPoly<Q>>> {
    static C: OnceLock<RwLock<Vec<TPoly<Q>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(vec![TPoly::one()]))
}

/// Coefficient of `z^m` in `1/Σ h_n z^n`, as a polynomial in the `h`.
pub fn e_minus(m: i64) -> TPoly<Q> {
    if m < 0 {
        return TPoly::zero();
    }
    let m = m as usize;
    if let Some(p) = e_minus_cache().read().expect("lock").get(m) {
        return p.clone();
    }
    let mut w = e_minus_cache().write().expect("lock");
    while w.len() <= m {
        let n = w.len();
        let mut acc = TPoly::zero();
        for i in 1..=n {
            acc.add_assign(&TPoly::t(i).mul(&w[n - i]));
        }
        w.push(acc.neg());
    }
    w[m].clone()
}

fn mul_h<C: Ring>(p: &TPoly<C>, n: i64) -> TPoly<C> {
    match n {
        n if n < 0 => TPoly::zero(),
        0 => p.clone(),
        n => p.mul_var(n as usize),
    }
}

/// `Σ_d X_{n+d} c_d` for `n` in `lo..=hi`, where `Σ X_n s^n = exp(ε Σ s^k t_k)`.
///
/// For `ε = −1` the coefficients come from dividing `Σ_d c_d s^{−d}` by
/// `Σ h_i s^i`, so only multiplications by single generators occur.
pub fn exp_series<C: Ring>(eps: i64, c: &BTreeMap<u32, TPoly<C>>, lo: i64, hi: i64) -> Vec<TPoly<C>> {
    if hi < lo {
        return Vec::new();
    }
    match eps {
        0 => (lo..=hi).map(|n| if n <= 0 { c.get(&((-n) as u32)).cloned().unwrap_or_default() } else { TPoly::zero() }).collect(),
        1 => (lo..=hi)
            .map(|n| {
                let mut acc = TPoly::zero();
                for (&d, cd) in c {
                    acc.add_assign(&mul_h(cd, n + d as i64));
                }
                acc
            })
            .collect(),
        _ => {
            let dmax = c.keys().next_back().map(|&d| d as i64).unwrap_or(0);
            let start = -dmax;
            let mut y: Vec<TPoly<C>> = Vec::new();
            for j in start..=hi {
                let mut acc = if j <= 0 { c.get(&((-j) as u32)).cloned().unwrap_or_default() } else { TPoly::zero() };
                for i in 1..=(j - start) {
                    let prev = &y[(j - i - start) as usize];
                    if !prev.is_zero() {
                        acc = acc.sub(&mul_h(prev, i));
                    }
                }
                y.push(acc);
            }
            (lo..=hi).map(|n| if n < start { TPoly::zero() } else { y[(n - start) as usize].clone() }).collect()
        }
    }
}

fn power_sums(kmax: usize) -> Vec<TPoly<Q>> {
    // p_k = k h_k − Σ_{i<k} p_i h_{k−i}, in the h variables.
    let mut p = vec![TPoly::zero()];
    for k in 1..=kmax {
        let mut acc = TPoly::t(k).scale_q(&q(k as i64));
        for i in 1..k {
            acc = acc.sub(&p[i].mul(&TPoly::t(k - i)));
        }
        p.push(acc);
    }
    p
}

/// Rewrite a `t`-polynomial in the `h` variables, `t_k = p_k/k`.
pub fn t_to_h(p: &TPoly<Q>) -> TPoly<Q> {
    let ps = power_sums(p.max_var());
    let mut out = TPoly::zero();
    for (e, c) in p.terms() {
        let mut m = TPoly::constant(c.clone());
        for (i, x) in e.iter().enumerate() {
            let tk = ps[i + 1].scale_q(&qf(1, i as i64 + 1));
            for _ in 0..*x {
                m = m.mul(&tk);
            }
        }
        out.add_assign(&m);
    }
    out
}

/// Rewrite an `h`-polynomial in the `t` variables.
pub fn h_to_t(p: &TPoly<Q>) -> TPoly<Q> {
    let mut out = TPoly::zero();
    for (e, c) in p.terms() {
        let mut m = TPoly::constant(c.clone());
        for (i, x) in e.iter().enumerate() {
            let hk = h(i as i64 + 1);
            for _ in 0..*x {
                m = m.mul(&hk);
            }
        }
        out.add_assign(&m);
    }
    out
}

impl HElem {
    pub fn from_t(v: &FockElement<Q>) -> Self {
        let mut out = FockElement::zero();
        for (l, p) in v.components() {
            out.add_graded(l, &t_to_h(p));
        }
        HElem(out)
    }

    pub fn to_t(&self) -> FockElement<Q> {
        let mut out = FockElement::zero();
        for (l, p) in self.0.components() {
            out.add_graded(l, &h_to_t(p));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        HElem(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        HElem(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> Self {
        HElem(self.0.neg())
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        HElem(self.0.scale_q(c))
    }
}

/// `(D·v, D)` with `D` the least common denominator of `v`.
pub fn to_integral(v: &HElem) -> (ZVec, Q) {
    let mut den = num_bigint::BigInt::from(1);
    for (_, p) in v.0.components() {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
    }
    let den = Q::from_integer(den);
    let z = v.0.map(|c| Z::from_q(&(c * &den)).expect("coefficient too large for the integer path"));
    (ZVec::from_fock(&z), den)
}

pub fn from_integral(v: &ZVec, den: &Q) -> HElem {
    HElem(v.to_fock().map(|c| c.to_q() / den))
}

/// `h_n ↦ h_n + δ-shift` applied to one monomial, as `Σ_d q_d x^d`.
fn shift_monomial<C: Ring>(e: &Exps, delta: i64) -> Vec<(u32, TPoly<C>)> {
    let mut acc: BTreeMap<u32, TPoly<C>> = BTreeMap::new();
    acc.insert(0, TPoly::one());
    if delta == 0 {
        return vec![(0, TPoly::monomial(e.clone(), C::one()))];
    }
    for (i, &x) in e.iter().enumerate() {
        let n = i + 1;
        // Image of h_n: Σ_j c_j x^j h_{n−j}.
        let image: Vec<(u32, TPoly<C>)> = if delta < 0 {
            let low = if n == 1 { TPoly::one() } else { TPoly::t(n - 1) };
            vec![(0, TPoly::t(n)), (1, low.neg())]
        } else {
            (0..=n).map(|j| (j as u32, if j == n { TPoly::one() } else { TPoly::t(n - j) })).collect()
        };
        for _ in 0..x {
            let mut next: BTreeMap<u32, TPoly<C>> = BTreeMap::new();
            for (d, p) in &acc {
                for (j, f) in &image {
                    next.entry(d + j).or_default().add_assign(&p.mul(f));
                }
            }
            acc = next;
        }
    }
    acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Memoized coefficient operators on `h`-monomials over a window of `k`.
///
/// Monomials are interned so memo keys are small and `Copy`.
pub struct HEngine {
    lo: i64,
    hi: i64,
    ids: FxHashMap<HKey, u32>,
    keys: Vec<HKey>,
    memo: FxHashMap<(Field, i64, u32), Vec<ZVec>>,
    outside: FxHashMap<(Field, i64, i64, u32), ZVec>,
    gmemo: FxHashMap<(bool, i64, i64, i64, u32), ZVec>,
    stored: usize,
    budget: usize,
}

impl Default for HEngine {
    fn default() -> Self {
        Self::new((-12, 12))
    }
}

impl HEngine {
    pub fn new(window: (i64, i64)) -> Self {
        HEngine {
            lo: window.0,
            hi: window.1,
            ids: FxHashMap::default(),
            keys: Vec::new(),
            memo: FxHashMap::default(),
            outside: FxHashMap::default(),
            gmemo: FxHashMap::default(),
            stored: 0,
            budget: 6_000_000,
        }
    }

    /// Cap on memoized terms; the memo is dropped when it grows past this.
    pub fn with_budget(mut self, terms: usize) -> Self {
        self.budget = terms;
        self
    }

    fn trim(&mut self) {
        if self.stored > self.budget {
            self.clear();
        }
    }

    fn intern(&mut self, k: HKey) -> u32 {
        if let Some(&id) = self.ids.get(&k) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.keys.push(k);
        self.ids.insert(k, id);
        id
    }

    fn series(field: Field, l: i64, k: &HKey, lo: i64, hi: i64) -> Vec<ZVec> {
        let spec = field.spec();
        let shift = spec.factor_sign * l;
        let qd = shift_key(k, spec.subst_sign);
        let odd = shift.rem_euclid(2) == 1;
        exp_series_z(spec.exp_sign, &qd, lo - shift, hi - shift)
            .into_iter()
            .map(|p| ZVec::graded(l + spec.grade_shift, if odd { p.neg() } else { p }))
            .collect()
    }

    fn ensure_coeff(&mut self, field: Field, k: i64, l: i64, id: u32) {
        if k < self.lo || k > self.hi {
            if !self.outside.contains_key(&(field, k, l, id)) {
                let v = Self::series(field, l, &self.keys[id as usize], k, k).pop().unwrap_or_default();
                self.stored += v.size();
                self.outside.insert((field, k, l, id), v);
            }
        } else if !self.memo.contains_key(&(field, l, id)) {
            let row = Self::series(field, l, &self.keys[id as usize], self.lo, self.hi);
            self.stored += row.iter().map(ZVec::size).sum::<usize>();
            self.memo.insert((field, l, id), row);
        }
    }

    fn cached_coeff(&self, field: Field, k: i64, l: i64, id: u32) -> &ZVec {
        if k < self.lo || k > self.hi {
            &self.outside[&(field, k, l, id)]
        } else {
            &self.memo[&(field, l, id)][(k - self.lo) as usize]
        }
    }

    /// Interned `(grade, monomial id, coefficient)` triples of `v`.
    fn terms_of(&mut self, v: &ZVec) -> Vec<(i64, u32, i128)> {
        let mut out = Vec::with_capacity(v.size());
        for (&l, p) in &v.0 {
            for (&k, &c) in &p.0 {
                let id = self.intern(k);
                out.push((l, id, c));
            }
        }
        out
    }

    /// The coefficient of `s^k` in `field(s) v`, integral version.
    pub fn coeff_z(&mut self, field: Field, k: i64, v: &ZVec) -> ZVec {
        self.trim();
        let terms = self.terms_of(v);
        let mut out = ZVec::zero();
        for &(l, id, c) in &terms {
            self.ensure_coeff(field, k, l, id);
            out.add_scaled(self.cached_coeff(field, k, l, id), c);
        }
        out
    }

    /// The coefficient of `s^k` in `field(s) v`.
    pub fn coeff(&mut self, field: Field, k: i64, v: &HElem) -> HElem {
        let (z, den) = to_integral(v);
        from_integral(&self.coeff_z(field, k, &z), &den)
    }

    /// `A_k (B_{k′} v)`, integral version.
    pub fn product_z(&mut self, a: Field, k: i64, b: Field, kp: i64, v: &ZVec) -> ZVec {
        let w = self.coeff_z(b, kp, v);
        self.coeff_z(a, k, &w)
    }

    /// `A_k (B_{k′} v)`.
    pub fn product(&mut self, a: Field, k: i64, b: Field, kp: i64, v: &HElem) -> HElem {
        let (z, den) = to_integral(v);
        from_integral(&self.product_z(a, k, b, kp, &z), &den)
    }

    fn ensure_g(&mut self, greater: bool, n: i64, m: i64, l: i64, id: u32) {
        let key = (greater, n, m, l, id);
        if self.gmemo.contains_key(&key) {
            return;
        }
        let v = ZVec::graded(l, ZPoly::monomial(self.keys[id as usize], 1));
        let out = if greater {
            self.product_z(Field::Psi, n, Field::PsiPlus, m, &v)
        } else {
            self.product_z(Field::PsiPlus, m, Field::Psi, n, &v).neg()
        };
        self.stored += out.size();
        self.gmemo.insert(key, out);
    }

    /// `𝒢^f_{nm} v`, integral version.
    pub fn g_z(&mut self, flavor: Flavor, n: i64, m: i64, v: &ZVec) -> ZVec {
        let greater = match flavor {
            Flavor::Greater => true,
            Flavor::Less => false,
            Flavor::Smooth => n >= 0,
        };
        self.trim();
        let terms = self.terms_of(v);
        let mut out = ZVec::zero();
        for &(l, id, c) in &terms {
            self.ensure_g(greater, n, m, l, id);
            out.add_scaled(&self.gmemo[&(greater, n, m, l, id)], c);
        }
        out
    }

    /// `𝒢^f_{nm} v`.
    pub fn g(&mut self, flavor: Flavor, n: i64, m: i64, v: &HElem) -> HElem {
        let (z, den) = to_integral(v);
        from_integral(&self.g_z(flavor, n, m, &z), &den)
    }

    /// `X^f_{ij} v = 𝒢^f_{i,−j−1} v`.
    pub fn x(&mut self, flavor: Flavor, i: i64, j: i64, v: &HElem) -> HElem {
        self.g(flavor, i, -j - 1, v)
    }

    /// Drop memoized images, e.g. between batteries.
    pub fn clear(&mut self) {
        self.gmemo.clear();
        self.memo.clear();
        self.outside.clear();
        self.stored = 0;
    }
}

/// `A_K B_{K′} v` from one double expansion of `A(r)B(s)` in `h` coordinates.
pub fn composed_coeffs_h(
    a: Field,
    b: Field,
    v: &HElem,
    flag: Flag,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), HElem>> {
    let (sa, sb) = (a.spec(), b.spec());
    let mut out: BTreeMap<(i64, i64), FockElement<Q>> = BTreeMap::new();
    for (l, p) in v.0.components() {
        let alpha = sa.factor_sign * (l + sb.grade_shift);
        let beta = sb.factor_sign * l;
        let c = sb.exp_sign * sa.subst_sign;
        let r = RatFunc::param("r");
        let s = RatFunc::param("s");
        let ratio = RatFunc::one().sub(&s.div(&r)?);
        let rr = r.neg().pow(alpha)?.mul(&s.neg().pow(beta)?).mul(&ratio.pow(-c)?);

        // Joint shift, in x = 1/s then y = 1/r, monomial by monomial.
        let mut qde: BTreeMap<(u32, u32), TPoly<Q>> = BTreeMap::new();
        for (e, coef) in p.terms() {
            for (ex, qe) in shift_monomial(e, sb.subst_sign) {
                for (e2, c2) in qe.terms() {
                    for (dy, qd) in shift_monomial(e2, sa.subst_sign) {
                        qde.entry((dy, ex)).or_default().add_assign(&qd.scale_q(&(c2 * coef)));
                    }
                }
            }
        }
        qde.retain(|_, p| !p.is_zero());
        let dmax = qde.keys().map(|k| k.0 as i64).max().unwrap_or(0);
        let emax = qde.keys().map(|k| k.1 as i64).max().unwrap_or(0);
        let auto = i64::MIN / 4;
        let ds = match flag {
            Flag::RightInner => iterated_laurent(&rr, "s", "r", (auto, kpwin.1 + emax), (auto, kwin.1 + dmax))?,
            Flag::LeftInner => iterated_laurent(&rr, "r", "s", (auto, kwin.1 + dmax), (auto, kpwin.1 + emax))?,
        };
        let grade = l + sa.grade_shift + sb.grade_shift;
        let mut terms: Vec<(i64, i64, Q)> = Vec::new();
        for (&(i0, j0), cf) in &ds.terms {
            let (i, j) = match flag {
                Flag::RightInner => (j0, i0),
                Flag::LeftInner => (i0, j0),
            };
            let cq = cf.as_constant().ok_or_else(|| Error::PrecisionLoss("non-constant prefactor coefficient".into()))?;
            terms.push((i, j, cq));
        }
        if terms.is_empty() {
            continue;
        }
        let (imin, imax) = (terms.iter().map(|t| t.0).min().unwrap(), terms.iter().map(|t| t.0).max().unwrap());
        let (jmin, jmax) = (terms.iter().map(|t| t.1).min().unwrap(), terms.iter().map(|t| t.1).max().unwrap());
        let (xlo, xhi) = (kwin.0 - imax, kwin.1 - imin);
        let (ylo, yhi) = (kpwin.0 - jmax, kpwin.1 - jmin);
        // W_d(y) = Σ_e q_{de} X^B_{y+e}, then G(x, y) = Σ_d X^A_{x+d} W_d(y).
        let mut by_d: BTreeMap<u32, BTreeMap<u32, TPoly<Q>>> = BTreeMap::new();
        for ((d, e), p) in qde {
            by_d.entry(d).or_default().insert(e, p);
        }
        let w: BTreeMap<u32, Vec<TPoly<Q>>> =
            by_d.iter().map(|(&d, ce)| (d, exp_series(sb.exp_sign, ce, ylo, yhi))).collect();
        let mut g: Vec<Vec<TPoly<Q>>> = Vec::new();
        for y in ylo..=yhi {
            let cd: BTreeMap<u32, TPoly<Q>> = w
                .iter()
                .map(|(&d, col)| (d, col[(y - ylo) as usize].clone()))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            g.push(exp_series(sa.exp_sign, &cd, xlo, xhi));
        }
        for kk in kwin.0..=kwin.1 {
            for kp in kpwin.0..=kpwin.1 {
                let mut acc = TPoly::zero();
                for (i, j, cq) in &terms {
                    let (x, y) = (kk - i, kp - j);
                    let gxy = &g[(y - ylo) as usize][(x - xlo) as usize];
                    if !gxy.is_zero() {
                        acc.add_assign(&gxy.scale_q(cq));
                    }
                }
                if !acc.is_zero() {
                    out.entry((kk, kp)).or_default().add_graded(grade, &acc);
                }
            }
        }
    }
    Ok(out.into_iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, HElem(v))).collect())
}

/// Integral form of [`composed_coeffs_h`]; the prefactor must expand with integer coefficients.
pub fn composed_coeffs_z(
    a: Field,
    b: Field,
    v: &ZVec,
    flag: Flag,
    kwin: (i64, i64),
    kpwin: (i64, i64),
) -> Result<BTreeMap<(i64, i64), ZVec>> {
    let (sa, sb) = (a.spec(), b.spec());
    let mut out: BTreeMap<(i64, i64), ZVec> = BTreeMap::new();
    for (&l, p) in &v.0 {
        let alpha = sa.factor_sign * (l + sb.grade_shift);
        let beta = sb.factor_sign * l;
        let c = sb.exp_sign * sa.subst_sign;
        let r = RatFunc::param("r");
        let s = RatFunc::param("s");
        let ratio = RatFunc::one().sub(&s.div(&r)?);
        let rr = r.neg().pow(alpha)?.mul(&s.neg().pow(beta)?).mul(&ratio.pow(-c)?);

        let mut qde: BTreeMap<(u32, u32), ZPoly> = BTreeMap::new();
        for (k, &coef) in &p.0 {
            for (ex, qe) in shift_key(k, sb.subst_sign) {
                for (k2, &c2) in &qe.0 {
                    for (dy, qd) in shift_key(k2, sa.subst_sign) {
                        qde.entry((dy, ex)).or_default().add_scaled(&qd, c2.checked_mul(coef).expect("integer overflow"));
                    }
                }
            }
        }
        qde.retain(|_, p| !p.is_zero());
        let dmax = qde.keys().map(|k| k.0 as i64).max().unwrap_or(0);
        let emax = qde.keys().map(|k| k.1 as i64).max().unwrap_or(0);
        let auto = i64::MIN / 4;
        let ds = match flag {
            Flag::RightInner => iterated_laurent(&rr, "s", "r", (auto, kpwin.1 + emax), (auto, kwin.1 + dmax))?,
            Flag::LeftInner => iterated_laurent(&rr, "r", "s", (auto, kwin.1 + dmax), (auto, kpwin.1 + emax))?,
        };
        let grade = l + sa.grade_shift + sb.grade_shift;
        let mut terms: Vec<(i64, i64, i128)> = Vec::new();
        for (&(i0, j0), cf) in &ds.terms {
            let (i, j) = match flag {
                Flag::RightInner => (j0, i0),
                Flag::LeftInner => (i0, j0),
            };
            let cq = cf.as_constant().ok_or_else(|| Error::PrecisionLoss("non-constant prefactor coefficient".into()))?;
            let cz = Z::from_q(&cq).ok_or_else(|| Error::PrecisionLoss("non-integral prefactor coefficient".into()))?;
            terms.push((i, j, cz.0));
        }
        if terms.is_empty() {
            continue;
        }
        let (imin, imax) = (terms.iter().map(|t| t.0).min().unwrap(), terms.iter().map(|t| t.0).max().unwrap());
        let (jmin, jmax) = (terms.iter().map(|t| t.1).min().unwrap(), terms.iter().map(|t| t.1).max().unwrap());
        let (xlo, xhi) = (kwin.0 - imax, kwin.1 - imin);
        let (ylo, yhi) = (kpwin.0 - jmax, kpwin.1 - jmin);
        let mut by_d: BTreeMap<u32, BTreeMap<u32, ZPoly>> = BTreeMap::new();
        for ((d, e), p) in qde {
            by_d.entry(d).or_default().insert(e, p);
        }
        let w: BTreeMap<u32, Vec<ZPoly>> =
            by_d.iter().map(|(&d, ce)| (d, exp_series_z(sb.exp_sign, ce, ylo, yhi))).collect();
        let mut g: Vec<Vec<ZPoly>> = Vec::new();
        for y in ylo..=yhi {
            let cd: BTreeMap<u32, ZPoly> = w
                .iter()
                .map(|(&d, col)| (d, col[(y - ylo) as usize].clone()))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            g.push(exp_series_z(sa.exp_sign, &cd, xlo, xhi));
        }
        for kk in kwin.0..=kwin.1 {
            for kp in kpwin.0..=kpwin.1 {
                let mut acc = ZPoly::zero();
                for &(i, j, cz) in &terms {
                    let (x, y) = (kk - i, kp - j);
                    let gxy = &g[(y - ylo) as usize][(x - xlo) as usize];
                    if !gxy.is_zero() {
                        acc.add_scaled(gxy, cz);
                    }
                }
                if !acc.is_zero() {
                    out.entry((kk, kp)).or_default().add_scaled(&ZVec::graded(grade, acc), 1);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::vertex::{composed_coeffs, vertex_coeff};

    fn f(s: &str) -> FockElement<Q> {
        FockElement::parse(s).unwrap()
    }

    #[test]
    fn integral_composition_matches() {
        let v = HElem::from_t(&f("T*t1^2 - 3*T^-1*t2 + 1/2"));
        let (z, den) = to_integral(&v);
        for (a, b) in [(Field::Psi, Field::PsiPlus), (Field::PsiPlus, Field::Psi), (Field::Psi, Field::Psi)] {
            let qa = composed_coeffs_h(a, b, &v, Flag::RightInner, (-3, 3), (-3, 3)).unwrap();
            let za = composed_coeffs_z(a, b, &z, Flag::RightInner, (-3, 3), (-3, 3)).unwrap();
            assert_eq!(qa.len(), za.len());
            for (k, x) in &qa {
                assert_eq!(*x, from_integral(&za[k], &den));
            }
        }
    }

    #[test]
    fn division_matches_inverse_series() {
        let mut c = BTreeMap::new();
        c.insert(0, TPoly::t(2));
        c.insert(2, TPoly::t(1).scale_q(&q(-3)));
        let got = exp_series(-1, &c, -3, 6);
        for (idx, n) in (-3..=6).enumerate() {
            let mut want = TPoly::zero();
            for (&d, cd) in &c {
                want.add_assign(&e_minus(n + d as i64).mul(cd));
            }
            assert_eq!(got[idx], want, "{n}");
        }
    }

    #[test]
    fn coordinate_roundtrip() {
        let v = f("T*t1^2*t3 - 2*t2 + T^-1*t4");
        assert_eq!(HElem::from_t(&v).to_t(), v);
        assert_eq!(t_to_h(&TPoly::t(2)), TPoly::t(2).sub(&TPoly::t(1).mul(&TPoly::t(1)).scale_q(&qf(1, 2))));
    }

    #[test]
    fn engine_matches_direct() {
        let v = f("T^2*t1*t3 + t2^2 - T^-1*t1");
        let hv = HElem::from_t(&v);
        let mut eng = HEngine::new((-4, 4));
        for field in Field::ALL {
            for k in -4..=4 {
                assert_eq!(eng.coeff(field, k, &hv).to_t(), vertex_coeff(field, k, &v), "{field:?} {k}");
            }
        }
    }

    #[test]
    fn engine_g_matches_direct() {
        use crate::fock::gcoef::g_coefficient;
        let v = f("T*t1^2 - t2 + T^-2");
        let hv = HElem::from_t(&v);
        let mut eng = HEngine::new((-3, 3));
        for fl in [Flavor::Less, Flavor::Greater, Flavor::Smooth] {
            for n in -4..=4 {
                for m in -4..=4 {
                    assert_eq!(eng.g(fl, n, m, &hv).to_t(), g_coefficient(n, m, fl, &v), "{fl:?} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn composed_h_matches_t() {
        let v = f("T*t2 - 3*T^-1*t1^2");
        let hv = HElem::from_t(&v);
        for flag in [Flag::RightInner, Flag::LeftInner] {
            let a = composed_coeffs(Field::Psi, Field::PsiPlus, &v, flag, (-2, 2), (-2, 2)).unwrap();
            let b = composed_coeffs_h(Field::Psi, Field::PsiPlus, &hv, flag, (-2, 2), (-2, 2)).unwrap();
            let b: BTreeMap<_, _> = b.into_iter().map(|(k, x)| (k, x.to_t())).collect();
            assert_eq!(a, b);
        }
    }
}
