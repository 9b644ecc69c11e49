//! Compact integral polynomials in `h_1, …, h_N` for the hot loops of [`super::HEngine`].

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::arith::Z;

use super::element::{FockElement, TPoly};

/// Largest generator index the compact form holds.
pub const NVARS: usize = 48;

/// Exponents of `h_1..h_NVARS`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HKey(pub [u8; NVARS]);

impl HKey {
    pub const ONE: HKey = HKey([0; NVARS]);

    pub fn from_exps(e: &[u32]) -> HKey {
        assert!(e.len() <= NVARS, "h_{} exceeds the compact range", e.len());
        let mut k = [0u8; NVARS];
        for (i, &x) in e.iter().enumerate() {
            k[i] = u8::try_from(x).expect("exponent fits in u8");
        }
        HKey(k)
    }

    pub fn to_exps(&self) -> Vec<u32> {
        let len = self.0.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
        self.0[..len].iter().map(|&x| x as u32).collect()
    }

    fn bump(mut self, n: usize) -> HKey {
        assert!(n >= 1 && n <= NVARS, "h_{n} exceeds the compact range");
        self.0[n - 1] = self.0[n - 1].checked_add(1).expect("exponent overflow");
        self
    }
}

/// Sparse polynomial with `i128` coefficients; zero terms are never stored.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ZPoly(pub FxHashMap<HKey, i128>);

impl std::fmt::Debug for HKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.to_exps())
    }
}

fn add_i(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow")
}

fn mul_i(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow")
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly(FxHashMap::default())
    }

    pub fn one() -> Self {
        Self::monomial(HKey::ONE, 1)
    }

    pub fn monomial(k: HKey, c: i128) -> Self {
        let mut p = Self::zero();
        if c != 0 {
            p.0.insert(k, c);
        }
        p
    }

    /// The generator `h_n`, with `h_0 = 1`.
    pub fn h(n: usize) -> Self {
        if n == 0 {
            Self::one()
        } else {
            Self::monomial(HKey::ONE.bump(n), 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, k: HKey, c: i128) {
        if c == 0 {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.0.entry(k) {
            Entry::Occupied(mut o) => {
                let x = add_i(*o.get(), c);
                if x == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = x;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `self += c·o`.
    pub fn add_scaled(&mut self, o: &Self, c: i128) {
        for (&k, &x) in &o.0 {
            self.add_term(k, mul_i(x, c));
        }
    }

    pub fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|(&k, &c)| (k, -c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (k1, &c1) in &self.0 {
            for (k2, &c2) in &o.0 {
                let mut k = *k1;
                for i in 0..NVARS {
                    k.0[i] = k.0[i].checked_add(k2.0[i]).expect("exponent overflow");
                }
                r.add_term(k, mul_i(c1, c2));
            }
        }
        r
    }

    /// Multiply by `h_n`; zero for `n < 0`.
    pub fn mul_h(&self, n: i64) -> Self {
        match n {
            n if n < 0 => Self::zero(),
            0 => self.clone(),
            n => ZPoly(self.0.iter().map(|(&k, &c)| (k.bump(n as usize), c)).collect()),
        }
    }

    pub fn from_tpoly(p: &TPoly<Z>) -> Self {
        let mut r = Self::zero();
        for (e, c) in p.terms() {
            r.add_term(HKey::from_exps(e), c.0);
        }
        r
    }

    pub fn to_tpoly(&self) -> TPoly<Z> {
        let mut r = TPoly::zero();
        for (k, &c) in &self.0 {
            r.add_term(&k.to_exps(), &Z(c));
        }
        r
    }
}

/// Image of `Π h_n^{e_n}` under `h_n ↦ h_n − x h_{n−1}` (`δ = −1`) or
/// `h_n ↦ Σ_j x^j h_{n−j}` (`δ = 1`), as coefficients of `x^d`.
pub fn shift_key(k: &HKey, delta: i64) -> BTreeMap<u32, ZPoly> {
    let mut acc: BTreeMap<u32, ZPoly> = BTreeMap::new();
    acc.insert(0, ZPoly::monomial(HKey::ONE, 1));
    if delta == 0 {
        acc.insert(0, ZPoly::monomial(*k, 1));
        return acc;
    }
    for (i, &x) in k.0.iter().enumerate() {
        let n = i as i64 + 1;
        let image: Vec<(u32, i64, i128)> =
            if delta < 0 { vec![(0, n, 1), (1, n - 1, -1)] } else { (0..=n).map(|j| (j as u32, n - j, 1)).collect() };
        for _ in 0..x {
            let mut next: BTreeMap<u32, ZPoly> = BTreeMap::new();
            for (d, p) in &acc {
                for &(j, var, c) in &image {
                    next.entry(d + j).or_default().add_scaled(&p.mul_h(var), c);
                }
            }
            next.retain(|_, p| !p.is_zero());
            acc = next;
        }
    }
    acc
}

/// `Σ_d X_{n+d} c_d` for `n` in `lo..=hi` with `Σ X_n s^n = exp(ε Σ s^k t_k)`;
/// `ε = −1` divides by `Σ h_i s^i` instead of expanding the inverse.
pub fn exp_series_z(eps: i64, c: &BTreeMap<u32, ZPoly>, lo: i64, hi: i64) -> Vec<ZPoly> {
    if hi < lo {
        return Vec::new();
    }
    let at = |d: i64| if d >= 0 { c.get(&(d as u32)).cloned().unwrap_or_default() } else { ZPoly::zero() };
    match eps {
        0 => (lo..=hi).map(|n| at(-n)).collect(),
        1 => (lo..=hi)
            .map(|n| {
                let mut acc = ZPoly::zero();
                for (&d, cd) in c {
                    acc.add_scaled(&cd.mul_h(n + d as i64), 1);
                }
                acc
            })
            .collect(),
        _ => {
            let start = -c.keys().next_back().map(|&d| d as i64).unwrap_or(0);
            let mut y: Vec<ZPoly> = Vec::new();
            for j in start..=hi {
                let mut acc = at(-j);
                for i in 1..=(j - start) {
                    let prev = &y[(j - i - start) as usize];
                    if !prev.is_zero() {
                        acc.add_scaled(&prev.mul_h(i), -1);
                    }
                }
                y.push(acc);
            }
            (lo..=hi).map(|n| if n < start { ZPoly::zero() } else { y[(n - start) as usize].clone() }).collect()
        }
    }
}

/// Integral Fock vector with compact components.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ZVec(pub BTreeMap<i64, ZPoly>);

impl ZVec {
    pub fn zero() -> Self {
        ZVec(BTreeMap::new())
    }

    pub fn graded(l: i64, p: ZPoly) -> Self {
        let mut v = Self::zero();
        if !p.is_zero() {
            v.0.insert(l, p);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_scaled(&mut self, o: &Self, c: i128) {
        for (l, p) in &o.0 {
            let e = self.0.entry(*l).or_default();
            e.add_scaled(p, c);
            if e.is_zero() {
                self.0.remove(l);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, 1);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, -1);
        r
    }

    pub fn neg(&self) -> Self {
        ZVec(self.0.iter().map(|(l, p)| (*l, p.neg())).collect())
    }

    pub fn scale(&self, c: i128) -> Self {
        let mut r = Self::zero();
        r.add_scaled(self, c);
        r
    }

    /// Number of stored terms.
    pub fn size(&self) -> usize {
        self.0.values().map(ZPoly::len).sum()
    }

    pub fn from_fock(v: &FockElement<Z>) -> Self {
        let mut r = Self::zero();
        for (l, p) in v.components() {
            let z = ZPoly::from_tpoly(p);
            if !z.is_zero() {
                r.0.insert(l, z);
            }
        }
        r
    }

    pub fn to_fock(&self) -> FockElement<Z> {
        let mut r = FockElement::zero();
        for (l, p) in &self.0 {
            r.add_graded(*l, &p.to_tpoly());
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_roundtrip_and_products() {
        let e = vec![2, 0, 1];
        assert_eq!(HKey::from_exps(&e).to_exps(), e);
        let p = ZPoly::h(1).mul_h(2);
        let mut q = ZPoly::h(2);
        q.add_term(HKey::ONE, 3);
        let prod = p.mul(&q);
        assert_eq!(prod.len(), 2);
        assert!(p.sub_self_is_zero());
    }

    impl ZPoly {
        fn sub_self_is_zero(&self) -> bool {
            let mut r = self.clone();
            r.add_scaled(self, -1);
            r.is_zero()
        }
    }
}
