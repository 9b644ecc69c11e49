//! Complete homogeneous pieces of `exp(Σ t_j z^j)` and the shift `t_k ↦ t_k + δ x^k/k`.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use crate::arith::{binomial, q, qf, Ring, Q};

use super::element::{Exps, TPoly};

fn cache() -> &'static RwLock<Vec<TPoly<Q>>> {
    static H: OnceLock<RwLock<Vec<TPoly<Q>>>> = OnceLock::new();
    H.get_or_init(|| RwLock::new(vec![TPoly::one()]))
}

/// `h_n` with `Σ_n h_n z^n = exp(Σ_j t_j z^j)`; zero for negative `n`.
///
/// Built from `n h_n = Σ_j j t_j h_{n−j}`.
pub fn h(n: i64) -> TPoly<Q> {
    if n < 0 {
        return TPoly::zero();
    }
    let n = n as usize;
    if let Some(p) = cache().read().expect("cache lock").get(n) {
        return p.clone();
    }
    let mut w = cache().write().expect("cache lock");
    while w.len() <= n {
        let m = w.len();
        let mut acc = TPoly::zero();
        for j in 1..=m {
            acc.add_assign(&TPoly::t(j).mul(&w[m - j]).scale(&q(j as i64)));
        }
        w.push(acc.scale(&qf(1, m as i64)));
    }
    w[n].clone()
}

/// `h_n(c·t)`: each monomial picks up `c^{degree}`.
pub fn h_scaled(n: i64, c: i64) -> TPoly<Q> {
    if c == 0 {
        return if n == 0 { TPoly::one() } else { TPoly::zero() };
    }
    let base = h(n);
    if c == 1 {
        return base;
    }
    let mut r = TPoly::zero();
    for (e, x) in base.terms() {
        let d: u32 = e.iter().sum();
        r.add_term(e, &x.times(&q(c).pow(d as i32)));
    }
    r
}

/// Expand `p(t_k + δ x^k/k)` as `Σ_d q_d x^d`.
pub fn shift_expand(p: &TPoly<Q>, delta: i64) -> BTreeMap<u32, TPoly<Q>> {
    let mut out: BTreeMap<u32, TPoly<Q>> = BTreeMap::new();
    if delta == 0 {
        if !p.is_zero() {
            out.insert(0, p.clone());
        }
        return out;
    }
    for (e, c) in p.terms() {
        // Per-variable binomial expansion, convolved in x-degree.
        let mut acc: BTreeMap<u32, TPoly<Q>> = BTreeMap::new();
        acc.insert(0, TPoly::constant(c.clone()));
        for (i, &ek) in e.iter().enumerate() {
            if ek == 0 {
                continue;
            }
            let k = i + 1;
            let mut next: BTreeMap<u32, TPoly<Q>> = BTreeMap::new();
            for j in 0..=ek {
                let mut ex: Exps = vec![0; k];
                ex[k - 1] = ek - j;
                let coef = binomial(ek as i64, j).times(&qf(delta, k as i64).pow(j as i32));
                let factor = TPoly::monomial(ex, coef);
                for (d, poly) in &acc {
                    let slot = next.entry(d + (k as u32) * j).or_default();
                    slot.add_assign(&poly.mul(&factor));
                }
            }
            acc = next;
        }
        for (d, poly) in acc {
            let slot = out.entry(d).or_default();
            slot.add_assign(&poly);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_h() {
        assert_eq!(h(1), TPoly::t(1));
        let h2 = TPoly::t(2).add(&TPoly::t(1).mul(&TPoly::t(1)).scale(&qf(1, 2)));
        assert_eq!(h(2), h2);
        assert!(h(-1).is_zero());
    }

    #[test]
    fn shift_of_t2() {
        let m = shift_expand(&TPoly::t(2), -1);
        assert_eq!(m[&0], TPoly::t(2));
        assert_eq!(m[&2], TPoly::constant(qf(-1, 2)));
    }
}
