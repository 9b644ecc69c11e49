//! Finite configuration spaces and the creation operators on them.
//!
//! A point of `𝒫_n` is a monic `π(z) = zⁿ − σ₁z^{n−1} + … + (−1)ⁿσ_n`.
//! Functions are rational in `sigma1..sigman` and any other parameters.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{qf, Atom, RatFunc, Scalar, Q};
use crate::error::{Error, Result};
use crate::fock::{unlocalize, FockElement};
use crate::mm::MMElement;
use crate::ops::make_psi;

pub fn sigma_name(k: usize) -> String {
    format!("sigma{k}")
}

pub fn sigma(k: usize) -> Scalar {
    if k == 0 {
        Scalar::one()
    } else {
        Scalar::param(&sigma_name(k))
    }
}

fn sigma_index(a: &Atom) -> Option<usize> {
    a.param_name()?.strip_prefix("sigma")?.parse().ok()
}

/// A function on `𝒫_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigPolynomial {
    pub n: usize,
    pub f: Scalar,
}

impl ConfigPolynomial {
    pub fn new(n: usize, f: Scalar) -> Result<Self> {
        for p in f.params() {
            if let Some(k) = p.strip_prefix("sigma").and_then(|d| d.parse::<usize>().ok()) {
                if k == 0 || k > n {
                    return Err(Error::BadConfig(format!("{p} is not a coordinate on a space of {n} points")));
                }
            }
        }
        Ok(ConfigPolynomial { n, f })
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Self::new(n, Scalar::parse(text)?)
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        ConfigPolynomial { n, f: c }
    }

    /// Evaluate at the configuration with the given roots.
    pub fn eval_roots(&self, roots: &[Q]) -> Result<Scalar> {
        if roots.len() != self.n {
            return Err(Error::BadConfig(format!("expected {} roots, got {}", self.n, roots.len())));
        }
        let e = elementary(roots);
        let g = self.f.as_ratfunc().substitute(&|a| {
            let k = sigma_index(a)?;
            Some(RatFunc::from_q(e[k].clone()))
        })?;
        Ok(Scalar::from_ratfunc(g).expect("no symbols"))
    }
}

impl fmt::Display for ConfigPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

/// `e_0..e_n` of the roots.
pub fn elementary(roots: &[Q]) -> Vec<Q> {
    let mut e = vec![Q::from_integer(1.into())];
    for r in roots {
        let mut next = e.clone();
        next.push(Q::from_integer(0.into()));
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_else(|| Q::from_integer(0.into())) + r * &e[k - 1];
        }
        e = next;
    }
    e
}

/// `π(z₀)` on `𝒫_n`.
pub fn pi_at(n: usize, z0: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for k in 0..=n {
        let term = sigma(k).mul(&z0.pow((n - k) as i64).expect("nonnegative"));
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `f ↦ f((z − z₀)π)`, from `𝒫_{n+1}` to `𝒫_n`.
pub fn boson_create(z0: &Scalar, f: &ConfigPolynomial) -> Result<ConfigPolynomial> {
    if f.n == 0 {
        return Err(Error::BadConfig("no particle to remove from the empty configuration".into()));
    }
    let n = f.n - 1;
    if z0.params().iter().any(|p| p.starts_with("sigma")) {
        return Err(Error::BadConfig("creation point may not depend on the coordinates".into()));
    }
    let g = f.f.as_ratfunc().substitute(&|a| {
        let k = sigma_index(a)?;
        let lower = if k >= 1 { sigma(k - 1) } else { Scalar::zero() };
        let own = if k <= n { sigma(k) } else { Scalar::zero() };
        Some(own.add(&z0.mul(&lower)).into_ratfunc())
    })?;
    ConfigPolynomial::new(n, Scalar::from_ratfunc(g).expect("no symbols"))
}

/// `f ↦ π(z₀) f((z − z₀)π)`.
pub fn fermion_create(z0: &Scalar, f: &ConfigPolynomial) -> Result<ConfigPolynomial> {
    let b = boson_create(z0, f)?;
    ConfigPolynomial::new(b.n, b.f.mul(&pi_at(b.n, z0)))
}

/// `Π_{i<j}(z_i − z_j)`.
pub fn discriminant(z: &[Q]) -> Q {
    let mut acc = Q::from_integer(1.into());
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            acc *= &z[i] - &z[j];
        }
    }
    acc
}

/// `q = Disc · p` in root coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPolynomial {
    pub p: ConfigPolynomial,
}

impl SkewPolynomial {
    pub fn eval(&self, z: &[Q]) -> Result<Q> {
        let v = self.p.eval_roots(z)?;
        let v = v.as_q().ok_or_else(|| Error::BadConfig("function has free parameters".into()))?;
        Ok(discriminant(z) * v)
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // Inserting at `pos` passes `len − pos` larger-index slots.
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub samples: usize,
    pub mismatches: Vec<Vec<Q>>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Draw `k` distinct rationals avoiding `avoid`.
pub fn distinct_rationals(rng: &mut ChaCha8Rng, k: usize, avoid: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    while out.len() < k {
        let x = qf(rng.gen_range(-40..=40), rng.gen_range(1..=7));
        if !out.contains(&x) && !avoid.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Creation computed on `q = Disc·p`: place `z₀` among the roots,
/// skew-symmetrize over all orderings, divide by the smaller discriminant,
/// and compare with [`fermion_create`].
pub fn skew_oracle_check(z0: &Q, p: &ConfigPolynomial, samples: usize, seed: u64) -> Result<OracleReport> {
    if p.n > 6 {
        return Err(Error::BadConfig("the oracle enumerates permutations; keep n small".into()));
    }
    let n = p.n.checked_sub(1).ok_or_else(|| Error::BadConfig("p lives on the empty configuration space".into()))?;
    let fast = fermion_create(&Scalar::from_q(z0.clone()), p)?;
    let skew = SkewPolynomial { p: p.clone() };
    let perms = permutations(n + 1);
    let norm = Q::from_integer((1..=(n + 1) as i64).product::<i64>().into());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for _ in 0..samples {
        let w = distinct_rationals(&mut rng, n, std::slice::from_ref(z0));
        let mut x = vec![z0.clone()];
        x.extend(w.iter().cloned());
        let mut alt = Q::from_integer(0.into());
        for (perm, sign) in &perms {
            let xs: Vec<Q> = perm.iter().map(|&i| x[i].clone()).collect();
            alt += skew.eval(&xs)? * Q::from_integer((*sign).into());
        }
        let oracle = alt / &norm / discriminant(&w);
        let direct = fast.eval_roots(&w)?.as_q().ok_or_else(|| Error::BadConfig("free parameters".into()))?;
        if oracle != direct {
            mismatches.push(w);
        }
    }
    Ok(OracleReport { n: p.n, samples, mismatches })
}

/// `F(ξ)` for a polynomial `ξ` given by coefficients of `1, z, z², …`:
/// every `E[a;k]` becomes `ξ^{(k)}(a)`.
pub fn evaluate_at(f: &MMElement, xi: &[Scalar]) -> Result<Scalar> {
    let g = f.as_ratfunc().substitute(&|a| match a {
        Atom::Eval(p, k) => {
            let pt = Scalar::from_ratfunc((**p).clone())?;
            Some(derivative_at(xi, *k, &pt).into_ratfunc())
        }
        _ => None,
    })?;
    Scalar::from_ratfunc(g).ok_or_else(|| Error::BadConfig("symbols left after evaluation".into()))
}

fn derivative_at(xi: &[Scalar], k: u32, pt: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, c) in xi.iter().enumerate().rev() {
        let i = i as u32;
        if i < k {
            break;
        }
        let falling: i64 = (0..k).map(|j| (i - j) as i64).product();
        acc = acc.add(&c.mul(&Scalar::int(falling)).mul(&pt.pow((i - k) as i64).expect("nonnegative")));
    }
    acc
}

/// Coefficients of `π(z)` on `𝒫_n`, lowest degree first.
pub fn pi_coeffs(n: usize) -> Vec<Scalar> {
    (0..=n)
        .map(|d| {
            let k = n - d;
            if k % 2 == 0 {
                sigma(k)
            } else {
                sigma(k).neg()
            }
        })
        .collect()
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `p_S(z) = Π_{a∈S}(z − a)`.
pub fn sea_poly(sea: &[Scalar]) -> Vec<Scalar> {
    sea.iter().fold(vec![Scalar::one()], |acc, a| poly_mul(&acc, &[a.neg(), Scalar::one()]))
}

/// `f(π) = F(p_S·π)` on `𝒫_n`.
pub fn transport(f: &MMElement, n: usize, sea: &[Scalar]) -> Result<ConfigPolynomial> {
    let xi = poly_mul(&sea_poly(sea), &pi_coeffs(n));
    ConfigPolynomial::new(n, evaluate_at(f, &xi)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `geometric / finite`, when it is free of the coordinates.
    pub ratio: Option<Scalar>,
    /// `p_S(z₀)`.
    pub expected: Scalar,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.ratio.as_ref() == Some(&self.expected)
    }
}

/// Compare the localized geometric creation operator with the finite one.
///
/// `v` becomes `F = unlocalize(v)`, a function on configurations through
/// `π ↦ F(p_S·π)` with the sea `S`. The geometric side applies the creation
/// family at `z₀` to `F` and transports to `𝒫_n`; the finite side applies
/// [`fermion_create`] to the transport of `F` on `𝒫_{n+1}`.
pub fn fock_consistency(z0: &Scalar, v: &FockElement<Q>, n: usize, sea: &[Scalar]) -> Result<ConsistencyReport> {
    let f = unlocalize(v);
    let geo = make_psi(z0).apply(&f)?;
    let left = transport(&geo, n, sea)?;
    let right = fermion_create(z0, &transport(&f, n + 1, sea)?)?;
    let ratio = left.f.div(&right.f)?;
    let free = !ratio.params().iter().any(|p| p.starts_with("sigma"));
    let expected = sea.iter().fold(Scalar::one(), |acc, a| acc.mul(&z0.sub(a)));
    Ok(ConsistencyReport { ratio: free.then_some(ratio), expected })
}

/// Random polynomial in `sigma1..sigman` with small integer coefficients.
pub fn random_config_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize, degree: u32) -> ConfigPolynomial {
    let mut f = Scalar::zero();
    for _ in 0..terms {
        let mut t = Scalar::int(rng.gen_range(-5..=5));
        for _ in 0..rng.gen_range(0..=degree) {
            if n > 0 {
                t = t.mul(&sigma(rng.gen_range(1..=n)));
            }
        }
        f = f.add(&t);
    }
    ConfigPolynomial { n, f }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    #[test]
    fn boson_examples() {
        let z = s("z0");
        assert_eq!(boson_create(&z, &ConfigPolynomial::constant(2, s("7"))).unwrap().f, s("7"));
        assert_eq!(boson_create(&z, &ConfigPolynomial::parse(2, "sigma1").unwrap()).unwrap().f, s("z0 + sigma1"));
        assert_eq!(boson_create(&z, &ConfigPolynomial::parse(2, "sigma2").unwrap()).unwrap().f, s("z0*sigma1"));
    }

    #[test]
    fn bosons_commute_fermions_anticommute() {
        let f = ConfigPolynomial::parse(3, "sigma1^2*sigma3 - 2*sigma2 + sigma1").unwrap();
        let (a, b) = (s("a"), s("b"));
        let ab = boson_create(&a, &boson_create(&b, &f).unwrap()).unwrap();
        let ba = boson_create(&b, &boson_create(&a, &f).unwrap()).unwrap();
        assert_eq!(ab, ba);
        let ab = fermion_create(&a, &fermion_create(&b, &f).unwrap()).unwrap();
        let ba = fermion_create(&b, &fermion_create(&a, &f).unwrap()).unwrap();
        assert_eq!(ab.f, ba.f.neg());
        let aa = fermion_create(&a, &fermion_create(&a, &f).unwrap()).unwrap();
        assert!(aa.f.is_zero());
    }

    #[test]
    fn fermion_vacuum() {
        let r = fermion_create(&s("z0"), &ConfigPolynomial::constant(2, Scalar::one())).unwrap();
        assert_eq!(r.f, s("z0 - sigma1"));
    }

    #[test]
    fn oracle_small() {
        assert!(skew_oracle_check(&q(2), &ConfigPolynomial::constant(1, Scalar::one()), 20, 1).unwrap().passed());
        let p = ConfigPolynomial::parse(2, "sigma1").unwrap();
        assert!(skew_oracle_check(&qf(1, 3), &p, 20, 2).unwrap().passed());
    }

    #[test]
    fn consistency_ratio() {
        let sea = [Scalar::int(1), Scalar::int(-2)];
        let one = FockElement::one();
        let r = fock_consistency(&Scalar::int(3), &one, 2, &sea).unwrap();
        assert!(r.passed(), "{r:?}");
        let r2 = fock_consistency(&Scalar::int(5), &FockElement::parse("T").unwrap(), 2, &sea).unwrap();
        assert!(r2.passed());
        assert_ne!(r.expected, r2.expected);
    }
}
