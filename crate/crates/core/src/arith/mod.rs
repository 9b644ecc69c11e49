//! Exact arithmetic: rationals, rational functions in named parameters,
//! truncated Laurent series and flag-ordered double expansions.

pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use crate::error::{Error, Result};
pub use poly::{Atom, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use scalar::Scalar;
pub use series::{iterated_laurent, laurent_expand, DoubleSeries, LaurentSeries};

/// Exact rational numbers.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> Q {
    (1..=n).fold(q(1), |a, k| a * q(k as i64))
}

/// `C(n, k)` for any integer `n` and `k ≥ 0`.
pub fn binomial(n: i64, k: u32) -> Q {
    let mut r = q(1);
    for i in 0..k as i64 {
        r = r * q(n - i) / q(i + 1);
    }
    r
}

/// Commutative ring of coefficients used by the series types.
pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scaled(&self, c: &Q) -> Self;
}

/// A [`Ring`] with inverses of nonzero elements.
pub trait Field: Ring {
    fn inverse(&self) -> Result<Self>;
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Q) -> Self {
        self * c
    }
}

impl Field for Q {
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

/// Machine integers with overflow treated as a bug, for integral fast paths.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Z(pub i128);

impl Z {
    pub fn to_q(self) -> Q {
        Q::from_integer(BigInt::from(self.0))
    }

    /// `None` unless `c` is an integer that fits.
    pub fn from_q(c: &Q) -> Option<Z> {
        if !c.is_integer() {
            return None;
        }
        num_traits::ToPrimitive::to_i128(&c.to_integer()).map(Z)
    }
}

impl Ring for Z {
    fn zero() -> Self {
        Z(0)
    }
    fn one() -> Self {
        Z(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, o: &Self) -> Self {
        Z(self.0.checked_add(o.0).expect("integer overflow"))
    }
    fn minus(&self, o: &Self) -> Self {
        Z(self.0.checked_sub(o.0).expect("integer overflow"))
    }
    fn times(&self, o: &Self) -> Self {
        Z(self.0.checked_mul(o.0).expect("integer overflow"))
    }
    fn negate(&self) -> Self {
        Z(-self.0)
    }
    fn scaled(&self, c: &Q) -> Self {
        let c = Z::from_q(c).expect("integral scale factor");
        self.times(&c)
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

impl Field for RatFunc {
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
}
