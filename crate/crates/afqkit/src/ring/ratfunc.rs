//! Unreduced rational functions in (q, z, w).
//!
//! No multivariate gcd is attempted: equality is decided by cross-multiplying,
//! which keeps everything exact without a factorization engine. Addition takes
//! a fast path when the two denominators are structurally identical, which is
//! the common case in matrix products built from a shared denominator family.

use super::mpoly::{MPoly, Var};
use crate::error::RingError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: MPoly::one(),
            };
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn from_i64(c: i64) -> Self {
        RatFunc::from_poly(MPoly::from_i64(c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross-multiplication.
    pub fn eq_rat(&self, rhs: &Self) -> bool {
        self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)).is_zero()
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(RatFunc {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, RingError> {
        Ok(self.clone() * rhs.inverse()?)
    }

    /// Substitute `v -> v1/v2`.
    pub fn subst_ratio(&self, v: Var, num_var: Var, den_var: Var) -> Self {
        let (n, kn) = self.num.subst_ratio(v, num_var, den_var);
        let (d, kd) = self.den.subst_ratio(v, num_var, den_var);
        // n / v2^kn over d / v2^kd  =  n * v2^kd / (d * v2^kn)
        RatFunc::new(
            n.mul(&MPoly::var_pow(den_var, kd)),
            d.mul(&MPoly::var_pow(den_var, kn)),
        )
    }

    /// Substitute `v -> 1/v`.
    pub fn subst_inverse(&self, v: Var) -> Self {
        let (n, kn) = self.num.subst_inverse(v);
        let (d, kd) = self.den.subst_inverse(v);
        RatFunc::new(n.mul(&MPoly::var_pow(v, kd)), d.mul(&MPoly::var_pow(v, kn)))
    }

    /// Rename a variable (e.g. z -> w).
    pub fn rename_var(&self, from: Var, to: Var) -> Self {
        RatFunc::new(
            self.num.rename_var(from, to),
            self.den.rename_var(from, to),
        )
    }

    /// Substitute `v -> c * v^k`.
    pub fn subst_scaled_power(&self, v: Var, c: &BigInt, k: u32) -> Self {
        RatFunc::new(
            self.num.subst_scaled_power(v, c, k),
            self.den.subst_scaled_power(v, c, k),
        )
    }

    /// Set `v = 0`; errors if the denominator vanishes there.
    pub fn eval_var_zero(&self, v: Var) -> Result<Self, RingError> {
        let d = self.den.eval_zero(v);
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(RatFunc::new(self.num.eval_zero(v), d))
    }

    /// Leading behavior as `v -> infinity`: the limit when it is finite
    /// (numerator degree <= denominator degree), else an error.
    pub fn limit_var_infinity(&self, v: Var) -> Result<Self, RingError> {
        if self.is_zero() {
            return Ok(RatFunc::zero());
        }
        let dn = self.num.max_deg(v);
        let dd = self.den.max_deg(v);
        if dn > dd {
            return Err(RingError::DivergentLimit);
        }
        if dn < dd {
            return Ok(RatFunc::zero());
        }
        Ok(RatFunc::new(self.num.coeff_of(v, dn), self.den.coeff_of(v, dd)))
    }

    /// Exact evaluation at rational points.
    pub fn eval(
        &self,
        q: &BigRational,
        z: &BigRational,
        w: &BigRational,
    ) -> Result<BigRational, RingError> {
        let d = self.den.eval(q, z, w);
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(self.num.eval(q, z, w) / d)
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        if self.den == rhs.den {
            return RatFunc::new(self.num.add(&rhs.num), self.den);
        }
        RatFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.num.is_one() && self.den.is_one() {
            return rhs;
        }
        if rhs.num.is_one() && rhs.den.is_one() {
            return self;
        }
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_rat(other)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_multiplication_equality() {
        // z/(z-1) == z^2/(z^2-z) without any gcd reduction
        let z = MPoly::var(Var::Z);
        let a = RatFunc::new(z.clone(), z.sub(&MPoly::one()));
        let b = RatFunc::new(
            z.mul(&z),
            z.mul(&z).sub(&z),
        );
        assert!(a.eq_rat(&b));
    }

    #[test]
    fn common_denominator_fast_path() {
        let z = MPoly::var(Var::Z);
        let d = z.sub(&MPoly::one());
        let a = RatFunc::new(MPoly::one(), d.clone());
        let b = RatFunc::new(z.clone(), d.clone());
        let s = a + b;
        assert_eq!(s.den(), &d);
    }
}
