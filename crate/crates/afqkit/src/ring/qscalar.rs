//! Exact rational functions in the deformation parameter `q`.

use super::poly::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::RingError;

/// Rational function numerator/denominator in `q` with integer coefficients,
/// kept in canonical form:
///
/// - denominator nonzero with positive leading coefficient,
/// - numerator and denominator coprime over the rationals,
/// - integer contents of numerator and denominator coprime.
///
/// Canonical form makes structural equality (`==`) the same as mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: IntPoly,
    den: IntPoly,
}

impl QScalar {
    pub fn new(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "denominator is the zero polynomial");
        let mut s = QScalar { num, den };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = IntPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        // Reduce the integer contents as a fraction; sign goes to the numerator.
        let mut cn = self.num.content();
        if self.num.leading().unwrap().is_negative() {
            cn = -cn;
        }
        let mut cd = self.den.content();
        if self.den.leading().unwrap().is_negative() {
            cd = -cd;
        }
        let g = num_integer::gcd(cn.abs(), cd.abs());
        let mut cn = cn / &g;
        let mut cd = cd / &g;
        if cd.is_negative() {
            cn = -cn;
            cd = -cd;
        }
        self.num = self.num.primitive().mul_scalar(&cn);
        self.den = self.den.primitive().mul_scalar(&cd);
    }

    pub fn zero() -> Self {
        QScalar {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        QScalar {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        QScalar {
            num: IntPoly::from_i64(c),
            den: IntPoly::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        QScalar::new(IntPoly::from_i64(num), IntPoly::from_i64(den))
    }

    /// `q^k` for any integer `k` (negative exponents go to the denominator).
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            QScalar {
                num: IntPoly::monomial(BigInt::one(), k as usize),
                den: IntPoly::one(),
            }
        } else {
            QScalar {
                num: IntPoly::one(),
                den: IntPoly::monomial(BigInt::one(), (-k) as usize),
            }
        }
    }

    /// `(-q)^k` for any integer `k`.
    pub fn neg_q_pow(k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        QScalar::from_int(sign) * QScalar::q_pow(k)
    }

    /// `q - q^{-1}` shorthand used all over the commutation relations.
    pub fn q_minus_qinv() -> Self {
        QScalar::q_pow(1) - QScalar::q_pow(-1)
    }

    pub fn from_poly(p: IntPoly) -> Self {
        QScalar {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(QScalar::new(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RingError> {
        Ok(self.clone() * rhs.inverse()?)
    }

    /// Exact evaluation at a rational `q`-value; errors on a denominator zero.
    pub fn eval(&self, q: &BigRational) -> Result<BigRational, RingError> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(self.num.eval(q) / d)
    }

    /// The constant term as a rational number, if the denominator does not
    /// vanish at q = 0.
    pub fn constant_term(&self) -> Option<BigRational> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        Some(BigRational::new(self.num.coeff(0), d0))
    }

    /// Interpret a constant (degree-0) value as a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.degree().map_or(true, |d| d == 0) && self.den.degree().map_or(true, |d| d == 0)
        {
            self.constant_term()
        } else {
            None
        }
    }

    /// Substitute `q -> q^k`, `k >= 1`.
    pub fn inflate(&self, k: usize) -> Self {
        QScalar::new(self.num.inflate(k), self.den.inflate(k))
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, rhs: QScalar) -> QScalar {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        if self.den == rhs.den {
            return QScalar::new(self.num.add(&rhs.num), self.den);
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        QScalar::new(num, den)
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, rhs: QScalar) -> QScalar {
        self + (-rhs)
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, rhs: QScalar) -> QScalar {
        if self.is_zero() || rhs.is_zero() {
            return QScalar::zero();
        }
        // Cross-reduce before multiplying to keep the polynomials small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = rhs.den.div_exact(&g1);
        let n2 = rhs.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        QScalar::new(n1.mul(&n2), d1.mul(&d2))
    }
}

impl Div for QScalar {
    type Output = QScalar;
    fn div(self, rhs: QScalar) -> QScalar {
        self.checked_div(&rhs)
            .expect("division by zero rational function")
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QScalar {
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
    fn inverse_pair_multiplies_to_one() {
        // q * (1/q) = 1
        let a = QScalar::q_pow(1);
        let b = QScalar::q_pow(-1);
        assert!((a * b).is_one());
    }

    #[test]
    fn self_division_is_one() {
        // (q - q^{-1}) / (q - q^{-1}) = 1
        let a = QScalar::q_minus_qinv();
        let b = QScalar::q_minus_qinv();
        assert!((a / b).is_one());
    }

    #[test]
    fn addition_doubles() {
        // (q^2 + 1) + (q^2 + 1) = 2q^2 + 2
        let a = QScalar::q_pow(2) + QScalar::one();
        let b = a.clone();
        let expect = QScalar::from_int(2) * a.clone();
        assert_eq!(a + b, expect);
    }

    #[test]
    fn division_by_zero_reports_error() {
        let a = QScalar::one();
        assert!(a.checked_div(&QScalar::zero()).is_err());
    }

    #[test]
    fn canonical_sign_and_content() {
        // (-2q)/(−4) canonicalizes to q/2
        let s = QScalar::new(
            IntPoly::monomial(BigInt::from(-2), 1),
            IntPoly::constant(BigInt::from(-4)),
        );
        assert_eq!(s, QScalar::new(IntPoly::monomial(BigInt::one(), 1), IntPoly::from_i64(2)));
    }
}
