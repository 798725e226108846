//! Sparse polynomials in the three commuting formal variables `q`, `z`, `w`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Variable index inside an exponent triple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Q = 0,
    Z = 1,
    W = 2,
}

/// Exponent triple (q, z, w).
pub type Exp = [u32; 3];

/// Sparse integer polynomial in (q, z, w). No negative exponents; rational
/// functions clear them into denominators.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, BigInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn from_i64(c: i64) -> Self {
        MPoly::constant(BigInt::from(c))
    }

    pub fn monomial(c: BigInt, exp: Exp) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        let mut exp = [0, 0, 0];
        exp[v as usize] = 1;
        MPoly::monomial(BigInt::one(), exp)
    }

    pub fn var_pow(v: Var, k: u32) -> Self {
        let mut exp = [0, 0, 0];
        exp[v as usize] = k;
        MPoly::monomial(BigInt::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0, 0, 0]).map_or(false, |c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn max_deg(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v as usize]).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MPoly { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut terms: BTreeMap<Exp, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Substitute `v -> v1/v2`, clearing denominators: returns `(p', k)` with
    /// `p(..., v=v1/v2, ...) = p' / v2^k`.
    pub fn subst_ratio(&self, v: Var, num_var: Var, den_var: Var) -> (Self, u32) {
        let k = self.max_deg(v);
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let d = e[v as usize];
            let mut e2 = *e;
            e2[v as usize] = 0;
            e2[num_var as usize] += d;
            e2[den_var as usize] += k - d;
            out = out.add(&MPoly::monomial(c.clone(), e2));
        }
        (out, k)
    }

    /// Substitute `v -> 1/v`, clearing denominators: returns `(p', k)` with
    /// `p(..., v=1/v, ...) = p' / v^k`.
    pub fn subst_inverse(&self, v: Var) -> (Self, u32) {
        let k = self.max_deg(v);
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[v as usize] = k - e[v as usize];
            out = out.add(&MPoly::monomial(c.clone(), e2));
        }
        (out, k)
    }

    /// Substitute `v -> c * v^k` with integer scalar `c` (monomial substitution).
    pub fn subst_scaled_power(&self, v: Var, c: &BigInt, k: u32) -> Self {
        let mut out = MPoly::zero();
        for (e, coef) in &self.terms {
            let d = e[v as usize];
            let mut e2 = *e;
            e2[v as usize] = d * k;
            let mut c2 = coef.clone();
            for _ in 0..d {
                c2 *= c;
            }
            out = out.add(&MPoly::monomial(c2, e2));
        }
        out
    }

    /// Rename a variable: move every exponent from `from` onto `to`.
    pub fn rename_var(&self, from: Var, to: Var) -> Self {
        assert!(from as usize != to as usize);
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[to as usize] += e2[from as usize];
                    e2[from as usize] = 0;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Set `v = 0`.
    pub fn eval_zero(&self, v: Var) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v as usize] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Coefficient polynomial of `v^k`.
    pub fn coeff_of(&self, v: Var, k: u32) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v as usize] == k)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[v as usize] = 0;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Exact evaluation at rational points (q, z, w).
    pub fn eval(&self, q: &BigRational, z: &BigRational, w: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            t *= pow_rat(q, e[0]);
            t *= pow_rat(z, e[1]);
            t *= pow_rat(w, e[2]);
            acc += t;
        }
        acc
    }
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["q", "z", "w"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut wrote = false;
            if !mag.is_one() || e.iter().all(|&d| d == 0) {
                write!(f, "{}", mag)?;
                wrote = true;
            }
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    if wrote {
                        write!(f, "*")?;
                    }
                    if d == 1 {
                        write!(f, "{}", names[i])?;
                    } else {
                        write!(f, "{}^{}", names[i], d)?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_substitution_clears_denominator() {
        // z^2 + q  with z -> z/w  gives (z^2 + q w^2)/w^2
        let p = MPoly::var_pow(Var::Z, 2).add(&MPoly::var(Var::Q));
        let (p2, k) = p.subst_ratio(Var::Z, Var::Z, Var::W);
        assert_eq!(k, 2);
        let expect = MPoly::var_pow(Var::Z, 2)
            .add(&MPoly::var(Var::Q).mul(&MPoly::var_pow(Var::W, 2)));
        assert_eq!(p2, expect);
    }

    #[test]
    fn inverse_substitution() {
        // z^2 - 1 with z -> 1/z gives (1 - z^2)/z^2
        let p = MPoly::var_pow(Var::Z, 2).sub(&MPoly::one());
        let (p2, k) = p.subst_inverse(Var::Z);
        assert_eq!(k, 2);
        assert_eq!(p2, MPoly::one().sub(&MPoly::var_pow(Var::Z, 2)));
    }
}
