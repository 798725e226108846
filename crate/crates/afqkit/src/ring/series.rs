//! Truncated two-sided series in one formal variable with a rational exponent
//! offset and exact [`QScalar`] coefficients.
//!
//! A series stores coefficients on the exponent lattice `offset + k/denom`
//! for integer `k` inside the window `[lo, hi]`. Outside the window nothing is
//! claimed unless the corresponding exactness flag is set: `lo_exact` asserts
//! every coefficient below the window is zero (an exact floor), `hi_exact` the
//! same above. Multiplication intersects the achievable windows and never
//! silently widens; exact polynomials (both flags set) multiply without any
//! window loss.

use super::qscalar::QScalar;
use crate::error::RingError;
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

const FAR: i64 = i64::MAX / 8;

#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries {
    /// Global exponent shift; exponents are `offset + k / denom`.
    offset: Rational64,
    /// Lattice denominator (1 for integer exponents, 2 for half-integer, ...).
    denom: i64,
    lo: i64,
    hi: i64,
    lo_exact: bool,
    hi_exact: bool,
    coeffs: BTreeMap<i64, QScalar>,
}

impl PuiseuxSeries {
    /// Zero on a truncation window (nothing claimed outside it).
    pub fn zero(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        PuiseuxSeries {
            offset: Rational64::zero(),
            denom: 1,
            lo,
            hi,
            lo_exact: false,
            hi_exact: false,
            coeffs: BTreeMap::new(),
        }
    }

    /// `1 + O(window edges)` on `[lo, hi]` (requires `lo <= 0 <= hi`).
    pub fn one(lo: i64, hi: i64) -> Self {
        PuiseuxSeries::constant(QScalar::one(), lo, hi)
    }

    pub fn constant(c: QScalar, lo: i64, hi: i64) -> Self {
        assert!(lo <= 0 && 0 <= hi);
        let mut s = PuiseuxSeries::zero(lo, hi);
        s.set(0, c);
        s
    }

    /// `c * x^(k/denom)` on the window.
    pub fn monomial(c: QScalar, k: i64, denom: i64, lo: i64, hi: i64) -> Self {
        assert!(denom >= 1 && lo <= k && k <= hi);
        let mut s = PuiseuxSeries::zero(lo, hi);
        s.denom = denom;
        s.set(k, c);
        s
    }

    /// An exact finite sum of lattice terms: both window edges are exact.
    pub fn exact_terms(denom: i64, terms: &[(i64, QScalar)]) -> Self {
        assert!(denom >= 1);
        let mut coeffs: BTreeMap<i64, QScalar> = BTreeMap::new();
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            let cur = coeffs.remove(k).unwrap_or_else(QScalar::zero) + c.clone();
            if cur.is_zero() {
                coeffs.remove(k);
            } else {
                coeffs.insert(*k, cur);
            }
        }
        let lo = coeffs.keys().next().copied().unwrap_or(0).min(0);
        let hi = coeffs.keys().last().copied().unwrap_or(0).max(0);
        PuiseuxSeries {
            offset: Rational64::zero(),
            denom,
            lo,
            hi,
            lo_exact: true,
            hi_exact: true,
            coeffs,
        }
    }

    pub fn exact_constant(c: QScalar) -> Self {
        PuiseuxSeries::exact_terms(1, &[(0, c)])
    }

    pub fn with_offset(mut self, offset: Rational64) -> Self {
        self.offset = offset;
        self
    }

    /// Declare the floor exact (no coefficients below the window).
    pub fn assert_exact_floor(mut self) -> Self {
        self.lo_exact = true;
        self
    }

    /// Declare the ceiling exact (no coefficients above the window).
    pub fn assert_exact_ceil(mut self) -> Self {
        self.hi_exact = true;
        self
    }

    /// Substitute `x -> 1/x` (mirror the exponent lattice).
    pub fn reverse(self) -> Self {
        PuiseuxSeries {
            offset: -self.offset,
            denom: self.denom,
            lo: -self.hi,
            hi: -self.lo,
            lo_exact: self.hi_exact,
            hi_exact: self.lo_exact,
            coeffs: self.coeffs.into_iter().map(|(k, c)| (-k, c)).collect(),
        }
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn set(&mut self, k: i64, c: QScalar) {
        if k < self.lo || k > self.hi {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Coefficient at lattice index `k` (exponent `offset + k/denom`).
    pub fn coeff(&self, k: i64) -> QScalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(QScalar::zero)
    }

    /// Coefficient at an absolute rational exponent, if it lies on the lattice
    /// inside the window (or in an exact region).
    pub fn coeff_at(&self, exponent: Rational64) -> Option<QScalar> {
        let rel = exponent - self.offset;
        let scaled = rel * Rational64::from_integer(self.denom);
        if !scaled.is_integer() {
            return None;
        }
        let k = scaled.to_integer();
        if k < self.lo {
            return self.lo_exact.then(QScalar::zero);
        }
        if k > self.hi {
            return self.hi_exact.then(QScalar::zero);
        }
        Some(self.coeff(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational64, &QScalar)> {
        let offset = self.offset;
        let denom = self.denom;
        self.coeffs
            .iter()
            .map(move |(k, c)| (offset + Rational64::new(*k, denom), c))
    }

    /// Multiply by a raw exponent shift `x^r`.
    pub fn shift_exponent(mut self, r: Rational64) -> Self {
        self.offset += r;
        self
    }

    /// Narrow the window (never widens). Exactness flags survive on a side
    /// only when nothing stored is dropped there.
    pub fn truncate(mut self, lo: i64, hi: i64) -> Self {
        let new_lo = self.lo.max(lo);
        let new_hi = self.hi.min(hi);
        if new_lo > self.lo && self.coeffs.keys().any(|k| *k < new_lo) {
            self.lo_exact = false;
        }
        if new_hi < self.hi && self.coeffs.keys().any(|k| *k > new_hi) {
            self.hi_exact = false;
        }
        self.lo = new_lo;
        self.hi = new_hi;
        let (l, h) = (self.lo, self.hi);
        self.coeffs.retain(|k, _| *k >= l && *k <= h);
        self
    }

    /// Rescale the lattice denominator to a multiple (exponents unchanged).
    fn rescale(&self, denom: i64) -> Self {
        assert!(denom % self.denom == 0);
        let f = denom / self.denom;
        PuiseuxSeries {
            offset: self.offset,
            denom,
            lo: self.lo.saturating_mul(f).clamp(-FAR, FAR),
            hi: self.hi.saturating_mul(f).clamp(-FAR, FAR),
            lo_exact: self.lo_exact,
            hi_exact: self.hi_exact,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        }
    }

    fn common_lattice(a: &Self, b: &Self) -> (Self, Self) {
        let d = num_integer::lcm(a.denom, b.denom);
        (a.rescale(d), b.rescale(d))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        let (a, b) = Self::common_lattice(self, rhs);
        // Offsets must differ by a lattice point; realign onto a's offset.
        let diff = (b.offset - a.offset) * Rational64::from_integer(a.denom);
        if !diff.is_integer() {
            return Err(RingError::IncompatibleOffsets);
        }
        let shift = diff.to_integer();
        let b_lo = b.lo.saturating_add(shift);
        let b_hi = b.hi.saturating_add(shift);
        let lo = if a.lo_exact && b.lo_exact {
            a.lo.min(b_lo)
        } else if a.lo_exact {
            b_lo
        } else if b.lo_exact {
            a.lo
        } else {
            a.lo.max(b_lo)
        };
        let hi = if a.hi_exact && b.hi_exact {
            a.hi.max(b_hi)
        } else if a.hi_exact {
            b_hi
        } else if b.hi_exact {
            a.hi
        } else {
            a.hi.min(b_hi)
        };
        if lo > hi {
            return Err(RingError::EmptyWindow);
        }
        let mut out = PuiseuxSeries {
            offset: a.offset,
            denom: a.denom,
            lo,
            hi,
            lo_exact: a.lo_exact && b.lo_exact,
            hi_exact: a.hi_exact && b.hi_exact,
            coeffs: BTreeMap::new(),
        };
        for (k, c) in &a.coeffs {
            out.set(*k, c.clone());
        }
        for (k, c) in &b.coeffs {
            let kk = k + shift;
            let cur = out.coeff(kk) + c.clone();
            out.set(kk, cur);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.add(&rhs.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
            return out;
        }
        out.coeffs = out
            .coeffs
            .into_iter()
            .map(|(k, a)| (k, a * c.clone()))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        out
    }

    fn support_min(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn support_max(&self) -> Option<i64> {
        self.coeffs.keys().last().copied()
    }

    /// Product with the achievable-window rule. Pollution from an unknown
    /// tail of one factor enters at that tail paired with the other factor's
    /// lowest possible contribution, so exact polynomials lose nothing.
    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        let (a, b) = Self::common_lattice(self, rhs);
        let a_smin = a.support_min().unwrap_or(FAR);
        let a_smax = a.support_max().unwrap_or(-FAR);
        let b_smin = b.support_min().unwrap_or(FAR);
        let b_smax = b.support_max().unwrap_or(-FAR);

        let mut hi = FAR;
        if !a.hi_exact {
            hi = hi.min(a.hi.saturating_add(b_smin.min(b.hi.saturating_add(1))));
        }
        if !b.hi_exact {
            hi = hi.min(b.hi.saturating_add(a_smin.min(a.hi.saturating_add(1))));
        }
        if a.hi_exact && b.hi_exact {
            hi = a_smax.saturating_add(b_smax).max(0);
        }
        let mut lo = -FAR;
        if !a.lo_exact {
            lo = lo.max(a.lo.saturating_add(b_smax.max(b.lo.saturating_sub(1))));
        }
        if !b.lo_exact {
            lo = lo.max(b.lo.saturating_add(a_smax.max(a.lo.saturating_sub(1))));
        }
        if a.lo_exact && b.lo_exact {
            lo = a_smin.saturating_add(b_smin).min(0);
        }
        lo = lo.clamp(-FAR, FAR);
        hi = hi.clamp(-FAR, FAR);
        if lo > hi {
            return Err(RingError::EmptyWindow);
        }
        let mut out = PuiseuxSeries {
            offset: a.offset + b.offset,
            denom: a.denom,
            lo,
            hi,
            lo_exact: a.lo_exact && b.lo_exact,
            hi_exact: a.hi_exact && b.hi_exact,
            coeffs: BTreeMap::new(),
        };
        for (ka, ca) in &a.coeffs {
            for (kb, cb) in &b.coeffs {
                let k = ka + kb;
                if k < lo || k > hi {
                    continue;
                }
                let add = ca.clone() * cb.clone();
                let cur = out.coeff(k) + add;
                out.set(k, cur);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse through `terms` lattice steps past the leading
    /// exponent. Requires an exact floor so the leading coefficient is
    /// genuine; the usable precision is clamped to the known window.
    pub fn invert_prec(&self, terms: i64) -> Result<Self, RingError> {
        if !self.lo_exact {
            return Err(RingError::DivisionByZero);
        }
        let lead_k = self.support_min().ok_or(RingError::DivisionByZero)?;
        let lead = self.coeff(lead_k);
        let lead_inv = lead.inverse()?;
        let len = if self.hi_exact {
            terms
        } else {
            terms.min(self.hi - lead_k)
        };
        if len < 0 {
            return Err(RingError::EmptyWindow);
        }
        // Normalized tail f = 1 + f_1 x^(1/d) + ...; g = 1/f by recursion.
        let mut f = vec![QScalar::zero(); (len + 1) as usize];
        for (k, c) in &self.coeffs {
            let idx = k - lead_k;
            if idx <= len {
                f[idx as usize] = c.clone() * lead_inv.clone();
            }
        }
        let mut g = vec![QScalar::zero(); (len + 1) as usize];
        g[0] = QScalar::one();
        for k in 1..=(len as usize) {
            let mut acc = QScalar::zero();
            for j in 1..=k {
                if !f[j].is_zero() && !g[k - j].is_zero() {
                    acc = acc + f[j].clone() * g[k - j].clone();
                }
            }
            g[k] = -acc;
        }
        // self = lead x^(offset + lead_k/d) (1 + tail), so
        // 1/self = lead^{-1} x^(-offset - lead_k/d) g.
        let mut out = PuiseuxSeries {
            offset: -self.offset,
            denom: self.denom,
            lo: -lead_k,
            hi: -lead_k + len,
            lo_exact: true,
            hi_exact: false,
            coeffs: BTreeMap::new(),
        };
        for (j, c) in g.into_iter().enumerate() {
            let v = c * lead_inv.clone();
            out.set(-lead_k + j as i64, v);
        }
        Ok(out)
    }

    /// Termwise equality on the intersection of the two windows.
    pub fn eq_on_common_window(&self, rhs: &Self) -> bool {
        match self.sub(rhs) {
            Ok(diff) => diff.is_zero(),
            Err(_) => false,
        }
    }

    /// Dump format: one line per stored exponent, `exponent<TAB>value` with
    /// values in sparse `coeff*q^k` notation.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.iter() {
            if e.is_integer() {
                out.push_str(&format!("{}\t{}\n", e.to_integer(), c));
            } else {
                out.push_str(&format!("{}/{}\t{}\n", e.numer(), e.denom(), c));
            }
        }
        out
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PuiseuxSeries[offset={}, window=({},{})/{}{}{}]",
            self.offset,
            self.lo,
            self.hi,
            self.denom,
            if self.lo_exact { " floor-exact" } else { "" },
            if self.hi_exact { " ceil-exact" } else { "" },
        )?;
        for (e, c) in self.iter() {
            write!(f, " + ({})x^{}", c, e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(hi: i64) -> PuiseuxSeries {
        // 1 + x + x^2 + ... truncated above, exact floor
        let mut s = PuiseuxSeries::zero(0, hi).assert_exact_floor();
        for k in 0..=hi {
            s.set(k, QScalar::one());
        }
        s
    }

    #[test]
    fn mul_window_intersection() {
        let a = geom(4);
        let b = geom(2);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.window(), (0, 2));
        assert_eq!(p.coeff(2), QScalar::from_int(3));
    }

    #[test]
    fn exact_polynomials_multiply_without_loss() {
        let a = PuiseuxSeries::exact_terms(
            1,
            &[(0, QScalar::one()), (1, QScalar::from_int(-1))],
        );
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coeff(2), QScalar::one());
        assert_eq!(p.coeff(1), QScalar::from_int(-2));
    }

    #[test]
    fn invert_one_minus_x() {
        let s = PuiseuxSeries::exact_terms(
            1,
            &[(0, QScalar::one()), (1, QScalar::from_int(-1))],
        );
        let inv = s.invert_prec(5).unwrap();
        for k in 0..=5 {
            assert_eq!(inv.coeff(k), QScalar::one(), "coeff {}", k);
        }
        let prod = s.mul(&inv).unwrap();
        assert_eq!(prod.coeff(0), QScalar::one());
        for k in 1..=prod.window().1 {
            assert!(prod.coeff(k).is_zero());
        }
    }

    #[test]
    fn incompatible_offsets_error() {
        let a = geom(2);
        let b = geom(2).shift_exponent(Rational64::new(1, 3));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn half_integer_lattice() {
        let a = PuiseuxSeries::exact_terms(2, &[(1, QScalar::one())]); // x^{1/2}
        let p = a.mul(&a).unwrap();
        assert_eq!(
            p.coeff_at(Rational64::from_integer(1)),
            Some(QScalar::one())
        );
    }

    #[test]
    fn truncate_keeps_exactness_when_nothing_dropped() {
        let a = PuiseuxSeries::exact_terms(1, &[(0, QScalar::one()), (2, QScalar::one())]);
        let t = a.clone().truncate(0, 5);
        let p = t.mul(&a).unwrap();
        assert_eq!(p.coeff(4), QScalar::one());
    }
}
