//! The spectral R-matrix on `C^n (x) C^n` and its exact identities: the
//! Yang-Baxter equation, unitarity, the two constant limits, and the scalar
//! normalization factors for exchange relations.
//!
//! Basis order for tensor indices is fixed row-major: `(i, j) -> i*n + j` for
//! `e_i (x) e_j` with 0-based `i, j`.

use crate::check::{CheckFail, CheckResult};
use crate::error::AlgebraError;
use crate::ring::{MPoly, PuiseuxSeries, QScalar, RatFunc, Var};
use num_bigint::BigInt;
use num_traits::One;
use num_rational::Rational64;

/// Dense matrix over rational functions in (q, z, w).
#[derive(Clone, PartialEq)]
pub struct SpectralMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl SpectralMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SpectralMatrix {
            rows,
            cols,
            entries: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SpectralMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SpectralMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).clone() + a.clone() * b.clone();
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone() - rhs.get(r, c).clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &RatFunc) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.clone() * s.clone();
        }
        out
    }

    /// First entry that is not identically zero, as a counterexample.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &RatFunc)> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if !e.is_zero() {
                    return Some((r, c, e));
                }
            }
        }
        None
    }

    pub fn eq_entrywise(&self, rhs: &Self) -> CheckResult {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.get(r, c).eq_rat(rhs.get(r, c)) {
                    return Err(CheckFail::new(
                        format!("entry ({}, {})", r, c),
                        format!("{} vs {}", self.get(r, c), rhs.get(r, c)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Entrywise substitution of the spectral variable.
    pub fn map_entries(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        SpectralMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Gauss-Jordan inverse over the rational-function field.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = SpectralMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(AlgebraError::SingularMatrix)?;
            if pivot != col {
                for c in 0..n {
                    let tmp = a.get(pivot, c).clone();
                    a.set(pivot, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                    let tmp = inv.get(pivot, c).clone();
                    inv.set(pivot, c, inv.get(col, c).clone());
                    inv.set(col, c, tmp);
                }
            }
            let p = a.get(col, col).clone();
            let pinv = p.inverse()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c).clone() * pinv.clone());
                inv.set(col, c, inv.get(col, c).clone() * pinv.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let av = a.get(r, c).clone() - f.clone() * a.get(col, c).clone();
                    a.set(r, c, av);
                    let iv = inv.get(r, c).clone() - f.clone() * inv.get(col, c).clone();
                    inv.set(r, c, iv);
                }
            }
        }
        Ok(inv)
    }

    /// `row col value` triplets for nonzero entries.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if !e.is_zero() {
                    out.push_str(&format!("{} {} {}\n", r, c, e));
                }
            }
        }
        out
    }
}

fn pair(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// The permutation operator on `C^n (x) C^n`.
pub fn permutation(n: usize) -> SpectralMatrix {
    let mut p = SpectralMatrix::zero(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p.set(pair(n, j, i), pair(n, i, j), RatFunc::one());
        }
    }
    p
}

fn zq2_denominator() -> MPoly {
    // z - q^2, the common cleared denominator of the spectral entries
    MPoly::var(Var::Z).sub(&MPoly::var_pow(Var::Q, 2))
}

/// Diagonal exchange entry `(z-1)/(q^{-1} z - q) = q(z-1)/(z-q^2)`.
fn entry_diag_mixed() -> RatFunc {
    let num = MPoly::var(Var::Q).mul(&MPoly::var(Var::Z).sub(&MPoly::one()));
    RatFunc::new(num, zq2_denominator())
}

/// Exchange entry for row index above column family: `z(q^{-1}-q)/(z q^{-1} - q)
/// = z(1-q^2)/(z-q^2)`.
fn entry_exchange_low() -> RatFunc {
    let num = MPoly::var(Var::Z).mul(&MPoly::one().sub(&MPoly::var_pow(Var::Q, 2)));
    RatFunc::new(num, zq2_denominator())
}

/// Exchange entry `(q^{-1}-q)/(q^{-1} z - q) = (1-q^2)/(z-q^2)`.
fn entry_exchange_high() -> RatFunc {
    let num = MPoly::one().sub(&MPoly::var_pow(Var::Q, 2));
    RatFunc::new(num, zq2_denominator())
}

/// The spectral R-matrix: four entry families on `C^n (x) C^n` over the
/// common denominator `z - q^2`.
///
/// - `(ii,ii)` entries are 1,
/// - `(ij,ij)` for `i != j` carry `(z-1)/(q^{-1}z-q)`,
/// - the exchange `(ij),(ji)` with `i < j` carries `z(q^{-1}-q)/(zq^{-1}-q)`,
/// - the exchange with `i > j` carries `(q^{-1}-q)/(q^{-1}z-q)`.
pub fn build_r(n: usize) -> Result<SpectralMatrix, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::DimensionTooSmall(n));
    }
    let mut r = SpectralMatrix::zero(n * n, n * n);
    for i in 0..n {
        r.set(pair(n, i, i), pair(n, i, i), RatFunc::one());
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            r.set(pair(n, i, j), pair(n, i, j), entry_diag_mixed());
            // E_ij (x) E_ji maps e_j (x) e_i to e_i (x) e_j: row (i,j), col (j,i)
            let v = if i < j {
                entry_exchange_low()
            } else {
                entry_exchange_high()
            };
            r.set(pair(n, i, j), pair(n, j, i), v);
        }
    }
    Ok(r)
}

/// Embed a two-leg operator into three tensor legs of `C^n` by explicit index
/// arithmetic (legs are 0-based positions in the triple).
pub fn embed_legs(m: &SpectralMatrix, n: usize, leg_a: usize, leg_b: usize) -> SpectralMatrix {
    assert!(leg_a != leg_b && leg_a < 3 && leg_b < 3);
    let dim = n * n * n;
    let mut out = SpectralMatrix::zero(dim, dim);
    let unpack = |idx: usize| [(idx / (n * n)) % n, (idx / n) % n, idx % n];
    let pack = |t: [usize; 3]| (t[0] * n + t[1]) * n + t[2];
    for col in 0..dim {
        let ct = unpack(col);
        let spectator: Vec<usize> = (0..3).filter(|l| *l != leg_a && *l != leg_b).collect();
        let s = spectator[0];
        let mcol = pair(n, ct[leg_a], ct[leg_b]);
        for a_out in 0..n {
            for b_out in 0..n {
                let v = m.get(pair(n, a_out, b_out), mcol);
                if v.is_zero() {
                    continue;
                }
                let mut rt = ct;
                rt[leg_a] = a_out;
                rt[leg_b] = b_out;
                rt[s] = ct[s];
                let row = pack(rt);
                let cur = out.get(row, col).clone() + v.clone();
                out.set(row, col, cur);
            }
        }
    }
    out
}

/// Substitute the spectral variable: z -> z/w.
pub fn at_z_over_w(m: &SpectralMatrix) -> SpectralMatrix {
    m.map_entries(|e| e.subst_ratio(Var::Z, Var::Z, Var::W))
}

/// Substitute the spectral variable: z -> w.
pub fn at_w(m: &SpectralMatrix) -> SpectralMatrix {
    m.map_entries(|e| e.rename_var(Var::Z, Var::W))
}

/// Substitute z -> 1/z.
pub fn at_z_inverse(m: &SpectralMatrix) -> SpectralMatrix {
    m.map_entries(|e| e.subst_inverse(Var::Z))
}

/// Yang-Baxter check: the residual of
/// `R_12(z/w) R_13(z) R_23(w) - R_23(w) R_13(z) R_12(z/w)`
/// must vanish identically over Q(q, z, w).
pub fn check_ybe(n: usize) -> Result<CheckResult, AlgebraError> {
    let r = build_r(n)?;
    Ok(check_ybe_of(&r, n))
}

/// Same residual for a caller-supplied candidate matrix (negative controls).
pub fn check_ybe_of(r: &SpectralMatrix, n: usize) -> CheckResult {
    let r12 = embed_legs(&at_z_over_w(r), n, 0, 1);
    let r13 = embed_legs(r, n, 0, 2);
    let r23 = embed_legs(&at_w(r), n, 1, 2);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    let residual = lhs.sub(&rhs);
    match residual.first_nonzero() {
        None => Ok(()),
        Some((i, j, v)) => Err(CheckFail::new(
            format!("residual entry ({}, {})", i, j),
            format!("{}", v),
        )),
    }
}

/// Unitarity: `R_21(z) R(z^{-1}) = P R(z) P R(z^{-1}) = id` entrywise.
pub fn check_unitarity(n: usize) -> Result<CheckResult, AlgebraError> {
    let r = build_r(n)?;
    Ok(check_unitarity_of(&r, n))
}

pub fn check_unitarity_of(r: &SpectralMatrix, n: usize) -> CheckResult {
    let p = permutation(n);
    let r21 = p.mul(r).mul(&p);
    let prod = r21.mul(&at_z_inverse(r));
    prod.eq_entrywise(&SpectralMatrix::identity(n * n))
}

/// Both constant limits of R(z) and their mutual consistency
/// `lim_0 R = q^{-1} P (q (lim_inf R)^{-1}) P`.
pub fn limits_r(n: usize) -> Result<(SpectralMatrix, SpectralMatrix, CheckResult), AlgebraError> {
    let r = build_r(n)?;
    let mut at0 = SpectralMatrix::zero(n * n, n * n);
    let mut atinf = SpectralMatrix::zero(n * n, n * n);
    for row in 0..n * n {
        for col in 0..n * n {
            let e = r.get(row, col);
            if e.is_zero() {
                continue;
            }
            at0.set(row, col, e.eval_var_zero(Var::Z)?);
            atinf.set(row, col, e.limit_var_infinity(Var::Z)?);
        }
    }
    let p = permutation(n);
    let q = RatFunc::from_poly(MPoly::var(Var::Q));
    let qinv = q.inverse()?;
    // q * (lim_inf)^{-1} is the constant R-matrix; conjugate and scale.
    let const_r = atinf.inverse()?.scale(&q);
    let rhs = p.mul(&const_r).mul(&p).scale(&qinv);
    let consistency = at0.eq_entrywise(&rhs);
    Ok((at0, atinf, consistency))
}

/// The constant R-matrix of the underlying finite quantum group, derived from
/// the z -> infinity limit (never typed in by hand): `q (lim_inf R)^{-1}`.
pub fn constant_r(n: usize) -> Result<SpectralMatrix, AlgebraError> {
    let (_, atinf, consistency) = limits_r(n)?;
    if let Err(f) = consistency {
        return Err(AlgebraError::Unsupported(format!(
            "limit consistency failed at {}",
            f
        )));
    }
    let q = RatFunc::from_poly(MPoly::var(Var::Q));
    Ok(atinf.inverse()?.scale(&q))
}

/// One Pochhammer-type factor of the scalar normalization: the argument is
/// `(-q)^{neg_q_pow} x^{zpow}` with base `p = q^{2n}`, possibly inverted.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoFactor {
    pub neg_q_pow: i64,
    pub zpow: i64,
    pub inverse: bool,
}

/// Factor list and exponent offset of the scalar factor `rho^{(k,k')}(z)`:
/// offset `-k k'/n + min(k,k')`, the four boundary Pochhammers with
/// `b = |k-k'|` and `s = min(k+k', 2n-k-k')`, and `m = min(k,k',n-k,n-k')`
/// theta ratios, each theta split into its Pochhammer triple (the scalar
/// `(p;p)` parts of each ratio cancel pairwise).
pub fn rho_factors(k: usize, kp: usize, n: usize) -> Result<(Rational64, Vec<RhoFactor>), AlgebraError> {
    if n < 2 || !(k == 1 || k == n - 1) || !(kp == 1 || kp == n - 1) {
        return Err(AlgebraError::Unsupported(format!(
            "rho factors need k, k' in {{1, n-1}}; got k={}, k'={}, n={}",
            k, kp, n
        )));
    }
    let b = (k as i64 - kp as i64).abs();
    let s = ((k + kp).min(2 * n - k - kp)) as i64;
    let m = k.min(kp).min(n - k).min(n - kp);
    let offset = Rational64::new(-((k * kp) as i64), n as i64)
        + Rational64::from_integer(k.min(kp) as i64);
    let mut factors = vec![
        RhoFactor { neg_q_pow: b, zpow: -1, inverse: false },
        RhoFactor { neg_q_pow: s, zpow: 1, inverse: false },
        RhoFactor { neg_q_pow: b, zpow: 1, inverse: true },
        RhoFactor { neg_q_pow: s, zpow: -1, inverse: true },
    ];
    for i in 1..=m as i64 {
        let c = 2 * i + b;
        let c_dual = 2 * n as i64 - c;
        // Theta_p(a x^{-1})/Theta_p(a x) with a = (-q)^c expands to four
        // Pochhammer factors once the scalar (p;p) parts cancel.
        factors.push(RhoFactor { neg_q_pow: c, zpow: -1, inverse: false });
        factors.push(RhoFactor { neg_q_pow: c_dual, zpow: 1, inverse: false });
        factors.push(RhoFactor { neg_q_pow: c, zpow: 1, inverse: true });
        factors.push(RhoFactor { neg_q_pow: c_dual, zpow: -1, inverse: true });
    }
    Ok((offset, factors))
}

/// The scalar `rho^{(k,k')}(z)` as a series on the window `[-order, order]`
/// with its rational exponent offset carried symbolically.
///
/// Opposite-direction infinite products multiply into coefficients that are
/// only q-adically convergent (the theta phenomenon), so the coefficients
/// here are polynomials in q exact through `q^(2 n order)`; every dropped
/// contribution has a strictly higher q-power.
pub fn rho_factor(
    k: usize,
    kp: usize,
    n: usize,
    order: usize,
) -> Result<PuiseuxSeries, AlgebraError> {
    let (offset, factors) = rho_factors(k, kp, n)?;
    let q_order = (2 * n * order.max(1)) as i64;
    let w = order as i64;
    // Working width: a term that wanders past `width` must come back through
    // factors whose q-valuation grows quadratically in the excursion.
    let mut excursion = 1i64;
    while n as i64 * excursion * (excursion - 1) <= q_order {
        excursion += 1;
    }
    let width = w + excursion + 2;
    let mut acc: std::collections::BTreeMap<i64, crate::ring::IntPoly> =
        std::collections::BTreeMap::new();
    acc.insert(0, crate::ring::IntPoly::one());
    for f in &factors {
        let terms = euler_terms_qadic(f.neg_q_pow, f.zpow, 2 * n, f.inverse, q_order, width);
        let mut next: std::collections::BTreeMap<i64, crate::ring::IntPoly> =
            std::collections::BTreeMap::new();
        for (ka, ca) in &acc {
            for (kb, cb) in &terms {
                let kk = ka + kb;
                if kk.abs() > width {
                    continue;
                }
                let prod = ca.mul(cb).truncate_qpow(q_order as usize + 1);
                if prod.is_zero() {
                    continue;
                }
                let entry = next
                    .entry(kk)
                    .or_insert_with(crate::ring::IntPoly::zero);
                *entry = entry.add(&prod);
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    let mut out = PuiseuxSeries::zero(-w, w);
    for (kk, c) in acc {
        if kk.abs() <= w {
            out = out
                .add(&PuiseuxSeries::monomial(QScalar::from_poly(c), kk, 1, -w, w))
                .map_err(AlgebraError::Ring)?;
        }
    }
    Ok(out.with_offset(offset))
}

/// Terms of one (possibly inverted) Pochhammer expansion with q-adically
/// truncated polynomial coefficients, kept while the z-excursion stays inside
/// `width` and the q-valuation does not exceed `q_order`.
fn euler_terms_qadic(
    neg_q_pow: i64,
    zpow: i64,
    p_exponent: usize,
    inverse: bool,
    q_order: i64,
    width: i64,
) -> Vec<(i64, crate::ring::IntPoly)> {
    use crate::ring::IntPoly;
    let nq = |e: i64| -> IntPoly {
        // (-q)^e as a polynomial (e >= 0 in all factor lists)
        assert!(e >= 0);
        let sign = if e % 2 == 0 { 1 } else { -1 };
        IntPoly::monomial(BigInt::from(sign), e as usize)
    };
    let p = p_exponent as i64;
    let qcap = q_order as usize + 1;
    let mut out = vec![(0i64, IntPoly::one())];
    let mut r: i64 = 1;
    loop {
        let ze = zpow * r;
        if ze.abs() > width {
            break;
        }
        // (p;p)_r and its inverse as truncated power series in q
        let mut poch = IntPoly::one();
        for j in 1..=r {
            let factor = IntPoly::one().sub(&IntPoly::monomial(BigInt::one(), (p * j) as usize));
            poch = poch.mul(&factor).truncate_qpow(qcap);
        }
        let coeff = if inverse {
            // a^r / (p;p)_r
            let inv = poch.inverse_mod_qpow(qcap).expect("unit constant term");
            nq(neg_q_pow * r).mul(&inv).truncate_qpow(qcap)
        } else {
            // (-1)^r p^{r(r-1)/2} a^r / (p;p)_r
            let inv = poch.inverse_mod_qpow(qcap).expect("unit constant term");
            let tri = (p * r * (r - 1) / 2) as usize;
            let sign = if r % 2 == 0 { 1 } else { -1 };
            if tri >= qcap {
                IntPoly::zero()
            } else {
                IntPoly::monomial(BigInt::from(sign), tri)
                    .mul(&nq(neg_q_pow * r))
                    .mul(&inv)
                    .truncate_qpow(qcap)
            }
        };
        if !coeff.is_zero() {
            out.push((ze, coeff));
        }
        r += 1;
    }
    out
}

/// Numeric evaluation of `rho^{(k,k')}` at exact rational q and z, truncating
/// each infinite product at `terms` factors. The fractional `z^offset`
/// prefactor is returned symbolically as the offset.
pub fn rho_num(
    k: usize,
    kp: usize,
    n: usize,
    q: &num_rational::BigRational,
    z: &num_rational::BigRational,
    terms: usize,
) -> Result<(Rational64, num_rational::BigRational), AlgebraError> {
    use crate::ring::poch_num;
    use num_traits::One;
    let (offset, factors) = rho_factors(k, kp, n)?;
    let p = pow_big(q, 2 * n as i64);
    let mut acc = num_rational::BigRational::one();
    for f in &factors {
        let neg_q = -q.clone();
        let coef = pow_big(&neg_q, f.neg_q_pow);
        let zp = pow_big(z, f.zpow);
        let v = poch_num(&(coef * zp), &p, terms);
        if f.inverse {
            acc /= v;
        } else {
            acc *= v;
        }
    }
    Ok((offset, acc))
}

pub(crate) fn pow_big(x: &num_rational::BigRational, k: i64) -> num_rational::BigRational {
    use num_traits::One;
    let mut acc = num_rational::BigRational::one();
    let b = if k >= 0 { x.clone() } else { x.recip() };
    for _ in 0..k.abs() {
        acc *= &b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};

    fn qv() -> RatFunc {
        RatFunc::from_poly(MPoly::var(Var::Q))
    }

    #[test]
    fn entries_match_thefour_families() {
        let r = build_r(2).unwrap();
        // (e0e0, e0e0) = 1
        assert!(r.get(0, 0).eq_rat(&RatFunc::one()));
        // (e0e1, e0e1) = q(z-1)/(z-q^2)
        assert!(r.get(1, 1).eq_rat(&entry_diag_mixed()));
        // (e0e1, e1e0): row (0,1) col (1,0), i<j family
        assert!(r.get(1, 2).eq_rat(&entry_exchange_low()));
        // (e1e0, e0e1): i>j family
        assert!(r.get(2, 1).eq_rat(&entry_exchange_high()));
    }

    #[test]
    fn ybe_holds_n2() {
        assert!(check_ybe(2).unwrap().is_ok());
    }

    #[test]
    fn ybe_rejects_perturbed_matrix() {
        let mut r = build_r(2).unwrap();
        let v = r.get(1, 2).clone();
        r.set(1, 2, -v);
        let res = check_ybe_of(&r, 2);
        assert!(res.is_err());
        // the failure names an entry
        assert!(res.unwrap_err().location.contains("entry"));
    }

    #[test]
    fn unitarity_n2_and_identity_control() {
        assert!(check_unitarity(2).unwrap().is_ok());
        let id = SpectralMatrix::identity(4);
        assert!(check_unitarity_of(&id, 2).is_ok());
    }

    #[test]
    fn limits_and_consistency_n2() {
        let (at0, atinf, consistency) = limits_r(2).unwrap();
        assert!(consistency.is_ok());
        // direct substitution of the defining entries: the (e0e1, e0e1)
        // entry tends to q^{-1} at z -> 0 and to q at z -> infinity
        assert!(at0.get(1, 1).eq_rat(&qv().inverse().unwrap()));
        assert!(atinf.get(1, 1).eq_rat(&qv()));
        // i<j exchange dies at 0, i>j exchange dies at infinity
        assert!(at0.get(1, 2).is_zero());
        assert!(atinf.get(2, 1).is_zero());
    }

    #[test]
    fn rho_offsets_and_parameters() {
        // k = k' = 1, n = 3: offset -1/3 + 1 = 2/3
        let (offset, _) = rho_factors(1, 1, 3).unwrap();
        assert_eq!(offset, Rational64::new(2, 3));
        // k = 1, k' = 2, n = 3: b = 1, s = min(3, 3) = 3, m = 1
        let (_, factors) = rho_factors(1, 2, 3).unwrap();
        assert_eq!(factors[0].neg_q_pow, 1); // b
        assert_eq!(factors[1].neg_q_pow, 3); // s
        assert_eq!(factors.len(), 4 + 4); // m = min(1,2,2,1) = 1 theta ratio
    }

    #[test]
    fn rho_series_leading_structure() {
        // Every Pochhammer factor opens with 1, but for k = k' the pair
        // (z^{-1};p)/(z;p) collapses to -z^{-1} at leading q-order (the
        // analytic continuation of z(1-z^{-1})/(1-z) = -1 once the offset's
        // z^{+1} is included), so the product part opens with -z^{-1}.
        let s = rho_factor(1, 1, 3, 3).unwrap();
        assert!(s.coeff(0).constant_term().unwrap().is_zero());
        assert_eq!(
            s.coeff(-1).constant_term().unwrap(),
            -num_rational::BigRational::from_integer(1.into())
        );
        assert_eq!(s.offset(), Rational64::new(2, 3));
        // for k != k' every factor has a q-positive argument and the naive
        // opening with +1 survives
        let t = rho_factor(1, 2, 3, 3).unwrap();
        assert_eq!(
            t.coeff(0).constant_term().unwrap(),
            num_rational::BigRational::from_integer(1.into())
        );
    }

    #[test]
    fn rho_series_matches_numeric_probe() {
        // the symbolic window coefficients, summed at (q, z), should approach
        // the numeric product evaluation
        let s = rho_factor(1, 1, 3, 6).unwrap();
        let q = BigRational::new(1.into(), 3.into());
        let z = BigRational::new(1.into(), 2.into());
        let mut sym = BigRational::new(0.into(), 1.into());
        for (e, c) in s.iter() {
            let rel = e - s.offset();
            let zp = pow_big(&z, (rel * Rational64::from_integer(1)).to_integer());
            sym += c.eval(&q).unwrap() * zp;
        }
        let (_, num) = rho_num(1, 1, 3, &q, &z, 40).unwrap();
        let diff = (sym.clone() - num.clone()).abs();
        let tol = BigRational::new(1.into(), num_bigint::BigInt::from(10u64).pow(8));
        assert!(diff < tol, "diff {}", diff);
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(build_r(1).is_err());
    }

    #[test]
    fn rejects_unsupported_rho_parameters() {
        assert!(rho_factors(2, 2, 5).is_err());
    }
}
