//! q-product building blocks: Pochhammer symbols and the theta product, in
//! three flavors.
//!
//! - factor-truncated symbolic products (`pochhammer`, `theta`): exact finite
//!   products `prod_{j<order}(1 - a p^j)`,
//! - exact infinite-product expansions in the series variable
//!   (`pochhammer_euler`): coefficients are closed-form rational functions of
//!   q, so the truncation lives only in the series window,
//! - exact rational numerics (`poch_num`, `theta_num`) used by the
//!   probe-evaluation checks.

use super::qscalar::QScalar;
use super::series::PuiseuxSeries;
use num_rational::BigRational;
use num_traits::One;

/// Factor-truncated `(a x^zpow ; p)_order = prod_{j=0}^{order-1}(1 - a p^j x^zpow)`
/// with `p = q^p_exponent`, expanded on the window `[-(|zpow| order), |zpow| order]`.
///
/// The result is an exact polynomial, so every stored coefficient is exact;
/// `order` controls how many factors of the infinite product are kept.
pub fn pochhammer(coef: &QScalar, zpow: i64, p_exponent: usize, order: usize) -> PuiseuxSeries {
    assert!(p_exponent >= 1, "p must be a positive power of q");
    let mut acc = PuiseuxSeries::exact_constant(QScalar::one());
    if coef.is_zero() {
        return acc;
    }
    for j in 0..order {
        let cj = coef.clone() * QScalar::q_pow((p_exponent * j) as i64);
        let factor = PuiseuxSeries::exact_terms(1, &[(0, QScalar::one()), (zpow, -cj)]);
        acc = acc.mul(&factor).expect("window compatible");
    }
    acc
}

/// Exact expansion of the full infinite product `(a x^zpow ; p)_infty` on the
/// window `[lo, hi]`, via the closed form
/// `sum_r (-1)^r p^(r(r-1)/2) a^r x^(zpow r) / (p;p)_r`.
pub fn pochhammer_euler(
    coef: &QScalar,
    zpow: i64,
    p_exponent: usize,
    lo: i64,
    hi: i64,
) -> PuiseuxSeries {
    assert!(p_exponent >= 1);
    assert!(zpow != 0, "series direction required");
    let mut out = PuiseuxSeries::zero(lo, hi);
    if zpow > 0 && lo <= 0 {
        out = out.assert_exact_floor();
    }
    if zpow < 0 && hi >= 0 {
        out = out.assert_exact_ceil();
    }
    out = out
        .add(&PuiseuxSeries::exact_constant(QScalar::one()))
        .unwrap();
    if coef.is_zero() {
        return out;
    }
    let p = |k: i64| QScalar::q_pow(p_exponent as i64 * k);
    let mut r: i64 = 1;
    let mut a_pow = coef.clone();
    let mut p_tri = QScalar::one(); // p^{r(r-1)/2}
    let mut poch_p = QScalar::one() - p(1); // (p;p)_r
    loop {
        let e = zpow * r;
        if e.abs() > hi.max(-lo) {
            break;
        }
        if e >= lo && e <= hi {
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let c = QScalar::from_int(sign) * p_tri.clone() * a_pow.clone()
                / poch_p.clone();
            let term = PuiseuxSeries::exact_terms(1, &[(e, c)]);
            out = out.add(&term).unwrap().truncate(lo, hi);
        }
        r += 1;
        a_pow = a_pow * coef.clone();
        p_tri = p_tri * p(r - 1);
        poch_p = poch_p * (QScalar::one() - p(r));
    }
    out
}

/// Exact expansion of the reciprocal infinite product `1/(a x^zpow ; p)_infty`
/// on the window `[lo, hi]`, via `sum_r a^r x^(zpow r) / (p;p)_r`.
pub fn pochhammer_euler_inv(
    coef: &QScalar,
    zpow: i64,
    p_exponent: usize,
    lo: i64,
    hi: i64,
) -> PuiseuxSeries {
    assert!(p_exponent >= 1);
    assert!(zpow != 0, "series direction required");
    let mut out = PuiseuxSeries::zero(lo, hi);
    if zpow > 0 && lo <= 0 {
        out = out.assert_exact_floor();
    }
    if zpow < 0 && hi >= 0 {
        out = out.assert_exact_ceil();
    }
    out = out
        .add(&PuiseuxSeries::exact_constant(QScalar::one()))
        .unwrap();
    if coef.is_zero() {
        return out;
    }
    let p = |k: i64| QScalar::q_pow(p_exponent as i64 * k);
    let mut r: i64 = 1;
    let mut a_pow = coef.clone();
    let mut poch_p = QScalar::one() - p(1);
    loop {
        let e = zpow * r;
        if e.abs() > hi.max(-lo) {
            break;
        }
        if e >= lo && e <= hi {
            let c = a_pow.clone() / poch_p.clone();
            let term = PuiseuxSeries::exact_terms(1, &[(e, c)]);
            out = out.add(&term).unwrap().truncate(lo, hi);
        }
        r += 1;
        a_pow = a_pow * coef.clone();
        poch_p = poch_p * (QScalar::one() - p(r));
    }
    out
}

/// Factor-truncated theta product
/// `Theta_p(x) = (x;p)_order (p x^{-1};p)_order (p;p)_order`
/// on the window `[-order, order]`.
pub fn theta(p_exponent: usize, order: usize) -> PuiseuxSeries {
    theta_at(&QScalar::one(), 1, p_exponent, order)
}

/// Factor-truncated theta with the argument `a x^zpow` in place of `x`:
/// `(a x^zpow; p)_order ((p/a) x^{-zpow}; p)_order (p;p)_order`.
pub fn theta_at(coef: &QScalar, zpow: i64, p_exponent: usize, order: usize) -> PuiseuxSeries {
    let a = pochhammer(coef, zpow, p_exponent, order);
    let inv_coef = QScalar::q_pow(p_exponent as i64) / coef.clone();
    let b = pochhammer(&inv_coef, -zpow, p_exponent, order);
    let scalar = poch_qscalar(p_exponent as i64, p_exponent, order);
    a.mul(&b).expect("window compatible").scale(&scalar)
}

/// `(q^j ; q^p)_order` as an exact scalar rational function of q.
pub fn poch_qscalar(j: i64, p_exponent: usize, order: usize) -> QScalar {
    let mut acc = QScalar::one();
    for k in 0..order {
        acc = acc * (QScalar::one() - QScalar::q_pow(j + (p_exponent * k) as i64));
    }
    acc
}

/// `(s q^j ; q^p)_infty` expanded as a series in q itself, exact to q-order
/// `q_order` (factors beyond the order are identically 1 there). `s = +-1`.
pub fn poch_qseries(sign: i64, j: i64, p_exponent: usize, q_order: i64) -> PuiseuxSeries {
    assert!(j >= 1, "argument must vanish at q=0");
    assert!(sign == 1 || sign == -1);
    let mut acc = PuiseuxSeries::zero(0, q_order)
        .assert_exact_floor()
        .add(&PuiseuxSeries::exact_constant(QScalar::one()))
        .unwrap();
    let mut e = j;
    while e <= q_order {
        let factor =
            PuiseuxSeries::exact_terms(1, &[(0, QScalar::one()), (e, QScalar::from_int(-sign))]);
        acc = acc.mul(&factor).unwrap().truncate(0, q_order);
        e += p_exponent as i64;
    }
    acc
}

/// Exact numeric `(a; p)_factors = prod_{j<factors}(1 - a p^j)`.
pub fn poch_num(a: &BigRational, p: &BigRational, factors: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut apj = a.clone();
    for _ in 0..factors {
        acc *= BigRational::one() - &apj;
        apj *= p;
    }
    acc
}

/// Exact numeric theta `(x;p)(p/x;p)(p;p)`, all truncated at `factors`.
pub fn theta_num(x: &BigRational, p: &BigRational, factors: usize) -> BigRational {
    poch_num(x, p, factors) * poch_num(&(p / x), p, factors) * poch_num(p, p, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn two_factor_product_matches_hand_expansion() {
        // (z; q^6)_2 = (1 - z)(1 - z q^6) = 1 - (1 + q^6) z + q^6 z^2
        let s = pochhammer(&QScalar::one(), 1, 6, 2);
        assert_eq!(s.coeff(0), QScalar::one());
        assert_eq!(s.coeff(1), -(QScalar::one() + QScalar::q_pow(6)));
        assert_eq!(s.coeff(2), QScalar::q_pow(6));
        assert!(s.coeff(3).is_zero());
    }

    #[test]
    fn zero_argument_gives_one() {
        let s = pochhammer(&QScalar::zero(), 1, 6, 7);
        assert_eq!(s.coeff(0), QScalar::one());
        assert!(s.coeff(1).is_zero() && s.coeff(2).is_zero());
    }

    #[test]
    fn single_factor() {
        // (q^{-2} z; q^6)_1 = 1 - q^{-2} z
        let s = pochhammer(&QScalar::q_pow(-2), 1, 6, 1);
        assert_eq!(s.coeff(0), QScalar::one());
        assert_eq!(s.coeff(1), -QScalar::q_pow(-2));
    }

    #[test]
    fn euler_expansion_matches_product_limit() {
        // Compare the exact z-coefficient of (z;p)_infty with many factors:
        // coefficient of z is -1/(1-p); with 30 factors the truncated product
        // agrees with the rational expansion of 1/(1-p) up to q^{6*30}.
        let e = pochhammer_euler(&QScalar::one(), 1, 6, 0, 3);
        let c1 = e.coeff(1);
        let expect = -(QScalar::one() / (QScalar::one() - QScalar::q_pow(6)));
        assert_eq!(c1, expect);
    }

    #[test]
    fn theta_inversion_symmetry() {
        // Theta_p(p x^{-1}) = Theta_p(x) holds exactly for truncated factors.
        let t = theta(6, 3);
        let t_inv = theta_at(&QScalar::q_pow(6), -1, 6, 3);
        assert!(t.eq_on_common_window(&t_inv));
    }

    #[test]
    fn theta_leading_factor_at_p_zero() {
        // All coefficients at p -> 0 reduce to 1 - x: constant term 1,
        // x-coefficient -1, with every other entry divisible by q^6.
        let t = theta(6, 4);
        let one = t.coeff(0);
        let c1 = t.coeff(1);
        assert_eq!(one.constant_term().unwrap(), BigRational::one());
        assert_eq!(
            c1.constant_term().unwrap(),
            -BigRational::one()
        );
        assert!(t.coeff(-1).constant_term().unwrap().is_zero());
    }

    #[test]
    fn pochhammer_times_reciprocal_is_one() {
        let s = pochhammer(&QScalar::one(), 1, 6, 5);
        let inv = s.invert_prec(5).unwrap();
        let prod = s.mul(&inv).unwrap();
        assert_eq!(prod.coeff(0), QScalar::one());
        for k in 1..=prod.window().1 {
            assert!(prod.coeff(k).is_zero(), "x^{} residual", k);
        }
    }
}
