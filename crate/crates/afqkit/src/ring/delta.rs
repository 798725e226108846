//! The formal delta distribution `delta(x) = sum_{m in Z} x^m` at scalar
//! level: multiplying by a finite Laurent polynomial f evaluates f at 1.

use super::qscalar::QScalar;

/// A scalar multiple of the formal delta distribution in one variable.
#[derive(Clone, PartialEq, Debug)]
pub struct DeltaTerm {
    pub scale: QScalar,
}

impl DeltaTerm {
    pub fn unit() -> Self {
        DeltaTerm {
            scale: QScalar::one(),
        }
    }

    pub fn new(scale: QScalar) -> Self {
        DeltaTerm { scale }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }
}

/// `f(x) * delta(x) = f(1) * delta(x)` for a finite Laurent polynomial given
/// as (exponent, coefficient) pairs.
pub fn delta_apply(f: &[(i64, QScalar)], d: &DeltaTerm) -> DeltaTerm {
    let mut at_one = QScalar::zero();
    for (_, c) in f {
        at_one = at_one + c.clone();
    }
    DeltaTerm {
        scale: d.scale.clone() * at_one,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_polynomial_kills_delta() {
        // (x - 1) delta(x) = 0
        let f = vec![(1, QScalar::one()), (0, QScalar::from_int(-1))];
        let d = delta_apply(&f, &DeltaTerm::unit());
        assert!(d.is_zero());
    }

    #[test]
    fn identity_fixes_delta() {
        let f = vec![(0, QScalar::one())];
        let d = delta_apply(&f, &DeltaTerm::unit());
        assert_eq!(d, DeltaTerm::unit());
    }

    #[test]
    fn evaluates_at_one() {
        // (x^2 + x^{-2}) delta(x) = 2 delta(x)
        let f = vec![(2, QScalar::one()), (-2, QScalar::one())];
        let d = delta_apply(&f, &DeltaTerm::unit());
        assert_eq!(d.scale, QScalar::from_int(2));
    }

    #[test]
    fn multiplicative_in_the_polynomial() {
        // delta_apply(fg) = delta_apply(f, delta_apply(g))
        let f = vec![(1, QScalar::q_pow(1)), (0, QScalar::from_int(3))];
        let g = vec![(-1, QScalar::q_pow(-1)), (2, QScalar::from_int(-1))];
        // fg as a Laurent polynomial
        let mut fg = std::collections::BTreeMap::new();
        for (ef, cf) in &f {
            for (eg, cg) in &g {
                let e = ef + eg;
                let add = cf.clone() * cg.clone();
                let cur = fg.remove(&e).unwrap_or_else(QScalar::zero) + add;
                fg.insert(e, cur);
            }
        }
        let fg: Vec<_> = fg.into_iter().collect();
        let lhs = delta_apply(&fg, &DeltaTerm::unit());
        let rhs = delta_apply(&f, &delta_apply(&g, &DeltaTerm::unit()));
        assert_eq!(lhs, rhs);
    }
}
