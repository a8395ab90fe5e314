use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rational;

/// Dense polynomial in one variable. `coeffs[i]` multiplies `x^i`; the
/// zero polynomial has no coefficients and the leading one is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(roots: &[Rational]) -> Poly {
        roots.iter().fold(Poly::one(), |p, r| p.mul_linear(r))
    }

    /// `self * (x - r)`.
    pub fn mul_linear(&self, r: &Rational) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * r;
        }
        Poly::new(out)
    }

    /// Synthetic division by `x - r`: returns `(quotient, remainder)` with
    /// `self = quotient * (x - r) + remainder`.
    pub fn div_linear(&self, r: &Rational) -> (Poly, Rational) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Poly::zero(), Rational::zero());
        }
        let mut quot = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * r;
            if i == 0 {
                return (Poly::new(quot), v);
            }
            quot[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Coefficients of `self` with respect to the Newton basis
    /// `v_k = (x - nodes[0]) ... (x - nodes[k-1])`, `k = 0..=deg`.
    /// `nodes` must hold at least `deg` entries.
    pub fn to_newton(&self, nodes: &[Rational]) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut rest = self.clone();
        let mut k = 0;
        while !rest.is_zero() {
            if rest.degree() == Some(0) {
                out.push(rest.coeff(0));
                break;
            }
            let (q, r) = rest.div_linear(&nodes[k]);
            out.push(r);
            rest = q;
            k += 1;
        }
        out
    }

    /// Inverse of [`Poly::to_newton`].
    pub fn from_newton(coeffs: &[Rational], nodes: &[Rational]) -> Poly {
        let mut acc = Poly::zero();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if !acc.is_zero() {
                acc = acc.mul_linear(&nodes[k]);
            }
            acc = acc + Poly::constant(c.clone());
        }
        acc
    }

    /// Product with every term of degree `>= len` dropped.
    pub fn mul_trunc(&self, other: &Poly, len: usize) -> Poly {
        let mut out = vec![Rational::zero(); len.min(self.coeffs.len() + other.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= out.len() {
                break;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        self.mul_trunc(rhs, self.coeffs.len() + rhs.coeffs.len() - 1)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use proptest::prelude::*;

    fn p(cs: &[(i64, i64)]) -> Poly {
        Poly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn zero_annihilates() {
        let x1 = p(&[(1, 1), (1, 1)]);
        assert!((&x1 * &Poly::zero()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(-1, 1), (1, 1)]);
        let b = p(&[(1, 1), (1, 1)]);
        assert_eq!(&a * &b, p(&[(-1, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn addition_cancels() {
        let a = p(&[(1, 3), (2, 1)]);
        let b = p(&[(-1, 3), (1, 1)]);
        assert_eq!(&a + &b, p(&[(0, 1), (3, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn evaluation() {
        assert_eq!(Poly::zero().eval(&rat(7, 3)), Rational::zero());
        assert_eq!(p(&[(-1, 1), (0, 1), (1, 1)]).eval(&rat(1, 1)), Rational::zero());
        assert_eq!(p(&[(1, 2), (3, 1)]).eval(&rat(1, 3)), rat(3, 2));
    }

    #[test]
    fn roots() {
        assert_eq!(Poly::from_roots(&[]), Poly::one());
        assert_eq!(Poly::from_roots(&[rat(0, 1), rat(0, 1)]), Poly::monomial(rat(1, 1), 2));
        assert_eq!(Poly::from_roots(&[rat(1, 1), rat(1, 2)]), p(&[(1, 2), (-3, 2), (1, 1)]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(1, 2), (-3, 2), (1, 1)]).to_string(), "x^2 - 3/2*x + 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p(&[(0, 1), (-1, 1)]).to_string(), "-x");
    }

    #[test]
    fn synthetic_division() {
        let f = p(&[(5, 1), (0, 1), (-2, 1), (1, 1)]);
        let r = rat(3, 2);
        let (q, rem) = f.div_linear(&r);
        assert_eq!(rem, f.eval(&r));
        assert_eq!(&q.mul_linear(&r) + &Poly::constant(rem), f);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    fn poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(small(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(a in poly(), b in poly(), t in small()) {
            prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        }

        #[test]
        fn degree_of_product(a in poly(), b in poly()) {
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!((&a * &b).degree(), Some(da + db));
            }
        }

        #[test]
        fn from_roots_vanishes(rs in proptest::collection::vec(small(), 0..6)) {
            let f = Poly::from_roots(&rs);
            prop_assert_eq!(f.degree(), Some(rs.len()));
            for r in &rs {
                prop_assert!(f.eval(r).is_zero());
            }
        }

        #[test]
        fn newton_round_trip(a in poly(), nodes in proptest::collection::vec(small(), 6)) {
            let c = a.to_newton(&nodes);
            prop_assert_eq!(Poly::from_newton(&c, &nodes), a);
        }
    }
}
