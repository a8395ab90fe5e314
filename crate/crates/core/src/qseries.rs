//! q-shifted factorials and terminating basic hypergeometric series.
//!
//! - [`QValue`] carries the base and, when available, an exact `q^(1/2)`.
//! - [`terminating_rphis`] sums `r phi s` with the standard
//!   `((-1)^k q^(k(k-1)/2))^(1+s-r)` factor.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactfield::Rational;

/// The base `q`, with an optional exact square root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QValue {
    q: Rational,
    sqrt_q: Option<Rational>,
}

fn check_q(q: &Rational) -> Result<(), Error> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::InvalidQ(q.to_string()));
    }
    Ok(())
}

impl QValue {
    /// Uses the positive root as `sqrt_q` when `q` is a rational square.
    pub fn from_q(q: Rational) -> Result<Self, Error> {
        check_q(&q)?;
        let sqrt_q = q.sqrt_exact();
        Ok(QValue { q, sqrt_q })
    }

    /// `q = p^2`, keeping the given sign of `p`.
    pub fn from_sqrt(p: Rational) -> Result<Self, Error> {
        let q = &p * &p;
        check_q(&q)?;
        Ok(QValue { q, sqrt_q: Some(p) })
    }

    pub fn new(q: Rational, sqrt_q: Option<Rational>) -> Result<Self, Error> {
        check_q(&q)?;
        if let Some(p) = &sqrt_q {
            if p * p != q {
                return Err(Error::SqrtMismatch);
            }
        }
        Ok(QValue { q, sqrt_q })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn sqrt_q(&self) -> Result<&Rational, Error> {
        self.sqrt_q.as_ref().ok_or(Error::MissingSqrtQ)
    }

    pub fn has_sqrt(&self) -> bool {
        self.sqrt_q.is_some()
    }
}

/// `(b; q)_k = (1 - b)(1 - bq)...(1 - bq^(k-1))`.
pub fn q_pochhammer(b: &Rational, q: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut t = b.clone();
    for _ in 0..k {
        acc *= Rational::one() - &t;
        t *= q;
    }
    acc
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_(n-k))`.
pub fn q_binomial(n: usize, k: usize, q: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    q_pochhammer(q, q, n) / (q_pochhammer(q, q, k) * q_pochhammer(q, q, n - k))
}

/// The `n` with `q^(-n) = t`, searched up to `limit`.
pub fn terminating_degree(t: &Rational, q: &Rational, limit: usize) -> Option<usize> {
    let mut p = Rational::one();
    for n in 0..=limit {
        if &p == t {
            return Some(n);
        }
        p /= q;
    }
    None
}

/// Sum of the series with numerator parameters `num` (where
/// `num[0] = q^(-n)`) and denominator parameters `den`, evaluated at `z`.
pub fn terminating_rphis(num: &[Rational], den: &[Rational], q: &Rational, z: &Rational) -> Result<Rational, Error> {
    let first = num
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty numerator list".into()))?;
    let n = terminating_degree(first, q, 256)
        .ok_or_else(|| Error::InvalidParameter(format!("first numerator parameter {first} is not q^(-n)")))?;
    rphis_partial(num, den, q, z, n)
}

/// Sum of the terms `k = 0..=n`. A term whose numerator vanishes ends the
/// sum before any denominator is inspected.
pub fn rphis_partial(
    num: &[Rational],
    den: &[Rational],
    q: &Rational,
    z: &Rational,
    n: usize,
) -> Result<Rational, Error> {
    let power = den.len() as i64 + 1 - num.len() as i64;
    let one = Rational::one();
    let mut total = one.clone();
    let mut term = one.clone();
    let mut qk = one.clone(); // q^(k-1) at step k
    for k in 1..=n {
        let top: Rational = num.iter().map(|a| &one - a * &qk).product();
        if top.is_zero() {
            break;
        }
        let bottom: Rational = den.iter().map(|b| &one - b * &qk).product::<Rational>() * (&one - &qk * q);
        if bottom.is_zero() {
            return Err(Error::DenominatorPole { k });
        }
        let sign = (-&qk).pow(power);
        term = term * top / bottom * z * sign;
        total += &term;
        qk *= q;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(q_pochhammer(&rat(7, 3), &rat(1, 2), 0), Rational::one());
        for k in 1..5 {
            assert!(q_pochhammer(&rat(1, 1), &rat(1, 3), k).is_zero());
        }
        assert_eq!(q_pochhammer(&rat(3, 1), &rat(2, 1), 3), rat(-110, 1));
    }

    #[test]
    fn degree_zero_series_is_one() {
        let q = rat(1, 2);
        let v = terminating_rphis(&[Rational::one(), rat(5, 1)], &[rat(3, 1)], &q, &rat(7, 1)).unwrap();
        assert_eq!(v, Rational::one());
    }

    #[test]
    fn unit_numerator_kills_tail() {
        let q = rat(1, 3);
        let v = terminating_rphis(
            &[q.pow(-4), Rational::one(), rat(2, 1)],
            &[rat(5, 1), rat(-7, 2)],
            &q,
            &rat(11, 1),
        )
        .unwrap();
        assert_eq!(v, Rational::one());
    }

    #[test]
    fn two_phi_one_by_hand() {
        let q = rat(1, 2);
        let v = terminating_rphis(&[q.pow(-1), rat(3, 1)], &[rat(5, 1)], &q, &q).unwrap();
        assert_eq!(v, rat(1, 2));
    }

    #[test]
    fn pole_is_reported() {
        let q = rat(1, 2);
        // (b;q)_2 vanishes for b = 2 = q^(-1)
        let err = terminating_rphis(&[q.pow(-3), rat(3, 1)], &[rat(2, 1)], &q, &q).unwrap_err();
        assert_eq!(err, Error::DenominatorPole { k: 2 });
    }

    #[test]
    fn first_parameter_must_terminate() {
        let q = rat(1, 2);
        assert!(terminating_rphis(&[rat(3, 1)], &[], &q, &q).is_err());
    }

    #[test]
    fn qvalue_roots() {
        let v = QValue::from_q(rat(1, 4)).unwrap();
        assert_eq!(v.sqrt_q().unwrap(), &rat(1, 2));
        assert_eq!(QValue::from_q(rat(1, 2)).unwrap().sqrt_q(), Err(Error::MissingSqrtQ));
        assert_eq!(QValue::from_sqrt(rat(-2, 3)).unwrap().q(), &rat(4, 9));
        assert!(QValue::from_q(rat(-1, 1)).is_err());
        assert!(QValue::from_sqrt(rat(1, 1)).is_err());
        assert_eq!(QValue::new(rat(1, 4), Some(rat(1, 3))), Err(Error::SqrtMismatch));
    }

    #[test]
    fn q_binomial_row() {
        let q = rat(2, 1);
        // [4 choose 2]_2 = (1+q^2)(1+q+q^2) = 35
        assert_eq!(q_binomial(4, 2, &q), rat(35, 1));
        assert_eq!(q_binomial(3, 0, &q), Rational::one());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn paired_parameters_cancel(
            n in 0usize..6,
            a in small(),
            b in small(),
            c in small(),
            z in small(),
        ) {
            let q = rat(2, 5);
            prop_assume!(!q_pochhammer(&c, &q, n).is_zero());
            let num = [q.pow(-(n as i64)), a.clone()];
            let den = [b.clone()];
            let plain = terminating_rphis(&num, &den, &q, &z);
            let paired = terminating_rphis(&[num[0].clone(), a, c.clone()], &[b, c], &q, &z);
            if let (Ok(x), Ok(y)) = (plain, paired) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
