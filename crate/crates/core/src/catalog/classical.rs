use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    al_salam_carlitz_data, askey_wilson_data, big_q_jacobi_data, q_charlier_data, AWParams, BigQJacobiParams, Params,
};
use crate::error::Error;
use crate::exactfield::{Poly, Rational};
use crate::qseries::{q_binomial, q_pochhammer, rphis_partial, QValue};
use crate::report::Report;
use crate::verdestar::VerdeStarData;

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn one() -> Rational {
    Rational::one()
}

/// `R_n(z; t | q)` for a raw parameter tuple.
pub fn aw_series(z: &Rational, t: [&Rational; 4], q: &Rational, n: usize) -> Result<Rational, Error> {
    if z.is_zero() {
        return Err(Error::PoleAtZ("z = 0".into()));
    }
    let [a, b, c, d] = t;
    let n_i = n as i64;
    rphis_partial(
        &[q.pow(-n_i), q.pow(n_i - 1) * a * b * c * d, a * z, a / z],
        &[a * b, a * c, a * d],
        q,
        q,
        n,
    )
}

/// `P_n(x; a, b, c; q)` for raw parameters.
pub fn big_q_jacobi_series(
    x: &Rational,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    q: &Rational,
    n: usize,
) -> Result<Rational, Error> {
    let n_i = n as i64;
    rphis_partial(
        &[q.pow(-n_i), q.pow(n_i + 1) * a * b, x.clone()],
        &[q * a, q * c],
        q,
        q,
        n,
    )
}

/// Askey-Wilson `R_n(z)`.
#[allow(non_snake_case)]
pub fn eval_R(z: &Rational, p: &AWParams, n: usize) -> Result<Rational, Error> {
    aw_series(z, p.tuple(), p.q.q(), n)
}

/// Big q-Jacobi `P_n(x)`.
#[allow(non_snake_case)]
pub fn eval_P(x: &Rational, p: &BigQJacobiParams, n: usize) -> Result<Rational, Error> {
    big_q_jacobi_series(x, &p.a, &p.b, &p.c, p.q.q(), n)
}

/// Little q-Jacobi `p_n(x; a, b; q)`.
pub fn eval_little_qj(x: &Rational, a: &Rational, b: &Rational, q: &Rational, n: usize) -> Result<Rational, Error> {
    let n_i = n as i64;
    rphis_partial(&[q.pow(-n_i), q.pow(n_i + 1) * a * b], &[q * a], q, &(q * x), n)
}

fn joukowski(z: &Rational) -> Rational {
    z + z.recip()
}

/// The Askey-Wilson q-difference operator applied to `f` (a polynomial in
/// `x = z + 1/z`), evaluated at `z`.
pub fn aw_difference_op(p: &AWParams, f: &Poly, z: &Rational) -> Result<Rational, Error> {
    let q = p.q.q();
    let z2 = z * z;
    if z.is_zero() || z2.is_one() || (q * &z2).is_one() || &z2 == q {
        return Err(Error::PoleAtZ(z.to_string()));
    }
    let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
    let o = one();
    let f0 = f.eval(&joukowski(z));
    let fu = f.eval(&joukowski(&(q * z)));
    let fd = f.eval(&joukowski(&(z / q)));
    let up = (&o - a * z) * (&o - b * z) * (&o - c * z) * (&o - d * z) / ((&o - &z2) * (&o - q * &z2));
    let down = (a - z) * (b - z) * (c - z) * (d - z) / ((&o - &z2) * (q - &z2));
    Ok((&o + a * b * c * d / q) * &f0 + up * (fu - &f0) + down * (fd - &f0))
}

/// The big q-Jacobi q-difference operator applied to `f`, evaluated at `x`.
pub fn bigqj_difference_op(p: &BigQJacobiParams, f: &Poly, x: &Rational) -> Result<Rational, Error> {
    if x.is_zero() {
        return Err(Error::PoleAtZ("x = 0".into()));
    }
    let q = p.q.q();
    let (a, b, c) = (&p.a, &p.b, &p.c);
    let o = one();
    let x2 = x * x;
    let f0 = f.eval(x);
    let fu = f.eval(&(q * x));
    let fd = f.eval(&(x / q));
    let up = q * a * (x - &o) * (b * x - c) / &x2;
    let down = (x - q * a) * (x - q * c) / &x2;
    Ok((&o + q * a * b) * &f0 + up * (fu - &f0) + down * (fd - &f0))
}

fn eigen_suite(
    name: &str,
    data: &VerdeStarData,
    n_max: usize,
    points: &[Rational],
    to_x: impl Fn(&Rational) -> Rational,
    op: impl Fn(&Poly, &Rational) -> Result<Rational, Error>,
    series: impl Fn(&Rational, usize) -> Result<Rational, Error>,
) -> Report {
    let mut r = Report::new(name);
    let x0 = data.node_x(0);
    for n in 0..=n_max {
        let Some(u) = r.with_result(data.monic_u(n)) else {
            return r;
        };
        let lu = data.apply_l(&u);
        let h = data.eigen_h(n);
        r.check(lu == u.scale(&h), || format!("L u_{n} != h_{n} u_{n}"));
        let u0 = u.eval(&x0);
        for t in points {
            let x = to_x(t);
            let Some(direct) = r.with_result(op(&u, t)) else {
                return r;
            };
            r.check(direct == lu.eval(&x), || {
                format!("operator and Newton-basis L differ at n={n}, point {t}")
            });
            r.check(direct == &h * u.eval(&x), || {
                format!("u_{n} not an eigenfunction at point {t}")
            });
            if !u0.is_zero() {
                let Some(s) = r.with_result(series(t, n)) else { return r };
                r.check(u.eval(&x) / &u0 == s, || {
                    format!("normalized u_{n} differs from the series at {t}")
                });
            }
        }
    }
    r
}

/// Checks `L u_n = h_n u_n` for the Askey-Wilson data both through the
/// Newton basis and through the explicit operator, and compares the
/// normalized `u_n` with `R_n`.
pub fn aw_operator_check(p: &AWParams, n_max: usize, zs: &[Rational]) -> Report {
    let name = "askey-wilson operator";
    let data = match askey_wilson_data(p) {
        Ok(d) => d,
        Err(e) => {
            let mut r = Report::new(name);
            r.fail(e);
            return r;
        }
    };
    eigen_suite(
        name,
        &data,
        n_max,
        zs,
        joukowski,
        |f, z| aw_difference_op(p, f, z),
        |z, n| eval_R(z, p, n),
    )
}

/// Big q-Jacobi counterpart of [`aw_operator_check`].
pub fn bigqj_operator_check(p: &BigQJacobiParams, n_max: usize, xs: &[Rational]) -> Report {
    let name = "big q-Jacobi operator";
    let data = match big_q_jacobi_data(p) {
        Ok(d) => d,
        Err(e) => {
            let mut r = Report::new(name);
            r.fail(e);
            return r;
        }
    };
    eigen_suite(
        name,
        &data,
        n_max,
        xs,
        Rational::clone,
        |f, x| bigqj_difference_op(p, f, x),
        |x, n| eval_P(x, p, n),
    )
}

fn nonzero(v: Rational, n: usize) -> Result<Rational, Error> {
    if v.is_zero() {
        Err(Error::RecurrencePole { n })
    } else {
        Ok(v)
    }
}

/// Three-term recurrence of `R_n` for `n = 1..=n_max` plus its reduced
/// `n = 0` form.
pub fn aw_recurrence_check(p: &AWParams, n_max: usize, zs: &[Rational]) -> Result<Report, Error> {
    let q = p.q.q();
    let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
    let e = a * b * c * d;
    let o = one();
    let mut r = Report::new("askey-wilson recurrence");
    for n in 1..=n_max {
        let k = n as i64;
        let qn = q.pow(k);
        let qn1 = q.pow(k - 1);
        let den_a = nonzero(a * (&o - q.pow(2 * k - 1) * &e) * (&o - q.pow(2 * k) * &e), n)?;
        let den_c = nonzero((&o - q.pow(2 * k - 2) * &e) * (&o - q.pow(2 * k - 1) * &e), n)?;
        let big_a = (&o - &qn * a * b) * (&o - &qn * a * c) * (&o - &qn * a * d) * (&o - &qn1 * &e) / den_a;
        let big_c = a * (&o - &qn) * (&o - &qn1 * b * c) * (&o - &qn1 * b * d) * (&o - &qn1 * c * d) / den_c;
        for z in zs {
            let rn = eval_R(z, p, n)?;
            let lhs = joukowski(z) * &rn;
            let rhs =
                joukowski(a) * &rn + &big_a * (eval_R(z, p, n + 1)? - &rn) + &big_c * (eval_R(z, p, n - 1)? - &rn);
            r.check(lhs == rhs, || format!("recurrence fails at n={n}, z={z}"));
        }
    }
    let den = nonzero(a * (&o - &e), 0)?;
    let coeff = (&o - a * b) * (&o - a * c) * (&o - a * d) / den;
    for z in zs {
        let rhs = joukowski(a) + &coeff * (eval_R(z, p, 1)? - &o);
        r.check(joukowski(z) == rhs, || format!("reduced n=0 recurrence fails at z={z}"));
    }
    Ok(r)
}

/// Coefficients `(A_n, C_n)` of the big q-Jacobi recurrence.
pub fn bigqj_recurrence_coeffs(p: &BigQJacobiParams, n: usize) -> Result<(Rational, Rational), Error> {
    let q = p.q.q();
    let (a, b, c) = (&p.a, &p.b, &p.c);
    let ab = a * b;
    let o = one();
    let k = n as i64;
    let qn = q.pow(k);
    let qn1 = q.pow(k + 1);
    let den_a = nonzero((&o - q.pow(2 * k + 1) * &ab) * (&o - q.pow(2 * k + 2) * &ab), n)?;
    let den_c = nonzero((&o - q.pow(2 * k) * &ab) * (&o - q.pow(2 * k + 1) * &ab), n)?;
    let big_a = (&o - &qn1 * a) * (&o - &qn1 * &ab) * (&o - &qn1 * c) / den_a;
    // c (1 - q^n ab / c) written as (c - q^n ab) so that c = 0 is allowed
    let big_c = -(&qn1 * a * (&o - &qn) * (c - &qn * &ab) * (&o - &qn * b)) / den_c;
    Ok((big_a, big_c))
}

/// Three-term recurrence of `P_n` for `n = 1..=n_max` plus its reduced
/// `n = 0` form.
pub fn bigqj_recurrence_check(p: &BigQJacobiParams, n_max: usize, xs: &[Rational]) -> Result<Report, Error> {
    let q = p.q.q();
    let o = one();
    let mut r = Report::new("big q-Jacobi recurrence");
    for n in 1..=n_max {
        let (big_a, big_c) = bigqj_recurrence_coeffs(p, n)?;
        for x in xs {
            let pn = eval_P(x, p, n)?;
            let rhs = &pn + &big_a * (eval_P(x, p, n + 1)? - &pn) + &big_c * (eval_P(x, p, n - 1)? - &pn);
            r.check(x * &pn == rhs, || format!("recurrence fails at n={n}, x={x}"));
        }
    }
    let den = nonzero(&o - q * q * &p.a * &p.b, 0)?;
    let coeff = (&o - q * &p.a) * (&o - q * &p.c) / den;
    for x in xs {
        let rhs = &o + &coeff * (eval_P(x, p, 1)? - &o);
        r.check(x == &rhs, || format!("reduced n=0 recurrence fails at x={x}"));
    }
    Ok(r)
}

/// The two-term weighted recurrence of `P_n(x; -1, -1, 0; q)`.
pub fn dual_q2_hermite_recurrence_check(q: &QValue, n_max: usize, xs: &[Rational]) -> Result<Report, Error> {
    let p = BigQJacobiParams {
        a: int(-1),
        b: int(-1),
        c: Rational::zero(),
        q: q.clone(),
    };
    let qq = q.q();
    let o = one();
    let mut r = Report::new("dual continuous q^2-Hermite recurrence");
    for n in 1..=n_max {
        let t = qq.pow(2 * n as i64 + 1);
        let den = nonzero(&o - &t, n)?;
        for x in xs {
            let lhs = x * eval_P(x, &p, n)?;
            let rhs = (eval_P(x, &p, n + 1)? - &t * eval_P(x, &p, n - 1)?) / &den;
            r.check(lhs == rhs, || format!("recurrence fails at n={n}, x={x}"));
        }
    }
    Ok(r)
}

/// `P_n(x; a, a, -a)`: recurrence without a middle term and the reflection
/// `P_n(-x) = (-1)^n P_n(x)`; `P_1(x; -1, -1, c)` has no such reflection.
pub fn symmetric_big_q_jacobi_check(
    a: &Rational,
    c: &Rational,
    q: &QValue,
    n_max: usize,
    xs: &[Rational],
) -> Result<Report, Error> {
    let p = BigQJacobiParams::new(a.clone(), a.clone(), -a, q.clone())?;
    let mut r = Report::new("symmetric big q-Jacobi");
    for n in 1..=n_max {
        let (big_a, big_c) = bigqj_recurrence_coeffs(&p, n)?;
        r.check((one() - &big_a - &big_c).is_zero(), || {
            format!("middle coefficient nonzero at n={n}")
        });
    }
    for n in 0..=n_max {
        let sign = if n % 2 == 0 { one() } else { int(-1) };
        for x in xs {
            r.check(eval_P(&-x, &p, n)? == &sign * eval_P(x, &p, n)?, || {
                format!("reflection fails at n={n}, x={x}")
            });
        }
    }
    if !c.is_zero() {
        let s = BigQJacobiParams::new(int(-1), int(-1), c.clone(), q.clone())?;
        let broken = xs
            .iter()
            .map(|x| Ok(eval_P(&-x, &s, 1)? != -eval_P(x, &s, 1)?))
            .collect::<Result<Vec<bool>, Error>>()?;
        r.check(broken.iter().any(|b| *b), || {
            format!("P_1(x;-1,-1,{c}) unexpectedly odd")
        });
    }
    Ok(r)
}

/// Named classical identities between the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalIdentity {
    /// `R_n(-z; a, b, -a, -b) = (-1)^n R_n(z; a, b, -a, -b)`.
    SymmetricAwReflection,
    /// `P_n(x; a, b, c) = P_n(x; c, ab/c, a)`, also with `b -> bc`.
    BigQJacobiSwap,
    /// Rescaling `x -> bx/c` of big q-Jacobi, in both displayed forms.
    BigQJacobiRescale,
    /// `R_n` under `a <-> b`.
    AwSwap,
    /// `P_n(x; a, a, -a)` as a balanced series, and its reflection symmetry.
    SymmetricBigQJacobi,
    /// Big q-Jacobi at `c = 0` as rescaled little q-Jacobi.
    LittleQJacobi,
}

impl ClassicalIdentity {
    pub const ALL: [ClassicalIdentity; 6] = [
        ClassicalIdentity::SymmetricAwReflection,
        ClassicalIdentity::BigQJacobiSwap,
        ClassicalIdentity::BigQJacobiRescale,
        ClassicalIdentity::AwSwap,
        ClassicalIdentity::SymmetricBigQJacobi,
        ClassicalIdentity::LittleQJacobi,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            ClassicalIdentity::SymmetricAwReflection => "symmetric-aw-reflection",
            ClassicalIdentity::BigQJacobiSwap => "big-q-jacobi-swap",
            ClassicalIdentity::BigQJacobiRescale => "big-q-jacobi-rescale",
            ClassicalIdentity::AwSwap => "aw-swap",
            ClassicalIdentity::SymmetricBigQJacobi => "symmetric-big-q-jacobi",
            ClassicalIdentity::LittleQJacobi => "little-q-jacobi",
        }
    }

    pub fn params(&self) -> &'static [&'static str] {
        match self {
            ClassicalIdentity::SymmetricAwReflection => &["a", "b"],
            ClassicalIdentity::BigQJacobiSwap | ClassicalIdentity::BigQJacobiRescale => &["a", "b", "c"],
            ClassicalIdentity::AwSwap => &["a", "b", "c", "d"],
            ClassicalIdentity::SymmetricBigQJacobi => &["a"],
            ClassicalIdentity::LittleQJacobi => &["a", "b"],
        }
    }
}

fn keyed<T: Copy>(all: &[T], key: impl Fn(&T) -> &'static str, s: &str, what: &str) -> Result<T, Error> {
    all.iter().copied().find(|t| key(t) == s).ok_or_else(|| {
        let names: Vec<&str> = all.iter().map(&key).collect();
        Error::Parse(format!("unknown {what} {s:?}; expected one of {}", names.join(", ")))
    })
}

impl FromStr for ClassicalIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        keyed(&Self::ALL, Self::key, s, "identity")
    }
}

impl fmt::Display for ClassicalIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

fn take<const N: usize>(params: &Params, names: &[&str]) -> Result<[Rational; N], Error> {
    let v: Vec<Rational> = names
        .iter()
        .map(|n| {
            params
                .get(*n)
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {n}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(v.try_into().expect("length matches"))
}

fn sign_pow(n: usize) -> Rational {
    if n.is_multiple_of(2) {
        one()
    } else {
        int(-1)
    }
}

fn poch(b: &Rational, q: &Rational, n: usize) -> Rational {
    q_pochhammer(b, q, n)
}

fn ratio(num: Rational, den: Rational) -> Result<Rational, Error> {
    if den.is_zero() {
        return Err(Error::DenominatorPole { k: 0 });
    }
    Ok(num / den)
}

fn identity_sides(
    id: ClassicalIdentity,
    q: &Rational,
    v: &[Rational],
    t: &Rational,
    n: usize,
) -> Result<Vec<(Rational, Rational)>, Error> {
    let n_i = n as i64;
    let bqj = |x: &Rational, a: &Rational, b: &Rational, c: &Rational| big_q_jacobi_series(x, a, b, c, q, n);
    Ok(match id {
        ClassicalIdentity::SymmetricAwReflection => {
            let (a, b) = (&v[0], &v[1]);
            let (na, nb) = (-a, -b);
            let tup = [a, b, &na, &nb];
            vec![(aw_series(&-t, tup, q, n)?, sign_pow(n) * aw_series(t, tup, q, n)?)]
        }
        ClassicalIdentity::BigQJacobiSwap => {
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            let bc = b * c;
            vec![
                (bqj(t, a, b, c)?, bqj(t, c, &(a * b / c), a)?),
                (bqj(t, a, &bc, c)?, bqj(t, c, &(b * a), a)?),
            ]
        }
        ClassicalIdentity::BigQJacobiRescale => {
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            let pre = ratio(
                (c / b).pow(n_i) * poch(&(q * a * b / c), q, n) * poch(&(q * b), q, n),
                poch(&(q * a), q, n) * poch(&(q * c), q, n),
            )?;
            let first = (bqj(t, a, b, c)?, pre * bqj(&(b * t / c), &(a * b / c), c, b)?);
            let left = c.pow(-n_i) * poch(&(q * a * c), q, n) * poch(&(q * c), q, n) * bqj(&(c * t), &(a * c), b, c)?;
            let right = b.pow(-n_i) * poch(&(q * a * b), q, n) * poch(&(q * b), q, n) * bqj(&(b * t), &(a * b), c, b)?;
            vec![first, (left, right)]
        }
        ClassicalIdentity::AwSwap => {
            let (a, b, c, d) = (&v[0], &v[1], &v[2], &v[3]);
            let pre = ratio(
                (a / b).pow(n_i) * poch(&(b * c), q, n) * poch(&(b * d), q, n),
                poch(&(a * c), q, n) * poch(&(a * d), q, n),
            )?;
            vec![(
                aw_series(t, [a, b, c, d], q, n)?,
                pre * aw_series(t, [b, a, c, d], q, n)?,
            )]
        }
        ClassicalIdentity::SymmetricBigQJacobi => {
            let a = &v[0];
            let lhs = bqj(t, a, a, &-a)?;
            let series = rphis_partial(
                &[q.pow(-n_i), q.pow(n_i + 1) * a * a, t.clone()],
                &[q * a, -(q * a)],
                q,
                q,
                n,
            )?;
            vec![(lhs.clone(), series), (bqj(&-t, a, a, &-a)?, sign_pow(n) * lhs)]
        }
        ClassicalIdentity::LittleQJacobi => {
            let (a, b) = (&v[0], &v[1]);
            let tri = n_i * (n_i + 1) / 2;
            let pre = ratio((-a).pow(n_i) * q.pow(tri) * poch(&(q * b), q, n), poch(&(q * a), q, n))?;
            let little = eval_little_qj(&(t / (q * a)), b, a, q, n)?;
            vec![(pre * little, bqj(t, a, b, &Rational::zero())?)]
        }
    })
}

/// Evaluates both sides of `id` at every point and degree `n <= n_max`.
/// Evaluation errors are reported as failures.
pub fn verify_classical_identity(
    id: ClassicalIdentity,
    q: &QValue,
    params: &Params,
    points: &[Rational],
    n_max: usize,
) -> Report {
    let mut r = Report::new(format!("identity {id}"));
    let vals: Vec<Rational> = match id
        .params()
        .iter()
        .map(|n| params.get(*n).cloned())
        .collect::<Option<_>>()
    {
        Some(v) => v,
        None => {
            r.fail(format!("{id} needs parameters {}", id.params().join(",")));
            return r;
        }
    };
    for n in 0..=n_max {
        for t in points {
            match identity_sides(id, q.q(), &vals, t, n) {
                Ok(pairs) => {
                    for (i, (lhs, rhs)) in pairs.iter().enumerate() {
                        r.check(lhs == rhs, || {
                            format!("form {} at n={n}, point {t}: {lhs} != {rhs}", i + 1)
                        });
                    }
                }
                Err(e) => r.fail(format!("n={n}, point {t}: {e}")),
            }
        }
    }
    r
}

/// The `q -> q^2` transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadraticTransform {
    /// Continuous q^2-Jacobi as Askey-Wilson at base q^2.
    Q2Jacobi,
    /// Continuous q^2-Laguerre.
    Q2Laguerre,
    /// Continuous q^2-ultraspherical.
    Q2Ultraspherical,
    /// Continuous q^2-Hermite as continuous q-Hermite at base q^2.
    Q2Hermite,
}

impl QuadraticTransform {
    pub const ALL: [QuadraticTransform; 4] = [
        QuadraticTransform::Q2Jacobi,
        QuadraticTransform::Q2Laguerre,
        QuadraticTransform::Q2Ultraspherical,
        QuadraticTransform::Q2Hermite,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            QuadraticTransform::Q2Jacobi => "q2-jacobi",
            QuadraticTransform::Q2Laguerre => "q2-laguerre",
            QuadraticTransform::Q2Ultraspherical => "q2-ultraspherical",
            QuadraticTransform::Q2Hermite => "q2-hermite",
        }
    }

    pub fn params(&self) -> &'static [&'static str] {
        match self {
            QuadraticTransform::Q2Jacobi => &["a", "b"],
            QuadraticTransform::Q2Laguerre | QuadraticTransform::Q2Ultraspherical => &["a"],
            QuadraticTransform::Q2Hermite => &[],
        }
    }
}

impl FromStr for QuadraticTransform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        keyed(&Self::ALL, Self::key, s, "transform")
    }
}

impl fmt::Display for QuadraticTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// `1 / f` as a power series truncated to `len` terms; `f(0)` must be nonzero.
fn series_inverse(f: &Poly, len: usize) -> Poly {
    let f0 = f.coeff(0);
    let inv0 = f0.recip();
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return Poly::zero();
    }
    out[0] = inv0.clone();
    for k in 1..len {
        let s: Rational = (1..=k).map(|j| f.coeff(j) * &out[k - j]).sum();
        out[k] = -(s * &inv0);
    }
    Poly::new(out)
}

/// `H_n(x | Q)` at `x = (z + 1/z)/2`, as the exact limit `a -> 0` of
/// `a^-n R_n(z; a, s a, 0, 0 | Q)` with `s^2 = Q`.
pub fn continuous_q_hermite_limit(z: &Rational, s: &Rational, n: usize) -> Result<Rational, Error> {
    if z.is_zero() {
        return Err(Error::PoleAtZ("z = 0".into()));
    }
    let big_q = s * s;
    let len = n + 1;
    let o = one();
    // power series in a
    let mut total = Poly::zero();
    let mut term = Poly::one();
    let mut qk = o.clone();
    let zi = z.recip();
    for k in 0..=n {
        if k > 0 {
            let top = &o - big_q.pow(-(n as i64)) * &qk / &big_q;
            // (1 - a z Q^(k-1)) (1 - a Q^(k-1) / z)
            let qk1 = &qk / &big_q;
            let lin =
                Poly::new(vec![o.clone(), -(z * &qk1)]).mul_trunc(&Poly::new(vec![o.clone(), -(&zi * &qk1)]), len);
            // 1 - s a^2 Q^(k-1)
            let quad = Poly::new(vec![o.clone(), Rational::zero(), -(s * &qk1)]);
            let bottom = &o - &qk;
            if bottom.is_zero() {
                return Err(Error::DenominatorPole { k });
            }
            term = term
                .mul_trunc(&lin, len)
                .mul_trunc(&series_inverse(&quad, len), len)
                .scale(&(top * &big_q / bottom));
        }
        total = &total + &term;
        qk *= &big_q;
    }
    for j in 0..n {
        if !total.coeff(j).is_zero() {
            return Err(Error::InconsistentAlgebra(format!(
                "a^{j} term of the limit does not vanish"
            )));
        }
    }
    Ok(total.coeff(n))
}

/// `H_n(x | Q) = sum_k [n, k]_Q z^(n - 2k)` with `x = (z + 1/z)/2`.
pub fn continuous_q_hermite_sum(z: &Rational, big_q: &Rational, n: usize) -> Rational {
    (0..=n)
        .map(|k| q_binomial(n, k, big_q) * z.pow(n as i64 - 2 * k as i64))
        .sum()
}

fn quadratic_sides(
    which: QuadraticTransform,
    p: &Rational,
    v: &[Rational],
    z: &Rational,
    n: usize,
) -> Result<(Rational, Rational), Error> {
    let q = p * p;
    let q2 = &q * &q;
    let n_i = n as i64;
    let zero = Rational::zero();
    let np = -p;
    Ok(match which {
        QuadraticTransform::Q2Jacobi => {
            let (a, b) = (&v[0], &v[1]);
            let nb = -b;
            let lhs = aw_series(z, [a, &nb, p, &np], &q, n)?;
            let rhs = aw_series(z, [a, &nb, &(&q * a), &-(&q * b)], &q2, n)?;
            (lhs, rhs)
        }
        QuadraticTransform::Q2Laguerre => {
            let a = &v[0];
            let pre = ratio(p.pow(-n_i) * poch(&-&q, &q, n), poch(&-(p * a), &q, n))?;
            let lhs = pre * aw_series(z, [p, &np, a, &zero], &q, n)?;
            let rhs = a.pow(-n_i) * aw_series(z, [a, &(&q * a), &zero, &zero], &q2, n)?;
            (lhs, rhs)
        }
        QuadraticTransform::Q2Ultraspherical => {
            let a = &v[0];
            let na = -a;
            let pre = ratio(p.pow(-n_i) * poch(&-&q, &q, n), poch(&-(a * a), &q, n))?;
            let lhs = pre * aw_series(z, [p, &np, a, &na], &q, n)?;
            let rhs = a.pow(-n_i) * aw_series(z, [a, &na, &(&q * a), &-(&q * a)], &q2, n)?;
            (lhs, rhs)
        }
        QuadraticTransform::Q2Hermite => {
            let lhs = p.pow(-n_i) * poch(&-&q, &q, n) * aw_series(z, [p, &np, &zero, &zero], &q, n)?;
            (lhs, continuous_q_hermite_limit(z, &q, n)?)
        }
    })
}

/// Checks a `q -> q^2` transformation at every `z` and `n <= n_max`; the
/// left side is at base `q`, the right side at base `q^2`.
pub fn quadratic_transform_check(
    which: QuadraticTransform,
    q: &QValue,
    params: &Params,
    n_max: usize,
    zs: &[Rational],
) -> Result<Report, Error> {
    let p = q.sqrt_q()?;
    let v: Vec<Rational> = match which.params().len() {
        0 => vec![],
        1 => take::<1>(params, which.params())?.to_vec(),
        _ => take::<2>(params, which.params())?.to_vec(),
    };
    if matches!(
        which,
        QuadraticTransform::Q2Laguerre | QuadraticTransform::Q2Ultraspherical
    ) && v[0].is_zero()
    {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let mut r = Report::new(format!("quadratic {which}"));
    for n in 0..=n_max {
        for z in zs {
            let (lhs, rhs) = quadratic_sides(which, p, &v, z, n)?;
            r.check(lhs == rhs, || format!("n={n}, z={z}: {lhs} != {rhs}"));
            if which == QuadraticTransform::Q2Hermite {
                let sum = continuous_q_hermite_sum(z, &(p * p * p * p), n);
                r.check(rhs == sum, || {
                    format!("limit and q-binomial sum differ at n={n}, z={z}")
                });
            }
        }
    }
    Ok(r)
}

/// Pairs of families related by duality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualityPair {
    /// Askey-Wilson with itself under the dual parameters.
    AskeyWilson,
    /// Continuous dual q-Hahn and big q-Jacobi.
    CdqHahnBigQJacobi,
    /// Al-Salam-Chihara and little q-Jacobi.
    AlSalamChiharaLittleQJacobi,
    /// Continuous q^2-Jacobi and symmetric Askey-Wilson.
    Q2JacobiSymmetricAw,
    /// Continuous q^2-Laguerre and symmetric big q-Jacobi.
    Q2LaguerreSymmetricBigQJacobi,
    /// Continuous q^2-ultraspherical with itself.
    Q2Ultraspherical,
    /// The direct continuous q^2-Laguerre data and big q-Jacobi at `a = b = -1`.
    Q2LaguerreDirect,
    /// Al-Salam-Carlitz I and q-Charlier.
    CarlitzCharlier,
}

impl DualityPair {
    pub const ALL: [DualityPair; 8] = [
        DualityPair::AskeyWilson,
        DualityPair::CdqHahnBigQJacobi,
        DualityPair::AlSalamChiharaLittleQJacobi,
        DualityPair::Q2JacobiSymmetricAw,
        DualityPair::Q2LaguerreSymmetricBigQJacobi,
        DualityPair::Q2Ultraspherical,
        DualityPair::Q2LaguerreDirect,
        DualityPair::CarlitzCharlier,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            DualityPair::AskeyWilson => "askey-wilson",
            DualityPair::CdqHahnBigQJacobi => "cdqhahn-big-q-jacobi",
            DualityPair::AlSalamChiharaLittleQJacobi => "al-salam-chihara-little-q-jacobi",
            DualityPair::Q2JacobiSymmetricAw => "q2-jacobi-symmetric-aw",
            DualityPair::Q2LaguerreSymmetricBigQJacobi => "q2-laguerre-symmetric-big-q-jacobi",
            DualityPair::Q2Ultraspherical => "q2-ultraspherical",
            DualityPair::Q2LaguerreDirect => "q2-laguerre-direct",
            DualityPair::CarlitzCharlier => "carlitz-charlier",
        }
    }

    /// Parameters read from the map; `askey-wilson` takes `d` optionally
    /// (solved from `s` when absent).
    pub fn params(&self) -> &'static [&'static str] {
        match self {
            DualityPair::AskeyWilson => &["a", "b", "c", "s"],
            DualityPair::CdqHahnBigQJacobi => &["a", "b", "c"],
            DualityPair::AlSalamChiharaLittleQJacobi => &["a", "b"],
            DualityPair::Q2JacobiSymmetricAw => &["a", "b", "t"],
            DualityPair::Q2LaguerreSymmetricBigQJacobi
            | DualityPair::Q2Ultraspherical
            | DualityPair::Q2LaguerreDirect
            | DualityPair::CarlitzCharlier => &["a"],
        }
    }

    pub fn needs_sqrt_q(&self) -> bool {
        matches!(
            self,
            DualityPair::Q2JacobiSymmetricAw
                | DualityPair::Q2LaguerreSymmetricBigQJacobi
                | DualityPair::Q2Ultraspherical
                | DualityPair::Q2LaguerreDirect
        )
    }
}

impl FromStr for DualityPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        keyed(&Self::ALL, Self::key, s, "duality pair")
    }
}

impl fmt::Display for DualityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Three equal values for a grid point: left family, right family, series.
type Triple = (Rational, Rational, Rational);

fn check_triples(r: &mut Report, n: usize, m: usize, triples: &[Triple]) {
    for (i, (x, y, z)) in triples.iter().enumerate() {
        r.check(x == y && y == z, || {
            format!("relation {} at n={n}, m={m}: {x}, {y}, {z}", i + 1)
        });
    }
}

fn phi(num: Vec<Rational>, den: Vec<Rational>, q: &Rational, z: &Rational, n: usize) -> Result<Rational, Error> {
    rphis_partial(&num, &den, q, z, n)
}

/// Verifies the duality relation of `which` on the grid `n <= n_max`,
/// `m <= m_max`; every point is compared against the displayed series.
pub fn duality_pair_check(
    which: DualityPair,
    q: &QValue,
    params: &Params,
    n_max: usize,
    m_max: usize,
) -> Result<Report, Error> {
    if which.needs_sqrt_q() {
        q.sqrt_q()?;
    }
    let qq = q.q();
    let zero = Rational::zero();
    let mut r = Report::new(format!("duality {which}"));
    let qp = |k: i64| qq.pow(k);
    match which {
        DualityPair::AskeyWilson => {
            let [a, b, c, s] = take::<4>(params, which.params())?;
            let d = match params.get("d") {
                Some(d) => d.clone(),
                None => {
                    if a.is_zero() || b.is_zero() || c.is_zero() {
                        return Err(Error::InvalidParameter("a, b, c must be nonzero to solve for d".into()));
                    }
                    qq * &s * &s / (&a * &b * &c)
                }
            };
            let p = AWParams::new(a.clone(), b.clone(), c.clone(), d.clone(), q.clone())?;
            let t = super::aw_dual_params(&p, &s)?;
            let back = super::aw_dual_params(&t, &a).ok();
            r.check(back.is_some_and(|bk| bk.eq_up_to_sign(&p)), || {
                "dual of dual is not the original".into()
            });
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = eval_R(&(&a * qp(mi)).recip(), &p, n)?;
                    let right = eval_R(&(&t.a * qp(ni)).recip(), &t, m)?;
                    let series = phi(
                        vec![qp(-ni), qp(ni - 1) * &a * &b * &c * &d, qp(-mi), qp(mi) * &a * &a],
                        vec![&a * &b, &a * &c, &a * &d],
                        qq,
                        qq,
                        n,
                    )?;
                    check_triples(&mut r, n, m, &[(left, right, series)]);
                }
            }
        }
        DualityPair::CdqHahnBigQJacobi | DualityPair::AlSalamChiharaLittleQJacobi => {
            let (a, b, c) = if which == DualityPair::CdqHahnBigQJacobi {
                let [a, b, c] = take::<3>(params, which.params())?;
                (a, b, c)
            } else {
                let [a, b] = take::<2>(params, which.params())?;
                (a, b, zero.clone())
            };
            let p = AWParams::new(a.clone(), b.clone(), c.clone(), zero.clone(), q.clone())?;
            if b.is_zero() {
                return Err(Error::InvalidParameter("b must be nonzero".into()));
            }
            let bq = BigQJacobiParams {
                a: &a * &b / qq,
                b: &a / &b,
                c: &a * &c / qq,
                q: q.clone(),
            };
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = eval_R(&(&a * qp(mi)).recip(), &p, n)?;
                    let right = eval_P(&qp(-ni), &bq, m)?;
                    let series = phi(
                        vec![qp(-ni), qp(-mi), qp(mi) * &a * &a],
                        vec![&a * &b, &a * &c],
                        qq,
                        qq,
                        n,
                    )?;
                    check_triples(&mut r, n, m, &[(left, right, series)]);
                }
            }
        }
        DualityPair::Q2JacobiSymmetricAw => {
            let [a, b, t] = take::<3>(params, which.params())?;
            if &t * &t != &a * &b {
                return Err(Error::NotASquare(format!("t = {t} for ab = {}", &a * &b)));
            }
            let p = q.sqrt_q()?;
            let (np, nb, nt) = (-p, -&b, -&t);
            if t.is_zero() || a.is_zero() {
                return Err(Error::InvalidParameter("a and t must be nonzero".into()));
            }
            let r2 = p * &a / &t;
            let nr2 = -&r2;
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = aw_series(&(&a * qp(mi)).recip(), [&a, &nb, p, &np], qq, n)?;
                    let right = aw_series(&(&t * qp(ni)).recip(), [&t, &nt, &r2, &nr2], qq, m)?;
                    let series = phi(
                        vec![qp(-ni), qp(ni) * &a * &b, qp(-mi), qp(mi) * &a * &a],
                        vec![-(&a * &b), p * &a, -(p * &a)],
                        qq,
                        qq,
                        n,
                    )?;
                    check_triples(&mut r, n, m, &[(left, right, series)]);
                }
            }
        }
        DualityPair::Q2LaguerreSymmetricBigQJacobi => {
            let [a] = take::<1>(params, which.params())?;
            let p = q.sqrt_q()?;
            let np = -p;
            let ap = &a / p;
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = aw_series(&(&a * qp(mi)).recip(), [&a, p, &np, &zero], qq, n)?;
                    let right = big_q_jacobi_series(&qp(-ni), &ap, &ap, &-&ap, qq, m)?;
                    let series = phi(
                        vec![qp(-ni), qp(-mi), qp(mi) * &a * &a],
                        vec![p * &a, -(p * &a)],
                        qq,
                        qq,
                        n,
                    )?;
                    check_triples(&mut r, n, m, &[(left, right, series)]);
                }
            }
        }
        DualityPair::Q2Ultraspherical => {
            let [a] = take::<1>(params, which.params())?;
            let p = q.sqrt_q()?;
            let (np, na) = (-p, -&a);
            let tup = [&a, &na, p, &np];
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = aw_series(&(&a * qp(mi)).recip(), tup, qq, n)?;
                    let right = aw_series(&(&a * qp(ni)).recip(), tup, qq, m)?;
                    let series = phi(
                        vec![qp(-ni), qp(ni) * &a * &a, qp(-mi), qp(mi) * &a * &a],
                        vec![-(&a * &a), p * &a, -(p * &a)],
                        qq,
                        qq,
                        n,
                    )?;
                    check_triples(&mut r, n, m, &[(left, right, series)]);
                }
            }
        }
        DualityPair::Q2LaguerreDirect => {
            let [big_a] = take::<1>(params, which.params())?;
            let p = q.sqrt_q()?;
            let np = -p;
            let data = super::q2_laguerre_direct_data(q, &big_a)?;
            let den = vec![p * &big_a, -qq];
            let m1 = int(-1);
            let ap = &big_a / p;
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let xm = qp(mi) * p + (qp(mi) * p).recip();
                    let left = data.normalized_U(n, &xm)?;
                    let right = data.dual_normalized_U(m, &qp(-ni))?;
                    let series = phi(vec![qp(-mi), qp(-ni), qp(mi + 1)], den.clone(), qq, qq, m)?;
                    let bq = big_q_jacobi_series(&qp(-ni), &m1, &m1, &ap, qq, m)?;
                    check_triples(&mut r, n, m, &[(left, right.clone(), series), (right, bq.clone(), bq)]);
                }
            }
            for n in 0..=n_max.max(m_max) {
                let ni = n as i64;
                for z in default_points() {
                    let u = data.normalized_U(n, &joukowski(&z))?;
                    let series = phi(vec![qp(-ni), p * &z, p / &z], den.clone(), qq, qq, n)?;
                    let aw = aw_series(&z, [p, &np, &big_a, &zero], qq, n)?;
                    check_triples(&mut r, n, n, &[(u, series, aw)]);
                    let ut = data.dual_normalized_U(n, &z)?;
                    let tseries = phi(vec![qp(-ni), z.clone(), qp(ni + 1)], den.clone(), qq, qq, n)?;
                    r.check(ut == tseries, || {
                        format!("dual function differs from its series at n={n}, y={z}")
                    });
                }
            }
        }
        DualityPair::CarlitzCharlier => {
            let [a] = take::<1>(params, which.params())?;
            let data = al_salam_carlitz_data(q, &a)?;
            let dual = data.dual_data()?;
            r.check(dual == q_charlier_data(q, &a)?, || {
                "dual of Al-Salam-Carlitz I data is not q-Charlier".into()
            });
            for n in 0..=n_max {
                for m in 0..=m_max {
                    let (ni, mi) = (n as i64, m as i64);
                    let left = data.normalized_U(n, &qp(mi))?;
                    let right = data.dual_normalized_U(m, &qp(-ni))?;
                    let via_dual = dual.normalized_U(m, &qp(-ni))?;
                    check_triples(&mut r, n, m, &[(left, right, via_dual)]);
                }
            }
            for n in 0..=n_max.max(m_max) {
                let ni = n as i64;
                for x in default_points() {
                    let u = data.normalized_U(n, &x)?;
                    let s1 = phi(vec![qp(-ni), x.recip()], vec![zero.clone()], qq, &-(qq * &x / &a), n)?;
                    let ut = data.dual_normalized_U(n, &x)?;
                    let s2 = phi(vec![qp(-ni), x.clone()], vec![zero.clone()], qq, &-(qp(ni + 1) / &a), n)?;
                    check_triples(&mut r, n, n, &[(u, s1.clone(), s1), (ut, s2.clone(), s2)]);
                }
            }
        }
    }
    Ok(r)
}

/// `U_n(x_m) = Ũ_m(h_n)` on the grid `n <= n_max`, `m <= m_max`.
pub fn duality_grid_check(data: &VerdeStarData, n_max: usize, m_max: usize) -> Report {
    let mut r = Report::new("duality grid");
    for n in 0..=n_max {
        for m in 0..=m_max {
            let lhs = data.normalized_U(n, &data.node_x(m));
            let rhs = data.dual_normalized_U(m, &data.eigen_h(n));
            match (lhs, rhs) {
                (Ok(l), Ok(rh)) => {
                    r.check(l == rh, || format!("n={n}, m={m}: {l} != {rh}"));
                }
                (Err(e), _) | (_, Err(e)) => r.fail(e),
            }
        }
    }
    r
}

/// Sample points that avoid the poles of the operators for the usual bases.
pub fn default_points() -> Vec<Rational> {
    vec![int(3), Rational::new(2, 7), Rational::new(-5, 3)]
}
