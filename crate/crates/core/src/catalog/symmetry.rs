use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AWParams;
use crate::error::Error;
use crate::exactfield::Rational;
use crate::qseries::QValue;
use crate::report::Report;
use crate::verdestar::VerdeStarData;
use crate::zhedanov::{closed_form_coeffs, ZhedanovCoefficients};

/// Dual parameters `(s, ab/s, ac/s, ad/s)` where `s^2 = abcd/q`.
pub fn aw_dual_params(p: &AWParams, s: &Rational) -> Result<AWParams, Error> {
    let q = p.q.q();
    if s.is_zero() || s * s != &p.a * &p.b * &p.c * &p.d / q {
        return Err(Error::NotASquare(format!("{s} squared is not abcd/q")));
    }
    Ok(AWParams {
        a: s.clone(),
        b: &p.a * &p.b / s,
        c: &p.a * &p.c / s,
        d: &p.a * &p.d / s,
        q: p.q.clone(),
    })
}

/// Element of the D4 Weyl group acting on `(a, b, c, d)`: entry `i` of the
/// image is `p[perm[i]]`, replaced by `q / p[perm[i]]` when bit `i` of
/// `flips` is set. The number of flips is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct D4Element {
    perm: [usize; 4],
    flips: u8,
}

impl D4Element {
    pub const ORDER: usize = 192;

    pub fn identity() -> Self {
        D4Element {
            perm: [0, 1, 2, 3],
            flips: 0,
        }
    }

    pub fn new(perm: [usize; 4], flips: u8) -> Result<Self, Error> {
        let mut seen = [false; 4];
        for &i in &perm {
            if i > 3 || seen[i] {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
            seen[i] = true;
        }
        if flips > 15 || !flips.count_ones().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "flips must be an even subset of four positions".into(),
            ));
        }
        Ok(D4Element { perm, flips })
    }

    /// Exchange of positions `i` and `j`.
    pub fn transposition(i: usize, j: usize) -> Self {
        let mut perm = [0, 1, 2, 3];
        perm.swap(i, j);
        D4Element { perm, flips: 0 }
    }

    /// `e -> q/e` on positions `i` and `j`.
    pub fn pair_flip(i: usize, j: usize) -> Self {
        assert!(i != j && i < 4 && j < 4);
        D4Element {
            perm: [0, 1, 2, 3],
            flips: (1 << i) | (1 << j),
        }
    }

    pub fn perm(&self) -> [usize; 4] {
        self.perm
    }

    pub fn flips(&self) -> u8 {
        self.flips
    }

    /// `self ∘ other`: act with `other` first.
    pub fn compose(&self, other: &D4Element) -> D4Element {
        let mut perm = [0; 4];
        let mut flips = 0u8;
        for i in 0..4 {
            let j = self.perm[i];
            perm[i] = other.perm[j];
            let f = ((self.flips >> i) & 1) ^ ((other.flips >> j) & 1);
            flips |= f << i;
        }
        D4Element { perm, flips }
    }

    /// All 192 elements.
    pub fn all() -> Vec<D4Element> {
        let mut out = Vec::with_capacity(Self::ORDER);
        for p in permutations() {
            for flips in 0u8..16 {
                if flips.count_ones() % 2 == 0 {
                    out.push(D4Element { perm: p, flips });
                }
            }
        }
        out
    }

    /// Generators: the three adjacent transpositions and the flip of `(c, d)`.
    pub fn generators() -> [D4Element; 4] {
        [
            D4Element::transposition(0, 1),
            D4Element::transposition(1, 2),
            D4Element::transposition(2, 3),
            D4Element::pair_flip(2, 3),
        ]
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const N: [char; 4] = ['a', 'b', 'c', 'd'];
        let parts: Vec<String> = (0..4)
            .map(|i| {
                let e = N[self.perm[i]];
                if self.flips >> i & 1 == 1 {
                    format!("q/{e}")
                } else {
                    e.to_string()
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Image of the parameter tuple under `g`.
pub fn d4_action(g: &D4Element, p: &AWParams) -> Result<AWParams, Error> {
    let q = p.q.q();
    let src = p.tuple();
    let mut out: Vec<Rational> = Vec::with_capacity(4);
    for i in 0..4 {
        let e = src[g.perm[i]];
        if g.flips >> i & 1 == 1 {
            if e.is_zero() {
                return Err(Error::FlipOfZero);
            }
            out.push(q / e);
        } else {
            out.push(e.clone());
        }
    }
    Ok(p.with_tuple(out.try_into().expect("four entries")))
}

/// Distinct images of `p` under the whole group.
pub fn d4_orbit(p: &AWParams) -> Result<Vec<AWParams>, Error> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in D4Element::all() {
        let img = d4_action(&g, p)?;
        let key: Vec<Rational> = img.tuple().into_iter().cloned().collect();
        if seen.insert(key) {
            out.push(img);
        }
    }
    Ok(out)
}

/// Data without the validity checks; the constants only need the formulas.
fn raw_data(
    q: &Rational,
    a1: Rational,
    a2: Rational,
    b1: Rational,
    b2: Rational,
    d1: Rational,
    d2: Rational,
) -> VerdeStarData {
    let d3 = &a1 * &b1 / q;
    let d4 = q * &a2 * &b2;
    let d0 = -(&d1 + &d2 + &d3 + &d4);
    VerdeStarData {
        q: q.clone(),
        a1,
        a2,
        b1,
        b2,
        d0,
        d1,
        d2,
        d3,
        d4,
        degenerate: true,
    }
}

fn aw_raw(t: [&Rational; 4], q: &Rational) -> VerdeStarData {
    let [a, b, c, d] = t;
    let e4 = a * b * c * d;
    let d1 = -(a * (&e4 + q * (b * c + b * d + c * d))) / (q * q);
    let d2 = -(b + c + d + q / a);
    raw_data(q, &e4 / q, Rational::one(), a.clone(), a.recip(), d1, d2)
}

fn bqj_raw(a: &Rational, b: &Rational, c: &Rational, q: &Rational) -> VerdeStarData {
    let o = Rational::one();
    raw_data(
        q,
        q * a * b,
        o.clone(),
        Rational::zero(),
        o.clone(),
        -(q * a * c),
        -(q * (a + c + &o)),
    )
}

/// Constants of the Askey-Wilson data with `K1` scaled by `1/s`.
pub fn aw_scaled_tuple(t: [&Rational; 4], q: &Rational, s: &Rational) -> ZhedanovCoefficients {
    closed_form_coeffs(&aw_raw(t, q)).scaled(&s.recip(), &Rational::one())
}

/// One generator step together with the matching square root `s`.
fn step(g: &D4Element, t: &[Rational; 4], s: &Rational, q: &Rational) -> Result<([Rational; 4], Rational), Error> {
    let flipped: Vec<usize> = (0..4).filter(|i| g.flips >> i & 1 == 1).collect();
    let mut out = t.clone();
    for i in 0..4 {
        out[i] = t[g.perm[i]].clone();
    }
    let mut s2 = s.clone();
    match flipped.as_slice() {
        [] => {}
        [i, j] => {
            let keep: Vec<usize> = (0..4).filter(|k| k != i && k != j).collect();
            for &k in &[*i, *j] {
                if out[k].is_zero() {
                    return Err(Error::FlipOfZero);
                }
                out[k] = q / &out[k];
            }
            s2 = &t[g.perm[keep[0]]] * &t[g.perm[keep[1]]] / s;
        }
        _ => return Err(Error::InvalidParameter("generators flip at most one pair".into())),
    }
    Ok((out, s2))
}

/// Walks the orbit of `(p, s)` under the generators and checks that the
/// scaled tuple never changes.
pub fn d4_invariance_check(p: &AWParams, s: &Rational) -> Result<Report, Error> {
    aw_dual_params(p, s)?;
    let q = p.q.q();
    let base = aw_scaled_tuple(p.tuple(), q, s);
    let mut r = Report::new("D4 invariance");
    let start: [Rational; 4] = p.tuple().map(Rational::clone);
    let mut seen = BTreeSet::new();
    let mut stack = vec![(start, s.clone())];
    while let Some((t, sv)) = stack.pop() {
        let key = (t.clone(), sv.clone());
        if !seen.insert(key) {
            continue;
        }
        let refs = [&t[0], &t[1], &t[2], &t[3]];
        r.check(&sv * &sv * q == &t[0] * &t[1] * &t[2] * &t[3], || {
            format!("lost track of the square root at {t:?}")
        });
        let got = aw_scaled_tuple(refs, q, &sv);
        r.check(got == base, || format!("tuple changes at {t:?}, s={sv}"));
        for g in D4Element::generators() {
            stack.push(step(&g, &t, &sv, q)?);
        }
    }
    let tuples: BTreeSet<_> = seen.into_iter().map(|(t, _)| t).collect();
    r.check(D4Element::ORDER.is_multiple_of(tuples.len()), || {
        format!("orbit of size {} does not divide 192", tuples.len())
    });
    Ok(r)
}

/// The displayed relations between the constants at the parameters and at
/// their duals.
pub fn dual_compat_check(p: &AWParams, s: &Rational) -> Result<Report, Error> {
    let t = aw_dual_params(p, s)?;
    let q = p.q.q();
    let c = closed_form_coeffs(&aw_raw(p.tuple(), q));
    let ct = closed_form_coeffs(&aw_raw(t.tuple(), q));
    let a = &p.a;
    let s2 = s * s;
    let mut r = Report::new("dual parameter compatibility");
    r.check(c.c1 == &c.c2 / &s2, || "C1 != C2 / s^2".into());
    r.check(&ct.d / a == &c.d / s, || "D~ / a != D / s".into());
    r.check(&ct.g1 / a == &c.g2 / &s2, || "G1~ / a != G2 / s^2".into());
    r.check(&ct.omega / (a * a) == &c.omega / &s2, || {
        "omega~ / a^2 != omega / s^2".into()
    });
    Ok(r)
}

fn five(c: &ZhedanovCoefficients) -> [Rational; 5] {
    [c.c1.clone(), c.c2.clone(), c.d.clone(), c.g1.clone(), c.g2.clone()]
}

/// Continuous dual q-Hahn: with `s^2 = abc/q` the constants scaled by `1/s`
/// are invariant under permutations and pair flips of `(a, b, c)`.
pub fn cdqhahn_invariance_check(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    s: &Rational,
    q: &QValue,
) -> Result<Report, Error> {
    let qq = q.q();
    if s.is_zero() || s * s * qq != a * b * c {
        return Err(Error::NotASquare(format!("{s} squared is not abc/q")));
    }
    let zero = Rational::zero();
    let tuple = |t: &[Rational; 3], s: &Rational| five(&aw_scaled_tuple([&t[0], &t[1], &t[2], &zero], qq, s));
    let start = [a.clone(), b.clone(), c.clone()];
    let base = tuple(&start, s);
    let mut r = Report::new("continuous dual q-Hahn invariance");
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let t = [start[p[0]].clone(), start[p[1]].clone(), start[p[2]].clone()];
        r.check(tuple(&t, s) == base, || format!("permutation {p:?} changes the tuple"));
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            if t[i].is_zero() || t[j].is_zero() {
                return Err(Error::FlipOfZero);
            }
            let mut f = t.clone();
            f[i] = qq / &t[i];
            f[j] = qq / &t[j];
            let s2 = &t[k] / s;
            r.check(tuple(&f, &s2) == base, || {
                format!("flip ({i},{j}) after {p:?} changes the tuple")
            });
        }
    }
    Ok(r)
}

/// Big q-Jacobi at `q = p^2`, `a = S^2/(qb)`, `c = p r^2 b / S`: the
/// constants scaled by `mu = 1/S`, `rho = 1/r` are invariant under the three
/// parameter maps, with the scalings adjusted as the maps require.
pub fn bigqj_invariance_check(b: &Rational, big_s: &Rational, r_: &Rational, q: &QValue) -> Result<Report, Error> {
    let p = q.sqrt_q()?;
    let qq = q.q();
    if b.is_zero() || big_s.is_zero() || r_.is_zero() {
        return Err(Error::InvalidParameter("b, S, r must be nonzero".into()));
    }
    let a = big_s * big_s / (qq * b);
    let c = p * r_ * r_ * b / big_s;
    let mu = big_s.recip();
    let rho = r_.recip();
    let tuple = |a: &Rational, b: &Rational, c: &Rational, mu: &Rational, rho: &Rational| {
        five(&closed_form_coeffs(&bqj_raw(a, b, c, qq)).scaled(mu, rho))
    };
    let base = tuple(&a, b, &c, &mu, &rho);
    let mut rep = Report::new("big q-Jacobi invariance");
    let maps = [
        (
            "(c, ab/c, a)",
            [c.clone(), &a * b / &c, a.clone()],
            mu.clone(),
            rho.clone(),
        ),
        (
            "(ab/c, c, b)",
            [&a * b / &c, c.clone(), b.clone()],
            mu.clone(),
            &rho * &c / b,
        ),
        ("(a, 1/b, c/b)", [a.clone(), b.recip(), &c / b], &mu * b, rho.clone()),
    ];
    for (name, [a2, b2, c2], m2, r2) in maps {
        rep.check(m2.pow(-2) == qq * &a2 * &b2, || format!("{name}: mu^-2 != q a b"));
        rep.check(r2.pow(-4) == &a2 * &c2 * &c2 / &b2, || {
            format!("{name}: rho^-4 != a c^2 / b")
        });
        rep.check(tuple(&a2, &b2, &c2, &m2, &r2) == base, || {
            format!("{name} changes the tuple")
        });
    }
    Ok(rep)
}
