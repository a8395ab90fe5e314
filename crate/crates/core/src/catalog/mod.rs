//! Named families as maps from parameters to Verde-Star data, plus the
//! classical identities, dualities and symmetries they satisfy.

mod classical;
mod symmetry;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactfield::Rational;
use crate::qseries::QValue;
use crate::verdestar::{make_data, small_nonzero, small_rational, VerdeStarData, N_MAX};
use crate::zhedanov::{closed_form_coeffs, VanishingPattern};

pub use classical::*;
pub use symmetry::*;

/// Named rational parameters.
pub type Params = BTreeMap<String, Rational>;

/// Askey-Wilson parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AWParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub q: QValue,
}

/// `t` equals one of `1, q^-1, ..., q^-n_max`.
fn hits_inverse_powers(t: &Rational, q: &Rational, n_max: usize) -> bool {
    let mut p = Rational::one();
    for _ in 0..=n_max {
        if &p == t {
            return true;
        }
        p /= q;
    }
    false
}

impl AWParams {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational, q: QValue) -> Result<Self, Error> {
        let p = AWParams { a, b, c, d, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.a.is_zero() {
            return Err(Error::InvalidParameter("Askey-Wilson needs a != 0".into()));
        }
        let q = self.q.q();
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        for (name, v) in [("ab", a * b), ("ac", a * c), ("ad", a * d), ("abcd", a * b * c * d)] {
            if hits_inverse_powers(&v, q, N_MAX) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is 1 or q^-k")));
            }
        }
        Ok(())
    }

    pub fn tuple(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn with_tuple(&self, t: [Rational; 4]) -> AWParams {
        let [a, b, c, d] = t;
        AWParams {
            a,
            b,
            c,
            d,
            q: self.q.clone(),
        }
    }

    /// Equality up to a common sign of all four parameters.
    pub fn eq_up_to_sign(&self, other: &AWParams) -> bool {
        let same = self.tuple() == other.tuple();
        let neg = self.tuple().iter().zip(other.tuple()).all(|(x, y)| &-*x == y);
        self.q == other.q && (same || neg)
    }

    /// Elementary symmetric functions `e1 .. e4`.
    pub fn elementary(&self) -> [Rational; 4] {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        [
            a + b + c + d,
            a * b + a * c + a * d + b * c + b * d + c * d,
            a * b * c + a * b * d + a * c * d + b * c * d,
            a * b * c * d,
        ]
    }
}

/// Big q-Jacobi parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigQJacobiParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub q: QValue,
}

impl BigQJacobiParams {
    pub fn new(a: Rational, b: Rational, c: Rational, q: QValue) -> Result<Self, Error> {
        let p = BigQJacobiParams { a, b, c, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let q = self.q.q();
        for (name, v) in [("ab", &self.a * &self.b), ("a", self.a.clone()), ("c", self.c.clone())] {
            if hits_inverse_powers(&(&v * q), q, N_MAX) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is q^-k with k >= 1")));
            }
        }
        Ok(())
    }
}

pub fn askey_wilson_data(p: &AWParams) -> Result<VerdeStarData, Error> {
    p.validate()?;
    let q = p.q.q();
    let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
    let e4 = a * b * c * d;
    let d1 = -(a * (&e4 + q * (b * c + b * d + c * d))) / (q * q);
    let d2 = -(b + c + d + q / a);
    make_data(q.clone(), &e4 / q, Rational::one(), a.clone(), a.recip(), d1, d2, false)
}

pub fn cdqhahn_data(a: &Rational, b: &Rational, c: &Rational, q: &QValue) -> Result<VerdeStarData, Error> {
    askey_wilson_data(&AWParams {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        d: Rational::zero(),
        q: q.clone(),
    })
}

pub fn big_q_jacobi_data(p: &BigQJacobiParams) -> Result<VerdeStarData, Error> {
    p.validate()?;
    let q = p.q.q();
    let (a, b, c) = (&p.a, &p.b, &p.c);
    let one = Rational::one();
    make_data(
        q.clone(),
        q * a * b,
        one.clone(),
        Rational::zero(),
        one.clone(),
        -(q * a * c),
        -(q * (a + c + &one)),
        false,
    )
}

/// How a family turns parameters into data.
type Builder = fn(&QValue, &[Rational]) -> Result<VerdeStarData, Error>;

/// A catalog entry.
#[derive(Clone, Copy)]
pub struct FamilySpec {
    /// Scheme node this family lives in.
    pub node: &'static str,
    /// Stable identifier used on the command line.
    pub key: &'static str,
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub needs_sqrt_q: bool,
    /// Parameter substitution in words.
    pub constraint: &'static str,
    /// Whether this is the main family of its node.
    pub primary: bool,
    builder: Builder,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec")
            .field("key", &self.key)
            .field("node", &self.node)
            .finish()
    }
}

/// Serializable description of a [`FamilySpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub id: String,
    pub key: String,
    pub name: String,
    pub params: Vec<String>,
    pub needs_sqrt_q: bool,
    pub constraint: String,
    pub expected_pattern: VanishingPattern,
}

fn r0() -> Rational {
    Rational::zero()
}

fn aw(q: &QValue, a: Rational, b: Rational, c: Rational, d: Rational) -> Result<VerdeStarData, Error> {
    askey_wilson_data(&AWParams {
        a,
        b,
        c,
        d,
        q: q.clone(),
    })
}

fn bqj(q: &QValue, a: Rational, b: Rational, c: Rational) -> Result<VerdeStarData, Error> {
    big_q_jacobi_data(&BigQJacobiParams { a, b, c, q: q.clone() })
}

fn direct(q: &QValue, v: [Rational; 6], degenerate: bool) -> Result<VerdeStarData, Error> {
    let [a1, a2, b1, b2, d1, d2] = v;
    make_data(q.q().clone(), a1, a2, b1, b2, d1, d2, degenerate)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Data `x_k = q^(k+1/2) + q^(-k-1/2)`, `h_k = q^-k`,
/// `g_k = (q^(1/2) - a q^k)(q^-2k - 1)`.
pub fn q2_laguerre_direct_data(q: &QValue, a: &Rational) -> Result<VerdeStarData, Error> {
    let p = q.sqrt_q()?.clone();
    direct(q, [r0(), int(1), p.clone(), p.recip(), a.clone(), -a], false)
}

/// Data `x_k = q^k`, `h_k = q^-k`, `g_k = a(q^-k - 1)`.
pub fn al_salam_carlitz_data(q: &QValue, a: &Rational) -> Result<VerdeStarData, Error> {
    direct(q, [r0(), int(1), int(1), r0(), r0(), a.clone()], false)
}

/// Data `x_k = q^-k`, `h_k = q^k`, `g_k = a(q^-k - 1)`.
pub fn q_charlier_data(q: &QValue, a: &Rational) -> Result<VerdeStarData, Error> {
    direct(q, [int(1), r0(), r0(), int(1), r0(), a.clone()], false)
}

fn neg(x: &Rational) -> Rational {
    -x
}

static FAMILIES: &[FamilySpec] = &[
    FamilySpec {
        node: "1a",
        key: "askey-wilson",
        name: "Askey-Wilson",
        params: &["a", "b", "c", "d"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,b,c,d|q)",
        primary: true,
        builder: |q, p| aw(q, p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()),
    },
    FamilySpec {
        node: "2a",
        key: "continuous-dual-q-hahn",
        name: "continuous dual q-Hahn",
        params: &["a", "b", "c"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,b,c,0|q)",
        primary: true,
        builder: |q, p| aw(q, p[0].clone(), p[1].clone(), p[2].clone(), r0()),
    },
    FamilySpec {
        node: "2b",
        key: "big-q-jacobi",
        name: "big q-Jacobi",
        params: &["a", "b", "c"],
        needs_sqrt_q: false,
        constraint: "P_n(x;a,b,c;q)",
        primary: true,
        builder: |q, p| bqj(q, p[0].clone(), p[1].clone(), p[2].clone()),
    },
    FamilySpec {
        node: "3a",
        key: "continuous-q2-jacobi",
        name: "continuous q^2-Jacobi",
        params: &["a", "b"],
        needs_sqrt_q: true,
        constraint: "R_n(z;a,b,q^(1/2),-q^(1/2)|q)",
        primary: true,
        builder: |q, p| {
            let s = q.sqrt_q()?.clone();
            aw(q, p[0].clone(), p[1].clone(), s.clone(), -s)
        },
    },
    FamilySpec {
        node: "3b",
        key: "symmetric-askey-wilson",
        name: "symmetric Askey-Wilson",
        params: &["a", "b"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,b,-a,-b|q)",
        primary: true,
        builder: |q, p| aw(q, p[0].clone(), p[1].clone(), neg(&p[0]), neg(&p[1])),
    },
    FamilySpec {
        node: "3b",
        key: "symmetric-askey-wilson-flipped",
        name: "symmetric Askey-Wilson, flipped form",
        params: &["a", "b"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,b,-q/a,-q/b|q)",
        primary: false,
        builder: |q, p| {
            let qq = q.q();
            aw(q, p[0].clone(), p[1].clone(), -(qq / &p[0]), -(qq / &p[1]))
        },
    },
    FamilySpec {
        node: "3c",
        key: "al-salam-chihara",
        name: "Al-Salam-Chihara",
        params: &["a", "b"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,b,0,0|q)",
        primary: true,
        builder: |q, p| aw(q, p[0].clone(), p[1].clone(), r0(), r0()),
    },
    FamilySpec {
        node: "3c",
        key: "continuous-big-q-hermite",
        name: "continuous big q-Hermite",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,0,0,0|q)",
        primary: false,
        builder: |q, p| aw(q, p[0].clone(), r0(), r0(), r0()),
    },
    FamilySpec {
        node: "3d",
        key: "big-q-laguerre",
        name: "big q-Laguerre",
        params: &["a", "c"],
        needs_sqrt_q: false,
        constraint: "P_n(x;a,0,c;q)",
        primary: true,
        builder: |q, p| bqj(q, p[0].clone(), r0(), p[1].clone()),
    },
    FamilySpec {
        node: "3e",
        key: "little-q-jacobi",
        name: "little q-Jacobi",
        params: &["a", "b"],
        needs_sqrt_q: false,
        constraint: "P_n(x;a,b,0;q)",
        primary: true,
        builder: |q, p| bqj(q, p[0].clone(), p[1].clone(), r0()),
    },
    FamilySpec {
        node: "4a",
        key: "continuous-q2-laguerre",
        name: "continuous q^2-Laguerre",
        params: &["a"],
        needs_sqrt_q: true,
        constraint: "R_n(z;q^(1/2),-q^(1/2),a,0|q)",
        primary: true,
        builder: |q, p| {
            let s = q.sqrt_q()?.clone();
            aw(q, s.clone(), -s, p[0].clone(), r0())
        },
    },
    FamilySpec {
        node: "4a",
        key: "continuous-q2-laguerre-direct",
        name: "continuous q^2-Laguerre, direct data",
        params: &["a"],
        needs_sqrt_q: true,
        constraint: "x_k=q^(k+1/2)+q^(-k-1/2), h_k=q^-k, g_k=(q^(1/2)-a q^k)(q^-2k-1)",
        primary: false,
        builder: |q, p| q2_laguerre_direct_data(q, &p[0]),
    },
    FamilySpec {
        node: "4b",
        key: "continuous-q2-ultraspherical",
        name: "continuous q^2-ultraspherical",
        params: &["a"],
        needs_sqrt_q: true,
        constraint: "R_n(z;q^(1/2),-q^(1/2),a,-a|q)",
        primary: true,
        builder: |q, p| {
            let s = q.sqrt_q()?.clone();
            aw(q, s.clone(), -s, p[0].clone(), neg(&p[0]))
        },
    },
    FamilySpec {
        node: "4b",
        key: "continuous-q2-ultraspherical-flipped",
        name: "continuous q^2-ultraspherical, flipped form",
        params: &["a"],
        needs_sqrt_q: true,
        constraint: "R_n(z;q^(1/2),-q^(1/2),a,-q/a|q)",
        primary: false,
        builder: |q, p| {
            let s = q.sqrt_q()?.clone();
            aw(q, s.clone(), -s, p[0].clone(), -(q.q() / &p[0]))
        },
    },
    FamilySpec {
        node: "4c",
        key: "symmetric-al-salam-chihara",
        name: "symmetric Al-Salam-Chihara",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "R_n(z;a,-a,0,0|q)",
        primary: true,
        builder: |q, p| aw(q, p[0].clone(), neg(&p[0]), r0(), r0()),
    },
    FamilySpec {
        node: "4d",
        key: "al-salam-carlitz-i",
        name: "Al-Salam-Carlitz I",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "x_k=q^k, h_k=q^-k, g_k=a(q^-k-1)",
        primary: true,
        builder: |q, p| al_salam_carlitz_data(q, &p[0]),
    },
    FamilySpec {
        node: "4e",
        key: "symmetric-big-q-jacobi",
        name: "symmetric big q-Jacobi",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "P_n(x;a,a,-a;q)",
        primary: true,
        builder: |q, p| bqj(q, p[0].clone(), p[0].clone(), neg(&p[0])),
    },
    FamilySpec {
        node: "4e",
        key: "special-big-q-jacobi",
        name: "big q-Jacobi at a=b=-1",
        params: &["c"],
        needs_sqrt_q: false,
        constraint: "P_n(x;-1,-1,c;q)",
        primary: false,
        builder: |q, p| bqj(q, int(-1), int(-1), p[0].clone()),
    },
    FamilySpec {
        node: "4f",
        key: "q-charlier",
        name: "q-Charlier",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "x_k=q^-k, h_k=q^k, g_k=a(q^-k-1)",
        primary: true,
        builder: |q, p| q_charlier_data(q, &p[0]),
    },
    FamilySpec {
        node: "4g",
        key: "special-little-q-jacobi",
        name: "special little q-Jacobi",
        params: &["a"],
        needs_sqrt_q: false,
        constraint: "P_n(x;a,-1,0;q)",
        primary: true,
        builder: |q, p| bqj(q, p[0].clone(), int(-1), r0()),
    },
    FamilySpec {
        node: "5a",
        key: "continuous-q2-hermite",
        name: "continuous q^2-Hermite",
        params: &[],
        needs_sqrt_q: true,
        constraint: "R_n(z;q^(1/2),-q^(1/2),0,0|q)",
        primary: true,
        builder: |q, _| {
            let s = q.sqrt_q()?.clone();
            aw(q, s.clone(), -s, r0(), r0())
        },
    },
    FamilySpec {
        node: "5a",
        key: "continuous-q2-hermite-direct",
        name: "continuous q^2-Hermite, direct data",
        params: &[],
        needs_sqrt_q: true,
        constraint: "x_k=q^(k+1/2)+q^(-k-1/2), h_k=q^-k, g_k=q^(1/2)(q^-2k-1)",
        primary: false,
        builder: |q, _| q2_laguerre_direct_data(q, &r0()),
    },
    FamilySpec {
        node: "5b",
        key: "discrete-q-hermite-i",
        name: "discrete q-Hermite I",
        params: &[],
        needs_sqrt_q: false,
        constraint: "x_k=q^k, h_k=q^-k, g_k=q^-k-1",
        primary: true,
        builder: |q, _| al_salam_carlitz_data(q, &int(1)),
    },
    FamilySpec {
        node: "5c",
        key: "degenerate-5c",
        name: "x^n (x^-1;q)_n",
        params: &[],
        needs_sqrt_q: false,
        constraint: "x_k=q^k, h_k=q^-k, g_k=0",
        primary: true,
        builder: |q, _| direct(q, [r0(), int(1), int(1), r0(), r0(), r0()], true),
    },
    FamilySpec {
        node: "6a",
        key: "monomials",
        name: "x^n",
        params: &[],
        needs_sqrt_q: false,
        constraint: "x_k=0, h_k=q^-k, g_k=0",
        primary: true,
        builder: |q, _| direct(q, [r0(), int(1), r0(), r0(), r0(), r0()], true),
    },
];

/// Expected patterns of the scheme nodes, as drawn.
pub const NODE_PATTERNS: [(&str, &str); 19] = [
    ("1a", "BB/B/BB"),
    ("2a", "Bo/B/BB"),
    ("2b", "oB/B/BB"),
    ("3a", "BB/o/oB"),
    ("3b", "BB/o/Bo"),
    ("3c", "Bo/B/Bo"),
    ("3d", "oo/B/BB"),
    ("3e", "oB/B/oB"),
    ("4a", "Bo/o/oB"),
    ("4b", "BB/o/oo"),
    ("4c", "Bo/o/Bo"),
    ("4d", "oo/B/Bo"),
    ("4e", "oB/o/Bo"),
    ("4f", "oo/B/oB"),
    ("4g", "oB/o/oB"),
    ("5a", "Bo/o/oo"),
    ("5b", "oo/o/Bo"),
    ("5c", "oo/B/oo"),
    ("6a", "oo/o/oo"),
];

pub fn node_pattern(node: &str) -> Option<VanishingPattern> {
    NODE_PATTERNS
        .iter()
        .find(|(n, _)| *n == node)
        .map(|(_, p)| p.parse().expect("static pattern"))
}

pub fn families() -> &'static [FamilySpec] {
    FAMILIES
}

/// Looks a family up by key, or by node label (giving the node's main family).
pub fn find_family(id: &str) -> Result<&'static FamilySpec, Error> {
    FAMILIES
        .iter()
        .find(|f| f.key == id)
        .or_else(|| FAMILIES.iter().find(|f| f.node == id && f.primary))
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

impl FamilySpec {
    pub fn expected_pattern(&self) -> VanishingPattern {
        node_pattern(self.node).expect("every family sits on a node")
    }

    pub fn info(&self) -> FamilyInfo {
        FamilyInfo {
            id: self.node.to_string(),
            key: self.key.to_string(),
            name: self.name.to_string(),
            params: self.params.iter().map(|s| s.to_string()).collect(),
            needs_sqrt_q: self.needs_sqrt_q,
            constraint: self.constraint.to_string(),
            expected_pattern: self.expected_pattern(),
        }
    }

    /// Data for the given parameters; every listed parameter is required.
    pub fn data(&self, q: &QValue, params: &Params) -> Result<VerdeStarData, Error> {
        if self.needs_sqrt_q && !q.has_sqrt() {
            return Err(Error::MissingSqrtQ);
        }
        let mut vals = Vec::with_capacity(self.params.len());
        for name in self.params {
            let v = params
                .get(*name)
                .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {name}")))?;
            vals.push(v.clone());
        }
        if let Some(extra) = params.keys().find(|k| !self.params.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "unknown parameter {extra} for {}",
                self.key
            )));
        }
        (self.builder)(q, &vals)
    }

    /// Random base and parameters for which the family data is valid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (QValue, Params, VerdeStarData) {
        loop {
            let q = if self.needs_sqrt_q {
                QValue::from_sqrt(small_nonzero(rng))
            } else {
                QValue::from_q(small_nonzero(rng))
            };
            let Ok(q) = q else { continue };
            let params: Params = self
                .params
                .iter()
                .map(|n| (n.to_string(), small_nonzero(rng)))
                .collect();
            if let Ok(d) = self.data(&q, &params) {
                return (q, params, d);
            }
        }
    }

    /// Like [`sample`](Self::sample), but redraws until no structure constant
    /// vanishes by accident.
    pub fn sample_generic<R: Rng + ?Sized>(&self, rng: &mut R) -> (QValue, Params, VerdeStarData) {
        let want = self.expected_pattern();
        loop {
            let draw = self.sample(rng);
            if closed_form_coeffs(&draw.2).pattern() == want {
                return draw;
            }
        }
    }
}

pub fn family_data(spec: &FamilySpec, q: &QValue, params: &Params) -> Result<VerdeStarData, Error> {
    spec.data(q, params)
}

/// A family with an extra parameter constraint that produces an array
/// absent from the scheme.
#[derive(Clone, Copy, Debug)]
pub struct Remark4Family {
    pub index: usize,
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub constraint: &'static str,
    pub pattern: &'static str,
}

pub const REMARK4: [Remark4Family; 13] = [
    Remark4Family {
        index: 1,
        name: "Askey-Wilson",
        params: &["a", "b", "c"],
        constraint: "abc+abd+acd+bcd+q(a+b+c+d)=0, solved for d",
        pattern: "BB/o/BB",
    },
    Remark4Family {
        index: 2,
        name: "Askey-Wilson",
        params: &["a", "b", "c"],
        constraint: "abcd+q(ab+ac+ad+bc+bd+cd)+q^2=0, solved for d",
        pattern: "BB/B/oB",
    },
    Remark4Family {
        index: 3,
        name: "Askey-Wilson",
        params: &["a", "b", "c", "d"],
        constraint: "abcd(a+b+c+d)+q(abc+abd+acd+bcd)=0, solved for q",
        pattern: "BB/B/Bo",
    },
    Remark4Family {
        index: 4,
        name: "Askey-Wilson",
        params: &["a", "b"],
        constraint: "both previous constraints: (a,b,-a,-q/b)",
        pattern: "BB/B/oo",
    },
    Remark4Family {
        index: 5,
        name: "continuous dual q-Hahn",
        params: &["a", "b"],
        constraint: "abc+q(a+b+c)=0, solved for c",
        pattern: "Bo/o/BB",
    },
    Remark4Family {
        index: 6,
        name: "continuous dual q-Hahn",
        params: &["a", "b"],
        constraint: "ab+ac+bc+q=0, solved for c",
        pattern: "Bo/B/oB",
    },
    Remark4Family {
        index: 7,
        name: "big q-Jacobi",
        params: &["a", "b"],
        constraint: "a+c+a(b+c)=0, solved for c",
        pattern: "oB/o/BB",
    },
    Remark4Family {
        index: 8,
        name: "big q-Jacobi",
        params: &["a", "b"],
        constraint: "b+c+b(a+c)=0, solved for c",
        pattern: "oB/B/Bo",
    },
    Remark4Family {
        index: 9,
        name: "Al-Salam-Chihara",
        params: &["a"],
        constraint: "ab+q=0, solved for b",
        pattern: "Bo/B/oo",
    },
    Remark4Family {
        index: 10,
        name: "special little q-Jacobi",
        params: &["b"],
        constraint: "P_n(x;-1,b,0;q)",
        pattern: "oB/B/oo",
    },
    Remark4Family {
        index: 11,
        name: "big q-Laguerre",
        params: &["a"],
        constraint: "a+c+ac=0, solved for c",
        pattern: "oo/o/BB",
    },
    Remark4Family {
        index: 12,
        name: "dual continuous q^2-Hermite",
        params: &[],
        constraint: "P_n(x;-1,-1,0;q)",
        pattern: "oB/o/oo",
    },
    Remark4Family {
        index: 13,
        name: "special q-Charlier",
        params: &[],
        constraint: "q-Charlier data at a=1",
        pattern: "oo/o/oB",
    },
];

fn solve(num: Rational, den: Rational, what: &str) -> Result<Rational, Error> {
    if den.is_zero() {
        return Err(Error::ConstraintUnsolvable(format!("{what}: zero denominator")));
    }
    Ok(num / den)
}

fn remark4_params(index: usize, params: &Params) -> Result<Vec<Rational>, Error> {
    let spec = REMARK4
        .get(index.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidParameter(format!("constrained family index {index} not in 1..=13")))?;
    spec.params
        .iter()
        .map(|n| {
            params
                .get(*n)
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {n}")))
        })
        .collect()
}

/// Data for the constrained family number `index` (1..=13). Entry 3 solves
/// for `q`, so the given `q` is ignored there.
pub fn remark4_family(index: usize, q: &QValue, params: &Params) -> Result<VerdeStarData, Error> {
    let p = remark4_params(index, params)?;
    let qq = q.q();
    let one = Rational::one();
    let wrap = |e: Error| match e {
        Error::InvalidParameter(m) | Error::InvalidQ(m) => Error::ConstraintUnsolvable(m),
        other => other,
    };
    let out = match index {
        1 => {
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let d = solve(-(a * b * c + qq * (a + b + c)), a * b + a * c + b * c + qq, "d")?;
            aw(q, a.clone(), b.clone(), c.clone(), d)
        }
        2 => {
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let d = solve(
                -(qq * (a * b + a * c + b * c) + qq * qq),
                a * b * c + qq * (a + b + c),
                "d",
            )?;
            aw(q, a.clone(), b.clone(), c.clone(), d)
        }
        3 => {
            let t = AWParams {
                a: p[0].clone(),
                b: p[1].clone(),
                c: p[2].clone(),
                d: p[3].clone(),
                q: q.clone(),
            };
            let [e1, _, e3, e4] = t.elementary();
            let new_q = solve(-(e1 * e4), e3, "q")?;
            let nq = QValue::from_q(new_q).map_err(wrap)?;
            aw(&nq, p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())
        }
        4 => {
            let (a, b) = (&p[0], &p[1]);
            if b.is_zero() {
                return Err(Error::ConstraintUnsolvable("b = 0".into()));
            }
            aw(q, a.clone(), b.clone(), -a, -(qq / b))
        }
        5 => {
            let (a, b) = (&p[0], &p[1]);
            let c = solve(-(qq * (a + b)), a * b + qq, "c")?;
            aw(q, a.clone(), b.clone(), c, r0())
        }
        6 => {
            let (a, b) = (&p[0], &p[1]);
            let c = solve(-(a * b + qq), a + b, "c")?;
            aw(q, a.clone(), b.clone(), c, r0())
        }
        7 => {
            let (a, b) = (&p[0], &p[1]);
            let c = solve(-(a * (&one + b)), &one + a, "c")?;
            bqj(q, a.clone(), b.clone(), c)
        }
        8 => {
            let (a, b) = (&p[0], &p[1]);
            let c = solve(-(b * (&one + a)), &one + b, "c")?;
            bqj(q, a.clone(), b.clone(), c)
        }
        9 => {
            let a = &p[0];
            let b = solve(-qq.clone(), a.clone(), "b")?;
            aw(q, a.clone(), b, r0(), r0())
        }
        10 => bqj(q, int(-1), p[0].clone(), r0()),
        11 => {
            let a = &p[0];
            let c = solve(-a.clone(), &one + a, "c")?;
            bqj(q, a.clone(), r0(), c)
        }
        12 => bqj(q, int(-1), int(-1), r0()),
        13 => q_charlier_data(q, &one),
        _ => unreachable!(),
    };
    out.map_err(wrap)
}

/// Random valid draw for constrained family `index`.
pub fn sample_remark4<R: Rng + ?Sized>(index: usize, rng: &mut R) -> (QValue, Params, VerdeStarData) {
    let spec = &REMARK4[index - 1];
    loop {
        let Ok(q) = QValue::from_q(small_nonzero(rng)) else {
            continue;
        };
        let params: Params = spec
            .params
            .iter()
            .map(|n| (n.to_string(), small_nonzero(rng)))
            .collect();
        if let Ok(d) = remark4_family(index, &q, &params) {
            return (q, params, d);
        }
    }
}

/// Random rational, possibly zero; exposed for the harnesses.
pub fn sample_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    small_rational(rng)
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params(pairs: &[(&str, Rational)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
