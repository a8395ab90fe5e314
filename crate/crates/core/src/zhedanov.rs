//! The q-Zhedanov algebra realized on coefficient sequences.
//!
//! With `Q = q + 1/q` the two relations are
//!
//! - `Q K2 K1 K2 - K2^2 K1 - K1 K2^2 = C1 K1 + D K2 + G1`
//! - `Q K1 K2 K1 - K1^2 K2 - K2 K1^2 = C2 K2 + D K1 + G2`
//!
//! and the Casimir operator acts as the scalar `omega`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::exactfield::Rational;
use crate::report::Report;
use crate::verdestar::VerdeStarData;

/// A finitely supported sequence `f_0, f_1, ...`, standing for `sum f_n v_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoeffSequence {
    values: Vec<Rational>,
}

impl CoeffSequence {
    pub fn new(mut values: Vec<Rational>) -> Self {
        while values.last().is_some_and(Rational::is_zero) {
            values.pop();
        }
        CoeffSequence { values }
    }

    pub fn zero() -> Self {
        CoeffSequence::default()
    }

    pub fn delta(m: usize) -> Self {
        let mut values = vec![Rational::zero(); m + 1];
        values[m] = Rational::one();
        CoeffSequence { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Rational {
        self.values.get(n).cloned().unwrap_or_default()
    }

    /// Index one past the last nonzero entry.
    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CoeffSequence::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.values.len().max(other.values.len());
        CoeffSequence::new((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        self.add(&other.scale(c))
    }
}

/// `(K1 f)_n = h_n f_n + g_(n+1) f_(n+1)`.
pub fn k1_apply(data: &VerdeStarData, f: &CoeffSequence) -> CoeffSequence {
    let n = f.support_len();
    CoeffSequence::new(
        (0..n)
            .map(|i| data.eigen_h(i) * f.get(i) + data.coupling_g(i + 1) * f.get(i + 1))
            .collect(),
    )
}

/// `(K2 f)_n = x_n f_n + f_(n-1)`.
pub fn k2_apply(data: &VerdeStarData, f: &CoeffSequence) -> CoeffSequence {
    let n = f.support_len();
    if n == 0 {
        return CoeffSequence::zero();
    }
    CoeffSequence::new(
        (0..=n)
            .map(|i| {
                let prev = if i > 0 { f.get(i - 1) } else { Rational::zero() };
                data.node_x(i) * f.get(i) + prev
            })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    K1,
    K2,
}

/// Applies a word of operators; the rightmost letter acts first.
pub fn apply_word(data: &VerdeStarData, word: &[Op], f: &CoeffSequence) -> CoeffSequence {
    word.iter().rev().fold(f.clone(), |acc, op| match op {
        Op::K1 => k1_apply(data, &acc),
        Op::K2 => k2_apply(data, &acc),
    })
}

/// The structure constants `C1, C2, D, G1, G2` and the Casimir value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZhedanovCoefficients {
    #[serde(rename = "C1")]
    pub c1: Rational,
    #[serde(rename = "C2")]
    pub c2: Rational,
    #[serde(rename = "D")]
    pub d: Rational,
    #[serde(rename = "G1")]
    pub g1: Rational,
    #[serde(rename = "G2")]
    pub g2: Rational,
    pub omega: Rational,
}

impl ZhedanovCoefficients {
    /// `[C1, C2, D, G1, G2, omega]`.
    pub fn as_array(&self) -> [&Rational; 6] {
        [&self.c1, &self.c2, &self.d, &self.g1, &self.g2, &self.omega]
    }

    pub fn from_array(v: [Rational; 6]) -> Self {
        let [c1, c2, d, g1, g2, omega] = v;
        ZhedanovCoefficients {
            c1,
            c2,
            d,
            g1,
            g2,
            omega,
        }
    }

    /// Coefficients after rescaling `K1` by `mu` and `K2` by `rho`.
    pub fn scaled(&self, mu: &Rational, rho: &Rational) -> Self {
        let arr = self.as_array();
        let out: Vec<Rational> = arr
            .iter()
            .zip(WEIGHTS)
            .map(|(v, (wr, wm))| *v * rho.pow(wr) * mu.pow(wm))
            .collect();
        ZhedanovCoefficients::from_array(out.try_into().unwrap())
    }

    pub fn pattern(&self) -> VanishingPattern {
        vanishing_pattern(self)
    }

    /// The same constants for the dual algebra: `C1 <-> C2`, `G1 <-> G2`.
    pub fn swapped(&self) -> Self {
        ZhedanovCoefficients {
            c1: self.c2.clone(),
            c2: self.c1.clone(),
            d: self.d.clone(),
            g1: self.g2.clone(),
            g2: self.g1.clone(),
            omega: self.omega.clone(),
        }
    }
}

/// Exponents `(of rho, of mu)` for `C1, C2, D, G1, G2, omega`.
pub const WEIGHTS: [(i64, i64); 6] = [(2, 0), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)];

pub const NAMES: [&str; 6] = ["C1", "C2", "D", "G1", "G2", "omega"];

/// The constants in closed form, expanded so that only integer powers of
/// `q` occur.
pub fn closed_form_coeffs(data: &VerdeStarData) -> ZhedanovCoefficients {
    let q = &data.q;
    let qi = q.recip();
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let big_q = q + &qi;
    let (a1, a2, b1, b2, d1, d2) = (&data.a1, &data.a2, &data.b1, &data.b2, &data.d1, &data.d2);
    let qmqi = q - &qi;
    let qmqi2 = &qmqi * &qmqi;

    let c1 = &qmqi2 * b1 * b2;
    let c2 = &qmqi2 * a1 * a2;
    let cross = a1 * b1 * &qi - a1 * b2 - a2 * b1 + q * a2 * b2;
    let d = -(&big_q - &two) * (&cross + d1 + d2);
    let g1 = &qmqi * ((&one - &qi) * b1 * d2 + (q - &one) * b2 * d1);
    let g2 = &qmqi * ((&one - &qi) * a1 * d2 + (q - &one) * a2 * d1);

    let qa = a1 * a1 * &qi + &big_q * a1 * a2 + q * a2 * a2;
    let qb = b1 * b1 * &qi + &big_q * b1 * b2 + q * b2 * b2;
    let ds = d1 + d2;
    let omega = (&big_q - &two)
        * (qa * qb
            + (d1 * d1 + d2 * d2 - &big_q * d1 * d2)
            + &big_q * &ds * (a1 * b2 + a2 * b1)
            + &two * &ds * (a1 * b1 * &qi + q * a2 * b2));

    ZhedanovCoefficients {
        c1,
        c2,
        d,
        g1,
        g2,
        omega,
    }
}

fn relation_lhs(data: &VerdeStarData, f: &CoeffSequence, first: Op, second: Op) -> CoeffSequence {
    // Q B A B - B^2 A - A B^2 with A = first, B = second
    let q = &data.q;
    let big_q = q + q.recip();
    let bab = apply_word(data, &[second, first, second], f);
    let bba = apply_word(data, &[second, second, first], f);
    let abb = apply_word(data, &[first, second, second], f);
    bab.scale(&big_q).sub(&bba).sub(&abb)
}

/// Left-hand side of the first relation applied to `f`.
pub fn relation1_lhs(data: &VerdeStarData, f: &CoeffSequence) -> CoeffSequence {
    relation_lhs(data, f, Op::K1, Op::K2)
}

/// Left-hand side of the second relation applied to `f`.
pub fn relation2_lhs(data: &VerdeStarData, f: &CoeffSequence) -> CoeffSequence {
    relation_lhs(data, f, Op::K2, Op::K1)
}

/// `C1 K1 f + D K2 f + G1 f`.
pub fn relation1_rhs(data: &VerdeStarData, c: &ZhedanovCoefficients, f: &CoeffSequence) -> CoeffSequence {
    k1_apply(data, f)
        .scale(&c.c1)
        .add_scaled(&c.d, &k2_apply(data, f))
        .add_scaled(&c.g1, f)
}

/// `C2 K2 f + D K1 f + G2 f`.
pub fn relation2_rhs(data: &VerdeStarData, c: &ZhedanovCoefficients, f: &CoeffSequence) -> CoeffSequence {
    k2_apply(data, f)
        .scale(&c.c2)
        .add_scaled(&c.d, &k1_apply(data, f))
        .add_scaled(&c.g2, f)
}

/// The Casimir operator with the given constants.
pub fn casimir_apply_with(data: &VerdeStarData, c: &ZhedanovCoefficients, f: &CoeffSequence) -> CoeffSequence {
    use Op::{K1, K2};
    let q = &data.q;
    let big_q = q + q.recip();
    let two = Rational::from_integer(2);
    let half_q = &big_q / &two;
    let g_factor = (&two + &big_q) / &two;
    let terms: [(Rational, &[Op]); 10] = [
        (-&half_q, &[K1, K2, K2, K1]),
        (-&half_q, &[K2, K1, K1, K2]),
        (Rational::one(), &[K1, K2, K1, K2]),
        (Rational::one(), &[K2, K1, K2, K1]),
        (&half_q * &c.c1, &[K1, K1]),
        (&half_q * &c.c2, &[K2, K2]),
        (c.d.clone(), &[K1, K2]),
        (c.d.clone(), &[K2, K1]),
        (&g_factor * &c.g1, &[K1]),
        (&g_factor * &c.g2, &[K2]),
    ];
    terms.iter().fold(CoeffSequence::zero(), |acc, (coef, word)| {
        if coef.is_zero() {
            acc
        } else {
            acc.add_scaled(coef, &apply_word(data, word, f))
        }
    })
}

/// The Casimir operator with the closed-form constants.
pub fn casimir_apply(data: &VerdeStarData, f: &CoeffSequence) -> CoeffSequence {
    casimir_apply_with(data, &closed_form_coeffs(data), f)
}

/// Solves the overdetermined system `rows * x = rhs` exactly. Returns the
/// unique solution, or an error if the system is inconsistent or rank
/// deficient.
fn solve_exact(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, what: &str) -> Result<Vec<Rational>, Error> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::InconsistentAlgebra(format!("{what}: constants not determined")));
        };
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for c in col..cols {
            rows[pivot_row][c] *= &inv;
        }
        rhs[pivot_row] *= &inv;
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..cols {
                    let sub = &factor * &rows[pivot_row][c];
                    rows[r][c] -= sub;
                }
                let sub = &factor * &rhs[pivot_row];
                rhs[r] -= sub;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return Err(Error::InconsistentAlgebra(format!("{what}: system has no solution")));
    }
    Ok(rhs[..cols].to_vec())
}

/// Reads the constants off the operator action on `delta_0 .. delta_N`.
pub fn extract_coeffs(data: &VerdeStarData, n: usize) -> Result<ZhedanovCoefficients, Error> {
    if n < 4 {
        return Err(Error::InvalidParameter("extraction needs N >= 4".into()));
    }
    let mut sys1 = (Vec::new(), Vec::new());
    let mut sys2 = (Vec::new(), Vec::new());
    for m in 0..=n {
        let delta = CoeffSequence::delta(m);
        let k1 = k1_apply(data, &delta);
        let k2 = k2_apply(data, &delta);
        let l1 = relation1_lhs(data, &delta);
        let l2 = relation2_lhs(data, &delta);
        let len = [&k1, &k2, &delta, &l1, &l2]
            .iter()
            .map(|s| s.support_len())
            .max()
            .unwrap();
        for i in 0..len {
            sys1.0.push(vec![k1.get(i), k2.get(i), delta.get(i)]);
            sys1.1.push(l1.get(i));
            sys2.0.push(vec![k2.get(i), k1.get(i), delta.get(i)]);
            sys2.1.push(l2.get(i));
        }
    }
    let s1 = solve_exact(sys1.0, sys1.1, "first relation")?;
    let s2 = solve_exact(sys2.0, sys2.1, "second relation")?;
    if s1[1] != s2[1] {
        return Err(Error::InconsistentAlgebra(format!(
            "D differs between the relations: {} vs {}",
            s1[1], s2[1]
        )));
    }
    let mut c = ZhedanovCoefficients {
        c1: s1[0].clone(),
        c2: s2[0].clone(),
        d: s1[1].clone(),
        g1: s1[2].clone(),
        g2: s2[2].clone(),
        omega: Rational::zero(),
    };
    c.omega = casimir_apply_with(data, &c, &CoeffSequence::delta(0)).get(0);
    for m in 0..=n {
        let delta = CoeffSequence::delta(m);
        if casimir_apply_with(data, &c, &delta) != delta.scale(&c.omega) {
            return Err(Error::InconsistentAlgebra(format!(
                "Casimir is not scalar on delta_{m}"
            )));
        }
    }
    Ok(c)
}

/// Both relations on `delta_0 .. delta_n` with the closed-form constants.
pub fn verify_relations(data: &VerdeStarData, n: usize) -> Report {
    let c = closed_form_coeffs(data);
    let mut report = Report::new("relations");
    for m in 0..=n {
        let delta = CoeffSequence::delta(m);
        let (l, r) = (relation1_lhs(data, &delta), relation1_rhs(data, &c, &delta));
        report.check(l == r, || format!("first relation on delta_{m}: {l:?} != {r:?}"));
        let (l, r) = (relation2_lhs(data, &delta), relation2_rhs(data, &c, &delta));
        report.check(l == r, || format!("second relation on delta_{m}: {l:?} != {r:?}"));
    }
    report
}

/// `L u_m = h_m u_m` for `m <= n`, in the Newton basis.
pub fn verify_eigen(data: &VerdeStarData, n: usize) -> Report {
    let mut report = Report::new("eigen");
    for m in 0..=n {
        let Some(u) = report.with_result(data.monic_u(m)) else {
            break;
        };
        let h = data.eigen_h(m);
        report.check(data.apply_l(&u) == u.scale(&h), || format!("L u_{m} != h_{m} u_{m}"));
    }
    report
}

/// `Q delta_m = omega delta_m` for `m <= n`.
pub fn verify_casimir(data: &VerdeStarData, n: usize) -> Report {
    let c = closed_form_coeffs(data);
    let mut report = Report::new("casimir");
    for m in 0..=n {
        let delta = CoeffSequence::delta(m);
        let got = casimir_apply_with(data, &c, &delta);
        report.check(got == delta.scale(&c.omega), || {
            format!("Q delta_{m} = {got:?}, omega = {}", c.omega)
        });
    }
    report
}

/// `Q` commutes with `K1` and `K2` on `delta_0 .. delta_n`.
pub fn verify_commutation(data: &VerdeStarData, n: usize) -> Report {
    let c = closed_form_coeffs(data);
    let mut report = Report::new("casimir commutes");
    for m in 0..=n {
        let delta = CoeffSequence::delta(m);
        for (name, op) in [("K1", Op::K1), ("K2", Op::K2)] {
            let a = casimir_apply_with(data, &c, &apply_word(data, &[op], &delta));
            let b = apply_word(data, &[op], &casimir_apply_with(data, &c, &delta));
            report.check(a == b, || format!("[Q, {name}] delta_{m} != 0"));
        }
    }
    report
}

/// Zero/nonzero flags of `C1, C2, D, G1, G2`, laid out as
/// `C1 C2 / D / G1 G2`. `true` means nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VanishingPattern {
    pub flags: [bool; 5],
}

impl VanishingPattern {
    pub fn new(flags: [bool; 5]) -> Self {
        VanishingPattern { flags }
    }

    /// Bit `i` set when entry `i` is zero.
    pub fn zero_mask(&self) -> u8 {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| !**f)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn zero_count(&self) -> u32 {
        self.zero_mask().count_ones()
    }

    /// Mirror image: `C1 <-> C2`, `G1 <-> G2`.
    pub fn dual(&self) -> Self {
        let f = self.flags;
        VanishingPattern::new([f[1], f[0], f[2], f[4], f[3]])
    }

    /// Every zero of `self` is a zero of `other`, and `other` has more.
    pub fn strictly_below(&self, other: &VanishingPattern) -> bool {
        let (a, b) = (self.zero_mask(), other.zero_mask());
        a & b == a && a != b
    }

    /// Three rows with filled and open circles.
    pub fn glyph_rows(&self) -> [String; 3] {
        let g = |b: bool| if b { '\u{25cf}' } else { '\u{25cb}' };
        let f = self.flags;
        [
            format!("{} {}", g(f[0]), g(f[1])),
            format!("{}", g(f[2])),
            format!("{} {}", g(f[3]), g(f[4])),
        ]
    }

    /// All 32 patterns, in mask order.
    pub fn all() -> Vec<VanishingPattern> {
        (0u8..32)
            .map(|m| VanishingPattern::new(std::array::from_fn(|i| m & (1 << i) == 0)))
            .collect()
    }
}

impl fmt::Display for VanishingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |b: bool| if b { 'B' } else { 'o' };
        let g = self.flags;
        write!(f, "{}{}/{}/{}{}", c(g[0]), c(g[1]), c(g[2]), c(g[3]), c(g[4]))
    }
}

impl FromStr for VanishingPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a pattern (want e.g. BB/B/oB): {s:?}"));
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 7 || chars[2] != '/' || chars[4] != '/' {
            return Err(bad());
        }
        let mut flags = [false; 5];
        for (slot, &i) in flags.iter_mut().zip(&[0usize, 1, 3, 5, 6]) {
            *slot = match chars[i] {
                'B' | '\u{25cf}' => true,
                'o' | '\u{25cb}' => false,
                _ => return Err(bad()),
            };
        }
        Ok(VanishingPattern { flags })
    }
}

impl Serialize for VanishingPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VanishingPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn vanishing_pattern(c: &ZhedanovCoefficients) -> VanishingPattern {
    let a = c.as_array();
    VanishingPattern::new(std::array::from_fn(|i| !a[i].is_zero()))
}

pub fn pattern_dual(p: &VanishingPattern) -> VanishingPattern {
    p.dual()
}

/// Canonical form of the orbit of a coefficient tuple under rescaling of
/// `K1` and `K2` by nonzero rationals.
///
/// - `values[j]` is the normalized entry when the remaining freedom leaves
///   it fixed, `None` otherwise. Zero entries are always `Some(0)`.
/// - `invariants` holds weight-zero monomials in the free entries.
/// - `signs` holds entries whose sign cannot change.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalClass {
    pub pattern: VanishingPattern,
    pub values: Vec<Option<Rational>>,
    pub invariants: Vec<(String, Rational)>,
    pub signs: Vec<(String, i8)>,
}

pub fn canonical_class(c: &ZhedanovCoefficients) -> CanonicalClass {
    let mut v: Vec<Rational> = c.as_array().iter().map(|r| (*r).clone()).collect();
    let pattern = vanishing_pattern(c);
    let mut values: Vec<Option<Rational>> = vec![None; 6];
    let mut invariants = Vec::new();
    let mut signs = Vec::new();

    // First nonzero entry with a primitive weight: D, G1, G2.
    let Some(e) = [2usize, 3, 4].into_iter().find(|&j| !v[j].is_zero()) else {
        // Only C1, C2, omega can be nonzero; each scales by a square.
        for j in [0usize, 1, 5] {
            if v[j].is_zero() {
                values[j] = Some(Rational::zero());
            } else {
                signs.push((NAMES[j].to_string(), v[j].signum()));
            }
        }
        for j in [2usize, 3, 4] {
            values[j] = Some(Rational::zero());
        }
        if !v[0].is_zero() && !v[1].is_zero() && !v[5].is_zero() {
            invariants.push(("omega/(C1*C2)".to_string(), &v[5] / (&v[0] * &v[1])));
        }
        return CanonicalClass {
            pattern,
            values,
            invariants,
            signs,
        };
    };

    let (w1, w2) = WEIGHTS[e];
    let eg = w1.extended_gcd(&w2);
    let (alpha, beta) = (eg.x, eg.y);
    debug_assert_eq!(eg.gcd, 1);
    let rho = v[e].pow(-alpha);
    let mu = v[e].pow(-beta);
    for (j, val) in v.iter_mut().enumerate() {
        let (a, b) = WEIGHTS[j];
        *val = &*val * rho.pow(a) * mu.pow(b);
    }
    debug_assert!(v[e].is_one());

    // Remaining freedom (rho, mu) = (t^-w2, t^w1) multiplies entry j by t^k_j.
    let k: Vec<i64> = WEIGHTS.iter().map(|&(a, b)| w1 * b - w2 * a).collect();
    let unit = (0..6).find(|&j| j != e && !v[j].is_zero() && k[j].abs() == 1);
    if let Some(u) = unit {
        let t = v[u].pow(-k[u]);
        for j in 0..6 {
            v[j] = &v[j] * t.pow(k[j]);
        }
        values = v.into_iter().map(Some).collect();
        return CanonicalClass {
            pattern,
            values,
            invariants,
            signs,
        };
    }

    let free: Vec<usize> = (0..6).filter(|&j| !v[j].is_zero() && k[j] != 0).collect();
    for j in 0..6 {
        if !free.contains(&j) {
            values[j] = Some(v[j].clone());
        }
    }
    if let Some(&p) = free.first() {
        for &j in &free[1..] {
            let g = k[p].gcd(&k[j]);
            let (mut a, mut b) = (k[p] / g, k[j] / g);
            if a < 0 {
                a = -a;
                b = -b;
            }
            let name = format!("{}^{}*{}^{}", NAMES[j], a, NAMES[p], -b);
            invariants.push((name, v[j].pow(a) * v[p].pow(-b)));
        }
    }
    for &j in &free {
        if k[j] % 2 == 0 {
            signs.push((NAMES[j].to_string(), v[j].signum()));
        }
    }
    CanonicalClass {
        pattern,
        values,
        invariants,
        signs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use crate::verdestar::{make_data, random_data};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn aw(a: Rational, b: Rational, c: Rational, d: Rational, q: Rational) -> VerdeStarData {
        let e = &a * &b * &c * &d;
        let d1 = -(&a * (&e + &q * (&b * &c + &b * &d + &c * &d))) / (&q * &q);
        let d2 = -(&b + &c + &d + &q / &a);
        make_data(q.clone(), &e / &q, r(1), a.clone(), a.recip(), d1, d2, false).unwrap()
    }

    fn aw2357() -> VerdeStarData {
        aw(r(2), r(3), r(5), r(7), rat(1, 2))
    }

    #[test]
    fn delta_actions() {
        let d = aw2357();
        for m in 0..5 {
            let delta = CoeffSequence::delta(m);
            let mut k1 = CoeffSequence::delta(m).scale(&d.eigen_h(m));
            if m > 0 {
                k1 = k1.add_scaled(&d.coupling_g(m), &CoeffSequence::delta(m - 1));
            }
            assert_eq!(k1_apply(&d, &delta), k1);
            let k2 = CoeffSequence::delta(m)
                .scale(&d.node_x(m))
                .add(&CoeffSequence::delta(m + 1));
            assert_eq!(k2_apply(&d, &delta), k2);
        }
    }

    #[test]
    fn k2_is_multiplication_by_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let d = random_data(&mut rng);
            let f: Vec<Rational> = (0..9).map(|i| rat(i * 3 - 7, i + 2)).collect();
            let nodes = d.nodes(12);
            let p = crate::Poly::from_newton(&f, &nodes);
            let xp = &crate::Poly::x() * &p;
            let got = k2_apply(&d, &CoeffSequence::new(f));
            assert_eq!(CoeffSequence::new(xp.to_newton(&nodes)), got);
        }
    }

    /// The constants and omega written out literally with q^(1/2).
    fn literal(d: &VerdeStarData, p: &Rational) -> [Rational; 6] {
        let q = &d.q;
        let pi = p.recip();
        let qi = q.recip();
        let big_q = q + &qi;
        let (a1, a2, b1, b2, d1, d2) = (&d.a1, &d.a2, &d.b1, &d.b2, &d.d1, &d.d2);
        let s = p - &pi;
        let c1 = (q - &qi).pow(2) * b1 * b2;
        let c2 = (q - &qi).pow(2) * a1 * a2;
        let dd = -(s.pow(2)) * ((&pi * a1 - p * a2) * (&pi * b1 - p * b2) + d1 + d2);
        let g1 = &s * (q - &qi) * (&pi * b1 * d2 + p * b2 * d1);
        let g2 = &s * (q - &qi) * (&pi * a1 * d2 + p * a2 * d1);
        let two = r(2);
        let om = (&big_q - &two)
            * ((&qi * a1 * a1 + &big_q * a1 * a2 + q * a2 * a2) * (&qi * b1 * b1 + &big_q * b1 * b2 + q * b2 * b2)
                + (d1 * d1 + d2 * d2 - &big_q * d1 * d2)
                + &big_q * (d1 + d2) * (a1 * b2 + a2 * b1)
                + &two * (d1 + d2) * (&qi * a1 * b1 + q * a2 * b2));
        [c1, c2, dd, g1, g2, om]
    }

    #[test]
    fn closed_form_matches_square_root_evaluation() {
        let p = rat(2, 3);
        let q = &p * &p;
        let d = make_data(
            q,
            rat(5, 3),
            rat(-7, 2),
            rat(11, 5),
            rat(13, 4),
            rat(1, 7),
            rat(-9, 8),
            false,
        )
        .unwrap();
        assert_eq!(
            closed_form_coeffs(&d),
            ZhedanovCoefficients::from_array(literal(&d, &p))
        );
        assert_eq!(
            closed_form_coeffs(&d),
            ZhedanovCoefficients::from_array(literal(&d, &-p))
        );
    }

    #[test]
    fn askey_wilson_c1() {
        assert_eq!(closed_form_coeffs(&aw2357()).c1, rat(9, 4));
    }

    #[test]
    fn degenerate_values() {
        let q = rat(1, 3);
        let a6 = make_data(q.clone(), r(0), r(1), r(0), r(0), r(0), r(0), true).unwrap();
        let c = extract_coeffs(&a6, 6).unwrap();
        assert!(c.as_array().iter().all(|v| v.is_zero()));
        assert_eq!(c, closed_form_coeffs(&a6));
        let c5 = make_data(q.clone(), r(0), r(1), r(1), r(0), r(0), r(0), true).unwrap();
        let c = extract_coeffs(&c5, 6).unwrap();
        assert_eq!(c, closed_form_coeffs(&c5));
        assert_eq!(c.d, &q - r(2) + q.recip());
        assert_eq!(c.pattern().to_string(), "oo/B/oo");
    }

    #[test]
    fn extraction_matches_closed_form() {
        assert_eq!(extract_coeffs(&aw2357(), 6).unwrap(), closed_form_coeffs(&aw2357()));
        assert!(extract_coeffs(&aw2357(), 3).is_err());
    }

    #[test]
    fn casimir_on_askey_wilson() {
        let d = aw2357();
        assert!(verify_casimir(&d, 8).passed);
        assert!(verify_commutation(&d, 6).passed);
        assert!(verify_relations(&d, 10).passed);
    }

    #[test]
    fn wrong_constants_are_caught() {
        let d = aw2357();
        let mut c = closed_form_coeffs(&d);
        c.g1 += r(1);
        let delta = CoeffSequence::delta(2);
        assert_ne!(relation1_lhs(&d, &delta), relation1_rhs(&d, &c, &delta));
    }

    #[test]
    fn pattern_text() {
        let p: VanishingPattern = "oB/B/BB".parse().unwrap();
        assert_eq!(p.flags, [false, true, true, true, true]);
        assert_eq!(p.to_string(), "oB/B/BB");
        assert_eq!(p.dual().to_string(), "Bo/B/BB");
        assert_eq!(p.dual().dual(), p);
        assert!("BB/B/B".parse::<VanishingPattern>().is_err());
        assert!("BBxBxBB".parse::<VanishingPattern>().is_err());
        let one_a: VanishingPattern = "BB/B/BB".parse().unwrap();
        assert_eq!(one_a.dual(), one_a);
        let five_c: VanishingPattern = "oo/B/oo".parse().unwrap();
        assert_eq!(five_c.dual(), five_c);
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"oB/B/BB\"");
        assert_eq!(VanishingPattern::all().len(), 32);
        assert!(one_a.strictly_below(&p));
        assert!(!p.strictly_below(&p));
    }

    #[test]
    fn exchange_and_duality_of_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let d = random_data(&mut rng);
            let c = closed_form_coeffs(&d);
            assert_eq!(closed_form_coeffs(&d.q_inverse_exchange()), c);
            if let Ok(du) = d.dual_data() {
                assert_eq!(closed_form_coeffs(&du), c.swapped());
            }
        }
    }

    #[test]
    fn canonical_all_zero() {
        let z = ZhedanovCoefficients::from_array(std::array::from_fn(|_| r(0)));
        let k = canonical_class(&z);
        assert!(k.values.iter().all(|v| v.as_ref().is_some_and(Rational::is_zero)));
        assert!(k.invariants.is_empty() && k.signs.is_empty());
    }

    fn coeffs_strategy() -> impl Strategy<Value = ZhedanovCoefficients> {
        let entry = prop_oneof![
            1 => Just(r(0)),
            3 => (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d)),
        ];
        proptest::array::uniform6(entry).prop_map(ZhedanovCoefficients::from_array)
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        (1i64..=9, 1i64..=9, any::<bool>()).prop_map(|(n, d, s)| rat(if s { n } else { -n }, d))
    }

    proptest! {
        #[test]
        fn canonical_is_scaling_invariant(c in coeffs_strategy(), mu in nonzero(), rho in nonzero()) {
            prop_assert_eq!(canonical_class(&c), canonical_class(&c.scaled(&mu, &rho)));
        }

        #[test]
        fn scaling_covariance(seed in any::<u64>(), mu in nonzero(), rho in nonzero()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_data(&mut rng);
            let lhs = closed_form_coeffs(&d.scale(&mu, &rho).unwrap());
            prop_assert_eq!(lhs, closed_form_coeffs(&d).scaled(&mu, &rho));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_data_extraction(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_data(&mut rng);
            prop_assert_eq!(extract_coeffs(&d, 6).unwrap(), closed_form_coeffs(&d));
        }
    }
}
