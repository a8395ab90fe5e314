//! Verde-Star data and the polynomials it generates.
//!
//! - `x_k = b1 q^k + b2 q^-k` (nodes), `h_k = a1 q^k + a2 q^-k` (eigenvalues),
//!   `g_k = d3 q^2k + d1 q^k + d0 + d2 q^-k + d4 q^-2k` (couplings).
//! - `u_n = sum_k c_{n,k} v_k` with `v_k = prod_{j<k} (x - x_j)`.
//! - `L v_n = h_n v_n + g_n v_{n-1}`, so `L u_n = h_n u_n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactfield::{Poly, Rational};

/// Default bound on degrees and on the eigenvalue-collision search.
pub const N_MAX: usize = 12;

/// The tuple `(q; a1, a2, b1, b2, d0, ..., d4)` plus the degeneracy flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawData")]
pub struct VerdeStarData {
    pub q: Rational,
    pub a1: Rational,
    pub a2: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub d0: Rational,
    pub d1: Rational,
    pub d2: Rational,
    pub d3: Rational,
    pub d4: Rational,
    pub degenerate: bool,
}

#[derive(Deserialize)]
struct RawData {
    q: Rational,
    a1: Rational,
    a2: Rational,
    b1: Rational,
    b2: Rational,
    d0: Rational,
    d1: Rational,
    d2: Rational,
    d3: Rational,
    d4: Rational,
    #[serde(default)]
    degenerate: bool,
}

impl TryFrom<RawData> for VerdeStarData {
    type Error = Error;

    fn try_from(r: RawData) -> Result<Self, Error> {
        let data = VerdeStarData {
            q: r.q,
            a1: r.a1,
            a2: r.a2,
            b1: r.b1,
            b2: r.b2,
            d0: r.d0,
            d1: r.d1,
            d2: r.d2,
            d3: r.d3,
            d4: r.d4,
            degenerate: r.degenerate,
        };
        data.validate(N_MAX)?;
        Ok(data)
    }
}

/// Coefficients `c_{n,0..=n}` of `u_n` in the Newton basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonExpansion {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

/// `make_data` with the default bound [`N_MAX`].
#[allow(clippy::too_many_arguments)]
pub fn make_data(
    q: Rational,
    a1: Rational,
    a2: Rational,
    b1: Rational,
    b2: Rational,
    d1: Rational,
    d2: Rational,
    degenerate: bool,
) -> Result<VerdeStarData, Error> {
    make_data_bounded(q, a1, a2, b1, b2, d1, d2, degenerate, N_MAX)
}

/// Builds data from the free parameters; `d3`, `d4` and `d0` follow.
#[allow(clippy::too_many_arguments)]
pub fn make_data_bounded(
    q: Rational,
    a1: Rational,
    a2: Rational,
    b1: Rational,
    b2: Rational,
    d1: Rational,
    d2: Rational,
    degenerate: bool,
    n_max: usize,
) -> Result<VerdeStarData, Error> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::InvalidQ(q.to_string()));
    }
    let d3 = &a1 * &b1 / &q;
    let d4 = &q * &a2 * &b2;
    let d0 = -(&d1 + &d2 + &d3 + &d4);
    let data = VerdeStarData {
        q,
        a1,
        a2,
        b1,
        b2,
        d0,
        d1,
        d2,
        d3,
        d4,
        degenerate,
    };
    data.validate(n_max)?;
    Ok(data)
}

/// First `m` in `1..=n_max` with `lo2 = lo1 q^m`.
fn collision(lo1: &Rational, lo2: &Rational, q: &Rational, n_max: usize) -> Option<usize> {
    let mut t = lo1.clone();
    for m in 1..=n_max {
        t *= q;
        if &t == lo2 {
            return Some(m);
        }
    }
    None
}

impl VerdeStarData {
    /// Checks all structural constraints, with the collision search up to `n_max`.
    pub fn validate(&self, n_max: usize) -> Result<(), Error> {
        let q = &self.q;
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::InvalidQ(q.to_string()));
        }
        if self.d3 != &self.a1 * &self.b1 / q || self.d4 != q * &self.a2 * &self.b2 {
            return Err(Error::InvalidParameter(
                "d3 must equal a1 b1 / q and d4 must equal q a2 b2".into(),
            ));
        }
        let sum = &self.d0 + &self.d1 + &self.d2 + &self.d3 + &self.d4;
        if !sum.is_zero() {
            return Err(Error::InvalidParameter("d0 + ... + d4 must vanish".into()));
        }
        if let Some(m) = collision(&self.a1, &self.a2, q, n_max) {
            return Err(Error::DegenerateEigenvalues { m });
        }
        if !self.degenerate && self.d().iter().all(|d| d.is_zero()) {
            return Err(Error::AllCouplingsZero);
        }
        Ok(())
    }

    pub fn d(&self) -> [&Rational; 5] {
        [&self.d0, &self.d1, &self.d2, &self.d3, &self.d4]
    }

    pub fn node_x(&self, k: usize) -> Rational {
        let qk = self.q.pow(k as i64);
        &self.b1 * &qk + &self.b2 / &qk
    }

    pub fn eigen_h(&self, k: usize) -> Rational {
        let qk = self.q.pow(k as i64);
        &self.a1 * &qk + &self.a2 / &qk
    }

    pub fn coupling_g(&self, k: usize) -> Rational {
        let qk = self.q.pow(k as i64);
        let q2k = &qk * &qk;
        &self.d3 * &q2k + &self.d1 * &qk + &self.d0 + &self.d2 / &qk + &self.d4 / &q2k
    }

    pub fn nodes(&self, count: usize) -> Vec<Rational> {
        (0..count).map(|k| self.node_x(k)).collect()
    }

    /// `v_k = (x - x_0)...(x - x_(k-1))`.
    pub fn newton_poly(&self, k: usize) -> Poly {
        Poly::from_roots(&self.nodes(k))
    }

    pub fn expansion(&self, n: usize) -> Result<NewtonExpansion, Error> {
        let hn = self.eigen_h(n);
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        for k in (0..n).rev() {
            let gap = &hn - self.eigen_h(k);
            if gap.is_zero() {
                return Err(Error::EigenvalueCollision { n, j: k });
            }
            coeffs[k] = &coeffs[k + 1] * self.coupling_g(k + 1) / gap;
        }
        Ok(NewtonExpansion { n, coeffs })
    }

    /// Monic `u_n`.
    pub fn monic_u(&self, n: usize) -> Result<Poly, Error> {
        let e = self.expansion(n)?;
        Ok(Poly::from_newton(&e.coeffs, &self.nodes(n)))
    }

    fn require_couplings(&self, n: usize) -> Result<(), Error> {
        for k in 1..=n {
            if self.coupling_g(k).is_zero() {
                return Err(Error::ZeroCoupling { k });
            }
        }
        Ok(())
    }

    /// `U_n(t) = sum_k prod_{j<k} (h_n - h_j)(t - x_j) / g_(j+1)`.
    #[allow(non_snake_case)]
    pub fn normalized_U(&self, n: usize, t: &Rational) -> Result<Rational, Error> {
        self.require_couplings(n)?;
        let hn = self.eigen_h(n);
        let mut total = Rational::zero();
        let mut prod = Rational::one();
        for k in 0..=n {
            total += &prod;
            if k < n {
                prod = prod * (&hn - self.eigen_h(k)) * (t - self.node_x(k)) / self.coupling_g(k + 1);
            }
        }
        Ok(total)
    }

    /// `Ũ_m(y) = sum_k prod_{j<k} (x_m - x_j)(y - h_j) / g_(j+1)`.
    #[allow(non_snake_case)]
    pub fn dual_normalized_U(&self, m: usize, y: &Rational) -> Result<Rational, Error> {
        self.require_couplings(m)?;
        let xm = self.node_x(m);
        let mut total = Rational::zero();
        let mut prod = Rational::one();
        for k in 0..=m {
            total += &prod;
            if k < m {
                prod = prod * (&xm - self.node_x(k)) * (y - self.eigen_h(k)) / self.coupling_g(k + 1);
            }
        }
        Ok(total)
    }

    /// Applies `L` through the Newton basis.
    pub fn apply_l(&self, p: &Poly) -> Poly {
        let deg = p.degree().unwrap_or(0);
        let nodes = self.nodes(deg + 1);
        let f = p.to_newton(&nodes);
        let out: Vec<Rational> = (0..f.len())
            .map(|n| {
                let mut v = self.eigen_h(n) * &f[n];
                if let Some(next) = f.get(n + 1) {
                    v += self.coupling_g(n + 1) * next;
                }
                v
            })
            .collect();
        Poly::from_newton(&out, &nodes)
    }

    /// Exchanges the roles of nodes and eigenvalues.
    pub fn dual_data(&self) -> Result<VerdeStarData, Error> {
        make_data(
            self.q.clone(),
            self.b1.clone(),
            self.b2.clone(),
            self.a1.clone(),
            self.a2.clone(),
            self.d1.clone(),
            self.d2.clone(),
            self.degenerate,
        )
    }

    /// `q -> 1/q` together with `a1 <-> a2`, `b1 <-> b2`, `d1 <-> d2`.
    pub fn q_inverse_exchange(&self) -> VerdeStarData {
        VerdeStarData {
            q: self.q.recip(),
            a1: self.a2.clone(),
            a2: self.a1.clone(),
            b1: self.b2.clone(),
            b2: self.b1.clone(),
            d0: self.d0.clone(),
            d1: self.d2.clone(),
            d2: self.d1.clone(),
            d3: self.d4.clone(),
            d4: self.d3.clone(),
            degenerate: self.degenerate,
        }
    }

    /// Multiplies `a1, a2` by `mu`, `b1, b2` by `rho` and every `d_i` by `mu rho`.
    pub fn scale(&self, mu: &Rational, rho: &Rational) -> Result<VerdeStarData, Error> {
        if mu.is_zero() || rho.is_zero() {
            return Err(Error::InvalidParameter("scale factors must be nonzero".into()));
        }
        let mr = mu * rho;
        Ok(VerdeStarData {
            q: self.q.clone(),
            a1: &self.a1 * mu,
            a2: &self.a2 * mu,
            b1: &self.b1 * rho,
            b2: &self.b2 * rho,
            d0: &self.d0 * &mr,
            d1: &self.d1 * &mr,
            d2: &self.d2 * &mr,
            d3: &self.d3 * &mr,
            d4: &self.d4 * &mr,
            degenerate: self.degenerate,
        })
    }
}

/// Uniform rational with numerator in `[-9, 9]` and denominator in `[1, 9]`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// As [`small_rational`] but never zero.
pub fn small_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random valid non-degenerate data; rejected draws are re-sampled.
pub fn random_data<R: Rng + ?Sized>(rng: &mut R) -> VerdeStarData {
    loop {
        let q = small_nonzero(rng);
        let vals: Vec<Rational> = (0..6).map(|_| small_rational(rng)).collect();
        let [a1, a2, b1, b2, d1, d2]: [Rational; 6] = vals.try_into().unwrap();
        if let Ok(d) = make_data(q, a1, a2, b1, b2, d1, d2, false) {
            return d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
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

    fn bqj(a: Rational, b: Rational, c: Rational, q: Rational) -> VerdeStarData {
        let d1 = -(&q * &a * &c);
        let d2 = -(&q * (&a + &c + r(1)));
        make_data(q.clone(), &q * &a * &b, r(1), r(0), r(1), d1, d2, false).unwrap()
    }

    fn aw2357() -> VerdeStarData {
        aw(r(2), r(3), r(5), r(7), rat(1, 2))
    }

    #[test]
    fn degenerate_case_accepted_behind_flag() {
        let d = make_data(rat(1, 2), r(0), r(1), r(1), r(0), r(0), r(0), true).unwrap();
        assert!(d.d().iter().all(|x| x.is_zero()));
        let err = make_data(rat(1, 2), r(0), r(1), r(1), r(0), r(0), r(0), false).unwrap_err();
        assert_eq!(err, Error::AllCouplingsZero);
    }

    #[test]
    fn eigenvalue_collision_rejected() {
        let err = make_data(rat(1, 2), r(1), rat(1, 2), r(1), r(0), r(1), r(0), false).unwrap_err();
        assert_eq!(err, Error::DegenerateEigenvalues { m: 1 });
        assert!(make_data(r(1), r(1), r(2), r(1), r(0), r(1), r(0), false).is_err());
        assert!(make_data(r(-1), r(1), r(2), r(1), r(0), r(1), r(0), false).is_err());
    }

    #[test]
    fn askey_wilson_data_is_consistent() {
        let d = aw2357();
        let q = &d.q;
        for k in 0..6 {
            let k = k as i64;
            assert_eq!(d.eigen_h(k as usize), q.pow(-k) + r(210) * q.pow(k - 1));
        }
    }

    #[test]
    fn coupling_zero_at_zero() {
        assert!(aw2357().coupling_g(0).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert!(random_data(&mut rng).coupling_g(0).is_zero());
        }
    }

    #[test]
    fn big_q_jacobi_coupling() {
        let q = rat(1, 2);
        let d = bqj(r(3), r(5), r(7), q.clone());
        let one = r(1);
        for k in 0..5i64 {
            let qk = q.pow(k);
            let expected = q.pow(1 - 2 * k) * (&one - r(3) * &qk) * (&one - r(7) * &qk) * (&one - &qk);
            assert_eq!(d.coupling_g(k as usize), expected);
        }
        let d = bqj(r(3), r(5), r(5), q);
        assert_eq!(d.coupling_g(1), rat(3, 4));
    }

    #[test]
    fn newton_polys() {
        let d = make_data(rat(1, 2), r(0), r(1), r(1), r(0), r(1), r(0), false).unwrap();
        assert_eq!(d.newton_poly(0), Poly::one());
        assert_eq!(d.newton_poly(1), Poly::from_roots(&[&d.b1 + &d.b2]));
        assert_eq!(d.newton_poly(2), Poly::from_roots(&[r(1), rat(1, 2)]));
    }

    #[test]
    fn expansion_shapes() {
        let d = aw2357();
        assert_eq!(d.expansion(0).unwrap().coeffs, vec![r(1)]);
        let e1 = d.expansion(1).unwrap();
        assert_eq!(e1.coeffs, vec![d.coupling_g(1) / (d.eigen_h(1) - d.eigen_h(0)), r(1)]);
        for n in 0..8 {
            assert_eq!(d.expansion(n).unwrap().coeffs[n], r(1));
        }
    }

    #[test]
    fn degenerate_data_gives_newton_polys() {
        let c5 = make_data(rat(1, 3), r(0), r(1), r(1), r(0), r(0), r(0), true).unwrap();
        let a6 = make_data(rat(1, 3), r(0), r(1), r(0), r(0), r(0), r(0), true).unwrap();
        for n in 0..7 {
            assert_eq!(c5.monic_u(n).unwrap(), c5.newton_poly(n));
            assert_eq!(a6.monic_u(n).unwrap(), Poly::monomial(r(1), n));
        }
        assert!(c5.normalized_U(2, &r(3)).is_err());
    }

    #[test]
    fn normalized_values() {
        let d = aw2357();
        assert_eq!(d.normalized_U(0, &rat(7, 3)).unwrap(), r(1));
        for n in 0..7 {
            assert_eq!(d.normalized_U(n, &d.node_x(0)).unwrap(), r(1));
        }
    }

    #[test]
    fn normalized_equals_scaled_monic() {
        let d = aw2357();
        let t = rat(-5, 4);
        for n in 0..7 {
            let scale: Rational = (0..n)
                .map(|j| (d.eigen_h(n) - d.eigen_h(j)) / d.coupling_g(j + 1))
                .product();
            assert_eq!(d.normalized_U(n, &t).unwrap(), scale * d.monic_u(n).unwrap().eval(&t));
        }
    }

    #[test]
    fn duality_grid_askey_wilson() {
        let d = aw2357();
        for n in 0..=6 {
            for m in 0..=6 {
                assert_eq!(
                    d.normalized_U(n, &d.node_x(m)).unwrap(),
                    d.dual_normalized_U(m, &d.eigen_h(n)).unwrap(),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn dual_sum_is_defined_at_repeated_nodes() {
        // x_2 = x_0 here, so the dual data is invalid, yet the grid identity holds
        let d = aw2357();
        assert_eq!(d.node_x(0), d.node_x(2));
        assert!(d.dual_data().is_err());
        assert_eq!(d.dual_normalized_U(2, &d.eigen_h(3)).unwrap(), r(1));
    }

    #[test]
    fn l_operator() {
        let d = aw2357();
        assert_eq!(d.apply_l(&Poly::one()), Poly::constant(d.eigen_h(0)));
        let v1 = d.newton_poly(1);
        let expected = &v1.scale(&d.eigen_h(1)) + &Poly::constant(d.coupling_g(1));
        assert_eq!(d.apply_l(&v1), expected);
        let zero_h0 = make_data(rat(1, 3), r(2), r(-2), r(1), r(4), r(1), r(5), false).unwrap();
        assert!(zero_h0.eigen_h(0).is_zero());
        assert!(zero_h0.apply_l(&Poly::one()).is_zero());
        for n in 0..=10 {
            let u = d.monic_u(n).unwrap();
            assert_eq!(d.apply_l(&u), u.scale(&d.eigen_h(n)));
        }
    }

    #[test]
    fn dual_and_exchange_involutions() {
        let d = aw(r(3), r(-2), rat(5, 7), r(4), rat(1, 2));
        assert_eq!(d.dual_data().unwrap().dual_data().unwrap(), d);
        assert_eq!(d.q_inverse_exchange().q_inverse_exchange(), d);
        let e = d.q_inverse_exchange();
        for k in 0..6 {
            assert_eq!(d.node_x(k), e.node_x(k));
            assert_eq!(d.eigen_h(k), e.eigen_h(k));
            assert_eq!(d.coupling_g(k), e.coupling_g(k));
        }
        let s = make_data(rat(1, 2), r(2), r(3), r(2), r(3), r(1), r(1), false).unwrap();
        assert_eq!(s.dual_data().unwrap(), s);
    }

    #[test]
    fn dual_of_cdqhahn_is_scaled_big_q_jacobi() {
        let q = rat(1, 2);
        let (a, b, c) = (r(3), r(5), r(7));
        let cdq = aw(a.clone(), b.clone(), c.clone(), r(0), q.clone());
        let lhs = cdq.dual_data().unwrap().scale(&a, &r(1)).unwrap();
        let rhs = bqj(&a * &b / &q, &a / &b, &a * &c / &q, q);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scaling() {
        let d = aw2357();
        assert_eq!(d.scale(&r(1), &r(1)).unwrap(), d);
        let (mu, rho) = (rat(-3, 2), rat(5, 7));
        let s = d.scale(&mu, &rho).unwrap();
        s.validate(N_MAX).unwrap();
        let t = rat(4, 9);
        for n in 0..6 {
            assert_eq!(s.eigen_h(n), &mu * d.eigen_h(n));
            let lhs = rho.pow(n as i64) * d.monic_u(n).unwrap().eval(&(&t / &rho));
            assert_eq!(lhs, s.monic_u(n).unwrap().eval(&t));
        }
    }

    #[test]
    fn json_round_trip() {
        let d = aw2357();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"q\":\"1/2\""));
        let back: VerdeStarData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let broken = s.replace("\"d0\":", "\"d0\":\"1\",\"_x\":");
        assert!(serde_json::from_str::<VerdeStarData>(&broken).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_data_eigen_property(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = random_data(&mut rng);
            for n in 0..6 {
                let u = d.monic_u(n).unwrap();
                prop_assert_eq!(d.apply_l(&u), u.scale(&d.eigen_h(n)));
            }
            prop_assert_eq!(d.q_inverse_exchange().q_inverse_exchange(), d.clone());
        }
    }
}
