use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qzhedanov::catalog::*;
use qzhedanov::qseries::QValue;
use qzhedanov::scheme::{
    build_figure1, catalog_classification_check, duality_check, edge_monotonicity, nodes_with_pattern,
};
use qzhedanov::verdestar::{random_data, VerdeStarData};
use qzhedanov::zhedanov::*;
use qzhedanov::{rat, Error, Rational, Report};

const SEED: u64 = 20;

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let v = sample_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Two draws of every parameterized family, then 20 random data sets.
fn data_matrix() -> Vec<(String, VerdeStarData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for f in families().iter().filter(|f| !f.params.is_empty()) {
        for _ in 0..2 {
            let (q, ps, d) = f.sample(&mut rng);
            out.push((format!("{} q={} {ps:?}", f.key, q.q()), d));
        }
    }
    for i in 0..20 {
        out.push((format!("random data #{i}"), random_data(&mut rng)));
    }
    out
}

fn tagged(mut r: Report, tag: &str) -> Report {
    if let Some(c) = r.counterexample.take() {
        r.counterexample = Some(format!("{tag}: {c}"));
    }
    r
}

fn relations(matrix: &[(String, VerdeStarData)]) -> Report {
    let mut r = Report::new("operator relations");
    for (tag, d) in matrix {
        r.absorb(tagged(verify_relations(d, 10), tag));
        let want = closed_form_coeffs(d);
        match extract_coeffs(d, 10) {
            Ok(c) => {
                r.check(c == want, || format!("{tag}: extracted {c:?} != {want:?}"));
            }
            Err(e) => r.fail(format!("{tag}: {e}")),
        }
    }
    r
}

fn casimir(matrix: &[(String, VerdeStarData)]) -> Report {
    let mut r = Report::new("casimir");
    for (tag, d) in matrix {
        r.absorb(tagged(verify_casimir(d, 8), tag));
        r.absorb(tagged(verify_commutation(d, 6), tag));
    }
    r
}

fn eigen(matrix: &[(String, VerdeStarData)]) -> Report {
    let mut r = Report::new("eigen and Bochner");
    for (tag, d) in matrix {
        r.absorb(tagged(verify_eigen(d, 10), tag));
    }
    let zs = [int(3), rat(2, 7), rat(-5, 3), rat(7, 2), rat(-4, 9)];
    let q = QValue::from_q(rat(1, 2)).unwrap();
    let aw = [
        AWParams::new(int(2), int(3), int(5), int(7), q.clone()).unwrap(),
        AWParams::new(
            rat(-1, 3),
            rat(4, 5),
            int(6),
            rat(-7, 2),
            QValue::from_q(rat(-2, 3)).unwrap(),
        )
        .unwrap(),
    ];
    for p in &aw {
        r.absorb(aw_operator_check(p, 6, &zs));
    }
    let bqj = [
        BigQJacobiParams::new(int(3), int(5), int(7), q.clone()).unwrap(),
        BigQJacobiParams::new(rat(-2, 5), rat(3, 4), int(-3), QValue::from_q(int(3)).unwrap()).unwrap(),
    ];
    for p in &bqj {
        r.absorb(bigqj_operator_check(p, 6, &zs));
    }
    r
}

fn figure() -> Report {
    let mut r = Report::new("figure reproduction");
    let g = match build_figure1() {
        Ok(g) => g,
        Err(e) => {
            r.fail(e);
            return r;
        }
    };
    r.check(g.nodes.len() == 19, || format!("{} nodes", g.nodes.len()));
    r.check(g.edges.len() == 31, || format!("{} arrows", g.edges.len()));
    r.absorb(edge_monotonicity(&g));
    r.absorb(duality_check(&g).report);
    r.absorb(catalog_classification_check(SEED));
    r
}

fn with(r: &mut Report, tag: &str, v: Result<Report, Error>) {
    match v {
        Ok(rep) => r.absorb(tagged(rep, tag)),
        Err(e) => r.fail(format!("{tag}: {e}")),
    }
}

/// A random valid point for a named pair; square roots are built in.
fn sample_pair(which: DualityPair, rng: &mut ChaCha8Rng) -> (QValue, Params) {
    let q = loop {
        let q = if which.needs_sqrt_q() {
            QValue::from_sqrt(nonzero(rng))
        } else {
            QValue::from_q(nonzero(rng))
        };
        if let Ok(q) = q {
            break q;
        }
    };
    let mut ps: Params = which.params().iter().map(|k| (k.to_string(), nonzero(rng))).collect();
    if which == DualityPair::Q2JacobiSymmetricAw {
        let t = ps["t"].clone();
        let b = &t * &t / &ps["a"];
        ps.insert("b".into(), b);
    }
    (q, ps)
}

fn duality() -> Report {
    let mut r = Report::new("duality");
    let q = QValue::from_q(rat(1, 2)).unwrap();
    let grids = [
        (
            "askey-wilson",
            askey_wilson_data(&AWParams::new(int(2), int(3), int(5), int(7), q.clone()).unwrap()),
        ),
        ("continuous dual q-hahn", cdqhahn_data(&int(3), &int(5), &int(7), &q)),
        (
            "big q-jacobi",
            big_q_jacobi_data(&BigQJacobiParams::new(int(3), int(5), int(7), q.clone()).unwrap()),
        ),
    ];
    for (tag, d) in grids {
        match d {
            Ok(d) => r.absorb(tagged(duality_grid_check(&d, 6, 6), tag)),
            Err(e) => r.fail(format!("{tag}: {e}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for which in DualityPair::ALL {
        let mut valid = 0;
        while valid < 2 {
            let (q, ps) = sample_pair(which, &mut rng);
            match duality_pair_check(which, &q, &ps, 4, 4) {
                Ok(rep) => {
                    valid += 1;
                    r.absorb(tagged(rep, &format!("{} q={} {ps:?}", which.key(), q.q())));
                }
                Err(
                    Error::ZeroCoupling { .. }
                    | Error::DenominatorPole { .. }
                    | Error::InvalidParameter(_)
                    | Error::DegenerateEigenvalues { .. },
                ) => {}
                Err(Error::AllCouplingsZero | Error::EigenvalueCollision { .. }) => {}
                Err(e) => {
                    r.fail(format!("{}: {e}", which.key()));
                    break;
                }
            }
        }
    }
    r
}

fn symmetry() -> Report {
    let mut r = Report::new("symmetry");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sets = 0;
    while sets < 10 {
        let Ok(q) = QValue::from_q(nonzero(&mut rng)) else {
            continue;
        };
        let (a, b, c, s) = (
            nonzero(&mut rng),
            nonzero(&mut rng),
            nonzero(&mut rng),
            nonzero(&mut rng),
        );
        let d = q.q() * &s * &s / (&a * &b * &c);
        let Ok(p) = AWParams::new(a.clone(), b.clone(), c.clone(), d, q.clone()) else {
            continue;
        };
        sets += 1;
        let tag = format!("q={} a={a} b={b} c={c} s={s}", q.q());
        with(&mut r, &tag, d4_invariance_check(&p, &s));
        with(&mut r, &tag, dual_compat_check(&p, &s));
        let c2 = q.q() * &s * &s / (&a * &b);
        with(&mut r, &tag, cdqhahn_invariance_check(&a, &b, &c2, &s, &q));
    }
    let mut sets = 0;
    while sets < 5 {
        let Ok(q) = QValue::from_sqrt(nonzero(&mut rng)) else {
            continue;
        };
        let (b, big_s, rr) = (nonzero(&mut rng), nonzero(&mut rng), nonzero(&mut rng));
        sets += 1;
        with(
            &mut r,
            &format!("big q-jacobi b={b} S={big_s} r={rr}"),
            bigqj_invariance_check(&b, &big_s, &rr, &q),
        );
    }
    for i in 0..20 {
        let d = random_data(&mut rng);
        let c = closed_form_coeffs(&d);
        let e = closed_form_coeffs(&d.q_inverse_exchange());
        r.check(c == e, || {
            format!("random data #{i}: q-inverse exchange changes the constants")
        });
    }
    r
}

fn classical() -> Report {
    let mut r = Report::new("classical identities");
    let q = QValue::from_q(rat(1, 2)).unwrap();
    let pts = default_points();
    let ps = |v: &[(&str, i64)]| params(&v.iter().map(|(k, x)| (*k, int(*x))).collect::<Vec<_>>());
    for (id, p) in [
        (ClassicalIdentity::SymmetricAwReflection, ps(&[("a", 2), ("b", 3)])),
        (ClassicalIdentity::BigQJacobiSwap, ps(&[("a", 3), ("b", 5), ("c", 7)])),
        (
            ClassicalIdentity::BigQJacobiRescale,
            ps(&[("a", 3), ("b", 5), ("c", 7)]),
        ),
        (ClassicalIdentity::AwSwap, ps(&[("a", 2), ("b", 3), ("c", 5), ("d", 7)])),
        (ClassicalIdentity::SymmetricBigQJacobi, ps(&[("a", 3)])),
        (ClassicalIdentity::LittleQJacobi, ps(&[("a", 3), ("b", 5)])),
    ] {
        r.absorb(verify_classical_identity(id, &q, &p, &pts, 6));
    }
    let aw = [
        ("aw", AWParams::new(int(2), int(3), int(5), int(7), q.clone())),
        (
            "aw abcd=q",
            AWParams::new(int(2), int(3), int(5), q.q() / int(30), q.clone()),
        ),
    ];
    for (tag, p) in aw {
        match p {
            Ok(p) => with(&mut r, tag, aw_recurrence_check(&p, 6, &pts)),
            Err(e) => r.fail(format!("{tag}: {e}")),
        }
    }
    let bqj = [
        ("big qJ", BigQJacobiParams::new(int(3), int(5), int(7), q.clone())),
        (
            "big qJ c=0",
            BigQJacobiParams::new(int(3), int(5), Rational::zero(), q.clone()),
        ),
    ];
    for (tag, p) in bqj {
        match p {
            Ok(p) => with(&mut r, tag, bigqj_recurrence_check(&p, 6, &pts)),
            Err(e) => r.fail(format!("{tag}: {e}")),
        }
    }
    let sq = QValue::from_sqrt(rat(1, 2)).unwrap();
    let zs = [int(3), rat(5, 7), rat(-2, 9)];
    for (which, p) in [
        (QuadraticTransform::Q2Jacobi, ps(&[("a", 3), ("b", 5)])),
        (QuadraticTransform::Q2Laguerre, ps(&[("a", 3)])),
        (QuadraticTransform::Q2Ultraspherical, ps(&[("a", 3)])),
        (QuadraticTransform::Q2Hermite, ps(&[])),
    ] {
        with(&mut r, which.key(), quadratic_transform_check(which, &sq, &p, 4, &zs));
    }
    with(&mut r, "dual q2-hermite", dual_q2_hermite_recurrence_check(&q, 6, &pts));
    with(
        &mut r,
        "symmetric big qJ",
        symmetric_big_q_jacobi_check(&int(3), &int(7), &q, 6, &pts),
    );
    r
}

/// Every draw carries the stated zeros; the stated nonzeros are checked on
/// the generic pattern, since a single draw may vanish by accident.
fn remark4() -> Report {
    let mut r = Report::new("constrained families");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for spec in REMARK4 {
        let want: VanishingPattern = spec.pattern.parse().expect("stated pattern");
        let mut flags = [false; 5];
        for _ in 0..4 {
            let (q, ps, d) = sample_remark4(spec.index, &mut rng);
            let got = closed_form_coeffs(&d).pattern();
            r.check(got.zero_mask() & want.zero_mask() == want.zero_mask(), || {
                format!(
                    "entry {} at q={} {ps:?}: {got} lacks the zeros of {want}",
                    spec.index,
                    q.q()
                )
            });
            for (f, g) in flags.iter_mut().zip(got.flags) {
                *f |= g;
            }
        }
        let generic = VanishingPattern::new(flags);
        r.check(generic == want, || {
            format!("entry {}: generic pattern {generic} != {want}", spec.index)
        });
        r.check(nodes_with_pattern(generic).is_empty(), || {
            format!("entry {} lies on the scheme", spec.index)
        });
    }
    r
}

type Suite<'a> = Box<dyn Fn() -> Report + Send + Sync + 'a>;

fn main() -> ExitCode {
    let matrix = data_matrix();
    let matrix = &matrix;
    let suites: [(&str, Suite); 8] = [
        ("operator relations", Box::new(move || relations(matrix))),
        ("casimir", Box::new(move || casimir(matrix))),
        ("eigen/bochner", Box::new(move || eigen(matrix))),
        ("scheme reproduction", Box::new(figure)),
        ("duality", Box::new(duality)),
        ("symmetry", Box::new(symmetry)),
        ("classical identities", Box::new(classical)),
        ("constrained families", Box::new(remark4)),
    ];
    // suites run on their own threads; lines are printed in criterion order
    let reports: Vec<Report> = std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|(_, run)| s.spawn(run)).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), rep)) in suites.iter().zip(&reports).enumerate() {
        match &rep.counterexample {
            None => println!("PASS [{}] {name}: {} exact checks", i + 1, rep.checks),
            Some(c) => {
                failed += 1;
                println!("FAIL [{}] {name}: {c}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
