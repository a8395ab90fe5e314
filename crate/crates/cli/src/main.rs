//! Command-line front end for the q-Zhedanov engine.
//!
//! Exit codes: 0 when everything passes, 1 when a verification fails,
//! 2 on usage or parameter errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qzhedanov::catalog::{
    aw_operator_check, aw_recurrence_check, bigqj_operator_check, bigqj_recurrence_check, d4_invariance_check,
    default_points, duality_grid_check, duality_pair_check, families, find_family, quadratic_transform_check,
    sample_rational, verify_classical_identity, AWParams, BigQJacobiParams, ClassicalIdentity, DualityPair, FamilySpec,
    Params, QuadraticTransform,
};
use qzhedanov::qseries::QValue;
use qzhedanov::scheme::{
    build_figure1, catalog_classification_check, classify, duality_check, edge_monotonicity, export, unmirrored_edges,
    ExportFormat,
};
use qzhedanov::verdestar::{make_data, VerdeStarData};
use qzhedanov::zhedanov::{
    closed_form_coeffs, extract_coeffs, verify_casimir, verify_commutation, verify_eigen, verify_relations,
};
use qzhedanov::{Error, Rational, Report};

/// Seed of the parameter sampler when `--seed` is absent.
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "qzhedanov",
    version,
    about = "Exact q-Zhedanov structure constants and the q-Zhedanov scheme"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Vanishing pattern and scheme node of a parameter point.
    Classify(Opts),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// The scheme graph.
    Scheme {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// The family catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Both algebra relations, and extraction against the closed forms.
    Relations(Opts),
    /// `L u_n = h_n u_n`, plus the explicit operator for Askey-Wilson and big q-Jacobi.
    Eigen(Opts),
    /// The Casimir eigenvalue and its commutation with K1, K2.
    Casimir(Opts),
    /// Three-term recurrences of Askey-Wilson or big q-Jacobi.
    Recurrence(Opts),
    /// The duality grid, or a named pair with `--which`.
    Duality(Opts),
    /// Invariance of the scaled Askey-Wilson constants under D4.
    D4(Opts),
    /// A quadratic transformation, named with `--which`.
    Quadratic(Opts),
    /// A classical identity, named with `--id`.
    Identity(Opts),
    /// Node patterns, arrows, dualities and catalog classification.
    Scheme(Opts),
}

#[derive(Subcommand)]
enum SchemeAction {
    Export(Opts),
    Check(Opts),
}

#[derive(Subcommand)]
enum CatalogAction {
    List(Opts),
    Show(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Family key or node label.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Square root of q; q is derived from it.
    #[arg(long = "sqrt-q", allow_hyphen_values = true)]
    sqrt_q: Option<String>,
    /// Comma-separated `name=value` pairs.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    #[arg(long, default_value_t = 8)]
    degree: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Duality pair or quadratic transformation.
    #[arg(long)]
    which: Option<String>,
    /// Classical identity.
    #[arg(long)]
    id: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

/// A usage or parameter error, tied to the flag that caused it.
struct Usage {
    flag: &'static str,
    message: String,
}

fn usage(flag: &'static str, e: impl std::fmt::Display) -> Usage {
    Usage {
        flag,
        message: e.to_string(),
    }
}

type Out = Result<(String, bool), Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(u) => {
            eprintln!("error: {}: {}", u.flag, u.message);
            ExitCode::from(2)
        }
    }
}

fn run(verb: Verb) -> Out {
    match verb {
        Verb::Classify(o) => cmd_classify(&o),
        Verb::Verify { suite } => cmd_verify(suite),
        Verb::Scheme { action } => match action {
            SchemeAction::Export(o) => cmd_export(&o),
            SchemeAction::Check(o) => cmd_scheme_check(&o),
        },
        Verb::Catalog { action } => match action {
            CatalogAction::List(o) => cmd_catalog_list(&o),
            CatalogAction::Show(o) => cmd_catalog_show(&o),
        },
    }
}

fn parse_rational(flag: &'static str, s: &str) -> Result<Rational, Usage> {
    s.trim().parse().map_err(|e| usage(flag, e))
}

fn parse_params(o: &Opts) -> Result<Option<Params>, Usage> {
    let Some(text) = &o.params else { return Ok(None) };
    let mut out = Params::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| usage("--params", format!("expected name=value, got {item:?}")))?;
        let k = k.trim().to_string();
        if out.contains_key(&k) {
            return Err(usage("--params", format!("{k} given twice")));
        }
        out.insert(k, parse_rational("--params", v)?);
    }
    Ok(Some(out))
}

fn parse_q(o: &Opts) -> Result<Option<QValue>, Usage> {
    let q = o.q.as_deref().map(|s| parse_rational("--q", s)).transpose()?;
    let p = o.sqrt_q.as_deref().map(|s| parse_rational("--sqrt-q", s)).transpose()?;
    match (q, p) {
        (None, None) => Ok(None),
        (Some(q), None) => QValue::from_q(q).map(Some).map_err(|e| usage("--q", e)),
        (None, Some(p)) => QValue::from_sqrt(p).map(Some).map_err(|e| usage("--sqrt-q", e)),
        (Some(q), Some(p)) => QValue::new(q, Some(p)).map(Some).map_err(|e| usage("--sqrt-q", e)),
    }
}

fn require<'a, T>(v: &'a Option<T>, flag: &'static str) -> Result<&'a T, Usage> {
    v.as_ref().ok_or_else(|| usage(flag, "required here"))
}

fn param_error_flag(e: &Error) -> &'static str {
    match e {
        Error::MissingSqrtQ | Error::SqrtMismatch => "--sqrt-q",
        Error::InvalidQ(_) => "--q",
        Error::UnknownFamily(_) => "--family",
        _ => "--params",
    }
}

fn data_error(e: Error) -> Usage {
    usage(param_error_flag(&e), e)
}

/// A resolved parameter point.
struct Point {
    family: Option<&'static FamilySpec>,
    q: QValue,
    params: Params,
    data: VerdeStarData,
}

fn point_json(p: &Point) -> Value {
    json!({
        "family": p.family.map(|f| f.key),
        "q": p.q.q().to_string(),
        "params": p.params.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
    })
}

/// Family data from the flags, sampled from `--seed` when neither `--q`
/// nor `--params` is given; without `--family`, `--params` holds raw
/// Verde-Star parameters `a1, a2, b1, b2, d1, d2`.
fn resolve_point(o: &Opts) -> Result<Point, Usage> {
    let q = parse_q(o)?;
    let params = parse_params(o)?;
    match &o.family {
        Some(id) => {
            let spec = find_family(id).map_err(|e| usage("--family", e))?;
            match (q, params) {
                (None, None) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
                    let (q, params, data) = spec.sample_generic(&mut rng);
                    Ok(Point {
                        family: Some(spec),
                        q,
                        params,
                        data,
                    })
                }
                (Some(q), Some(params)) => {
                    let data = spec.data(&q, &params).map_err(data_error)?;
                    Ok(Point {
                        family: Some(spec),
                        q,
                        params,
                        data,
                    })
                }
                (None, Some(_)) => Err(usage(
                    if spec.needs_sqrt_q { "--sqrt-q" } else { "--q" },
                    "required with --params",
                )),
                (Some(_), None) => Err(usage(
                    "--params",
                    format!("required with --q; {} takes {}", spec.key, spec.params.join(", ")),
                )),
            }
        }
        None => {
            let q = require(&q, "--q")?.clone();
            let params = require(&params, "--params")?.clone();
            let data = raw_data(&q, &params)?;
            Ok(Point {
                family: None,
                q,
                params,
                data,
            })
        }
    }
}

const RAW_KEYS: [&str; 6] = ["a1", "a2", "b1", "b2", "d1", "d2"];

fn raw_data(q: &QValue, params: &Params) -> Result<VerdeStarData, Usage> {
    if let Some(k) = params.keys().find(|k| !RAW_KEYS.contains(&k.as_str())) {
        return Err(usage(
            "--params",
            format!("unknown parameter {k}; without --family use {}", RAW_KEYS.join(", ")),
        ));
    }
    let v: Vec<Rational> = RAW_KEYS
        .iter()
        .map(|k| params.get(*k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    let build = |degenerate| {
        make_data(
            q.q().clone(),
            v[0].clone(),
            v[1].clone(),
            v[2].clone(),
            v[3].clone(),
            v[4].clone(),
            v[5].clone(),
            degenerate,
        )
    };
    match build(false) {
        Err(Error::AllCouplingsZero) => build(true).map_err(data_error),
        r => r.map_err(data_error),
    }
}

fn fmt_or(o: &Opts, default: Format) -> Format {
    o.format.unwrap_or(default)
}

fn cmd_classify(o: &Opts) -> Out {
    let p = resolve_point(o)?;
    let c = classify(&p.data);
    let out = match fmt_or(o, Format::Json) {
        Format::Json => {
            let mut v = point_json(&p);
            v["pattern"] = json!(c.pattern.to_string());
            v["node"] = json!(c.nodes.first());
            v["nodes"] = json!(c.nodes);
            v["coefficients"] = serde_json::to_value(&c.coefficients).expect("coefficients serialize");
            pretty(&v)
        }
        Format::Text => {
            let k = &c.coefficients;
            let [top, mid, bot] = c.pattern.glyph_rows();
            let nodes = if c.nodes.is_empty() {
                "none".to_string()
            } else {
                c.nodes.join(" ")
            };
            format!(
                "pattern {}\n  {top}\n   {mid}\n  {bot}\nnodes {nodes}\nC1 {}\nC2 {}\nD {}\nG1 {}\nG2 {}\nomega {}\n",
                c.pattern, k.c1, k.c2, k.d, k.g1, k.g2, k.omega
            )
        }
        Format::Dot => return Err(usage("--format", "classify prints json or text")),
    };
    Ok((out, true))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn report_out(o: &Opts, suite: &str, point: Option<Value>, report: Report) -> Out {
    let ok = report.passed;
    let out = match fmt_or(o, Format::Json) {
        Format::Json => {
            let mut v = json!({ "suite": suite });
            if let Some(Value::Object(m)) = point {
                v.as_object_mut().expect("object").extend(m);
            }
            v["report"] = serde_json::to_value(&report).expect("report serializes");
            pretty(&v)
        }
        Format::Text => match &report.counterexample {
            None => format!("PASS {suite}: {} checks\n", report.checks),
            Some(c) => format!("FAIL {suite}: {c}\n"),
        },
        Format::Dot => return Err(usage("--format", "verify prints json or text")),
    };
    Ok((out, ok))
}

fn check_degree(o: &Opts) -> Result<(), Usage> {
    if o.degree > qzhedanov::verdestar::N_MAX {
        return Err(usage("--degree", format!("at most {}", qzhedanov::verdestar::N_MAX)));
    }
    Ok(())
}

fn cmd_verify(suite: Suite) -> Out {
    match suite {
        Suite::Relations(o) => {
            check_degree(&o)?;
            let p = resolve_point(&o)?;
            let mut r = verify_relations(&p.data, o.degree);
            let want = closed_form_coeffs(&p.data);
            match extract_coeffs(&p.data, o.degree.max(4)) {
                Ok(c) => {
                    r.check(c == want, || format!("extracted {c:?} != closed form {want:?}"));
                }
                Err(e) => r.fail(e),
            }
            report_out(&o, "relations", Some(point_json(&p)), r)
        }
        Suite::Eigen(o) => {
            check_degree(&o)?;
            let p = resolve_point(&o)?;
            let mut r = verify_eigen(&p.data, o.degree);
            let zs = default_points();
            match p.family.map(|f| f.key) {
                Some("askey-wilson") => {
                    let a = aw_params(&p)?;
                    r.absorb(aw_operator_check(&a, o.degree, &zs));
                }
                Some("big-q-jacobi") => {
                    let b = bqj_params(&p)?;
                    r.absorb(bigqj_operator_check(&b, o.degree, &zs));
                }
                _ => {}
            }
            report_out(&o, "eigen", Some(point_json(&p)), r)
        }
        Suite::Casimir(o) => {
            check_degree(&o)?;
            let p = resolve_point(&o)?;
            let mut r = verify_casimir(&p.data, o.degree);
            r.absorb(verify_commutation(&p.data, o.degree));
            report_out(&o, "casimir", Some(point_json(&p)), r)
        }
        Suite::Recurrence(o) => {
            check_degree(&o)?;
            let p = resolve_point(&o)?;
            let zs = default_points();
            let r = match p.family.map(|f| f.key) {
                Some("askey-wilson") => aw_recurrence_check(&aw_params(&p)?, o.degree, &zs),
                Some("big-q-jacobi") => bigqj_recurrence_check(&bqj_params(&p)?, o.degree, &zs),
                _ => return Err(usage("--family", "recurrence needs askey-wilson or big-q-jacobi")),
            };
            report_out(&o, "recurrence", Some(point_json(&p)), r.map_err(data_error)?)
        }
        Suite::Duality(o) => {
            check_degree(&o)?;
            if let Some(w) = &o.which {
                let which: DualityPair = w.parse().map_err(|e| usage("--which", e))?;
                let q = parse_q(&o)?.ok_or_else(|| {
                    usage(
                        if which.needs_sqrt_q() { "--sqrt-q" } else { "--q" },
                        "required with --which",
                    )
                })?;
                let params = parse_params(&o)?.ok_or_else(|| {
                    usage(
                        "--params",
                        format!("{} takes {}", which.key(), which.params().join(", ")),
                    )
                })?;
                let r = duality_pair_check(which, &q, &params, o.degree, o.degree).map_err(data_error)?;
                let point = json!({ "which": which.key(), "q": q.q().to_string() });
                return report_out(&o, "duality", Some(point), r);
            }
            let p = resolve_point(&o)?;
            let r = duality_grid_check(&p.data, o.degree, o.degree);
            report_out(&o, "duality", Some(point_json(&p)), r)
        }
        Suite::D4(o) => {
            let (a, s) = d4_point(&o)?;
            let r = d4_invariance_check(&a, &s).map_err(data_error)?;
            let t = a.tuple();
            let point = json!({
                "q": a.q.q().to_string(),
                "params": { "a": t[0].to_string(), "b": t[1].to_string(), "c": t[2].to_string(), "d": t[3].to_string(), "s": s.to_string() },
            });
            report_out(&o, "d4", Some(point), r)
        }
        Suite::Quadratic(o) => {
            check_degree(&o)?;
            let which: QuadraticTransform = require(&o.which, "--which")?.parse().map_err(|e| usage("--which", e))?;
            let q = parse_q(&o)?.ok_or_else(|| usage("--sqrt-q", "required"))?;
            let params = parse_params(&o)?.unwrap_or_default();
            let r = quadratic_transform_check(which, &q, &params, o.degree, &default_points()).map_err(data_error)?;
            let point = json!({ "which": which.key(), "q": q.q().to_string() });
            report_out(&o, "quadratic", Some(point), r)
        }
        Suite::Identity(o) => {
            check_degree(&o)?;
            let id: ClassicalIdentity = require(&o.id, "--id")?.parse().map_err(|e| usage("--id", e))?;
            let q = parse_q(&o)?.ok_or_else(|| usage("--q", "required"))?;
            let params = parse_params(&o)?.unwrap_or_default();
            if let Some(k) = id.params().iter().find(|k| !params.contains_key(**k)) {
                return Err(usage("--params", format!("{} needs {k}", id.key())));
            }
            let r = verify_classical_identity(id, &q, &params, &default_points(), o.degree);
            let point = json!({ "id": id.key(), "q": q.q().to_string() });
            report_out(&o, "identity", Some(point), r)
        }
        Suite::Scheme(o) => {
            let (r, _) = scheme_reports(o.seed)?;
            report_out(&o, "scheme", None, r)
        }
    }
}

fn get<'a>(p: &'a Params, k: &str) -> Result<&'a Rational, Usage> {
    p.get(k).ok_or_else(|| usage("--params", format!("missing {k}")))
}

fn aw_params(p: &Point) -> Result<AWParams, Usage> {
    let v = |k| get(&p.params, k).cloned();
    AWParams::new(v("a")?, v("b")?, v("c")?, v("d")?, p.q.clone()).map_err(data_error)
}

fn bqj_params(p: &Point) -> Result<BigQJacobiParams, Usage> {
    let v = |k| get(&p.params, k).cloned();
    BigQJacobiParams::new(v("a")?, v("b")?, v("c")?, p.q.clone()).map_err(data_error)
}

/// Askey-Wilson parameters with `s^2 = abcd/q`: from `--params a,b,c,s`
/// (d solved) or `a,b,c,d,s`, or sampled from `--seed`.
fn d4_point(o: &Opts) -> Result<(AWParams, Rational), Usage> {
    let q = parse_q(o)?;
    match (q, parse_params(o)?) {
        (Some(q), Some(ps)) => {
            let (a, b, c, s) = (get(&ps, "a")?, get(&ps, "b")?, get(&ps, "c")?, get(&ps, "s")?);
            let abc = a * b * c;
            if abc.is_zero() {
                return Err(usage("--params", "a, b, c must be nonzero"));
            }
            let solved = q.q() * s * s / abc;
            let d = match ps.get("d") {
                Some(d) if *d != solved => return Err(usage("--params", "s^2 must equal abcd/q")),
                _ => solved,
            };
            let p = AWParams::new(a.clone(), b.clone(), c.clone(), d, q).map_err(data_error)?;
            Ok((p, s.clone()))
        }
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
            loop {
                let Ok(q) = QValue::from_q(sample_rational(&mut rng)) else {
                    continue;
                };
                let (a, b, c, s) = (
                    sample_rational(&mut rng),
                    sample_rational(&mut rng),
                    sample_rational(&mut rng),
                    sample_rational(&mut rng),
                );
                let abc = &a * &b * &c;
                if abc.is_zero() || s.is_zero() {
                    continue;
                }
                let d = q.q() * &s * &s / abc;
                if let Ok(p) = AWParams::new(a, b, c, d, q) {
                    return Ok((p, s));
                }
            }
        }
        (None, Some(_)) => Err(usage("--q", "required with --params")),
        (Some(_), None) => Err(usage("--params", "required with --q")),
    }
}

fn scheme_reports(seed: u64) -> Result<(Report, Value), Usage> {
    let g = build_figure1().map_err(|e| usage("scheme", e))?;
    let mut r = Report::new("scheme");
    r.absorb(edge_monotonicity(&g));
    let d = duality_check(&g);
    r.absorb(d.report);
    r.absorb(catalog_classification_check(seed));
    let extra = json!({
        "unmirrored": unmirrored_edges(&g),
        "outside_duals": d.outside,
    });
    Ok((r, extra))
}

fn cmd_scheme_check(o: &Opts) -> Out {
    let (r, extra) = scheme_reports(o.seed)?;
    let ok = r.passed;
    let out = match fmt_or(o, Format::Json) {
        Format::Json => {
            let mut v = json!({ "report": r });
            v.as_object_mut()
                .expect("object")
                .extend(extra.as_object().expect("object").clone());
            pretty(&v)
        }
        Format::Text => {
            let mut s = match &r.counterexample {
                None => format!("PASS scheme: {} checks\n", r.checks),
                Some(c) => format!("FAIL scheme: {c}\n"),
            };
            for e in extra["unmirrored"].as_array().into_iter().flatten() {
                s += &format!(
                    "unmirrored {} -> {}\n",
                    e[0].as_str().unwrap_or(""),
                    e[1].as_str().unwrap_or("")
                );
            }
            for d in extra["outside_duals"].as_array().into_iter().flatten() {
                s += &format!(
                    "dual of {} outside the scheme: {} ({})\n",
                    d["node"].as_str().unwrap_or(""),
                    d["dual_pattern"].as_str().unwrap_or(""),
                    d["realized_by"].as_str().unwrap_or("")
                );
            }
            s
        }
        Format::Dot => return Err(usage("--format", "scheme check prints json or text")),
    };
    Ok((out, ok))
}

fn cmd_export(o: &Opts) -> Out {
    let g = build_figure1().map_err(|e| usage("scheme", e))?;
    let f = match fmt_or(o, Format::Dot) {
        Format::Dot => ExportFormat::Dot,
        Format::Json => ExportFormat::Json,
        Format::Text => return Err(usage("--format", "export prints dot or json")),
    };
    Ok((export(&g, f), true))
}

fn cmd_catalog_list(o: &Opts) -> Out {
    let out = match fmt_or(o, Format::Text) {
        Format::Json => {
            pretty(&serde_json::to_value(families().iter().map(|f| f.info()).collect::<Vec<_>>()).expect("json"))
        }
        Format::Text => families()
            .iter()
            .map(|f| {
                let sq = if f.needs_sqrt_q { " [sqrt-q]" } else { "" };
                format!("{:<3} {:<37} {}({}){sq}\n", f.node, f.key, f.name, f.params.join(","))
            })
            .collect(),
        Format::Dot => return Err(usage("--format", "catalog prints json or text")),
    };
    Ok((out, true))
}

fn cmd_catalog_show(o: &Opts) -> Out {
    let id = require(&o.family, "--family")?;
    let f = find_family(id).map_err(|e| usage("--family", e))?;
    let info = f.info();
    let out = match fmt_or(o, Format::Json) {
        Format::Json => pretty(&serde_json::to_value(&info).expect("json")),
        Format::Text => format!(
            "{}\nkey {}\nnode {}\nparams {}\nconstraint {}\npattern {}\nneeds sqrt q {}\n",
            info.name,
            info.key,
            info.id,
            info.params.join(", "),
            info.constraint,
            info.expected_pattern,
            info.needs_sqrt_q
        ),
        Format::Dot => return Err(usage("--format", "catalog prints json or text")),
    };
    Ok((out, true))
}
