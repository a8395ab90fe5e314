//! The q-Zhedanov scheme: arrays of vanishing patterns joined by arrows.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{families, find_family, params, remark4_family, FamilySpec, NODE_PATTERNS, REMARK4};
use crate::error::Error;
use crate::exactfield::Rational;
use crate::qseries::QValue;
use crate::report::Report;
use crate::verdestar::VerdeStarData;
use crate::zhedanov::{closed_form_coeffs, VanishingPattern, ZhedanovCoefficients};

/// Arrows of the scheme, row-major by source.
pub const EDGES: [(&str, &str); 31] = [
    ("1a", "2a"),
    ("1a", "2b"),
    ("1a", "3a"),
    ("1a", "3b"),
    ("2a", "3c"),
    ("2a", "3d"),
    ("2b", "3d"),
    ("2b", "3e"),
    ("2b", "4e"),
    ("3a", "4a"),
    ("3a", "4b"),
    ("3b", "4b"),
    ("3b", "4c"),
    ("3b", "4e"),
    ("3c", "4c"),
    ("3c", "4d"),
    ("3d", "4d"),
    ("3d", "4f"),
    ("3e", "4f"),
    ("3e", "4g"),
    ("4a", "5a"),
    ("4b", "5a"),
    ("4c", "5a"),
    ("4c", "5b"),
    ("4d", "5b"),
    ("4d", "5c"),
    ("4e", "5b"),
    ("4f", "5c"),
    ("5a", "6a"),
    ("5b", "6a"),
    ("5c", "6a"),
];

pub const SELF_DUAL: [&str; 5] = ["1a", "3d", "4b", "5c", "6a"];

pub const DUAL_PAIRS: [(&str, &str); 6] = [
    ("2a", "2b"),
    ("3a", "3b"),
    ("3c", "3e"),
    ("4a", "4e"),
    ("4c", "4g"),
    ("4d", "4f"),
];

/// Nodes whose duals lie outside the scheme, with the constrained family
/// that realizes the dual array.
pub const OUTSIDE_DUALS: [(&str, usize); 2] = [("5a", 12), ("5b", 13)];

fn node_families(label: &str) -> &'static [&'static str] {
    match label {
        "1a" => &["Askey-Wilson"],
        "2a" => &["continuous dual q-Hahn"],
        "2b" => &["big q-Jacobi"],
        "3a" => &["continuous q^2-Jacobi"],
        "3b" => &["symmetric Askey-Wilson", "R_n(z;a,b,-q/a,-q/b|q)"],
        "3c" => &["Al-Salam-Chihara", "continuous big q-Hermite"],
        "3d" => &["big q-Laguerre"],
        "3e" => &["little q-Jacobi", "q-Bessel (limit)", "q-Krawtchouk"],
        "4a" => &["continuous q^2-Laguerre"],
        "4b" => &["continuous q^2-ultraspherical", "R_n(z;q^(1/2),-q^(1/2),a,-q/a|q)"],
        "4c" => &["symmetric Al-Salam-Chihara", "continuous q-Hermite (limit)"],
        "4d" => &["Al-Salam-Carlitz I"],
        "4e" => &["symmetric big q-Jacobi", "P_n(x;-1,-1,c;q)"],
        "4f" => &[
            "q-Laguerre (limit)",
            "Stieltjes-Wigert (limit)",
            "q-Charlier",
            "little q-Laguerre",
        ],
        "4g" => &["special little q-Jacobi", "q-Krawtchouk with p = q^-N"],
        "5a" => &["continuous q^2-Hermite"],
        "5b" => &["discrete q-Hermite I"],
        "5c" => &["x^n (x^-1;q)_n"],
        "6a" => &["x^n"],
        _ => &[],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeNode {
    pub label: String,
    /// Row in the figure, 1 (top) to 6.
    pub row: u8,
    pub pattern: VanishingPattern,
    pub families: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeEdge {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeGraph {
    pub nodes: Vec<SchemeNode>,
    pub edges: Vec<SchemeEdge>,
}

impl SchemeGraph {
    pub fn node(&self, label: &str) -> Option<&SchemeNode> {
        self.nodes.iter().find(|n| n.label == label)
    }

    pub fn out_edges(&self, label: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|e| e.from == label)
            .map(|e| e.to.as_str())
            .collect()
    }

    pub fn in_edges(&self, label: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|e| e.to == label)
            .map(|e| e.from.as_str())
            .collect()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }
}

/// Draws per family when recomputing a generic pattern.
pub const GENERIC_DRAWS: usize = 4;

/// Generic pattern of a family: an entry counts as nonzero when it is
/// nonzero on at least one of several random draws.
pub fn generic_pattern<R: Rng + ?Sized>(spec: &FamilySpec, rng: &mut R) -> VanishingPattern {
    let mut flags = [false; 5];
    for _ in 0..GENERIC_DRAWS {
        let (_, _, data) = spec.sample(rng);
        let p = closed_form_coeffs(&data).pattern();
        for (f, g) in flags.iter_mut().zip(p.flags) {
            *f |= g;
        }
    }
    VanishingPattern::new(flags)
}

/// Generic pattern of a node's main family.
pub fn computed_pattern(label: &str, seed: u64) -> Result<VanishingPattern, Error> {
    let spec = find_family(label)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(generic_pattern(spec, &mut rng))
}

/// Seed used for the self-check in [`build_figure1`].
pub const FIGURE_SEED: u64 = 1;

/// The transcribed figure, with every node pattern recomputed from its
/// main family.
pub fn build_figure1() -> Result<SchemeGraph, Error> {
    let mut nodes = Vec::new();
    for (label, drawn) in NODE_PATTERNS {
        let expected: VanishingPattern = drawn.parse()?;
        let computed = computed_pattern(label, FIGURE_SEED)?;
        if computed != expected {
            return Err(Error::TranscriptionMismatch {
                node: label.to_string(),
                expected: expected.to_string(),
                computed: computed.to_string(),
            });
        }
        nodes.push(SchemeNode {
            label: label.to_string(),
            row: label[..1].parse().expect("row digit"),
            pattern: computed,
            families: node_families(label).iter().map(|s| s.to_string()).collect(),
        });
    }
    let edges = EDGES
        .iter()
        .map(|(f, t)| SchemeEdge {
            from: f.to_string(),
            to: t.to_string(),
        })
        .collect();
    Ok(SchemeGraph { nodes, edges })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub pattern: VanishingPattern,
    pub coefficients: ZhedanovCoefficients,
    /// Figure nodes with exactly this pattern; empty when off the scheme.
    pub nodes: Vec<String>,
}

/// Figure nodes with exactly this pattern.
pub fn nodes_with_pattern(pattern: VanishingPattern) -> Vec<String> {
    NODE_PATTERNS
        .iter()
        .filter(|(_, p)| p.parse::<VanishingPattern>().ok() == Some(pattern))
        .map(|(l, _)| l.to_string())
        .collect()
}

/// Pattern of the data and the figure nodes carrying it.
pub fn classify(data: &VerdeStarData) -> Classification {
    let coefficients = closed_form_coeffs(data);
    let pattern = coefficients.pattern();
    let nodes = nodes_with_pattern(pattern);
    Classification {
        pattern,
        coefficients,
        nodes,
    }
}

/// Every arrow turns at least one nonzero entry into zero and keeps all
/// zeros.
pub fn edge_monotonicity(graph: &SchemeGraph) -> Report {
    let mut r = Report::new("arrow monotonicity");
    for e in &graph.edges {
        match (graph.node(&e.from), graph.node(&e.to)) {
            (Some(u), Some(v)) => {
                r.check(u.pattern.strictly_below(&v.pattern), || {
                    format!("{} -> {}: {} vs {}", e.from, e.to, u.pattern, v.pattern)
                });
            }
            _ => r.fail(format!("arrow {} -> {} has an unknown end", e.from, e.to)),
        }
    }
    r
}

/// Dual of a node label under the listed dualities; `None` for nodes whose
/// dual is outside the scheme.
pub fn dual_label(label: &str) -> Option<&'static str> {
    if let Some(s) = SELF_DUAL.iter().find(|s| **s == label) {
        return Some(s);
    }
    DUAL_PAIRS.iter().find_map(|(a, b)| {
        if *a == label {
            Some(*b)
        } else if *b == label {
            Some(*a)
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutsideDual {
    pub node: String,
    pub dual_pattern: VanishingPattern,
    /// Constrained family realizing the dual array.
    pub realized_by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub report: Report,
    pub outside: Vec<OutsideDual>,
}

/// Checks the self-dual nodes and dual pairs by pattern reflection; the
/// nodes with duals off the scheme are matched with the constrained
/// families that carry the reflected pattern.
pub fn duality_check(graph: &SchemeGraph) -> DualityReport {
    let mut r = Report::new("scheme duality");
    let pat = |l: &str| graph.node(l).map(|n| n.pattern);
    for s in SELF_DUAL {
        match pat(s) {
            Some(p) => {
                r.check(p.dual() == p, || format!("{s} is not self-dual: {p} vs {}", p.dual()));
            }
            None => r.fail(format!("missing node {s}")),
        }
    }
    for (a, b) in DUAL_PAIRS {
        match (pat(a), pat(b)) {
            (Some(pa), Some(pb)) => {
                r.check(pa.dual() == pb, || format!("{a} and {b} are not dual: {pa} vs {pb}"));
            }
            _ => r.fail(format!("missing node {a} or {b}")),
        }
    }
    let mut outside = Vec::new();
    let q = QValue::from_q(Rational::new(1, 3)).expect("valid q");
    for (node, entry) in OUTSIDE_DUALS {
        let Some(p) = pat(node) else {
            r.fail(format!("missing node {node}"));
            continue;
        };
        let d = p.dual();
        r.check(!graph.nodes.iter().any(|n| n.pattern == d), || {
            format!("dual of {node} unexpectedly in the scheme")
        });
        let spec = &REMARK4[entry - 1];
        let ps = params(
            &spec
                .params
                .iter()
                .map(|n| (*n, Rational::new(2, 5)))
                .collect::<Vec<_>>(),
        );
        match remark4_family(entry, &q, &ps) {
            Ok(data) => {
                let got = closed_form_coeffs(&data).pattern();
                r.check(got == d, || format!("{} has pattern {got}, expected {d}", spec.name));
            }
            Err(e) => r.fail(e),
        }
        outside.push(OutsideDual {
            node: node.to_string(),
            dual_pattern: d,
            realized_by: spec.name.to_string(),
        });
    }
    DualityReport { report: r, outside }
}

/// Arrows whose image under the duality relabeling is not an arrow.
pub fn unmirrored_edges(graph: &SchemeGraph) -> Vec<(String, String)> {
    graph
        .edges
        .iter()
        .filter(|e| match (dual_label(&e.from), dual_label(&e.to)) {
            (Some(f), Some(t)) => !graph.has_edge(f, t),
            _ => true,
        })
        .map(|e| (e.from.clone(), e.to.clone()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Parse(format!("unknown export format {s:?}"))),
        }
    }
}

fn dot(graph: &SchemeGraph) -> String {
    let mut s = String::from("digraph qzhedanov {\n");
    if !graph.nodes.is_empty() {
        s.push_str("  node [shape=record];\n");
    }
    for n in &graph.nodes {
        let [top, mid, bot] = n.pattern.glyph_rows();
        let _ = writeln!(s, "  \"{}\" [label=\"{{{}|{top}|{mid}|{bot}}}\"];", n.label, n.label);
    }
    for e in &graph.edges {
        let _ = writeln!(s, "  \"{}\" -> \"{}\";", e.from, e.to);
    }
    s.push_str("}\n");
    s
}

pub fn export(graph: &SchemeGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => dot(graph),
        ExportFormat::Json => serde_json::to_string_pretty(graph).expect("graph serializes") + "\n",
    }
}

pub fn import_json(text: &str) -> Result<SchemeGraph, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Every catalog family classifies to its own node.
pub fn catalog_classification_check(seed: u64) -> Report {
    let mut r = Report::new("catalog classification");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for f in families() {
        let p = generic_pattern(f, &mut rng);
        let nodes = nodes_with_pattern(p);
        r.check(nodes == [f.node], || {
            format!("{} has generic pattern {p}, classified as {nodes:?}", f.key)
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{askey_wilson_data, big_q_jacobi_data, sample_remark4, AWParams, BigQJacobiParams};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn figure_nodes_and_arrows() {
        let g = build_figure1().unwrap();
        assert_eq!(g.nodes.len(), 19);
        assert_eq!(g.edges.len(), 31);
        assert_eq!(g.node("1a").unwrap().pattern.zero_count(), 0);
        assert_eq!(g.out_edges("1a"), ["2a", "2b", "3a", "3b"]);
        assert_eq!(g.node("6a").unwrap().pattern.zero_count(), 5);
        assert!(g.out_edges("6a").is_empty());
        assert_eq!(g.in_edges("6a"), ["5a", "5b", "5c"]);
    }

    #[test]
    fn monotone_arrows() {
        let g = build_figure1().unwrap();
        let rep = edge_monotonicity(&g);
        assert!(rep.passed && rep.checks == 31);
    }

    #[test]
    fn nodes_stable_across_seeds() {
        for (label, drawn) in NODE_PATTERNS {
            for seed in [2, 3, 4, 5] {
                assert_eq!(computed_pattern(label, seed).unwrap().to_string(), drawn);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let q = QValue::from_q(Rational::new(1, 2)).unwrap();
        let b = big_q_jacobi_data(&BigQJacobiParams::new(r(3), r(5), r(7), q.clone()).unwrap()).unwrap();
        assert_eq!(classify(&b).nodes, ["2b"]);
        let s = askey_wilson_data(&AWParams::new(r(2), r(3), r(-2), r(-3), q.clone()).unwrap()).unwrap();
        assert_eq!(classify(&s).nodes, ["3b"]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (_, _, d) = sample_remark4(1, &mut rng);
        let c = classify(&d);
        assert!(c.nodes.is_empty());
        assert_eq!(c.pattern.to_string(), "BB/o/BB");
    }

    #[test]
    fn every_family_classifies_home() {
        let rep = catalog_classification_check(5);
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn dualities() {
        let g = build_figure1().unwrap();
        let d = duality_check(&g);
        assert!(d.report.passed, "{:?}", d.report);
        assert_eq!(d.outside.len(), 2);
        assert_eq!(dual_label("3c"), Some("3e"));
        assert_eq!(dual_label("4g"), Some("4c"));
        assert_eq!(g.node("5c").unwrap().pattern.dual(), g.node("5c").unwrap().pattern);
    }

    #[test]
    fn reflection_misses() {
        let g = build_figure1().unwrap();
        let miss = unmirrored_edges(&g);
        let expect = [
            ("2b", "4e"),
            ("3b", "4c"),
            ("4a", "5a"),
            ("4b", "5a"),
            ("4c", "5a"),
            ("4c", "5b"),
            ("4d", "5b"),
            ("4e", "5b"),
            ("5a", "6a"),
            ("5b", "6a"),
        ];
        let got: Vec<(&str, &str)> = miss.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn exports() {
        let empty = SchemeGraph::default();
        assert_eq!(export(&empty, ExportFormat::Dot), "digraph qzhedanov {\n}\n");
        let g = build_figure1().unwrap();
        let d1 = export(&g, ExportFormat::Dot);
        assert_eq!(d1, export(&build_figure1().unwrap(), ExportFormat::Dot));
        assert_eq!(d1.matches("->").count(), 31);
        assert_eq!(d1.matches("[label=").count(), 19);
        assert!(d1.contains("\"1a\" [label=\"{1a|● ●|●|● ●}\"];"));
        let j = export(&g, ExportFormat::Json);
        assert_eq!(import_json(&j).unwrap(), g);
        assert_eq!(import_json(&export(&empty, ExportFormat::Json)).unwrap(), empty);
    }
}
