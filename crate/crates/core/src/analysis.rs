//! Comparing a model's memberships with reference data: per-pair Pearson
//! correlations and C/D/K type-transition graphs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::classicality::{classify, ExemplarType};
use crate::dataset::MembershipTriple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("at least two observations are needed, got {0}")]
    TooShort(usize),
    #[error("datasets are not aligned; unmatched keys: {}", format_keys(.0))]
    Misaligned(Vec<(String, String)>),
}

fn format_keys(keys: &[(String, String)]) -> String {
    keys.iter()
        .map(|(p, e)| format!("({p}, {e})"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A correlation coefficient, or an explicit marker when a series is
/// constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Defined(f64),
    Undefined,
}

impl Correlation {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Defined(r) => Some(r),
            Self::Undefined => None,
        }
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Defined(r) => write!(f, "{r}"),
            Self::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Correlation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Defined(r) => s.serialize_f64(*r),
            Self::Undefined => s.serialize_str("undefined"),
        }
    }
}

/// Sample Pearson coefficient, accumulated in one pass with running
/// co-moments.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Correlation, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(AnalysisError::TooShort(xs.len()));
    }
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let n = (i + 1) as f64;
        let dx = x - mx;
        let dy = y - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(Correlation::Undefined);
    }
    Ok(Correlation::Defined((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)))
}

/// Edge counts between the three exemplar types; self-loops allowed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransitionGraph {
    counts: [[u64; 3]; 3],
}

impl TransitionGraph {
    pub fn add(&mut self, from: ExemplarType, to: ExemplarType) {
        self.counts[from.index()][to.index()] += 1;
    }

    pub fn edge_count(&self, from: ExemplarType, to: ExemplarType) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Exemplars whose type changed.
    pub fn off_diagonal(&self) -> u64 {
        self.total() - (0..3).map(|i| self.counts[i][i]).sum::<u64>()
    }

    /// Nonzero edges in C, D, K order.
    pub fn edges(&self) -> impl Iterator<Item = (ExemplarType, ExemplarType, u64)> + '_ {
        ExemplarType::ALL.into_iter().flat_map(move |from| {
            ExemplarType::ALL.into_iter().filter_map(move |to| {
                let c = self.edge_count(from, to);
                (c > 0).then_some((from, to, c))
            })
        })
    }

    pub fn merge(&mut self, other: &TransitionGraph) {
        for i in 0..3 {
            for j in 0..3 {
                self.counts[i][j] += other.counts[i][j];
            }
        }
    }

    /// Graphviz rendering; edge labels are counts.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let id: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        writeln!(out, "digraph {id} {{").unwrap();
        writeln!(out, "  label=\"{}\";", name.replace('"', "'")).unwrap();
        for ty in ExemplarType::ALL {
            writeln!(out, "  {ty};").unwrap();
        }
        for (from, to, c) in self.edges() {
            writeln!(out, "  {from} -> {to} [label=\"{c}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for TransitionGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Edge {
            from: ExemplarType,
            to: ExemplarType,
            count: u64,
        }
        let edges: Vec<Edge> = self
            .edges()
            .map(|(from, to, count)| Edge { from, to, count })
            .collect();
        edges.serialize(s)
    }
}

pub fn transition_graph(
    reference: &[ExemplarType],
    model: &[ExemplarType],
) -> Result<TransitionGraph, AnalysisError> {
    if reference.len() != model.len() {
        return Err(AnalysisError::LengthMismatch(reference.len(), model.len()));
    }
    let mut g = TransitionGraph::default();
    for (&r, &m) in reference.iter().zip(model) {
        g.add(r, m);
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TypeCounts {
    #[serde(rename = "C")]
    pub classical: u64,
    #[serde(rename = "D")]
    pub delta: u64,
    #[serde(rename = "K")]
    pub k: u64,
}

impl TypeCounts {
    pub fn add(&mut self, ty: ExemplarType) {
        match ty {
            ExemplarType::Classical => self.classical += 1,
            ExemplarType::DeltaType => self.delta += 1,
            ExemplarType::KType => self.k += 1,
        }
    }

    pub fn get(&self, ty: ExemplarType) -> u64 {
        match ty {
            ExemplarType::Classical => self.classical,
            ExemplarType::DeltaType => self.delta,
            ExemplarType::KType => self.k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelation {
    pub pair_id: String,
    pub n: usize,
    pub r_a: Correlation,
    pub r_b: Correlation,
    pub r_or: Correlation,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub pairs: Vec<PairCorrelation>,
}

impl CorrelationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair_id,n,r_a,r_b,r_or\n");
        for p in &self.pairs {
            let pair_id = if p.pair_id.contains([',', '"', '\n']) {
                format!("\"{}\"", p.pair_id.replace('"', "\"\""))
            } else {
                p.pair_id.clone()
            };
            writeln!(out, "{},{},{},{},{}", pair_id, p.n, p.r_a, p.r_b, p.r_or).unwrap();
        }
        out
    }
}

/// Negative similarities set to zero before use as memberships.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClipStats {
    pub values_total: usize,
    pub values_clipped: usize,
    pub exemplars_total: usize,
    pub exemplars_clipped: usize,
    pub most_negative: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub tol: f64,
    pub exemplars: usize,
    pub correlations: CorrelationReport,
    pub graph: TransitionGraph,
    pub per_pair_graphs: BTreeMap<String, TransitionGraph>,
    pub reference_types: TypeCounts,
    pub model_types: TypeCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clipping: Option<ClipStats>,
}

/// Aligns `model` to `reference` on `(pair_id, normalised exemplar)`,
/// labels both sides and aggregates. Pairs keep their first-appearance
/// order in the reference.
pub fn compare_pipeline(
    reference: &[MembershipTriple],
    model: &[MembershipTriple],
    tol: f64,
) -> Result<Comparison, AnalysisError> {
    let model_by_key: HashMap<(String, String), &MembershipTriple> =
        model.iter().map(|t| (t.key(), t)).collect();
    let mut unmatched = Vec::new();
    let mut aligned = Vec::with_capacity(reference.len());
    for r in reference {
        match model_by_key.get(&r.key()) {
            Some(m) => aligned.push((r, *m)),
            None => unmatched.push((r.pair_id.clone(), r.exemplar.clone())),
        }
    }
    if aligned.len() != model.len() {
        let reference_keys: std::collections::HashSet<_> =
            reference.iter().map(MembershipTriple::key).collect();
        unmatched.extend(
            model
                .iter()
                .filter(|m| !reference_keys.contains(&m.key()))
                .map(|m| (m.pair_id.clone(), m.exemplar.clone())),
        );
    }
    if !unmatched.is_empty() {
        return Err(AnalysisError::Misaligned(unmatched));
    }

    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<(&MembershipTriple, &MembershipTriple)>> = HashMap::new();
    for &(r, m) in &aligned {
        groups
            .entry(r.pair_id.as_str())
            .or_insert_with(|| {
                order.push(r.pair_id.as_str());
                Vec::new()
            })
            .push((r, m));
    }

    let mut cmp = Comparison {
        tol,
        exemplars: aligned.len(),
        correlations: CorrelationReport::default(),
        graph: TransitionGraph::default(),
        per_pair_graphs: BTreeMap::new(),
        reference_types: TypeCounts::default(),
        model_types: TypeCounts::default(),
        clipping: None,
    };
    for pair_id in order {
        let rows = &groups[pair_id];
        let series = |f: fn(&MembershipTriple) -> f64| -> Correlation {
            let xs: Vec<f64> = rows.iter().map(|(r, _)| f(r)).collect();
            let ys: Vec<f64> = rows.iter().map(|(_, m)| f(m)).collect();
            pearson(&xs, &ys).unwrap_or(Correlation::Undefined)
        };
        cmp.correlations.pairs.push(PairCorrelation {
            pair_id: pair_id.to_string(),
            n: rows.len(),
            r_a: series(|t| t.mu_a),
            r_b: series(|t| t.mu_b),
            r_or: series(|t| t.mu_or),
        });
        let mut g = TransitionGraph::default();
        for (r, m) in rows {
            let rt = classify(r, tol).kind;
            let mt = classify(m, tol).kind;
            cmp.reference_types.add(rt);
            cmp.model_types.add(mt);
            g.add(rt, mt);
        }
        cmp.graph.merge(&g);
        cmp.per_pair_graphs.insert(pair_id.to_string(), g);
    }
    Ok(cmp)
}
