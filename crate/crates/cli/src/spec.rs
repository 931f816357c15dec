//! The JSON graph-spec file format.
//!
//! ```json
//! {"flavor": "V", "base": {"vertices": ["o"], "edges": []}, "tails": [{"nest": "o"}, {"nest": "o"}],
//!  "n0": 0, "potential": {"o": 2.0}, "coupling": {}}
//! ```
//!
//! Site keys: a base vertex name (V), `e<i>` for base edge `i` (E, 0-based in
//! declaration order), or `j:n` for the tail site at depth `n >= 1` of tail `j`
//! (1-based). Pair keys join two site keys with `~`, sorted as strings. In the
//! vertex flavor a pair key sets every edge joining the two vertices; `e<i>` on
//! its own addresses a single base edge, which is how parallel edges get distinct
//! couplings. Tail vertices `j:n` pair with the nest by name at depth 1.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use schrograph_core::{
    assemble, build_graph, CouplingKey, Edge, Flavor, GraphSpec, OperatorCoefficients, Overrides, Site, TailedGraph,
    Vertex,
};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub flavor: Flavor,
    pub base: BaseSection,
    pub tails: Vec<TailEntry>,
    #[serde(default)]
    pub n0: usize,
    #[serde(default)]
    pub potential: BTreeMap<String, f64>,
    #[serde(default)]
    pub coupling: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailEntry {
    pub nest: String,
}

const PAIR_SEP: char = '~';

impl SpecDocument {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse { path: origin.into(), message: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents always serialize")
    }

    pub fn graph_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.base.vertices.clone(),
            edges: self.base.edges.clone(),
            tails: self.tails.iter().map(|t| t.nest.clone()).collect(),
        }
    }

    /// Validate and assemble the operator.
    pub fn build(&self) -> Result<OperatorCoefficients> {
        if self.flavor == Flavor::Vertex {
            for name in &self.base.vertices {
                if name.contains(':') || name.contains(PAIR_SEP) {
                    return Err(CliError::bad_key(name, "vertex names may not contain ':' or '~'"));
                }
            }
        }
        let graph = build_graph(&self.graph_spec())?;
        let mut overrides = Overrides::default();
        for (key, &value) in &self.potential {
            let site = parse_site(&graph, self.flavor, key)?;
            if overrides.potential.insert(site, value).is_some() {
                return Err(CliError::DuplicateKey(key.clone()));
            }
        }
        for (key, &value) in &self.coupling {
            for k in parse_pair(&graph, self.flavor, key)? {
                if overrides.coupling.insert(k, value).is_some() {
                    return Err(CliError::DuplicateKey(key.clone()));
                }
            }
        }
        Ok(assemble(&graph, self.flavor, &overrides, self.n0)?)
    }

    /// Describe an operator in file form, with canonical keys.
    pub fn from_operator(op: &OperatorCoefficients) -> Self {
        let graph = op.graph();
        let spec = graph.spec();
        let potential = op.overrides().potential.iter().map(|(&s, &v)| (op.site_label(s), v)).collect();
        let coupling = op.overrides().coupling.iter().map(|(&k, &v)| (pair_label(op, k), v)).collect();
        SpecDocument {
            flavor: op.flavor(),
            base: BaseSection { vertices: spec.vertices, edges: spec.edges },
            tails: spec.tails.into_iter().map(|nest| TailEntry { nest }).collect(),
            n0: op.n0(),
            potential,
            coupling,
        }
    }
}

fn parse_tail(key: &str) -> Result<Option<(usize, usize)>> {
    let Some((j, n)) = key.split_once(':') else {
        return Ok(None);
    };
    let j: usize = j.parse().map_err(|_| CliError::bad_key(key, "tail index is not an integer"))?;
    let n: usize = n.parse().map_err(|_| CliError::bad_key(key, "tail depth is not an integer"))?;
    if j == 0 || n == 0 {
        return Err(CliError::bad_key(key, "tail index and depth start at 1"));
    }
    Ok(Some((j - 1, n)))
}

fn parse_base_edge(key: &str) -> Result<usize> {
    key.strip_prefix('e')
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| CliError::bad_key(key, "expected `e<index>` or `j:n`"))
}

fn parse_vertex(graph: &TailedGraph, key: &str) -> Result<Vertex> {
    if let Some((tail, depth)) = parse_tail(key)? {
        return Ok(Vertex::Tail { tail, depth });
    }
    graph.vertex_index(key).map(Vertex::Base).ok_or_else(|| CliError::bad_key(key, "no such vertex"))
}

fn parse_edge(key: &str) -> Result<Edge> {
    if let Some((tail, depth)) = parse_tail(key)? {
        return Ok(Edge::Tail { tail, depth });
    }
    Ok(Edge::Base(parse_base_edge(key)?))
}

pub fn parse_site(graph: &TailedGraph, flavor: Flavor, key: &str) -> Result<Site> {
    Ok(match flavor {
        Flavor::Vertex => Site::from(parse_vertex(graph, key)?),
        Flavor::Edge => Site::from(parse_edge(key)?),
    })
}

/// Coupling keys addressed by one pair key.
pub fn parse_pair(graph: &TailedGraph, flavor: Flavor, key: &str) -> Result<Vec<CouplingKey>> {
    let Some((a, b)) = key.split_once(PAIR_SEP) else {
        return match flavor {
            Flavor::Vertex => Ok(vec![CouplingKey::Across(Edge::Base(parse_base_edge(key)?))]),
            Flavor::Edge => Err(CliError::bad_key(key, "expected two edge keys joined by `~`")),
        };
    };
    match flavor {
        Flavor::Vertex => {
            let (a, b) = (parse_vertex(graph, a)?, parse_vertex(graph, b)?);
            if !graph.contains_vertex(a) || !graph.contains_vertex(b) {
                return Err(CliError::bad_key(key, "no such vertex"));
            }
            let edges = graph.edges_between(a, b)?;
            if edges.is_empty() {
                return Err(CliError::bad_key(key, "vertices are not adjacent"));
            }
            Ok(edges.into_iter().map(CouplingKey::Across).collect())
        }
        Flavor::Edge => Ok(vec![CouplingKey::between(parse_edge(a)?, parse_edge(b)?)]),
    }
}

fn sorted_pair(a: String, b: String) -> String {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    format!("{a}{PAIR_SEP}{b}")
}

/// Canonical key of a coupling.
pub fn pair_label(op: &OperatorCoefficients, key: CouplingKey) -> String {
    let graph = op.graph();
    let edge_label = |e: Edge| op.site_label(Site::from(e));
    match key {
        CouplingKey::Across(e) => {
            let (a, b) = graph.endpoints(e).expect("validated key");
            match e {
                Edge::Base(i) if graph.edges_between(a, b).map(|v| v.len()).unwrap_or(1) > 1 => format!("e{i}"),
                _ => sorted_pair(graph.vertex_label(a), graph.vertex_label(b)),
            }
        }
        CouplingKey::Between(a, b) => sorted_pair(edge_label(a), edge_label(b)),
    }
}

/// Graph, flavor, `n0`, and the override maps with values as bit patterns.
pub type SemanticContent = (GraphSpec, Flavor, usize, Vec<(Site, u64)>, Vec<(CouplingKey, u64)>);

/// Canonical forms of the override maps, for comparing documents by meaning.
pub fn semantic_content(doc: &SpecDocument) -> Result<SemanticContent> {
    let op = doc.build()?;
    let o = op.overrides();
    let potential = o.potential.iter().map(|(&s, v)| (s, v.to_bits())).collect();
    let coupling = o.coupling.iter().map(|(&k, v)| (k, v.to_bits())).collect();
    Ok((op.graph().spec(), op.flavor(), op.n0(), potential, coupling))
}

/// Distinct nests by name, in first-appearance order.
pub fn nest_names(graph: &TailedGraph) -> Vec<String> {
    let mut seen = BTreeSet::new();
    graph
        .nests()
        .iter()
        .filter(|&&v| seen.insert(v))
        .map(|&v| graph.vertex_name(v).to_string())
        .collect()
}
