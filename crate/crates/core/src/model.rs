//! Graphs, instances and objective evaluation shared by every solver.
//!
//! Vertices are dense `usize` indices `0..n`. The text format and every
//! user-facing message use 1-based ids, so formatting goes through
//! [`label`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
/// Colors are `1..=k`.
pub type Color = u32;
pub type Weight = u64;

/// 1-based display label for a vertex.
pub fn label(v: Vertex) -> usize {
    v + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    /// Compressed adjacency: the `(neighbor, edge index)` pairs of `v` are
    /// `adj[start[v]..start[v + 1]]`, in edge order.
    start: Vec<usize>,
    adj: Vec<(Vertex, usize)>,
}

impl Graph {
    /// Builds a simple graph, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let violations = check_edges(n, &edges);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    /// Builds the adjacency without validation. Out-of-range endpoints are
    /// left out of the adjacency lists; [`validate_instance`] reports them.
    pub fn from_edges_unchecked(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut start = vec![0usize; n + 1];
        let usable = |&(u, v): &(Vertex, Vertex)| u < n && v < n;
        for &(u, v) in edges.iter().filter(|e| usable(e)) {
            start[u + 1] += 1;
            if u != v {
                start[v + 1] += 1;
            }
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![(0, 0); start[n]];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if usable(&(u, v)) {
                adj[fill[u]] = (v, i);
                fill[u] += 1;
                if u != v {
                    adj[fill[v]] = (u, i);
                    fill[v] += 1;
                }
            }
        }
        Graph { n, edges, start, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges_unchecked(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// Neighbors of `v` paired with the connecting edge index.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, usize)] {
        &self.adj[self.start[v]..self.start[v + 1]]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incident(v).iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.start[v + 1] - self.start[v]
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.incident(a).iter().find(|&&(x, _)| x == b).map(|&(_, e)| e)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Subgraph induced by the vertices with `keep[v]`, renumbered in
    /// ascending order.
    pub fn induced(&self, keep: &[bool]) -> Induced {
        let mut new_of = vec![usize::MAX; self.n];
        let mut old = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_of[v] = old.len();
                old.push(v);
            }
        }
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if keep[u] && keep[v] {
                edges.push((new_of[u], new_of[v]));
                edge_origin.push(e);
            }
        }
        Induced { graph: Graph::from_edges_unchecked(old.len(), edges), old, edge_origin }
    }

    /// Dense adjacency matrix, handy for small graphs.
    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let mut mat = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            mat[u][v] = true;
            mat[v][u] = true;
        }
        mat
    }
}

#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Graph,
    /// Original vertex of each new vertex.
    pub old: Vec<Vertex>,
    /// Original edge index of each new edge.
    pub edge_origin: Vec<usize>,
}

fn check_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Violation> {
    let mut out = Vec::new();
    // edges bucketed by lower endpoint; `stamp[hi]` marks the bucket that saw it
    let mut start = vec![0usize; n + 1];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u >= n || v >= n {
            out.push((i, Violation::VertexOutOfRange { vertex: u.max(v), n }));
        } else if u == v {
            out.push((i, Violation::SelfLoop(u)));
        } else {
            start[u.min(v) + 1] += 1;
        }
    }
    for v in 0..n {
        start[v + 1] += start[v];
    }
    let mut bucket = vec![0usize; start[n]];
    let mut fill = start.clone();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u < n && v < n && u != v {
            let lo = u.min(v);
            bucket[fill[lo]] = i;
            fill[lo] += 1;
        }
    }
    let mut stamp = vec![usize::MAX; n];
    for lo in 0..n {
        for &i in &bucket[start[lo]..start[lo + 1]] {
            let hi = edges[i].0.max(edges[i].1);
            if stamp[hi] == lo {
                out.push((i, Violation::DuplicateEdge(lo, hi)));
            }
            stamp[hi] = lo;
        }
    }
    out.sort_by_key(|x| x.0);
    out.into_iter().map(|x| x.1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    /// Maximum happy edges.
    Mhe,
    /// Maximum happy vertices.
    Mhv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub problem: Problem,
    pub weighted: bool,
}

impl Variant {
    pub const MHE: Variant = Variant { problem: Problem::Mhe, weighted: false };
    pub const MHV: Variant = Variant { problem: Problem::Mhv, weighted: false };
    pub const WMHE: Variant = Variant { problem: Problem::Mhe, weighted: true };
    pub const WMHV: Variant = Variant { problem: Problem::Mhv, weighted: true };

    pub fn name(self) -> &'static str {
        match (self.problem, self.weighted) {
            (Problem::Mhe, false) => "mhe",
            (Problem::Mhv, false) => "mhv",
            (Problem::Mhe, true) => "wmhe",
            (Problem::Mhv, true) => "wmhv",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "mhe" => Some(Self::MHE),
            "mhv" => Some(Self::MHV),
            "wmhe" => Some(Self::WMHE),
            "wmhv" => Some(Self::WMHV),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A happy coloring instance: graph, color count, partial coloring and
/// weights. Both weight vectors are always present; the one that does not
/// belong to the variant is all ones and ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub variant: Variant,
    pub k: u32,
    pub precoloring: Vec<Option<Color>>,
    /// Indexed by edge index.
    pub edge_weights: Vec<Weight>,
    pub vertex_weights: Vec<Weight>,
    /// `None` means optimize.
    pub target: Option<u64>,
}

impl Instance {
    /// Unit-weight instance with no target.
    pub fn new(graph: Graph, variant: Variant, k: u32, precoloring: Vec<Option<Color>>) -> Self {
        let (n, m) = (graph.n(), graph.m());
        Instance {
            graph,
            variant,
            k,
            precoloring,
            edge_weights: vec![1; m],
            vertex_weights: vec![1; n],
            target: None,
        }
    }

    pub fn with_edge_weights(mut self, weights: Vec<Weight>) -> Self {
        self.edge_weights = weights;
        self
    }

    pub fn with_vertex_weights(mut self, weights: Vec<Weight>) -> Self {
        self.vertex_weights = weights;
        self
    }

    pub fn with_target(mut self, target: Option<u64>) -> Self {
        self.target = target.filter(|&t| t > 0);
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn problem(&self) -> Problem {
        self.variant.problem
    }

    pub fn uncolored(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.precoloring[v].is_none()).collect()
    }

    pub fn uncolored_count(&self) -> usize {
        self.precoloring.iter().filter(|c| c.is_none()).count()
    }

    pub fn total_edge_weight(&self) -> Weight {
        self.edge_weights.iter().sum()
    }

    pub fn total_vertex_weight(&self) -> Weight {
        self.vertex_weights.iter().sum()
    }

    /// Total weight of the objective's ground set.
    pub fn total_weight(&self) -> Weight {
        match self.problem() {
            Problem::Mhe => self.total_edge_weight(),
            Problem::Mhv => self.total_vertex_weight(),
        }
    }

    pub fn is_unit_weighted(&self) -> bool {
        match self.problem() {
            Problem::Mhe => self.edge_weights.iter().all(|&w| w == 1),
            Problem::Mhv => self.vertex_weights.iter().all(|&w| w == 1),
        }
    }

    /// Distinct colors used by the precoloring, ascending.
    pub fn used_colors(&self) -> Vec<Color> {
        let mut cs: Vec<Color> = self.precoloring.iter().flatten().copied().collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// Fills every uncolored vertex with `color`.
    pub fn complete_with(&self, color: Color) -> Vec<Color> {
        self.precoloring.iter().map(|c| c.unwrap_or(color)).collect()
    }

    pub fn ensure_problem(&self, problem: Problem, solver: &str) -> Result<()> {
        if self.problem() != problem {
            return Err(Error::Contract(format!("{solver} requires a {problem:?} instance")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub coloring: Vec<Color>,
    pub happy_weight: Weight,
    pub algorithm: String,
}

impl Solution {
    /// Evaluates `coloring` and wraps it.
    pub fn evaluated(inst: &Instance, coloring: Vec<Color>, algorithm: &str) -> Result<Self> {
        let happy_weight = evaluate_objective(inst, &coloring)?;
        Ok(Solution { coloring, happy_weight, algorithm: algorithm.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop(Vertex),
    DuplicateEdge(Vertex, Vertex),
    VertexOutOfRange { vertex: Vertex, n: usize },
    ColorOutOfRange { vertex: Vertex, color: Color, k: u32 },
    ZeroColors,
    NonPositiveEdgeWeight { edge: (Vertex, Vertex) },
    NonPositiveVertexWeight(Vertex),
    NonUnitWeight,
    LengthMismatch(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::SelfLoop(v) => write!(f, "self-loop at {}", label(v)),
            Violation::DuplicateEdge(u, v) => {
                write!(f, "duplicate edge {} {}", label(u), label(v))
            }
            Violation::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {} out of range 1..{}", label(vertex), n)
            }
            Violation::ColorOutOfRange { vertex, color, k } => {
                write!(f, "color out of range: vertex {} has color {} (k = {})", label(vertex), color, k)
            }
            Violation::ZeroColors => write!(f, "k must be at least 1"),
            Violation::NonPositiveEdgeWeight { edge: (u, v) } => {
                write!(f, "nonpositive weight on edge {} {}", label(u), label(v))
            }
            Violation::NonPositiveVertexWeight(v) => {
                write!(f, "nonpositive weight on vertex {}", label(v))
            }
            Violation::NonUnitWeight => write!(f, "unweighted variant carries a weight other than 1"),
            Violation::LengthMismatch(what) => write!(f, "{what} length does not match the graph"),
        }
    }
}

/// Collects every invariant violation of `inst`; empty means well formed.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let g = &inst.graph;
    let mut out = check_edges(g.n(), g.edges());
    if inst.k == 0 {
        out.push(Violation::ZeroColors);
    }
    if inst.precoloring.len() != g.n() {
        out.push(Violation::LengthMismatch("precoloring"));
    }
    if inst.edge_weights.len() != g.m() {
        out.push(Violation::LengthMismatch("edge weights"));
    }
    if inst.vertex_weights.len() != g.n() {
        out.push(Violation::LengthMismatch("vertex weights"));
    }
    if !out.iter().all(|v| !matches!(v, Violation::LengthMismatch(_))) {
        return out;
    }
    for (v, c) in inst.precoloring.iter().enumerate() {
        if let Some(c) = *c {
            if c == 0 || c > inst.k {
                out.push(Violation::ColorOutOfRange { vertex: v, color: c, k: inst.k });
            }
        }
    }
    for (e, &w) in inst.edge_weights.iter().enumerate() {
        if w == 0 {
            out.push(Violation::NonPositiveEdgeWeight { edge: g.edge(e) });
        }
    }
    for (v, &w) in inst.vertex_weights.iter().enumerate() {
        if w == 0 {
            out.push(Violation::NonPositiveVertexWeight(v));
        }
    }
    let unit = inst.edge_weights.iter().all(|&w| w == 1) && inst.vertex_weights.iter().all(|&w| w == 1);
    if !inst.variant.weighted && !unit {
        out.push(Violation::NonUnitWeight);
    }
    out
}

/// [`validate_instance`] as a `Result`.
pub fn ensure_valid(inst: &Instance) -> Result<()> {
    let violations = validate_instance(inst);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(violations))
    }
}

/// Checks that `coloring` is a total extension of the precoloring with
/// colors in `1..=k`.
pub fn check_coloring(inst: &Instance, coloring: &[Color]) -> Result<()> {
    if coloring.len() != inst.n() {
        return Err(Error::Coloring(format!(
            "coloring has {} entries, expected {}",
            coloring.len(),
            inst.n()
        )));
    }
    for (v, &c) in coloring.iter().enumerate() {
        if c == 0 || c > inst.k {
            return Err(Error::Coloring(format!(
                "vertex {} has color {} outside 1..={}",
                label(v),
                c,
                inst.k
            )));
        }
        if let Some(p) = inst.precoloring[v] {
            if p != c {
                return Err(Error::Coloring(format!(
                    "vertex {} is precolored {} but colored {}",
                    label(v),
                    p,
                    c
                )));
            }
        }
    }
    Ok(())
}

/// Total happy weight of a full coloring.
pub fn evaluate_objective(inst: &Instance, coloring: &[Color]) -> Result<Weight> {
    check_coloring(inst, coloring)?;
    Ok(objective_unchecked(inst, coloring))
}

/// Objective without the extension check; callers guarantee validity.
pub(crate) fn objective_unchecked(inst: &Instance, coloring: &[Color]) -> Weight {
    let g = &inst.graph;
    match inst.problem() {
        Problem::Mhe => g
            .edges()
            .iter()
            .zip(&inst.edge_weights)
            .filter(|(&(u, v), _)| coloring[u] == coloring[v])
            .map(|(_, &w)| w)
            .sum(),
        Problem::Mhv => (0..g.n())
            .filter(|&v| g.neighbors(v).all(|u| coloring[u] == coloring[v]))
            .map(|v| inst.vertex_weights[v])
            .sum(),
    }
}

/// Vertices whose closed neighborhood is monochromatic under `coloring`.
pub fn happy_vertices(g: &Graph, coloring: &[Color]) -> Vec<Vertex> {
    (0..g.n()).filter(|&v| g.neighbors(v).all(|u| coloring[u] == coloring[v])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(variant: Variant) -> Instance {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        Instance::new(g, variant, 2, vec![Some(1), Some(2), None])
    }

    #[test]
    fn triangle_mhe_one_happy_edge() {
        let inst = triangle(Variant::MHE);
        assert_eq!(evaluate_objective(&inst, &[1, 2, 1]).unwrap(), 1);
        assert_eq!(evaluate_objective(&inst, &[1, 2, 2]).unwrap(), 1);
    }

    #[test]
    fn monochromatic_is_total_weight() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let inst = Instance::new(g, Variant::WMHE, 3, vec![None; 4]).with_edge_weights(vec![1, 2, 3, 4, 5]);
        assert_eq!(evaluate_objective(&inst, &[2; 4]).unwrap(), 15);
        let mut inst = inst;
        inst.variant = Variant::WMHV;
        inst.vertex_weights = vec![3, 1, 4, 1];
        assert_eq!(evaluate_objective(&inst, &[2; 4]).unwrap(), 9);
    }

    #[test]
    fn path_mhv_only_endpoint_happy() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(g, Variant::MHV, 2, vec![Some(1), None, Some(2)]);
        // both extensions of the middle vertex
        assert_eq!(evaluate_objective(&inst, &[1, 1, 2]).unwrap(), 1);
        assert_eq!(evaluate_objective(&inst, &[1, 2, 2]).unwrap(), 1);
    }

    #[test]
    fn coloring_errors_name_the_vertex() {
        let inst = triangle(Variant::MHE);
        let err = evaluate_objective(&inst, &[2, 2, 1]).unwrap_err().to_string();
        assert!(err.contains("vertex 1"), "{err}");
        let err = evaluate_objective(&inst, &[1, 2, 3]).unwrap_err().to_string();
        assert!(err.contains("vertex 3"), "{err}");
        assert!(evaluate_objective(&inst, &[1, 2]).is_err());
    }

    #[test]
    fn validation_reports_violations() {
        assert!(validate_instance(&triangle(Variant::MHE)).is_empty());

        let g = Graph::from_edges_unchecked(3, vec![(0, 1), (2, 2)]);
        let inst = Instance::new(g, Variant::MHE, 2, vec![None; 3]);
        let msgs: Vec<String> = validate_instance(&inst).iter().map(|v| v.to_string()).collect();
        assert_eq!(msgs, vec!["self-loop at 3"]);

        let mut inst = triangle(Variant::MHE);
        inst.precoloring[2] = Some(3);
        let msgs: Vec<String> = validate_instance(&inst).iter().map(|v| v.to_string()).collect();
        assert_eq!(msgs.len(), 1);
        assert!(msgs[0].starts_with("color out of range"));
    }

    #[test]
    fn validation_catches_duplicates_and_weights() {
        let g = Graph::from_edges_unchecked(3, vec![(0, 1), (1, 0)]);
        let inst = Instance::new(g, Variant::WMHE, 2, vec![None; 3]).with_edge_weights(vec![0, 1]);
        let v = validate_instance(&inst);
        assert!(v.contains(&Violation::DuplicateEdge(0, 1)));
        assert!(v.iter().any(|x| matches!(x, Violation::NonPositiveEdgeWeight { .. })));
    }

    #[test]
    fn complete_graph_distinct_precolors_no_happy_vertex() {
        let inst = Instance::new(Graph::complete(4), Variant::MHV, 3, vec![Some(1), Some(2), None, None]);
        for a in 1..=3 {
            for b in 1..=3 {
                assert_eq!(evaluate_objective(&inst, &[1, 2, a, b]).unwrap(), 0);
            }
        }
    }
}
