//! Kernelization for Weighted k-MHE: either a decision or an equivalent
//! instance on at most `k + ℓ` vertices.
//!
//! Rules, applied to a fixpoint in this order:
//!
//! 1. delete isolated vertices;
//! 2. delete edges between two precolored vertices, lowering `ℓ` by the
//!    weight of the happy ones;
//! 3. contract each precolored color class into one vertex, summing the
//!    weights of parallel edges;
//!
//! followed by exact elimination of acyclic components of the uncolored
//! subgraph `H`. The decision checks are: an edge of weight `≥ ℓ` with an
//! uncolored endpoint, `w(E(H)) ≥ ℓ`, and `ℓ ≤ 0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Color, Graph, Instance, Problem, Solution, Variant, Vertex, Weight};
use crate::partition;
use crate::treedp;

pub const ALGORITHM: &str = "kernel+exact";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    DeleteIsolated { vertex: Vertex },
    RemoveColoredEdge { u: Vertex, v: Vertex, weight: Weight, decrement: Weight },
    ContractClass { color: Color, representative: Vertex, merged: Vec<Vertex> },
    EliminateTree { coloring: Vec<(Vertex, Color)>, contribution: Weight },
}

/// Ordered log of applied rules, in original vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelTrace {
    pub steps: Vec<TraceStep>,
}

impl KernelTrace {
    /// Weight already accounted for outside the kernel.
    pub fn total_decrement(&self) -> Weight {
        self.steps
            .iter()
            .map(|s| match *s {
                TraceStep::RemoveColoredEdge { decrement, .. } => decrement,
                TraceStep::EliminateTree { contribution, .. } => contribution,
                _ => 0,
            })
            .sum()
    }

    /// Extends a coloring of the surviving vertices (`assigned`, in original
    /// ids) to the whole original graph. Vertices neither surviving nor
    /// eliminated are colored 1; they touch no edge that could be happy.
    pub fn lift(&self, original: &Instance, assigned: &[(Vertex, Color)]) -> Vec<Color> {
        let mut coloring = original.complete_with(1);
        for step in &self.steps {
            if let TraceStep::EliminateTree { coloring: part, .. } = step {
                for &(v, c) in part {
                    coloring[v] = c;
                }
            }
        }
        for &(v, c) in assigned {
            if original.precoloring[v].is_none() {
                coloring[v] = c;
            }
        }
        coloring
    }
}

/// A reduced instance with the bookkeeping to map solutions back.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub kernel: Instance,
    /// Original vertex for each kernel vertex.
    pub vertex_map: Vec<Vertex>,
    pub remaining_target: i64,
    pub trace: KernelTrace,
}

impl Reduction {
    pub fn precolored_count(&self) -> usize {
        self.kernel.n() - self.kernel.uncolored_count()
    }

    /// Lifts a kernel coloring to the original graph.
    pub fn lift(&self, original: &Instance, kernel_coloring: &[Color]) -> Vec<Color> {
        let assigned: Vec<(Vertex, Color)> =
            self.vertex_map.iter().zip(kernel_coloring).map(|(&v, &c)| (v, c)).collect();
        self.trace.lift(original, &assigned)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Debug, Clone)]
pub enum KernelOutcome {
    Decided { answer: Answer, witness: Option<Vec<Color>> },
    Reduced(Reduction),
}

/// Mutable reduction state over original vertex ids.
#[derive(Debug, Clone)]
pub struct KernelState {
    k: u32,
    weighted: bool,
    alive: Vec<bool>,
    color: Vec<Option<Color>>,
    adj: Vec<BTreeMap<Vertex, Weight>>,
    target: i64,
    trace: KernelTrace,
}

impl KernelState {
    pub fn new(inst: &Instance) -> Result<Self> {
        ensure_valid(inst)?;
        inst.ensure_problem(Problem::Mhe, "kernelization")?;
        let n = inst.n();
        let mut adj = vec![BTreeMap::new(); n];
        for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
            adj[u].insert(v, inst.edge_weights[e]);
            adj[v].insert(u, inst.edge_weights[e]);
        }
        Ok(KernelState {
            k: inst.k,
            weighted: inst.variant.weighted,
            alive: vec![true; n],
            color: inst.precoloring.clone(),
            adj,
            target: inst.target.map_or(0, |t| t as i64),
            trace: KernelTrace::default(),
        })
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn trace(&self) -> &KernelTrace {
        &self.trace
    }

    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.alive.len()).filter(|&v| self.alive[v])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    fn remove_vertex(&mut self, v: Vertex) {
        let nbrs: Vec<Vertex> = self.adj[v].keys().copied().collect();
        for u in nbrs {
            self.adj[u].remove(&v);
        }
        self.adj[v].clear();
        self.alive[v] = false;
    }

    /// Rule 1.
    pub fn rule_isolated(&mut self) -> bool {
        let isolated: Vec<Vertex> = self.vertices().filter(|&v| self.adj[v].is_empty()).collect();
        for &v in &isolated {
            self.alive[v] = false;
            self.trace.steps.push(TraceStep::DeleteIsolated { vertex: v });
        }
        !isolated.is_empty()
    }

    /// Rule 2.
    pub fn rule_colored_edge(&mut self) -> bool {
        let mut doomed = Vec::new();
        for u in self.vertices() {
            let Some(cu) = self.color[u] else { continue };
            for (&v, &w) in &self.adj[u] {
                if u < v {
                    if let Some(cv) = self.color[v] {
                        doomed.push((u, v, w, if cu == cv { w } else { 0 }));
                    }
                }
            }
        }
        for &(u, v, weight, decrement) in &doomed {
            self.adj[u].remove(&v);
            self.adj[v].remove(&u);
            self.target -= decrement as i64;
            self.trace.steps.push(TraceStep::RemoveColoredEdge { u, v, weight, decrement });
        }
        !doomed.is_empty()
    }

    /// Rule 3. Requires Rule 2 at fixpoint so color classes are independent.
    pub fn rule_contract_classes(&mut self) -> Result<bool> {
        let mut classes: BTreeMap<Color, Vec<Vertex>> = BTreeMap::new();
        for v in self.vertices() {
            if let Some(c) = self.color[v] {
                if self.adj[v].keys().any(|&u| self.color[u].is_some()) {
                    return Err(Error::Contract(
                        "class contraction requires no edge between precolored vertices".into(),
                    ));
                }
                classes.entry(c).or_default().push(v);
            }
        }
        let mut changed = false;
        for (color, members) in classes {
            if members.len() < 2 {
                continue;
            }
            let rep = members[0];
            for &x in &members[1..] {
                let edges: Vec<(Vertex, Weight)> = self.adj[x].iter().map(|(&u, &w)| (u, w)).collect();
                for (u, w) in edges {
                    self.adj[u].remove(&x);
                    *self.adj[u].entry(rep).or_insert(0) += w;
                    *self.adj[rep].entry(u).or_insert(0) += w;
                }
                self.adj[x].clear();
                self.alive[x] = false;
            }
            self.trace.steps.push(TraceStep::ContractClass {
                color,
                representative: rep,
                merged: members[1..].to_vec(),
            });
            changed = true;
        }
        Ok(changed)
    }

    /// Components of the uncolored subgraph `H`, with acyclicity flags.
    fn uncolored_components(&self) -> Vec<(Vec<Vertex>, bool)> {
        let n = self.alive.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for root in self.vertices() {
            if self.color[root].is_some() || seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut edges2 = 0;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in self.adj[v].keys() {
                    if self.color[u].is_none() {
                        edges2 += 1;
                        if !seen[u] {
                            seen[u] = true;
                            comp.push(u);
                        }
                    }
                }
            }
            comp.sort_unstable();
            let acyclic = edges2 / 2 + 1 == comp.len();
            out.push((comp, acyclic));
        }
        out
    }

    /// Solves and deletes every acyclic component of `H`.
    pub fn eliminate_tree_components(&mut self) -> Result<bool> {
        let mut changed = false;
        for (comp, acyclic) in self.uncolored_components() {
            if !acyclic {
                continue;
            }
            let (sub, members) = self.tree_subinstance(&comp);
            let sol = treedp::solve_tree_mhe(&sub)?;
            let coloring: Vec<(Vertex, Color)> =
                members.iter().zip(&sol.coloring).filter(|(&v, _)| self.color[v].is_none()).map(|(&v, &c)| (v, c)).collect();
            for &v in &comp {
                self.remove_vertex(v);
            }
            self.target -= sol.happy_weight as i64;
            self.trace.steps.push(TraceStep::EliminateTree { coloring, contribution: sol.happy_weight });
            changed = true;
        }
        Ok(changed)
    }

    /// The component plus its precolored neighbors as a standalone instance.
    fn tree_subinstance(&self, comp: &[Vertex]) -> (Instance, Vec<Vertex>) {
        let mut members: Vec<Vertex> = comp.to_vec();
        for &v in comp {
            members.extend(self.adj[v].keys().copied().filter(|&u| self.color[u].is_some()));
        }
        members.sort_unstable();
        members.dedup();
        let index: BTreeMap<Vertex, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for &v in comp {
            for (&u, &w) in &self.adj[v] {
                if self.color[u].is_some() || v < u {
                    edges.push((index[&v], index[&u]));
                    weights.push(w);
                }
            }
        }
        let pre = members.iter().map(|&v| self.color[v]).collect();
        let g = Graph::from_edges_unchecked(members.len(), edges);
        (Instance::new(g, Variant::WMHE, self.k, pre).with_edge_weights(weights), members)
    }

    /// Applies the optimum-preserving rules until none fires.
    pub fn reduce_to_fixpoint(&mut self) -> Result<()> {
        loop {
            let mut changed = self.rule_isolated();
            changed |= self.rule_colored_edge();
            changed |= self.rule_contract_classes()?;
            changed |= self.eliminate_tree_components()?;
            if !changed {
                return Ok(());
            }
        }
    }

    fn heavy_edge(&self) -> Option<(Vertex, Vertex)> {
        for u in self.vertices() {
            for (&v, &w) in &self.adj[u] {
                let touches_free = self.color[u].is_none() || self.color[v].is_none();
                if touches_free && w as i64 >= self.target {
                    return Some((u, v));
                }
            }
        }
        None
    }

    fn uncolored_edge_weight(&self) -> Weight {
        let mut total = 0;
        for u in self.vertices().filter(|&u| self.color[u].is_none()) {
            for (&v, &w) in &self.adj[u] {
                if u < v && self.color[v].is_none() {
                    total += w;
                }
            }
        }
        total
    }

    /// Coloring of surviving uncolored vertices: all 1 except `overrides`.
    fn assignment(&self, overrides: &[(Vertex, Color)]) -> Vec<(Vertex, Color)> {
        let mut out: Vec<(Vertex, Color)> =
            self.vertices().filter(|&v| self.color[v].is_none()).map(|v| (v, 1)).collect();
        for &(v, c) in overrides {
            if let Some(slot) = out.iter_mut().find(|(x, _)| *x == v) {
                slot.1 = c;
            }
        }
        out
    }

    pub fn into_reduction(self, original: &Instance) -> Reduction {
        let vertex_map: Vec<Vertex> = self.vertices().collect();
        let index: BTreeMap<Vertex, usize> = vertex_map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for &u in &vertex_map {
            for (&v, &w) in &self.adj[u] {
                if u < v {
                    edges.push((index[&u], index[&v]));
                    weights.push(w);
                }
            }
        }
        let weighted = self.weighted || weights.iter().any(|&w| w != 1);
        let variant = Variant { problem: Problem::Mhe, weighted };
        let pre = vertex_map.iter().map(|&v| self.color[v]).collect();
        let g = Graph::from_edges_unchecked(vertex_map.len(), edges);
        let kernel = Instance::new(g, variant, self.k, pre)
            .with_edge_weights(weights)
            .with_target((self.target > 0).then_some(self.target as u64));
        debug_assert_eq!(original.k, kernel.k);
        Reduction { kernel, vertex_map, remaining_target: self.target, trace: self.trace }
    }
}

fn decided_yes(state: &KernelState, original: &Instance, overrides: &[(Vertex, Color)]) -> KernelOutcome {
    let witness = state.trace.lift(original, &state.assignment(overrides));
    KernelOutcome::Decided { answer: Answer::Yes, witness: Some(witness) }
}

/// Decides `optimum ≥ target` or shrinks the instance to at most
/// `k + target` vertices.
pub fn kernelize(inst: &Instance, target: u64) -> Result<KernelOutcome> {
    if target == 0 {
        return Err(Error::Contract("kernelization needs a target ℓ ≥ 1".into()));
    }
    let mut state = KernelState::new(inst)?;
    state.target = target as i64;
    loop {
        let mut changed = state.rule_isolated();
        changed |= state.rule_colored_edge();
        changed |= state.rule_contract_classes()?;
        if let Some((u, v)) = state.heavy_edge() {
            let overrides = match (state.color[u], state.color[v]) {
                (Some(c), None) => vec![(v, c)],
                (None, Some(c)) => vec![(u, c)],
                _ => vec![(u, 1), (v, 1)],
            };
            return Ok(decided_yes(&state, inst, &overrides));
        }
        changed |= state.eliminate_tree_components()?;
        if state.uncolored_edge_weight() as i64 >= state.target || state.target <= 0 {
            return Ok(decided_yes(&state, inst, &[]));
        }
        if !changed {
            break;
        }
    }
    if state.edge_count() == 0 {
        return Ok(KernelOutcome::Decided { answer: Answer::No, witness: None });
    }
    if state.vertex_count() as i64 > inst.k as i64 + state.target {
        return Ok(KernelOutcome::Decided { answer: Answer::Yes, witness: None });
    }
    Ok(KernelOutcome::Reduced(state.into_reduction(inst)))
}

/// Optimum-preserving reduction without decision shortcuts.
pub fn reduce(inst: &Instance) -> Result<Reduction> {
    let mut state = KernelState::new(inst)?;
    state.reduce_to_fixpoint()?;
    Ok(state.into_reduction(inst))
}

/// Reduces, solves the kernel exactly and lifts the coloring back.
pub fn solve_kernel_exact(inst: &Instance) -> Result<Solution> {
    let red = reduce(inst)?;
    let kernel_sol = partition::solve_exact(&red.kernel)?;
    let coloring = red.lift(inst, &kernel_sol.coloring);
    let sol = Solution::evaluated(inst, coloring, ALGORITHM)?;
    debug_assert_eq!(sol.happy_weight, kernel_sol.happy_weight + red.trace.total_decrement());
    Ok(sol)
}

fn apply_one(inst: &Instance, rule: impl FnOnce(&mut KernelState) -> Result<bool>) -> Result<Reduction> {
    let mut state = KernelState::new(inst)?;
    rule(&mut state)?;
    Ok(state.into_reduction(inst))
}

/// Rule 1 alone.
pub fn rule_isolated(inst: &Instance) -> Result<Reduction> {
    apply_one(inst, |s| Ok(s.rule_isolated()))
}

/// Rule 2 alone.
pub fn rule_colored_edge(inst: &Instance) -> Result<Reduction> {
    apply_one(inst, |s| Ok(s.rule_colored_edge()))
}

/// Rule 3 alone.
pub fn rule_contract_classes(inst: &Instance) -> Result<Reduction> {
    apply_one(inst, |s| s.rule_contract_classes())
}
