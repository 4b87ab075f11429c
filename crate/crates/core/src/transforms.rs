//! Instance transformations between the happy coloring problems, fast paths
//! for complete graphs, recognizers and seeded generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Color, Graph, Instance, Problem, Solution, Variant, Vertex, Weight};

pub const ALGORITHM_COMPLETE_MHV: &str = "complete-mhv";
pub const ALGORITHM_COMPLETE_MHE: &str = "complete-mhe";

/// Complete graph MHV: everything is happy when at most one color is
/// precolored, nothing otherwise.
pub fn solve_complete_mhv(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhv, "complete-graph MHV")?;
    if !inst.graph.is_complete() {
        return Err(Error::Contract("complete-graph MHV needs a complete graph".into()));
    }
    let used = inst.used_colors();
    let color = used.first().copied().unwrap_or(1);
    Solution::evaluated(inst, inst.complete_with(color), ALGORITHM_COMPLETE_MHV)
}

/// True when every precolored vertex is adjacent to every uncolored one.
pub fn precolored_dominates_uncolored(inst: &Instance) -> bool {
    let free = inst.uncolored();
    (0..inst.n())
        .filter(|&v| inst.precoloring[v].is_some())
        .all(|p| free.iter().all(|&u| inst.graph.has_edge(p, u)))
}

/// Unit-weight MHE when every precolored vertex sees every uncolored one:
/// give all uncolored vertices the most frequent precolor.
pub fn solve_complete_mhe(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "complete-graph MHE")?;
    if !inst.is_unit_weighted() {
        return Err(Error::Contract("complete-graph MHE needs unit edge weights".into()));
    }
    if !precolored_dominates_uncolored(inst) {
        return Err(Error::Contract(
            "complete-graph MHE needs every precolored vertex adjacent to every uncolored one".into(),
        ));
    }
    let mut count = vec![0usize; inst.k as usize + 1];
    for c in inst.precoloring.iter().flatten() {
        count[*c as usize] += 1;
    }
    // first color reaching the maximum
    let plurality = (1..=inst.k).max_by_key(|&c| (count[c as usize], std::cmp::Reverse(c))).unwrap_or(1);
    Solution::evaluated(inst, inst.complete_with(plurality), ALGORITHM_COMPLETE_MHE)
}

fn distinct_precolors(inst: &Instance) -> usize {
    inst.used_colors().len()
}

/// MHE to MHV on a split graph: a clique of vertex copies plus one
/// independent vertex per edge, adjacent to the copies of its endpoints.
/// Weighted input carries edge weights onto the edge vertices.
pub fn to_split_mhv(inst: &Instance) -> Result<Instance> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "split transform")?;
    if distinct_precolors(inst) < 2 {
        return Err(Error::Contract("split transform needs at least two distinct precolors".into()));
    }
    let n = inst.n();
    let m = inst.graph.m();
    let mut edges = Vec::with_capacity(n * (n.saturating_sub(1)) / 2 + 2 * m);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        edges.push((u, n + e));
        edges.push((v, n + e));
    }
    let mut pre = inst.precoloring.clone();
    pre.extend(std::iter::repeat_n(None, m));
    let variant = Variant { problem: Problem::Mhv, weighted: inst.variant.weighted };
    let mut weights = vec![1; n];
    weights.extend_from_slice(&inst.edge_weights);
    Ok(Instance::new(Graph::from_edges_unchecked(n + m, edges), variant, inst.k, pre).with_vertex_weights(weights))
}

/// MHE to MHV on a bipartite graph (k ≥ 3): the split construction without
/// the clique, each vertex copy guarded by a 4-cycle through three vertices
/// precolored 1, 2, 3, so no copy or guard can be happy.
pub fn to_bipartite_mhv(inst: &Instance) -> Result<Instance> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "bipartite transform")?;
    if inst.k < 3 {
        return Err(Error::Contract("bipartite transform needs k >= 3".into()));
    }
    let n = inst.n();
    let m = inst.graph.m();
    let mut edges = Vec::with_capacity(2 * m + 4 * n);
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        edges.push((u, n + e));
        edges.push((v, n + e));
    }
    let mut pre = inst.precoloring.clone();
    pre.extend(std::iter::repeat_n(None, m));
    let mut weights = vec![1; n];
    weights.extend_from_slice(&inst.edge_weights);
    for x in 0..n {
        let s = n + m + 3 * x;
        edges.extend_from_slice(&[(x, s), (s, s + 1), (s + 1, s + 2), (x, s + 2)]);
        pre.extend_from_slice(&[Some(1), Some(2), Some(3)]);
        weights.extend_from_slice(&[1, 1, 1]);
    }
    let total = n + m + 3 * n;
    let variant = Variant { problem: Problem::Mhv, weighted: inst.variant.weighted };
    Ok(Instance::new(Graph::from_edges_unchecked(total, edges), variant, inst.k, pre).with_vertex_weights(weights))
}

/// Replaces every edge by a path of length two through a new uncolored
/// vertex; both halves keep the edge weight.
pub fn subdivide_mhe(inst: &Instance) -> Result<Instance> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "subdivision")?;
    let n = inst.n();
    let m = inst.graph.m();
    let mut edges = Vec::with_capacity(2 * m);
    let mut weights = Vec::with_capacity(2 * m);
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        edges.push((u, n + e));
        edges.push((v, n + e));
        weights.extend_from_slice(&[inst.edge_weights[e]; 2]);
    }
    let mut pre = inst.precoloring.clone();
    pre.extend(std::iter::repeat_n(None, m));
    Ok(Instance::new(Graph::from_edges_unchecked(n + m, edges), inst.variant, inst.k, pre).with_edge_weights(weights))
}

/// Weight of former edges in [`to_weighted_complete`]: `C(n,2) - m + 1`.
pub fn complete_alpha(n: usize, m: usize) -> Weight {
    (n * n.saturating_sub(1) / 2 - m + 1) as Weight
}

/// Unit-weight MHE to weighted MHE on the complete graph: former edges
/// weigh `α`, former non-edges weigh 1, so `opt(G) = ⌊opt(G')/α⌋`.
pub fn to_weighted_complete(inst: &Instance) -> Result<Instance> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "complete transform")?;
    if !inst.is_unit_weighted() {
        return Err(Error::Contract("complete transform needs unit edge weights".into()));
    }
    let n = inst.n();
    let alpha = complete_alpha(n, inst.graph.m());
    let g = Graph::complete(n);
    let weights = g.edges().iter().map(|&(u, v)| if inst.graph.has_edge(u, v) { alpha } else { 1 }).collect();
    Ok(Instance::new(g, Variant::WMHE, inst.k, inst.precoloring.clone()).with_edge_weights(weights))
}

pub fn is_bipartite(g: &Graph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    for s in 0..g.n() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let here = side[v].unwrap();
            for u in g.neighbors(v) {
                match side[u] {
                    None => {
                        side[u] = Some(!here);
                        stack.push(u);
                    }
                    Some(x) if x == here => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Degree-sequence split test.
pub fn is_split(g: &Graph) -> bool {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let m = (1..=d.len()).filter(|&i| d[i - 1] + 1 >= i).max().unwrap_or(0);
    let head: usize = d[..m].iter().sum();
    let tail: usize = d[m..].iter().sum();
    head == m * m.saturating_sub(1) + tail
}

pub fn is_forest(g: &Graph) -> bool {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in g.edges() {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Gnp,
    RandomTree,
    RandomSplit,
    Planted,
}

impl Model {
    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "gnp" => Some(Model::Gnp),
            "random-tree" => Some(Model::RandomTree),
            "random-split" => Some(Model::RandomSplit),
            "planted" => Some(Model::Planted),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Gnp => "gnp",
            Model::RandomTree => "random-tree",
            Model::RandomSplit => "random-split",
            Model::Planted => "planted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    /// Edge probability (gnp, split attachments, planted within a class).
    pub p: f64,
    pub k: u32,
    pub precolor_fraction: f64,
    pub variant: Variant,
    /// Weights are drawn from `1..=max_weight` for weighted variants.
    pub max_weight: Weight,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 10, p: 0.3, k: 3, precolor_fraction: 0.3, variant: Variant::MHE, max_weight: 5 }
    }
}

impl GenParams {
    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Contract(format!("invalid generator parameters: {msg}")));
        if !(0.0..=1.0).contains(&self.p) {
            return bad("p must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.precolor_fraction) {
            return bad("precolor fraction must lie in [0, 1]");
        }
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.max_weight == 0 {
            return bad("max weight must be at least 1");
        }
        Ok(())
    }
}

/// Seeded instance; the same model, parameters and seed give the same
/// instance.
pub fn generate(model: Model, params: &GenParams, seed: u64) -> Result<Instance> {
    Ok(generate_with_plant(model, params, seed)?.0)
}

/// Like [`generate`], also returning the hidden coloring for `planted`.
pub fn generate_with_plant(model: Model, params: &GenParams, seed: u64) -> Result<(Instance, Option<Vec<Color>>)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let mut plant = None;
    let edges = match model {
        Model::Gnp => gnp_edges(&mut rng, n, |_, _| params.p),
        Model::RandomTree => (1..n).map(|v| (rng.gen_range(0..v), v)).collect(),
        Model::RandomSplit => {
            let clique = n.div_ceil(2);
            let mut edges = Vec::new();
            for u in 0..clique {
                for v in u + 1..clique {
                    edges.push((u, v));
                }
            }
            for v in clique..n {
                for u in 0..clique {
                    if rng.gen_bool(params.p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        Model::Planted => {
            let hidden: Vec<Color> = (0..n).map(|_| rng.gen_range(1..=params.k)).collect();
            let edges = gnp_edges(&mut rng, n, |u, v| if hidden[u] == hidden[v] { params.p } else { params.p / 4.0 });
            plant = Some(hidden);
            edges
        }
    };
    let m = edges.len();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let colored = (params.precolor_fraction * n as f64).round() as usize;
    let mut pre = vec![None; n];
    for &v in &order[..colored] {
        pre[v] = Some(match &plant {
            Some(hidden) => hidden[v],
            None => rng.gen_range(1..=params.k),
        });
    }
    let mut inst = Instance::new(Graph::new(n, edges)?, params.variant, params.k, pre);
    if params.variant.weighted {
        inst = match params.variant.problem {
            Problem::Mhe => inst.with_edge_weights((0..m).map(|_| rng.gen_range(1..=params.max_weight)).collect()),
            Problem::Mhv => inst.with_vertex_weights((0..n).map(|_| rng.gen_range(1..=params.max_weight)).collect()),
        };
    }
    Ok((inst, plant))
}

fn gnp_edges(rng: &mut ChaCha8Rng, n: usize, p: impl Fn(Vertex, Vertex) -> f64) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p(u, v)) {
                edges.push((u, v));
            }
        }
    }
    edges
}
