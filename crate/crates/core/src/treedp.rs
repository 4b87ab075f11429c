//! Linear-time Weighted k-MHE when the uncolored vertices induce a forest.
//!
//! For an uncolored vertex `v` and color `i`, `T_v[i]` is the best happy
//! weight over edges touching the subtree of `v` when `v` takes color `i`:
//!
//! ```text
//! T_v[i] = w(v, color-i precolored neighbors)
//!        + sum over children u of max(w(vu) + T_u[i], max_{j != i} T_u[j])
//! ```
//!
//! Each component is rooted at its lowest-index vertex and processed in an
//! explicit post-order.

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Color, Instance, Problem, Solution, Vertex, Weight};

pub const ALGORITHM: &str = "treedp";

/// Connected components of the uncolored-induced subgraph, and whether it
/// is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncoloredForest {
    pub is_forest: bool,
    /// Each component sorted ascending; components ordered by their minimum.
    pub components: Vec<Vec<Vertex>>,
}

pub fn uncolored_forest(inst: &Instance) -> UncoloredForest {
    let g = &inst.graph;
    let free = |v: Vertex| inst.precoloring[v].is_none();
    let mut seen = vec![false; g.n()];
    let mut components = Vec::new();
    let mut is_forest = true;
    for root in 0..g.n() {
        if !free(root) || seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut i = 0;
        let mut degree_sum = 0usize;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for u in g.neighbors(v).filter(|&u| free(u)) {
                degree_sum += 1;
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        // a connected component is a tree iff it has |V| - 1 edges
        if degree_sum / 2 != comp.len() - 1 {
            is_forest = false;
        }
        comp.sort_unstable();
        components.push(comp);
    }
    UncoloredForest { is_forest, components }
}

/// DP rows stored flat in DFS preorder, `row(v)[i - 1] = T_v[i]`; zero for
/// precolored vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDpTable {
    k: usize,
    /// Row index of each vertex; precolored vertices share the trailing zero row.
    slot: Vec<usize>,
    cells: Vec<Weight>,
    /// Tree parent among uncolored vertices, with the connecting edge weight.
    pub parent: Vec<Option<(Vertex, Weight)>>,
    pub roots: Vec<Vertex>,
    /// Post-order of all uncolored vertices, component by component.
    pub order: Vec<Vertex>,
}

impl TreeDpTable {
    pub fn row(&self, v: Vertex) -> &[Weight] {
        let r = self.slot[v];
        &self.cells[r * self.k..(r + 1) * self.k]
    }

    pub fn best(&self, v: Vertex) -> Weight {
        self.row(v).iter().copied().max().unwrap_or(0)
    }

    /// `max_{j != color} T_v[j]`, `None` when `k = 1`.
    pub fn best_excluding(&self, v: Vertex, color: Color) -> Option<Weight> {
        self.row(v)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j + 1 != color as usize)
            .map(|(_, &x)| x)
            .max()
    }

    /// Smallest color attaining `T_v[*]`, optionally excluding one color.
    fn argmax(&self, v: Vertex, exclude: Option<Color>) -> Color {
        let mut best: Option<(Weight, Color)> = None;
        for (j, &x) in self.row(v).iter().enumerate() {
            let c = j as Color + 1;
            if Some(c) == exclude {
                continue;
            }
            if best.is_none_or(|(b, _)| x > b) {
                best = Some((x, c));
            }
        }
        best.expect("at least one admissible color").1
    }
}

/// Happy weight of edges with both endpoints precolored.
pub fn precolored_happy_weight(inst: &Instance) -> Weight {
    inst.graph
        .edges()
        .iter()
        .zip(&inst.edge_weights)
        .filter(|(&(u, v), _)| match (inst.precoloring[u], inst.precoloring[v]) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
        .map(|(_, &w)| w)
        .sum()
}

/// Fills the DP rows for every uncolored component. Callers guarantee the
/// uncolored subgraph is a forest.
pub fn build_table(inst: &Instance, forest: &UncoloredForest) -> TreeDpTable {
    let g = &inst.graph;
    let k = inst.k as usize;
    let n = g.n();
    let free: usize = forest.components.iter().map(Vec::len).sum();
    let mut slot = vec![free; n];
    let mut cells = vec![0 as Weight; (free + 1) * k];
    let mut parent: Vec<Option<(Vertex, Weight)>> = vec![None; n];
    let mut roots = Vec::with_capacity(forest.components.len());
    let mut pre = Vec::with_capacity(free);
    let mut scratch: Vec<Weight> = Vec::with_capacity(k);

    for comp in &forest.components {
        let root = comp[0];
        roots.push(root);
        let first = pre.len();
        // iterative DFS; rows are laid out in preorder so a child sits near its parent
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            slot[v] = pre.len();
            pre.push(v);
            for &(u, e) in g.incident(v) {
                if inst.precoloring[u].is_none() && parent[v].map(|p| p.0) != Some(u) && u != root {
                    parent[u] = Some((v, inst.edge_weights[e]));
                    stack.push(u);
                }
            }
        }
        // reversed preorder finishes every child before its parent
        for &v in pre[first..].iter().rev() {
            let r = slot[v];
            for &(u, e) in g.incident(v) {
                if let Some(c) = inst.precoloring[u] {
                    cells[r * k + c as usize - 1] += inst.edge_weights[e];
                }
            }
            let Some((p, w)) = parent[v] else { continue };
            // best and second best child entries give max_{j != i} in O(1)
            let child = &cells[r * k..(r + 1) * k];
            let (mut top, mut arg, mut second) = (Weight::MIN, 0, None::<Weight>);
            for (j, &x) in child.iter().enumerate() {
                if x > top {
                    second = (j > 0).then_some(top);
                    (top, arg) = (x, j);
                } else {
                    second = Some(second.map_or(x, |s| s.max(x)));
                }
            }
            scratch.clear();
            scratch.extend((0..k).map(|i| {
                let same = w + child[i];
                let other = if i == arg { second } else { Some(top) };
                other.map_or(same, |o| same.max(o))
            }));
            let pr = slot[p];
            for (cell, &g) in cells[pr * k..(pr + 1) * k].iter_mut().zip(&scratch) {
                *cell += g;
            }
        }
    }
    let order = pre.into_iter().rev().collect();
    TreeDpTable { k, slot, cells, parent, roots, order }
}

/// Optimal value of a forest instance with a witness coloring.
pub fn solve_tree_mhe(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "solve_tree_mhe")?;
    let forest = uncolored_forest(inst);
    if !forest.is_forest {
        return Err(Error::Contract(
            "uncolored vertices contain a cycle; use an exact or decomposition-based solver".into(),
        ));
    }
    let table = build_table(inst, &forest);
    let coloring = backtrack(inst, &table);
    let value = precolored_happy_weight(inst) + table.roots.iter().map(|&r| table.best(r)).sum::<Weight>();
    let sol = Solution::evaluated(inst, coloring, ALGORITHM)?;
    debug_assert_eq!(sol.happy_weight, value);
    Ok(sol)
}

fn backtrack(inst: &Instance, table: &TreeDpTable) -> Vec<Color> {
    let mut coloring = inst.complete_with(1);
    for &r in &table.roots {
        coloring[r] = table.argmax(r, None);
    }
    // reversed post-order visits parents before children
    for &v in table.order.iter().rev() {
        if let Some((p, w)) = table.parent[v] {
            let pc = coloring[p];
            let same = w + table.row(v)[pc as usize - 1];
            coloring[v] = match table.best_excluding(v, pc) {
                Some(other) if other > same => table.argmax(v, Some(pc)),
                _ => pc,
            };
        }
    }
    coloring
}
