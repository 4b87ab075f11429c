//! Exhaustive solver over every extension of the precoloring.
//!
//! Colorings are enumerated depth-first with uncolored vertices in index
//! order and colors ascending, which is lexicographic order on the coloring
//! vector. Only a strictly better objective replaces the incumbent, so the
//! returned optimum is the lexicographically smallest one.

use crate::error::{Error, Result};
use crate::limits;
use crate::model::{ensure_valid, Color, Instance, Problem, Solution, Vertex, Weight};

pub const ALGORITHM: &str = "brute";

/// `k^n'`, saturating.
pub fn search_space(inst: &Instance) -> u64 {
    let mut total: u64 = 1;
    for _ in 0..inst.uncolored_count() {
        total = total.saturating_mul(inst.k as u64);
    }
    total
}

pub fn solve_brute(inst: &Instance) -> Result<Solution> {
    solve_brute_capped(inst, limits::brute_cap())
}

pub fn solve_brute_capped(inst: &Instance, cap: u64) -> Result<Solution> {
    ensure_valid(inst)?;
    let space = search_space(inst);
    if space > cap {
        return Err(Error::CapExceeded(format!(
            "brute force needs k^n' = {}^{} = {} colorings, cap is {}",
            inst.k,
            inst.uncolored_count(),
            if space == u64::MAX { "overflow".to_string() } else { space.to_string() },
            cap
        )));
    }
    let mut search = Search::new(inst);
    search.run();
    Ok(Solution {
        coloring: search.best_coloring,
        happy_weight: search.best,
        algorithm: ALGORITHM.to_string(),
    })
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<Vertex>,
    /// MHE: edges `(other, weight)` whose later endpoint is `order[j]`.
    closing_edges: Vec<Vec<(Vertex, Weight)>>,
    /// MHV: vertices whose closed neighborhood is fully colored once
    /// `order[j]` is assigned.
    closing_vertices: Vec<Vec<Vertex>>,
    coloring: Vec<Color>,
    base: Weight,
    best: Weight,
    best_coloring: Vec<Color>,
    found: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance) -> Self {
        let g = &inst.graph;
        let order = inst.uncolored();
        let mut pos = vec![None; g.n()];
        for (j, &v) in order.iter().enumerate() {
            pos[v] = Some(j);
        }
        let coloring: Vec<Color> = inst.complete_with(1);
        let mut closing_edges = vec![Vec::new(); order.len()];
        let mut closing_vertices = vec![Vec::new(); order.len()];
        let mut base = 0;
        match inst.problem() {
            Problem::Mhe => {
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    let w = inst.edge_weights[e];
                    match (pos[u], pos[v]) {
                        (None, None) => {
                            if coloring[u] == coloring[v] {
                                base += w;
                            }
                        }
                        (Some(a), None) => closing_edges[a].push((v, w)),
                        (None, Some(b)) => closing_edges[b].push((u, w)),
                        (Some(a), Some(b)) => {
                            if a > b {
                                closing_edges[a].push((v, w));
                            } else {
                                closing_edges[b].push((u, w));
                            }
                        }
                    }
                }
            }
            Problem::Mhv => {
                for v in 0..g.n() {
                    let last = std::iter::once(v).chain(g.neighbors(v)).filter_map(|x| pos[x]).max();
                    match last {
                        Some(j) => closing_vertices[j].push(v),
                        None => {
                            if g.neighbors(v).all(|u| coloring[u] == coloring[v]) {
                                base += inst.vertex_weights[v];
                            }
                        }
                    }
                }
            }
        }
        let best_coloring = coloring.clone();
        Search {
            inst,
            order,
            closing_edges,
            closing_vertices,
            coloring,
            base,
            best: 0,
            best_coloring,
            found: false,
        }
    }

    fn run(&mut self) {
        let base = self.base;
        self.descend(0, base);
    }

    fn descend(&mut self, j: usize, acc: Weight) {
        if j == self.order.len() {
            if !self.found || acc > self.best {
                self.found = true;
                self.best = acc;
                self.best_coloring.clone_from(&self.coloring);
            }
            return;
        }
        let v = self.order[j];
        for c in 1..=self.inst.k {
            self.coloring[v] = c;
            let gain = self.gain(j, c);
            self.descend(j + 1, acc + gain);
        }
    }

    fn gain(&self, j: usize, c: Color) -> Weight {
        let g = &self.inst.graph;
        match self.inst.problem() {
            Problem::Mhe => self.closing_edges[j]
                .iter()
                .filter(|&&(u, _)| self.coloring[u] == c)
                .map(|&(_, w)| w)
                .sum(),
            Problem::Mhv => self.closing_vertices[j]
                .iter()
                .filter(|&&x| g.neighbors(x).all(|u| self.coloring[u] == self.coloring[x]))
                .map(|&x| self.inst.vertex_weights[x])
                .sum(),
        }
    }
}
