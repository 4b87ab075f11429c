//! Exact polynomial solvers for two colors.
//!
//! 2-MHE is a minimum s-t edge cut once each precolored class is merged
//! into a terminal. 2-MHV is a minimum vertex separator in the
//! distance-two graph: two happy vertices of different colors can be
//! neither adjacent nor share a neighbor, and a vertex happy in color `i`
//! stays clear of the closed neighborhood of the other precolored class.

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INFINITE};
use crate::model::{ensure_valid, Color, Graph, Instance, Problem, Solution, Vertex, Weight};

pub const ALGORITHM_MHE: &str = "flow2-mhe";
pub const ALGORITHM_MHV: &str = "flow2-mhv";

/// Side of a two-coloring: `true` is the first color.
type Side = bool;

fn two_color_sides(inst: &Instance) -> Result<Vec<Option<Side>>> {
    if inst.k != 2 {
        return Err(Error::Contract(format!("two-color solver called with k = {}", inst.k)));
    }
    Ok(inst.precoloring.iter().map(|c| c.map(|c| c == 1)).collect())
}

fn sides_to_colors(sides: &[Side]) -> Vec<Color> {
    sides.iter().map(|&s| if s { 1 } else { 2 }).collect()
}

pub fn solve_mhe_2(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "solve_mhe_2")?;
    let pre = two_color_sides(inst)?;
    let (_, sides) = mhe_two_sides(&inst.graph, &pre, &inst.edge_weights);
    Solution::evaluated(inst, sides_to_colors(&sides), ALGORITHM_MHE)
}

pub fn solve_mhv_2(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhv, "solve_mhv_2")?;
    let pre = two_color_sides(inst)?;
    let (_, sides) = mhv_two_sides(&inst.graph, &pre, &inst.vertex_weights);
    Solution::evaluated(inst, sides_to_colors(&sides), ALGORITHM_MHV)
}

/// Optimal two-sided edge coloring; returns `(happy weight, sides)`.
/// Weights may be zero.
pub(crate) fn mhe_two_sides(g: &Graph, pre: &[Option<Side>], weights: &[Weight]) -> (Weight, Vec<Side>) {
    let has_first = pre.contains(&Some(true));
    let has_second = pre.contains(&Some(false));
    if !(has_first && has_second) {
        let side = !has_second;
        let sides: Vec<Side> = pre.iter().map(|p| p.unwrap_or(side)).collect();
        return (mhe_value(g, &sides, weights), sides);
    }

    let (s, t) = (g.n(), g.n() + 1);
    let mut net = FlowNetwork::new(g.n() + 2);
    let mut total = 0;
    let mut fixed_unhappy = 0;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = weights[e];
        total += w;
        match (pre[u], pre[v]) {
            (Some(a), Some(b)) => {
                if a != b {
                    fixed_unhappy += w;
                }
            }
            (Some(a), None) | (None, Some(a)) => {
                let x = if pre[u].is_none() { u } else { v };
                if a {
                    net.add_arc(s, x, w);
                } else {
                    net.add_arc(x, t, w);
                }
            }
            (None, None) => {
                net.add_arc(u, v, w);
                net.add_arc(v, u, w);
            }
        }
    }
    let flow = net.max_flow(s, t).expect("terminals are distinct nodes");
    let sides: Vec<Side> = (0..g.n()).map(|v| pre[v].unwrap_or(flow.source_side[v])).collect();
    let value = total - fixed_unhappy - flow.value;
    debug_assert_eq!(value, mhe_value(g, &sides, weights));
    (value, sides)
}

fn mhe_value(g: &Graph, sides: &[Side], weights: &[Weight]) -> Weight {
    g.edges()
        .iter()
        .zip(weights)
        .filter(|(&(u, v), _)| sides[u] == sides[v])
        .map(|(_, &w)| w)
        .sum()
}

/// Vertices at distance one or two from each vertex.
pub(crate) fn distance_two_neighbors(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut mark = vec![usize::MAX; n];
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        mark[v] = v;
        let mut near = Vec::new();
        for u in g.neighbors(v) {
            if mark[u] != v {
                mark[u] = v;
                near.push(u);
            }
            for x in g.neighbors(u) {
                if mark[x] != v {
                    mark[x] = v;
                    near.push(x);
                }
            }
        }
        near.sort_unstable();
        out.push(near);
    }
    out
}

/// Optimal two-sided vertex coloring; returns `(happy weight, sides)`.
/// Weights may be zero.
pub(crate) fn mhv_two_sides(g: &Graph, pre: &[Option<Side>], weights: &[Weight]) -> (Weight, Vec<Side>) {
    let n = g.n();
    let mut near_first = vec![false; n];
    let mut near_second = vec![false; n];
    for v in 0..n {
        if let Some(side) = pre[v] {
            let target = if side { &mut near_first } else { &mut near_second };
            target[v] = true;
            for u in g.neighbors(v) {
                target[u] = true;
            }
        }
    }

    let h2 = distance_two_neighbors(g);
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for v in 0..n {
        net.add_arc(2 * v, 2 * v + 1, weights[v]);
        if near_first[v] {
            net.add_arc(s, 2 * v, INFINITE);
        }
        if near_second[v] {
            net.add_arc(2 * v + 1, t, INFINITE);
        }
        for &u in &h2[v] {
            net.add_arc(2 * v + 1, 2 * u, INFINITE);
        }
    }
    let flow = net.max_flow(s, t).expect("terminals are distinct nodes");
    let in_cut: Vec<bool> =
        (0..n).map(|v| flow.source_side[2 * v] && !flow.source_side[2 * v + 1]).collect();

    // components of the distance-two graph without the separator
    let mut class: Vec<Option<Side>> = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if in_cut[root] || seen[root] {
            continue;
        }
        let mut comp = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &u in &h2[v] {
                if !in_cut[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        let first = comp.iter().any(|&v| near_first[v]);
        let second = comp.iter().any(|&v| near_second[v]);
        debug_assert!(!(first && second), "separator leaves terminals connected");
        let side = !second;
        for v in comp {
            class[v] = Some(side);
        }
    }

    let mut color: Vec<Option<Side>> = vec![None; n];
    for v in 0..n {
        if let Some(side) = class[v] {
            color[v] = Some(side);
            for u in g.neighbors(v) {
                debug_assert!(color[u].is_none_or(|c| c == side));
                color[u] = Some(side);
            }
        }
    }
    let sides: Vec<Side> = (0..n).map(|v| pre[v].or(color[v]).unwrap_or(true)).collect();
    let value: Weight = (0..n)
        .filter(|&v| g.neighbors(v).all(|u| sides[u] == sides[v]))
        .map(|v| weights[v])
        .sum();
    debug_assert_eq!(value, weights.iter().sum::<Weight>() - flow.value);
    (value, sides)
}
