//! Blocking-flow max-flow with a min-cut certificate.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type Capacity = u64;
/// Stands in for an uncuttable arc.
pub const INFINITE: Capacity = u64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: Capacity,
    /// Index of the reverse arc in `arcs`.
    rev: usize,
    original: Capacity,
}

#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    graph: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

/// Result of [`FlowNetwork::max_flow`]. `cut` lists `(from, to, capacity)`
/// for every arc leaving the source side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Capacity,
    pub cut: Vec<(usize, usize, Capacity)>,
    pub source_side: Vec<bool>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { graph: vec![Vec::new(); nodes], arcs: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.graph.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.graph.push(Vec::new());
        self.graph.len() - 1
    }

    /// Adds the arc `from -> to` and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: Capacity) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, rev: id + 1, original: cap });
        self.arcs.push(Arc { to: from, cap: 0, rev: id, original: 0 });
        self.graph[from].push(id);
        self.graph[to].push(id + 1);
        id
    }

    /// Arcs as `(from, to, capacity)`, reverse residual arcs excluded.
    pub fn arcs(&self) -> Vec<(usize, usize, Capacity)> {
        self.arcs
            .chunks(2)
            .map(|pair| (pair[1].to, pair[0].to, pair[0].original))
            .collect()
    }

    /// Runs Dinic's algorithm from `s` to `t` on a copy of the capacities.
    pub fn max_flow(&self, s: usize, t: usize) -> Result<MaxFlow> {
        let n = self.graph.len();
        if s >= n || t >= n {
            return Err(Error::Contract(format!("flow terminal out of range (network has {n} nodes)")));
        }
        if s == t {
            return Err(Error::Contract("flow source and sink coincide".into()));
        }
        let mut arcs = self.arcs.clone();
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        let mut value: Capacity = 0;
        loop {
            bfs_levels(&self.graph, &arcs, s, &mut level);
            if level[t] == usize::MAX {
                break;
            }
            next.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = augment(&self.graph, &mut arcs, &level, &mut next, s, t, Capacity::MAX);
                if pushed == 0 {
                    break;
                }
                value = value.saturating_add(pushed);
            }
        }
        bfs_levels(&self.graph, &arcs, s, &mut level);
        let source_side: Vec<bool> = level.iter().map(|&l| l != usize::MAX).collect();
        let mut cut = Vec::new();
        for pair in self.arcs.chunks(2) {
            let (from, to) = (pair[1].to, pair[0].to);
            if source_side[from] && !source_side[to] && pair[0].original > 0 {
                cut.push((from, to, pair[0].original));
            }
        }
        Ok(MaxFlow { value, cut, source_side })
    }
}

fn bfs_levels(graph: &[Vec<usize>], arcs: &[Arc], s: usize, level: &mut [usize]) {
    level.iter_mut().for_each(|l| *l = usize::MAX);
    level[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &a in &graph[u] {
            let arc = &arcs[a];
            if arc.cap > 0 && level[arc.to] == usize::MAX {
                level[arc.to] = level[u] + 1;
                queue.push_back(arc.to);
            }
        }
    }
}

/// One augmenting path in the level graph, iterative to keep the stack
/// flat on long paths.
fn augment(
    graph: &[Vec<usize>],
    arcs: &mut [Arc],
    level: &[usize],
    next: &mut [usize],
    s: usize,
    t: usize,
    limit: Capacity,
) -> Capacity {
    let mut path: Vec<usize> = Vec::new();
    let mut u = s;
    loop {
        if u == t {
            let pushed = path.iter().map(|&a| arcs[a].cap).min().unwrap_or(limit).min(limit);
            for &a in &path {
                arcs[a].cap -= pushed;
                let r = arcs[a].rev;
                arcs[r].cap += pushed;
            }
            return pushed;
        }
        let mut advanced = false;
        while next[u] < graph[u].len() {
            let a = graph[u][next[u]];
            let arc = &arcs[a];
            if arc.cap > 0 && level[arc.to] == level[u] + 1 {
                path.push(a);
                u = arc.to;
                advanced = true;
                break;
            }
            next[u] += 1;
        }
        if !advanced {
            // dead end: retreat and skip the arc that led here
            match path.pop() {
                None => return 0,
                Some(a) => {
                    let prev = arcs[arcs[a].rev].to;
                    next[prev] += 1;
                    u = prev;
                }
            }
        }
    }
}
