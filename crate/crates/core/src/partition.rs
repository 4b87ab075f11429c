//! Exact exponential solvers through Max Weighted Partition.
//!
//! Uncolored vertices form the ground set `N`; part `i` of a partition is
//! the set colored `i`, and `f_i` scores that part together with the
//! color-`i` precolored vertices. Two partition algorithms are provided: a
//! layered subset DP in `O(3^n d)` and a ranked zeta/Möbius transform over
//! value-indexed polynomials in `O(2^n n^2 d^2 M^2)`.

use crate::error::{Error, Result};
use crate::flow2::{mhe_two_sides, mhv_two_sides};
use crate::limits;
use crate::model::{ensure_valid, Color, Instance, Problem, Solution, Vertex, Weight};

pub const ALGORITHM_EXACT: &str = "exact";
pub const ALGORITHM_K3: &str = "k3-split";

pub type Mask = usize;

/// `d` set functions over the subsets of an `n`-element ground set, as
/// dense tables indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProblem {
    /// Element labels (uncolored vertices for reduced instances).
    pub ground: Vec<Vertex>,
    /// `values[i][mask] = f_{i+1}(mask)`.
    pub values: Vec<Vec<i64>>,
    /// `M`: every value lies in `[-M, M]`.
    pub bound: i64,
}

impl PartitionProblem {
    pub fn new(ground: Vec<Vertex>, values: Vec<Vec<i64>>) -> Self {
        let bound = values.iter().flatten().map(|v| v.abs()).max().unwrap_or(0);
        PartitionProblem { ground, values, bound }
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn parts(&self) -> usize {
        self.values.len()
    }

    fn full(&self) -> Mask {
        (1 << self.size()) - 1
    }

    /// Value of an explicit partition given as one mask per part.
    pub fn value_of(&self, parts: &[Mask]) -> i64 {
        parts.iter().zip(&self.values).map(|(&s, f)| f[s]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSolution {
    pub value: i64,
    /// One mask per part; pairwise disjoint, union is the ground set.
    pub parts: Vec<Mask>,
}

fn check_size(n: usize) -> Result<()> {
    let cap = limits::partition_cap();
    if n > cap {
        return Err(Error::CapExceeded(format!("{n} uncolored vertices exceed the partition cap of {cap}")));
    }
    Ok(())
}

/// In-place subset-sum (zeta) transform.
fn zeta_sum(table: &mut [i64], n: usize) {
    for b in 0..n {
        let bit = 1 << b;
        for mask in 0..table.len() {
            if mask & bit != 0 {
                table[mask] += table[mask ^ bit];
            }
        }
    }
}

/// Reduces an instance to Max Weighted Partition over its uncolored
/// vertices. The optimum partition value equals the instance optimum:
/// precolored happy weight is folded into the part of its color.
pub fn reduce_to_mwp(inst: &Instance) -> Result<PartitionProblem> {
    ensure_valid(inst)?;
    let g = &inst.graph;
    let ground = inst.uncolored();
    let n = ground.len();
    check_size(n)?;
    let mut bit = vec![0 as Mask; g.n()];
    for (j, &v) in ground.iter().enumerate() {
        bit[v] = 1 << j;
    }
    let size = 1usize << n;
    let mut values = Vec::with_capacity(inst.k as usize);
    for color in 1..=inst.k {
        let mut g_tab = vec![0i64; size];
        match inst.problem() {
            Problem::Mhe => {
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    let w = inst.edge_weights[e] as i64;
                    match (inst.precoloring[u], inst.precoloring[v]) {
                        (Some(a), Some(b)) => {
                            if a == color && b == color {
                                g_tab[0] += w;
                            }
                        }
                        (Some(a), None) | (None, Some(a)) => {
                            if a == color {
                                g_tab[bit[u] | bit[v]] += w;
                            }
                        }
                        (None, None) => g_tab[bit[u] | bit[v]] += w,
                    }
                }
            }
            Problem::Mhv => {
                for v in 0..g.n() {
                    if inst.precoloring[v].is_some_and(|c| c != color) {
                        continue;
                    }
                    let blocked = g.neighbors(v).any(|u| inst.precoloring[u].is_some_and(|c| c != color));
                    if blocked {
                        continue;
                    }
                    let key = g.neighbors(v).fold(bit[v], |acc, u| acc | bit[u]);
                    g_tab[key] += inst.vertex_weights[v] as i64;
                }
            }
        }
        zeta_sum(&mut g_tab, n);
        values.push(g_tab);
    }
    let mut p = PartitionProblem::new(ground, values);
    p.bound = inst.total_weight() as i64;
    Ok(p)
}

/// Layered subset DP: `g_j[S] = max_{T ⊆ S} g_{j-1}[S \ T] + f_j(T)`.
pub fn solve_mwp_3n(p: &PartitionProblem) -> Result<PartitionSolution> {
    check_size(p.size())?;
    let d = p.parts();
    if d == 0 {
        return Err(Error::Contract("partition problem needs at least one part".into()));
    }
    let full = p.full();
    let mut layers: Vec<Vec<i64>> = vec![p.values[0].clone()];
    for j in 1..d {
        let prev = &layers[j - 1];
        let f = &p.values[j];
        let layer = if j + 1 == d {
            // only the full set is needed from the last layer
            let mut out = vec![i64::MIN; full + 1];
            out[full] = best_split(prev, f, full);
            out
        } else {
            (0..=full).map(|s| best_split(prev, f, s)).collect()
        };
        layers.push(layer);
    }
    let value = layers[d - 1][full];
    Ok(PartitionSolution { value, parts: backtrack(p, &layers) })
}

#[inline]
fn best_split(prev: &[i64], f: &[i64], s: Mask) -> i64 {
    let mut best = prev[s] + f[0];
    let mut t = s;
    while t != 0 {
        let cand = prev[s ^ t] + f[t];
        if cand > best {
            best = cand;
        }
        t = (t - 1) & s;
    }
    best
}

/// Recovers parts from per-layer optima, taking the first submask in
/// descending enumeration order that attains each layer's value.
fn backtrack(p: &PartitionProblem, layers: &[Vec<i64>]) -> Vec<Mask> {
    let d = p.parts();
    let mut parts = vec![0; d];
    let mut s = p.full();
    for j in (1..d).rev() {
        let target = layers[j][s];
        let f = &p.values[j];
        let prev = &layers[j - 1];
        let mut t = s;
        loop {
            if prev[s ^ t] + f[t] == target {
                break;
            }
            assert!(t != 0, "layer table inconsistent with its recurrence");
            t = (t - 1) & s;
        }
        parts[j] = t;
        s ^= t;
    }
    parts[0] = s;
    parts
}

/// Estimated cost of [`solve_mwp_2n`] as `(cells, multiply-adds)`.
pub fn transform_cost(p: &PartitionProblem) -> (u64, u64) {
    let n = p.size() as u64;
    let d = p.parts() as u64;
    let v = p.values.iter().flatten().copied().max().unwrap_or(0).max(0) as u64 + 1;
    let subsets = 1u64.checked_shl(n as u32).unwrap_or(u64::MAX);
    let ranks = n + 1;
    let cells = subsets.saturating_mul(ranks).saturating_mul(d.saturating_mul(v)).saturating_mul(2);
    let mut ops: u64 = 0;
    for j in 1..=d {
        let deg = j.saturating_mul(v);
        let product = subsets.saturating_mul(ranks * ranks / 2 + 1).saturating_mul(deg).saturating_mul(v);
        let mobius = subsets.saturating_mul(ranks).saturating_mul(n.max(1)).saturating_mul(deg);
        ops = ops.saturating_add(product).saturating_add(mobius);
    }
    (cells, ops)
}

/// Max Weighted Partition by ranked zeta transforms of value-indexed
/// polynomials. Negative values are shifted up first; every partition uses
/// exactly one value per part, so the shift adds `d * shift` to all of them.
/// Coefficients are partition counts kept modulo `2^64`, which is exact
/// while `d^n < 2^64`.
pub fn solve_mwp_2n(p: &PartitionProblem) -> Result<PartitionSolution> {
    let shift = -p.values.iter().flatten().copied().min().unwrap_or(0).min(0);
    if shift == 0 {
        return solve_mwp_2n_nonnegative(p);
    }
    let values = p.values.iter().map(|f| f.iter().map(|&x| x + shift).collect()).collect();
    let shifted = PartitionProblem::new(p.ground.clone(), values);
    let mut sol = solve_mwp_2n_nonnegative(&shifted)?;
    sol.value -= shift * p.parts() as i64;
    Ok(sol)
}

fn solve_mwp_2n_nonnegative(p: &PartitionProblem) -> Result<PartitionSolution> {
    check_size(p.size())?;
    let n = p.size();
    let d = p.parts();
    if d == 0 {
        return Err(Error::Contract("partition problem needs at least one part".into()));
    }
    if (n as f64) * (d as f64).log2() >= 63.0 {
        return Err(Error::CapExceeded(format!("{d}^{n} partitions overflow the coefficient ring")));
    }
    let (cells, ops) = transform_cost(p);
    if cells > limits::DEFAULT_TRANSFORM_CELLS || ops > limits::DEFAULT_TRANSFORM_OPS {
        return Err(Error::CapExceeded(format!(
            "ranked transform needs ~{cells} cells and ~{ops} operations"
        )));
    }

    let vmax = p.values.iter().flatten().copied().max().unwrap_or(0) as usize;
    let full = p.full();
    let size = full + 1;
    let popcount: Vec<usize> = (0..size).map(|s| s.count_ones() as usize).collect();

    let mut best: Vec<Vec<i64>> = Vec::with_capacity(d);
    best.push(p.values[0].clone());
    if d > 1 {
        let mut acc = RankedPolys::lift(&p.values[0], n, vmax, &popcount);
        acc.zeta();
        for j in 1..d {
            let mut f = RankedPolys::lift(&p.values[j], n, vmax, &popcount);
            f.zeta();
            acc = acc.ranked_product(&f);
            let mut counts = acc.clone();
            counts.mobius();
            best.push((0..size).map(|s| counts.top_degree(popcount[s], s)).collect());
        }
    }
    let value = best[d - 1][full];
    Ok(PartitionSolution { value, parts: backtrack(p, &best) })
}

/// `data[((r * size) + s) * width + v]`: coefficient of `z^v` at rank `r`
/// and subset `s`.
#[derive(Clone)]
struct RankedPolys {
    n: usize,
    size: usize,
    width: usize,
    data: Vec<u64>,
}

impl RankedPolys {
    fn lift(f: &[i64], n: usize, vmax: usize, popcount: &[usize]) -> Self {
        let size = 1usize << n;
        let width = vmax + 1;
        let mut data = vec![0u64; (n + 1) * size * width];
        for s in 0..size {
            data[(popcount[s] * size + s) * width + f[s] as usize] = 1;
        }
        RankedPolys { n, size, width, data }
    }

    fn poly(&self, r: usize, s: usize) -> &[u64] {
        let at = (r * self.size + s) * self.width;
        &self.data[at..at + self.width]
    }

    fn transform(&mut self, sign: bool) {
        let w = self.width;
        for r in 0..=self.n {
            for b in 0..self.n {
                let bit = 1 << b;
                for s in 0..self.size {
                    if s & bit == 0 {
                        continue;
                    }
                    let dst = (r * self.size + s) * w;
                    let src = (r * self.size + (s ^ bit)) * w;
                    for v in 0..w {
                        let x = self.data[src + v];
                        let y = &mut self.data[dst + v];
                        *y = if sign { y.wrapping_sub(x) } else { y.wrapping_add(x) };
                    }
                }
            }
        }
    }

    fn zeta(&mut self) {
        self.transform(false);
    }

    fn mobius(&mut self) {
        self.transform(true);
    }

    /// Pointwise ranked product in the transformed domain.
    fn ranked_product(&self, other: &RankedPolys) -> RankedPolys {
        let width = self.width + other.width - 1;
        let mut out = RankedPolys { n: self.n, size: self.size, width, data: vec![0; (self.n + 1) * self.size * width] };
        for s in 0..self.size {
            for r1 in 0..=self.n {
                let a = self.poly(r1, s);
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for r2 in 0..=self.n - r1 {
                    let b = other.poly(r2, s);
                    let at = ((r1 + r2) * self.size + s) * width;
                    let dst = &mut out.data[at..at + width];
                    for (i, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (j, &y) in b.iter().enumerate() {
                            dst[i + j] = dst[i + j].wrapping_add(x.wrapping_mul(y));
                        }
                    }
                }
            }
        }
        out
    }

    fn top_degree(&self, r: usize, s: usize) -> i64 {
        self.poly(r, s).iter().rposition(|&c| c != 0).map_or(i64::MIN, |v| v as i64)
    }
}

fn coloring_from_parts(inst: &Instance, ground: &[Vertex], parts: &[Mask]) -> Vec<Color> {
    let mut coloring = inst.complete_with(1);
    for (i, &mask) in parts.iter().enumerate() {
        for (j, &v) in ground.iter().enumerate() {
            if mask >> j & 1 == 1 {
                coloring[v] = i as Color + 1;
            }
        }
    }
    coloring
}

/// Reduction plus the transform route, falling back to the layered DP when
/// the transform budget is exceeded.
pub fn solve_exact(inst: &Instance) -> Result<Solution> {
    let p = reduce_to_mwp(inst)?;
    let sol = match solve_mwp_2n(&p) {
        Ok(s) => s,
        Err(Error::CapExceeded(_)) => solve_mwp_3n(&p)?,
        Err(e) => return Err(e),
    };
    let coloring = coloring_from_parts(inst, &p.ground, &sol.parts);
    let out = Solution::evaluated(inst, coloring, ALGORITHM_EXACT)?;
    debug_assert_eq!(out.happy_weight as i64, sol.value);
    Ok(out)
}

/// Counters from [`solve_k3_split`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitStats {
    /// `(color, subset)` guesses evaluated.
    pub guesses: u64,
}

/// `3 * sum_{j <= floor(n'/3)} C(n', j)`.
pub fn k3_guess_bound(uncolored: usize) -> u64 {
    let mut sum: u64 = 0;
    let mut binom: u64 = 1;
    for j in 0..=uncolored / 3 {
        sum += binom;
        binom = binom * (uncolored - j) as u64 / (j + 1) as u64;
    }
    3 * sum
}

pub fn solve_k3_split(inst: &Instance) -> Result<Solution> {
    solve_k3_split_counted(inst).map(|(s, _)| s)
}

/// Guesses the smallest color class (at most `n'/3` vertices) and solves
/// the other two colors exactly with the two-color solvers.
pub fn solve_k3_split_counted(inst: &Instance) -> Result<(Solution, SplitStats)> {
    ensure_valid(inst)?;
    if inst.k != 3 {
        return Err(Error::Contract(format!("k3 split solver called with k = {}", inst.k)));
    }
    let free = inst.uncolored();
    let limit = free.len() / 3;
    let mut stats = SplitStats::default();
    let mut best: Option<(Weight, Vec<Color>)> = None;
    let mut chosen: Vec<usize> = Vec::with_capacity(limit);
    for color in 1..=3 {
        for size in 0..=limit {
            // combinations of `size` indices into `free`, lexicographic
            chosen.clear();
            chosen.extend(0..size);
            loop {
                stats.guesses += 1;
                let subset: Vec<Vertex> = chosen.iter().map(|&i| free[i]).collect();
                let (value, coloring) = evaluate_guess(inst, color, &subset);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, coloring));
                }
                if !next_combination(&mut chosen, free.len()) {
                    break;
                }
            }
        }
    }
    let (value, coloring) = best.expect("at least one guess");
    let sol = Solution::evaluated(inst, coloring, ALGORITHM_K3)?;
    debug_assert_eq!(sol.happy_weight, value);
    Ok((sol, stats))
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Fixes `subset` plus the color-`color` precolored vertices to `color`
/// and solves the rest with the two remaining colors.
fn evaluate_guess(inst: &Instance, color: Color, subset: &[Vertex]) -> (Weight, Vec<Color>) {
    let g = &inst.graph;
    let n = g.n();
    let mut fixed = vec![false; n];
    for v in 0..n {
        fixed[v] = inst.precoloring[v] == Some(color);
    }
    for &v in subset {
        fixed[v] = true;
    }
    let others: Vec<Color> = (1..=3).filter(|&c| c != color).collect();
    let keep: Vec<bool> = fixed.iter().map(|&f| !f).collect();
    let sub = g.induced(&keep);
    let sides: Vec<Option<bool>> =
        sub.old.iter().map(|&v| inst.precoloring[v].map(|c| c == others[0])).collect();

    let (inside, residual_value, residual_sides) = match inst.problem() {
        Problem::Mhe => {
            let inside: Weight = g
                .edges()
                .iter()
                .zip(&inst.edge_weights)
                .filter(|(&(u, v), _)| fixed[u] && fixed[v])
                .map(|(_, &w)| w)
                .sum();
            let weights: Vec<Weight> = sub.edge_origin.iter().map(|&e| inst.edge_weights[e]).collect();
            let (val, s) = mhe_two_sides(&sub.graph, &sides, &weights);
            (inside, val, s)
        }
        Problem::Mhv => {
            let inside: Weight = (0..n)
                .filter(|&v| fixed[v] && g.neighbors(v).all(|u| fixed[u]))
                .map(|v| inst.vertex_weights[v])
                .sum();
            // a vertex next to the fixed class can never be happy
            let weights: Vec<Weight> = sub
                .old
                .iter()
                .map(|&v| if g.neighbors(v).any(|u| fixed[u]) { 0 } else { inst.vertex_weights[v] })
                .collect();
            let (val, s) = mhv_two_sides(&sub.graph, &sides, &weights);
            (inside, val, s)
        }
    };
    let mut coloring = vec![color; n];
    for (i, &v) in sub.old.iter().enumerate() {
        coloring[v] = if residual_sides[i] { others[0] } else { others[1] };
    }
    (inside + residual_value, coloring)
}
