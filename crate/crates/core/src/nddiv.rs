//! Solvers parameterized by neighborhood diversity.
//!
//! Vertices `u` and `v` share a type when `N(u) \ {v} = N(v) \ {u}`. Some
//! optimum colors every uncolored type class with a single color, so each
//! class collapses to one vertex and the reduced instance goes to the
//! exact partition solver.
//!
//! For weighted MHE the relation also compares edge weights:
//! `w(u, x) = w(v, x)` for every `x` outside `{u, v}`. With unit weights this
//! is the plain relation.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::model::{ensure_valid, Color, Graph, Instance, Problem, Solution, Variant, Vertex, Weight};
use crate::partition;

pub const ALGORITHM: &str = "nd";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Clique,
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    /// Sorted members.
    pub vertices: Vec<Vertex>,
    /// Kind of the unsplit type class; singletons count as independent.
    pub kind: ClassKind,
    pub precolored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypePartition {
    /// Neighborhood diversity: number of classes before splitting.
    pub t: usize,
    /// Classes after splitting off precolored vertices, ordered by their
    /// minimum vertex.
    pub classes: Vec<TypeClass>,
}

impl TypePartition {
    pub fn uncolored_classes(&self) -> usize {
        self.classes.iter().filter(|c| !c.precolored).count()
    }
}

/// Per-vertex weighted neighborhood `x -> w(v, x)`.
type Profile = BTreeMap<Vertex, Weight>;

fn profiles(g: &Graph, weights: Option<&[Weight]>) -> Vec<Profile> {
    (0..g.n())
        .map(|v| g.incident(v).iter().map(|&(u, e)| (u, weights.map_or(1, |w| w[e]))).collect())
        .collect()
}

fn same_except(a: &Profile, b: &Profile, u: Vertex, v: Vertex) -> bool {
    fn strip(p: &Profile, x: Vertex) -> impl Iterator<Item = (&Vertex, &Weight)> {
        p.iter().filter(move |(&y, _)| y != x)
    }
    strip(a, v).eq(strip(b, u))
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

fn partition_with(g: &Graph, precoloring: &[Option<Color>], weights: Option<&[Weight]>) -> TypePartition {
    let n = g.n();
    let prof = profiles(g, weights);
    let mut parent: Vec<usize> = (0..n).collect();
    // equal open neighborhoods
    let mut by_open: BTreeMap<&Profile, Vertex> = BTreeMap::new();
    for v in 0..n {
        match by_open.get(&prof[v]) {
            Some(&u) => union(&mut parent, u, v),
            None => {
                by_open.insert(&prof[v], v);
            }
        }
    }
    // adjacent pairs with equal closed neighborhoods
    for &(u, v) in g.edges() {
        if same_except(&prof[u], &prof[v], u, v) {
            union(&mut parent, u, v);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for v in 0..n {
        groups.entry(find(&mut parent, v)).or_default().push(v);
    }
    let t = groups.len();
    let mut classes = Vec::new();
    for members in groups.into_values() {
        let kind = if members.len() > 1 && g.has_edge(members[0], members[1]) {
            ClassKind::Clique
        } else {
            ClassKind::Independent
        };
        let (pre, free): (Vec<Vertex>, Vec<Vertex>) = members.iter().partition(|&&v| precoloring[v].is_some());
        for (vertices, precolored) in [(free, false), (pre, true)] {
            if !vertices.is_empty() {
                classes.push(TypeClass { vertices, kind, precolored });
            }
        }
    }
    classes.sort_by_key(|c| c.vertices[0]);
    TypePartition { t, classes }
}

/// Coarsest type partition of `g`, split by precoloring status.
pub fn type_partition(g: &Graph, precoloring: &[Option<Color>]) -> TypePartition {
    partition_with(g, precoloring, None)
}

/// Type partition used for `inst`: weight-aware for weighted MHE.
pub fn instance_type_partition(inst: &Instance) -> TypePartition {
    let weights = (inst.problem() == Problem::Mhe).then_some(inst.edge_weights.as_slice());
    partition_with(&inst.graph, &inst.precoloring, weights)
}

/// A reduced instance and the map from original vertices to its vertices.
#[derive(Debug, Clone)]
pub struct NdReduction {
    pub reduced: Instance,
    pub group_of: Vec<Vertex>,
    /// Happy weight fixed by the merge (MHE only).
    pub constant: Weight,
}

impl NdReduction {
    pub fn lift(&self, original: &Instance, coloring: &[Color]) -> Vec<Color> {
        (0..original.n()).map(|v| original.precoloring[v].unwrap_or(coloring[self.group_of[v]])).collect()
    }
}

/// Merges uncolored classes and same-colored precolored class members.
fn merge_groups(inst: &Instance, tp: &TypePartition) -> (Vec<Vertex>, Vec<Option<Color>>) {
    let mut group_of = vec![usize::MAX; inst.n()];
    let mut pre = Vec::new();
    for class in &tp.classes {
        let mut by_color: BTreeMap<Option<Color>, Vertex> = BTreeMap::new();
        for &v in &class.vertices {
            let c = inst.precoloring[v];
            let next = pre.len();
            let id = *by_color.entry(c).or_insert_with(|| {
                pre.push(c);
                next
            });
            group_of[v] = id;
        }
    }
    (group_of, pre)
}

fn merged_edges(inst: &Instance, group_of: &[Vertex]) -> (BTreeMap<(Vertex, Vertex), Weight>, Weight) {
    let mut edges = BTreeMap::new();
    let mut internal = 0;
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        let (a, b) = (group_of[u], group_of[v]);
        if a == b {
            internal += inst.edge_weights[e];
        } else {
            *edges.entry((a.min(b), a.max(b))).or_insert(0) += inst.edge_weights[e];
        }
    }
    (edges, internal)
}

/// MHE: class-merged weighted instance plus the weight of merged-away
/// edges, all of which end up happy.
pub fn nd_reduce_mhe(inst: &Instance, tp: &TypePartition) -> Result<NdReduction> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhe, "neighborhood-diversity MHE reduction")?;
    let (group_of, pre) = merge_groups(inst, tp);
    let (edges, constant) = merged_edges(inst, &group_of);
    let weights = edges.values().copied().collect();
    let g = Graph::from_edges_unchecked(pre.len(), edges.into_keys().collect());
    let reduced = Instance::new(g, Variant::WMHE, inst.k, pre).with_edge_weights(weights);
    Ok(NdReduction { reduced, group_of, constant })
}

/// MHV: class-merged instance whose vertex weights sum the merged ones.
pub fn nd_reduce_mhv(inst: &Instance, tp: &TypePartition) -> Result<NdReduction> {
    ensure_valid(inst)?;
    inst.ensure_problem(Problem::Mhv, "neighborhood-diversity MHV reduction")?;
    let (group_of, pre) = merge_groups(inst, tp);
    let (edges, _) = merged_edges(inst, &group_of);
    let mut weights = vec![0; pre.len()];
    for v in 0..inst.n() {
        weights[group_of[v]] += inst.vertex_weights[v];
    }
    let g = Graph::from_edges_unchecked(pre.len(), edges.into_keys().collect());
    let reduced = Instance::new(g, Variant::WMHV, inst.k, pre).with_vertex_weights(weights);
    Ok(NdReduction { reduced, group_of, constant: 0 })
}

/// Reduce by type classes, solve exactly, lift.
pub fn solve_nd(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    let tp = instance_type_partition(inst);
    let red = match inst.problem() {
        Problem::Mhe => nd_reduce_mhe(inst, &tp)?,
        Problem::Mhv => nd_reduce_mhv(inst, &tp)?,
    };
    let inner = partition::solve_exact(&red.reduced)?;
    let sol = Solution::evaluated(inst, red.lift(inst, &inner.coloring), ALGORITHM)?;
    debug_assert_eq!(sol.happy_weight, inner.happy_weight + red.constant);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::evaluate_objective;
    use crate::oracle::solve_brute;
    use rand::{Rng, SeedableRng};

    fn same_type(g: &Graph, u: Vertex, v: Vertex) -> bool {
        let open = |a: Vertex, b: Vertex| {
            let mut s: Vec<Vertex> = g.neighbors(a).filter(|&x| x != b).collect();
            s.sort_unstable();
            s
        };
        open(u, v) == open(v, u)
    }

    fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
        // twins are rare in G(n, p); copy neighborhoods to plant some
        let p = rng.gen_range(0.2..0.8);
        let mut adj = vec![vec![false; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let e = rng.gen_bool(p);
                adj[u][v] = e;
                adj[v][u] = e;
            }
        }
        for _ in 0..rng.gen_range(0..=n) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b {
                continue;
            }
            for x in 0..n {
                if x != a && x != b {
                    adj[b][x] = adj[a][x];
                    adj[x][b] = adj[a][x];
                }
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if adj[u][v] {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).unwrap()
    }

    fn random_instance(rng: &mut impl Rng, variant: Variant) -> Instance {
        let n = rng.gen_range(1..=10);
        let k = rng.gen_range(1..=4);
        let g = random_graph(rng, n);
        let pre = (0..n).map(|_| rng.gen_bool(0.3).then(|| rng.gen_range(1..=k))).collect();
        let m = g.m();
        let inst = Instance::new(g, variant, k, pre);
        match (variant.weighted, variant.problem) {
            (false, _) => inst,
            // few distinct weights so weighted twins still occur
            (true, Problem::Mhe) => inst.with_edge_weights((0..m).map(|_| rng.gen_range(1..=2)).collect()),
            (true, Problem::Mhv) => inst.with_vertex_weights((0..n).map(|_| rng.gen_range(1..=5)).collect()),
        }
    }

    #[test]
    fn partition_is_valid_and_coarsest() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let g = random_graph(&mut rng, n);
            let tp = type_partition(&g, &vec![None; n]);
            assert_eq!(tp.t, tp.classes.len());
            let mut class_of = vec![0; n];
            for (i, c) in tp.classes.iter().enumerate() {
                for &v in &c.vertices {
                    class_of[v] = i;
                }
                let inner = c.vertices.iter().enumerate().flat_map(|(i, &a)| c.vertices[i + 1..].iter().map(move |&b| (a, b)));
                for (a, b) in inner {
                    assert_eq!(g.has_edge(a, b), c.kind == ClassKind::Clique);
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    assert_eq!(class_of[u] == class_of[v], same_type(&g, u, v), "{u} {v} {g:?}");
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let k5 = Graph::complete(5);
        let tp = type_partition(&k5, &[None; 5]);
        assert_eq!(tp.t, 1);
        assert_eq!(tp.classes[0].kind, ClassKind::Clique);

        let star = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let tp = type_partition(&star, &[None; 4]);
        assert_eq!(tp.t, 2);
        assert_eq!(tp.classes[1].vertices, vec![1, 2, 3]);
        assert_eq!(tp.classes[1].kind, ClassKind::Independent);

        let path = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(type_partition(&path, &[None; 4]).t, 4);

        let split = type_partition(&star, &[None, Some(1), None, None]);
        assert_eq!(split.t, 2);
        assert_eq!(split.classes.len(), 3);
    }

    #[test]
    fn complete_graph_reduction() {
        for n in 2..=6 {
            let mut pre = vec![None; n];
            pre[0] = Some(1);
            let inst = Instance::new(Graph::complete(n), Variant::MHE, 3, pre.clone());
            let red = nd_reduce_mhe(&inst, &instance_type_partition(&inst)).unwrap();
            assert_eq!(red.reduced.n(), 2);
            assert_eq!(red.reduced.edge_weights, vec![n as Weight - 1]);
            assert_eq!(red.constant, ((n - 1) * (n - 2) / 2) as Weight);
            assert_eq!(solve_nd(&inst).unwrap().happy_weight, solve_brute(&inst).unwrap().happy_weight);

            let mhv = Instance::new(Graph::complete(n), Variant::MHV, 3, pre);
            let red = nd_reduce_mhv(&mhv, &instance_type_partition(&mhv)).unwrap();
            assert_eq!(red.reduced.n(), 2);
            assert_eq!(solve_nd(&mhv).unwrap().happy_weight, n as Weight);
        }
    }

    #[test]
    fn star_leaves_merge() {
        let inst = Instance::new(
            Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
            Variant::MHE,
            2,
            vec![Some(1), None, None, None],
        );
        let red = nd_reduce_mhe(&inst, &instance_type_partition(&inst)).unwrap();
        assert_eq!(red.reduced.n(), 2);
        assert_eq!(red.reduced.edge_weights, vec![3]);
        assert_eq!(red.constant, 0);
    }

    #[test]
    fn disjoint_cliques_go_monochromatic() {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        let mut pre = vec![None; 8];
        pre[0] = Some(1);
        pre[5] = Some(2);
        let inst = Instance::new(Graph::new(8, edges).unwrap(), Variant::MHV, 2, pre);
        let sol = solve_nd(&inst).unwrap();
        assert_eq!(sol.happy_weight, 8);
        assert!(sol.coloring[..4].iter().all(|&c| c == 1));
        assert!(sol.coloring[4..].iter().all(|&c| c == 2));
    }

    #[test]
    fn matches_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for variant in [Variant::MHE, Variant::MHV, Variant::WMHE, Variant::WMHV] {
            for _ in 0..150 {
                let inst = random_instance(&mut rng, variant);
                assert_eq!(solve_nd(&inst).unwrap().happy_weight, solve_brute(&inst).unwrap().happy_weight, "{inst:?}");
            }
        }
    }

    /// Best coloring where every uncolored class takes a single color.
    fn best_class_monochromatic(inst: &Instance, tp: &TypePartition) -> Weight {
        let free: Vec<&TypeClass> = tp.classes.iter().filter(|c| !c.precolored).collect();
        let k = inst.k as usize;
        let mut best = 0;
        for code in 0..k.pow(free.len() as u32) {
            let mut coloring = inst.complete_with(1);
            let mut rest = code;
            for class in &free {
                for &v in &class.vertices {
                    coloring[v] = (rest % k) as Color + 1;
                }
                rest /= k;
            }
            best = best.max(evaluate_objective(inst, &coloring).unwrap());
        }
        best
    }

    #[test]
    fn some_optimum_is_class_monochromatic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for variant in [Variant::MHE, Variant::MHV, Variant::WMHE, Variant::WMHV] {
            for _ in 0..100 {
                let inst = random_instance(&mut rng, variant);
                let tp = instance_type_partition(&inst);
                assert_eq!(best_class_monochromatic(&inst, &tp), solve_brute(&inst).unwrap().happy_weight);
            }
        }
    }

    #[test]
    fn unweighted_type_relation_breaks_weighted_mhe() {
        // 1 and 2 are twins as plain graph vertices but not once weighted
        let inst = Instance::new(
            Graph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
            Variant::WMHE,
            2,
            vec![Some(1), None, None, Some(2)],
        )
        .with_edge_weights(vec![5, 1, 1, 5]);
        let plain = type_partition(&inst.graph, &inst.precoloring);
        let weighted = instance_type_partition(&inst);
        assert!(best_class_monochromatic(&inst, &plain) < solve_brute(&inst).unwrap().happy_weight);
        assert_eq!(best_class_monochromatic(&inst, &weighted), 10);
        assert_eq!(solve_nd(&inst).unwrap().happy_weight, 10);
    }
}
