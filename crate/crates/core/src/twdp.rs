//! Weighted k-MHE and k-MHV by dynamic programming over a nice tree
//! decomposition.
//!
//! A table state colors every bag vertex. For MHV each bag vertex also
//! carries a bit that stays set while every neighbor introduced so far
//! (bag-resident or forgotten) has its color; the vertex is paid for when it
//! is forgotten with the bit still set.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::limits::{DEFAULT_TABLE_STATES, DEFAULT_TOTAL_STATES};
use crate::model::{ensure_valid, Color, Graph, Instance, Problem, Solution, Vertex, Weight};

pub const ALGORITHM: &str = "twdp";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Vertex count of the decomposed graph.
    pub n: usize,
    /// Sorted bags, one per tree node.
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf(Vertex),
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: Vec<Vertex>,
    pub kind: NiceKind,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; the root has an empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub n: usize,
    pub nodes: Vec<NiceNode>,
    pub root: Option<usize>,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.children.iter().map(move |&c| (i, c)))
            .collect();
        TreeDecomposition {
            n: self.n,
            bags: self.nodes.iter().map(|x| x.bag.clone()).collect(),
            edges,
            root: self.root.unwrap_or(0),
        }
    }

    /// Checks the four node shapes.
    pub fn verify_nice(&self) -> Result<()> {
        let bad = |i: usize, what: &str| Err(Error::Contract(format!("nice node {i}: {what}")));
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return bad(i, "child stored after parent");
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            match node.kind {
                NiceKind::Leaf(v) => {
                    if !node.children.is_empty() || node.bag != [v] {
                        return bad(i, "leaf must hold exactly its vertex");
                    }
                }
                NiceKind::Introduce(v) => {
                    let mut expect = child_bag(0).clone();
                    expect.push(v);
                    expect.sort_unstable();
                    if node.children.len() != 1 || child_bag(0).contains(&v) || expect != node.bag {
                        return bad(i, "introduce must add one vertex");
                    }
                }
                NiceKind::Forget(v) => {
                    let mut expect = node.bag.clone();
                    expect.push(v);
                    expect.sort_unstable();
                    if node.children.len() != 1 || node.bag.contains(&v) || &expect != child_bag(0) {
                        return bad(i, "forget must drop one vertex");
                    }
                }
                NiceKind::Join => {
                    if node.children.len() != 2 || child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return bad(i, "join children must share its bag");
                    }
                }
            }
        }
        if let Some(r) = self.root {
            if !self.nodes[r].bag.is_empty() {
                return bad(r, "root bag must be empty");
            }
        }
        Ok(())
    }
}

/// Checks that `td` is a tree decomposition of `g`.
pub fn verify(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let fail = |msg: String| Err(Error::Contract(format!("invalid tree decomposition: {msg}")));
    if td.n != g.n() {
        return fail(format!("built for {} vertices, graph has {}", td.n, g.n()));
    }
    let nodes = td.bags.len();
    if nodes == 0 {
        return if g.n() == 0 { Ok(()) } else { fail("no bags".into()) };
    }
    if td.edges.len() != nodes - 1 {
        return fail(format!("{} tree edges for {} nodes", td.edges.len(), nodes));
    }
    let mut tree = vec![Vec::new(); nodes];
    for &(a, b) in &td.edges {
        if a >= nodes || b >= nodes || a == b {
            return fail(format!("bad tree edge {a}-{b}"));
        }
        tree[a].push(b);
        tree[b].push(a);
    }
    let mut holders = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return fail(format!("bag {i} holds unknown vertex {v}"));
            }
            holders[v].push(i);
        }
    }
    if reach(&tree, 0, |_| true) != nodes {
        return fail("tree is disconnected".into());
    }
    for (v, hs) in holders.iter().enumerate() {
        if hs.is_empty() {
            return fail(format!("vertex {v} in no bag"));
        }
        let mut inside = vec![false; nodes];
        for &h in hs {
            inside[h] = true;
        }
        if reach(&tree, hs[0], |x| inside[x]) != hs.len() {
            return fail(format!("bags holding vertex {v} are not connected"));
        }
    }
    for &(u, v) in g.edges() {
        if !holders[u].iter().any(|&h| td.bags[h].contains(&v)) {
            return fail(format!("edge {u}-{v} not covered"));
        }
    }
    Ok(())
}

fn reach(tree: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; tree.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut count = 0;
    while let Some(x) = queue.pop_front() {
        count += 1;
        for &y in &tree[x] {
            if !seen[y] && allowed(y) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    count
}

/// Min-fill elimination ordering, ties broken by degree then index.
pub fn decompose(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition { n, bags: Vec::new(), edges: Vec::new(), root: 0 };
    }
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut gone = vec![false; n];
    let mut pos = vec![0; n];
    let mut bags = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("a vertex remains");
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        gone[v] = true;
        pos[v] = step;
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        bags.push((v, bag));
    }
    let root = n - 1;
    let mut edges = Vec::new();
    for (i, (v, bag)) in bags.iter().enumerate() {
        let next = bag.iter().filter(|&&u| u != *v).map(|&u| pos[u]).min();
        match next {
            Some(p) => edges.push((i, p)),
            None if i != root => edges.push((i, root)),
            None => {}
        }
    }
    TreeDecomposition { n, bags: bags.into_iter().map(|(_, b)| b).collect(), edges, root }
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        missing += nbrs[i + 1..].iter().filter(|b| !adj[a].contains(b)).count();
    }
    missing
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<Vertex>, kind: NiceKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    /// Forgets then introduces until the bag of `from` becomes `to`.
    fn chain(&mut self, mut from: usize, to: &[Vertex]) -> usize {
        let start = self.nodes[from].bag.clone();
        for &x in start.iter().filter(|x| !to.contains(x)) {
            let bag: Vec<Vertex> = self.nodes[from].bag.iter().copied().filter(|&y| y != x).collect();
            from = self.push(bag, NiceKind::Forget(x), vec![from]);
        }
        for &x in to.iter().filter(|x| !start.contains(x)) {
            let mut bag = self.nodes[from].bag.clone();
            bag.push(x);
            bag.sort_unstable();
            from = self.push(bag, NiceKind::Introduce(x), vec![from]);
        }
        from
    }

    fn grow_leaf(&mut self, bag: &[Vertex]) -> usize {
        let leaf = self.push(vec![bag[0]], NiceKind::Leaf(bag[0]), Vec::new());
        self.chain(leaf, bag)
    }
}

/// Restructures a decomposition into leaf, introduce, forget and join nodes
/// of the same width, ending in an empty root bag.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition> {
    let nodes = td.bags.len();
    if nodes == 0 {
        return Ok(NiceDecomposition { n: td.n, nodes: Vec::new(), root: None });
    }
    verify_shape(td)?;
    let mut tree = vec![Vec::new(); nodes];
    for &(a, b) in &td.edges {
        tree[a].push(b);
        tree[b].push(a);
    }
    let mut order = vec![td.root];
    let mut parent = vec![usize::MAX; nodes];
    parent[td.root] = td.root;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in &tree[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut b = NiceBuilder { nodes: Vec::new() };
    let mut built: Vec<Option<usize>> = vec![None; nodes];
    for &x in order.iter().rev() {
        let bag = &td.bags[x];
        let mut subtrees: Vec<usize> = tree[x]
            .iter()
            .filter(|&&y| parent[y] == x && y != x)
            .filter_map(|&y| built[y])
            .map(|c| b.chain(c, bag))
            .collect();
        built[x] = match subtrees.len() {
            0 if bag.is_empty() => None,
            0 => Some(b.grow_leaf(bag)),
            _ => {
                let mut acc = subtrees.remove(0);
                for s in subtrees {
                    acc = b.push(bag.clone(), NiceKind::Join, vec![acc, s]);
                }
                Some(acc)
            }
        };
    }
    let root = built[td.root].map(|r| b.chain(r, &[]));
    Ok(NiceDecomposition { n: td.n, nodes: b.nodes, root })
}

/// Tree shape and connectivity of vertex occurrences, without a graph.
fn verify_shape(td: &TreeDecomposition) -> Result<()> {
    // vertices absent from every bag are allowed here
    let present: BTreeSet<Vertex> = td.bags.iter().flatten().copied().collect();
    if present.iter().any(|&v| v >= td.n) {
        return Err(Error::Contract("invalid tree decomposition: vertex out of range".into()));
    }
    if td.root >= td.bags.len() {
        return Err(Error::Contract("invalid tree decomposition: root out of range".into()));
    }
    if td.bags.iter().any(|b| b.windows(2).any(|w| w[0] >= w[1])) {
        return Err(Error::Contract("invalid tree decomposition: bags must be sorted sets".into()));
    }
    let mut patched = td.clone();
    for v in 0..td.n {
        if !present.contains(&v) {
            patched.bags[td.root].push(v);
        }
    }
    patched.bags[td.root].sort_unstable();
    verify(&Graph::empty(td.n), &patched)
}

/// Reads a decomposition in the PACE bag-list format (`s td`, `b`, edges).
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            continue;
        }
        let num = |t: &str| t.parse::<usize>().map_err(|_| perr(line, "expected a non-negative integer"));
        match toks[0] {
            "s" => {
                if toks.len() != 5 || toks[1] != "td" || header.is_some() {
                    return Err(perr(line, "expected `s td <bags> <max bag size> <vertices>`"));
                }
                let count = num(toks[2])?;
                header = Some((count, num(toks[4])?));
                bags = vec![None; count];
            }
            "b" => {
                let (count, n) = header.ok_or_else(|| perr(line, "bag before header"))?;
                let id = num(toks.get(1).ok_or_else(|| perr(line, "missing bag id"))?)?;
                if id == 0 || id > count || bags[id - 1].is_some() {
                    return Err(perr(line, "bad or repeated bag id"));
                }
                let mut bag = Vec::new();
                for t in &toks[2..] {
                    let v = num(t)?;
                    if v == 0 || v > n {
                        return Err(perr(line, "vertex out of range"));
                    }
                    bag.push(v - 1);
                }
                bag.sort_unstable();
                bag.dedup();
                bags[id - 1] = Some(bag);
            }
            _ => {
                let (count, _) = header.ok_or_else(|| perr(line, "edge before header"))?;
                if toks.len() != 2 {
                    return Err(perr(line, "expected a tree edge `<bag> <bag>`"));
                }
                let (a, b) = (num(toks[0])?, num(toks[1])?);
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(perr(line, "bag id out of range"));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, n) = header.ok_or_else(|| perr(1, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(0, &format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition { n, bags, edges, root: 0 })
}

/// One DP table over the reachable states only, sorted by state key. `back`
/// holds entry indices into the child tables.
#[derive(Debug, Clone)]
pub(crate) struct Table {
    pub(crate) keys: Vec<u64>,
    pub(crate) values: Vec<u64>,
    pub(crate) back: Vec<(u32, u32)>,
    index: HashMap<u64, u32>,
}

impl Table {
    fn get(&self, key: u64) -> Option<usize> {
        self.index.get(&key).map(|&i| i as usize)
    }
}

/// Collects candidate states, keeping the best value per key.
struct Builder {
    index: HashMap<u64, usize>,
    entries: Vec<(u64, u64, (u32, u32))>,
}

impl Builder {
    fn new() -> Self {
        Builder { index: HashMap::new(), entries: Vec::new() }
    }

    fn offer(&mut self, key: u64, value: u64, back: (usize, usize)) -> Result<()> {
        let back = (back.0 as u32, back.1 as u32);
        match self.index.get(&key) {
            Some(&i) => {
                if value > self.entries[i].1 {
                    self.entries[i] = (key, value, back);
                }
            }
            None => {
                if self.entries.len() as u64 >= DEFAULT_TABLE_STATES {
                    return Err(Error::CapExceeded(format!(
                        "a decomposition table exceeds {DEFAULT_TABLE_STATES} states"
                    )));
                }
                self.index.insert(key, self.entries.len());
                self.entries.push((key, value, back));
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Table {
        self.entries.sort_unstable_by_key(|e| e.0);
        let keys: Vec<u64> = self.entries.iter().map(|e| e.0).collect();
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        Table {
            keys,
            values: self.entries.iter().map(|e| e.1).collect(),
            back: self.entries.iter().map(|e| e.2).collect(),
            index,
        }
    }
}

struct Dp<'a> {
    inst: &'a Instance,
    mhv: bool,
    radix: u64,
}

impl Dp<'_> {
    fn allowed(&self, v: Vertex) -> Vec<Color> {
        match self.inst.precoloring[v] {
            Some(c) => vec![c],
            None => (1..=self.inst.k).collect(),
        }
    }

    /// State keys are mixed-radix numbers and must fit in 64 bits.
    fn check_key_width(&self, len: usize) -> Result<()> {
        if self.radix.checked_pow(len as u32).is_none() {
            return Err(Error::CapExceeded(format!("bag of {len} vertices overflows the state encoding")));
        }
        Ok(())
    }

    fn decode(&self, mut s: u64, len: usize) -> Vec<u64> {
        let mut d = Vec::with_capacity(len);
        for _ in 0..len {
            d.push(s % self.radix);
            s /= self.radix;
        }
        d
    }

    fn encode(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &x| acc * self.radix + x)
    }

    fn color_of(&self, digit: u64) -> Color {
        (if self.mhv { digit / 2 } else { digit }) as Color + 1
    }

    fn digit(&self, color: Color, bit: bool) -> u64 {
        let c = (color - 1) as u64;
        if self.mhv {
            2 * c + bit as u64
        } else {
            c
        }
    }

    fn leaf(&self, v: Vertex) -> Result<Table> {
        let mut b = Builder::new();
        for c in self.allowed(v) {
            b.offer(self.digit(c, true), 0, (0, 0))?;
        }
        Ok(b.finish())
    }

    fn introduce(&self, bag: &[Vertex], v: Vertex, child: &Table) -> Result<Table> {
        self.check_key_width(bag.len())?;
        let mut b = Builder::new();
        let at = bag.binary_search(&v).expect("introduced vertex in bag");
        let nbrs: Vec<(usize, Weight)> = self
            .inst
            .graph
            .incident(v)
            .iter()
            .filter_map(|&(u, e)| bag.binary_search(&u).ok().map(|p| (p, self.inst.edge_weights[e])))
            .collect();
        let colors = self.allowed(v);
        for (i, (&key, &value)) in child.keys.iter().zip(&child.values).enumerate() {
            let base = self.decode(key, bag.len() - 1);
            for &c in &colors {
                let mut d = base.clone();
                d.insert(at, self.digit(c, true));
                let mut gain = 0;
                for &(p, w) in &nbrs {
                    let same = self.color_of(d[p]) == c;
                    if self.mhv {
                        if !same {
                            d[p] &= !1;
                            d[at] &= !1;
                        }
                    } else if same {
                        gain += w;
                    }
                }
                // spoiling merges child states, so keep the best
                b.offer(self.encode(&d), value + gain, (i, 0))?;
            }
        }
        Ok(b.finish())
    }

    fn forget(&self, bag: &[Vertex], v: Vertex, child_bag: &[Vertex], child: &Table) -> Result<Table> {
        let mut b = Builder::new();
        let at = child_bag.binary_search(&v).expect("forgotten vertex in child bag");
        let w = self.inst.vertex_weights[v];
        for (i, (&key, &value)) in child.keys.iter().zip(&child.values).enumerate() {
            let mut d = self.decode(key, child_bag.len());
            let dv = d.remove(at);
            let value = if self.mhv && dv & 1 == 1 { value + w } else { value };
            debug_assert_eq!(d.len(), bag.len());
            b.offer(self.encode(&d), value, (i, 0))?;
        }
        Ok(b.finish())
    }

    fn join(&self, bag: &[Vertex], left: &Table, right: &Table) -> Result<Table> {
        let mut b = Builder::new();
        let len = bag.len();
        if !self.mhv {
            let inner: Vec<(usize, usize, Weight)> = self
                .inst
                .graph
                .edges()
                .iter()
                .enumerate()
                .filter_map(|(e, &(a, b))| {
                    let pa = bag.binary_search(&a).ok()?;
                    let pb = bag.binary_search(&b).ok()?;
                    Some((pa, pb, self.inst.edge_weights[e]))
                })
                .collect();
            for (i, (&key, &l)) in left.keys.iter().zip(&left.values).enumerate() {
                let Some(j) = right.get(key) else { continue };
                let d = self.decode(key, len);
                let q: Weight = inner.iter().filter(|&&(a, b, _)| d[a] == d[b]).map(|x| x.2).sum();
                b.offer(key, l + right.values[j] - q, (i, j))?;
            }
            return Ok(b.finish());
        }
        // right states grouped by their colors, bits cleared
        let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
        for (j, &key) in right.keys.iter().enumerate() {
            let colors: Vec<u64> = self.decode(key, len).into_iter().map(|x| x & !1).collect();
            groups.entry(self.encode(&colors)).or_default().push(j);
        }
        for (i, (&key, &l)) in left.keys.iter().zip(&left.values).enumerate() {
            let ld = self.decode(key, len);
            let colors: Vec<u64> = ld.iter().map(|&x| x & !1).collect();
            let Some(group) = groups.get(&self.encode(&colors)) else { continue };
            for &j in group {
                let rd = self.decode(right.keys[j], len);
                let d: Vec<u64> = ld.iter().zip(&rd).map(|(&a, &b)| a & b).collect();
                b.offer(self.encode(&d), l + right.values[j], (i, j))?;
            }
        }
        Ok(b.finish())
    }
}

fn build_tables(inst: &Instance, nd: &NiceDecomposition) -> Result<Vec<Table>> {
    let mhv = inst.problem() == Problem::Mhv;
    let dp = Dp { inst, mhv, radix: if mhv { 2 * inst.k as u64 } else { inst.k as u64 } };
    let mut tables: Vec<Table> = Vec::with_capacity(nd.nodes.len());
    let mut total = 0u64;
    for node in &nd.nodes {
        let t = match node.kind {
            NiceKind::Leaf(v) => dp.leaf(v)?,
            NiceKind::Introduce(v) => dp.introduce(&node.bag, v, &tables[node.children[0]])?,
            NiceKind::Forget(v) => {
                let c = node.children[0];
                dp.forget(&node.bag, v, &nd.nodes[c].bag, &tables[c])?
            }
            NiceKind::Join => dp.join(&node.bag, &tables[node.children[0]], &tables[node.children[1]])?,
        };
        let bound = dp.radix.checked_pow(node.bag.len() as u32).unwrap_or(u64::MAX);
        assert!(t.keys.len() as u64 <= bound, "table larger than the state space");
        total += t.keys.len() as u64;
        if total > DEFAULT_TOTAL_STATES {
            return Err(Error::CapExceeded(format!("decomposition tables exceed {DEFAULT_TOTAL_STATES} states in total")));
        }
        tables.push(t);
    }
    Ok(tables)
}

/// Exact optimum for either weighted problem given a nice decomposition.
pub fn solve_twdp(inst: &Instance, nd: &NiceDecomposition) -> Result<Solution> {
    ensure_valid(inst)?;
    nd.verify_nice()?;
    verify(&inst.graph, &nd.as_tree_decomposition())?;
    let Some(root) = nd.root else {
        return Solution::evaluated(inst, Vec::new(), ALGORITHM);
    };
    let tables = build_tables(inst, nd)?;
    let mhv = inst.problem() == Problem::Mhv;
    let radix = if mhv { 2 * inst.k as u64 } else { inst.k as u64 };
    let mut coloring: Vec<Color> = vec![0; inst.n()];
    // the root bag is empty, so its table has the single key 0
    let mut stack = vec![(root, 0usize)];
    while let Some((x, i)) = stack.pop() {
        let node = &nd.nodes[x];
        let back = tables[x].back[i];
        match node.kind {
            NiceKind::Leaf(v) | NiceKind::Introduce(v) => {
                let at = node.bag.binary_search(&v).expect("vertex in bag");
                let digit = tables[x].keys[i] / radix.pow(at as u32) % radix;
                coloring[v] = (if mhv { digit / 2 } else { digit }) as Color + 1;
            }
            _ => {}
        }
        match node.children.as_slice() {
            [c] => stack.push((*c, back.0 as usize)),
            [a, b] => {
                stack.push((*a, back.0 as usize));
                stack.push((*b, back.1 as usize));
            }
            _ => {}
        }
    }
    let sol = Solution::evaluated(inst, coloring, ALGORITHM)?;
    debug_assert_eq!(sol.happy_weight, tables[root].values[0]);
    Ok(sol)
}

/// Decomposes with the elimination heuristic and solves.
pub fn solve(inst: &Instance) -> Result<Solution> {
    let nd = make_nice(&decompose(&inst.graph))?;
    solve_twdp(inst, &nd)
}
