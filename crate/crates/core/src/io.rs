//! Plain-text instance format and JSON result records.
//!
//! ```text
//! # comment
//! happy <variant> <n> <m> <k> <ell>
//! v <id> c <color>
//! v <id> w <weight>
//! e <u> <v> [<weight>]
//! ```
//!
//! Ids are 1-based. `ell = 0` means optimize. Missing weights default to 1.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{ensure_valid, evaluate_objective, label, Color, Graph, Instance, Problem, Solution, Variant, Weight};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(Variant, usize, usize, u32, u64)> = None;
    let mut pre: Vec<Option<Color>> = Vec::new();
    let mut vweights: Vec<Option<Weight>> = Vec::new();
    let mut edges: BTreeMap<(usize, usize), (Weight, usize)> = BTreeMap::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = body.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        last = line;
        let Some((variant, n, _, k, _)) = header else {
            if kind != "happy" {
                return Err(perr(line, "expected header `happy <variant> <n> <m> <k> <ell>`"));
            }
            let name: &str = toks.next().ok_or_else(|| perr(line, "missing variant"))?;
            let variant = Variant::parse(name).ok_or_else(|| perr(line, format!("unknown variant `{name}`")))?;
            let n: usize = number(line, toks.next(), "vertex count")?;
            let m: usize = number(line, toks.next(), "edge count")?;
            let k: u32 = number(line, toks.next(), "color count")?;
            let ell: u64 = number(line, toks.next(), "target")?;
            if k == 0 {
                return Err(perr(line, "k must be at least 1"));
            }
            if toks.next().is_some() {
                return Err(perr(line, "trailing tokens after header"));
            }
            header = Some((variant, n, m, k, ell));
            pre = vec![None; n];
            vweights = vec![None; n];
            continue;
        };
        let id = |tok: Option<&str>, what: &str| -> Result<usize> {
            let v: usize = number(line, tok, what)?;
            if v == 0 || v > n {
                return Err(perr(line, format!("{what} {v} out of range 1..{n}")));
            }
            Ok(v - 1)
        };
        match kind {
            "v" => {
                let v = id(toks.next(), "vertex")?;
                match toks.next() {
                    Some("c") => {
                        let c: Color = number(line, toks.next(), "color")?;
                        if c == 0 || c > k {
                            return Err(perr(line, format!("color {c} out of range 1..{k}")));
                        }
                        if pre[v].replace(c).is_some() {
                            return Err(perr(line, format!("vertex {} precolored twice", v + 1)));
                        }
                    }
                    Some("w") => {
                        let w: Weight = number(line, toks.next(), "weight")?;
                        if w == 0 {
                            return Err(perr(line, "weights must be positive"));
                        }
                        if variant != Variant::WMHV && w != 1 {
                            return Err(perr(line, format!("vertex weights need variant wmhv, not {}", variant.name())));
                        }
                        if vweights[v].replace(w).is_some() {
                            return Err(perr(line, format!("vertex {} weighted twice", v + 1)));
                        }
                    }
                    _ => return Err(perr(line, "expected `v <id> c <color>` or `v <id> w <weight>`")),
                }
            }
            "e" => {
                let a = id(toks.next(), "vertex")?;
                let b = id(toks.next(), "vertex")?;
                if a == b {
                    return Err(perr(line, format!("self-loop at {}", a + 1)));
                }
                let w: Weight = match toks.next() {
                    Some(t) => number(line, Some(t), "weight")?,
                    None => 1,
                };
                if w == 0 {
                    return Err(perr(line, "weights must be positive"));
                }
                if variant != Variant::WMHE && w != 1 {
                    return Err(perr(line, format!("edge weights need variant wmhe, not {}", variant.name())));
                }
                let key = (a.min(b), a.max(b));
                if let Some(&(_, first)) = edges.get(&key) {
                    return Err(perr(line, format!("duplicate edge {} {} (first on line {first})", a + 1, b + 1)));
                }
                edges.insert(key, (w, line));
            }
            other => return Err(perr(line, format!("unknown line kind `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(perr(line, "trailing tokens"));
        }
    }
    let (variant, n, m, k, ell) = header.ok_or_else(|| perr(last.max(1), "missing header"))?;
    if edges.len() != m {
        return Err(perr(last, format!("header declares {m} edges, found {}", edges.len())));
    }
    let weights = edges.values().map(|&(w, _)| w).collect();
    let graph = Graph::new(n, edges.into_keys().collect())?;
    let inst = Instance::new(graph, variant, k, pre)
        .with_edge_weights(weights)
        .with_vertex_weights(vweights.into_iter().map(|w| w.unwrap_or(1)).collect())
        .with_target(Some(ell));
    ensure_valid(&inst)?;
    Ok(inst)
}

/// Same instance with edges as sorted `(min, max)` pairs.
pub fn canonicalize(inst: &Instance) -> Instance {
    let mut edges: Vec<((usize, usize), Weight)> = inst
        .graph
        .edges()
        .iter()
        .zip(&inst.edge_weights)
        .map(|(&(u, v), &w)| ((u.min(v), u.max(v)), w))
        .collect();
    edges.sort_unstable();
    let (pairs, weights): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
    Instance::new(Graph::from_edges_unchecked(inst.n(), pairs), inst.variant, inst.k, inst.precoloring.clone())
        .with_edge_weights(weights)
        .with_vertex_weights(inst.vertex_weights.clone())
        .with_target(inst.target)
}

/// Canonical text: precolors, then vertex weights (wmhv), then sorted
/// edges with weights only for wmhe.
pub fn write_instance(inst: &Instance) -> String {
    use std::fmt::Write;
    let inst = canonicalize(inst);
    let mut out = String::new();
    let v = inst.variant;
    let _ = writeln!(out, "happy {} {} {} {} {}", v.name(), inst.n(), inst.graph.m(), inst.k, inst.target.unwrap_or(0));
    for (i, c) in inst.precoloring.iter().enumerate() {
        if let Some(c) = c {
            let _ = writeln!(out, "v {} c {}", label(i), c);
        }
    }
    if v == Variant::WMHV {
        for (i, w) in inst.vertex_weights.iter().enumerate() {
            let _ = writeln!(out, "v {} w {}", label(i), w);
        }
    }
    for (&(a, b), w) in inst.graph.edges().iter().zip(&inst.edge_weights) {
        if v == Variant::WMHE {
            let _ = writeln!(out, "e {} {} {}", label(a), label(b), w);
        } else {
            let _ = writeln!(out, "e {} {}", label(a), label(b));
        }
    }
    out
}

/// Hex SHA-256 of the canonical text.
pub fn digest(inst: &Instance) -> String {
    hex::encode(Sha256::digest(write_instance(inst).as_bytes()))
}

/// Colors separated by whitespace or commas.
pub fn parse_coloring(text: &str) -> Result<Vec<Color>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Coloring(format!("bad color `{t}`"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRecord {
    pub variant: String,
    pub algorithm: String,
    pub optimum: Weight,
    pub happy_weight: Weight,
    pub coloring: Vec<Color>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<&'static str>,
    pub elapsed_ms: f64,
    pub digest: String,
}

impl ResultRecord {
    /// Re-evaluates the coloring before building the record.
    pub fn new(inst: &Instance, sol: &Solution, elapsed: std::time::Duration) -> Result<Self> {
        let value = evaluate_objective(inst, &sol.coloring)?;
        if value != sol.happy_weight {
            return Err(Error::Contract(format!(
                "{} reported {} but its coloring is worth {value}",
                sol.algorithm, sol.happy_weight
            )));
        }
        Ok(ResultRecord {
            variant: inst.variant.name().to_string(),
            algorithm: sol.algorithm.clone(),
            optimum: value,
            happy_weight: value,
            coloring: sol.coloring.clone(),
            target: inst.target,
            answer: inst.target.map(|t| if value >= t { "yes" } else { "no" }),
            elapsed_ms: (elapsed.as_secs_f64() * 1e6).round() / 1e3,
            digest: digest(inst),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// JSON with the elapsed time zeroed, for reproducibility checks.
    pub fn to_json_timeless(&self) -> String {
        ResultRecord { elapsed_ms: 0.0, ..self.clone() }.to_json()
    }
}

/// Human-readable summary.
pub fn describe(inst: &Instance, rec: &ResultRecord) -> String {
    let what = match inst.problem() {
        Problem::Mhe => "happy edges",
        Problem::Mhv => "happy vertices",
    };
    let weight = if inst.variant.weighted { " (weight)" } else { "" };
    let mut s = format!("{}{}: {} via {}\n", what, weight, rec.optimum, rec.algorithm);
    if let (Some(t), Some(a)) = (rec.target, rec.answer) {
        s.push_str(&format!("target {t}: {a}\n"));
    }
    let colors: Vec<String> = rec.coloring.iter().map(|c| c.to_string()).collect();
    s.push_str(&format!("coloring: {}\n", colors.join(" ")));
    s
}
