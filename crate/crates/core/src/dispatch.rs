//! Algorithm selection.

use crate::error::{Error, Result};
use crate::model::{ensure_valid, Instance, Problem, Solution};
use crate::{flow2, kernel, limits, nddiv, oracle, partition, transforms, treedp, twdp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Auto,
    Brute,
    Complete,
    Flow2,
    TreeDp,
    KernelExact,
    K3Split,
    Nd,
    Twdp,
    Exact,
}

impl Algo {
    pub const ALL: [Algo; 10] = [
        Algo::Auto,
        Algo::Brute,
        Algo::Complete,
        Algo::Flow2,
        Algo::TreeDp,
        Algo::KernelExact,
        Algo::K3Split,
        Algo::Nd,
        Algo::Twdp,
        Algo::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Brute => "brute",
            Algo::Complete => "complete",
            Algo::Flow2 => "flow2",
            Algo::TreeDp => "treedp",
            Algo::KernelExact => "kernel",
            Algo::K3Split => "k3",
            Algo::Nd => "nd",
            Algo::Twdp => "twdp",
            Algo::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Algo> {
        Algo::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// Auto routing skips k = 3 splitting above this many guesses.
const K3_GUESS_BUDGET: u64 = 1 << 20;
/// Auto routing skips the elimination heuristic on larger graphs.
const TWDP_MAX_VERTICES: usize = 2000;
/// Auto routing skips tree decompositions whose tables would be larger.
const TWDP_MAX_TABLE: u64 = 1 << 20;

/// Runs one solver, without routing.
pub fn run(inst: &Instance, algo: Algo) -> Result<Solution> {
    match algo {
        Algo::Auto => auto(inst),
        Algo::Brute => oracle::solve_brute(inst),
        Algo::Complete => match inst.problem() {
            Problem::Mhe => transforms::solve_complete_mhe(inst),
            Problem::Mhv => transforms::solve_complete_mhv(inst),
        },
        Algo::Flow2 => match inst.problem() {
            Problem::Mhe => flow2::solve_mhe_2(inst),
            Problem::Mhv => flow2::solve_mhv_2(inst),
        },
        Algo::TreeDp => treedp::solve_tree_mhe(inst),
        Algo::KernelExact => kernel::solve_kernel_exact(inst),
        Algo::K3Split => partition::solve_k3_split(inst),
        Algo::Nd => nddiv::solve_nd(inst),
        Algo::Twdp => twdp::solve(inst),
        Algo::Exact => partition::solve_exact(inst),
    }
}

/// The solvers auto routing would try, in order.
pub fn route(inst: &Instance) -> Vec<Algo> {
    let mhe = inst.problem() == Problem::Mhe;
    let free = inst.uncolored_count();
    let mut out = Vec::new();
    let complete_ok = match inst.problem() {
        Problem::Mhv => inst.graph.is_complete(),
        Problem::Mhe => inst.graph.is_complete() && inst.is_unit_weighted(),
    };
    if complete_ok {
        out.push(Algo::Complete);
    }
    if inst.k == 2 {
        out.push(Algo::Flow2);
    }
    if inst.k == 1 {
        // one coloring only
        out.push(Algo::Brute);
    }
    if mhe && treedp::uncolored_forest(inst).is_forest {
        out.push(Algo::TreeDp);
    }
    if mhe && inst.target.is_some() {
        out.push(Algo::KernelExact);
    }
    if inst.k == 3 && partition::k3_guess_bound(free) <= K3_GUESS_BUDGET {
        out.push(Algo::K3Split);
    }
    let tp = nddiv::instance_type_partition(inst);
    if tp.uncolored_classes() < free && tp.uncolored_classes() <= limits::partition_cap() {
        out.push(Algo::Nd);
    }
    if inst.n() <= TWDP_MAX_VERTICES {
        let width = twdp::decompose(&inst.graph).width() as u32;
        let radix = if mhe { inst.k as u64 } else { 2 * inst.k as u64 };
        if radix.checked_pow(width + 1).is_some_and(|cells| cells <= TWDP_MAX_TABLE) {
            out.push(Algo::Twdp);
        }
    }
    out.push(Algo::Exact);
    out.push(Algo::Brute);
    out.dedup();
    out
}

/// First routed solver that does not hit a resource cap.
pub fn auto(inst: &Instance) -> Result<Solution> {
    ensure_valid(inst)?;
    let mut caps = Vec::new();
    for algo in route(inst) {
        match run(inst, algo) {
            Err(Error::CapExceeded(msg)) => caps.push(format!("{}: {msg}", algo.name())),
            other => return other,
        }
    }
    Err(Error::CapExceeded(caps.join("; ")))
}
