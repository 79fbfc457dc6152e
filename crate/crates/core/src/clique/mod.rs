//! Maximum cliques of Cayley graphs on finite fields.
//!
//! Translations are automorphisms, so only cliques through 0 are searched.
//! Scalings by the multipliers `⟨g^k⟩` that fix the connection set are
//! automorphisms fixing 0; the search branches on the residue mod `k` of the
//! second vertex and recovers full orbits afterwards. Each branch is solved
//! independently, so results do not depend on the number of worker threads.

mod solver;
mod structure;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::cayley::CayleyGraph;
use crate::ff::{Elem, FieldInfo, FieldTower};

pub use solver::{color_bound, DenseGraph, Interrupted};
pub use structure::{
    classify_structure, find_subspace_extension, is_maximal_clique, subfield_clique_condition,
    stability_scan, unique_01_max_clique, verify_stability, LargeClique, Maximality, StabilityReport,
    StabilityThreshold, StructureFlags, SubfieldCliqueCondition, Uniqueness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliqueError {
    /// The budget ran out; the clique number lies in `lower..=upper`.
    #[error("search budget exhausted; clique number is between {lower} and {upper}")]
    Timeout { lower: usize, upper: usize },
    #[error("not a clique: {a:?} and {b:?} are not adjacent")]
    NotAClique { a: Elem, b: Elem },
    #[error("the vertex set does not contain 0")]
    ZeroMissing,
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Wall-clock limit for a search.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn from_duration(limit: Duration) -> Self {
        Self {
            deadline: Instant::now().checked_add(limit),
        }
    }

    /// A budget that is already spent; searches stop at their first check.
    pub fn expired() -> Self {
        Self {
            deadline: Some(Instant::now()),
        }
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Worker threads; 0 uses the global rayon pool, 1 runs inline.
    pub threads: usize,
}

impl SearchOptions {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            budget: Budget::unlimited(),
            threads,
        }
    }
}

/// Runs `f(0..n)` on the requested number of workers, results in index order.
pub(crate) fn run_indexed<T, F>(threads: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if threads == 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let work = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
    if threads == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(work),
        Err(_) => (0..n).map(&f).collect(),
    }
}

/// Induced subgraph of the Cayley graph on `verts`.
pub(crate) fn induced(graph: &CayleyGraph, verts: &[Elem]) -> DenseGraph {
    DenseGraph::from_fn(verts.len(), |i, j| graph.adjacent(verts[i], verts[j]))
}

/// Multiplies every element by `g^shift`.
pub(crate) fn scale_by_log(tower: &FieldTower, elems: &[Elem], shift: u64) -> Vec<Elem> {
    let n = tower.group_order();
    elems
        .iter()
        .map(|x| match x.log() {
            None => Elem::ZERO,
            Some(t) => Elem::from_log((t + shift) % n),
        })
        .collect()
}

struct Branch {
    root: Elem,
    cand: Vec<Elem>,
}

/// Top-level branches: the second vertex `g^r` for each residue `r < k`
/// with `g^r ∈ S`, and remaining candidates restricted to residues `>= r`.
fn branches(graph: &CayleyGraph) -> (u64, Vec<Branch>) {
    let set = graph.connection();
    let k = set.multiplier_period();
    let out = (0..k)
        .filter(|&r| set.contains_log(r))
        .map(|r| {
            let root = Elem::from_log(r);
            let cand = set
                .exponents()
                .filter(|&t| t % k >= r && t != r)
                .map(Elem::from_log)
                .filter(|&x| graph.adjacent(x, root))
                .collect();
            Branch { root, cand }
        })
        .collect();
    (k, out)
}

/// Clique number and a witness clique containing 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxClique {
    pub omega: usize,
    pub witness: VertexSet,
}

/// Exact clique number of a Cayley graph.
///
/// The witness comes from the branch with the smallest root residue that
/// attains the maximum, so it is the same for every thread count.
pub fn max_clique(graph: &CayleyGraph, opts: &SearchOptions) -> Result<MaxClique, CliqueError> {
    let universe = graph.order();
    if graph.connection().is_empty() {
        return Ok(MaxClique {
            omega: 1,
            witness: VertexSet::from_elems(universe, [Elem::ZERO]),
        });
    }
    let (_, branches) = branches(graph);
    let results = run_indexed(opts.threads, branches.len(), |i| {
        let b = &branches[i];
        induced(graph, &b.cand).max_clique(&opts.budget)
    });
    let mut best: Option<(usize, Vec<Elem>)> = None;
    let mut upper = 0usize;
    let mut interrupted = false;
    for (b, res) in branches.iter().zip(results) {
        let (clique, bound) = match res {
            Ok(c) => {
                let n = c.len();
                (c, n)
            }
            Err(Interrupted { best, upper }) => {
                interrupted = true;
                (best, upper)
            }
        };
        upper = upper.max(bound + 2);
        if best.as_ref().map_or(true, |(n, _)| clique.len() + 2 > *n) {
            let mut elems: Vec<Elem> = clique.iter().map(|&i| b.cand[i]).collect();
            elems.push(Elem::ZERO);
            elems.push(b.root);
            best = Some((elems.len(), elems));
        }
    }
    let (omega, elems) = best.expect("at least one branch when S is nonempty");
    if interrupted {
        return Err(CliqueError::Timeout {
            lower: omega,
            upper: upper.max(omega),
        });
    }
    Ok(MaxClique {
        omega,
        witness: VertexSet::from_elems(universe, elems),
    })
}

/// All cliques of size `omega` containing 0, duplicate-free and sorted.
pub fn enumerate_max_cliques_zero(
    graph: &CayleyGraph,
    omega: usize,
    opts: &SearchOptions,
) -> Result<Vec<VertexSet>, CliqueError> {
    let universe = graph.order();
    match omega {
        0 => return Ok(Vec::new()),
        1 => {
            return Ok(if graph.connection().is_empty() {
                vec![VertexSet::from_elems(universe, [Elem::ZERO])]
            } else {
                Vec::new()
            })
        }
        _ => {}
    }
    let tower = graph.tower();
    let (k, branches) = branches(graph);
    let results = run_indexed(opts.threads, branches.len(), |i| {
        let b = &branches[i];
        induced(graph, &b.cand).cliques_of_size(omega - 2, &opts.budget)
    });
    let orbit = tower.group_order() / k;
    let mut all: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for (b, res) in branches.iter().zip(results) {
        let found = res.map_err(|_| CliqueError::Timeout {
            lower: 0,
            upper: universe,
        })?;
        for c in found {
            let mut elems: Vec<Elem> = c.iter().map(|&i| b.cand[i]).collect();
            elems.push(Elem::ZERO);
            elems.push(b.root);
            for j in 0..orbit {
                let mut scaled = scale_by_log(tower, &elems, j * k);
                scaled.sort_unstable();
                all.insert(scaled);
            }
        }
    }
    Ok(all
        .into_iter()
        .map(|c| VertexSet::from_elems(universe, c))
        .collect())
}

/// All cliques of size `size` containing both 0 and 1.
pub fn enumerate_cliques_01(
    graph: &CayleyGraph,
    size: usize,
    opts: &SearchOptions,
) -> Result<Vec<VertexSet>, CliqueError> {
    let universe = graph.order();
    if size < 2 || !graph.adjacent(Elem::ZERO, Elem::ONE) {
        return Ok(Vec::new());
    }
    let cand: Vec<Elem> = graph
        .connection()
        .elements()
        .into_iter()
        .filter(|&x| x != Elem::ONE && graph.adjacent(x, Elem::ONE))
        .collect();
    let found = induced(graph, &cand)
        .cliques_of_size(size - 2, &opts.budget)
        .map_err(|_| CliqueError::Timeout {
            lower: 0,
            upper: universe,
        })?;
    let mut out: Vec<VertexSet> = found
        .into_iter()
        .map(|c| {
            VertexSet::from_elems(
                universe,
                c.iter()
                    .map(|&i| cand[i])
                    .chain([Elem::ZERO, Elem::ONE]),
            )
        })
        .collect();
    out.sort();
    Ok(out)
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.dlog_list())
    }
}

/// One maximum clique through 0 with its structure flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueEntry {
    pub clique: VertexSet,
    #[serde(flatten)]
    pub flags: StructureFlags,
}

/// Clique number plus every maximum clique through 0, classified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub field: FieldInfo,
    pub omega: usize,
    pub max_cliques_zero: Vec<CliqueEntry>,
}

impl CliqueReport {
    pub fn all_subspaces(&self) -> bool {
        self.max_cliques_zero
            .iter()
            .all(|e| e.flags.is_additive_subgroup)
    }
}

pub fn clique_report(graph: &CayleyGraph, opts: &SearchOptions) -> Result<CliqueReport, CliqueError> {
    let MaxClique { omega, .. } = max_clique(graph, opts)?;
    let cliques = enumerate_max_cliques_zero(graph, omega, opts)?;
    let max_cliques_zero = cliques
        .into_iter()
        .map(|c| {
            let flags = classify_structure(&c, graph.tower())?;
            Ok(CliqueEntry { clique: c, flags })
        })
        .collect::<Result<_, CliqueError>>()?;
    Ok(CliqueReport {
        field: graph.tower().info(),
        omega,
        max_cliques_zero,
    })
}
