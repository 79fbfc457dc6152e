//! Algebraic structure of cliques: subspace and subfield tests, maximality,
//! uniqueness of the clique through 0 and 1, subspace extensions, and
//! stability of large cliques.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::cayley::{CayleyGraph, PeisertTypeVerdict};
use crate::ff::{Elem, FieldTower};

use super::{
    enumerate_cliques_01, enumerate_max_cliques_zero, induced, max_clique, CliqueError,
    SearchOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub is_additive_subgroup: bool,
    /// Same as `is_additive_subgroup`: in characteristic `p` every finite
    /// additive subgroup is closed under `F_p`-scaling.
    pub is_fp_subspace: bool,
    pub is_subfield: bool,
    /// `C = c·F_q` for some nonzero `c`.
    pub is_fq_coset_line: bool,
}

fn closed_under(c: &VertexSet, op: impl Fn(Elem, Elem) -> Elem) -> bool {
    let elems = c.elems();
    elems
        .iter()
        .all(|&a| elems.iter().all(|&b| c.contains(op(a, b))))
}

pub fn classify_structure(c: &VertexSet, tower: &FieldTower) -> Result<StructureFlags, CliqueError> {
    if !c.contains(Elem::ZERO) {
        return Err(CliqueError::ZeroMissing);
    }
    let subgroup = closed_under(c, |a, b| tower.sub(a, b));
    let subfield = subgroup && c.contains(Elem::ONE) && closed_under(c, |a, b| tower.mul(a, b));
    let line = c.len() as u64 == tower.q()
        && match c.iter().find(|x| !x.is_zero()) {
            None => false,
            Some(x) => tower.base_field().into_iter().all(|a| c.contains(tower.mul(x, a))),
        };
    Ok(StructureFlags {
        is_additive_subgroup: subgroup,
        is_fp_subspace: subgroup,
        is_subfield: subfield,
        is_fq_coset_line: line,
    })
}

fn require_peisert_type(graph: &CayleyGraph) -> Result<usize, CliqueError> {
    match graph.is_peisert_type() {
        PeisertTypeVerdict::Yes { m, .. } => Ok(m),
        PeisertTypeVerdict::No(reason) => Err(CliqueError::NotApplicable(format!(
            "graph is not of Peisert type ({reason:?})"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Uniqueness {
    /// The subfield is the only maximum clique containing 0 and 1.
    UniqueSubfield,
    /// Every maximum clique through 0 and 1 other than the subfield.
    Violation {
        omega: usize,
        subfield_is_max_clique: bool,
        cliques: Vec<VertexSet>,
    },
}

/// Checks that `F_q` is the unique maximum clique through 0 and 1.
pub fn unique_01_max_clique(
    graph: &CayleyGraph,
    opts: &SearchOptions,
) -> Result<Uniqueness, CliqueError> {
    require_peisert_type(graph)?;
    let omega = max_clique(graph, opts)?.omega;
    let cliques = enumerate_cliques_01(graph, omega, opts)?;
    let subfield = VertexSet::from_elems(graph.order(), graph.tower().base_field());
    let has_subfield = cliques.contains(&subfield);
    if has_subfield && cliques.len() == 1 {
        return Ok(Uniqueness::UniqueSubfield);
    }
    Ok(Uniqueness::Violation {
        omega,
        subfield_is_max_clique: has_subfield,
        cliques: cliques.into_iter().filter(|c| *c != subfield).collect(),
    })
}

fn check_clique(graph: &CayleyGraph, c: &VertexSet) -> Result<Vec<Elem>, CliqueError> {
    let elems = c.elems();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            if !graph.adjacent(a, b) {
                return Err(CliqueError::NotAClique { a, b });
            }
        }
    }
    Ok(elems)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Maximality {
    Maximal,
    /// `witness` is the least-dlog vertex adjacent to the whole clique.
    Extendable { witness: Elem },
}

impl Maximality {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Maximality::Maximal)
    }
}

/// Scans every vertex outside `c` for one adjacent to all of `c`.
pub fn is_maximal_clique(graph: &CayleyGraph, c: &VertexSet) -> Result<Maximality, CliqueError> {
    let elems = check_clique(graph, c)?;
    let set = graph.connection();
    let tower = graph.tower();
    let witness = tower
        .elements()
        .filter(|&h| !c.contains(h))
        .find(|&h| elems.iter().all(|&x| set.contains(tower.sub(h, x))));
    Ok(match witness {
        None => Maximality::Maximal,
        Some(witness) => Maximality::Extendable { witness },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubfieldCliqueCondition {
    /// `d | (q^n - 1)/(q - 1)`.
    pub divides: bool,
    /// When `divides`, the result of checking every pair of `F_q`.
    pub verified_clique: Option<bool>,
}

/// Whether `F_q` is a clique in the d-Paley graph on the top field of
/// `tower`: the divisibility test, confirmed on all pairs when it holds.
pub fn subfield_clique_condition(tower: &FieldTower, d: u64) -> SubfieldCliqueCondition {
    let q = tower.q();
    let w = tower.group_order() / (q - 1);
    let divides = d != 0 && w % d == 0;
    let verified_clique = divides.then(|| {
        let k = tower.base_field();
        k.iter().enumerate().all(|(i, &a)| {
            k[i + 1..].iter().all(|&b| {
                tower
                    .sub(a, b)
                    .log()
                    .is_some_and(|t| t % d == 0)
            })
        })
    });
    SubfieldCliqueCondition {
        divides,
        verified_clique,
    }
}

/// Looks for `h ∉ K` with `K ⊕ hK` a clique, trying `h` in dlog order and
/// skipping every `h` that spans an already rejected space.
pub fn find_subspace_extension(
    graph: &CayleyGraph,
    k: &VertexSet,
) -> Result<Option<VertexSet>, CliqueError> {
    let tower = graph.tower();
    let kelems = check_clique(graph, k)?;
    if !classify_structure(k, tower)?.is_subfield {
        return Err(CliqueError::NotApplicable(
            "the clique to extend must be a subfield".into(),
        ));
    }
    let set = graph.connection();
    let mut covered = VertexSet::new(graph.order());
    for h in tower.elements().skip(1) {
        if k.contains(h) || covered.contains(h) {
            continue;
        }
        let hk: Vec<Elem> = kelems.iter().map(|&b| tower.mul(h, b)).collect();
        let span: Vec<Elem> = kelems
            .iter()
            .flat_map(|&a| hk.iter().map(move |&hb| (a, hb)))
            .map(|(a, hb)| tower.add(a, hb))
            .collect();
        if span.iter().all(|&v| v.is_zero() || set.contains(v)) {
            return Ok(Some(VertexSet::from_elems(graph.order(), span)));
        }
        for v in span {
            covered.insert(v);
        }
    }
    Ok(None)
}

/// The size bound above which maximal cliques through 0 of a Peisert-type
/// graph with `m` cosets lie in a subspace clique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityThreshold {
    pub q: u64,
    pub m: u64,
    pub value: f64,
}

impl StabilityThreshold {
    pub fn new(q: u64, m: u64) -> Self {
        let qf = q as f64;
        let value = qf - (1.0 - m as f64 / (qf + 1.0)) * qf.sqrt();
        Self { q, m, value }
    }

    /// Smallest clique size strictly above the threshold.
    pub fn min_size(&self) -> usize {
        self.value.floor() as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LargeClique {
    pub clique: VertexSet,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub threshold: StabilityThreshold,
    pub omega: usize,
    /// Maximum cliques through 0 that are additive subgroups.
    pub subspace_cliques: Vec<VertexSet>,
    /// Maximal cliques through 0 above the threshold.
    pub large_cliques: Vec<LargeClique>,
    pub holds: bool,
}

/// Lists every maximal clique through 0 larger than the threshold and
/// checks that each sits inside a subspace maximum clique.
pub fn verify_stability(
    graph: &CayleyGraph,
    opts: &SearchOptions,
) -> Result<StabilityReport, CliqueError> {
    let m = require_peisert_type(graph)? as u64;
    let q = graph.tower().q();
    if 2 * m >= q + 1 {
        return Err(CliqueError::NotApplicable(format!(
            "needs fewer than (q+1)/2 cosets, got m = {m} with q = {q}"
        )));
    }
    stability_scan(graph, opts)
}

/// The containment scan of [`verify_stability`] without the bound on the
/// number of cosets, for probing graphs outside that hypothesis (such as
/// Paley graphs, where `m = (q+1)/2`). Only Peisert type is required.
pub fn stability_scan(
    graph: &CayleyGraph,
    opts: &SearchOptions,
) -> Result<StabilityReport, CliqueError> {
    let m = require_peisert_type(graph)? as u64;
    let q = graph.tower().q();
    let threshold = StabilityThreshold::new(q, m);
    let omega = max_clique(graph, opts)?.omega;
    let subspace_cliques: Vec<VertexSet> = enumerate_max_cliques_zero(graph, q as usize, opts)?
        .into_iter()
        .filter(|c| {
            classify_structure(c, graph.tower()).is_ok_and(|f| f.is_additive_subgroup)
        })
        .collect();
    let s = graph.connection().elements();
    let maximal = induced(graph, &s)
        .maximal_cliques(threshold.min_size() - 1, &opts.budget)
        .map_err(|_| CliqueError::Timeout {
            lower: 0,
            upper: graph.order(),
        })?;
    let large_cliques: Vec<LargeClique> = maximal
        .into_iter()
        .map(|c| {
            let clique = VertexSet::from_elems(
                graph.order(),
                c.iter().map(|&i| s[i]).chain([Elem::ZERO]),
            );
            let contained = subspace_cliques.iter().any(|v| clique.is_subset(v));
            LargeClique { clique, contained }
        })
        .collect();
    let holds = large_cliques.iter().all(|c| c.contained);
    Ok(StabilityReport {
        threshold,
        omega,
        subspace_cliques,
        large_cliques,
        holds,
    })
}
