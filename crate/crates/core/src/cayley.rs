//! Connection sets and Cayley graphs on the additive group of a field.
//!
//! A connection set is stored as a bitset over discrete logs `0..q^N - 1`;
//! every family handled here (Paley, d-Paley, Peisert, generalized Peisert,
//! unions of cosets of `F_q^*`) is defined by exponent congruences, so
//! membership is a single bit test. Adjacency `u ~ v` is `u - v ∈ S`.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitSet, VertexSet};
use crate::ff::{arith, Elem, FieldTower};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CayleyError {
    #[error("congruence violated: {condition}")]
    CongruenceViolated { condition: String },
    #[error("generalized Peisert graphs need an even d, got {0}")]
    DNotEven(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("a connection set may not contain 0")]
    ContainsZero,
    #[error("connection set is not symmetric: {witness:?} ∈ S but its negative is not")]
    NotSymmetric { witness: Elem },
    #[error("expected a quadratic extension (N = 2), got N = {0}")]
    WrongExtensionDegree(u32),
    #[error("not a union of F_q^* cosets: {witness:?} ∈ S but {missing:?} from the same coset is not")]
    NotCosetUnion { witness: Elem, missing: Elem },
    #[error("connection set is empty")]
    Empty,
    #[error("connection set does not belong to this field")]
    FieldMismatch,
}

/// Which connection set to build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionSpec {
    /// Nonzero squares.
    Paley,
    /// Nonzero d-th powers.
    GPaley(u64),
    /// `{g^j : j ≡ 0, 1 mod 4}`.
    Peisert,
    /// `{g^(dk + j) : 0 <= j < d/2}`.
    GPeisert(u64),
    /// Union of the cosets `g^c F_q^*` over the given exponents `c`.
    PeisertType(Vec<u64>),
    /// Explicit list of elements.
    Explicit(Vec<Elem>),
}

/// A symmetric subset of the nonzero field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    members: BitSet,
    group_order: u64,
}

impl std::fmt::Debug for ConnectionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionSet")
            .field("group_order", &self.group_order)
            .field("size", &self.len())
            .finish()
    }
}

fn congruence(order: u64, modulus: u64, what: &str) -> Result<(), CayleyError> {
    if order % modulus == 1 {
        Ok(())
    } else {
        Err(CayleyError::CongruenceViolated {
            condition: format!("{what}: field order {order} ≢ 1 (mod {modulus})"),
        })
    }
}

/// Builds the connection set described by `spec` over the top field of
/// `tower`, checking the defining congruences and `S = -S`.
pub fn build_connection(
    spec: &ConnectionSpec,
    tower: &FieldTower,
) -> Result<ConnectionSet, CayleyError> {
    let order = tower.order();
    let n = tower.group_order();
    let set = match spec {
        ConnectionSpec::Paley => {
            congruence(order, 4, "Paley")?;
            ConnectionSet::from_predicate(n, |t| t % 2 == 0)
        }
        ConnectionSpec::GPaley(d) => {
            let d = *d;
            if d < 2 {
                return Err(CayleyError::InvalidParameter(format!(
                    "d-Paley graphs need d > 1, got {d}"
                )));
            }
            congruence(order, 2 * d, "d-Paley")?;
            ConnectionSet::from_predicate(n, |t| t % d == 0)
        }
        ConnectionSpec::Peisert => {
            let p = tower.p();
            let r = tower.prime_degree();
            if p % 4 != 3 || r % 2 != 0 {
                return Err(CayleyError::CongruenceViolated {
                    condition: format!(
                        "Peisert: field order {p}^{r} needs p ≡ 3 (mod 4) and an even exponent"
                    ),
                });
            }
            ConnectionSet::from_predicate(n, |t| t % 4 <= 1)
        }
        ConnectionSpec::GPeisert(d) => {
            let d = *d;
            if d % 2 != 0 {
                return Err(CayleyError::DNotEven(d));
            }
            if d == 0 {
                return Err(CayleyError::InvalidParameter("d must be positive".into()));
            }
            congruence(order, 2 * d, "generalized Peisert")?;
            ConnectionSet::from_predicate(n, |t| t % d < d / 2)
        }
        ConnectionSpec::PeisertType(reps) => {
            let w = n / (tower.q() - 1);
            let mut residues = vec![false; w as usize];
            for &c in reps {
                residues[(c % w) as usize] = true;
            }
            ConnectionSet::from_predicate(n, |t| residues[(t % w) as usize])
        }
        ConnectionSpec::Explicit(elems) => {
            let mut members = BitSet::new(n as usize);
            for &x in elems {
                let t = x.log().ok_or(CayleyError::ContainsZero)?;
                if t >= n {
                    return Err(CayleyError::FieldMismatch);
                }
                members.insert(t as usize);
            }
            ConnectionSet {
                members,
                group_order: n,
            }
        }
    };
    set.check_symmetric()?;
    Ok(set)
}

impl ConnectionSet {
    fn from_predicate(group_order: u64, pred: impl Fn(u64) -> bool) -> Self {
        let mut members = BitSet::new(group_order as usize);
        for t in 0..group_order {
            if pred(t) {
                members.insert(t as usize);
            }
        }
        Self {
            members,
            group_order,
        }
    }

    /// Builds a set from discrete logs, validating symmetry.
    pub fn from_exponents(tower: &FieldTower, exps: &[u64]) -> Result<Self, CayleyError> {
        let elems: Vec<Elem> = exps
            .iter()
            .map(|&t| {
                if t < tower.group_order() {
                    Ok(Elem::from_log(t))
                } else {
                    Err(CayleyError::FieldMismatch)
                }
            })
            .collect::<Result<_, _>>()?;
        build_connection(&ConnectionSpec::Explicit(elems), tower)
    }

    fn check_symmetric(&self) -> Result<(), CayleyError> {
        let half = self.group_order / 2;
        for t in self.members.iter() {
            let neg = (t as u64 + half) % self.group_order;
            if !self.members.contains(neg as usize) {
                return Err(CayleyError::NotSymmetric {
                    witness: Elem::from_log(t as u64),
                });
            }
        }
        Ok(())
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    #[inline]
    pub fn contains_log(&self, t: u64) -> bool {
        self.members.contains(t as usize)
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        match x.log() {
            None => false,
            Some(t) => self.members.contains(t as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Discrete logs of the members, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|t| t as u64)
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.exponents().map(Elem::from_log).collect()
    }

    /// The set as a vertex set of the Cayley graph.
    pub fn as_vertex_set(&self) -> VertexSet {
        VertexSet::from_elems(self.group_order as usize + 1, self.exponents().map(Elem::from_log))
    }

    /// JSON array of sorted discrete logs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.exponents().collect::<Vec<_>>())
            .expect("a list of integers always serializes")
    }

    pub fn from_json(tower: &FieldTower, json: &str) -> Result<Self, CayleyError> {
        let exps: Vec<u64> = serde_json::from_str(json)
            .map_err(|e| CayleyError::InvalidParameter(format!("bad exponent list: {e}")))?;
        Self::from_exponents(tower, &exps)
    }

    /// Smallest `k | q^N - 1` such that `g^k S = S`. The multipliers
    /// `⟨g^k⟩` are exactly the scalings fixing `S`, hence graph automorphisms
    /// fixing 0.
    pub fn multiplier_period(&self) -> u64 {
        let n = self.group_order;
        arith::divisors(n)
            .into_iter()
            .find(|&k| {
                self.members
                    .iter()
                    .all(|t| self.members.contains(((t as u64 + k) % n) as usize))
            })
            .unwrap_or(n)
    }
}

/// `S = c_1 F_q^* ∪ … ∪ c_m F_q^*`, representatives by minimal discrete log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    pub m: usize,
    pub reps: Vec<Elem>,
}

/// Splits `S` into cosets of the base multiplicative group `F_q^*`.
pub fn decompose_cosets(
    set: &ConnectionSet,
    tower: &FieldTower,
) -> Result<CosetDecomposition, CayleyError> {
    if set.group_order() != tower.group_order() {
        return Err(CayleyError::FieldMismatch);
    }
    if set.is_empty() {
        return Err(CayleyError::Empty);
    }
    let n = tower.group_order();
    // F_q^* = <g^w>, so the coset of g^t is determined by t mod w
    let w = n / (tower.q() - 1);
    let mut reps = Vec::new();
    for r in 0..w {
        let mut coset = (r..n).step_by(w as usize);
        let first_in = coset.clone().find(|&t| set.contains_log(t));
        let Some(inside) = first_in else { continue };
        if let Some(missing) = coset.find(|&t| !set.contains_log(t)) {
            return Err(CayleyError::NotCosetUnion {
                witness: Elem::from_log(inside),
                missing: Elem::from_log(missing),
            });
        }
        reps.push(Elem::from_log(r));
    }
    Ok(CosetDecomposition { m: reps.len(), reps })
}

/// Why a connection set fails to be of Peisert type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotPeisertReason {
    NotQuadraticExtension,
    MissingBaseUnits,
    NotCosetUnion,
    TooManyCosets { m: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeisertTypeVerdict {
    Yes { m: usize, reps: Vec<Elem> },
    No(NotPeisertReason),
}

impl PeisertTypeVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PeisertTypeVerdict::Yes { .. })
    }

    pub fn cosets(&self) -> Option<usize> {
        match self {
            PeisertTypeVerdict::Yes { m, .. } => Some(*m),
            PeisertTypeVerdict::No(_) => None,
        }
    }
}

/// Peisert-type test: `F_q^* ⊆ S ⊆ F_{q^2}^*`, `S` a union of `m <= (q+1)/2`
/// cosets of `F_q^*`.
pub fn is_peisert_type(set: &ConnectionSet, tower: &FieldTower) -> PeisertTypeVerdict {
    if tower.ext_degree() != 2 {
        return PeisertTypeVerdict::No(NotPeisertReason::NotQuadraticExtension);
    }
    let w = tower.q() + 1;
    let base_units = (0..tower.group_order())
        .step_by(w as usize)
        .all(|t| set.contains_log(t));
    if !base_units {
        return PeisertTypeVerdict::No(NotPeisertReason::MissingBaseUnits);
    }
    match decompose_cosets(set, tower) {
        Err(_) => PeisertTypeVerdict::No(NotPeisertReason::NotCosetUnion),
        Ok(dec) => {
            let max = ((tower.q() + 1) / 2) as usize;
            if dec.m > max {
                PeisertTypeVerdict::No(NotPeisertReason::TooManyCosets { m: dec.m, max })
            } else {
                PeisertTypeVerdict::Yes {
                    m: dec.m,
                    reps: dec.reps,
                }
            }
        }
    }
}

/// `Cay(F^+, S)` on the top field of a tower.
pub struct CayleyGraph {
    tower: Arc<FieldTower>,
    set: ConnectionSet,
    rows: OnceLock<Box<[OnceLock<VertexSet>]>>,
}

impl std::fmt::Debug for CayleyGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CayleyGraph")
            .field("tower", &self.tower)
            .field("set", &self.set)
            .finish()
    }
}

impl CayleyGraph {
    pub fn new(tower: Arc<FieldTower>, set: ConnectionSet) -> Result<Self, CayleyError> {
        if set.group_order() != tower.group_order() {
            return Err(CayleyError::FieldMismatch);
        }
        Ok(Self {
            tower,
            set,
            rows: OnceLock::new(),
        })
    }

    pub fn from_spec(tower: Arc<FieldTower>, spec: &ConnectionSpec) -> Result<Self, CayleyError> {
        let set = build_connection(spec, &tower)?;
        Self::new(tower, set)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.set
    }

    /// Number of vertices, `q^N`.
    pub fn order(&self) -> usize {
        self.tower.order() as usize
    }

    /// Common degree `|S|` of every vertex.
    pub fn degree(&self) -> usize {
        self.set.len()
    }

    #[inline]
    pub fn adjacent(&self, u: Elem, v: Elem) -> bool {
        self.set.contains(self.tower.sub(u, v))
    }

    /// `{v + s : s ∈ S}`.
    pub fn neighbors(&self, v: Elem) -> VertexSet {
        let mut out = VertexSet::new(self.order());
        for t in self.set.exponents() {
            out.insert(self.tower.add(v, Elem::from_log(t)));
        }
        out
    }

    /// Neighbour set of `v`, materialised on first use and cached.
    pub fn neighbors_cached(&self, v: Elem) -> &VertexSet {
        let rows = self
            .rows
            .get_or_init(|| (0..self.order()).map(|_| OnceLock::new()).collect());
        rows[v.index()].get_or_init(|| self.neighbors(v))
    }

    pub fn is_clique(&self, elems: &[Elem]) -> bool {
        elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..].iter().all(|&b| self.adjacent(a, b))
        })
    }

    pub fn is_peisert_type(&self) -> PeisertTypeVerdict {
        is_peisert_type(&self.set, &self.tower)
    }
}
