//! Multiplicative character sums over subsets and subspaces of a field.
//!
//! A sum `Σ χ(a)` is kept exactly as a multiplicity vector over the roots
//! of unity of the character's order; only the final modulus is a float.
//! Sweeps over many characters use [`SumTable`], which keeps exponents in
//! integer arithmetic and looks up `cos`/`sin` by exponent.

mod hull;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::ConnectionSet;
use crate::ff::{Elem, FieldTower, MultChar};

pub use hull::{convex_hull, epsilon_star, root_of_unity, EpsilonBound};

/// Slack granted to the permissive side of every bound.
pub const BOUND_SLACK: f64 = 1e-9;
/// Sums this close to their bound are flagged as grazing.
pub const GRAZING_BAND: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharSumError {
    #[error("θ has degree {found} over F_q, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("the character is trivial")]
    TrivialCharacter,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("the given vectors are not linearly independent over F_q")]
    DependentBasis,
    #[error("character does not belong to this field")]
    FieldMismatch,
}

/// `Σ χ(a)` as multiplicities of `e^{2πir/D}`, `D` the character order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootOfUnitySum {
    pub order: u64,
    pub multiplicities: Vec<u64>,
    pub zero_count: u64,
}

impl RootOfUnitySum {
    /// Number of summands, zeros included.
    pub fn len(&self) -> u64 {
        self.multiplicities.iter().sum::<u64>() + self.zero_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self) -> Complex64 {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(r, &k)| root_of_unity(r as u64, self.order) * k as f64)
            .sum()
    }

    pub fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

/// Exact `Σ_{a ∈ A} χ(a)`.
pub fn char_sum<I>(tower: &FieldTower, a: I, chi: &MultChar) -> RootOfUnitySum
where
    I: IntoIterator<Item = Elem>,
{
    debug_assert_eq!(chi.group_order(), tower.group_order());
    let order = chi.order();
    let mut multiplicities = vec![0u64; order as usize];
    let mut zero_count = 0u64;
    let mut n = 0u64;
    for x in a {
        n += 1;
        match x.log() {
            None => zero_count += 1,
            Some(t) => multiplicities[chi.reduced_of_log(t) as usize] += 1,
        }
    }
    let sum = RootOfUnitySum {
        order,
        multiplicities,
        zero_count,
    };
    assert_eq!(sum.len(), n, "every summand is counted exactly once");
    sum
}

/// `cos`/`sin` of `2πe/(q^N - 1)` for every exponent `e`.
#[derive(Debug, Clone)]
pub struct SumTable {
    group_order: u64,
    roots: Vec<Complex64>,
}

impl SumTable {
    pub fn new(tower: &FieldTower) -> Self {
        let n = tower.group_order();
        Self {
            group_order: n,
            roots: (0..n).map(|e| root_of_unity(e, n)).collect(),
        }
    }

    /// `Σ χ_m(g^t)` over the given logs.
    pub fn sum_logs(&self, logs: &[u64], m: u64) -> Complex64 {
        let n = self.group_order as u128;
        logs.iter()
            .map(|&t| self.roots[((m as u128 * t as u128) % n) as usize])
            .sum()
    }

    pub fn magnitude_logs(&self, logs: &[u64], m: u64) -> f64 {
        self.sum_logs(logs, m).norm()
    }
}

/// Discrete logs of the nonzero elements of `a`.
pub fn logs_of(a: &[Elem]) -> Vec<u64> {
    a.iter().filter_map(|x| x.log()).collect()
}

/// Magnitude against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub magnitude: f64,
    pub bound: f64,
    /// `bound - magnitude`.
    pub margin: f64,
    pub holds: bool,
    pub grazing: bool,
}

impl BoundCheck {
    pub fn new(magnitude: f64, bound: f64) -> Self {
        let margin = bound - magnitude;
        Self {
            magnitude,
            bound,
            margin,
            holds: magnitude < bound + BOUND_SLACK,
            grazing: margin.abs() < GRAZING_BAND,
        }
    }
}

fn nontrivial(tower: &FieldTower, chi: &MultChar) -> Result<(), CharSumError> {
    if chi.group_order() != tower.group_order() {
        return Err(CharSumError::FieldMismatch);
    }
    if chi.is_trivial() {
        return Err(CharSumError::TrivialCharacter);
    }
    Ok(())
}

/// `|Σ_{a ∈ F_q} χ(θ + a)| <= (N - 1)√q` for `θ` of degree `N` over `F_q`.
pub fn verify_katz(
    tower: &FieldTower,
    chi: &MultChar,
    theta: Elem,
) -> Result<BoundCheck, CharSumError> {
    nontrivial(tower, chi)?;
    let n = tower.ext_degree();
    let found = tower.element_degree(theta);
    if found != n {
        return Err(CharSumError::DegreeMismatch { expected: n, found });
    }
    let shifted = katz_shift(tower, theta);
    let sum = char_sum(tower, shifted, chi);
    let bound = (n - 1) as f64 * (tower.q() as f64).sqrt();
    Ok(BoundCheck::new(sum.magnitude(), bound))
}

/// `θ + F_q`.
pub fn katz_shift(tower: &FieldTower, theta: Elem) -> Vec<Elem> {
    tower
        .base_field()
        .into_iter()
        .map(|a| tower.add(theta, a))
        .collect()
}

/// The `F_q`-span of `basis`, or `DependentBasis`.
pub fn span(tower: &FieldTower, basis: &[Elem]) -> Result<Vec<Elem>, CharSumError> {
    let base = tower.base_field();
    let mut out = vec![Elem::ZERO];
    for &b in basis {
        let mut next = Vec::with_capacity(out.len() * base.len());
        for &c in &base {
            let cb = tower.mul(c, b);
            next.extend(out.iter().map(|&v| tower.add(v, cb)));
        }
        out = next;
    }
    out.sort_unstable();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        return Err(CharSumError::DependentBasis);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReisVerdict {
    pub dimension: usize,
    /// A nonzero `y ∈ V` such that `A/y` has an element of degree `N`.
    pub hypothesis_witness: Option<Elem>,
    pub check: BoundCheck,
}

impl ReisVerdict {
    /// The bound is only asserted when the hypothesis holds.
    pub fn holds(&self) -> Option<bool> {
        self.hypothesis_witness.map(|_| self.check.holds)
    }
}

/// `|Σ_{a ∈ u + V} χ(a)| < N q^{t - 1/2}` for `V = span(basis)` of
/// dimension `t`, under the degree hypothesis.
pub fn verify_reis(
    tower: &FieldTower,
    u: Elem,
    basis: &[Elem],
    chi: &MultChar,
) -> Result<ReisVerdict, CharSumError> {
    nontrivial(tower, chi)?;
    if basis.is_empty() {
        return Err(CharSumError::HypothesisViolated("dimension must be at least 1".into()));
    }
    let v = span(tower, basis)?;
    let a: Vec<Elem> = v.iter().map(|&x| tower.add(u, x)).collect();
    let n = tower.ext_degree();
    let hypothesis_witness = v.iter().skip(1).copied().find(|&y| {
        a.iter()
            .any(|&x| tower.element_degree(tower.div(x, y).expect("y is nonzero")) == n)
    });
    let t = basis.len() as i32;
    let bound = n as f64 * (tower.q() as f64).powf(t as f64 - 0.5);
    let sum = char_sum(tower, a, chi);
    Ok(ReisVerdict {
        dimension: basis.len(),
        hypothesis_witness,
        check: BoundCheck::new(sum.magnitude(), bound),
    })
}

fn require(cond: bool, what: &str) -> Result<(), CharSumError> {
    if cond {
        Ok(())
    } else {
        Err(CharSumError::HypothesisViolated(what.into()))
    }
}

/// In `F_{q^{2n}}`: `|Σ_{x ∈ V} χ(x)| < (2n/√q)|V|` for an `n`-dimensional
/// `V ∋ 1` other than `F_{q^n}`.
pub fn verify_charsumcor(
    tower: &FieldTower,
    basis: &[Elem],
    chi: &MultChar,
) -> Result<BoundCheck, CharSumError> {
    nontrivial(tower, chi)?;
    let big_n = tower.ext_degree();
    require(big_n % 2 == 0 && big_n >= 4, "the field must be F_{q^{2n}} with n >= 2")?;
    let n = big_n / 2;
    require(basis.len() == n as usize, "V must have dimension n")?;
    let v = span(tower, basis)?;
    require(v.contains(&Elem::ONE), "1 must lie in V")?;
    let half = tower.subfield(n).expect("n divides 2n");
    require(v != half, "V must differ from F_{q^n}")?;
    let bound = 2.0 * n as f64 / (tower.q() as f64).sqrt() * v.len() as f64;
    Ok(BoundCheck::new(char_sum(tower, v, chi).magnitude(), bound))
}

/// In `F_{q^n}`, `n` an odd prime and `q > n^2`: `|Σ_{x ∈ V} χ(x)| < |V| - 1`
/// for a 2-dimensional `V ∋ 1`.
pub fn verify_prime_cor(
    tower: &FieldTower,
    basis: &[Elem],
    chi: &MultChar,
) -> Result<BoundCheck, CharSumError> {
    nontrivial(tower, chi)?;
    let n = u64::from(tower.ext_degree());
    require(
        n > 2 && crate::ff::arith::is_prime(n),
        "the extension degree must be an odd prime",
    )?;
    require(tower.q() > n * n, "needs q > n^2")?;
    require(basis.len() == 2, "V must have dimension 2")?;
    let v = span(tower, basis)?;
    require(v.contains(&Elem::ONE), "1 must lie in V")?;
    let bound = (v.len() - 1) as f64;
    Ok(BoundCheck::new(char_sum(tower, v, chi).magnitude(), bound))
}

/// Every 2-dimensional `F_q`-subspace containing 1, as `(h, span{1, h})`
/// with `h` the least-dlog element spanning it.
pub fn two_dim_subspaces_with_one(tower: &FieldTower) -> Vec<(Elem, Vec<Elem>)> {
    let mut covered = vec![false; tower.order() as usize];
    for x in tower.base_field() {
        covered[x.index()] = true;
    }
    let mut out = Vec::new();
    for h in tower.elements() {
        if covered[h.index()] {
            continue;
        }
        let v = span(tower, &[Elem::ONE, h]).expect("h lies outside F_q");
        for &x in &v {
            covered[x.index()] = true;
        }
        out.push((h, v));
    }
    out
}

/// `{χ(x) : x ∈ S}` as exponents over the character order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharImage {
    pub order: u64,
    pub exponents: BTreeSet<u64>,
}

impl CharImage {
    pub fn points(&self) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|&r| root_of_unity(r, self.order))
            .collect()
    }

    pub fn epsilon_star(&self) -> Option<EpsilonBound> {
        epsilon_star(&self.points())
    }
}

pub fn connection_set_char_image(set: &ConnectionSet, chi: &MultChar) -> CharImage {
    CharImage {
        order: chi.order(),
        exponents: set.exponents().map(|t| chi.reduced_of_log(t)).collect(),
    }
}
