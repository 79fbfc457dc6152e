//! Point sets in `AG(2, q)` and the directions they determine.
//!
//! Coordinates are elements of a subfield `F_q` of a tower's top field, so
//! all arithmetic goes through the tower's tables. Cliques in `F_{q^2}` are
//! moved into the plane by an [`Embedding`] `au + bv ↦ (a, b)`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::cayley::{decompose_cosets, CayleyGraph};
use crate::clique::DenseGraph;
use crate::clique::Budget;
use crate::ff::{arith, Elem, FieldTower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirError {
    #[error("embeddings need a quadratic extension, got N = {0}")]
    WrongExtensionDegree(u32),
    #[error("{{u, v}} is not a basis over F_q")]
    BasisDegenerate,
    #[error("need at least two points")]
    TooSmall,
    #[error("the point set does not contain the origin")]
    OriginMissing,
    #[error("extension search is limited to q <= {max}, got q = {q}")]
    ScaleTooLarge { q: u64, max: u64 },
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("{0:?} is not a coordinate in F_q")]
    NotInField(Elem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point {
    pub x: Elem,
    pub y: Elem,
}

impl Point {
    pub fn new(x: Elem, y: Elem) -> Self {
        Self { x, y }
    }

    pub const ORIGIN: Point = Point {
        x: Elem::ZERO,
        y: Elem::ZERO,
    };
}

pub type PointSet = BTreeSet<Point>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Slope(Elem),
    Infinity,
}

pub type DirectionSet = BTreeSet<Direction>;

/// A subfield `F_{p^e}` of the coordinate field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Subfield {
    pub prime_degree: u32,
    pub order: u64,
}

/// The affine plane over `F_{p^e}`, a subfield of the tower's top field.
#[derive(Debug, Clone)]
pub struct Plane<'a> {
    tower: &'a FieldTower,
    degree: u32,
    field: Vec<Elem>,
}

impl<'a> Plane<'a> {
    /// Coordinates in `F_{p^e}`; `e` must divide the top field's degree.
    pub fn new(tower: &'a FieldTower, degree: u32) -> Result<Self, DirError> {
        let field = tower
            .prime_subfield(degree)
            .map_err(|e| DirError::InvalidSize(e.to_string()))?;
        Ok(Self {
            tower,
            degree,
            field,
        })
    }

    /// The plane over the base field `F_q` of the tower.
    pub fn base(tower: &'a FieldTower) -> Self {
        Self::new(tower, tower.base().n).expect("the base field is a subfield")
    }

    /// The plane over the whole top field.
    pub fn top(tower: &'a FieldTower) -> Self {
        Self::new(tower, tower.prime_degree()).expect("the top field is a subfield")
    }

    pub fn tower(&self) -> &FieldTower {
        self.tower
    }

    pub fn q(&self) -> u64 {
        self.field.len() as u64
    }

    /// Coordinate field elements in dlog order, zero first.
    pub fn elements(&self) -> &[Elem] {
        &self.field
    }

    pub fn contains_coord(&self, x: Elem) -> bool {
        self.tower.in_prime_subfield(x, self.degree)
    }

    fn check(&self, u: &PointSet) -> Result<(), DirError> {
        for p in u {
            for c in [p.x, p.y] {
                if !self.contains_coord(c) {
                    return Err(DirError::NotInField(c));
                }
            }
        }
        Ok(())
    }

    pub fn direction(&self, a: Point, b: Point) -> Direction {
        let t = self.tower;
        match t.div(t.sub(b.y, a.y), t.sub(b.x, a.x)) {
            Some(s) => Direction::Slope(s),
            None => Direction::Infinity,
        }
    }

    /// All directions determined by pairs of points of `u`.
    pub fn direction_set(&self, u: &PointSet) -> Result<DirectionSet, DirError> {
        if u.len() < 2 {
            return Err(DirError::TooSmall);
        }
        self.check(u)?;
        let pts: Vec<Point> = u.iter().copied().collect();
        let mut out = DirectionSet::new();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                out.insert(self.direction(a, b));
            }
        }
        Ok(out)
    }

    /// Every direction, `F_q ∪ {∞}`.
    pub fn all_directions(&self) -> DirectionSet {
        self.field
            .iter()
            .map(|&s| Direction::Slope(s))
            .chain([Direction::Infinity])
            .collect()
    }

    /// `u + (s, t)`.
    pub fn translate(&self, u: &PointSet, s: Elem, t: Elem) -> PointSet {
        u.iter()
            .map(|p| Point::new(self.tower.add(p.x, s), self.tower.add(p.y, t)))
            .collect()
    }

    /// Subfields of the coordinate field, largest first.
    pub fn subfields(&self) -> Vec<Subfield> {
        let p = self.tower.p();
        arith::divisors(u64::from(self.degree))
            .into_iter()
            .rev()
            .map(|e| Subfield {
                prime_degree: e as u32,
                order: p.pow(e as u32),
            })
            .collect()
    }

    /// The largest subfield `K` for which `u` is `K`-linear.
    ///
    /// Embeddings are `F_q`-linear isomorphisms `F_{q^2} → F_q^2`, so `u` is
    /// `K`-linear under some embedding exactly when `u` itself is a
    /// `K`-subspace of `F_q^2`. That is checked directly: closure under
    /// addition, then under multiplication by a generator of `K^*`.
    pub fn classify_linearity(&self, u: &PointSet) -> Result<Option<Subfield>, DirError> {
        if !u.contains(&Point::ORIGIN) {
            return Err(DirError::OriginMissing);
        }
        self.check(u)?;
        let t = self.tower;
        let closed_add = u.iter().all(|a| {
            u.iter()
                .all(|b| u.contains(&Point::new(t.add(a.x, b.x), t.add(a.y, b.y))))
        });
        if !closed_add {
            return Ok(None);
        }
        for k in self.subfields() {
            let kappa = Elem::from_log(t.group_order() / (k.order - 1));
            if u
                .iter()
                .all(|a| u.contains(&Point::new(t.mul(kappa, a.x), t.mul(kappa, a.y))))
            {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Graph `{(x, f(x))}` of a function given by its values on
    /// [`Plane::elements`] in order.
    pub fn graph_of(&self, f: &[Elem]) -> Result<PointSet, DirError> {
        if f.len() != self.field.len() {
            return Err(DirError::InvalidSize(format!(
                "function table has {} entries, field has {}",
                f.len(),
                self.field.len()
            )));
        }
        let u: PointSet = self
            .field
            .iter()
            .zip(f)
            .map(|(&x, &y)| Point::new(x, y))
            .collect();
        self.check(&u)?;
        Ok(u)
    }
}

/// Basis `{u, v}` of `F_{q^2}` over `F_q` with the coordinate map.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub u: Elem,
    pub v: Elem,
    coords: Vec<Point>,
}

impl Embedding {
    pub fn new(tower: &FieldTower, u: Elem, v: Elem) -> Result<Self, DirError> {
        if tower.ext_degree() != 2 {
            return Err(DirError::WrongExtensionDegree(tower.ext_degree()));
        }
        let base = tower.base_field();
        let mut coords = vec![None; tower.order() as usize];
        for &a in &base {
            for &b in &base {
                let x = tower.add(tower.mul(a, u), tower.mul(b, v));
                if coords[x.index()].replace(Point::new(a, b)).is_some() {
                    return Err(DirError::BasisDegenerate);
                }
            }
        }
        Ok(Self {
            u,
            v,
            coords: coords.into_iter().map(|c| c.expect("bijective")).collect(),
        })
    }

    /// `u = 1` and `v` the least-dlog element outside `F_q`.
    pub fn standard(tower: &FieldTower) -> Result<Self, DirError> {
        let v = tower
            .elements()
            .find(|&x| !tower.in_subfield(x, 1))
            .ok_or(DirError::BasisDegenerate)?;
        Self::new(tower, Elem::ONE, v)
    }

    /// `u = 1` and `v` the least-dlog nonzero element outside `S`.
    pub fn for_graph(graph: &CayleyGraph) -> Result<Self, DirError> {
        let v = graph
            .tower()
            .elements()
            .skip(1)
            .find(|&x| !graph.connection().contains(x))
            .ok_or(DirError::BasisDegenerate)?;
        Self::new(graph.tower(), Elem::ONE, v)
    }

    pub fn coords(&self, x: Elem) -> Point {
        self.coords[x.index()]
    }

    pub fn embed(&self, c: &[Elem]) -> PointSet {
        c.iter().map(|&x| self.coords(x)).collect()
    }

    pub fn preimage(&self, tower: &FieldTower, u: &PointSet) -> Vec<Elem> {
        let mut out: Vec<Elem> = u
            .iter()
            .map(|p| tower.add(tower.mul(p.x, self.u), tower.mul(p.y, self.v)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Outcome of checking the direction dichotomy for the graph of one function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallVerdict {
    pub q: u64,
    pub directions: usize,
    /// Largest `K` for which the graph, translated to the origin, is `K`-linear.
    pub linear_over: Option<Subfield>,
    pub holds: bool,
}

/// Either at least `(q+3)/2` directions, or `K`-linear with at least
/// `q/|K| + 1` directions when `K ≠ F_q`.
pub fn verify_ball_dichotomy(plane: &Plane, f: &[Elem]) -> Result<BallVerdict, DirError> {
    let u = plane.graph_of(f)?;
    let q = plane.q();
    let n = plane.direction_set(&u)?.len() as u64;
    let shifted = plane.translate(&u, Elem::ZERO, plane.tower().neg(f[0]));
    let linear_over = plane.classify_linearity(&shifted)?;
    let many = 2 * n >= q + 3;
    let linear_ok = match linear_over {
        None => false,
        Some(k) if k.order == q => true,
        Some(k) => n >= q / k.order + 1,
    };
    Ok(BallVerdict {
        q,
        directions: n as usize,
        linear_over,
        holds: many || linear_ok,
    })
}

/// Largest `q` accepted by [`search_extension`].
pub const EXTENSION_MAX_Q: u64 = 13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub q: u64,
    pub k: usize,
    pub directions: usize,
    /// Admissible `α`: `max(1/2, k/√q) <= α < 1 - |D_U|/(q+1)`, `α <= 1`.
    pub alpha_window: (f64, f64),
    pub hypothesis: bool,
    pub extension: Option<PointSet>,
    /// The hypothesis holds but no extension exists.
    pub contradiction: bool,
}

/// Exhaustively looks for `U' ⊇ U` with `|U'| = q` determining the same
/// directions as `U`.
pub fn search_extension(plane: &Plane, u: &PointSet) -> Result<ExtensionReport, DirError> {
    let q = plane.q();
    if q > EXTENSION_MAX_Q {
        return Err(DirError::ScaleTooLarge {
            q,
            max: EXTENSION_MAX_Q,
        });
    }
    if u.len() as u64 > q {
        return Err(DirError::InvalidSize(format!("|U| = {} exceeds q = {q}", u.len())));
    }
    let k = (q - u.len() as u64) as usize;
    let sqrt_q = (q as f64).sqrt();
    if k as f64 > sqrt_q {
        return Err(DirError::InvalidSize(format!("k = {k} exceeds √q")));
    }
    let dirs = plane.direction_set(u)?;
    let lo = (k as f64 / sqrt_q).max(0.5);
    let hi = 1.0 - dirs.len() as f64 / (q as f64 + 1.0);
    let hypothesis = lo <= 1.0 && lo < hi;

    let cands: Vec<Point> = plane
        .elements()
        .iter()
        .flat_map(|&x| plane.elements().iter().map(move |&y| Point::new(x, y)))
        .filter(|p| !u.contains(p))
        .filter(|&p| u.iter().all(|&a| dirs.contains(&plane.direction(a, p))))
        .collect();
    let compat = DenseGraph::from_fn(cands.len(), |i, j| {
        dirs.contains(&plane.direction(cands[i], cands[j]))
    });
    let extension = compat
        .cliques_of_size(k, &Budget::unlimited())
        .expect("an unlimited budget cannot run out")
        .into_iter()
        .next()
        .map(|c| {
            let mut full = u.clone();
            full.extend(c.into_iter().map(|i| cands[i]));
            full
        });
    Ok(ExtensionReport {
        q,
        k,
        directions: dirs.len(),
        alpha_window: (lo, hi),
        hypothesis,
        contradiction: hypothesis && extension.is_none(),
        extension,
    })
}

/// The direction facts behind the subspace structure of a maximum clique
/// through 0 in a Peisert-type graph with `m` cosets, under
/// [`Embedding::for_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueDirections {
    pub directions: DirectionSet,
    pub m: usize,
    pub infinity_absent: bool,
    pub within_m: bool,
    /// `1 + D·v ⊆ S`.
    pub shifted_in_s: bool,
}

impl CliqueDirections {
    pub fn all_hold(&self) -> bool {
        self.infinity_absent && self.within_m && self.shifted_in_s
    }
}

pub fn clique_directions(graph: &CayleyGraph, c: &VertexSet) -> Result<CliqueDirections, DirError> {
    let tower = graph.tower();
    let m = decompose_cosets(graph.connection(), tower)
        .map_err(|e| DirError::InvalidSize(e.to_string()))?
        .m;
    let e = Embedding::for_graph(graph)?;
    let plane = Plane::base(tower);
    let d = plane.direction_set(&e.embed(&c.elems()))?;
    let shifted_in_s = d.iter().all(|dir| match dir {
        Direction::Infinity => false,
        Direction::Slope(s) => graph
            .connection()
            .contains(tower.add(Elem::ONE, tower.mul(*s, e.v))),
    });
    Ok(CliqueDirections {
        infinity_absent: !d.contains(&Direction::Infinity),
        within_m: d.len() <= m,
        shifted_in_s,
        m,
        directions: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_field_embeds_on_the_x_axis() {
        let t = FieldTower::build(5, 1, 2).unwrap();
        let e = Embedding::standard(&t).unwrap();
        let u = e.embed(&t.base_field());
        assert!(u.iter().all(|p| p.y.is_zero()));
        let plane = Plane::base(&t);
        let d = plane.direction_set(&u).unwrap();
        assert_eq!(d, [Direction::Slope(Elem::ZERO)].into_iter().collect());
        assert_eq!(e.embed(&[Elem::ZERO]), [Point::ORIGIN].into_iter().collect());
        assert_eq!(plane.classify_linearity(&u).unwrap().unwrap().order, 5);
    }

    #[test]
    fn degenerate_basis_is_rejected() {
        let t = FieldTower::build(3, 1, 2).unwrap();
        let two = t.from_int(2);
        assert_eq!(
            Embedding::new(&t, Elem::ONE, two).unwrap_err(),
            DirError::BasisDegenerate
        );
        let cubic = FieldTower::build(3, 1, 3).unwrap();
        assert_eq!(
            Embedding::standard(&cubic).unwrap_err(),
            DirError::WrongExtensionDegree(3)
        );
    }

    #[test]
    fn whole_plane_determines_everything() {
        let t = FieldTower::build(7, 1, 1).unwrap();
        let plane = Plane::top(&t);
        let all: PointSet = plane
            .elements()
            .iter()
            .flat_map(|&x| plane.elements().iter().map(move |&y| Point::new(x, y)))
            .collect();
        assert_eq!(plane.direction_set(&all).unwrap(), plane.all_directions());
        assert_eq!(plane.all_directions().len(), 8);
        assert_eq!(
            plane.direction_set(&[Point::ORIGIN].into_iter().collect()),
            Err(DirError::TooSmall)
        );
    }

    #[test]
    fn frobenius_graph_on_f9() {
        let t = FieldTower::build(3, 2, 1).unwrap();
        let plane = Plane::top(&t);
        let f: Vec<Elem> = plane.elements().iter().map(|&x| t.pow(x, 3)).collect();
        let v = verify_ball_dichotomy(&plane, &f).unwrap();
        assert_eq!(v.directions, 4);
        assert_eq!(v.linear_over.unwrap().order, 3);
        assert!(v.holds);
        let id = plane.elements().to_vec();
        let v = verify_ball_dichotomy(&plane, &id).unwrap();
        assert_eq!((v.directions, v.linear_over.unwrap().order), (1, 9));
    }

    #[test]
    fn line_minus_a_point_extends() {
        let t = FieldTower::build(7, 1, 1).unwrap();
        let plane = Plane::top(&t);
        let u: PointSet = plane
            .elements()
            .iter()
            .skip(1)
            .map(|&x| Point::new(x, t.mul(x, Elem::from_log(2))))
            .collect();
        let r = search_extension(&plane, &u).unwrap();
        assert!(r.hypothesis);
        let ext = r.extension.unwrap();
        assert!(ext.contains(&Point::ORIGIN));
        assert_eq!(ext.len(), 7);
        let big = FieldTower::build(17, 1, 1).unwrap();
        assert!(matches!(
            search_extension(&Plane::top(&big), &u),
            Err(DirError::ScaleTooLarge { q: 17, .. })
        ));
    }
}
