//! Finite-field towers `F_p ⊂ F_q ⊂ F_{q^N}` with full discrete-log tables.
//!
//! The top field is built once as `F_p[x]/(f)` for the first monic
//! irreducible `f` in enumeration order, and its smallest primitive element
//! `g` (again in enumeration order) fixes the discrete-log convention.
//! After construction every element is handled through its exponent:
//! [`Elem`] stores `0` for the zero element and `t + 1` for `g^t`, so the
//! natural ordering of elements is "zero first, then by discrete log".
//! Addition goes through a Zech-logarithm table, making every field
//! operation a table lookup plus a little integer arithmetic.

pub mod arith;
mod cache;
pub(crate) mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use cache::TOWER_CACHE_VERSION;

/// Default cap on the number of elements of the top field.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;

/// Hard cap imposed by the 32-bit element encoding.
const MAX_TABLE: u64 = 1 << 31;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum FfError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("extension degrees must be positive (n = {n}, N = {ext_degree})")]
    InvalidDegree { n: u32, ext_degree: u32 },
    #[error("field of order {p}^{degree} exceeds the table limit of {limit} elements")]
    TooLarge { p: u64, degree: u32, limit: u64 },
    #[error("could not factor {0} within the configured trial-division effort")]
    FactorizationFailed(u64),
    #[error("{k} does not divide {of}")]
    NotADivisor { k: u32, of: u32 },
    #[error("character index {m} out of range 0..={max}")]
    OutOfRange { m: u64, max: u64 },
    #[error("modulus is not an irreducible monic polynomial of degree {0}")]
    InvalidModulus(u32),
    #[error("generator is not a primitive element")]
    InvalidGenerator,
    #[error("tower cache: {0}")]
    Cache(String),
    #[error("tower cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),
}

/// An odd prime power `q = p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u32,
    pub n: u32,
}

impl PrimePower {
    pub fn new(p: u64, n: u32) -> Result<Self, FfError> {
        if p == 2 || !arith::is_prime(p) || p > u32::MAX as u64 {
            return Err(FfError::NotPrime(p));
        }
        if n == 0 {
            return Err(FfError::InvalidDegree { n, ext_degree: 1 });
        }
        arith::checked_pow(p, n).ok_or(FfError::TooLarge {
            p,
            degree: n,
            limit: u64::MAX,
        })?;
        Ok(Self { p: p as u32, n })
    }

    /// Parses a prime power given as its value.
    pub fn from_order(q: u64) -> Result<Self, FfError> {
        let (p, n) = arith::prime_power_parts(q).ok_or(FfError::NotPrime(q))?;
        Self::new(p, n)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.n)
        }
    }
}

/// Limits applied while building a tower.
#[derive(Debug, Clone, Copy)]
pub struct TowerConfig {
    /// Largest admissible top-field order.
    pub table_limit: u64,
    /// Largest trial divisor used to factor `q^N - 1`.
    pub factor_effort: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        Self {
            table_limit: DEFAULT_TABLE_LIMIT,
            factor_effort: 1 << 20,
        }
    }
}

/// An element of the top field: `0` is zero, `t + 1` is `g^t`.
///
/// The derived ordering is the canonical "minimal dlog" order used for
/// tie-breaking throughout the crate.
///
/// Serialized as its discrete log, with zero written as `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.dlog_code())
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let code = i64::deserialize(d)?;
        if !(-1..i64::from(u32::MAX)).contains(&code) {
            return Err(serde::de::Error::custom(format!("dlog code {code} out of range")));
        }
        Ok(Elem::from_dlog_code(code))
    }
}

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn from_log(t: u64) -> Elem {
        Elem(t as u32 + 1)
    }

    /// Rebuilds an element from its dense index (see [`Elem::index`]).
    #[inline]
    pub fn from_index(i: usize) -> Elem {
        Elem(i as u32)
    }

    /// Dense index in `0..q^N`, usable as a vertex id.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete log, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u64> {
        self.0.checked_sub(1).map(u64::from)
    }

    /// Discrete log with zero encoded as `-1`; the serialization convention
    /// for element lists in reports.
    #[inline]
    pub fn dlog_code(self) -> i64 {
        self.0 as i64 - 1
    }

    pub fn from_dlog_code(code: i64) -> Elem {
        Elem((code + 1) as u32)
    }
}

/// Summary of a tower's representation, embedded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub ext_degree: u32,
    /// Monic modulus over F_p, coefficients low degree first.
    pub modulus: Vec<u32>,
    /// Primitive element, coefficients low degree first.
    pub generator: Vec<u32>,
}

/// A tower `F_p ⊂ F_q ⊂ F_{q^N}` with `q = p^n`, with complete log tables.
///
/// Immutable once built; share it behind an `Arc`.
pub struct FieldTower {
    base: PrimePower,
    ext_degree: u32,
    order: u64,
    modulus: Vec<u32>,
    generator: Vec<u32>,
    group_factors: Vec<u64>,
    /// exp[t] = polynomial code of g^t
    exp: Vec<u32>,
    /// log[code] = t, NO_LOG for code 0
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), NO_LOG when 1 + g^k = 0
    zech: Vec<u32>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("base", &self.base)
            .field("ext_degree", &self.ext_degree)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl FieldTower {
    /// Builds `F_p ⊂ F_{p^n} ⊂ F_{p^{nN}}` with the default configuration.
    pub fn build(p: u64, n: u32, ext_degree: u32) -> Result<Self, FfError> {
        Self::build_with(p, n, ext_degree, &TowerConfig::default())
    }

    pub fn build_with(
        p: u64,
        n: u32,
        ext_degree: u32,
        cfg: &TowerConfig,
    ) -> Result<Self, FfError> {
        let (base, degree, order, factors) = Self::check_parameters(p, n, ext_degree, cfg)?;
        let pp = base.p;
        let modulus = (0..order)
            .map(|code| {
                let mut f = poly::from_code(code, pp, degree as usize);
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, pp))
            .expect("an irreducible polynomial of every degree exists");
        let generator = (1..order)
            .map(|code| {
                let mut g = poly::from_code(code, pp, degree as usize);
                poly::trim(&mut g);
                g
            })
            .find(|g| is_primitive(g, &modulus, pp, order - 1, &factors))
            .expect("the multiplicative group of a finite field is cyclic");
        Self::assemble(base, ext_degree, order, modulus, generator, factors)
    }

    /// Rebuilds a tower from a recorded modulus and generator, verifying both.
    pub fn from_parts(
        p: u64,
        n: u32,
        ext_degree: u32,
        modulus: Vec<u32>,
        generator: Vec<u32>,
        cfg: &TowerConfig,
    ) -> Result<Self, FfError> {
        let (base, degree, order, factors) = Self::check_parameters(p, n, ext_degree, cfg)?;
        let pp = base.p;
        if modulus.len() != degree as usize + 1
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= pp)
            || !poly::is_irreducible(&modulus, pp)
        {
            return Err(FfError::InvalidModulus(degree));
        }
        let mut generator = generator;
        if generator.iter().any(|&c| c >= pp) || generator.len() > degree as usize {
            return Err(FfError::InvalidGenerator);
        }
        poly::trim(&mut generator);
        if !is_primitive(&generator, &modulus, pp, order - 1, &factors) {
            return Err(FfError::InvalidGenerator);
        }
        Self::assemble(base, ext_degree, order, modulus, generator, factors)
    }

    fn check_parameters(
        p: u64,
        n: u32,
        ext_degree: u32,
        cfg: &TowerConfig,
    ) -> Result<(PrimePower, u32, u64, Vec<u64>), FfError> {
        if p == 2 || !arith::is_prime(p) || p > u32::MAX as u64 {
            return Err(FfError::NotPrime(p));
        }
        if n == 0 || ext_degree == 0 {
            return Err(FfError::InvalidDegree { n, ext_degree });
        }
        let degree = n.checked_mul(ext_degree).ok_or(FfError::TooLarge {
            p,
            degree: u32::MAX,
            limit: cfg.table_limit,
        })?;
        let limit = cfg.table_limit.min(MAX_TABLE);
        let order = arith::checked_pow(p, degree)
            .filter(|&o| o <= limit)
            .ok_or(FfError::TooLarge {
                p,
                degree,
                limit,
            })?;
        let factors = arith::factor_with_effort(order - 1, cfg.factor_effort)
            .ok_or(FfError::FactorizationFailed(order - 1))?;
        Ok((PrimePower { p: p as u32, n }, degree, order, factors))
    }

    fn assemble(
        base: PrimePower,
        ext_degree: u32,
        order: u64,
        modulus: Vec<u32>,
        generator: Vec<u32>,
        group_factors: Vec<u64>,
    ) -> Result<Self, FfError> {
        let p = base.p;
        let degree = modulus.len() - 1;
        let n = (order - 1) as usize;

        // rows[i] = g * x^i mod f, so multiplying by g is a D x D matrix product
        let rows: Vec<Vec<u32>> = (0..degree)
            .map(|i| {
                let mut xi = vec![0u32; i + 1];
                xi[i] = 1;
                let mut r = poly::mulmod(&xi, &generator, &modulus, p);
                r.resize(degree, 0);
                r
            })
            .collect();

        let mut exp = vec![0u32; n];
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = vec![0u32; degree];
        cur[0] = 1;
        let mut next = vec![0u64; degree];
        for (t, slot) in exp.iter_mut().enumerate() {
            let code = poly::to_code(&cur, p) as u32;
            if log[code as usize] != NO_LOG {
                return Err(FfError::InvalidGenerator);
            }
            log[code as usize] = t as u32;
            *slot = code;
            next.iter_mut().for_each(|c| *c = 0);
            for (i, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (acc, &r) in next.iter_mut().zip(&rows[i]) {
                    *acc += c as u64 * r as u64;
                }
            }
            for (dst, &acc) in cur.iter_mut().zip(&next) {
                *dst = (acc % p as u64) as u32;
            }
        }
        if cur.first() != Some(&1) || cur.iter().skip(1).any(|&c| c != 0) {
            return Err(FfError::InvalidGenerator);
        }

        let zech = exp
            .iter()
            .map(|&code| {
                let plus_one = if code % p == p - 1 { code - (p - 1) } else { code + 1 };
                log[plus_one as usize]
            })
            .collect();

        Ok(Self {
            base,
            ext_degree,
            order,
            modulus,
            generator,
            group_factors,
            exp,
            log,
            zech,
        })
    }

    // ---------------------------------------------------------------------
    // Shape
    // ---------------------------------------------------------------------

    /// The base field `F_q`.
    pub fn base(&self) -> PrimePower {
        self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p as u64
    }

    /// Order of the base field `F_q`.
    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// `N`, the degree of the top field over the base.
    pub fn ext_degree(&self) -> u32 {
        self.ext_degree
    }

    /// Degree of the top field over the prime field.
    pub fn prime_degree(&self) -> u32 {
        self.base.n * self.ext_degree
    }

    /// Number of elements of the top field.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `q^N - 1`.
    pub fn group_order(&self) -> u64 {
        self.order - 1
    }

    /// Distinct primes dividing `q^N - 1`.
    pub fn group_order_factors(&self) -> &[u64] {
        &self.group_factors
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator_coeffs(&self) -> &[u32] {
        &self.generator
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.base.p,
            n: self.base.n,
            ext_degree: self.ext_degree,
            modulus: self.modulus.clone(),
            generator: self.generator.clone(),
        }
    }

    /// Hex SHA-256 of the exponent table.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for &c in &self.exp {
            h.update(c.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order as u32).map(Elem)
    }

    pub fn generator(&self) -> Elem {
        Elem::from_log(1 % self.group_order())
    }

    // ---------------------------------------------------------------------
    // Representation changes
    // ---------------------------------------------------------------------

    /// Coefficient vector over F_p (low degree first, length `nN`).
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let code = match x.log() {
            None => 0,
            Some(t) => self.exp[t as usize] as u64,
        };
        poly::from_code(code, self.base.p, self.prime_degree() as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Elem {
        let reduced = poly::rem(
            &coeffs.iter().map(|&c| c % self.base.p).collect::<Vec<_>>(),
            &self.modulus,
            self.base.p,
        );
        self.from_code(poly::to_code(&reduced, self.base.p))
    }

    fn from_code(&self, code: u64) -> Elem {
        match self.log[code as usize] {
            NO_LOG => Elem::ZERO,
            t => Elem(t + 1),
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Elem {
        let p = self.base.p as i64;
        self.from_code(k.rem_euclid(p) as u64)
    }

    // ---------------------------------------------------------------------
    // Arithmetic
    // ---------------------------------------------------------------------

    #[inline]
    fn reduce(&self, t: u64) -> u64 {
        t % self.group_order()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = (self.order - 1) as u32;
        let i = a.0 - 1;
        let j = b.0 - 1;
        let k = if j >= i { j - i } else { j + n - i };
        match self.zech[k as usize] {
            NO_LOG => Elem::ZERO,
            z => {
                let s = i as u64 + z as u64;
                let s = if s >= n as u64 { s - n as u64 } else { s };
                Elem(s as u32 + 1)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match a.log() {
            None => a,
            Some(t) => Elem::from_log(self.reduce(t + self.group_order() / 2)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match (a.log(), b.log()) {
            (Some(i), Some(j)) => Elem::from_log(self.reduce(i + j)),
            _ => Elem::ZERO,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        a.log()
            .map(|t| Elem::from_log(self.reduce(self.group_order() - t)))
    }

    /// `a / b`; `None` when `b` is zero.
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match a.log() {
            _ if e == 0 => Elem::ONE,
            None => Elem::ZERO,
            Some(t) => {
                let n = self.group_order() as u128;
                Elem::from_log(((t as u128 * e as u128) % n) as u64)
            }
        }
    }

    /// `x^(q^k)`, the k-th power of the Frobenius over the base field.
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        let mut y = x;
        for _ in 0..k {
            y = self.pow(y, self.q());
        }
        y
    }

    // ---------------------------------------------------------------------
    // Subfields and degrees
    // ---------------------------------------------------------------------

    /// Whether `x` lies in `F_{p^e}` (requires `e | nN`).
    pub fn in_prime_subfield(&self, x: Elem, e: u32) -> bool {
        debug_assert!(self.prime_degree() % e == 0);
        match x.log() {
            None => true,
            Some(t) => {
                let sub = (self.p()).pow(e) - 1;
                t % (self.group_order() / sub) == 0
            }
        }
    }

    /// Whether `x` lies in `F_{q^k}` (requires `k | N`).
    pub fn in_subfield(&self, x: Elem, k: u32) -> bool {
        self.in_prime_subfield(x, self.base.n * k)
    }

    /// Least `k >= 1` with `x^(q^k) = x`: the degree of `x` over `F_q`.
    pub fn element_degree(&self, x: Elem) -> u32 {
        (1..=self.ext_degree)
            .find(|&k| self.ext_degree % k == 0 && self.in_subfield(x, k))
            .expect("every element lies in the top field")
    }

    /// Degree of `x` over the prime field.
    pub fn element_prime_degree(&self, x: Elem) -> u32 {
        let d = self.prime_degree();
        (1..=d)
            .find(|&e| d % e == 0 && self.in_prime_subfield(x, e))
            .expect("every element lies in the top field")
    }

    /// The subfield `F_{q^k}` of the top field, in canonical order.
    pub fn subfield(&self, k: u32) -> Result<Vec<Elem>, FfError> {
        if k == 0 || self.ext_degree % k != 0 {
            return Err(FfError::NotADivisor {
                k,
                of: self.ext_degree,
            });
        }
        self.prime_subfield(self.base.n * k)
    }

    /// The subfield `F_{p^e}` of the top field, in canonical order.
    pub fn prime_subfield(&self, e: u32) -> Result<Vec<Elem>, FfError> {
        let d = self.prime_degree();
        if e == 0 || d % e != 0 {
            return Err(FfError::NotADivisor { k: e, of: d });
        }
        let step = self.group_order() / (self.p().pow(e) - 1);
        Ok(std::iter::once(Elem::ZERO)
            .chain((0..self.group_order()).step_by(step as usize).map(Elem::from_log))
            .collect())
    }

    /// The base field `F_q` inside the top field.
    pub fn base_field(&self) -> Vec<Elem> {
        self.subfield(1).expect("1 divides N")
    }

    // ---------------------------------------------------------------------
    // Characters
    // ---------------------------------------------------------------------

    /// The multiplicative character with `χ(g) = e^{2πi m/(q^N - 1)}`.
    pub fn char(&self, m: u64) -> Result<MultChar, FfError> {
        let n = self.group_order();
        if m >= n {
            return Err(FfError::OutOfRange { m, max: n - 1 });
        }
        Ok(MultChar {
            m,
            group_order: n,
        })
    }

    /// Exponent of `χ(x)` over the denominator `q^N - 1`; `None` is the
    /// zero marker (`χ(0) = 0`).
    #[inline]
    pub fn char_value(&self, chi: &MultChar, x: Elem) -> Option<u64> {
        debug_assert_eq!(chi.group_order, self.group_order());
        x.log().map(|t| chi.exponent_of_log(t))
    }

    /// All characters, trivial first.
    pub fn characters(&self) -> impl Iterator<Item = MultChar> + '_ {
        let n = self.group_order();
        (0..n).map(move |m| MultChar { m, group_order: n })
    }
}

fn is_primitive(g: &[u32], modulus: &[u32], p: u32, group_order: u64, factors: &[u64]) -> bool {
    if g.is_empty() {
        return false;
    }
    if poly::powmod(g, group_order, modulus, p) != [1] {
        return false;
    }
    factors
        .iter()
        .all(|&r| poly::powmod(g, group_order / r, modulus, p) != [1])
}

/// A multiplicative character `χ(g^t) = e^{2πi m t/(q^N - 1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultChar {
    m: u64,
    group_order: u64,
}

impl MultChar {
    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }

    /// Least `d` with `χ^d` trivial.
    pub fn order(&self) -> u64 {
        self.group_order / arith::gcd(self.m, self.group_order)
    }

    /// Exponent (over `q^N - 1`) of `χ(g^t)`.
    #[inline]
    pub fn exponent_of_log(&self, t: u64) -> u64 {
        ((self.m as u128 * t as u128) % self.group_order as u128) as u64
    }

    /// Residue `r` modulo the character order with `χ(g^t) = e^{2πi r/order}`.
    #[inline]
    pub fn reduced_of_log(&self, t: u64) -> u64 {
        self.exponent_of_log(t) / (self.group_order / self.order())
    }

    /// Pointwise product of two characters.
    pub fn product(&self, other: &MultChar) -> MultChar {
        debug_assert_eq!(self.group_order, other.group_order);
        MultChar {
            m: (self.m + other.m) % self.group_order,
            group_order: self.group_order,
        }
    }
}
