//! Dense polynomials over a prime field, just enough to find and verify a
//! field modulus: multiplication and reduction, modular exponentiation, gcd
//! and Rabin's irreducibility test.
//!
//! Coefficients are stored low degree first and kept trimmed (no trailing
//! zeros); the zero polynomial is the empty vector.

pub(crate) type Poly = Vec<u32>;

#[inline]
fn mulmod_p(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn pow_mod_p(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_p(acc, base, p);
        }
        base = mulmod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Poly = acc.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (`m` nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let dm = degree(m).expect("division by the zero polynomial");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let lead_inv = inv_mod_p(m[dm], p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = mulmod_p(r[dr], lead_inv, p);
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate() {
            let t = mulmod_p(factor, c, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalise to monic
    if let Some(d) = degree(&x) {
        let inv = inv_mod_p(x[d], p);
        for c in x.iter_mut() {
            *c = mulmod_p(*c, inv, p);
        }
    }
    x
}

/// `x^(p^k) mod f`, by repeated p-th powering.
fn frobenius_x(f: &[u32], k: usize, p: u32) -> Poly {
    let mut acc = rem(&[0, 1], f, p);
    for _ in 0..k {
        acc = powmod(&acc, p as u64, f, p);
    }
    acc
}

/// Rabin's test: a monic `f` of degree `d` is irreducible over F_p iff
/// `x^(p^d) = x mod f` and `gcd(x^(p^(d/r)) - x, f) = 1` for each prime `r | d`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    for r in super::arith::prime_factors(d as u64) {
        let h = frobenius_x(f, d / r as usize, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    sub(&frobenius_x(f, d, p), &rem(&x, f, p), p).is_empty()
}

/// Polynomial whose coefficient digits are the base-p digits of `code`,
/// padded to `len` coefficients (not trimmed).
pub(crate) fn from_code(mut code: u64, p: u32, len: usize) -> Poly {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = (code % p as u64) as u32;
        code /= p as u64;
    }
    out
}

pub(crate) fn to_code(a: &[u32], p: u32) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}
