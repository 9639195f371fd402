//! Arithmetic in GF(q) for small prime powers, with polynomials and dense
//! matrices over the field.

mod matrix;
mod poly;

pub use matrix::Matrix;
pub use poly::Poly;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Field elements are encoded by their index in `[0, q)`: the element
/// `Σ c_i y^i` of `GF(p)[y]/(modulus)` has index `Σ c_i p^i`.
pub type FieldElement = u8;

pub const MAX_Q: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub alpha: FieldElement,
    pub omega_order: usize,
}

/// Addition and multiplication tables for GF(q) together with discrete
/// logarithms to the base `alpha`.
#[derive(Clone, Debug)]
pub struct FieldTable {
    q: usize,
    p: usize,
    e: usize,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u32>,
    alpha: u8,
}

impl PartialEq for FieldTable {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldTable {}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Helpers over GF(p) only, used to find the modulus.
fn prime_poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let c = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * bi) % p) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    (1..p).find(|x| (a * x) % p == 1).expect("nonzero residue")
}

fn digits(mut n: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % base);
        n /= base;
    }
    out
}

fn prime_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    for dd in 1..=d / 2 {
        for code in 0..p.pow(dd as u32) {
            let mut g = digits(code, p, dd);
            g.push(1);
            if prime_poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible of degree `e` over GF(p), comparing coefficient
/// sequences from the constant term upwards.
fn least_irreducible(p: u64, e: usize) -> Vec<u64> {
    let count = p.pow(e as u32);
    (0..count)
        .map(|code| {
            // the constant term is the most significant digit of the order
            let mut c: Vec<u64> = digits(code, p, e);
            c.reverse();
            c.push(1);
            c
        })
        .find(|f| prime_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FieldTable {
    pub fn q(&self) -> usize {
        self.q
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// Coefficients of the defining polynomial over GF(p), lowest first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    pub fn generator(&self) -> Generator {
        Generator {
            alpha: self.alpha,
            omega_order: self.q - 1,
        }
    }
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }
    /// `alpha^k`, with `k` taken modulo `q − 1`.
    pub fn exp(&self, k: i64) -> u8 {
        let m = (self.q - 1) as i64;
        self.exp[k.rem_euclid(m) as usize]
    }
    /// Discrete log base `alpha` of a nonzero element.
    pub fn log(&self, a: u8) -> usize {
        assert!(a != 0, "log of zero");
        self.log[a as usize] as usize
    }
    pub fn pow(&self, a: u8, k: u64) -> u8 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        self.exp((self.log(a) as u64 * (k % (self.q as u64 - 1))) as i64)
    }
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
    pub fn units(&self) -> impl Iterator<Item = u8> {
        1..self.q as u8
    }
    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u8) -> usize {
        let m = self.q - 1;
        let l = self.log(a);
        m / num_integer::gcd(m, l)
    }
}

/// Builds GF(q) for `2 ≤ q ≤ 64`.
pub fn build_field(q: u64) -> Result<FieldTable> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_Q {
        return Err(Error::TooLarge {
            what: "q",
            value: q,
            limit: MAX_Q,
        });
    }
    let (qu, pu, eu) = (q as usize, p as usize, e as usize);
    let modulus = least_irreducible(p, eu);
    let dig = |x: usize| digits(x as u64, p, eu);
    let undig = |c: &[u64]| c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u8;

    let mut add = vec![0u8; qu * qu];
    let mut mul = vec![0u8; qu * qu];
    for a in 0..qu {
        let da = dig(a);
        for b in 0..qu {
            let db = dig(b);
            let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * qu + b] = undig(&s);
            let mut prod = vec![0u64; 2 * eu];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            while prod.last() == Some(&0) {
                prod.pop();
            }
            let mut r = if prod.is_empty() {
                prod
            } else {
                prime_poly_rem(&prod, &modulus, p)
            };
            r.resize(eu, 0);
            mul[a * qu + b] = undig(&r);
        }
    }
    let neg: Vec<u8> = (0..qu)
        .map(|a| (0..qu).find(|&b| add[a * qu + b] == 0).unwrap() as u8)
        .collect();
    let mut inv = vec![0u8; qu];
    for a in 1..qu {
        inv[a] = (1..qu).find(|&b| mul[a * qu + b] == 1).unwrap() as u8;
    }
    let order_of = |a: usize| {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = mul[x * qu + a] as usize;
            k += 1;
        }
        k
    };
    let alpha = (1..qu).find(|&a| order_of(a) == qu - 1).unwrap() as u8;
    let mut exp = vec![0u8; qu - 1];
    let mut log = vec![0u32; qu];
    let mut x = 1u8;
    for (k, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = k as u32;
        x = mul[x as usize * qu + alpha as usize];
    }
    Ok(FieldTable {
        q: qu,
        p: pu,
        e: eu,
        modulus: modulus.iter().map(|&c| c as u8).collect(),
        add,
        mul,
        neg,
        inv,
        exp,
        log,
        alpha,
    })
}

/// Monic irreducibles of degree `d`, excluding `X`, in polynomial order.
pub fn enumerate_irreducibles(field: &FieldTable, d: usize) -> Vec<Poly> {
    assert!(d >= 1);
    let q = field.q();
    let smaller: Vec<Vec<Poly>> = (1..=d / 2)
        .map(|k| enumerate_all_irreducibles(field, k))
        .collect();
    let mut out: Vec<Poly> = Poly::monics(field, d)
        .filter(|f| f.coeffs()[0] != 0)
        .filter(|f| {
            smaller
                .iter()
                .flatten()
                .all(|g| !f.divrem(g, field).1.is_zero())
        })
        .collect();
    out.sort();
    debug_assert!(d > 1 || out.len() == q - 1);
    out
}

// Includes X in degree one; used for trial division.
fn enumerate_all_irreducibles(field: &FieldTable, d: usize) -> Vec<Poly> {
    let mut v = enumerate_irreducibles(field, d);
    if d == 1 {
        v.insert(0, Poly::x());
    }
    v
}

/// Factorization into monic irreducibles with multiplicities, ordered by
/// factor.  The input must be monic.
pub fn factor_poly(f: &Poly, field: &FieldTable) -> Vec<(Poly, usize)> {
    assert!(f.is_monic(), "factor_poly needs a monic polynomial");
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 1 {
        if 2 * d > rest.degree().unwrap() {
            out.push((rest.clone(), 1));
            break;
        }
        for g in enumerate_all_irreducibles(field, d) {
            let mut k = 0;
            loop {
                let (quo, rem) = rest.divrem(&g, field);
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                k += 1;
            }
            if k > 0 {
                out.push((g, k));
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Monic `f* = f(0)^{-1} x^d f(1/x)`.
pub fn reciprocal(f: &Poly, field: &FieldTable) -> Result<Poly> {
    let c = f.coeffs();
    if c.is_empty() || c[0] == 0 {
        return Err(Error::ZeroConstantTerm);
    }
    let s = field.inv(c[0]);
    let rev: Vec<u8> = c.iter().rev().map(|&a| field.mul(a, s)).collect();
    Ok(Poly::new(rev))
}

/// Companion matrix with ones on the subdiagonal and `−f_0, …, −f_{d−1}`
/// in the last column.
pub fn companion(f: &Poly, field: &FieldTable) -> Matrix {
    assert!(f.is_monic());
    let d = f.degree().expect("nonzero polynomial");
    let mut m = Matrix::zero(d, d);
    for i in 1..d {
        m.set(i, i - 1, 1);
    }
    for i in 0..d {
        m.set(i, d - 1, field.neg(f.coeffs()[i]));
    }
    m
}

/// `det C(f) = (−1)^d f(0)`.
pub fn companion_det(f: &Poly, field: &FieldTable) -> FieldElement {
    let d = f.degree().unwrap();
    let c0 = f.coeffs()[0];
    if d % 2 == 0 {
        c0
    } else {
        field.neg(c0)
    }
}

/// Gauss necklace count of monic irreducibles of degree `d` (including `X`).
pub fn necklace_count(q: u64, d: u64) -> u64 {
    let mobius = |n: u64| -> i64 {
        let mut n = n;
        let mut k = 0;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                k += 1;
            }
            p += 1;
        }
        if n > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let s: i64 = (1..=d)
        .filter(|e| d % e == 0)
        .map(|e| mobius(e) * q.pow((d / e) as u32) as i64)
        .sum();
    (s / d as i64) as u64
}
