//! Exact arithmetic in `Q(ζ_m)`.
//!
//! Values are kept reduced modulo the cyclotomic polynomial `Φ_m`, so the
//! coefficient vector on `1, ζ, …, ζ^{φ(m)−1}` is canonical and equality is
//! structural.  Coefficients share one positive denominator.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

struct Ctx {
    m: u32,
    phi: usize,
    /// `x^k mod Φ_m` for `0 ≤ k < m`.
    powers: Vec<Vec<i64>>,
    max_power_bits: u64,
}

fn int_poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1);
    let mut q = vec![0i64; r.len() - dd];
    for k in (dd..r.len()).rev() {
        let c = r[k];
        q[k - dd] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[k - dd + i] -= c * d;
            }
        }
    }
    assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

fn cyclotomic_poly(m: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        let pd = cyclotomic_poly(d, memo);
        p = int_poly_divexact(&p, &pd);
    }
    memo.insert(m, p.clone());
    p
}

fn ctx(m: u32) -> Arc<Ctx> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Ctx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.read().unwrap().get(&m) {
        return c.clone();
    }
    assert!(m >= 1);
    let phi_poly = cyclotomic_poly(m, &mut HashMap::new());
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    if phi == 0 {
        unreachable!("Φ_m has positive degree");
    }
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow coefficient
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for i in 0..phi {
                next[i] -= top * phi_poly[i];
            }
        }
        cur = next;
    }
    let max_abs = powers.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(1);
    let c = Arc::new(Ctx {
        m,
        phi,
        powers,
        max_power_bits: 64 - max_abs.leading_zeros() as u64,
    });
    cache.write().unwrap().insert(m, c.clone());
    c
}

/// Euler totient via the degree of `Φ_m`.
pub fn totient(m: u32) -> usize {
    ctx(m).phi
}

/// Element of `Q(ζ_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

impl Cyclotomic {
    fn normalized(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if num.iter().all(|x| x.is_zero()) {
            return Cyclotomic {
                order,
                num,
                den: BigInt::one(),
            };
        }
        if !den.is_one() {
            let mut g = den.clone();
            for x in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(x);
            }
            if !g.is_one() {
                for x in num.iter_mut() {
                    *x = &*x / &g;
                }
                den /= g;
            }
        }
        Cyclotomic { order, num, den }
    }

    pub fn zero(order: u32) -> Self {
        let phi = ctx(order).phi;
        Cyclotomic {
            order,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }
    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }
    pub fn from_int(order: u32, v: i64) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = BigInt::from(v);
        z
    }
    pub fn from_bigint(order: u32, v: BigInt) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = v;
        z
    }
    pub fn from_rational(order: u32, r: &BigRational) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = r.numer().clone();
        Self::normalized(order, z.num, r.denom().clone())
    }
    /// `ζ_m^k`.
    pub fn zeta(order: u32, k: i64) -> Self {
        let c = ctx(order);
        let k = k.rem_euclid(order as i64) as usize;
        Cyclotomic {
            order,
            num: c.powers[k].iter().map(|&x| BigInt::from(x)).collect(),
            den: BigInt::one(),
        }
    }
    /// `Σ counts[k] ζ_m^k` for an unreduced integer vector.
    pub fn from_exponent_counts(order: u32, counts: &[i64]) -> Self {
        let c = ctx(order);
        let mut acc = vec![0i128; c.phi];
        for (k, &n) in counts.iter().enumerate() {
            if n != 0 {
                for (a, &p) in acc.iter_mut().zip(&c.powers[k % order as usize]) {
                    *a += n as i128 * p as i128;
                }
            }
        }
        Self::normalized(order, acc.into_iter().map(BigInt::from).collect(), BigInt::one())
    }
    /// `Σ coeffs[k] ζ_m^k` for an arbitrary (unreduced) rational vector.
    pub fn from_coeffs(order: u32, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero(order);
        for (k, r) in coeffs.iter().enumerate() {
            if !r.is_zero() {
                acc = acc + Self::zeta(order, k as i64).scale(r);
            }
        }
        acc
    }

    pub fn order(&self) -> u32 {
        self.order
    }
    /// Length-`m` canonical coefficient vector (zero past `φ(m)`).
    pub fn coeffs(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self
            .num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect();
        v.resize(self.order as usize, BigRational::zero());
        v
    }
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|x| x.is_zero())
    }
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }
    pub fn is_algebraic_integer_form(&self) -> bool {
        self.den.is_one()
    }

    /// Same value viewed in `Q(ζ_big)`; `order` must divide `big`.
    pub fn embed(&self, big: u32) -> Self {
        if big == self.order {
            return self.clone();
        }
        assert_eq!(big % self.order, 0, "embedding needs order | big");
        let step = (big / self.order) as usize;
        let c = ctx(big);
        let mut acc = vec![BigInt::zero(); c.phi];
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&c.powers[(k * step) % big as usize]) {
                if p != 0 {
                    *a += x * p;
                }
            }
        }
        Self::normalized(big, acc, self.den.clone())
    }
    /// Smallest order `d | m` whose field contains the value, tested over
    /// divisors of the current order.
    pub fn reduce_order(&self) -> Self {
        let m = self.order;
        let mut divisors: Vec<u32> = (1..=m).filter(|d| m % d == 0).collect();
        divisors.sort();
        for d in divisors {
            if d == m {
                break;
            }
            if let Some(v) = self.try_restrict(d) {
                return v;
            }
        }
        self.clone()
    }
    /// Representation in `Q(ζ_d)` when the value lies there.
    pub fn try_restrict(&self, d: u32) -> Option<Self> {
        if self.order % d != 0 {
            return None;
        }
        if self.is_rational() {
            return Some(Self::from_rational(d, &self.to_rational().unwrap()));
        }
        // Solve in the power basis of Q(ζ_d): embed basis vectors and
        // match coefficients exactly.
        let cd = ctx(d);
        let basis: Vec<Cyclotomic> = (0..cd.phi).map(|k| Self::zeta(d, k as i64).embed(self.order)).collect();
        let target = self.coeffs();
        let phi_m = ctx(self.order).phi;
        let rows: Vec<Vec<BigRational>> = (0..phi_m)
            .map(|r| {
                let mut row: Vec<BigRational> = basis
                    .iter()
                    .map(|b| BigRational::new(b.num[r].clone(), b.den.clone()))
                    .collect();
                row.push(target[r].clone());
                row
            })
            .collect();
        let sol = crate::linalg::solve_augmented(rows, cd.phi)?;
        let v = Self::normalized_from_rationals(d, &sol);
        (v.embed(self.order) == *self).then_some(v)
    }
    fn normalized_from_rationals(order: u32, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let num = coeffs
            .iter()
            .map(|r| r.numer() * (&den / r.denom()))
            .collect();
        Self::normalized(order, num, den)
    }

    pub fn conj(&self) -> Self {
        let c = ctx(self.order);
        let m = self.order as usize;
        let mut acc = vec![BigInt::zero(); c.phi];
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(&c.powers[(m - k) % m]) {
                if p != 0 {
                    *a += x * p;
                }
            }
        }
        Self::normalized(self.order, acc, self.den.clone())
    }
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }
    pub fn scale(&self, r: &BigRational) -> Self {
        Self::normalized(
            self.order,
            self.num.iter().map(|x| x * r.numer()).collect(),
            &self.den * r.denom(),
        )
    }
    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::normalized(
            self.order,
            self.num.iter().map(|x| x * k).collect(),
            self.den.clone(),
        )
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let l = a.order.lcm(&b.order);
            (a.embed(l), b.embed(l))
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = Self::unify(self, other);
            return a.add_ref(&b);
        }
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Self::normalized(self.order, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Self::normalized(self.order, num, &self.den * &other.den)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = Self::unify(self, other);
            return a.mul_ref(&b);
        }
        if other.is_rational() {
            return self.scale(&other.to_rational().unwrap());
        }
        if self.is_rational() {
            return other.scale(&self.to_rational().unwrap());
        }
        let c = ctx(self.order);
        let num = mul_kernel(&c, &self.num, &other.num);
        Self::normalized(self.order, num, &self.den * &other.den)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.to_rational() {
            return Some(Self::from_rational(self.order, &r.recip()));
        }
        let phi = ctx(self.order).phi;
        // columns: self·ζ^j
        let cols: Vec<Cyclotomic> = (0..phi).map(|j| self.mul_ref(&Self::zeta(self.order, j as i64))).collect();
        let rows: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<BigRational> = cols
                    .iter()
                    .map(|c| BigRational::new(c.num[r].clone(), c.den.clone()))
                    .collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let sol = crate::linalg::solve_augmented(rows, phi)?;
        Some(Self::normalized_from_rationals(self.order, &sol))
    }
    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul_ref(&other.inv()?))
    }

    /// Complex approximation under `ζ_m ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.order as f64;
        let den = big_to_f64(&self.den);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let v = big_to_f64(x) / den;
            let a = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }

    /// Sign of a real value, decided exactly.
    pub fn real_sign(&self) -> Ordering {
        debug_assert!(self.is_real(), "sign of a non-real cyclotomic");
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.to_rational() {
            return r.cmp(&BigRational::zero());
        }
        let (re, _) = self.to_complex();
        let weight: f64 = self.num.iter().map(|x| big_to_f64(x).abs()).sum::<f64>() / big_to_f64(&self.den);
        let err = 1e-12 * (weight + 1.0);
        if re.abs() > err {
            return re.partial_cmp(&0.0).unwrap();
        }
        let mut bits = 128u64;
        loop {
            if let Some(s) = fixed_point_sign(self, bits) {
                return s;
            }
            bits *= 2;
        }
    }
    /// Order of two real values.
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).real_sign()
    }
    pub fn abs_real(&self) -> Self {
        if self.real_sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
    pub fn to_f64(&self) -> f64 {
        self.to_complex().0
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.sign() == Sign::Minus {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn mul_kernel(c: &Ctx, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let phi = c.phi;
    let m = c.m as usize;
    let ba = a.iter().map(bits).max().unwrap_or(0);
    let bb = b.iter().map(bits).max().unwrap_or(0);
    let lg = 64 - (phi as u64 + 1).leading_zeros() as u64;
    if ba + bb + 2 * lg + c.max_power_bits + 2 < 126 {
        let ai: Vec<i128> = a.iter().map(|x| x.to_i128().unwrap()).collect();
        let bi: Vec<i128> = b.iter().map(|x| x.to_i128().unwrap()).collect();
        let mut prod = vec![0i128; 2 * phi - 1];
        for (i, &x) in ai.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in bi.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let mut out: Vec<i128> = prod[..phi].to_vec();
        for (k, &v) in prod.iter().enumerate().skip(phi) {
            if v != 0 {
                for (o, &p) in out.iter_mut().zip(&c.powers[k % m]) {
                    *o += v * p as i128;
                }
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut prod = vec![BigInt::zero(); 2 * phi - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    let mut out: Vec<BigInt> = prod[..phi].to_vec();
    for (k, v) in prod.iter().enumerate().skip(phi) {
        if !v.is_zero() {
            for (o, &p) in out.iter_mut().zip(&c.powers[k % m]) {
                if p != 0 {
                    *o += v * p;
                }
            }
        }
    }
    out
}

// Fixed-point evaluation of Σ num_k cos(2πk/m) with `bits` fractional bits;
// `None` when the error bound does not separate the sum from zero.
fn fixed_point_sign(x: &Cyclotomic, bits: u64) -> Option<Ordering> {
    let guard = 32;
    let prec = bits + guard;
    let one = BigInt::one() << prec;
    let pi = fixed_pi(prec);
    let m = x.order as i64;
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    for (k, c) in x.num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // angle 2πk/m folded into [0, π]
        let kk = (k as i64).rem_euclid(m);
        let kk = kk.min(m - kk);
        let theta = (&pi * BigInt::from(2 * kk)) / BigInt::from(m);
        let cos = fixed_cos(&theta, prec, &one);
        sum += c * cos;
        err += c.abs() * BigInt::from(64 + 8 * prec);
    }
    match sum.abs().cmp(&err) {
        Ordering::Greater => Some(if sum.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }),
        _ => None,
    }
}

fn fixed_arctan_inv(x: i64, prec: u64) -> BigInt {
    let one = BigInt::one() << prec;
    let x2 = BigInt::from(x * x);
    let mut term = &one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

fn fixed_pi(prec: u64) -> BigInt {
    fixed_arctan_inv(5, prec) * 16 - fixed_arctan_inv(239, prec) * 4
}

fn fixed_cos(theta: &BigInt, prec: u64, one: &BigInt) -> BigInt {
    let t2 = (theta * theta) >> prec;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1i64;
    loop {
        term = -((&term * &t2) >> prec) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    sum
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}
impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_ref(rhs)
    }
}
impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}
impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_ref(&-rhs.clone())
    }
}
impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}
impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}
impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Self {
        Cyclotomic {
            order: self.order,
            num: self.num.into_iter().map(|x| -x).collect(),
            den: self.den,
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let r = BigRational::new(x.clone(), self.den.clone());
            let neg = r.is_negative();
            if !first || neg {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = r.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z{}^{k}", self.order)?,
                _ => write!(f, "{a}*z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u32,
    coeffs: Vec<String>,
}

/// Rational as `"p/q"` (or `"p"` for integers).
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_str(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

impl Cyclotomic {
    /// Length-`m` coefficient strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(rational_to_string).collect()
    }
    pub fn from_coeff_strings(order: u32, s: &[String]) -> Option<Self> {
        let c: Option<Vec<BigRational>> = s.iter().map(|x| rational_from_str(x)).collect();
        let c = c?;
        if c.len() != order as usize {
            return None;
        }
        let v = Self::from_coeffs(order, &c);
        // canonical input round-trips exactly
        (v.coeffs() == c).then_some(v)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloRepr {
            order: self.order,
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CycloRepr::deserialize(d)?;
        Cyclotomic::from_coeff_strings(r.order, &r.coeffs)
            .ok_or_else(|| serde::de::Error::custom("non-canonical cyclotomic coefficients"))
    }
}

impl Cyclotomic {
    /// Rationals as `"p/q"`, anything else in the smallest `Q(ζ_d)` holding it.
    pub fn compact_json(&self) -> serde_json::Value {
        match self.to_rational() {
            Some(r) => serde_json::Value::String(rational_to_string(&r)),
            None => serde_json::to_value(self.reduce_order()).expect("cyclotomic serializes"),
        }
    }
}

/// `#[serde(serialize_with)]` adapters built on [`Cyclotomic::compact_json`].
pub mod compact {
    use super::Cyclotomic;
    use serde::Serialize;

    pub fn one<S: serde::Serializer>(c: &Cyclotomic, s: S) -> Result<S::Ok, S::Error> {
        c.compact_json().serialize(s)
    }
    pub fn many<S: serde::Serializer>(v: &[Cyclotomic], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Cyclotomic::compact_json).collect::<Vec<_>>().serialize(s)
    }
    pub fn grid<S: serde::Serializer>(v: &[Vec<Cyclotomic>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(Cyclotomic::compact_json).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
    pub fn opt<S: serde::Serializer>(c: &Option<Cyclotomic>, s: S) -> Result<S::Ok, S::Error> {
        c.as_ref().map(Cyclotomic::compact_json).serialize(s)
    }
}
