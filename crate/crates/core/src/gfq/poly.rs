use super::{FieldElement, FieldTable, Matrix};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Polynomial over GF(q), coefficients lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }
    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }
    /// `X − a`.
    pub fn linear(a: FieldElement, field: &FieldTable) -> Self {
        Poly::new(vec![field.neg(a), 1])
    }
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// Degree, panicking on the zero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }
    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// All monic polynomials of degree `d`, in polynomial order.
    pub fn monics(field: &FieldTable, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.q() as u64;
        let total = q.pow(d as u32);
        (0..total).map(move |code| {
            let mut c = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                c.push((x % q) as u8);
                x /= q;
            }
            // constant term compares first, so it must vary slowest
            c.reverse();
            c.push(1);
            Poly { coeffs: c }
        })
    }

    pub fn add(&self, other: &Poly, field: &FieldTable) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u8], i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new(
            (0..n)
                .map(|i| field.add(get(&self.coeffs, i), get(&other.coeffs, i)))
                .collect(),
        )
    }
    pub fn sub(&self, other: &Poly, field: &FieldTable) -> Poly {
        self.add(&other.scale(field.neg(1), field), field)
    }
    pub fn scale(&self, c: FieldElement, field: &FieldTable) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }
    pub fn mul(&self, other: &Poly, field: &FieldTable) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u8; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }
    pub fn pow(&self, k: usize, field: &FieldTable) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self, field))
    }
    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, d: &Poly, field: &FieldTable) -> (Poly, Poly) {
        let dd = d.deg();
        let lead_inv = field.inv(d.coeffs[dd]);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![0u8; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = field.mul(r[k], lead_inv);
            if c == 0 {
                continue;
            }
            quo[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = field.sub(r[idx], field.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }
    pub fn eval(&self, x: FieldElement, field: &FieldTable) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
    pub fn monic(&self, field: &FieldTable) -> Poly {
        let lead = *self.coeffs.last().expect("zero polynomial");
        self.scale(field.inv(lead), field)
    }
    /// `f(A)` for a square matrix `A`.
    pub fn eval_matrix(&self, a: &Matrix, field: &FieldTable) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zero(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a, field);
            for i in 0..n {
                acc.set(i, i, field.add(acc.get(i, i), c));
            }
        }
        acc
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficients print as field indices, e.g. `X^2+X+2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, c) => write!(f, "{c}X")?,
                (k, 1) => write!(f, "X^{k}")?,
                (k, c) => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}
