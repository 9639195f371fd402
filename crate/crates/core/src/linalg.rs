//! Exact Gaussian elimination over rationals and cyclotomic fields.

use crate::cyclotomic::Cyclotomic;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field scalar.  `zero_like`/`one_like` carry context (the
/// cyclotomic order) from an existing value.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn is_zero_s(&self) -> bool;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    fn inv_s(&self) -> Option<Self>;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl Scalar for BigRational {
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_s(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

impl Scalar for Cyclotomic {
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_s(&self) -> Option<Self> {
        self.inv()
    }
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one(self.order())
    }
}

/// Reduced row echelon form in place; returns pivot columns.  Only the first
/// `ncols` columns are used for pivoting.
pub fn rref_in_place<T: Scalar>(rows: &mut [Vec<T>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_s()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv_s().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul_s(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_s() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero_s() {
                    *x = x.sub_s(&f.mul_s(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = rows.to_vec();
    let n = m[0].len();
    rref_in_place(&mut m, n).len()
}

/// Unique solution of an augmented system (`nvars` unknowns, last column the
/// right-hand side); `None` if inconsistent or underdetermined.
pub fn solve_augmented<T: Scalar>(mut rows: Vec<Vec<T>>, nvars: usize) -> Option<Vec<T>> {
    let pivots = rref_in_place(&mut rows, nvars + 1);
    if pivots.contains(&nvars) || pivots.len() != nvars {
        return None;
    }
    Some((0..nvars).map(|i| rows[i][nvars].clone()).collect())
}

/// Solves `A x = b` for square invertible `A`.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let rows = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    solve_augmented(rows, n)
}

pub fn inverse<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    if n == 0 {
        return Some(vec![]);
    }
    let z = a[0][0].zero_like();
    let o = a[0][0].one_like();
    let mut rows: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { o.clone() } else { z.clone() }));
            r
        })
        .collect();
    let pivots = rref_in_place(&mut rows, n);
    if pivots.len() != n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det<T: Scalar>(a: &[Vec<T>]) -> Option<T> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let mut m = a.to_vec();
    let mut d = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero_s()) else {
            return Some(a[0][0].zero_like());
        };
        if p != c {
            m.swap(p, c);
            d = d.zero_like().sub_s(&d);
        }
        d = d.mul_s(&m[c][c]);
        let inv = m[c][c].inv_s().unwrap();
        for i in c + 1..n {
            if m[i][c].is_zero_s() {
                continue;
            }
            let f = m[i][c].mul_s(&inv);
            for j in c..n {
                let v = f.mul_s(&m[c][j]);
                m[i][j] = m[i][j].sub_s(&v);
            }
        }
    }
    Some(d)
}

pub fn mat_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].zero_like();
                    for k in 0..inner {
                        if !row[k].is_zero_s() && !b[k][j].is_zero_s() {
                            acc = acc.add_s(&row[k].mul_s(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
