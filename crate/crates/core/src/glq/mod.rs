//! `GL(n, q)` as concrete data: conjugacy class labels, representatives,
//! class sizes and full enumeration.

mod group;
pub mod subspace;

pub use group::{GroupData, GroupElement};

use crate::error::{Error, Result};
use crate::gfq::{companion, enumerate_irreducibles, reciprocal, FieldTable, Matrix, Poly};
use crate::partitions::{enumerate_partitions, gl_order, Partition};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::fmt;

/// An element of `Λ_n`: a finite map from monic irreducibles other than `X`
/// to nonempty partitions, stored sorted by polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct ClassIndex {
    parts: Vec<(Poly, Partition)>,
}

impl ClassIndex {
    pub fn new(mut parts: Vec<(Poly, Partition)>) -> Self {
        parts.retain(|(_, p)| !p.is_empty());
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        for w in parts.windows(2) {
            assert!(w[0].0 != w[1].0, "repeated polynomial in class index");
        }
        ClassIndex { parts }
    }
    pub fn empty() -> Self {
        ClassIndex { parts: vec![] }
    }
    pub fn single(f: Poly, p: Partition) -> Self {
        ClassIndex::new(vec![(f, p)])
    }
    pub fn entries(&self) -> &[(Poly, Partition)] {
        &self.parts
    }
    /// `σ(f)`, with `∅` off the support.
    pub fn get(&self, f: &Poly) -> Partition {
        self.parts
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Partition::empty)
    }
    /// Replaces `σ(f)`; an empty partition removes `f` from the support.
    pub fn with(&self, f: &Poly, p: Partition) -> ClassIndex {
        let mut v: Vec<(Poly, Partition)> = self.parts.iter().filter(|(g, _)| g != f).cloned().collect();
        v.push((f.clone(), p));
        ClassIndex::new(v)
    }
    pub fn without(&self, f: &Poly) -> ClassIndex {
        self.with(f, Partition::empty())
    }
    /// Disjoint union of supports.
    pub fn join(&self, other: &ClassIndex) -> ClassIndex {
        let mut v = self.parts.clone();
        for (f, p) in &other.parts {
            assert!(self.get(f).is_empty(), "join of overlapping supports");
            v.push((f.clone(), p.clone()));
        }
        ClassIndex::new(v)
    }
    /// `‖σ‖ = Σ |σ(f)| deg f`.
    pub fn norm(&self) -> usize {
        self.parts.iter().map(|(f, p)| f.deg() * p.size()).sum()
    }
    pub fn is_primary(&self) -> bool {
        self.parts.len() == 1
    }
    /// `σ*(f*) = σ(f)`.
    pub fn star(&self, field: &FieldTable) -> ClassIndex {
        ClassIndex::new(
            self.parts
                .iter()
                .map(|(f, p)| (reciprocal(f, field).expect("f(0) ≠ 0 on Φ"), p.clone()))
                .collect(),
        )
    }
    fn key(&self) -> (Vec<usize>, Vec<&Poly>, Vec<Reverse<&Partition>>) {
        (
            self.parts.iter().map(|(f, _)| f.deg()).collect(),
            self.parts.iter().map(|(f, _)| f).collect(),
            self.parts.iter().map(|(_, p)| Reverse(p)).collect(),
        )
    }
    /// Text form used in reports, e.g. `{X+1:(2), X^2+X+1:(1)}`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl Ord for ClassIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for ClassIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, p)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}:{p}")?;
        }
        write!(f, "}}")
    }
}

/// Monic irreducibles other than `X`, by degree `1..=n` (index 0 empty).
pub fn irreducibles_up_to(field: &FieldTable, n: usize) -> Vec<Vec<Poly>> {
    let mut v = vec![vec![]];
    for d in 1..=n {
        v.push(enumerate_irreducibles(field, d));
    }
    v
}

/// All of `Λ_n` in canonical order.
pub fn enumerate_lambda_n(field: &FieldTable, n: usize) -> Vec<ClassIndex> {
    let irr = irreducibles_up_to(field, n);
    enumerate_lambda_with(&irr, n)
}

pub(crate) fn enumerate_lambda_with(irr: &[Vec<Poly>], n: usize) -> Vec<ClassIndex> {
    let polys: Vec<&Poly> = irr.iter().flatten().collect();
    let mut out = Vec::new();
    fn rec(
        polys: &[&Poly],
        i: usize,
        rest: usize,
        cur: &mut Vec<(Poly, Partition)>,
        out: &mut Vec<ClassIndex>,
    ) {
        if rest == 0 {
            out.push(ClassIndex::new(cur.clone()));
            return;
        }
        if i == polys.len() {
            return;
        }
        let d = polys[i].deg();
        for m in (1..=rest / d).rev() {
            for p in enumerate_partitions(m) {
                cur.push((polys[i].clone(), p));
                rec(polys, i + 1, rest - m * d, cur, out);
                cur.pop();
            }
        }
        rec(polys, i + 1, rest, cur, out);
    }
    rec(&polys, 0, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Block `C(f, k)`: `k` copies of `C(f)` on the diagonal with identity
/// blocks on the superdiagonal.
pub fn jordan_block(f: &Poly, k: usize, field: &FieldTable) -> Matrix {
    let c = companion(f, field);
    let d = f.deg();
    let mut m = Matrix::zero(d * k, d * k);
    for b in 0..k {
        for i in 0..d {
            for j in 0..d {
                m.set(b * d + i, b * d + j, c.get(i, j));
            }
            if b + 1 < k {
                m.set(b * d + i, (b + 1) * d + i, 1);
            }
        }
    }
    m
}

/// Jordan-form representative `R_σ`.
pub fn class_rep(sigma: &ClassIndex, field: &FieldTable) -> Matrix {
    let blocks: Vec<Matrix> = sigma
        .entries()
        .iter()
        .flat_map(|(f, p)| p.parts().iter().map(move |&k| (f, k)))
        .map(|(f, k)| jordan_block(f, k, field))
        .collect();
    Matrix::block_diag(&blocks)
}

fn big_pow(q: usize, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), k)
}

/// Centralizer order `|G| / |C_σ|`.
pub fn centralizer_order(sigma: &ClassIndex, q: usize) -> BigInt {
    let mut acc = BigInt::one();
    for (f, lam) in sigma.entries() {
        let d = f.deg();
        let conj = lam.conjugate();
        for i in 1..=lam.size() {
            let s = conj.partial_sum(i);
            for j in 1..=lam.multiplicity(i) {
                // q^{d s}(1 − q^{−dj}) = q^{d(s−j)} (q^{dj} − 1)
                acc *= big_pow(q, d * (s - j)) * (big_pow(q, d * j) - 1);
            }
        }
    }
    acc
}

/// `|C_σ|`.
pub fn class_size(sigma: &ClassIndex, q: usize) -> BigInt {
    let order = gl_order(sigma.norm(), q as u64);
    let c = centralizer_order(sigma, q);
    debug_assert!((&order % &c) == BigInt::from(0));
    order / c
}

/// Class identification by kernel dimensions of `f(g)^j`.
#[derive(Clone, Debug)]
pub struct ClassIdentifier {
    irr: Vec<Vec<Poly>>,
}

impl ClassIdentifier {
    pub fn new(field: &FieldTable, n: usize) -> Self {
        let mut irr = irreducibles_up_to(field, n);
        irr[1].insert(0, Poly::x());
        ClassIdentifier { irr }
    }

    fn factor(&self, f: &Poly, field: &FieldTable) -> Vec<(Poly, usize)> {
        let mut rest = f.clone();
        let mut out = Vec::new();
        for d in 1..self.irr.len() {
            let Some(deg) = rest.degree() else { break };
            if deg == 0 {
                break;
            }
            if 2 * d > deg {
                out.push((rest.clone(), 1));
                rest = Poly::one();
                break;
            }
            for g in &self.irr[d] {
                let mut k = 0;
                loop {
                    let (quo, rem) = rest.divrem(g, field);
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quo;
                    k += 1;
                }
                if k > 0 {
                    out.push((g.clone(), k));
                }
            }
        }
        if rest.deg() > 0 {
            out.push((rest, 1));
        }
        out.sort();
        out
    }

    pub fn identify(&self, g: &Matrix, field: &FieldTable) -> Result<ClassIndex> {
        let n = g.rows();
        let cp = g.charpoly(field);
        if cp.coeffs()[0] == 0 {
            return Err(Error::SingularMatrix);
        }
        let mut parts = Vec::new();
        for (f, mult) in self.factor(&cp, field) {
            let d = f.deg();
            let fg = f.eval_matrix(g, field);
            let mut power = fg.clone();
            let mut partial = vec![0usize];
            for j in 1..=mult {
                if j > 1 {
                    power = power.mul(&fg, field);
                }
                let dim = power.nullity(field);
                debug_assert_eq!(dim % d, 0);
                partial.push(dim / d);
                if dim / d == mult {
                    break;
                }
            }
            // partial sums of the conjugate partition
            let conj: Vec<usize> = partial.windows(2).map(|w| w[1] - w[0]).collect();
            let lam = Partition::new(conj).conjugate();
            debug_assert_eq!(lam.size(), mult);
            parts.push((f, lam));
        }
        let sigma = ClassIndex::new(parts);
        debug_assert_eq!(sigma.norm(), n);
        Ok(sigma)
    }
}

/// Class of `g` in `GL(n, q)`.
pub fn identify_class(g: &Matrix, field: &FieldTable) -> Result<ClassIndex> {
    ClassIdentifier::new(field, g.rows()).identify(g, field)
}

/// Whether some `t` independent vectors are fixed: `dim ker(g − I) ≥ t`.
pub fn fixes_t_space_pointwise(sigma: &ClassIndex, t: usize, field: &FieldTable) -> bool {
    sigma.get(&Poly::linear(1, field)).len() >= t
}

/// Whether some `t`-dimensional subspace is invariant, via subset sums of
/// `deg f · c_f` with `0 ≤ c_f ≤ |σ(f)|`.
pub fn stabilizes_t_space(sigma: &ClassIndex, t: usize) -> bool {
    let n = sigma.norm();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for (f, lam) in sigma.entries() {
        let mut next = vec![false; n + 1];
        for (s, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
            for c in 0..=lam.size() {
                let v = s + c * f.deg();
                if v <= n {
                    next[v] = true;
                }
            }
        }
        reach = next;
    }
    t <= n && reach[t]
}

/// Canonical representative choice: for `σ ≠ σ*` keep the smaller.
pub fn in_omega(sigma: &ClassIndex, field: &FieldTable) -> bool {
    let s = sigma.star(field);
    *sigma <= s
}

/// `det R_σ = Π_f ((−1)^{deg f} f(0))^{|σ(f)|}`.
pub fn class_det(sigma: &ClassIndex, field: &FieldTable) -> u8 {
    sigma.entries().iter().fold(1u8, |acc, (f, p)| {
        let d = crate::gfq::companion_det(f, field);
        field.mul(acc, field.pow(d, p.size() as u64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;

    #[test]
    fn lambda_counts() {
        let f3 = build_field(3).unwrap();
        assert_eq!(enumerate_lambda_n(&f3, 2).len(), 8);
        let f2 = build_field(2).unwrap();
        assert_eq!(enumerate_lambda_n(&f2, 3).len(), 6);
        assert_eq!(enumerate_lambda_n(&f2, 1).len(), 1);
        assert_eq!(enumerate_lambda_n(&f2, 4).len(), 14);
        // GL(3,q) has q^3 − q classes, GL(2,q) has q^2 − 1
        assert_eq!(enumerate_lambda_n(&f3, 3).len(), 24);
        for q in [4u64, 5, 7] {
            let f = build_field(q).unwrap();
            assert_eq!(enumerate_lambda_n(&f, 2).len() as u64, q * q - 1);
        }
        let v = enumerate_lambda_n(&f3, 3);
        let mut s = v.clone();
        s.dedup();
        assert_eq!(s.len(), v.len());
        assert!(v.iter().all(|c| c.norm() == 3));
    }

    #[test]
    fn representatives() {
        let f3 = build_field(3).unwrap();
        let one = Poly::linear(1, &f3);
        let id = ClassIndex::single(one.clone(), Partition::column(3));
        assert_eq!(class_rep(&id, &f3), Matrix::identity(3));
        let j = ClassIndex::single(one.clone(), Partition::row(2));
        assert_eq!(class_rep(&j, &f3).to_rows(), vec![vec![1, 1], vec![0, 1]]);
        let f2 = build_field(2).unwrap();
        let s = ClassIndex::new(vec![
            (Poly::linear(1, &f2), Partition::row(1)),
            (Poly::new(vec![1, 1, 1]), Partition::row(1)),
        ]);
        let r = class_rep(&s, &f2);
        let expect = Matrix::block_diag(&[
            Matrix::identity(1),
            companion(&Poly::new(vec![1, 1, 1]), &f2),
        ]);
        assert_eq!(r, expect);
    }

    #[test]
    fn class_size_examples() {
        let f3 = build_field(3).unwrap();
        let one = Poly::linear(1, &f3);
        assert_eq!(class_size(&ClassIndex::single(one.clone(), Partition::column(2)), 3), BigInt::from(1));
        assert_eq!(class_size(&ClassIndex::single(Poly::new(vec![1, 0, 1]), Partition::row(1)), 3), BigInt::from(6));
        assert_eq!(class_size(&ClassIndex::single(one, Partition::row(2)), 3), BigInt::from(8));
    }

    #[test]
    fn sizes_sum_to_order() {
        for (q, n) in [(2u64, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (4, 3), (2, 5)] {
            let f = build_field(q).unwrap();
            let total: BigInt = enumerate_lambda_n(&f, n).iter().map(|s| class_size(s, q as usize)).sum();
            assert_eq!(total, gl_order(n, q), "q={q} n={n}");
        }
    }

    #[test]
    fn identify_examples() {
        let f3 = build_field(3).unwrap();
        let d = Matrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        assert_eq!(
            identify_class(&d, &f3).unwrap(),
            ClassIndex::new(vec![
                (Poly::linear(1, &f3), Partition::row(1)),
                (Poly::linear(2, &f3), Partition::row(1)),
            ])
        );
        let j = Matrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            identify_class(&j, &f3).unwrap(),
            ClassIndex::single(Poly::linear(1, &f3), Partition::row(2))
        );
        let c = companion(&Poly::new(vec![1, 0, 1]), &f3);
        assert_eq!(
            identify_class(&c, &f3).unwrap(),
            ClassIndex::single(Poly::new(vec![1, 0, 1]), Partition::row(1))
        );
        assert!(matches!(
            identify_class(&Matrix::zero(2, 2), &f3),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn rep_roundtrip() {
        for (q, n) in [(2u64, 4), (3, 3), (4, 2), (2, 5), (5, 2)] {
            let f = build_field(q).unwrap();
            let id = ClassIdentifier::new(&f, n);
            for s in enumerate_lambda_n(&f, n) {
                let r = class_rep(&s, &f);
                assert_eq!(id.identify(&r, &f).unwrap(), s);
                assert_eq!(r.det(&f), class_det(&s, &f));
            }
        }
    }

    #[test]
    fn pointwise_matches_rank() {
        for (q, n) in [(2u64, 4), (3, 3), (4, 2)] {
            let f = build_field(q).unwrap();
            for s in enumerate_lambda_n(&f, n) {
                let r = class_rep(&s, &f);
                let rk = r.sub(&Matrix::identity(n), &f).rank(&f);
                for t in 0..=n {
                    assert_eq!(fixes_t_space_pointwise(&s, t, &f), rk <= n - t);
                }
            }
        }
    }

    #[test]
    fn subspace_examples() {
        let f2 = build_field(2).unwrap();
        let cubic = ClassIndex::single(Poly::new(vec![1, 1, 0, 1]), Partition::row(1));
        assert!(!stabilizes_t_space(&cubic, 1));
        assert!(!fixes_t_space_pointwise(&cubic, 1, &f2));
        let mixed = ClassIndex::new(vec![
            (Poly::linear(1, &f2), Partition::row(1)),
            (Poly::new(vec![1, 1, 1]), Partition::row(1)),
        ]);
        assert!(fixes_t_space_pointwise(&mixed, 1, &f2));
        assert!(stabilizes_t_space(&mixed, 2));
        let id = ClassIndex::single(Poly::linear(1, &f2), Partition::column(3));
        for t in 0..=3 {
            assert!(stabilizes_t_space(&id, t));
            assert!(fixes_t_space_pointwise(&id, t, &f2));
        }
    }

    #[test]
    fn star_involution() {
        for (q, n) in [(3u64, 3), (4, 2), (5, 2), (2, 4)] {
            let f = build_field(q).unwrap();
            let all = enumerate_lambda_n(&f, n);
            for s in &all {
                let st = s.star(&f);
                assert!(all.contains(&st));
                assert_eq!(st.star(&f), *s);
                // the inverse of a representative sits in the starred class
                let inv = class_rep(s, &f).inverse(&f).unwrap();
                assert_eq!(identify_class(&inv, &f).unwrap(), st);
            }
        }
    }
}
