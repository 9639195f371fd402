use super::{class_rep, class_size, enumerate_lambda_n, in_omega, ClassIdentifier, ClassIndex};
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Matrix};
use crate::partitions::gl_order;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::HashMap;

pub type GroupElement = Matrix;

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub index: ClassIndex,
    pub rep: Matrix,
    /// Element id of the representative.
    pub rep_id: u32,
    /// Size from the centralizer formula.
    pub size: u64,
    /// Size counted during enumeration.
    pub counted: u64,
}

/// Fully enumerated `GL(n, q)`.  Elements are numbered by increasing
/// base-q code of their row-major entries.
#[derive(Clone, Debug)]
pub struct GroupData {
    field: FieldTable,
    n: usize,
    codes: Vec<u64>,
    entries: Vec<u8>,
    class_of: Vec<u32>,
    inverse: Vec<u32>,
    classes: Vec<ClassInfo>,
    class_lookup: HashMap<ClassIndex, usize>,
    star: Vec<usize>,
    omega: Vec<usize>,
    identity: u32,
}

impl GroupData {
    /// Enumerates `GL(n, q)`; fails if the group has more than
    /// `max_elements` elements.
    pub fn build(field: &FieldTable, n: usize, max_elements: u64) -> Result<GroupData> {
        assert!(n >= 1);
        let q = field.q();
        let order = gl_order(n, q as u64);
        let order_u = order.to_u64().unwrap_or(u64::MAX);
        if order_u > max_elements {
            return Err(Error::BudgetExceeded {
                what: "group elements",
                needed: order_u,
                limit: max_elements,
            });
        }
        let total = (q as u64).pow((n * n) as u32);
        let codes: Vec<u64> = (0..total)
            .into_par_iter()
            .filter(|&c| Matrix::from_code(c, n, n, q).det(field) != 0)
            .collect();
        assert_eq!(codes.len() as u64, order_u);
        let mut entries = Vec::with_capacity(codes.len() * n * n);
        for &c in &codes {
            entries.extend_from_slice(Matrix::from_code(c, n, n, q).data());
        }

        let lambda = enumerate_lambda_n(field, n);
        let class_lookup: HashMap<ClassIndex, usize> =
            lambda.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let ident = ClassIdentifier::new(field, n);
        let class_of: Vec<u32> = (0..codes.len())
            .into_par_iter()
            .map(|i| {
                let m = Matrix::from_vec(n, n, entries[i * n * n..(i + 1) * n * n].to_vec());
                let s = ident.identify(&m, field).expect("enumerated elements are invertible");
                class_lookup[&s] as u32
            })
            .collect();
        let mut counted = vec![0u64; lambda.len()];
        for &c in &class_of {
            counted[c as usize] += 1;
        }

        let mut g = GroupData {
            field: field.clone(),
            n,
            codes,
            entries,
            class_of,
            inverse: vec![],
            classes: vec![],
            class_lookup,
            star: vec![],
            omega: vec![],
            identity: 0,
        };
        g.identity = g.lookup(&Matrix::identity(n)).unwrap();
        g.inverse = (0..g.order())
            .into_par_iter()
            .map(|i| {
                let inv = g.matrix(i as u32).inverse(field).unwrap();
                g.lookup(&inv).unwrap()
            })
            .collect();
        g.classes = lambda
            .iter()
            .zip(&counted)
            .map(|(s, &cnt)| {
                let rep = class_rep(s, field);
                ClassInfo {
                    index: s.clone(),
                    rep_id: g.lookup(&rep).unwrap(),
                    rep,
                    size: class_size(s, q).to_u64().unwrap(),
                    counted: cnt,
                }
            })
            .collect();
        g.star = lambda.iter().map(|s| g.class_lookup[&s.star(field)]).collect();
        g.omega = lambda
            .iter()
            .enumerate()
            .filter(|(_, s)| in_omega(s, field))
            .map(|(i, _)| i)
            .collect();
        Ok(g)
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> usize {
        self.codes.len()
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }
    pub fn class(&self, k: usize) -> &ClassInfo {
        &self.classes[k]
    }
    pub fn class_id(&self, sigma: &ClassIndex) -> Option<usize> {
        self.class_lookup.get(sigma).copied()
    }
    pub fn star(&self) -> &[usize] {
        &self.star
    }
    pub fn omega(&self) -> &[usize] {
        &self.omega
    }
    pub fn identity(&self) -> u32 {
        self.identity
    }
    pub fn identity_class(&self) -> usize {
        self.class_of[self.identity as usize] as usize
    }
    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }
    pub fn inverse(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }
    pub fn code(&self, x: u32) -> u64 {
        self.codes[x as usize]
    }
    pub fn entries(&self, x: u32) -> &[u8] {
        let nn = self.n * self.n;
        &self.entries[x as usize * nn..(x as usize + 1) * nn]
    }
    pub fn matrix(&self, x: u32) -> Matrix {
        Matrix::from_vec(self.n, self.n, self.entries(x).to_vec())
    }
    pub fn lookup(&self, m: &Matrix) -> Option<u32> {
        self.lookup_code(m.code(self.field.q()))
    }
    pub fn lookup_code(&self, code: u64) -> Option<u32> {
        self.codes.binary_search(&code).ok().map(|i| i as u32)
    }
    /// Product `xy`.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let n = self.n;
        let f = &self.field;
        let (a, b) = (self.entries(x), self.entries(y));
        let q = f.q() as u64;
        let mut code = 0u64;
        let mut place = 1u64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u8;
                for k in 0..n {
                    s = f.add(s, f.mul(a[i * n + k], b[k * n + j]));
                }
                code += s as u64 * place;
                place *= q;
            }
        }
        self.lookup_code(code).expect("product of group elements")
    }
    /// `x g x⁻¹`.
    pub fn conjugate(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(x, g), self.inverse(x))
    }
    pub fn pow(&self, x: u32, k: usize) -> u32 {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }
    pub fn element_order(&self, x: u32) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
    /// Elements listed by class.
    pub fn elements_of_class(&self, k: usize) -> Vec<u32> {
        (0..self.order() as u32).filter(|&x| self.class_of(x) == k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;

    #[test]
    fn small_groups() {
        for (q, n, order, classes) in [(3u64, 2, 48, 8), (2, 3, 168, 6), (2, 2, 6, 3), (4, 2, 180, 15)] {
            let f = build_field(q).unwrap();
            let g = GroupData::build(&f, n, 1_000_000).unwrap();
            assert_eq!(g.order(), order);
            assert_eq!(g.num_classes(), classes);
            for c in g.classes() {
                assert_eq!(c.size, c.counted, "{}", c.index);
                assert_eq!(g.class_of(c.rep_id), g.class_id(&c.index).unwrap());
            }
            for x in 0..g.order() as u32 {
                assert_eq!(g.class_of(g.inverse(x)), g.star()[g.class_of(x)]);
                assert_eq!(g.mul(x, g.inverse(x)), g.identity());
            }
            for (k, &s) in g.star().iter().enumerate() {
                assert_eq!(g.star()[s], k);
                assert_eq!(g.omega().contains(&k) || g.omega().contains(&s), true);
                if s != k {
                    assert!(g.omega().contains(&k) ^ g.omega().contains(&s));
                }
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let f = build_field(3).unwrap();
        let g = GroupData::build(&f, 2, 1000).unwrap();
        for x in (0..g.order() as u32).step_by(5) {
            for y in (0..g.order() as u32).step_by(7) {
                assert_eq!(g.class_of(g.conjugate(x, y)), g.class_of(y));
            }
        }
    }

    #[test]
    fn budget_guard() {
        let f = build_field(2).unwrap();
        assert!(matches!(
            GroupData::build(&f, 4, 1000),
            Err(Error::BudgetExceeded { needed: 20160, .. })
        ));
    }
}
