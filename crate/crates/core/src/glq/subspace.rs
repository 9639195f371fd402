//! Subspaces of `F_q^n` as reduced row echelon bases.

use crate::gfq::{FieldTable, Matrix};

/// All `t`-dimensional subspaces, each as a `t × n` RREF basis.
pub fn enumerate_subspaces(field: &FieldTable, n: usize, t: usize) -> Vec<Matrix> {
    let q = field.q();
    let mut out = Vec::new();
    for pivots in combinations(n, t) {
        // free positions: row i, column c > pivot_i, c not a pivot
        let free: Vec<(usize, usize)> = (0..t)
            .flat_map(|i| {
                let piv = pivots.clone();
                (piv[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        for code in 0..count {
            let mut m = Matrix::zero(t, n);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, 1);
            }
            let mut x = code;
            for &(i, c) in &free {
                m.set(i, c, (x % q as u64) as u8);
                x /= q as u64;
            }
            out.push(m);
        }
    }
    out
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

/// Image `gU` as an RREF basis; `g` acts on column vectors.
pub fn image(g: &Matrix, basis: &Matrix, field: &FieldTable) -> Matrix {
    // rows of basis·gᵀ are the images of the basis vectors
    basis.mul(&g.transpose(), field).rref(field).0
}

pub fn is_invariant(g: &Matrix, basis: &Matrix, field: &FieldTable) -> bool {
    image(g, basis, field) == *basis
}

/// Number of `t`-spaces with `gU = U`.
pub fn count_invariant(g: &Matrix, t: usize, field: &FieldTable) -> usize {
    enumerate_subspaces(field, g.rows(), t)
        .iter()
        .filter(|u| is_invariant(g, u, field))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;
    use crate::glq::{class_rep, enumerate_lambda_n, stabilizes_t_space};
    use crate::partitions::q_binomial;
    use num_traits::ToPrimitive;

    #[test]
    fn counts_match_q_binomial() {
        for (q, n) in [(2u64, 4), (3, 3), (4, 3), (2, 6), (5, 2), (3, 4)] {
            if q.pow(n as u32) > 256 && n > 3 {
                continue;
            }
            let f = build_field(q).unwrap();
            for t in 0..=n {
                let c = enumerate_subspaces(&f, n, t).len();
                assert_eq!(c as u64, q_binomial(n, t, q).to_u64().unwrap(), "q={q} n={n} t={t}");
            }
        }
    }

    #[test]
    fn subset_sum_predicate_against_enumeration() {
        for (q, n) in [(2u64, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 2), (5, 2), (7, 2), (9, 2)] {
            let f = build_field(q).unwrap();
            for s in enumerate_lambda_n(&f, n) {
                let r = class_rep(&s, &f);
                for t in 0..=n {
                    let enumerated = count_invariant(&r, t, &f) > 0;
                    assert_eq!(stabilizes_t_space(&s, t), enumerated, "{s} t={t}");
                }
            }
        }
    }
}
