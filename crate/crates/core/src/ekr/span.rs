//! Incidence of group elements with `t`-cosets (or cosets of `t`-space
//! stabilizers) and the module they span.

use super::{is_point_constituent, is_space_constituent, labels_json, Mode};
use crate::chartab::{space_perm_character, zeta_character, CharacterTable, Symmetrized};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Matrix};
use crate::glq::subspace::{enumerate_subspaces, image};
use crate::glq::{ClassIndex, GroupData};
use crate::linalg;
use crate::scheme::{Idempotents, DENSE_MAX_ORDER};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Ordered `t`-tuples of independent vectors, each as a `t × n` matrix of
/// rows.
pub fn independent_tuples(field: &FieldTable, n: usize, t: usize) -> Vec<Matrix> {
    let q = field.q();
    let vectors: Vec<Vec<u8>> = (1..(q as u64).pow(n as u32))
        .map(|c| Matrix::from_code(c, 1, n, q).row(0).to_vec())
        .collect();
    let mut out: Vec<Vec<Vec<u8>>> = vec![vec![]];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|cur| {
                vectors.iter().filter_map(move |v| {
                    let mut next = cur.clone();
                    next.push(v.clone());
                    (Matrix::from_rows(&next).rank(field) == next.len()).then_some(next)
                })
            })
            .collect();
    }
    out.iter()
        .map(|rows| if t == 0 { Matrix::zero(0, n) } else { Matrix::from_rows(rows) })
        .collect()
}

/// Rows of `M_t`: for each element, the sorted columns containing it.
#[derive(Clone, Debug)]
pub struct Incidence {
    pub rows: Vec<Vec<usize>>,
    pub ncols: usize,
    /// Column of `{x : x u_0 = u_0}` for the first object `u_0`.
    pub base_col: usize,
}

impl Incidence {
    pub fn build(group: &GroupData, t: usize, mode: Mode) -> Incidence {
        let field = group.field();
        let n = group.n();
        let objects = match mode {
            Mode::Points => independent_tuples(field, n, t),
            Mode::Spaces => enumerate_subspaces(field, n, t),
        };
        let index: HashMap<&Matrix, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let k = objects.len();
        let rows = (0..group.order() as u32)
            .into_par_iter()
            .map(|x| {
                let g = group.matrix(x);
                let mut r: Vec<usize> = objects
                    .iter()
                    .enumerate()
                    .map(|(u, o)| {
                        let img = match mode {
                            Mode::Points => o.mul(&g.transpose(), field),
                            Mode::Spaces => image(&g, o, field),
                        };
                        u * k + index[&img]
                    })
                    .collect();
                r.sort_unstable();
                r
            })
            .collect();
        Incidence {
            rows,
            ncols: k * k,
            base_col: 0,
        }
    }

    /// Elements lying in column `c`.
    pub fn column(&self, c: usize) -> Vec<u32> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.binary_search(&c).is_ok())
            .map(|(x, _)| x as u32)
            .collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let dense: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![BigRational::zero(); self.ncols];
                for &c in r {
                    v[c] = BigRational::one();
                }
                v
            })
            .collect();
        linalg::rank(&dense)
    }
}

/// The stabilizer of the first `t` standard basis vectors (points) or of
/// their span (spaces).
pub fn standard_coset(group: &GroupData, t: usize, mode: Mode) -> Vec<u32> {
    let field = group.field();
    let n = group.n();
    let mut e = Matrix::zero(t, n);
    for i in 0..t {
        e.set(i, i, 1);
    }
    (0..group.order() as u32)
        .filter(|&x| {
            let g = group.matrix(x);
            match mode {
                Mode::Points => e.mul(&g.transpose(), field) == e,
                Mode::Spaces => image(&g, &e, field) == e,
            }
        })
        .collect()
}

/// Symmetrized rows whose idempotents meet the span of `M_t`.
pub fn span_constituents(field: &FieldTable, sym: &Symmetrized, n: usize, t: usize, mode: Mode) -> Vec<usize> {
    (0..sym.labels.len())
        .filter(|&l| match mode {
            Mode::Points => is_point_constituent(&sym.labels[l], field, n, t),
            Mode::Spaces => is_space_constituent(&sym.labels[l], field, n, t),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub t: usize,
    pub mode: Mode,
    pub order: usize,
    pub columns: usize,
    pub rank: usize,
    pub expected_rank: u64,
    #[serde(serialize_with = "labels_json")]
    pub constituents: Vec<ClassIndex>,
    /// `M_t M_tᵀ` agrees with the permutation character on every pair.
    pub gram_matches: bool,
    /// Rows `λ` with `E_λ M_t ≠ 0`.
    #[serde(serialize_with = "labels_json")]
    pub projection_support: Vec<ClassIndex>,
    pub projection_matches: bool,
}

impl SpanReport {
    pub fn passed(&self) -> bool {
        self.rank as u64 == self.expected_rank && self.gram_matches && self.projection_matches
    }
}

pub fn span_check(
    group: &GroupData,
    table: &CharacterTable,
    sym: &Symmetrized,
    ids: &Idempotents,
    t: usize,
    mode: Mode,
) -> Result<SpanReport> {
    let order = group.order();
    if order > DENSE_MAX_ORDER {
        return Err(Error::BudgetExceeded {
            what: "incidence matrix rows",
            needed: order as u64,
            limit: DENSE_MAX_ORDER as u64,
        });
    }
    let field = group.field();
    let n = group.n();
    let inc = Incidence::build(group, t, mode);
    let rank = inc.rank();
    let cons = span_constituents(field, sym, n, t, mode);
    let expected_rank = cons.iter().map(|&l| sym.psi_degrees[l] * sym.chi_degrees[l]).sum();

    let perm = match mode {
        Mode::Points => zeta_character(field, table.classes(), table.m(), t, 0),
        Mode::Spaces => space_perm_character(field, table.classes(), table.m(), t)?,
    };
    let by_group_class: Vec<i64> = (0..group.num_classes())
        .map(|c| {
            let k = table
                .class_id(&group.class(c).index)
                .ok_or_else(|| Error::InvalidArgument("table and group classes differ".into()))?;
            perm.0[k]
                .to_integer()
                .and_then(|v| v.to_i64())
                .ok_or_else(|| Error::InvalidArgument("permutation character is not integral".into()))
        })
        .collect::<Result<_>>()?;
    let gram_matches = (0..order as u32).into_par_iter().all(|x| {
        let xi = group.inverse(x);
        (0..order as u32).all(|y| {
            let shared = count_common(&inc.rows[x as usize], &inc.rows[y as usize]);
            shared as i64 == by_group_class[group.class_of(group.mul(xi, y))]
        })
    });

    // every column is a two-sided translate of the base column and each E_λ
    // commutes with both translations, so one column decides E_λ M_t = 0
    let mut v = vec![0i64; order];
    for x in inc.column(inc.base_col) {
        v[x as usize] = 1;
    }
    let support: Vec<usize> = (0..sym.labels.len())
        .filter(|&l| ids.project(group, &[l], &v).iter().any(|c: &Cyclotomic| !c.is_zero()))
        .collect();
    Ok(SpanReport {
        t,
        mode,
        order,
        columns: inc.ncols,
        rank,
        expected_rank,
        constituents: cons.iter().map(|&l| sym.labels[l].clone()).collect(),
        gram_matches,
        projection_matches: support == cons,
        projection_support: support.iter().map(|&l| sym.labels[l].clone()).collect(),
    })
}

fn count_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// `(I − Σ_{λ ∈ cons} E_λ) 1_Y`, zero exactly when `1_Y` lies in their span.
pub fn projection_residual(group: &GroupData, ids: &Idempotents, cons: &[usize], set: &[u32]) -> Vec<Cyclotomic> {
    let mut v = vec![0i64; group.order()];
    for &x in set {
        v[x as usize] = 1;
    }
    let p = ids.project(group, cons, &v);
    p.into_iter()
        .zip(&v)
        .map(|(e, &x)| Cyclotomic::from_int(e.order(), x) - e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;

    #[test]
    fn tuple_counts() {
        let f = build_field(2).unwrap();
        assert_eq!(independent_tuples(&f, 3, 1).len(), 7);
        assert_eq!(independent_tuples(&f, 3, 2).len(), 42);
        let f3 = build_field(3).unwrap();
        assert_eq!(independent_tuples(&f3, 2, 2).len(), 48);
    }

    #[test]
    fn coset_sizes() {
        let f = build_field(2).unwrap();
        let g = GroupData::build(&f, 3, 1000).unwrap();
        assert_eq!(standard_coset(&g, 1, Mode::Points).len(), 24);
        assert_eq!(standard_coset(&g, 1, Mode::Spaces).len(), 24);
        assert_eq!(standard_coset(&g, 2, Mode::Points).len(), 4);
        assert_eq!(standard_coset(&g, 2, Mode::Spaces).len(), 24);
    }

    #[test]
    fn incidence_row_weights() {
        let f = build_field(2).unwrap();
        let g = GroupData::build(&f, 2, 1000).unwrap();
        let inc = Incidence::build(&g, 1, Mode::Points);
        assert_eq!(inc.ncols, 9);
        assert!(inc.rows.iter().all(|r| r.len() == 3));
        assert_eq!(inc.rank(), 5);
    }
}
