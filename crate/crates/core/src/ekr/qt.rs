//! `Q_t` read off the symmetrized table of `G_n`, and the same matrix
//! rebuilt from `S_t = T_t R_t` using only `G_1, …, G_t`.

use super::{label_json, linear_root, neg_index, HTable, StratumKey, Strata};
use crate::chartab::label::{kostka_multi, xi_from_table};
use crate::chartab::{CharacterTable, Symmetrized};
use crate::cyclotomic::{compact, Cyclotomic};
use crate::error::{Error, Result};
use crate::gfq::FieldTable;
use crate::glq::ClassIndex;
use crate::linalg;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QtMatrix {
    pub t: usize,
    pub rows: Vec<StratumKey>,
    pub cols: Vec<StratumKey>,
    #[serde(serialize_with = "compact::grid")]
    pub entries: Vec<Vec<Cyclotomic>>,
    pub rank: usize,
    #[serde(serialize_with = "compact::opt")]
    pub det: Option<Cyclotomic>,
}

impl QtMatrix {
    fn assemble(t: usize, rows: Vec<StratumKey>, cols: Vec<StratumKey>, entries: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::StrataMismatch {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        let rank = linalg::rank(&entries);
        if rank < rows.len() {
            return Err(Error::RankDeficient { rank, size: rows.len() });
        }
        let det = linalg::det(&entries).map(|d| d.reduce_order());
        Ok(QtMatrix {
            t,
            rows,
            cols,
            entries,
            rank,
            det,
        })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entries as integers when every entry is one.
    pub fn integer_entries(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| v.to_integer().and_then(|b| i64::try_from(b).ok())).collect())
            .collect()
    }
}

pub fn build_qt_direct(sym: &Symmetrized, strata: &Strata, n: usize) -> Result<QtMatrix> {
    let t = strata.t;
    if n <= 2 * t {
        return Err(Error::InvalidArgument(format!("Q_t needs n > 2t, got n = {n}, t = {t}")));
    }
    let entries = strata
        .pi
        .iter()
        .map(|r| strata.sigma.iter().map(|c| sym.value(r.row, c.col).clone()).collect())
        .collect();
    QtMatrix::assemble(
        t,
        strata.pi.iter().map(|r| r.key.clone()).collect(),
        strata.sigma.iter().map(|c| c.key.clone()).collect(),
        entries,
    )
}

/// `S_t`, `T_t`, `R_t = T_t⁻¹ S_t` on `(k, i, κ)` rows and `(ℓ, j, τ)`
/// columns, and the `Q_t` they produce.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedPath {
    pub rows: Vec<StratumKey>,
    pub cols: Vec<StratumKey>,
    #[serde(serialize_with = "compact::grid")]
    pub s: Vec<Vec<Cyclotomic>>,
    pub t_matrix: Vec<Vec<i64>>,
    #[serde(serialize_with = "compact::grid")]
    pub r: Vec<Vec<Cyclotomic>>,
    pub q: QtMatrix,
}

fn level_classes(tables: &[&CharacterTable], l: usize) -> Result<Vec<ClassIndex>> {
    if l == 0 {
        return Ok(vec![ClassIndex::empty()]);
    }
    let tab = tables
        .get(l - 1)
        .filter(|t| t.n() == l)
        .ok_or_else(|| Error::InvalidArgument(format!("table of G_{l} missing")))?;
    Ok(tab.classes().to_vec())
}

/// `λ` with `λ(α^i)` extended by a first part of size `top`.
fn lift(key: &StratumKey, field: &FieldTable, top: usize) -> ClassIndex {
    let f = linear_root(field, key.index);
    let p = key.rest.get(&f);
    key.rest.with(&f, p.with_part(top))
}

fn star_key(key: &StratumKey, field: &FieldTable) -> StratumKey {
    StratumKey {
        level: key.level,
        index: neg_index(key.index, field.q()),
        rest: key.rest.star(field),
    }
}

/// `ξ^ν_τ` in `G_ℓ` from its labeled table, refusing labels left ambiguous.
struct XiCache<'a> {
    tables: &'a [&'a CharacterTable],
    values: BTreeMap<ClassIndex, Vec<Cyclotomic>>,
}

impl<'a> XiCache<'a> {
    fn get(&mut self, nu: &ClassIndex, tau: &ClassIndex) -> Result<Cyclotomic> {
        let l = nu.norm();
        if l == 0 {
            return Ok(Cyclotomic::one(1));
        }
        if !self.values.contains_key(nu) {
            let tab = self.tables[l - 1];
            let touches = tab
                .ambiguities()
                .iter()
                .flat_map(|a| a.labels.iter())
                .any(|lab| kostka_multi(lab, nu) != 0);
            if touches {
                return Err(Error::LabelingRequired);
            }
            self.values.insert(nu.clone(), xi_from_table(tab, nu)?.0);
        }
        let tab = self.tables[l - 1];
        let k = tab
            .class_id(tau)
            .ok_or_else(|| Error::InvalidArgument(format!("no class {tau} in G_{l}")))?;
        Ok(self.values[nu][k].clone())
    }
}

/// Builds `S_t` from the tables of `G_1, …, G_t` (`tables[ℓ−1]` is `G_ℓ`),
/// then `T_t`, `R_t`, and `Q_t` after merging conjugate rows and duplicate
/// columns.  Nothing of size `n` is touched.
pub fn build_st_reduced(field: &FieldTable, tables: &[&CharacterTable], h: &HTable, t: usize) -> Result<ReducedPath> {
    let q = field.q();
    if tables.iter().any(|tab| tab.labels().is_none()) {
        return Err(Error::LabelingRequired);
    }
    let mut keys = Vec::new();
    for k in 0..=t {
        let lam = level_classes(tables, k)?;
        for i in 0..q - 1 {
            for c in &lam {
                keys.push(StratumKey {
                    level: k,
                    index: i,
                    rest: c.clone(),
                });
            }
        }
    }
    keys.sort();
    let rows = keys.clone();
    let cols = keys;
    let qm1 = (q - 1) as u32;

    let mut xi = XiCache {
        tables,
        values: BTreeMap::new(),
    };
    let mut s = Vec::with_capacity(rows.len());
    for r in &rows {
        let mut line = Vec::with_capacity(cols.len());
        for c in &cols {
            if r.level > c.level {
                line.push(Cyclotomic::zero(1));
                continue;
            }
            let f = linear_root(field, r.index);
            let grow = c.level - r.level;
            let p = r.rest.get(&f);
            let nu = if grow == 0 { r.rest.clone() } else { r.rest.with(&f, p.with_part(grow)) };
            let v = xi.get(&nu, &c.rest)?;
            let w = Cyclotomic::zeta(qm1, (r.index * c.index) as i64);
            line.push(&v * &w);
        }
        s.push(line);
    }

    // Kostka matrix on labels realized at n0 = 2t + 1
    let n0 = 2 * t + 1;
    let lifted: Vec<ClassIndex> = rows.iter().map(|k| lift(k, field, n0 - k.level)).collect();
    let t_matrix: Vec<Vec<i64>> = lifted
        .par_iter()
        .map(|mu| lifted.iter().map(|lam| kostka_multi(lam, mu)).collect())
        .collect();
    let t_cyc: Vec<Vec<Cyclotomic>> = t_matrix
        .iter()
        .map(|r| r.iter().map(|&v| Cyclotomic::from_int(1, v)).collect())
        .collect();
    let t_inv = linalg::inverse(&t_cyc).ok_or(Error::SingularSystem)?;
    let r = linalg::mat_mul(&t_inv, &s);

    // rows: ψ = χ^λ + χ^{λ*} on one representative per star orbit
    let index: BTreeMap<&StratumKey, usize> = rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut q_rows = Vec::new();
    let mut q_vals: Vec<Vec<Cyclotomic>> = Vec::new();
    for (a, key) in rows.iter().enumerate() {
        let sk = star_key(key, field);
        if sk < *key {
            continue;
        }
        let mut v = r[a].clone();
        if sk != *key {
            let b = *index
                .get(&sk)
                .ok_or_else(|| Error::InvalidArgument(format!("star of {key} outside the strata")))?;
            v = v.iter().zip(&r[b]).map(|(x, y)| x + y).collect();
        }
        q_rows.push(key.clone());
        q_vals.push(v);
    }
    // columns: D_σ merges (ℓ, j, τ) with (ℓ, −j, τ*) unless the slot is paired
    let keep: Vec<usize> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| h.get(c.level, c.index).is_pair() || **c <= star_key(c, field))
        .map(|(i, _)| i)
        .collect();
    let entries = q_vals
        .iter()
        .map(|row| keep.iter().map(|&b| row[b].reduce_order()).collect())
        .collect();
    let q_mat = QtMatrix::assemble(t, q_rows, keep.iter().map(|&b| cols[b].clone()).collect(), entries)?;
    Ok(ReducedPath {
        rows,
        cols,
        s: s.into_iter().map(|r| r.into_iter().map(|v| v.reduce_order()).collect()).collect(),
        t_matrix,
        r: r.into_iter().map(|r| r.into_iter().map(|v| v.reduce_order()).collect()).collect(),
        q: q_mat,
    })
}

/// `S_t` entries set against `ξ^μ_σ` evaluated in the table of `G_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SBlockCheck {
    pub n: usize,
    pub checked: usize,
    /// `(row key, column key)` where the two disagree.
    pub mismatches: Vec<(StratumKey, StratumKey)>,
    /// Every `k > ℓ` entry of the `G_n` version vanishes.
    pub lower_blocks_vanish: bool,
}

impl SBlockCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.lower_blocks_vanish
    }
}

pub fn check_s_against_table(
    field: &FieldTable,
    table: &CharacterTable,
    h: &HTable,
    reduced: &ReducedPath,
) -> Result<SBlockCheck> {
    let n = table.n();
    let mut mismatches = Vec::new();
    let mut lower_blocks_vanish = true;
    let mut checked = 0;
    for (a, rk) in reduced.rows.iter().enumerate() {
        let mu = lift(rk, field, n - rk.level);
        let x = xi_from_table(table, &mu)?;
        for (b, ck) in reduced.cols.iter().enumerate() {
            let hp = h.get(ck.level, ck.index).primary();
            let sigma = ck.rest.with(hp, crate::partitions::Partition::row(1));
            let k = table
                .class_id(&sigma)
                .ok_or_else(|| Error::InvalidArgument(format!("no class {sigma} in G_{n}")))?;
            let v = &x.0[k];
            checked += 1;
            if rk.level > ck.level && !v.is_zero() {
                lower_blocks_vanish = false;
            }
            if !(v - &reduced.s[a][b]).is_zero() {
                mismatches.push((rk.clone(), ck.clone()));
            }
        }
    }
    Ok(SBlockCheck {
        n,
        checked,
        mismatches,
        lower_blocks_vanish,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QtDiff {
    pub rows_equal: bool,
    pub cols_equal: bool,
    /// `(row, col)` positions whose values differ.
    pub differing: Vec<(usize, usize)>,
    pub equal: bool,
}

/// Entrywise comparison in any common cyclotomic field.
pub fn compare_qt(a: &QtMatrix, b: &QtMatrix) -> QtDiff {
    let rows_equal = a.rows == b.rows;
    let cols_equal = a.cols == b.cols;
    let mut differing = Vec::new();
    if a.size() == b.size() {
        for (i, (ra, rb)) in a.entries.iter().zip(&b.entries).enumerate() {
            for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
                if !(x - y).is_zero() {
                    differing.push((i, j));
                }
            }
        }
    }
    QtDiff {
        equal: rows_equal && cols_equal && differing.is_empty() && a.size() == b.size(),
        rows_equal,
        cols_equal,
        differing,
    }
}

/// Row labels of `Q_t` realized at size `n`.
#[derive(Serialize)]
pub struct RealizedRow<'a> {
    pub key: &'a StratumKey,
    #[serde(serialize_with = "label_json")]
    pub lambda: ClassIndex,
}

pub fn realize_rows<'a>(qt: &'a QtMatrix, field: &FieldTable, n: usize) -> Vec<RealizedRow<'a>> {
    qt.rows
        .iter()
        .map(|k| RealizedRow {
            key: k,
            lambda: lift(k, field, n - k.level),
        })
        .collect()
}
