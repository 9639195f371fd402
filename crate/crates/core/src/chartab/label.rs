//! Assigning `Λ_n` labels to Dixon rows, level by level.
//!
//! Every `ξ^μ` built by parabolic induction from already labeled smaller
//! groups gives a column of multiplicities; together with the q-hook degree
//! this separates every label except the cuspidal characters of the top
//! level, which are matched to polynomials through complex conjugation.

use super::cache::TableCache;
use super::{det_character, dixon_table, hook_degree, zeta_character, Ambiguity, CharacterTable, ClassFunction, Fusion};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Poly};
use crate::glq::{enumerate_lambda_n, ClassIndex, GroupData};
use crate::partitions::{kostka, Partition};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// `K_{λμ} = Π_f K_{λ(f)μ(f)}` when `λ ∼ μ`, else 0.
pub fn kostka_multi(lambda: &ClassIndex, mu: &ClassIndex) -> i64 {
    let (a, b) = (lambda.entries(), mu.entries());
    if a.len() != b.len() {
        return 0;
    }
    let mut acc = 1;
    for ((f, l), (g, m)) in a.iter().zip(b) {
        if f != g || l.size() != m.size() {
            return 0;
        }
        acc *= kostka(l, m);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// Labeled character tables of `G_1, …, G_N` with shared fusion data.
pub struct Tower {
    field: FieldTable,
    classes: Vec<Vec<ClassIndex>>,
    tables: Vec<Option<CharacterTable>>,
    fusions: Mutex<HashMap<(usize, usize), Arc<Fusion>>>,
    cache_hits: Vec<bool>,
}

impl Tower {
    pub fn new(field: &FieldTable, max_n: usize) -> Tower {
        Tower {
            field: field.clone(),
            classes: (0..=max_n).map(|n| if n == 0 { vec![] } else { enumerate_lambda_n(field, n) }).collect(),
            tables: vec![None; max_n + 1],
            fusions: Mutex::new(HashMap::new()),
            cache_hits: vec![false; max_n + 1],
        }
    }
    pub fn field(&self) -> &FieldTable {
        &self.field
    }
    pub fn max_n(&self) -> usize {
        self.tables.len() - 1
    }
    pub fn classes(&self, n: usize) -> &[ClassIndex] {
        &self.classes[n]
    }
    pub fn table(&self, n: usize) -> Option<&CharacterTable> {
        self.tables.get(n)?.as_ref()
    }
    pub fn cache_hit(&self, n: usize) -> bool {
        self.cache_hits[n]
    }

    fn fusion(&self, a: usize, b: usize) -> Result<Arc<Fusion>> {
        if let Some(f) = self.fusions.lock().unwrap().get(&(a, b)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Fusion::build(
            &self.field,
            &self.classes[a],
            &self.classes[b],
            &self.classes[a + b],
        )?);
        self.fusions.lock().unwrap().insert((a, b), f.clone());
        Ok(f)
    }

    /// `φ ⊙ ψ` for class functions on `G_a` and `G_b`.
    pub fn induce(&self, a: usize, phi: &ClassFunction, b: usize, psi: &ClassFunction, m: u32) -> Result<ClassFunction> {
        Ok(self.fusion(a, b)?.apply(phi, psi, m))
    }

    /// `χ^{f↦(r)}` on `G_{r·deg f}`.
    fn base(&self, f: &Poly, r: usize, m: u32) -> Result<ClassFunction> {
        let size = r * f.deg();
        if f.deg() == 1 {
            let root = self.field.neg(f.coeffs()[0]);
            let i = self.field.log(root) as i64;
            return Ok(det_character(&self.field, &self.classes[size], m, i));
        }
        let t = self
            .table(size)
            .ok_or_else(|| Error::InvalidArgument(format!("level {size} not labeled")))?;
        let lab = ClassIndex::single(f.clone(), Partition::row(r));
        let row = t
            .row_of_label(&lab)
            .ok_or_else(|| Error::LabelingInconsistent(format!("no row labeled {lab}")))?;
        Ok(t.character(row).embed(m))
    }

    /// `ξ^μ` by induction; `None` for `f ↦ (r)` with `deg f ≥ 2`, which has
    /// no proper parabolic factorization.
    pub fn xi(&self, mu: &ClassIndex, m: u32) -> Result<Option<ClassFunction>> {
        let factors: Vec<(&Poly, usize)> = mu
            .entries()
            .iter()
            .flat_map(|(f, p)| p.parts().iter().map(move |&r| (f, r)))
            .collect();
        if factors.len() == 1 && factors[0].0.deg() > 1 {
            return Ok(None);
        }
        let (f0, r0) = factors[0];
        let mut size = r0 * f0.deg();
        let mut acc = self.base(f0, r0, m)?;
        for &(f, r) in &factors[1..] {
            let b = r * f.deg();
            let psi = self.base(f, r, m)?;
            acc = self.induce(size, &acc, b, &psi, m)?;
            size += b;
        }
        Ok(Some(acc))
    }

    /// Labels `table` (level `n`, all smaller levels present) and stores it.
    pub fn label(&mut self, mut table: CharacterTable) -> Result<&CharacterTable> {
        let n = table.n();
        self.require_below(n)?;
        let (labels, amb) = self.assign_labels(&table)?;
        table.set_labels(labels, amb);
        self.check_labels(&table)?;
        self.tables[n] = Some(table);
        Ok(self.tables[n].as_ref().unwrap())
    }

    /// Stores an already labeled table after re-verifying its labels.
    pub fn insert_labeled(&mut self, table: CharacterTable) -> Result<()> {
        let n = table.n();
        self.require_below(n)?;
        if !table.field_matches(&self.field) || table.classes() != self.classes[n].as_slice() {
            return Err(Error::Cache(format!("table for n={n} built over a different field or class order")));
        }
        table.verify_orthogonality()?;
        self.check_labels(&table)?;
        self.tables[n] = Some(table);
        Ok(())
    }

    fn require_below(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_n() {
            return Err(Error::InvalidArgument(format!("level {n} outside tower")));
        }
        match (1..n).find(|&k| self.tables[k].is_none()) {
            Some(k) => Err(Error::InvalidArgument(format!("level {k} must be labeled before {n}"))),
            None => Ok(()),
        }
    }

    fn computable_xis(&self, table: &CharacterTable) -> Result<Vec<(ClassIndex, ClassFunction)>> {
        let mut out = Vec::new();
        for mu in &self.classes[table.n()] {
            if let Some(x) = self.xi(mu, table.m())? {
                out.push((mu.clone(), x));
            }
        }
        Ok(out)
    }

    fn assign_labels(&self, table: &CharacterTable) -> Result<(Vec<ClassIndex>, Vec<Ambiguity>)> {
        let q = self.field.q();
        let xis = self.computable_xis(table)?;
        let mut mult = vec![Vec::with_capacity(xis.len()); table.rows().len()];
        for (mu, x) in &xis {
            let d = table.decompose(x)?;
            if d.iter().any(|&c| c < 0) {
                return Err(Error::LabelingInconsistent(format!("ξ^{mu} has a negative multiplicity")));
            }
            for (r, c) in d.into_iter().enumerate() {
                mult[r].push(c);
            }
        }
        type Sig = (BigInt, Vec<i64>);
        let mut groups: BTreeMap<Sig, (Vec<ClassIndex>, Vec<usize>)> = BTreeMap::new();
        for lam in &self.classes[table.n()] {
            let sig = (hook_degree(lam, q), xis.iter().map(|(mu, _)| kostka_multi(lam, mu)).collect());
            groups.entry(sig).or_default().0.push(lam.clone());
        }
        for (r, mrow) in mult.into_iter().enumerate() {
            let sig = (BigInt::from(table.degrees()[r]), mrow);
            groups
                .get_mut(&sig)
                .ok_or_else(|| Error::LabelingInconsistent(format!("row {r} matches no label signature")))?
                .1
                .push(r);
        }
        let mut labels: Vec<Option<ClassIndex>> = vec![None; table.rows().len()];
        let mut ambiguities = Vec::new();
        for (_, (labs, rows)) in groups {
            if labs.len() != rows.len() {
                return Err(Error::LabelingInconsistent(format!(
                    "{} labels but {} rows share a signature",
                    labs.len(),
                    rows.len()
                )));
            }
            if labs.len() == 1 {
                labels[rows[0]] = Some(labs[0].clone());
                continue;
            }
            let (assigned, survivors) = self.resolve_by_star(table, &labs, &rows)?;
            for (r, l) in assigned {
                labels[r] = Some(l);
            }
            ambiguities.push(Ambiguity { labels: labs, survivors });
        }
        Ok((labels.into_iter().map(|l| l.unwrap()).collect(), ambiguities))
    }

    // Real rows go to self-reciprocal labels and conjugate row pairs to
    // reciprocal label pairs, both in canonical order.
    fn resolve_by_star(
        &self,
        table: &CharacterTable,
        labs: &[ClassIndex],
        rows: &[usize],
    ) -> Result<(Vec<(usize, ClassIndex)>, u64)> {
        let mut real_rows = Vec::new();
        let mut row_pairs = Vec::new();
        for &r in rows {
            let c = table
                .conjugate_row(r)
                .ok_or_else(|| Error::LabelingInconsistent(format!("row {r} has no conjugate row")))?;
            if c == r {
                real_rows.push(r);
            } else if r < c {
                if !rows.contains(&c) {
                    return Err(Error::LabelingInconsistent("conjugate row outside its signature group".into()));
                }
                row_pairs.push((r, c));
            }
        }
        let mut self_labs = Vec::new();
        let mut lab_pairs = Vec::new();
        for l in labs {
            let s = l.star(&self.field);
            if s == *l {
                self_labs.push(l.clone());
            } else if *l < s {
                lab_pairs.push((l.clone(), s));
            }
        }
        if self_labs.len() != real_rows.len() || lab_pairs.len() != row_pairs.len() {
            return Err(Error::LabelingInconsistent(format!(
                "{} real rows vs {} self-reciprocal labels",
                real_rows.len(),
                self_labs.len()
            )));
        }
        let mut out: Vec<(usize, ClassIndex)> = real_rows.into_iter().zip(self_labs).collect();
        let p = lab_pairs.len() as u64;
        for ((r, c), (l, s)) in row_pairs.into_iter().zip(lab_pairs) {
            out.push((r, l));
            out.push((c, s));
        }
        let fact = |k: u64| (1..=k).product::<u64>();
        let s = out.len() as u64 - 2 * p;
        Ok((out, fact(s) * fact(p) * 2u64.pow(p as u32)))
    }

    /// Verifies degrees, linear rows, conjugate pairing, the Kostka relation
    /// for every inducible `ξ^μ`, and the `ζ^{(k,i)}` strata.
    pub fn check_labels(&self, table: &CharacterTable) -> Result<()> {
        let labels = table.labels().ok_or(Error::LabelingRequired)?;
        let n = table.n();
        let q = self.field.q();
        let m = table.m();
        let mut sorted = labels.to_vec();
        sorted.sort();
        if sorted != self.classes[n] {
            return Err(Error::LabelingInconsistent("labels are not a permutation of Λ_n".into()));
        }
        for (r, l) in labels.iter().enumerate() {
            if hook_degree(l, q) != BigInt::from(table.degrees()[r]) {
                return Err(Error::LabelingInconsistent(format!("degree of {l}")));
            }
            let c = table.conjugate_row(r).ok_or_else(|| Error::LabelingInconsistent("missing conjugate".into()))?;
            if labels[c] != l.star(&self.field) {
                return Err(Error::LabelingInconsistent(format!("conjugate of {l} is not its star")));
            }
        }
        for i in 0..q - 1 {
            let a = self.field.exp(i as i64);
            let lab = ClassIndex::single(Poly::linear(a, &self.field), Partition::row(n));
            let r = table.row_of_label(&lab).unwrap();
            if table.character(r) != det_character(&self.field, table.classes(), m, i as i64) {
                return Err(Error::LabelingInconsistent(format!("{lab} is not θ(det^{i})")));
            }
        }
        for (mu, x) in self.computable_xis(table)? {
            let mut acc = ClassFunction(vec![Cyclotomic::zero(m); table.num_classes()]);
            for (r, l) in labels.iter().enumerate() {
                let k = kostka_multi(l, &mu);
                if k != 0 {
                    acc = acc.add(&table.character(r).scale_int(k));
                }
            }
            if acc != x {
                return Err(Error::LabelingInconsistent(format!("ξ^{mu} ≠ Σ K χ")));
            }
        }
        check_strata(&self.field, table)
    }

    /// Builds every level up to `n_max`, reusing cached tables and the
    /// supplied top-level group when given.
    pub fn build(
        field: &FieldTable,
        n_max: usize,
        cache: Option<&TableCache>,
        max_elements: u64,
        top: Option<&GroupData>,
    ) -> Result<Tower> {
        let mut tower = Tower::new(field, n_max);
        for n in 1..=n_max {
            if let Some(c) = cache {
                if let Some(t) = c.load(field, n)? {
                    tower.insert_labeled(t)?;
                    tower.cache_hits[n] = true;
                    continue;
                }
            }
            let built;
            let g = match top {
                Some(g) if g.n() == n => g,
                _ => {
                    built = GroupData::build(field, n, max_elements)?;
                    &built
                }
            };
            let table = dixon_table(g)?;
            let labeled = tower.label(table)?;
            if let Some(c) = cache {
                c.store(labeled)?;
            }
        }
        Ok(tower)
    }

    pub fn into_table(mut self, n: usize) -> Option<CharacterTable> {
        self.tables.get_mut(n)?.take()
    }
}

/// Constituents of `ζ^{(k,i)}` are exactly the labels with
/// `λ(α^i)_1 ≥ n − k`, with nonnegative multiplicities.
pub fn check_strata(field: &FieldTable, table: &CharacterTable) -> Result<()> {
    let labels = table.labels().ok_or(Error::LabelingRequired)?;
    let n = table.n();
    for i in 0..field.q() - 1 {
        let f = Poly::linear(field.exp(i as i64), field);
        for k in 0..=n {
            let z = zeta_character(field, table.classes(), table.m(), k, i as i64);
            let d = table.decompose(&z)?;
            for (r, &c) in d.iter().enumerate() {
                let expect = labels[r].get(&f).first() + k >= n;
                if c < 0 || (c > 0) != expect {
                    return Err(Error::ConstituentMismatch(format!(
                        "⟨ζ^({k},{i}), χ^{}⟩ = {c}",
                        labels[r]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Labels a table, building and labeling all smaller levels first.
pub fn label_table(table: CharacterTable, field: &FieldTable, max_elements: u64) -> Result<CharacterTable> {
    let n = table.n();
    let mut tower = Tower::new(field, n);
    for k in 1..n {
        let g = GroupData::build(field, k, max_elements)?;
        tower.label(dixon_table(&g)?)?;
    }
    tower.label(table)?;
    Ok(tower.into_table(n).unwrap())
}

/// `ξ^μ = Σ_λ K_{λμ} χ^λ` read off a labeled table.
pub fn xi_from_table(table: &CharacterTable, mu: &ClassIndex) -> Result<ClassFunction> {
    let labels = table.labels().ok_or(Error::LabelingRequired)?;
    let mut acc = ClassFunction(vec![Cyclotomic::zero(table.m()); table.num_classes()]);
    for (r, l) in labels.iter().enumerate() {
        let k = kostka_multi(l, mu);
        if k != 0 {
            acc = acc.add(&table.character(r).scale_int(k));
        }
    }
    Ok(acc)
}

/// Multiplicities as plain integers (for reports).
pub fn multiplicities(table: &CharacterTable, f: &ClassFunction) -> Result<Vec<u64>> {
    table
        .decompose(f)?
        .into_iter()
        .map(|c| c.to_u64().ok_or_else(|| Error::LabelingInconsistent("negative multiplicity".into())))
        .collect()
}
