//! Exact character tables of `GL(n, q)` with `Λ_n` labels.

pub mod cache;
pub mod dixon;
pub mod induce;
pub mod label;

pub use dixon::dixon_table;
pub use induce::{induce_parabolic, Fusion};
pub use label::{label_table, Tower};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Poly};
use crate::glq::subspace::count_invariant;
use crate::glq::{class_det, class_rep, ClassIndex, GroupData};
use crate::partitions::{hook_stats, q_units_product};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Per-class values of a class function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction(pub Vec<Cyclotomic>);

impl ClassFunction {
    pub fn values(&self) -> &[Cyclotomic] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn embed(&self, m: u32) -> ClassFunction {
        ClassFunction(self.0.iter().map(|v| v.embed(m)).collect())
    }
    pub fn conj(&self) -> ClassFunction {
        ClassFunction(self.0.iter().map(Cyclotomic::conj).collect())
    }
    pub fn pointwise(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    pub fn scale_int(&self, k: i64) -> ClassFunction {
        let k = BigInt::from(k);
        ClassFunction(self.0.iter().map(|v| v.scale_int(&k)).collect())
    }
}

/// Ambiguous label group resolved by star pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambiguity {
    pub labels: Vec<ClassIndex>,
    /// Number of labelings satisfying every constraint.
    pub survivors: u64,
}

/// Irreducible characters of `GL(n, q)` on the canonical class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    q: usize,
    n: usize,
    modulus: Vec<u8>,
    alpha: u8,
    m: u32,
    classes: Vec<ClassIndex>,
    sizes: Vec<u64>,
    order: u64,
    star: Vec<usize>,
    identity: usize,
    degrees: Vec<u64>,
    rows: Vec<Vec<Cyclotomic>>,
    labels: Option<Vec<ClassIndex>>,
    ambiguities: Vec<Ambiguity>,
}

fn row_key(degree: u64, row: &[Cyclotomic]) -> (u64, Vec<Vec<BigRational>>) {
    (degree, row.iter().map(Cyclotomic::coeffs).collect())
}

impl CharacterTable {
    pub(crate) fn from_rows(g: &GroupData, m: u32, rows: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let f = g.field();
        Self::assemble(
            f,
            g.n(),
            m,
            g.classes().iter().map(|c| c.index.clone()).collect(),
            g.classes().iter().map(|c| c.size).collect(),
            rows,
        )
    }

    pub(crate) fn assemble(
        field: &FieldTable,
        n: usize,
        m: u32,
        classes: Vec<ClassIndex>,
        sizes: Vec<u64>,
        rows: Vec<Vec<Cyclotomic>>,
    ) -> Result<Self> {
        let identity = classes
            .iter()
            .position(|s| *s == identity_index(field, n))
            .ok_or_else(|| Error::InvalidArgument("identity class missing".into()))?;
        let lookup: std::collections::HashMap<&ClassIndex, usize> =
            classes.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let star = classes.iter().map(|s| lookup[&s.star(field)]).collect();
        let mut keyed: Vec<(u64, Vec<Cyclotomic>)> = rows
            .into_iter()
            .map(|r| {
                let d = r[identity]
                    .to_integer()
                    .and_then(|d| d.to_u64())
                    .ok_or_else(|| Error::LiftFailure("degree is not a positive integer".into()))?;
                Ok((d, r))
            })
            .collect::<Result<_>>()?;
        keyed.sort_by_cached_key(|(d, r)| row_key(*d, r));
        Ok(CharacterTable {
            q: field.q(),
            n,
            modulus: field.modulus().to_vec(),
            alpha: field.alpha(),
            m,
            order: sizes.iter().sum(),
            classes,
            sizes,
            star,
            identity,
            degrees: keyed.iter().map(|(d, _)| *d).collect(),
            rows: keyed.into_iter().map(|(_, r)| r).collect(),
            labels: None,
            ambiguities: vec![],
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    pub fn alpha(&self) -> u8 {
        self.alpha
    }
    /// Exponent of the group; all values lie in `Q(ζ_m)`.
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn classes(&self) -> &[ClassIndex] {
        &self.classes
    }
    pub fn class_sizes(&self) -> &[u64] {
        &self.sizes
    }
    pub fn class_star(&self) -> &[usize] {
        &self.star
    }
    pub fn identity_class(&self) -> usize {
        self.identity
    }
    pub fn class_id(&self, sigma: &ClassIndex) -> Option<usize> {
        self.classes.iter().position(|s| s == sigma)
    }
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }
    pub fn rows(&self) -> &[Vec<Cyclotomic>] {
        &self.rows
    }
    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.rows[i]
    }
    pub fn character(&self, i: usize) -> ClassFunction {
        ClassFunction(self.rows[i].clone())
    }
    pub fn labels(&self) -> Option<&[ClassIndex]> {
        self.labels.as_deref()
    }
    pub fn label(&self, row: usize) -> Option<&ClassIndex> {
        self.labels.as_ref().map(|l| &l[row])
    }
    pub fn row_of_label(&self, lambda: &ClassIndex) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == lambda)
    }
    pub fn ambiguities(&self) -> &[Ambiguity] {
        &self.ambiguities
    }
    pub(crate) fn set_labels(&mut self, labels: Vec<ClassIndex>, ambiguities: Vec<Ambiguity>) {
        self.labels = Some(labels);
        self.ambiguities = ambiguities;
    }
    pub fn field_matches(&self, field: &FieldTable) -> bool {
        self.q == field.q() && self.modulus == field.modulus() && self.alpha == field.alpha()
    }

    /// `⟨a, b⟩ = (1/|G|) Σ |C_k| a_k conj(b_k)`.
    pub fn inner(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.m);
        for ((x, y), &h) in a.iter().zip(b).zip(&self.sizes) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc + (x * &y.conj()).scale_int(&BigInt::from(h));
        }
        acc.scale(&BigRational::new(BigInt::one(), BigInt::from(self.order)))
    }

    /// Multiplicity of each row in `f`; fails unless all are integers.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let v = self.inner(f.values(), r);
                v.to_integer()
                    .and_then(|x| x.to_i64())
                    .ok_or_else(|| Error::LabelingInconsistent(format!("non-integral multiplicity {v}")))
            })
            .collect()
    }

    /// Exact row and column orthogonality plus `Σ χ(1)² = |G|`.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let k = self.num_classes();
        if self.rows.len() != k {
            return Err(Error::Orthogonality(format!("{} rows for {k} classes", self.rows.len())));
        }
        let sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sq != self.order {
            return Err(Error::Orthogonality(format!("Σ χ(1)² = {sq} ≠ {}", self.order)));
        }
        let conj: Vec<Vec<Cyclotomic>> = self.rows.iter().map(|r| r.iter().map(Cyclotomic::conj).collect()).collect();
        for i in 0..k {
            for j in i..k {
                let mut acc = Cyclotomic::zero(self.m);
                for c in 0..k {
                    acc = acc + (&self.rows[i][c] * &conj[j][c]).scale_int(&BigInt::from(self.sizes[c]));
                }
                let expect = if i == j { self.order as i64 } else { 0 };
                if acc != Cyclotomic::from_int(self.m, expect) {
                    return Err(Error::Orthogonality(format!("rows {i},{j}: {acc}")));
                }
            }
        }
        for a in 0..k {
            for b in a..k {
                let mut acc = Cyclotomic::zero(self.m);
                for r in 0..k {
                    acc = acc + &self.rows[r][a] * &conj[r][b];
                }
                let expect = if a == b { (self.order / self.sizes[a]) as i64 } else { 0 };
                if acc != Cyclotomic::from_int(self.m, expect) {
                    return Err(Error::Orthogonality(format!("columns {a},{b}: {acc}")));
                }
            }
        }
        Ok(())
    }

    /// Row index holding the complex conjugate of row `i`.
    pub fn conjugate_row(&self, i: usize) -> Option<usize> {
        let c: Vec<Cyclotomic> = self.rows[i].iter().map(Cyclotomic::conj).collect();
        self.rows.iter().position(|r| *r == c)
    }

    /// `θ(det g)^i` on every class.
    pub fn det_character(&self, field: &FieldTable, i: i64) -> ClassFunction {
        det_character(field, &self.classes, self.m, i)
    }

    /// `ζ^{(t,i)}` on every class.
    pub fn zeta_character(&self, field: &FieldTable, t: usize, i: i64) -> ClassFunction {
        zeta_character(field, &self.classes, self.m, t, i)
    }
}

impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GL({},{}) exponent {}, {} classes", self.n, self.q, self.m, self.num_classes())?;
        for (i, r) in self.rows.iter().enumerate() {
            let lab = self.label(i).map(|l| l.to_string()).unwrap_or_else(|| "?".into());
            let vals: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{lab} [{}]: {}", self.degrees[i], vals.join(", "))?;
        }
        Ok(())
    }
}

/// `X−1 ↦ (1^n)`.
pub fn identity_index(field: &FieldTable, n: usize) -> ClassIndex {
    ClassIndex::single(Poly::linear(1, field), crate::partitions::Partition::column(n))
}

/// `θ(det g)^i` with `θ(α^j) = ω^j`, `ω = ζ_m^{m/(q−1)}`.
pub fn det_character(field: &FieldTable, classes: &[ClassIndex], m: u32, i: i64) -> ClassFunction {
    let qm1 = field.q() as i64 - 1;
    assert_eq!(m as i64 % qm1, 0);
    let step = m as i64 / qm1;
    ClassFunction(
        classes
            .iter()
            .map(|s| {
                let l = field.log(class_det(s, field)) as i64;
                Cyclotomic::zeta(m, step * i * l)
            })
            .collect(),
    )
}

/// `ζ^{(t,0)}(g) = Π_{j<t} (q^d − q^j)` with `d = dim ker(g − I)`, twisted
/// by `θ(det^i)`.
pub fn zeta_character(field: &FieldTable, classes: &[ClassIndex], m: u32, t: usize, i: i64) -> ClassFunction {
    let q = BigInt::from(field.q());
    let one = Poly::linear(1, field);
    let twist = det_character(field, classes, m, i);
    ClassFunction(
        classes
            .iter()
            .zip(twist.0)
            .map(|(s, th)| {
                let d = s.get(&one).len();
                let mut v = BigInt::one();
                for j in 0..t {
                    v *= num_traits::pow(q.clone(), d) - num_traits::pow(q.clone(), j);
                }
                th.scale_int(&v)
            })
            .collect(),
    )
}

/// Number of `t`-spaces fixed by each class representative.
pub fn space_perm_character(field: &FieldTable, classes: &[ClassIndex], m: u32, t: usize) -> Result<ClassFunction> {
    let n = classes.first().map_or(0, |s| s.norm());
    let size = (field.q() as u64).saturating_pow(n as u32);
    if size > 4096 {
        return Err(Error::BudgetExceeded {
            what: "vectors in the ambient space",
            needed: size,
            limit: 4096,
        });
    }
    Ok(ClassFunction(
        classes
            .iter()
            .map(|s| Cyclotomic::from_int(m, count_invariant(&class_rep(s, field), t, field) as i64))
            .collect(),
    ))
}

/// `χ^λ(1)` from the q-hook formula.
pub fn hook_degree(lambda: &ClassIndex, q: usize) -> BigInt {
    let qb = BigInt::from(q);
    let mut num = q_units_product(lambda.norm(), q as u64);
    let mut den = BigInt::one();
    for (f, p) in lambda.entries() {
        let d = f.deg();
        let (hooks, b) = hook_stats(p);
        num *= num_traits::pow(qb.clone(), d * b);
        for h in hooks {
            den *= num_traits::pow(qb.clone(), d * h) - 1;
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// `ψ^λ` on the merged classes `D_σ`, both indexed by `Ω_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetrized {
    /// Row labels `λ ∈ Ω_n`, sorted.
    pub labels: Vec<ClassIndex>,
    /// Table rows forming each `ψ^λ` (one or two).
    pub members: Vec<Vec<usize>>,
    /// Column representatives `σ ∈ Ω_n`, sorted.
    pub columns: Vec<ClassIndex>,
    /// Table classes merged into each `D_σ`.
    pub column_classes: Vec<Vec<usize>>,
    pub d_sizes: Vec<u64>,
    /// `ψ^λ(1)`.
    pub psi_degrees: Vec<u64>,
    /// `χ^λ(1)`.
    pub chi_degrees: Vec<u64>,
    pub values: Vec<Vec<Cyclotomic>>,
}

impl Symmetrized {
    pub fn row_of(&self, lambda: &ClassIndex) -> Option<usize> {
        self.labels.iter().position(|l| l == lambda)
    }
    pub fn col_of(&self, sigma: &ClassIndex) -> Option<usize> {
        self.columns.iter().position(|s| s == sigma)
    }
    /// Column of the merged class containing `σ` or `σ*`.
    pub fn col_containing(&self, table: &CharacterTable, sigma: &ClassIndex) -> Option<usize> {
        let k = table.class_id(sigma)?;
        self.column_classes.iter().position(|c| c.contains(&k))
    }
    pub fn value(&self, lambda: usize, sigma: usize) -> &Cyclotomic {
        &self.values[lambda][sigma]
    }
}

/// Merges `χ^λ` with `χ^{λ*}` and `C_σ` with `C_{σ*}`.
pub fn symmetrize(table: &CharacterTable, field: &FieldTable) -> Result<Symmetrized> {
    let labels = table.labels().ok_or(Error::LabelingRequired)?;
    let mut rows: Vec<(ClassIndex, Vec<usize>)> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let s = l.star(field);
        if *l > s {
            continue;
        }
        let mut members = vec![i];
        if s != *l {
            let j = table
                .row_of_label(&s)
                .ok_or_else(|| Error::LabelingInconsistent(format!("no row labeled {s}")))?;
            members.push(j);
        }
        rows.push((l.clone(), members));
    }
    rows.sort();
    let mut cols: Vec<(ClassIndex, Vec<usize>)> = Vec::new();
    for (k, s) in table.classes().iter().enumerate() {
        let ks = table.class_star()[k];
        if *s > table.classes()[ks] {
            continue;
        }
        let mut c = vec![k];
        if ks != k {
            c.push(ks);
        }
        cols.push((s.clone(), c));
    }
    cols.sort();
    let mut values = Vec::with_capacity(rows.len());
    for (lab, members) in &rows {
        let mut row = Vec::with_capacity(cols.len());
        for (sig, cls) in &cols {
            let vals: Vec<Cyclotomic> = cls
                .iter()
                .map(|&k| {
                    members
                        .iter()
                        .fold(Cyclotomic::zero(table.m()), |acc, &r| acc + table.row(r)[k].clone())
                })
                .collect();
            if vals.iter().any(|v| *v != vals[0]) || !vals[0].is_real() {
                return Err(Error::NotConstantOnD(format!("ψ^{lab} on D_{sig}")));
            }
            row.push(vals[0].clone());
        }
        values.push(row);
    }
    Ok(Symmetrized {
        psi_degrees: rows
            .iter()
            .map(|(_, m)| m.iter().map(|&r| table.degrees()[r]).sum())
            .collect(),
        chi_degrees: rows.iter().map(|(_, m)| table.degrees()[m[0]]).collect(),
        labels: rows.iter().map(|(l, _)| l.clone()).collect(),
        members: rows.into_iter().map(|(_, m)| m).collect(),
        d_sizes: cols
            .iter()
            .map(|(_, c)| c.iter().map(|&k| table.class_sizes()[k]).sum())
            .collect(),
        columns: cols.iter().map(|(s, _)| s.clone()).collect(),
        column_classes: cols.into_iter().map(|(_, c)| c).collect(),
        values,
    })
}
