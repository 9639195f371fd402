//! The intersection-bound pipeline: the `h_{ℓ,j}` table, the `Σ`/`Π`
//! strata, `Q_t` by two routes, weight systems, eigenvalue tails, final
//! bounds, span checks and the class-size/degree estimates.

mod estimates;
mod qt;
mod span;
mod weights;

pub use estimates::{estimates_check, EstimatesReport};
pub use qt::{
    build_qt_direct, build_st_reduced, check_s_against_table, compare_qt, realize_rows, SBlockCheck, QtDiff, QtMatrix,
    ReducedPath,
};
pub use span::{
    independent_tuples, projection_residual, span_check, span_constituents, standard_coset, Incidence, SpanReport,
};
pub use weights::{
    bound_report, closed_form_bound, solve_weights, tail_check, BoundReport, EigenClass, EigenRow, TailReport,
    WeightSystem,
};

use crate::chartab::{zeta_character, CharacterTable, Symmetrized};
use crate::error::{Error, Result};
use crate::gfq::{companion_det, enumerate_irreducibles, reciprocal, FieldTable, Poly};
use crate::glq::ClassIndex;
use crate::partitions::{dominates, Partition};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// `points`: pointwise `t`-intersection; `spaces`: `t`-space intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Points,
    Spaces,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Points => "points",
            Mode::Spaces => "spaces",
        })
    }
}

/// `(level, index, rest)`: `(k, i, κ ∈ Λ_k)` for rows in `Π_{k,i}` and
/// `(ℓ, j, τ ∈ Λ_ℓ)` for columns in `Σ_{ℓ,j}`.  Free of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumKey {
    pub level: usize,
    pub index: usize,
    pub rest: ClassIndex,
}

impl fmt::Display for StratumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.level, self.index, self.rest)
    }
}

impl Serialize for StratumKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn labels_json<S: Serializer>(v: &[ClassIndex], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ClassIndex::label))
}

pub(crate) fn label_json<S: Serializer>(v: &ClassIndex, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.label())
}

/// `X − α^i`.
pub fn linear_root(field: &FieldTable, i: usize) -> Poly {
    Poly::linear(field.exp(i as i64), field)
}

/// Negation modulo `q − 1`.
pub fn neg_index(i: usize, q: usize) -> usize {
    (q - 1 - i % (q - 1)) % (q - 1)
}

/// How ties among admissible `h_{ℓ,j}` are broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HChoice {
    /// Least admissible polynomial.
    Least,
    /// Greatest admissible polynomial, for sensitivity runs.
    Greatest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HEntry {
    Single(Poly),
    /// No self-reciprocal candidate: `h` together with `h* ≠ h`.
    Pair(Poly, Poly),
}

impl HEntry {
    pub fn primary(&self) -> &Poly {
        match self {
            HEntry::Single(h) | HEntry::Pair(h, _) => h,
        }
    }
    pub fn polys(&self) -> Vec<&Poly> {
        match self {
            HEntry::Single(h) => vec![h],
            HEntry::Pair(h, g) => vec![h, g],
        }
    }
    pub fn is_pair(&self) -> bool {
        matches!(self, HEntry::Pair(..))
    }
}

impl Serialize for HEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.polys().iter().map(|p| p.to_string()))
    }
}

/// `h_{ℓ,j}` for `0 ≤ ℓ ≤ t`, `0 ≤ j ≤ q − 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTable {
    pub n: usize,
    pub t: usize,
    pub choice: HChoice,
    pub entries: BTreeMap<(usize, usize), HEntry>,
}

impl HTable {
    pub fn get(&self, l: usize, j: usize) -> &HEntry {
        &self.entries[&(l, j)]
    }
    pub fn pair_mode(&self) -> bool {
        self.entries.values().any(HEntry::is_pair)
    }
    pub fn pair_slots(&self) -> Vec<(usize, usize)> {
        self.entries.iter().filter(|(_, e)| e.is_pair()).map(|(k, _)| *k).collect()
    }
}

impl Serialize for HTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.entries.iter().map(|((l, j), e)| (format!("{l},{j}"), e)))
    }
}

pub fn select_h(field: &FieldTable, n: usize, t: usize, choice: HChoice) -> Result<HTable> {
    if t >= n {
        return Err(Error::InvalidArgument(format!("t = {t} must be below n = {n}")));
    }
    let q = field.q();
    let pick = |v: &[Poly]| -> Option<Poly> {
        match choice {
            HChoice::Least => v.first().cloned(),
            HChoice::Greatest => v.last().cloned(),
        }
    };
    let mut entries = BTreeMap::new();
    for l in 0..=t {
        let d = n - l;
        let irr = enumerate_irreducibles(field, d);
        for j in 0..q - 1 {
            let jj = neg_index(j, q);
            if jj < j {
                continue;
            }
            let target = field.exp(j as i64);
            let cands: Vec<Poly> = irr.iter().filter(|f| companion_det(f, field) == target).cloned().collect();
            if jj != j {
                let h = pick(&cands).ok_or(Error::NoCandidate { degree: d, j })?;
                let hs = reciprocal(&h, field)?;
                entries.insert((l, j), HEntry::Single(h));
                entries.insert((l, jj), HEntry::Single(hs));
                continue;
            }
            let selfrec: Vec<Poly> = cands
                .iter()
                .filter(|f| reciprocal(f, field).map(|r| r == **f).unwrap_or(false))
                .cloned()
                .collect();
            let e = match pick(&selfrec) {
                Some(h) => HEntry::Single(h),
                None => {
                    let h = pick(&cands).ok_or(Error::NoCandidate { degree: d, j })?;
                    let hs = reciprocal(&h, field)?;
                    HEntry::Pair(h, hs)
                }
            };
            entries.insert((l, j), e);
        }
    }
    Ok(HTable { n, t, choice, entries })
}

/// A merged column `D_σ` inside `Σ_{≤t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaColumn {
    pub key: StratumKey,
    /// Column of the symmetrized table.
    #[serde(skip)]
    pub col: usize,
    /// The member class carrying the key.
    #[serde(serialize_with = "label_json")]
    pub sigma: ClassIndex,
    /// `σ(X−1) = (1^t)` at the top level.
    pub fixes_t_tuple: bool,
}

/// A row `ψ^λ` with `λ ∈ Ω_n ∩ Π_{≤t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiRow {
    pub key: StratumKey,
    #[serde(skip)]
    pub row: usize,
    #[serde(serialize_with = "label_json")]
    pub lambda: ClassIndex,
}

/// `Ω_n ∩ Σ_{≤t}` and `Ω_n ∩ Π_{≤t}` in key order, plus the full families.
#[derive(Clone, Debug, Serialize)]
pub struct Strata {
    pub t: usize,
    pub sigma: Vec<SigmaColumn>,
    pub pi: Vec<PiRow>,
    /// `|Σ_{ℓ,j}|` over all of `Λ_n`, keyed `"ℓ,j"`.
    pub sigma_sizes: BTreeMap<String, usize>,
    /// `|Π_{k,i}|` from constituents, keyed `"k,i"`.
    pub pi_sizes: BTreeMap<String, usize>,
    pub pair_mode: bool,
}

fn pi_key(lambda: &ClassIndex, field: &FieldTable, n: usize, t: usize) -> Option<StratumKey> {
    let q = field.q();
    (0..q - 1).find_map(|i| {
        let f = linear_root(field, i);
        let p = lambda.get(&f);
        let first = p.first();
        (first * 2 > n && n - first <= t).then(|| StratumKey {
            level: n - first,
            index: i,
            rest: lambda.with(&f, p.without_part(first).expect("first part present")),
        })
    })
}

fn sigma_key(sigma: &ClassIndex, h: &HTable, l: usize, j: usize) -> Option<StratumKey> {
    let hp = h.get(l, j).primary();
    (sigma.get(hp) == Partition::row(1)).then(|| StratumKey {
        level: l,
        index: j,
        rest: sigma.without(hp),
    })
}

/// `Σ_{≤t}` by inspecting class labels and `Π_{≤t}` from the constituents
/// of `ζ^{(k,i)}`, then cross-checked against the row labels.
pub fn sigma_pi_sets(
    field: &FieldTable,
    table: &CharacterTable,
    sym: &Symmetrized,
    h: &HTable,
    t: usize,
) -> Result<Strata> {
    let n = table.n();
    let q = field.q();
    if t > h.t {
        return Err(Error::InvalidArgument(format!("h table covers t ≤ {}, asked {t}", h.t)));
    }
    let labels = table.labels().ok_or(Error::LabelingRequired)?;

    // Σ: every class with σ(h) = (1), merged to D-columns
    let mut sigma_sizes = BTreeMap::new();
    let mut col_keys: BTreeMap<usize, (StratumKey, ClassIndex)> = BTreeMap::new();
    for l in 0..=t {
        for j in 0..q - 1 {
            let e = h.get(l, j);
            let mut count = 0;
            for (k, s) in table.classes().iter().enumerate() {
                if !e.polys().iter().any(|p| s.get(p) == Partition::row(1)) {
                    continue;
                }
                count += 1;
                let col = sym
                    .column_classes
                    .iter()
                    .position(|c| c.contains(&k))
                    .expect("every class lies in a merged column");
                if let Some(key) = sigma_key(s, h, l, j) {
                    let slot = col_keys.entry(col).or_insert_with(|| (key.clone(), s.clone()));
                    if key < slot.0 {
                        *slot = (key, s.clone());
                    }
                }
            }
            sigma_sizes.insert(format!("{l},{j}"), count);
        }
    }
    let one = linear_root(field, 0);
    let mut sigma: Vec<SigmaColumn> = col_keys
        .into_iter()
        .map(|(col, (key, s))| SigmaColumn {
            fixes_t_tuple: t > 0 && key.level == t && s.get(&one) == Partition::column(t),
            key,
            col,
            sigma: s,
        })
        .collect();
    sigma.sort_by(|a, b| a.key.cmp(&b.key));

    // Π from constituents of ζ^{(k,i)}
    let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); q - 1];
    let mut stratum: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut pi_sizes = BTreeMap::new();
    for k in 0..=t {
        for (i, prev) in below.iter_mut().enumerate() {
            let z = zeta_character(field, table.classes(), table.m(), k, i as i64);
            let mult = table.decompose(&z)?;
            let now: BTreeSet<usize> = mult.iter().enumerate().filter(|(_, &c)| c != 0).map(|(r, _)| r).collect();
            if !prev.is_subset(&now) {
                return Err(Error::ConstituentMismatch(format!("ζ^({k},{i}) loses constituents of ζ^({},{i})", k.saturating_sub(1))));
            }
            let fresh: Vec<usize> = now.difference(prev).copied().collect();
            pi_sizes.insert(format!("{k},{i}"), fresh.len());
            for r in fresh {
                stratum.insert(r, (k, i));
            }
            *prev = now;
        }
    }
    for (r, l) in labels.iter().enumerate() {
        let by_label = pi_key(l, field, n, t).map(|k| (k.level, k.index));
        if by_label != stratum.get(&r).copied() {
            return Err(Error::ConstituentMismatch(format!(
                "row {l}: label says {by_label:?}, constituents say {:?}",
                stratum.get(&r)
            )));
        }
    }
    let mut pi: Vec<PiRow> = Vec::new();
    for (row, members) in sym.members.iter().enumerate() {
        let keys: Vec<StratumKey> = members.iter().filter_map(|&r| pi_key(&labels[r], field, n, t)).collect();
        if keys.is_empty() {
            continue;
        }
        if keys.len() != members.len() {
            return Err(Error::ConstituentMismatch(format!("{} and its conjugate straddle Π", sym.labels[row])));
        }
        pi.push(PiRow {
            key: keys.into_iter().min().expect("nonempty"),
            row,
            lambda: sym.labels[row].clone(),
        });
    }
    pi.sort_by(|a, b| a.key.cmp(&b.key));
    if pi.len() != sigma.len() {
        return Err(Error::StrataMismatch {
            rows: pi.len(),
            cols: sigma.len(),
        });
    }
    Ok(Strata {
        t,
        sigma,
        pi,
        sigma_sizes,
        pi_sizes,
        pair_mode: (0..=t).any(|l| (0..q - 1).any(|j| h.get(l, j).is_pair())),
    })
}

/// `λ = X−1 ↦ μ` with `|μ| = n` and `μ ⊵ (n−t, t)`.
pub fn is_space_constituent(lambda: &ClassIndex, field: &FieldTable, n: usize, t: usize) -> bool {
    let one = linear_root(field, 0);
    match lambda.entries() {
        [(f, mu)] if *f == one && mu.size() == n => {
            dominates(mu, &Partition::new(vec![n - t, t])).unwrap_or(false)
        }
        _ => false,
    }
}

/// `λ(X−1)_1 ≥ n − t`.
pub fn is_point_constituent(lambda: &ClassIndex, field: &FieldTable, n: usize, t: usize) -> bool {
    lambda.get(&linear_root(field, 0)).first() + t >= n
}
