//! Weighted adjacency for `t`-derangements: the linear systems fixing the
//! weights, the full eigenvalue profile they induce, and the final bounds.

use super::{label_json, linear_root, Mode, Strata};
use crate::cyclotomic::{compact, Cyclotomic};
use crate::error::{Error, Result};
use crate::gfq::FieldTable;
use crate::glq::ClassIndex;
use crate::linalg;
use crate::partitions::{q_binomial, tuple_count, Partition};
use crate::scheme::{hoffman_bound, HoffmanCertificate, HoffmanMode, SchemeEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEntry {
    pub key: super::StratumKey,
    #[serde(serialize_with = "label_json")]
    pub sigma: ClassIndex,
    #[serde(skip)]
    pub col: usize,
    #[serde(serialize_with = "compact::one")]
    pub w: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSystem {
    pub t: usize,
    pub mode: Mode,
    /// `η` (points) or `ε` (spaces).
    #[serde(serialize_with = "compact::one")]
    pub target: Cyclotomic,
    pub weights: Vec<WeightEntry>,
    /// Row labels of the system, in order.
    #[serde(serialize_with = "super::labels_json")]
    pub rows: Vec<ClassIndex>,
    #[serde(serialize_with = "compact::many")]
    pub rhs: Vec<Cyclotomic>,
    pub residual_zero: bool,
    pub real: bool,
    /// Points: `w(σ) = 0` wherever `σ(X−1) = (1^t)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing_holds: Option<bool>,
    /// Spaces: the row `X−1 ↦ (n−t, t)` also takes the value `ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implied_row_holds: Option<bool>,
}

impl WeightSystem {
    pub fn passed(&self) -> bool {
        self.residual_zero && self.real && self.vanishing_holds != Some(false) && self.implied_row_holds != Some(false)
    }
    /// `(column, weight)` pairs with nonzero weight, for `SchemeEigen::weighted`.
    pub fn support(&self) -> Vec<(usize, Cyclotomic)> {
        self.weights.iter().filter(|e| !e.w.is_zero()).map(|e| (e.col, e.w.clone())).collect()
    }
}

/// `η = −1/(#t-tuples − 1)` or `ε = −1/([n t]_q − 1)`.
pub fn target_value(q: usize, n: usize, t: usize, mode: Mode) -> BigRational {
    let count = match mode {
        Mode::Points => tuple_count(n, t, q as u64),
        Mode::Spaces => q_binomial(n, t, q as u64),
    };
    -BigRational::new(BigInt::one(), count - 1)
}

/// Row label `X−1 ↦ (n−s, s)`.
fn two_row(field: &FieldTable, n: usize, s: usize) -> ClassIndex {
    ClassIndex::single(linear_root(field, 0), Partition::new(vec![n - s, s]))
}

/// Solves for the weights.  `strata` must be taken at level `t` for points
/// and `t − 1` for spaces.
pub fn solve_weights(
    field: &FieldTable,
    eigen: &SchemeEigen,
    strata: &Strata,
    n: usize,
    t: usize,
    mode: Mode,
) -> Result<WeightSystem> {
    if t == 0 || n <= 2 * t {
        return Err(Error::InvalidArgument(format!("weights need 1 ≤ t and n > 2t, got n = {n}, t = {t}")));
    }
    let level = match mode {
        Mode::Points => t,
        Mode::Spaces => t - 1,
    };
    if strata.t != level {
        return Err(Error::InvalidArgument(format!("strata at level {}, wanted {level}", strata.t)));
    }
    let m = eigen.p[0][0].order();
    let target = Cyclotomic::from_rational(m, &target_value(field.q(), n, t, mode));
    let one = linear_root(field, 0);
    let rhs: Vec<Cyclotomic> = strata
        .pi
        .iter()
        .map(|r| match mode {
            Mode::Points => match (r.key.level, r.key.index) {
                (0, 0) => Cyclotomic::one(m),
                (_, 0) => target.clone(),
                _ => Cyclotomic::zero(m),
            },
            Mode::Spaces => {
                let p = r.lambda.get(&one);
                let only_one = r.lambda.entries().len() == 1 && p.size() == n;
                match (only_one, p.len(), p.part(2)) {
                    (true, 1, _) => Cyclotomic::one(m),
                    (true, 2, s) if (1..t).contains(&s) => target.clone(),
                    _ => Cyclotomic::zero(m),
                }
            }
        })
        .collect();
    let a: Vec<Vec<Cyclotomic>> = strata
        .pi
        .iter()
        .map(|r| strata.sigma.iter().map(|c| eigen.p[r.row][c.col].clone()).collect())
        .collect();
    let w = linalg::solve(&a, &rhs).ok_or(Error::SingularSystem)?;
    let w: Vec<Cyclotomic> = w.into_iter().map(|x| x.reduce_order()).collect();
    let residual_zero = a.iter().zip(&rhs).all(|(row, b)| {
        let lhs = row.iter().zip(&w).fold(Cyclotomic::zero(m), |acc, (x, y)| acc + x * y);
        (lhs - b.clone()).is_zero()
    });
    let real = w.iter().all(Cyclotomic::is_real);
    let weights: Vec<WeightEntry> = strata
        .sigma
        .iter()
        .zip(&w)
        .map(|(c, x)| WeightEntry {
            key: c.key.clone(),
            sigma: c.sigma.clone(),
            col: c.col,
            w: x.clone(),
        })
        .collect();
    let vanishing_holds = (mode == Mode::Points).then(|| {
        strata
            .sigma
            .iter()
            .zip(&w)
            .filter(|(c, _)| c.fixes_t_tuple)
            .all(|(_, x)| x.is_zero())
    });
    let implied_row_holds = match mode {
        Mode::Points => None,
        Mode::Spaces => {
            let lab = two_row(field, n, t);
            let row = eigen
                .labels
                .iter()
                .position(|l| *l == lab)
                .ok_or_else(|| Error::LabelingInconsistent(format!("no row {lab}")))?;
            let v = weights
                .iter()
                .fold(Cyclotomic::zero(m), |acc, e| acc + &e.w * &eigen.p[row][e.col]);
            Some((v - target.clone()).is_zero())
        }
    };
    Ok(WeightSystem {
        t,
        mode,
        target: target.reduce_order(),
        weights,
        rows: strata.pi.iter().map(|r| r.lambda.clone()).collect(),
        rhs: rhs.into_iter().map(|x| x.reduce_order()).collect(),
        residual_zero,
        real,
        vanishing_holds,
        implied_row_holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenClass {
    /// A row fixed by the linear system.
    Target,
    /// `|P(λ)| < |target|`.
    Strict,
    /// `|P(λ)| ≥ |target|` outside the system.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenRow {
    #[serde(serialize_with = "label_json")]
    pub lambda: ClassIndex,
    #[serde(serialize_with = "compact::one")]
    pub p: Cyclotomic,
    pub class: EigenClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub t: usize,
    pub mode: Mode,
    #[serde(serialize_with = "compact::one")]
    pub target: Cyclotomic,
    pub rows: Vec<EigenRow>,
    #[serde(serialize_with = "super::labels_json")]
    pub violations: Vec<ClassIndex>,
    pub strict: usize,
    /// Every system row takes exactly its prescribed value.
    pub targets_exact: bool,
}

pub fn tail_check(field: &FieldTable, eigen: &SchemeEigen, ws: &WeightSystem, n: usize) -> TailReport {
    let values = eigen.weighted(&ws.support());
    let mut fixed: Vec<(ClassIndex, Cyclotomic)> = ws.rows.iter().cloned().zip(ws.rhs.iter().cloned()).collect();
    if ws.mode == Mode::Spaces {
        fixed.push((two_row(field, n, ws.t), ws.target.clone()));
    }
    let bound = ws.target.abs_real();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut strict = 0;
    let mut targets_exact = true;
    for (l, v) in eigen.labels.iter().zip(values) {
        let v = v.reduce_order();
        let class = match fixed.iter().find(|(lab, _)| lab == l) {
            Some((_, want)) => {
                targets_exact &= (v.clone() - want.clone()).is_zero();
                EigenClass::Target
            }
            None if v.abs_real().cmp_real(&bound) == Ordering::Less => {
                strict += 1;
                EigenClass::Strict
            }
            None => {
                violations.push(l.clone());
                EigenClass::Violation
            }
        };
        rows.push(EigenRow {
            lambda: l.clone(),
            p: v,
            class,
        });
    }
    TailReport {
        t: ws.t,
        mode: ws.mode,
        target: ws.target.clone(),
        rows,
        violations,
        strict,
        targets_exact,
    }
}

/// `∏_{i=t}^{n−1}(q^n − q^i)`, times `∏_{i<t}(q^t − q^i)` for spaces.
pub fn closed_form_bound(q: usize, n: usize, t: usize, mode: Mode) -> BigInt {
    let q = BigInt::from(q);
    let qn = num_traits::pow(q.clone(), n);
    let mut acc: BigInt = (t..n).map(|i| &qn - num_traits::pow(q.clone(), i)).product();
    if mode == Mode::Spaces {
        let qt = num_traits::pow(q.clone(), t);
        let g: BigInt = (0..t).map(|i| &qt - num_traits::pow(q.clone(), i)).product();
        acc *= g;
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub t: usize,
    pub mode: Mode,
    pub independent: HoffmanCertificate,
    pub cross: HoffmanCertificate,
    pub closed_form: String,
    pub independent_equal: bool,
    pub cross_equal: bool,
    /// The overall smallest normalized eigenvalue is the prescribed one.
    pub p_min_is_target: bool,
    #[serde(serialize_with = "super::labels_json")]
    pub attaining: Vec<ClassIndex>,
}

pub fn bound_report(eigen: &SchemeEigen, ws: &WeightSystem, q: usize, n: usize) -> Result<BoundReport> {
    let w = ws.support();
    let independent = hoffman_bound(eigen, &w, HoffmanMode::Independent)?;
    let cross = hoffman_bound(eigen, &w, HoffmanMode::Cross)?;
    let closed = closed_form_bound(q, n, ws.t, ws.mode);
    let eq = |c: &HoffmanCertificate| {
        c.bound_rational()
            .is_some_and(|b| b == BigRational::from_integer(closed.clone()))
    };
    let p_min_is_target = (independent.p_min.clone() - ws.target.clone()).is_zero();
    debug_assert!(!closed.is_zero());
    Ok(BoundReport {
        t: ws.t,
        mode: ws.mode,
        independent_equal: eq(&independent),
        cross_equal: eq(&cross),
        attaining: independent.attaining.clone(),
        independent,
        cross,
        closed_form: closed.to_string(),
        p_min_is_target,
    })
}
