//! The symmetrized conjugacy-class scheme of `GL(n, q)`: eigenvalues
//! `P(λ,σ)`, primitive idempotents `E_λ`, and weighted ratio bounds.

use crate::chartab::{identity_index, CharacterTable, Symmetrized};
use crate::cyclotomic::{compact, Cyclotomic};
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Poly};
use crate::glq::{ClassIndex, GroupData};
use crate::partitions::Partition;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Largest group order for which `|G| × |G|` matrices are formed.
pub const DENSE_MAX_ORDER: usize = 500;
/// Largest group order for which idempotent ranks come from elimination
/// rather than the trace.
pub const ELIMINATION_MAX_ORDER: usize = 48;

/// `P(λ,σ) = |D_σ| ψ^λ_σ / ψ^λ(1)` over `Ω_n × Ω_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeEigen {
    pub labels: Vec<ClassIndex>,
    pub columns: Vec<ClassIndex>,
    pub d_sizes: Vec<u64>,
    pub p: Vec<Vec<Cyclotomic>>,
    pub trivial: usize,
    pub identity_col: usize,
    pub order: u64,
}

pub fn trivial_label(field: &FieldTable, n: usize) -> ClassIndex {
    ClassIndex::single(Poly::linear(1, field), Partition::row(n))
}

pub fn eigenvalue_matrix(sym: &Symmetrized, field: &FieldTable) -> Result<SchemeEigen> {
    let n = sym.columns[0].norm();
    let trivial = sym
        .row_of(&trivial_label(field, n))
        .ok_or_else(|| Error::LabelingInconsistent("trivial label missing".into()))?;
    let identity_col = sym
        .col_of(&identity_index(field, n))
        .ok_or_else(|| Error::InvalidArgument("identity column missing".into()))?;
    let p = sym
        .values
        .iter()
        .zip(&sym.psi_degrees)
        .map(|(row, &d)| {
            let inv = BigRational::new(BigInt::one(), BigInt::from(d));
            row.iter()
                .zip(&sym.d_sizes)
                .map(|(v, &s)| v.scale(&(&inv * BigInt::from(s))))
                .collect()
        })
        .collect();
    Ok(SchemeEigen {
        labels: sym.labels.clone(),
        columns: sym.columns.clone(),
        d_sizes: sym.d_sizes.clone(),
        p,
        trivial,
        identity_col,
        order: sym.d_sizes.iter().sum(),
    })
}

impl SchemeEigen {
    pub fn value(&self, lambda: usize, sigma: usize) -> &Cyclotomic {
        &self.p[lambda][sigma]
    }

    /// Trivial row is `|D_σ|` and every nontrivial row sums to zero.
    pub fn check_rows(&self) -> bool {
        let m = self.p[0][0].order();
        let triv_ok = self.p[self.trivial]
            .iter()
            .zip(&self.d_sizes)
            .all(|(v, &s)| *v == Cyclotomic::from_int(m, s as i64));
        let sums_ok = self.p.iter().enumerate().all(|(l, row)| {
            l == self.trivial || row.iter().fold(Cyclotomic::zero(m), |a, v| a + v.clone()).is_zero()
        });
        triv_ok && sums_ok && self.p.iter().flatten().all(Cyclotomic::is_real)
    }

    /// `P(λ) = Σ_σ w(σ) P(λ,σ)` for weights given on columns.
    pub fn weighted(&self, w: &[(usize, Cyclotomic)]) -> Vec<Cyclotomic> {
        let m = self.p[0][0].order();
        self.p
            .iter()
            .map(|row| w.iter().fold(Cyclotomic::zero(m), |a, (s, x)| a + x * &row[*s]))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoffmanMode {
    Independent,
    Cross,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoffmanCertificate {
    pub mode: HoffmanMode,
    /// Weighted trivial-row value before normalization.
    #[serde(serialize_with = "compact::one")]
    pub p0_raw: Cyclotomic,
    /// Normalized eigenvalues, trivial row equal to 1.
    #[serde(serialize_with = "compact::many")]
    pub normalized: Vec<Cyclotomic>,
    #[serde(serialize_with = "compact::one")]
    pub p_min: Cyclotomic,
    #[serde(serialize_with = "compact::one")]
    pub p_max: Cyclotomic,
    #[serde(serialize_with = "compact::one")]
    pub ratio: Cyclotomic,
    #[serde(serialize_with = "compact::one")]
    pub bound: Cyclotomic,
    pub attaining: Vec<ClassIndex>,
}

impl HoffmanCertificate {
    /// The bound as an exact rational when it is one.
    pub fn bound_rational(&self) -> Option<BigRational> {
        self.bound.to_rational()
    }
}

pub fn hoffman_bound(eigen: &SchemeEigen, w: &[(usize, Cyclotomic)], mode: HoffmanMode) -> Result<HoffmanCertificate> {
    if let Some((s, _)) = w.iter().find(|(_, x)| !x.is_real()) {
        return Err(Error::DegenerateWeights(format!("weight on column {s} is not real")));
    }
    let raw = eigen.weighted(w);
    let p0 = raw[eigen.trivial].clone();
    if p0.real_sign() != Ordering::Greater {
        return Err(Error::DegenerateWeights(format!("trivial eigenvalue {p0} is not positive")));
    }
    let inv = p0.inv().expect("positive value is invertible");
    let normalized: Vec<Cyclotomic> = raw.iter().map(|x| x * &inv).collect();
    let m = p0.order();
    let others = || (0..normalized.len()).filter(|&l| l != eigen.trivial);
    let p_min = others()
        .map(|l| &normalized[l])
        .min_by(|a, b| a.cmp_real(b))
        .cloned()
        .unwrap_or_else(|| Cyclotomic::zero(m));
    let p_max = others()
        .map(|l| normalized[l].abs_real())
        .max_by(|a, b| a.cmp_real(b))
        .unwrap_or_else(|| Cyclotomic::zero(m));
    let extreme = match mode {
        HoffmanMode::Independent => p_min.abs_real(),
        HoffmanMode::Cross => p_max.clone(),
    };
    let ratio = extreme.div(&(Cyclotomic::one(m) + extreme.clone())).expect("1 + |x| > 0");
    let attaining = others()
        .filter(|&l| match mode {
            HoffmanMode::Independent => normalized[l] == p_min,
            HoffmanMode::Cross => normalized[l].abs_real() == p_max,
        })
        .map(|l| eigen.labels[l].clone())
        .collect();
    Ok(HoffmanCertificate {
        mode,
        bound: ratio.scale_int(&BigInt::from(eigen.order)),
        p0_raw: p0,
        normalized,
        p_min,
        p_max,
        ratio,
        attaining,
    })
}

/// Pair counts `#{z : z ∈ D_a, z⁻¹y ∈ D_b}` for every `y`, one table per
/// class of `G` once all `y` in the class are seen to agree.
struct ConvolutionCounts {
    /// Per group class: sparse `(a, b, count)` over merged columns.
    cells: Vec<Vec<(usize, usize, u64)>>,
}

impl ConvolutionCounts {
    fn build(group: &GroupData, col_of_class: &[usize]) -> Result<Self> {
        let order = group.order();
        let k = group.num_classes();
        let ncols = col_of_class.iter().max().map_or(0, |&c| c + 1);
        let per_y: Vec<Vec<(usize, usize, u64)>> = (0..order as u32)
            .into_par_iter()
            .map(|y| {
                let mut h = vec![0u64; ncols * ncols];
                for z in 0..order as u32 {
                    let a = col_of_class[group.class_of(z)];
                    let b = col_of_class[group.class_of(group.mul(group.inverse(z), y))];
                    h[a * ncols + b] += 1;
                }
                h.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, &c)| (i / ncols, i % ncols, c))
                    .collect()
            })
            .collect();
        let mut cells: Vec<Option<Vec<(usize, usize, u64)>>> = vec![None; k];
        for (y, h) in per_y.into_iter().enumerate() {
            let c = group.class_of(y as u32);
            match &cells[c] {
                None => cells[c] = Some(h),
                Some(prev) if *prev == h => {}
                Some(_) => {
                    return Err(Error::InvalidArgument(format!(
                        "convolution counts vary inside class {}",
                        group.class(c).index
                    )))
                }
            }
        }
        Ok(ConvolutionCounts {
            cells: cells.into_iter().map(|c| c.unwrap_or_default()).collect(),
        })
    }

    /// `(f * g)(y) = Σ_z f(z) g(z⁻¹y)` per class, for `f, g` constant on
    /// merged columns.
    fn apply(&self, f: &[Cyclotomic], g: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let m = f.iter().chain(g).map(Cyclotomic::order).fold(1, num_integer::lcm);
        let mut memo: HashMap<(usize, usize), Cyclotomic> = HashMap::new();
        self.cells
            .iter()
            .map(|cell| {
                let mut acc = Cyclotomic::zero(m);
                for &(a, b, c) in cell {
                    let prod = memo.entry((a, b)).or_insert_with(|| &f[a] * &g[b]);
                    if !prod.is_zero() {
                        acc = acc + prod.scale_int(&BigInt::from(c));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Primitive idempotents `E_λ(x,y) = (χ^λ(1)/|G|) ψ^λ(x⁻¹y)`, stored by the
/// value of `ψ^λ` on each merged column.
#[derive(Clone, Debug)]
pub struct Idempotents {
    pub labels: Vec<ClassIndex>,
    /// Merged column of each group class.
    pub col_of_class: Vec<usize>,
    /// `E_λ(1, y)` as a function of the merged column of `y`.
    pub first_rows: Vec<Vec<Cyclotomic>>,
    order: usize,
}

impl Idempotents {
    pub fn build(group: &GroupData, table: &CharacterTable, sym: &Symmetrized) -> Result<Self> {
        let order = group.order();
        if order > DENSE_MAX_ORDER {
            return Err(Error::BudgetExceeded {
                what: "dense scheme matrices",
                needed: order as u64,
                limit: DENSE_MAX_ORDER as u64,
            });
        }
        let col_of_class = (0..group.num_classes())
            .map(|c| {
                let k = table
                    .class_id(&group.class(c).index)
                    .ok_or_else(|| Error::InvalidArgument("table and group classes differ".into()))?;
                sym.column_classes
                    .iter()
                    .position(|cl| cl.contains(&k))
                    .ok_or_else(|| Error::InvalidArgument("class outside every merged column".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let first_rows = sym
            .values
            .iter()
            .zip(&sym.chi_degrees)
            .map(|(row, &d)| {
                let s = BigRational::new(BigInt::from(d), BigInt::from(order));
                row.iter().map(|v| v.reduce_order().scale(&s)).collect()
            })
            .collect();
        Ok(Idempotents {
            labels: sym.labels.clone(),
            col_of_class,
            first_rows,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn entry(&self, group: &GroupData, lambda: usize, x: u32, y: u32) -> &Cyclotomic {
        let c = group.class_of(group.mul(group.inverse(x), y));
        &self.first_rows[lambda][self.col_of_class[c]]
    }

    /// The full `|G| × |G|` matrix, rows and columns in element order.
    pub fn dense(&self, group: &GroupData, lambda: usize) -> Vec<Vec<Cyclotomic>> {
        (0..self.order as u32)
            .map(|x| (0..self.order as u32).map(|y| self.entry(group, lambda, x, y).clone()).collect())
            .collect()
    }

    /// `(Σ_{λ ∈ set} E_λ) v` for an integer vector over the elements.
    pub fn project(&self, group: &GroupData, set: &[usize], v: &[i64]) -> Vec<Cyclotomic> {
        let ncols = self.first_rows.first().map_or(0, Vec::len);
        let m = self.first_rows.iter().flatten().map(Cyclotomic::order).fold(1, num_integer::lcm);
        let combined: Vec<Cyclotomic> = (0..ncols)
            .map(|c| set.iter().fold(Cyclotomic::zero(m), |a, &l| a + self.first_rows[l][c].clone()))
            .collect();
        let support: Vec<(u32, i64)> = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(y, &x)| (y as u32, x))
            .collect();
        (0..self.order as u32)
            .into_par_iter()
            .map(|x| {
                let xi = group.inverse(x);
                let mut counts = vec![0i64; ncols];
                for &(y, c) in &support {
                    counts[self.col_of_class[group.class_of(group.mul(xi, y))]] += c;
                }
                counts
                    .iter()
                    .zip(&combined)
                    .filter(|(&c, _)| c != 0)
                    .fold(Cyclotomic::zero(m), |a, (&c, e)| a + e.scale_int(&BigInt::from(c)))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentReport {
    pub labels: Vec<ClassIndex>,
    pub ranks: Vec<u64>,
    pub rank_method: &'static str,
    pub rank_sum: u64,
    pub order: u64,
    pub idempotent: bool,
    pub orthogonal: bool,
    pub traces_match: bool,
    pub complete: bool,
    pub eigenvectors: bool,
    pub spectral: bool,
    pub failures: Vec<String>,
}

impl IdempotentReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.rank_sum == self.order
    }
}

fn same(a: &Cyclotomic, b: &Cyclotomic) -> bool {
    (a - b).is_zero()
}

/// Checks the idempotent identities on the explicit `|G| × |G|` matrices.
/// Every matrix involved has the form `M(x,y) = f(x⁻¹y)`, so a product is
/// again of that form and equals the convolution of the first rows; it is
/// compared on every element `y`.
pub fn idempotent_check(
    group: &GroupData,
    table: &CharacterTable,
    sym: &Symmetrized,
    eigen: &SchemeEigen,
) -> Result<IdempotentReport> {
    let ids = Idempotents::build(group, table, sym)?;
    let counts = ConvolutionCounts::build(group, &ids.col_of_class)?;
    let order = group.order();
    let nl = ids.len();
    let ncols = sym.columns.len();
    let m = ids.first_rows.iter().flatten().map(Cyclotomic::order).fold(1, num_integer::lcm);
    let per_class = |f: &[Cyclotomic]| -> Vec<Cyclotomic> {
        ids.col_of_class.iter().map(|&c| f[c].embed(m)).collect()
    };
    let id_class = group.identity_class();
    let id_col = ids.col_of_class[id_class];

    let mut failures = Vec::new();
    let pair_results: Vec<(usize, usize, bool)> = (0..nl)
        .into_par_iter()
        .flat_map_iter(|a| (a..nl).map(move |b| (a, b)))
        .map(|(a, b)| {
            let prod = counts.apply(&ids.first_rows[a], &ids.first_rows[b]);
            let expect = if a == b {
                per_class(&ids.first_rows[a])
            } else {
                vec![Cyclotomic::zero(m); prod.len()]
            };
            let ok = prod.iter().zip(&expect).all(|(x, y)| same(x, y));
            (a, b, ok)
        })
        .collect();
    let mut idempotent = true;
    let mut orthogonal = true;
    for (a, b, ok) in pair_results {
        if !ok {
            if a == b {
                idempotent = false;
                failures.push(format!("E^2 != E for {}", ids.labels[a]));
            } else {
                orthogonal = false;
                failures.push(format!("E E' != 0 for {}, {}", ids.labels[a], ids.labels[b]));
            }
        }
    }

    let traces: Vec<Cyclotomic> = ids
        .first_rows
        .iter()
        .map(|r| r[id_col].scale_int(&BigInt::from(order)))
        .collect();
    let mut traces_match = true;
    for l in 0..nl {
        let want = sym.psi_degrees[l] * sym.chi_degrees[l];
        if !same(&traces[l], &Cyclotomic::from_int(1, want as i64)) {
            traces_match = false;
            failures.push(format!("trace of E for {} is {}", ids.labels[l], traces[l]));
        }
    }

    let (ranks, rank_method) = if order <= ELIMINATION_MAX_ORDER {
        let r: Vec<u64> = (0..nl)
            .into_par_iter()
            .map(|l| crate::linalg::rank(&ids.dense(group, l)) as u64)
            .collect();
        (r, "elimination")
    } else {
        let r = traces
            .iter()
            .map(|t| t.to_integer().and_then(|x| u64::try_from(x).ok()).unwrap_or(0))
            .collect();
        (r, "trace")
    };

    let total: Vec<Cyclotomic> = (0..ncols)
        .map(|c| ids.first_rows.iter().fold(Cyclotomic::zero(m), |a, r| a + r[c].clone()))
        .collect();
    let complete = total.iter().enumerate().all(|(c, v)| {
        let want = if c == id_col { Cyclotomic::one(m) } else { Cyclotomic::zero(m) };
        same(v, &want)
    });
    if !complete {
        failures.push("sum of idempotents is not the identity".into());
    }

    let adjacency: Vec<Vec<Cyclotomic>> = (0..ncols)
        .map(|s| (0..ncols).map(|c| Cyclotomic::from_int(1, (c == s) as i64)).collect())
        .collect();
    let eig_fail: Vec<String> = (0..ncols)
        .into_par_iter()
        .flat_map_iter(|s| (0..nl).map(move |l| (s, l)))
        .filter_map(|(s, l)| {
            let prod = counts.apply(&adjacency[s], &ids.first_rows[l]);
            let p = &eigen.p[l][s];
            let want = per_class(&ids.first_rows[l]);
            let ok = prod.iter().zip(&want).all(|(x, y)| same(x, &(y * p)));
            (!ok).then(|| format!("A E != P E for {}, D_{}", ids.labels[l], sym.columns[s]))
        })
        .collect();
    let eigenvectors = eig_fail.is_empty();
    failures.extend(eig_fail);

    let mut spectral = true;
    for s in 0..ncols {
        for c in 0..ncols {
            let v = (0..nl).fold(Cyclotomic::zero(m), |a, l| a + &eigen.p[l][s] * &ids.first_rows[l][c]);
            let want = Cyclotomic::from_int(1, (c == s) as i64);
            if (v - want).is_zero() {
                continue;
            }
            spectral = false;
            failures.push(format!("spectral sum differs for D_{}", sym.columns[s]));
            break;
        }
    }

    Ok(IdempotentReport {
        labels: ids.labels.clone(),
        rank_sum: ranks.iter().sum(),
        ranks,
        rank_method,
        order: order as u64,
        idempotent,
        orthogonal,
        traces_match,
        complete,
        eigenvectors,
        spectral,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{symmetrize, Tower};
    use crate::gfq::build_field;

    fn setup(q: u64, n: usize) -> (FieldTable, GroupData, CharacterTable, Symmetrized, SchemeEigen) {
        let f = build_field(q).unwrap();
        let g = GroupData::build(&f, n, 1000).unwrap();
        let t = Tower::build(&f, n, None, 1000, Some(&g)).unwrap().into_table(n).unwrap();
        let s = symmetrize(&t, &f).unwrap();
        let e = eigenvalue_matrix(&s, &f).unwrap();
        (f, g, t, s, e)
    }

    fn int(v: i64) -> Cyclotomic {
        Cyclotomic::from_int(1, v)
    }

    #[test]
    fn gl32_eigenvalues() {
        let (f, _, _, s, e) = setup(2, 3);
        assert!(e.check_rows());
        let ell = s.columns.iter().position(|c| c.entries()[0].0.deg() == 3).unwrap();
        let x1 = Poly::linear(1, &f);
        let quad = Poly::new(vec![1, 1, 1]);
        let mixed = s.col_of(&ClassIndex::new(vec![(x1.clone(), Partition::row(1)), (quad, Partition::row(1))])).unwrap();
        let l21 = s.row_of(&ClassIndex::single(x1, Partition::new(vec![2, 1]))).unwrap();
        assert_eq!(e.p[e.trivial][ell].to_integer().unwrap(), BigInt::from(48));
        assert_eq!(e.p[l21][ell].to_integer().unwrap(), BigInt::from(-8));
        assert!(e.p[l21][mixed].is_zero());

        let w = vec![(ell, Cyclotomic::from_rational(1, &BigRational::new(1.into(), 48.into())))];
        let cert = hoffman_bound(&e, &w, HoffmanMode::Independent).unwrap();
        assert_eq!(cert.p_min.to_rational().unwrap(), BigRational::new((-1).into(), 6.into()));
        assert_eq!(cert.bound.to_integer().unwrap(), BigInt::from(24));
    }

    #[test]
    fn hoffman_edge_cases() {
        let (_, _, _, _, e) = setup(2, 2);
        assert!(matches!(
            hoffman_bound(&e, &[], HoffmanMode::Independent),
            Err(Error::DegenerateWeights(_))
        ));
        let w: Vec<(usize, Cyclotomic)> = (0..e.columns.len())
            .filter(|&c| c != e.identity_col)
            .map(|c| (c, int(1)))
            .collect();
        let cert = hoffman_bound(&e, &w, HoffmanMode::Independent).unwrap();
        assert_eq!(cert.p_min.to_rational().unwrap(), BigRational::new((-1).into(), 5.into()));
        assert_eq!(cert.bound.to_integer().unwrap(), BigInt::from(1));
    }

    #[test]
    fn gl22_idempotents() {
        let (_, g, t, s, e) = setup(2, 2);
        let r = idempotent_check(&g, &t, &s, &e).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let mut ranks = r.ranks.clone();
        ranks.sort();
        assert_eq!(ranks, vec![1, 1, 4]);
        assert_eq!(r.rank_method, "elimination");
    }

    #[test]
    fn gl23_idempotents() {
        let (_, g, t, s, e) = setup(3, 2);
        let r = idempotent_check(&g, &t, &s, &e).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rank_sum, 48);
    }

    #[test]
    fn projection_of_identity_vector() {
        let (_, g, t, s, _) = setup(2, 2);
        let ids = Idempotents::build(&g, &t, &s).unwrap();
        let mut v = vec![0i64; g.order()];
        v[g.identity() as usize] = 1;
        let all: Vec<usize> = (0..ids.len()).collect();
        let p = ids.project(&g, &all, &v);
        for (x, val) in p.iter().enumerate() {
            assert!(same(val, &int((x == g.identity() as usize) as i64)));
        }
    }
}
