//! Exact checks of the class-size and degree estimates used for large `n`.

use super::{label_json, HTable};
use crate::error::Result;
use crate::gfq::FieldTable;
use crate::glq::{centralizer_order, enumerate_lambda_n, ClassIndex};
use crate::chartab::hook_degree;
use crate::partitions::{hook_stats, Partition};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ClassEstimate {
    #[serde(serialize_with = "label_json")]
    pub sigma: ClassIndex,
    /// `|G_n| / |C_σ|`, the centralizer order.
    pub ratio: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEstimate {
    #[serde(serialize_with = "label_json")]
    pub lambda: ClassIndex,
    pub degree: String,
    /// `N(λ) − M(λ) − n(n+1)/2`.
    pub exponent: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatesReport {
    pub q: usize,
    pub n: usize,
    pub t: usize,
    /// `q^{t⁵} q^n`.
    pub class_limit: String,
    pub max_ratio: String,
    pub classes: Vec<ClassEstimate>,
    pub degrees: Vec<DegreeEstimate>,
    pub failures: usize,
}

impl EstimatesReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `N(λ) − M(λ) − n(n+1)/2` with `N = Σ_f |f| Σ hooks` and `M = Σ_f |f| b`.
pub fn degree_exponent(lambda: &ClassIndex) -> i64 {
    let n = lambda.norm() as i64;
    let (mut big_n, mut big_m) = (0i64, 0i64);
    for (f, p) in lambda.entries() {
        let (hooks, b) = hook_stats(p);
        big_n += f.deg() as i64 * hooks.iter().sum::<usize>() as i64;
        big_m += f.deg() as i64 * b as i64;
    }
    big_n - big_m - n * (n + 1) / 2
}

fn q_power(q: usize, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn estimates_check(field: &FieldTable, n: usize, t: usize, h: &HTable) -> Result<EstimatesReport> {
    let q = field.q();
    let limit = num_traits::pow(BigInt::from(q), t.pow(5) + n);
    let lambda_n = enumerate_lambda_n(field, n);
    let in_sigma = |s: &ClassIndex| {
        h.entries
            .iter()
            .filter(|((l, _), _)| *l <= t)
            .any(|(_, e)| e.polys().iter().any(|p| s.get(p) == Partition::row(1)))
    };
    let classes: Vec<ClassEstimate> = lambda_n
        .iter()
        .filter(|s| in_sigma(s))
        .map(|s| {
            let c = centralizer_order(s, q);
            ClassEstimate {
                sigma: s.clone(),
                holds: c <= limit,
                ratio: c.to_string(),
            }
        })
        .collect();
    let four = BigRational::from_integer(BigInt::from(4));
    let degrees: Vec<DegreeEstimate> = lambda_n
        .iter()
        .map(|l| {
            let d = hook_degree(l, q);
            let e = degree_exponent(l);
            let lhs = BigRational::new(BigInt::from(1), d.clone());
            DegreeEstimate {
                lambda: l.clone(),
                holds: lhs <= &four * q_power(q, e),
                degree: d.to_string(),
                exponent: e,
            }
        })
        .collect();
    let max_ratio = lambda_n
        .iter()
        .filter(|s| in_sigma(s))
        .map(|s| centralizer_order(s, q))
        .max()
        .unwrap_or_default();
    let failures = classes.iter().filter(|c| !c.holds).count() + degrees.iter().filter(|d| !d.holds).count();
    Ok(EstimatesReport {
        q,
        n,
        t,
        class_limit: limit.to_string(),
        max_ratio: max_ratio.to_string(),
        classes,
        degrees,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ekr::{select_h, HChoice};
    use crate::gfq::{build_field, Poly};

    #[test]
    fn gl32_estimates() {
        let f = build_field(2).unwrap();
        let h = select_h(&f, 3, 1, HChoice::Least).unwrap();
        let r = estimates_check(&f, 3, 1, &h).unwrap();
        assert_eq!(r.max_ratio, "7");
        assert_eq!(r.class_limit, "16");
        assert!(r.passed());
    }

    #[test]
    fn trivial_exponent_is_zero() {
        let f = build_field(3).unwrap();
        for n in 1..6 {
            let triv = ClassIndex::single(Poly::linear(1, &f), Partition::row(n));
            assert_eq!(degree_exponent(&triv), 0);
        }
    }

    #[test]
    fn gl42_all_labels() {
        let f = build_field(2).unwrap();
        let h = select_h(&f, 4, 1, HChoice::Least).unwrap();
        let r = estimates_check(&f, 4, 1, &h).unwrap();
        assert_eq!(r.degrees.len(), 14);
        assert!(r.passed());
    }
}
