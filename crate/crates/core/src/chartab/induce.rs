//! Parabolic induction `φ ⊙ ψ` from `P_(a,b)` through fusion counts.

use super::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gfq::{FieldTable, Matrix};
use crate::glq::{centralizer_order, class_rep, class_size, enumerate_lambda_n, ClassIdentifier, ClassIndex};
use crate::partitions::gl_order;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// For each class `C_k` of `G_{a+b}`: the number of `y ∈ C_k ∩ P_(a,b)`
/// with `π₁(y) ∈ C_i` and `π₂(y) ∈ C_j`.
#[derive(Clone, Debug)]
pub struct Fusion {
    a: usize,
    b: usize,
    cells: Vec<Vec<(usize, usize, u64)>>,
    scale: Vec<BigRational>,
}

/// Upper bound on `q^{ab}` block choices enumerated per class pair.
pub const MAX_OFF_DIAGONAL: u64 = 1 << 20;

impl Fusion {
    pub fn build(
        field: &FieldTable,
        classes_a: &[ClassIndex],
        classes_b: &[ClassIndex],
        classes_n: &[ClassIndex],
    ) -> Result<Fusion> {
        let a = classes_a.first().map_or(0, |s| s.norm());
        let b = classes_b.first().map_or(0, |s| s.norm());
        let n = a + b;
        let q = field.q();
        let off = (q as u64)
            .checked_pow((a * b) as u32)
            .filter(|&x| x <= MAX_OFF_DIAGONAL)
            .ok_or(Error::BudgetExceeded {
                what: "off-diagonal blocks",
                needed: u64::MAX,
                limit: MAX_OFF_DIAGONAL,
            })?;
        let lookup: HashMap<&ClassIndex, usize> = classes_n.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let ident = ClassIdentifier::new(field, n);
        let reps_b: Vec<Matrix> = classes_b.iter().map(|s| class_rep(s, field)).collect();
        let pairs: Vec<(usize, usize)> = (0..classes_a.len())
            .flat_map(|i| (0..classes_b.len()).map(move |j| (i, j)))
            .collect();
        let counted: Vec<Vec<(usize, usize, usize, u64)>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let r1 = class_rep(&classes_a[i], field);
                let r2 = &reps_b[j];
                let weight = class_size(&classes_a[i], q).to_u64().unwrap()
                    * class_size(&classes_b[j], q).to_u64().unwrap();
                let mut g = Matrix::zero(n, n);
                for r in 0..a {
                    for c in 0..a {
                        g.set(r, c, r1.get(r, c));
                    }
                }
                for r in 0..b {
                    for c in 0..b {
                        g.set(a + r, a + c, r2.get(r, c));
                    }
                }
                let mut hits: BTreeMap<usize, u64> = BTreeMap::new();
                for code in 0..off {
                    let mut x = code;
                    for r in 0..a {
                        for c in 0..b {
                            g.set(r, a + c, (x % q as u64) as u8);
                            x /= q as u64;
                        }
                    }
                    let s = ident.identify(&g, field).expect("block triangular with invertible blocks");
                    *hits.entry(lookup[&s]).or_default() += 1;
                }
                hits.into_iter().map(|(k, c)| (k, i, j, c * weight)).collect()
            })
            .collect();
        let mut cells = vec![Vec::new(); classes_n.len()];
        for (k, i, j, c) in counted.into_iter().flatten() {
            cells[k].push((i, j, c));
        }
        let p_order = gl_order(a, q as u64) * gl_order(b, q as u64) * num_traits::pow(BigInt::from(q), a * b);
        let scale = classes_n
            .iter()
            .map(|s| BigRational::new(centralizer_order(s, q), p_order.clone()))
            .collect();
        Ok(Fusion { a, b, cells, scale })
    }

    pub fn blocks(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// `(φ ⊙ ψ)` on every class of `G_{a+b}`, valued in `Q(ζ_m)`.
    pub fn apply(&self, phi: &ClassFunction, psi: &ClassFunction, m: u32) -> ClassFunction {
        let mut memo: HashMap<(usize, usize), Cyclotomic> = HashMap::new();
        let vals = self
            .cells
            .iter()
            .zip(&self.scale)
            .map(|(cell, sc)| {
                let mut acc = Cyclotomic::zero(m);
                for &(i, j, c) in cell {
                    let prod = memo
                        .entry((i, j))
                        .or_insert_with(|| (&phi.0[i] * &psi.0[j]).embed(m))
                        .clone();
                    acc = acc + prod.scale_int(&BigInt::from(c));
                }
                acc.scale(sc)
            })
            .collect();
        ClassFunction(vals)
    }
}

/// `φ_1 ⊙ ⋯ ⊙ φ_k` for class functions on `G_{λ_1}, …, G_{λ_k}`, each given
/// with its class list; the result lives on `G_{Σλ_i}` in `Q(ζ_m)`.
pub fn induce_parabolic(
    field: &FieldTable,
    parts: &[(Vec<ClassIndex>, ClassFunction)],
    m: u32,
) -> Result<(Vec<ClassIndex>, ClassFunction)> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty composition".into()))?;
    let mut acc = (first.0.clone(), first.1.embed(m));
    for (classes, f) in rest {
        let n = acc.0[0].norm() + classes[0].norm();
        let target = enumerate_lambda_n(field, n);
        let fusion = Fusion::build(field, &acc.0, classes, &target)?;
        acc = (target.clone(), fusion.apply(&acc.1, f, m));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::{build_field, Poly};
    use crate::partitions::Partition;

    fn ones(n: usize, m: u32) -> ClassFunction {
        ClassFunction(vec![Cyclotomic::one(m); n])
    }

    #[test]
    fn one_space_permutation_character() {
        let f = build_field(2).unwrap();
        let c1 = enumerate_lambda_n(&f, 1);
        let (c2, v) = induce_parabolic(&f, &[(c1.clone(), ones(1, 1)), (c1, ones(1, 1))], 1).unwrap();
        // classes in canonical order: X+1:(1,1), X+1:(2), X^2+X+1:(1)
        let got: Vec<i64> = v.0.iter().map(|x| x.to_integer().unwrap().try_into().unwrap()).collect();
        let one = Poly::linear(1, &f);
        let pos = |p: Vec<usize>| c2.iter().position(|s| s.get(&one) == Partition::new(p.clone()) && s.norm() == 2 && s.entries().len() == 1).unwrap();
        assert_eq!(got[pos(vec![1, 1])], 3);
        assert_eq!(got[pos(vec![2])], 1);
        assert_eq!(got.iter().sum::<i64>(), 4);
    }

    #[test]
    fn single_part_is_identity() {
        let f = build_field(3).unwrap();
        let c = enumerate_lambda_n(&f, 2);
        let phi = ClassFunction((0..c.len()).map(|i| Cyclotomic::from_int(2, i as i64 * 3 - 4)).collect());
        let (c2, v) = induce_parabolic(&f, &[(c.clone(), phi.clone())], 2).unwrap();
        assert_eq!(c2, c);
        assert_eq!(v, phi);
    }

    #[test]
    fn elliptic_lower_block_factorizes() {
        let f = build_field(2).unwrap();
        let c1 = enumerate_lambda_n(&f, 1);
        let c2 = enumerate_lambda_n(&f, 2);
        let c3 = enumerate_lambda_n(&f, 3);
        let psi = ClassFunction(vec![
            Cyclotomic::from_int(1, 5),
            Cyclotomic::from_int(1, 7),
            Cyclotomic::from_int(1, 11),
        ]);
        let fus = Fusion::build(&f, &c1, &c2, &c3).unwrap();
        let v = fus.apply(&ones(1, 1), &psi, 1);
        let quad = Poly::new(vec![1, 1, 1]);
        let mixed = ClassIndex::new(vec![(Poly::linear(1, &f), Partition::row(1)), (quad.clone(), Partition::row(1))]);
        let k = c3.iter().position(|s| *s == mixed).unwrap();
        let e = c2.iter().position(|s| s.get(&quad) == Partition::row(1)).unwrap();
        assert_eq!(v.0[k], psi.0[e]);
    }
}
