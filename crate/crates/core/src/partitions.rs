//! Integer partitions, dominance, Kostka numbers and q-binomials.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Weakly decreasing sequence of positive parts.  The derived order is
/// lexicographic on parts; enumeration order is the reverse of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }
    pub fn empty() -> Self {
        Partition(vec![])
    }
    /// The one-row partition `(m)`, or `∅` for `m = 0`.
    pub fn row(m: usize) -> Self {
        Partition::new(vec![m])
    }
    /// `(1^m)`.
    pub fn column(m: usize) -> Self {
        Partition(vec![1; m])
    }
    pub fn parts(&self) -> &[usize] {
        &self.0
    }
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// `λ_i` with 1-based index, zero past the end.
    pub fn part(&self, i: usize) -> usize {
        i.checked_sub(1)
            .and_then(|k| self.0.get(k))
            .copied()
            .unwrap_or(0)
    }
    /// Largest part, zero for `∅`.
    pub fn first(&self) -> usize {
        self.part(1)
    }
    pub fn conjugate(&self) -> Partition {
        let n = self.first();
        Partition((1..=n).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }
    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }
    /// `λ_1 + … + λ_i`.
    pub fn partial_sum(&self, i: usize) -> usize {
        self.0.iter().take(i).sum()
    }
    /// Removes one copy of `part`; `None` if absent.
    pub fn without_part(&self, part: usize) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == part)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Partition(v))
    }
    pub fn with_part(&self, part: usize) -> Partition {
        let mut v = self.0.clone();
        v.push(part);
        Partition::new(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `m`, starting from `(m)` in reverse-lexicographic order.
pub fn enumerate_partitions(m: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate(l: &Partition) -> Partition {
    l.conjugate()
}

/// `λ ⊵ μ`.
pub fn dominates(l: &Partition, m: &Partition) -> Result<bool> {
    if l.size() != m.size() {
        return Err(Error::SizeMismatch(l.size(), m.size()));
    }
    let n = l.len().max(m.len());
    Ok((1..=n).all(|i| l.partial_sum(i) >= m.partial_sum(i)))
}

/// Kostka matrix `K[λ][μ]` indexed by partitions of `m` in enumeration
/// order, and its inverse `H` with `Σ_μ K_{κμ} H_{μλ} = δ_{κλ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostkaPair {
    pub partitions: Vec<Partition>,
    pub k: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
    index: HashMap<Partition, usize>,
}

impl KostkaPair {
    pub fn index_of(&self, p: &Partition) -> usize {
        self.index[p]
    }
    /// `K_{λμ}`.
    pub fn kostka(&self, l: &Partition, m: &Partition) -> i64 {
        self.k[self.index[l]][self.index[m]]
    }
    /// `H_{μλ}`.
    pub fn inverse_kostka(&self, m: &Partition, l: &Partition) -> i64 {
        self.h[self.index[m]][self.index[l]]
    }
}

/// Number of semistandard tableaux of shape `shape` and content `content`,
/// counted by adding one horizontal strip per content value.
pub fn count_ssyt(shape: &Partition, content: &[usize]) -> i64 {
    fn rec(shape: &[usize], cur: &mut Vec<usize>, content: &[usize]) -> i64 {
        let Some((&c, rest)) = content.split_first() else {
            return i64::from(cur.as_slice() == shape);
        };
        let mut total = 0;
        let mut next = cur.clone();
        strips(shape, cur, 0, c, &mut next, &mut |nxt| {
            let mut n = nxt.to_vec();
            total += rec(shape, &mut n, rest);
        });
        total
    }
    // Enumerate horizontal strips of size `left` from row `row` on.
    fn strips(
        shape: &[usize],
        cur: &[usize],
        row: usize,
        left: usize,
        next: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            f(next);
            return;
        }
        if row >= shape.len() {
            return;
        }
        let lo = cur[row];
        let cap = if row == 0 { shape[0] } else { shape[row].min(cur[row - 1]) };
        for add in 0..=cap.saturating_sub(lo).min(left) {
            next[row] = lo + add;
            strips(shape, cur, row + 1, left - add, next, f);
        }
        next[row] = lo;
    }
    let mut cur = vec![0; shape.len()];
    rec(shape.parts(), &mut cur, content)
}

fn compute_kostka(m: usize) -> KostkaPair {
    let parts = enumerate_partitions(m);
    let n = parts.len();
    let k: Vec<Vec<i64>> = parts
        .iter()
        .map(|l| parts.iter().map(|mu| count_ssyt(l, mu.parts())).collect())
        .collect();
    // K is upper unitriangular in enumeration order; back-substitute.
    let mut h = vec![vec![0i64; n]; n];
    for col in 0..n {
        for row in (0..n).rev() {
            let target = i64::from(row == col);
            let s: i64 = (row + 1..n).map(|j| k[row][j] * h[j][col]).sum();
            h[row][col] = target - s;
        }
    }
    let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    KostkaPair {
        partitions: parts,
        k,
        h,
        index,
    }
}

/// Kostka data for partitions of `m ≤ 12`, memoized.
pub fn kostka_pair(m: usize) -> Arc<KostkaPair> {
    assert!(m <= 12, "Kostka matrices are limited to m ≤ 12");
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<KostkaPair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(k) = cache.lock().unwrap().get(&m) {
        return k.clone();
    }
    let k = Arc::new(compute_kostka(m));
    cache.lock().unwrap().insert(m, k.clone());
    k
}

/// `K_{λμ}`, zero when sizes differ.
pub fn kostka(l: &Partition, m: &Partition) -> i64 {
    if l.size() != m.size() {
        return 0;
    }
    kostka_pair(l.size()).kostka(l, m)
}

/// `H_{μλ}`, zero when sizes differ.
pub fn inverse_kostka(m: &Partition, l: &Partition) -> i64 {
    if l.size() != m.size() {
        return 0;
    }
    kostka_pair(l.size()).inverse_kostka(m, l)
}

fn big_pow(q: u64, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), k)
}

/// Gaussian binomial `[n k]_q`.
pub fn q_binomial(n: usize, k: usize, q: u64) -> BigInt {
    assert!(k <= n);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= big_pow(q, n - i) - 1;
        den *= big_pow(q, i + 1) - 1;
    }
    num / den
}

/// Hook lengths of all boxes and `b(λ) = Σ (i−1) λ_i`.
pub fn hook_stats(l: &Partition) -> (Vec<usize>, usize) {
    let c = l.conjugate();
    let mut hooks = Vec::with_capacity(l.size());
    for (i, &li) in l.parts().iter().enumerate() {
        for j in 0..li {
            hooks.push(li + c.parts()[j] - i - j - 1);
        }
    }
    let b = l.parts().iter().enumerate().map(|(i, &p)| i * p).sum();
    (hooks, b)
}

/// `Π_{i=1}^{n} (q^i − 1)`.
pub fn q_units_product(n: usize, q: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * (big_pow(q, i) - 1))
}

/// `|GL(n, q)| = Π_{i=0}^{n−1} (q^n − q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, i| acc * (big_pow(q, n) - big_pow(q, i)))
}

/// Number of ordered `t`-tuples of independent vectors in `F_q^n`.
pub fn tuple_count(n: usize, t: usize, q: u64) -> BigInt {
    (0..t).fold(BigInt::one(), |acc, i| acc * (big_pow(q, n) - big_pow(q, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn euler_partition_count(m: usize) -> usize {
        // p(n) = Σ_k (−1)^{k+1} (p(n − k(3k−1)/2) + p(n − k(3k+1)/2))
        let mut p = vec![0i64; m + 1];
        p[0] = 1;
        for n in 1..=m {
            let mut s = 0i64;
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                s += sign * p[n - g1];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= n {
                    s += sign * p[n - g2];
                }
            }
            p[n] = s;
        }
        p[m] as usize
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        for m in 0..=20 {
            assert_eq!(enumerate_partitions(m).len(), euler_partition_count(m));
        }
        assert_eq!(enumerate_partitions(10).len(), 42);
        let p4 = enumerate_partitions(4);
        assert_eq!(p4[0], Partition::row(4));
        assert_eq!(p4[4], Partition::column(4));
        let mut sorted = p4.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(sorted, p4);
    }

    #[test]
    fn conjugates() {
        assert_eq!(Partition::new(vec![3, 1]).conjugate(), Partition::new(vec![2, 1, 1]));
        assert_eq!(Partition::row(5).conjugate(), Partition::column(5));
        for m in 0..=12 {
            for p in enumerate_partitions(m) {
                assert_eq!(p.conjugate().conjugate(), p);
            }
        }
    }

    #[test]
    fn dominance() {
        let p = |v: Vec<usize>| Partition::new(v);
        assert!(dominates(&p(vec![2, 2]), &p(vec![2, 1, 1])).unwrap());
        assert!(dominates(&p(vec![3, 1]), &p(vec![2, 2])).unwrap());
        assert!(!dominates(&p(vec![2, 2]), &p(vec![3, 1])).unwrap());
        assert!(matches!(dominates(&p(vec![2]), &p(vec![1])), Err(Error::SizeMismatch(2, 1))));
        let ps = enumerate_partitions(6);
        for a in &ps {
            for b in &ps {
                let ab = dominates(a, b).unwrap();
                if ab && dominates(b, a).unwrap() {
                    assert_eq!(a, b);
                }
                for c in &ps {
                    if ab && dominates(b, c).unwrap() {
                        assert!(dominates(a, c).unwrap());
                    }
                }
            }
        }
    }

    // Oracle: every filling of the Young diagram checked for semistandardness.
    fn ssyt_bruteforce(shape: &Partition, content: &Partition) -> i64 {
        let boxes: Vec<(usize, usize)> = shape
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &l)| (0..l).map(move |j| (i, j)))
            .collect();
        let letters = content.len();
        let total = letters.pow(boxes.len() as u32);
        let mut count = 0;
        for code in 0..total {
            let mut x = code;
            let mut fill = HashMap::new();
            let mut used = vec![0; letters];
            for &b in &boxes {
                let v = x % letters;
                x /= letters;
                fill.insert(b, v);
                used[v] += 1;
            }
            if used != content.parts() {
                continue;
            }
            let ok = boxes.iter().all(|&(i, j)| {
                let v = fill[&(i, j)];
                let right = fill.get(&(i, j + 1)).map_or(true, |&w| w >= v);
                let down = fill.get(&(i + 1, j)).map_or(true, |&w| w > v);
                right && down
            });
            count += i64::from(ok);
        }
        count
    }

    #[test]
    fn kostka_examples() {
        let k3 = kostka_pair(3);
        assert_eq!(k3.kostka(&Partition::new(vec![2, 1]), &Partition::column(3)), 2);
        for n in 1..=8 {
            let kp = kostka_pair(n);
            for mu in &kp.partitions {
                assert_eq!(kp.kostka(&Partition::row(n), mu), 1);
            }
            for t in 1..=n / 2 {
                let lam = Partition::new(vec![n - t, t]);
                for mu in &kp.partitions {
                    let k = kp.kostka(&lam, mu);
                    if mu.first() == n - t {
                        assert_eq!(k, 1);
                    } else if mu.first() > n - t {
                        assert_eq!(k, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn kostka_against_bruteforce() {
        for m in 1..=5 {
            let kp = kostka_pair(m);
            for l in &kp.partitions {
                for mu in &kp.partitions {
                    assert_eq!(kp.kostka(l, mu), ssyt_bruteforce(l, mu), "{l} {mu}");
                }
            }
        }
    }

    #[test]
    fn kostka_inverse_and_triangularity() {
        for m in 0..=10 {
            let kp = kostka_pair(m);
            let n = kp.partitions.len();
            for i in 0..n {
                for j in 0..n {
                    let s: i64 = (0..n).map(|k| kp.k[i][k] * kp.h[k][j]).sum();
                    assert_eq!(s, i64::from(i == j));
                    let (a, b) = (&kp.partitions[i], &kp.partitions[j]);
                    assert!(kp.k[i][j] >= 0);
                    if kp.k[i][j] != 0 {
                        assert!(dominates(a, b).unwrap());
                    }
                    if kp.h[i][j] != 0 {
                        assert!(dominates(a, b).unwrap());
                    }
                }
                assert_eq!(kp.k[i][i], 1);
                assert_eq!(kp.h[i][i], 1);
            }
        }
    }

    #[test]
    fn kostka_column_sums_count_tableaux() {
        for m in 1..=6 {
            let kp = kostka_pair(m);
            for mu in &kp.partitions {
                let col: i64 = kp.partitions.iter().map(|l| kp.kostka(l, mu)).sum();
                let direct: i64 = kp.partitions.iter().map(|l| ssyt_bruteforce(l, mu)).sum();
                assert_eq!(col, direct);
            }
        }
    }

    #[test]
    fn q_binomials() {
        assert_eq!(q_binomial(3, 1, 2), BigInt::from(7));
        assert_eq!(q_binomial(5, 0, 3), BigInt::from(1));
        assert_eq!(q_binomial(2, 1, 3), BigInt::from(4));
        for q in [2u64, 3, 4, 5] {
            for n in 1..=8 {
                for k in 1..n {
                    let rhs = q_binomial(n - 1, k - 1, q) + big_pow(q, k) * q_binomial(n - 1, k, q);
                    assert_eq!(q_binomial(n, k, q), rhs);
                }
            }
        }
    }

    #[test]
    fn hooks() {
        let p = |v: Vec<usize>| Partition::new(v);
        let (mut h, b) = hook_stats(&p(vec![2, 1]));
        h.sort();
        assert_eq!((h, b), (vec![1, 1, 3], 1));
        let (mut h, b) = hook_stats(&p(vec![1, 1]));
        h.sort();
        assert_eq!((h, b), (vec![1, 2], 1));
        let (mut h, b) = hook_stats(&Partition::row(4));
        h.sort();
        assert_eq!((h, b), (vec![1, 2, 3, 4], 0));
    }

    proptest! {
        #[test]
        fn hooks_invariant_under_conjugation(m in 0usize..13, pick in 0usize..1000) {
            let ps = enumerate_partitions(m);
            let l = &ps[pick % ps.len()];
            let (mut a, _) = hook_stats(l);
            let (mut b, _) = hook_stats(&l.conjugate());
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
