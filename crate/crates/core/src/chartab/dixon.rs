//! Dixon's method: common eigenvectors of the class-multiplication matrices
//! modulo a prime splitting `Φ_m`, lifted through power maps.

use super::CharacterTable;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::glq::GroupData;
use num_integer::Integer;
use rayon::prelude::*;

pub const MAX_CLASSES: usize = 40;

/// Structure constants `a[i][j][k] = #{x ∈ C_i : x⁻¹ z_k ∈ C_j}`.
pub fn class_constants(g: &GroupData) -> Vec<Vec<Vec<u64>>> {
    let k = g.num_classes();
    let per_k: Vec<Vec<Vec<u64>>> = (0..k)
        .into_par_iter()
        .map(|kk| {
            let z = g.class(kk).rep_id;
            let mut c = vec![vec![0u64; k]; k];
            for x in 0..g.order() as u32 {
                let y = g.mul(g.inverse(x), z);
                c[g.class_of(x)][g.class_of(y)] += 1;
            }
            c
        })
        .collect();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).map(|kk| per_k[kk][i][j]).collect()).collect())
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primitive_root(p: u64) -> u64 {
    let mut fs = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    (2..p)
        .find(|&g| fs.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("primitive root exists")
}

/// Primes `ℓ ≡ 1 (mod m)` above `2⌈√|G|⌉`, in increasing order.
pub fn dixon_primes(order: u64, m: u64) -> impl Iterator<Item = u64> {
    let root = (order as f64).sqrt().ceil() as u64;
    let bound = 2 * root;
    let start = bound / m + 1;
    (start..).map(move |k| k * m + 1).filter(|&l| is_prime(l))
}

/// RREF over `F_p`; returns pivot columns.
fn rref_mod(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_mod(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let pivots = rref_mod(&mut m, p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Splits `F_ℓ^k` into common eigenlines of the class matrices.
fn split_eigenspaces(mats: &[Vec<Vec<u64>>], k: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    let mut ident = vec![vec![0u64; k]; k];
    for (i, r) in ident.iter_mut().enumerate() {
        r[i] = 1;
    }
    let mut queue = vec![ident];
    let mut lines = Vec::new();
    while let Some(mut w) = queue.pop() {
        let pivots = rref_mod(&mut w, p);
        let r = w.len();
        if r == 1 {
            lines.push(w.pop().unwrap());
            continue;
        }
        let mut split = false;
        for m in mats {
            // restriction in the RREF basis: coordinates are the pivot entries
            let images: Vec<Vec<u64>> = w
                .iter()
                .map(|v| (0..k).map(|row| (0..k).map(|c| m[row][c] * v[c] % p).sum::<u64>() % p).collect())
                .collect();
            let a: Vec<Vec<u64>> = (0..r).map(|t| (0..r).map(|s| images[s][pivots[t]]).collect()).collect();
            let scalar = (0..r).all(|t| (0..r).all(|s| a[t][s] == if t == s { a[0][0] } else { 0 }));
            if scalar {
                continue;
            }
            let mut pieces = Vec::new();
            let mut total = 0;
            for x in 0..p {
                let shifted: Vec<Vec<u64>> = (0..r)
                    .map(|t| (0..r).map(|s| if t == s { (a[t][s] + p - x) % p } else { a[t][s] }).collect())
                    .collect();
                let ker = kernel_mod(&shifted, p);
                if ker.is_empty() {
                    continue;
                }
                total += ker.len();
                let space: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| (0..k).map(|j| (0..r).map(|s| c[s] * w[s][j] % p).sum::<u64>() % p).collect())
                    .collect();
                pieces.push(space);
                if total == r {
                    break;
                }
            }
            if total != r {
                return Err(Error::LiftFailure(format!("class matrix not split modulo {p}")));
            }
            queue.extend(pieces);
            split = true;
            break;
        }
        if !split {
            return Err(Error::LiftFailure(format!("eigenspace of dimension {r} not separated")));
        }
    }
    Ok(lines)
}

/// Exponent of the group: lcm of representative orders.
pub fn exponent(g: &GroupData) -> u64 {
    g.classes()
        .iter()
        .map(|c| g.element_order(c.rep_id) as u64)
        .fold(1, |a, b| a.lcm(&b))
}

/// Classes of `z_k^j` for `0 ≤ j < ord(z_k)`.
pub fn power_maps(g: &GroupData) -> Vec<Vec<usize>> {
    g.classes()
        .iter()
        .map(|c| {
            let mut out = vec![g.identity_class()];
            let mut y = c.rep_id;
            while y != g.identity() {
                out.push(g.class_of(y));
                y = g.mul(y, c.rep_id);
            }
            out
        })
        .collect()
}

/// Exact irreducible characters of an enumerated group.
pub fn dixon_table(g: &GroupData) -> Result<CharacterTable> {
    let k = g.num_classes();
    if k > MAX_CLASSES {
        return Err(Error::BudgetExceeded {
            what: "conjugacy classes",
            needed: k as u64,
            limit: MAX_CLASSES as u64,
        });
    }
    let consts = class_constants(g);
    let m = exponent(g);
    let powers = power_maps(g);
    let mut last_err = None;
    for ell in dixon_primes(g.order() as u64, m).take(4) {
        match dixon_at_prime(g, &consts, &powers, m, ell) {
            Ok(rows) => {
                let table = CharacterTable::from_rows(g, m as u32, rows)?;
                table.verify_orthogonality()?;
                return Ok(table);
            }
            Err(e @ Error::LiftFailure(_)) => {
                log::debug!("prime {ell} rejected: {e}");
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::LiftFailure("no prime tried".into())))
}

fn dixon_at_prime(
    g: &GroupData,
    consts: &[Vec<Vec<u64>>],
    powers: &[Vec<usize>],
    m: u64,
    ell: u64,
) -> Result<Vec<Vec<Cyclotomic>>> {
    let k = g.num_classes();
    let id = g.identity_class();
    let order = g.order() as u64;
    let mats: Vec<Vec<Vec<u64>>> = (0..k)
        .filter(|&i| i != id)
        .map(|i| consts[i].iter().map(|r| r.iter().map(|&x| x % ell).collect()).collect())
        .collect();
    let lines = split_eigenspaces(&mats, k, ell)?;
    if lines.len() != k {
        return Err(Error::LiftFailure(format!("{} eigenlines for {k} classes", lines.len())));
    }
    let z = pow_mod(primitive_root(ell), (ell - 1) / m, ell);
    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size % ell).collect();
    let star = g.star();
    let max_deg = (order as f64).sqrt().floor() as u64;
    let mut rows = Vec::with_capacity(k);
    for line in lines {
        if line[id] == 0 {
            return Err(Error::LiftFailure("eigenvector vanishes at the identity".into()));
        }
        let s = inv_mod(line[id], ell);
        let v: Vec<u64> = line.iter().map(|x| x * s % ell).collect();
        let norm = (0..k).map(|j| v[j] * v[star[j]] % ell * inv_mod(sizes[j], ell) % ell).sum::<u64>() % ell;
        if norm == 0 {
            return Err(Error::LiftFailure("degenerate norm".into()));
        }
        let d2 = order % ell * inv_mod(norm, ell) % ell;
        let d = (1..=max_deg)
            .find(|d| d * d % ell == d2)
            .ok_or_else(|| Error::LiftFailure("degree does not lift".into()))?;
        let vals: Vec<u64> = (0..k).map(|j| v[j] * d % ell * inv_mod(sizes[j], ell) % ell).collect();
        let mut row = Vec::with_capacity(k);
        for pm in powers {
            let o = pm.len() as u64;
            let zo = pow_mod(z, m / o, ell);
            let inv_o = inv_mod(o % ell, ell);
            let mut counts = vec![0i64; m as usize];
            let mut total = 0;
            for s in 0..o {
                let step = pow_mod(zo, (o - s) % o, ell);
                let mut acc = 0u64;
                let mut w = 1u64;
                for &c in pm {
                    acc = (acc + vals[c] * w) % ell;
                    w = w * step % ell;
                }
                let mu = acc * inv_o % ell;
                if mu > d {
                    return Err(Error::LiftFailure(format!("multiplicity {mu} exceeds degree {d}")));
                }
                total += mu;
                counts[(s * (m / o)) as usize] += mu as i64;
            }
            if total != d {
                return Err(Error::LiftFailure("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(Cyclotomic::from_exponent_counts(m as u32, &counts));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;

    #[test]
    fn prime_choice() {
        // |GL(3,2)| = 168, exponent 84, 2⌈√168⌉ = 26
        assert_eq!(dixon_primes(168, 84).next(), Some(337));
        assert_eq!(dixon_primes(48, 24).next(), Some(73));
        assert!(is_prime(421) && !is_prime(91));
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn constants_sum_to_class_sizes() {
        let f = build_field(2).unwrap();
        let g = GroupData::build(&f, 3, 1000).unwrap();
        let a = class_constants(&g);
        for i in 0..g.num_classes() {
            for kk in 0..g.num_classes() {
                let s: u64 = (0..g.num_classes()).map(|j| a[i][j][kk]).sum();
                assert_eq!(s, g.class(i).size);
            }
        }
        assert_eq!(exponent(&g), 84);
    }

    #[test]
    fn mod_kernel() {
        let a = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ker = kernel_mod(&a, 7);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 7, 0);
        }
    }
}
