use super::{FieldElement, FieldTable, Poly};

/// Dense row-major matrix over GF(q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }
    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }
    pub fn from_vec(rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }
    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix, field: &FieldTable) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = field.add(out.data[idx], field.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }
    pub fn add(&self, other: &Matrix, field: &FieldTable) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        }
    }
    pub fn sub(&self, other: &Matrix, field: &FieldTable) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        }
    }
    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
    /// Matrix times column vector.
    pub fn apply(&self, v: &[FieldElement], field: &FieldTable) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: &FieldTable) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = field.inv(m.get(r, c));
            for j in 0..m.cols {
                m.set(r, j, field.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c);
                    if f != 0 {
                        for j in 0..m.cols {
                            let v = field.sub(m.get(i, j), field.mul(f, m.get(r, j)));
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    pub fn rank(&self, field: &FieldTable) -> usize {
        self.rref(field).1.len()
    }
    /// Dimension of the right kernel.
    pub fn nullity(&self, field: &FieldTable) -> usize {
        self.cols - self.rank(field)
    }
    /// Basis of the right kernel as column vectors.
    pub fn kernel(&self, field: &FieldTable) -> Vec<Vec<FieldElement>> {
        let (r, piv) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u8; self.cols];
                v[fc] = 1;
                for (i, &pc) in piv.iter().enumerate() {
                    v[pc] = field.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }
    pub fn det(&self, field: &FieldTable) -> FieldElement {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u8;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if p != c {
                m.swap_rows(p, c);
                det = field.neg(det);
            }
            let pv = m.get(c, c);
            det = field.mul(det, pv);
            let inv = field.inv(pv);
            for i in c + 1..n {
                let f = field.mul(m.get(i, c), inv);
                if f != 0 {
                    for j in c..n {
                        let v = field.sub(m.get(i, j), field.mul(f, m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
    pub fn inverse(&self, field: &FieldTable) -> Option<Matrix> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, piv) = aug.rref(field);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(xI − A)` by Hessenberg reduction.
    pub fn charpoly(&self, field: &FieldTable) -> Poly {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if p != j + 1 {
                h.swap_rows(p, j + 1);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + j + 1);
                }
            }
            let inv = field.inv(h.get(j + 1, j));
            for k in j + 2..n {
                let u = field.mul(h.get(k, j), inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = field.sub(h.get(k, c), field.mul(u, h.get(j + 1, c)));
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = field.add(h.get(r, j + 1), field.mul(u, h.get(r, k)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_m = (x − h_mm) p_{m−1} − Σ_i h_{m−i,m} Π_j h_{j,j−1} p_{m−i−1}
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let hm = |i: usize, j: usize| h.get(i - 1, j - 1);
            let lin = Poly::new(vec![field.neg(hm(m, m)), 1]);
            let mut pm = lin.mul(&ps[m - 1], field);
            let mut prod = 1u8;
            for i in 1..m {
                prod = field.mul(prod, hm(m - i + 1, m - i));
                let coef = field.mul(hm(m - i, m), prod);
                if coef != 0 {
                    pm = pm.sub(&ps[m - i - 1].scale(coef, field), field);
                }
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zero(n, n);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, b.cols);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }
    /// Square sub-block starting at `(off, off)`.
    pub fn sub_block(&self, off: usize, size: usize) -> Matrix {
        let mut m = Matrix::zero(size, size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(off + i, off + j));
            }
        }
        m
    }
    /// Base-q integer encoding of the entries.
    pub fn code(&self, q: usize) -> u64 {
        self.data
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }
    pub fn from_code(mut code: u64, rows: usize, cols: usize, q: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push((code % q as u64) as u8);
            code /= q as u64;
        }
        Matrix { rows, cols, data }
    }
}
