//! Dense matrices over a finite field and their rank.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::field::{Elem, Field};

#[derive(Clone)]
pub struct MatrixGF {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<Elem>,
}

impl MatrixGF {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        MatrixGF {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        MatrixGF {
            field,
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        }
    }

    pub fn random(field: Arc<Field>, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let q = field.order();
        let entries = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        MatrixGF {
            field,
            rows,
            cols,
            entries,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &MatrixGF) -> Self {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &MatrixGF) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        MatrixGF {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(row_perm[i], col_perm[j]));
            }
        }
        out
    }

    /// Row rank, using the packed path over `GF(2)`.
    pub fn rank(&self) -> usize {
        if self.field.order() == 2 {
            PackedGf2::from_matrix(self).rank()
        } else {
            self.rank_generic()
        }
    }

    /// Gaussian elimination with the first nonzero entry as pivot.
    pub fn rank_generic(&self) -> usize {
        let f = &self.field;
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pr) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            if pr != rank {
                for j in c..cols {
                    a.swap(pr * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(a[rank * cols + c]);
            for j in c..cols {
                a[rank * cols + j] = f.mul(inv, a[rank * cols + j]);
            }
            for r in rank + 1..rows {
                let factor = a[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let v = f.add(a[r * cols + j], f.mul(nf, a[rank * cols + j]));
                    a[r * cols + j] = v;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGF(GF({}), {}x{})\n{self}", self.field.order(), self.rows, self.cols)
    }
}

/// One line per row, entries as their integer codes.
impl fmt::Display for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec == other.field.spec
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

/// `GF(2)` matrix with rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedGf2 {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl PackedGf2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        PackedGf2 {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn from_matrix(m: &MatrixGF) -> Self {
        assert_eq!(m.field.order(), 2);
        let mut p = Self::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                if m.get(i, j) == 1 {
                    p.set(i, j, true);
                }
            }
        }
        p
    }

    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let mut p = Self::zeros(rows, cols);
        let tail = cols % 64;
        for i in 0..rows {
            for w in 0..p.words {
                let mut x: u64 = rng.gen();
                if w == p.words - 1 && tail != 0 {
                    x &= (1u64 << tail) - 1;
                }
                p.bits[i * p.words + w] = x;
            }
        }
        p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn to_matrix(&self, field: std::sync::Arc<Field>) -> MatrixGF {
        let mut m = MatrixGF::zeros(field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j) as Elem);
            }
        }
        m
    }

    /// Elimination by whole-word row XOR.
    pub fn rank(&self) -> usize {
        let mut a = self.bits.clone();
        let w = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (cw, cb) = (c / 64, 1u64 << (c % 64));
            let Some(pr) = (rank..self.rows).find(|&r| a[r * w + cw] & cb != 0) else {
                continue;
            };
            if pr != rank {
                for k in cw..w {
                    a.swap(pr * w + k, rank * w + k);
                }
            }
            let (head, rest) = a.split_at_mut((rank + 1) * w);
            let pivot = &head[rank * w..];
            for row in rest.chunks_exact_mut(w) {
                if row[cw] & cb != 0 {
                    for k in cw..w {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> Arc<Field> {
        Arc::new(Field::of_order(q).unwrap())
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(MatrixGF::identity(f.clone(), 5).rank(), 5);
        assert_eq!(MatrixGF::zeros(f.clone(), 4, 6).rank(), 0);
        let m = MatrixGF::from_rows(f.clone(), &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_generic(), 1);
        let f3 = gf(3);
        let m = MatrixGF::from_rows(f3, &[vec![1, 2], vec![2, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn packed_roundtrip() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (r, c) in [(1, 1), (3, 70), (65, 64), (10, 129)] {
            let p = PackedGf2::random(r, c, &mut rng);
            let m = p.to_matrix(f.clone());
            assert_eq!(PackedGf2::from_matrix(&m), p);
        }
    }

    #[test]
    fn rank_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in [2, 3, 4, 9] {
            let m = MatrixGF::random(gf(q), 7, 4, &mut rng);
            assert!(m.rank() <= 4);
        }
    }
}
