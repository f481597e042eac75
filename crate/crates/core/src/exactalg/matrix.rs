//! Dense matrices of ring elements.  Row-major; a matrix acts on column
//! vectors, so an `r x c` matrix is a map from a rank-`c` free module to a
//! rank-`r` one.

use super::ring::{RingDescriptor, RingElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl Matrix {
    pub fn zero(ring: &RingDescriptor, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &RingDescriptor, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &RingDescriptor, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        let _ = ring;
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(
        ring: &RingDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Self {
        let _ = ring;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(ring: &RingDescriptor, entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        Self::from_fn(ring, rows, cols, |i, j| ring.from_int(entries[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self, ring: &RingDescriptor) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    pub fn map(&self, mut f: impl FnMut(&RingElement) -> RingElement) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &RingElement> {
        self.data.iter()
    }

    pub fn transpose(&self, ring: &RingDescriptor) -> Self {
        Self::from_fn(ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self, ring: &RingDescriptor) -> Self {
        self.map(|e| ring.neg(e))
    }

    pub fn scale(&self, ring: &RingDescriptor, c: &RingElement) -> Self {
        self.map(|e| ring.mul(c, e))
    }

    pub fn add(&self, ring: &RingDescriptor, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(ring, self.rows, self.cols, |i, j| {
            ring.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, ring: &RingDescriptor, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn mul(&self, ring: &RingDescriptor, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        Self::from_fn(ring, self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, ring: &RingDescriptor, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    acc = ring.add(&acc, &ring.mul(self.get(i, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; index `(i,r),(j,c) -> (i*p + r, j*q + c)`.
    pub fn kron(&self, ring: &RingDescriptor, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(ring, self.rows * p, self.cols * q, |i, j| {
            ring.mul(self.get(i / p, j / q), other.get(i % p, j % q))
        })
    }

    /// Copies `block` into `self` with top-left corner `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(
        &self,
        ring: &RingDescriptor,
        r0: usize,
        r1: usize,
        c0: usize,
        c1: usize,
    ) -> Self {
        Self::from_fn(ring, r1 - r0, c1 - c0, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_column(ring: &RingDescriptor, v: &[RingElement]) -> Self {
        let _ = ring;
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, ring: &RingDescriptor, other: &Self) -> Self {
        let mut m = Self::zero(ring, self.rows + other.rows, self.cols + other.cols);
        m.place(0, 0, self);
        m.place(self.rows, self.cols, other);
        m
    }

    pub fn format(&self, ring: &RingDescriptor) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            s.push('[');
            for j in 0..self.cols {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&ring.format_element(self.get(i, j)));
            }
            s.push(']');
            if i + 1 < self.rows {
                s.push('\n');
            }
        }
        s
    }
}
