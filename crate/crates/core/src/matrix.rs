//! Column-major matrices of polynomials, representing maps between free modules.

use crate::poly::Poly;
use crate::ring::RingPresentation;

pub type Vector = Vec<Poly>;

/// `nrows × cols.len()` matrix; column `j` is the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub nvars: usize,
    pub nrows: usize,
    pub cols: Vec<Vector>,
}

impl Matrix {
    pub fn zero(nvars: usize, nrows: usize, ncols: usize) -> Self {
        Matrix { nvars, nrows, cols: vec![vec![Poly::zero(nvars); nrows]; ncols] }
    }

    pub fn identity(ring: &RingPresentation, n: usize) -> Self {
        let mut m = Matrix::zero(ring.nvars(), n, n);
        for i in 0..n {
            m.cols[i][i] = ring.one();
        }
        m
    }

    pub fn from_cols(nvars: usize, nrows: usize, cols: Vec<Vector>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == nrows));
        Matrix { nvars, nrows, cols }
    }

    /// From row-major entries.
    pub fn from_rows(nvars: usize, rows: Vec<Vector>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Matrix::zero(nvars, nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                m.cols[j][i] = p;
            }
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.cols[j][i]
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.nrows).map(|i| self.cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix { nvars: self.nvars, nrows: self.ncols(), cols: self.rows() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|p| p.is_zero()))
    }

    /// `self · v`.
    pub fn apply(&self, v: &[Poly]) -> Vector {
        assert_eq!(v.len(), self.ncols(), "dimension mismatch in matrix application");
        let mut out = vec![Poly::zero(self.nvars); self.nrows];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in self.cols[j].iter().enumerate() {
                if !p.is_zero() {
                    out[i] = &out[i] + &(p * c);
                }
            }
        }
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch in matrix product");
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: crate::par::map(&other.cols, |c| self.apply(c)),
        }
    }

    pub fn scale(&self, c: &Poly) -> Matrix {
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: self.cols.iter().map(|col| col.iter().map(|p| p * c).collect()).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()));
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: self.cols.iter().map(|c| c.iter().map(|p| -p).collect()).collect(),
        }
    }

    /// Entries reduced modulo the ring's relations.
    pub fn reduced(&self, ring: &RingPresentation) -> Matrix {
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: crate::par::map(&self.cols, |c| ring.reduce_vec(c)),
        }
    }

    /// Kronecker product `self ⊗ other`; block `(i, j)` is `self[i][j] · other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let nrows = self.nrows * other.nrows;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut col = Vec::with_capacity(nrows);
                for p in a {
                    for q in b {
                        col.push(if p.is_zero() || q.is_zero() { Poly::zero(self.nvars) } else { p * q });
                    }
                }
                cols.push(col);
            }
        }
        Matrix { nvars: self.nvars, nrows, cols }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let nrows = self.nrows + other.nrows;
        let mut cols = Vec::with_capacity(self.ncols() + other.ncols());
        for c in &self.cols {
            let mut col = c.clone();
            col.resize(nrows, Poly::zero(self.nvars));
            cols.push(col);
        }
        for c in &other.cols {
            let mut col = vec![Poly::zero(self.nvars); self.nrows];
            col.extend(c.iter().cloned());
            cols.push(col);
        }
        Matrix { nvars: self.nvars, nrows, cols }
    }

    /// Applies a function to every entry.
    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly + Sync) -> Matrix {
        Matrix {
            nvars: self.nvars,
            nrows: self.nrows,
            cols: self.cols.iter().map(|c| c.iter().map(&f).collect()).collect(),
        }
    }
}

pub fn zero_vector(nvars: usize, n: usize) -> Vector {
    vec![Poly::zero(nvars); n]
}

pub fn unit_vector(ring: &RingPresentation, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(ring.nvars(), n);
    v[i] = ring.one();
    v
}

pub fn add_vectors(a: &[Poly], b: &[Poly]) -> Vector {
    a.iter().zip(b).map(|(p, q)| p + q).collect()
}

pub fn scale_vector(a: &[Poly], c: &Poly) -> Vector {
    a.iter().map(|p| if p.is_zero() { p.clone() } else { p * c }).collect()
}

pub fn is_zero_vector(a: &[Poly]) -> bool {
    a.iter().all(|p| p.is_zero())
}
