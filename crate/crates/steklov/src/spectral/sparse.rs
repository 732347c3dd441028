//! Minimal CSR matrices for assembly and residual algebra.

use nalgebra::DMatrix;

/// Compressed sparse row matrix with sorted, deduplicated columns per row.
#[derive(Debug, Clone)]
pub struct SpMat {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SpMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SpMat {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds from (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, mut trips: Vec<(usize, usize, f64)>) -> Self {
        trips.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut counts = vec![0usize; nrows];
        let mut cols = Vec::with_capacity(trips.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trips.len());
        let mut prev: Option<(usize, usize)> = None;
        for (r, c, v) in trips {
            debug_assert!(r < nrows && c < ncols);
            if prev == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                counts[r] += 1;
                prev = Some((r, c));
            }
        }
        let mut row_ptr = vec![0usize; nrows + 1];
        for r in 0..nrows {
            row_ptr[r + 1] = row_ptr[r] + counts[r];
        }
        SpMat {
            nrows,
            ncols,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.cols[s..e], &self.vals[s..e])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(i) => vals[i],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Dense block extraction: `rows × cols` submatrix.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        let col_pos: std::collections::HashMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = DMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            let (rc, rv) = self.row(r);
            for (&c, &v) in rc.iter().zip(rv) {
                if let Some(&j) = col_pos.get(&c) {
                    m[(i, j)] += v;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[r] = acc;
        }
        y
    }

    pub fn matmul(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.ncols, other.nrows);
        let mut trips = Vec::new();
        let mut acc: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
        for r in 0..self.nrows {
            acc.clear();
            let (cols, vals) = self.row(r);
            for (&k, &v) in cols.iter().zip(vals) {
                let (oc, ov) = other.row(k);
                for (&c, &w) in oc.iter().zip(ov) {
                    *acc.entry(c).or_insert(0.0) += v * w;
                }
            }
            for (&c, &v) in &acc {
                trips.push((r, c, v));
            }
        }
        SpMat::from_triplets(self.nrows, other.ncols, trips)
    }

    pub fn transpose(&self) -> SpMat {
        let mut trips = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                trips.push((c, r, v));
            }
        }
        SpMat::from_triplets(self.ncols, self.nrows, trips)
    }

    /// `self + scale · other`.
    pub fn add_scaled(&self, other: &SpMat, scale: f64) -> SpMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut trips = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                trips.push((r, c, v));
            }
            let (oc, ov) = other.row(r);
            for (&c, &v) in oc.iter().zip(ov) {
                trips.push((r, c, scale * v));
            }
        }
        SpMat::from_triplets(self.nrows, self.ncols, trips)
    }

    /// Operator infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Coordinate triplet text, one `row col value` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.nrows, self.ncols, self.nnz());
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out.push_str(&format!("{r} {c} {v:.16e}\n"));
            }
        }
        out
    }
}
