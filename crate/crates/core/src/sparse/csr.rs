use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::C64;

/// Square complex matrix in compressed sparse row form. Column indices are
/// sorted and unique within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix, summing duplicate entries.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, C64)]) -> Result<Self> {
        let mut counts = vec![0usize; n + 1];
        for &(i, j, _) in triplets {
            if i >= n || j >= n {
                return Err(invalid(format!("entry ({i}, {j}) outside a {n} x {n} matrix")));
            }
            counts[i + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![C64::new(0.0, 0.0); triplets.len()];
        for &(i, j, v) in triplets {
            cols[next[i]] = j;
            vals[next[i]] = v;
            next[i] += 1;
        }

        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut row: Vec<(usize, C64)> = Vec::new();
        indptr.push(0);
        for i in 0..n {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|p| (cols[p], vals[p])));
            row.sort_by_key(|e| e.0);
            for &(j, v) in &row {
                if indices.len() > indptr[i] && *indices.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix {
            n,
            indptr,
            indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn from_dense(n: usize, a: &[C64]) -> Self {
        let trip: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i * n + j] != C64::new(0.0, 0.0))
            .map(|(i, j)| (i, j, a[i * n + j]))
            .collect();
        Self::from_triplets(n, &trip).expect("indices are in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Iterates over stored `(row, col, value)` entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |p| (i, self.indices[p], self.values[p]))
        })
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        (0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> CsrMatrix {
        let trip: Vec<_> = self.entries().map(|(i, j, v)| (j, i, v)).collect();
        CsrMatrix::from_triplets(self.n, &trip).expect("indices are in range")
    }

    /// Largest `|a_ij - a_ji| / max(|a_ij|, |a_ji|)` over stored entry pairs
    /// (plain transpose, no conjugation). Entries that are round-off level
    /// (below `1e-12 max|A|`, typically exact zeros lost to cancellation)
    /// are measured against that floor instead.
    pub fn symmetry_defect(&self) -> f64 {
        let floor = 1e-12 * self.max_abs();
        let mut worst: f64 = 0.0;
        for (i, j, v) in self.entries() {
            let w = self.get(j, i);
            let scale = v.norm().max(w.norm()).max(floor);
            if scale > 0.0 {
                worst = worst.max((v - w).norm() / scale);
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut a = vec![C64::new(0.0, 0.0); self.n * self.n];
        for (i, j, v) in self.entries() {
            a[i * self.n + j] = v;
        }
        a
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Column-compressed copy: `(colptr, rowidx, values)`.
    pub(crate) fn to_csc(&self) -> (Vec<usize>, Vec<usize>, Vec<C64>) {
        let t = self.transpose();
        (t.indptr, t.indices, t.values)
    }
}
