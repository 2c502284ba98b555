//! Dense probing of the interface operator, for small problems.

use anyhow::{ensure, Result};
use helmddm_core::ddm::DdmProblem;
use helmddm_core::sparse::{factorize, CsrMatrix};
use helmddm_core::C64;

/// Column-probed dense `F`, row-major.
pub fn dense_interface_operator(pb: &DdmProblem) -> Result<Vec<C64>> {
    let n = pb.dim();
    let mut f = vec![C64::new(0.0, 0.0); n * n];
    let mut e = pb.layout().zeros();
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        let col = pb.apply_f(&e)?;
        e[j] = C64::new(0.0, 0.0);
        for (i, v) in col.into_iter().enumerate() {
            f[i * n + j] = v;
        }
    }
    Ok(f)
}

pub fn dense_matvec(n: usize, a: &[C64], x: &[C64]) -> Vec<C64> {
    (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().zip(x).map(|(a, x)| a * x).sum())
        .collect()
}

/// Direct solve of a dense system through the sparse LU.
pub fn dense_solve(n: usize, a: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    ensure!(a.len() == n * n && b.len() == n, "dimension mismatch");
    Ok(factorize(&CsrMatrix::from_dense(n, a))?.solve(b)?)
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rel_l2_diff(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}
