use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{reverse_cuthill_mckee, CsrMatrix};
use crate::error::{invalid, Error, Result};
use crate::C64;

/// Threshold for partial pivoting: the diagonal candidate is kept whenever
/// its magnitude is at least this fraction of the column maximum.
const PIVOT_THRESHOLD: f64 = 0.1;

/// Column pre-ordering applied before numeric factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnOrdering {
    #[default]
    ReverseCuthillMcKee,
    Natural,
}

/// Sparse LU factors with `P A Q = L U`; `L` unit lower triangular, both
/// factors stored by columns in pivot order.
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    /// `pinv[i]` = pivot step at which original row `i` was eliminated.
    pinv: Vec<usize>,
    /// `q[k]` = original column eliminated at step `k`.
    q: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<C64>,
    up: Vec<usize>,
    ui: Vec<usize>,
    ux: Vec<C64>,
}

pub fn factorize(a: &CsrMatrix) -> Result<Factorization> {
    factorize_with(a, ColumnOrdering::default())
}

/// Left-looking (Gilbert-Peierls) LU. Each column of `L` and `U` is found by
/// a sparse triangular solve whose nonzero pattern is the set reachable from
/// the column's entries in the graph of the partial `L`.
pub fn factorize_with(a: &CsrMatrix, ordering: ColumnOrdering) -> Result<Factorization> {
    let n = a.n();
    let q = match ordering {
        ColumnOrdering::ReverseCuthillMcKee => reverse_cuthill_mckee(a),
        ColumnOrdering::Natural => (0..n).collect(),
    };
    let (ap, ai, ax) = a.to_csc();

    const UNSET: usize = usize::MAX;
    let mut pinv = vec![UNSET; n];
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut xi = vec![0usize; n];
    let mut stack = vec![0usize; n];
    let mut pstack = vec![0usize; n];
    let mut mark = vec![UNSET; n];

    let guess = 4 * ax.len() + n;
    let mut lp = Vec::with_capacity(n + 1);
    let mut li = Vec::with_capacity(guess);
    let mut lx = Vec::with_capacity(guess);
    let mut up = Vec::with_capacity(n + 1);
    let mut ui = Vec::with_capacity(guess);
    let mut ux = Vec::with_capacity(guess);

    for k in 0..n {
        lp.push(li.len());
        up.push(ui.len());
        let col = q[k];

        // Pattern of L \ A(:, col), in topological order at xi[top..].
        let mut top = n;
        for &r in &ai[ap[col]..ap[col + 1]] {
            if mark[r] != k {
                top = dfs(r, k, &lp, &li, &pinv, &mut mark, &mut xi, top, &mut stack, &mut pstack);
            }
        }
        for &i in &xi[top..] {
            x[i] = zero;
        }
        for p in ap[col]..ap[col + 1] {
            x[ai[p]] = ax[p];
        }
        for &j in &xi[top..] {
            let jj = pinv[j];
            if jj == UNSET {
                continue;
            }
            let xj = x[j];
            let end = if jj + 1 < lp.len() { lp[jj + 1] } else { li.len() };
            // Skip the unit diagonal stored first.
            for p in lp[jj] + 1..end {
                x[li[p]] -= lx[p] * xj;
            }
        }

        // Choose the pivot among rows not yet eliminated.
        let mut ipiv = UNSET;
        let mut best = -1.0;
        for &i in &xi[top..] {
            if pinv[i] == UNSET {
                let t = x[i].norm();
                if t > best {
                    best = t;
                    ipiv = i;
                }
            } else {
                ui.push(pinv[i]);
                ux.push(x[i]);
            }
        }
        if ipiv == UNSET || !(best > 0.0) {
            return Err(Error::SingularMatrix { column: col });
        }
        if pinv[col] == UNSET && x[col].norm() >= PIVOT_THRESHOLD * best {
            ipiv = col;
        }
        let pivot = x[ipiv];
        ui.push(k);
        ux.push(pivot);
        pinv[ipiv] = k;
        li.push(ipiv);
        lx.push(C64::new(1.0, 0.0));
        for &i in &xi[top..] {
            if pinv[i] == UNSET {
                li.push(i);
                lx.push(x[i] / pivot);
            }
            x[i] = zero;
        }
    }
    lp.push(li.len());
    up.push(ui.len());
    for r in &mut li {
        *r = pinv[*r];
    }
    Ok(Factorization {
        n,
        pinv,
        q,
        lp,
        li,
        lx,
        up,
        ui,
        ux,
    })
}

/// Iterative depth-first search from row `j` in the graph of the partial
/// `L`; pushes finished nodes onto `xi` from position `top` downwards.
#[allow(clippy::too_many_arguments)]
fn dfs(
    j: usize,
    stamp: usize,
    lp: &[usize],
    li: &[usize],
    pinv: &[usize],
    mark: &mut [usize],
    xi: &mut [usize],
    mut top: usize,
    stack: &mut [usize],
    pstack: &mut [usize],
) -> usize {
    let col_range = |jj: usize| {
        let end = if jj + 1 < lp.len() { lp[jj + 1] } else { li.len() };
        (lp[jj], end)
    };
    let mut head = 0usize;
    stack[0] = j;
    loop {
        let j = stack[head];
        let jj = pinv[j];
        if mark[j] != stamp {
            mark[j] = stamp;
            pstack[head] = if jj == usize::MAX { 0 } else { col_range(jj).0 };
        }
        let end = if jj == usize::MAX { 0 } else { col_range(jj).1 };
        let mut done = true;
        let mut p = pstack[head];
        while p < end {
            let i = li[p];
            p += 1;
            if mark[i] != stamp {
                pstack[head] = p;
                head += 1;
                stack[head] = i;
                done = false;
                break;
            }
        }
        if done {
            pstack[head] = p;
            top -= 1;
            xi[top] = j;
            if head == 0 {
                return top;
            }
            head -= 1;
        }
    }
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries in `L` (including its unit diagonal) and `U`.
    pub fn factor_nnz(&self) -> usize {
        self.li.len() + self.ui.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(invalid(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.n
            )));
        }
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        for (i, &bi) in b.iter().enumerate() {
            y[self.pinv[i]] = bi;
        }
        self.solve_permuted_in_place(&mut y);
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for (k, &yk) in y.iter().enumerate() {
            x[self.q[k]] = yk;
        }
        Ok(x)
    }

    fn solve_permuted_in_place(&self, y: &mut [C64]) {
        for j in 0..self.n {
            let yj = y[j];
            if yj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.lp[j] + 1..self.lp[j + 1] {
                y[self.li[p]] -= self.lx[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let last = self.up[j + 1] - 1;
            y[j] /= self.ux[last];
            let yj = y[j];
            if yj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.up[j]..last {
                y[self.ui[p]] -= self.ux[p] * yj;
            }
        }
    }

    /// `max |(L U - P A Q)_ij| / max |a_ij|` over all entries of either side.
    pub fn reconstruction_error(&self, a: &CsrMatrix) -> f64 {
        let n = self.n;
        let (ap, ai, ax) = a.to_csc();
        let zero = C64::new(0.0, 0.0);
        let mut acc = vec![zero; n];
        let mut touched = vec![false; n];
        let mut list = Vec::new();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            // Column k of L U.
            for p in self.up[k]..self.up[k + 1] {
                let (r, u) = (self.ui[p], self.ux[p]);
                for t in self.lp[r]..self.lp[r + 1] {
                    let i = self.li[t];
                    if !touched[i] {
                        touched[i] = true;
                        list.push(i);
                    }
                    acc[i] += self.lx[t] * u;
                }
            }
            // Minus column k of P A Q.
            let col = self.q[k];
            for p in ap[col]..ap[col + 1] {
                let i = self.pinv[ai[p]];
                if !touched[i] {
                    touched[i] = true;
                    list.push(i);
                }
                acc[i] -= ax[p];
            }
            for &i in &list {
                worst = worst.max(acc[i].norm());
                acc[i] = zero;
                touched[i] = false;
            }
            list.clear();
        }
        let scale = a.max_abs();
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}
