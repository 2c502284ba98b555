//! Dense oracles shared by unit tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::habc::pade_coefficients;
use crate::ddm::DdmSetup;
use crate::mesh::{build_partition, ElementOrder, Rect, WavenumberField};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn setup(nr: usize, nc: usize, n_aux: i64, h: f64) -> DdmSetup {
    let p = pade_coefficients(n_aux, core::f64::consts::FRAC_PI_3).unwrap();
    DdmSetup {
        partition: build_partition(Rect::new(0.0, 0.0, nc as f64, nr as f64).unwrap(), nr, nc, None)
            .unwrap(),
        wavenumber: WavenumberField::Constant(2.0 * core::f64::consts::PI),
        exterior: p.clone(),
        transmission: p,
        order: ElementOrder::P1,
        h,
        obstacles: Vec::new(),
        keep_dummy_blocks: true,
    }
}

pub(crate) fn random_vec(seed: u64, n: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Dense matrix (row-major) of a linear map, probed column by column.
pub(crate) fn probe(n: usize, f: impl Fn(&[C64]) -> Vec<C64>) -> Vec<C64> {
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        for (i, v) in f(&e).into_iter().enumerate() {
            a[i * n + j] = v;
        }
    }
    a
}

pub(crate) fn matvec(n: usize, a: &[C64], x: &[C64]) -> Vec<C64> {
    (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub(crate) fn matmul(n: usize, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

/// Gauss-Jordan inverse with partial pivoting.
pub(crate) fn inverse(n: usize, a: &[C64]) -> Vec<C64> {
    let mut m = a.to_vec();
    let mut inv = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        inv[i * n + i] = C64::new(1.0, 0.0);
    }
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap();
        for j in 0..n {
            m.swap(k * n + j, p * n + j);
            inv.swap(k * n + j, p * n + j);
        }
        let d = m[k * n + k];
        for j in 0..n {
            m[k * n + j] /= d;
            inv[k * n + j] /= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * n + k];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let (mk, ik) = (m[k * n + j], inv[k * n + j]);
                m[i * n + j] -= f * mk;
                inv[i * n + j] -= f * ik;
            }
        }
    }
    inv
}

pub(crate) fn solve(n: usize, a: &[C64], b: &[C64]) -> Vec<C64> {
    matvec(n, &inverse(n, a), b)
}

pub(crate) fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    crate::math::norm2(&d) / crate::math::norm2(b).max(f64::MIN_POSITIVE)
}
