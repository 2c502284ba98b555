//! Element matrices for P1/P2 triangles and their 1D edge traces.

use crate::mesh::ElementOrder;

/// Degree-4 symmetric rule on the reference triangle: barycentric points and
/// weights summing to one. Exact for every product appearing in P2 mass and
/// stiffness matrices.
const QUAD_A: f64 = 0.445_948_490_915_965;
const QUAD_B: f64 = 0.091_576_213_509_771;
const QUAD_WA: f64 = 0.223_381_589_678_011;
const QUAD_WB: f64 = 0.109_951_743_655_322;

fn quadrature() -> [([f64; 3], f64); 6] {
    let (a, b) = (QUAD_A, QUAD_B);
    let (ca, cb) = (1.0 - 2.0 * a, 1.0 - 2.0 * b);
    [
        ([a, a, ca], QUAD_WA),
        ([a, ca, a], QUAD_WA),
        ([ca, a, a], QUAD_WA),
        ([b, b, cb], QUAD_WB),
        ([b, cb, b], QUAD_WB),
        ([cb, b, b], QUAD_WB),
    ]
}

/// Local stiffness and mass matrices (row-major, `npe x npe`) of a triangle
/// with vertices `x`.
pub(crate) fn triangle_matrices(order: ElementOrder, x: [[f64; 2]; 3]) -> ([f64; 36], [f64; 36]) {
    let npe = order.nodes_per_element();
    let det = (x[1][0] - x[0][0]) * (x[2][1] - x[0][1]) - (x[2][0] - x[0][0]) * (x[1][1] - x[0][1]);
    let area = 0.5 * det;
    let gl = [
        [(x[1][1] - x[2][1]) / det, (x[2][0] - x[1][0]) / det],
        [(x[2][1] - x[0][1]) / det, (x[0][0] - x[2][0]) / det],
        [(x[0][1] - x[1][1]) / det, (x[1][0] - x[0][0]) / det],
    ];
    let mut k = [0.0; 36];
    let mut m = [0.0; 36];
    let mut n = [0.0; 6];
    let mut g = [[0.0; 2]; 6];
    for (l, w) in quadrature() {
        match order {
            ElementOrder::P1 => {
                for a in 0..3 {
                    n[a] = l[a];
                    g[a] = gl[a];
                }
            }
            ElementOrder::P2 => {
                for a in 0..3 {
                    n[a] = l[a] * (2.0 * l[a] - 1.0);
                    let s = 4.0 * l[a] - 1.0;
                    g[a] = [s * gl[a][0], s * gl[a][1]];
                }
                for (e, (p, q)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                    n[3 + e] = 4.0 * l[p] * l[q];
                    g[3 + e] = [
                        4.0 * (l[q] * gl[p][0] + l[p] * gl[q][0]),
                        4.0 * (l[q] * gl[p][1] + l[p] * gl[q][1]),
                    ];
                }
            }
        }
        let wa = w * area;
        for a in 0..npe {
            for b in a..npe {
                k[a * npe + b] += wa * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                m[a * npe + b] += wa * n[a] * n[b];
            }
        }
    }
    // Mirror so that the local matrices are exactly symmetric.
    for a in 0..npe {
        for b in 0..a {
            k[a * npe + b] = k[b * npe + a];
            m[a * npe + b] = m[b * npe + a];
        }
    }
    (k, m)
}

/// 1D mass and stiffness of one edge segment of length `len`. For P2 the
/// local ordering is (end, midpoint, end).
pub(crate) fn segment_matrices(order: ElementOrder, len: f64) -> ([f64; 9], [f64; 9]) {
    match order {
        ElementOrder::P1 => {
            let (a, b) = (len / 3.0, len / 6.0);
            let s = 1.0 / len;
            ([a, b, 0.0, b, a, 0.0, 0.0, 0.0, 0.0], [s, -s, 0.0, -s, s, 0.0, 0.0, 0.0, 0.0])
        }
        ElementOrder::P2 => {
            let m = len / 30.0;
            let s = 1.0 / (3.0 * len);
            (
                [4.0 * m, 2.0 * m, -m, 2.0 * m, 16.0 * m, 2.0 * m, -m, 2.0 * m, 4.0 * m],
                [7.0 * s, -8.0 * s, s, -8.0 * s, 16.0 * s, -8.0 * s, s, -8.0 * s, 7.0 * s],
            )
        }
    }
}
