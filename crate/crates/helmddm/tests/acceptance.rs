//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails. Numeric arguments select
//! criteria: `cargo test --release --test acceptance -- 5 6`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use helmddm_core::ddm::{DdmProblem, PointSource};
use helmddm_core::habc::{aux_equation_coefficients, eval_b, pade_coefficients};
use helmddm_core::krylov::{fgmres, gmres, Fixed, KrylovSettings, LinearOperator};
use helmddm_core::mesh::build_partition;
use helmddm_core::scenario::{
    base_scenario, mono_domain_error, mono_domain_reference, run_scenario, scenario, solve_interface,
    PrecondChoice, Report, Scenario,
};
use helmddm_core::sweep::{
    build_groups, ds_apply, ds_backward_only, ds_forward_only, ds_sequential, sgs_apply, Direction,
    GroupArrangement, SweepPreconditioner,
};
use helmddm_core::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = (bool, String);

fn random_vec(seed: u64, n: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

/// Column-probed dense matrix of a linear map.
fn probe(n: usize, f: impl Fn(&[C64]) -> Vec<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        m.set_column(j, &DVector::from_vec(f(&e)));
        e[j] = C64::new(0.0, 0.0);
    }
    m
}

fn to_vec(v: &DVector<C64>) -> Vec<C64> {
    v.iter().copied().collect()
}

fn mat_vec(m: &DMatrix<C64>, x: &[C64]) -> Vec<C64> {
    to_vec(&(m * DVector::from_column_slice(x)))
}

/// Small problem with unit cells, `N = 4` and 8 vertices per wavelength.
fn coarse(rows: usize, cols: usize) -> Scenario {
    let mut s = base_scenario("coarse", rows, cols);
    s.cell_size = 1.0;
    let p = pade_coefficients(4, PI / 3.0).unwrap();
    s.exterior = p.clone();
    s.transmission = p;
    s.vertices_per_wavelength = 8.0;
    s.points = vec![PointSource { position: [0.37, 0.41], amplitude: C64::new(1.0, 0.0) }];
    s
}

fn problem(s: &Scenario) -> DdmProblem {
    DdmProblem::new(s.setup().unwrap()).unwrap()
}

fn run_with(mut s: Scenario, precond: &str) -> Report {
    s.precond = precond.parse().unwrap();
    run_scenario(&s).unwrap()
}

fn criterion_1() -> Check {
    let limit = Duration::from_secs(120);
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [2, 5] {
        let start = Instant::now();
        let mut s = scenario("corner5x5").unwrap();
        s.rows = n;
        s.cols = n;
        s.vertices_per_wavelength = 15.0;
        s.points = vec![PointSource { position: s.cell_center(0, 0), amplitude: C64::new(1.0, 0.0) }];
        let report = run_scenario(&s).unwrap();
        let reference = mono_domain_reference(&s).unwrap();
        let err = mono_domain_error(&report, &reference).unwrap();
        let t = start.elapsed();
        ok &= report.converged() && err <= 1e-5 && t <= limit;
        parts.push(format!(
            "{n}x{n}: error {err:.2e} after {} its, {:.1} s",
            report.iterations(),
            t.as_secs_f64()
        ));
    }
    (ok, parts.join("; "))
}

fn criterion_2() -> Check {
    let s = coarse(2, 2);
    let pb = problem(&s);
    let n = pb.dim();
    let f = probe(n, |x| pb.apply_f(x).unwrap());
    let a = probe(n, |x| pb.apply_a(x).unwrap());
    let from_a = DMatrix::<C64>::identity(n, n) - &a;
    let mut entry = (&f - &from_a).iter().map(|v| v.norm()).fold(0.0, f64::max);
    for seed in 0..3 {
        let x = random_vec(seed, n);
        entry = entry.max(max_abs_diff(&pb.apply_f(&x).unwrap(), &mat_vec(&f, &x)));
    }

    // F has one null vector per interior cross-point, so solutions are
    // compared through their minimum-norm representatives.
    let b = pb.compute_rhs(&s.sources()).unwrap();
    let settings = KrylovSettings { tol: 1e-12, max_iterations: 2 * n, restart: None };
    let (g, run) = solve_interface(&pb, &b, &PrecondChoice::None, settings).unwrap();
    let svd = f.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let kernel = svd.singular_values.iter().filter(|&&v| v <= 1e-10 * smax).count();
    let pinv = svd.pseudo_inverse(1e-10 * smax).unwrap();
    let direct = mat_vec(&pinv, &b);
    let projected = mat_vec(&pinv, &mat_vec(&f, &g));
    let sol = rel_diff(&projected, &direct);
    let fields = |x: &[C64]| -> Vec<C64> {
        pb.reconstruct(x, &s.sources()).unwrap().into_iter().flatten().flatten().collect()
    };
    let fdiff = rel_diff(&fields(&g), &fields(&direct));
    let ok = n <= 400 && entry <= 1e-10 && run.converged() && sol <= 1e-8 && fdiff <= 1e-8;
    (
        ok,
        format!(
            "dim {n}, max entry diff {entry:.1e}, GMRES vs direct {sol:.1e} (kernel dim {kernel}), fields {fdiff:.1e}"
        ),
    )
}

/// Group of a global index: the group of its block's source cell.
fn groups_of_indices(pb: &DdmProblem, arr: &GroupArrangement) -> Vec<usize> {
    let layout = pb.layout();
    (0..pb.dim())
        .map(|i| arr.group_of(layout.block(layout.block_containing(i).unwrap()).from))
        .collect()
}

fn criterion_3() -> Check {
    let pb = problem(&coarse(3, 3));
    let n = pb.dim();
    let arr = build_groups(pb.partition(), Direction::D1);
    let id = DMatrix::<C64>::identity(n, n);
    let lower = probe(n, |x| ds_forward_only(&pb, &arr, x).unwrap()).try_inverse().unwrap() - &id;
    let upper = probe(n, |x| ds_backward_only(&pb, &arr, x).unwrap()).try_inverse().unwrap() - &id;
    let grp = groups_of_indices(&pb, &arr);
    let select = |g: usize| -> Vec<usize> { (0..n).filter(|&i| grp[i] == g).collect() };
    let mut cancel: f64 = 0.0;
    let mut smallest_block = f64::INFINITY;
    for s in 0..arr.n_groups() - 1 {
        let (rows, mid) = (select(s), select(s + 1));
        let up = upper.select_rows(&rows).select_columns(&mid);
        let lo = lower.select_rows(&mid).select_columns(&rows);
        cancel = cancel.max((&up * &lo).iter().map(|v| v.norm()).fold(0.0, f64::max));
        if s > 0 {
            smallest_block = smallest_block.min(lo.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    let mut order: f64 = 0.0;
    for seed in 0..3 {
        let r = random_vec(seed, n);
        let fb = ds_sequential(&pb, &arr, &r, true).unwrap();
        let bf = ds_sequential(&pb, &arr, &r, false).unwrap();
        let both = ds_apply(&pb, &arr, &r).unwrap();
        order = order.max(max_abs_diff(&fb, &bf)).max(max_abs_diff(&fb, &both));
    }
    (
        cancel <= 1e-12 && order <= 1e-14 && smallest_block > 1e-3,
        format!("max |F~ F~| {cancel:.1e} (blocks up to {smallest_block:.2}), order difference {order:.1e}, dim {n}"),
    )
}

fn criterion_4() -> Check {
    let pb = problem(&coarse(3, 3));
    let n = pb.dim();
    let f = probe(n, |x| pb.apply_f(x).unwrap());
    let mut worst: f64 = 0.0;
    for d in [Direction::D1, Direction::D2, Direction::HForward, Direction::VForward] {
        let arr = build_groups(pb.partition(), d);
        let grp = groups_of_indices(&pb, &arr);
        let (mut l, mut u) = (DMatrix::<C64>::identity(n, n), DMatrix::<C64>::identity(n, n));
        for i in 0..n {
            for j in 0..n {
                if grp[i] > grp[j] {
                    l[(i, j)] = f[(i, j)];
                } else if grp[i] < grp[j] {
                    u[(i, j)] = f[(i, j)];
                }
            }
        }
        let (l, u) = (l.lu(), u.lu());
        for seed in 0..3 {
            let r = random_vec(seed, n);
            let expect = u.solve(&l.solve(&DVector::from_vec(r.clone())).unwrap()).unwrap();
            worst = worst.max(rel_diff(&sgs_apply(&pb, &arr, &r).unwrap(), &to_vec(&expect)));
        }
    }
    (worst <= 1e-10, format!("max relative difference {worst:.1e} over D1, D2, H, V (dim {n})"))
}

fn criterion_5() -> Check {
    let cases: [(&str, &str, usize); 10] = [
        ("corner5x5", "sgs-d1", 1),
        ("corner5x5", "ds-d1", 1),
        ("corner5x5", "sgs-2d", 1),
        ("corner5x5", "ds-2d", 1),
        ("corner5x5", "sgs-h", 4),
        ("corner5x5", "ds-h", 4),
        ("corner5x5", "none", 8),
        ("center5x5", "sgs-d1", 2),
        ("center5x5", "ds-d1", 4),
        ("center5x5", "ds-2d", 2),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, pre, expect) in cases {
        let r = run_with(scenario(name).unwrap(), pre);
        let drop = r.drop_iteration().unwrap_or(0);
        let good = r.converged() && drop.abs_diff(expect) <= 1;
        ok &= good;
        println!(
            "    {name} {pre}: drop {drop} (expected {expect}), {} iterations{}",
            r.iterations(),
            if good { "" } else { "  <-- off" }
        );
        parts.push(format!("{}/{pre}:{drop}", &name[..6]));
    }
    (ok, parts.join(" "))
}

fn criterion_6() -> Check {
    let its = |name: &str, pre: &str| -> usize {
        let r = run_with(scenario(name).unwrap(), pre);
        assert!(r.converged(), "{name} {pre} did not converge");
        r.iterations()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (pre, bound) in [("sgs-2d", 0.25), ("ds-2d", 0.25), ("sgs-h", 0.5)] {
        let (a, b) = (its("twosrc4x4", pre), its("twosrc8x8", pre));
        let growth = b as f64 / a as f64 - 1.0;
        let good = if pre == "sgs-h" { growth >= bound } else { growth <= bound };
        ok &= good;
        parts.push(format!("{pre} {a} -> {b} ({:+.0}%)", 100.0 * growth));
    }
    (ok, parts.join(", "))
}

/// Continuous reflection coefficient of the Padé operator for a plane wave
/// at incidence `theta`.
fn reflection(n_aux: i64, angle: f64, k: f64, theta: f64) -> f64 {
    let p = pade_coefficients(n_aux, angle).unwrap();
    let xi2 = (k * theta.sin()).powi(2);
    let u = C64::new(1.0, 0.0);
    let phis: Vec<C64> = (0..p.n_aux())
        .map(|i| {
            let (react, coupling) = aux_equation_coefficients(&p, i, k).unwrap();
            -coupling * u / (react - xi2)
        })
        .collect();
    let beta = eval_b(&p, k, u, &phis).unwrap() / C64::new(0.0, -k);
    let c = theta.cos();
    ((c - beta) / (c + beta)).norm()
}

fn criterion_7() -> Check {
    let mut failures = Vec::new();
    let mut check = |name: &str, good: bool, detail: String| {
        println!("    {name}: {detail}{}", if good { "" } else { "  <-- off" });
        if !good {
            failures.push(name.to_string());
        }
    };

    let mut worst_ratio: f64 = 0.0;
    for ti in 0..16 {
        let theta = 1.5 * ti as f64 / 15.0;
        for angle in [0.3, PI / 3.0, 1.5, 2.5] {
            for k in [1.0, 2.0 * PI, 25.0] {
                let r: Vec<f64> = [0, 1, 2, 4].iter().map(|&m| reflection(m, angle, k, theta)).collect();
                for w in r.windows(2) {
                    worst_ratio = worst_ratio.max(w[1] / w[0]);
                }
            }
        }
    }
    check("reflection over N = 0, 1, 2, 4", worst_ratio <= 1.0 + 1e-12, format!("largest R(N+)/R(N) {worst_ratio:.4}"));

    let mut worst_sym: f64 = 0.0;
    for (order, obstacle) in [("P1", false), ("P2", false), ("P1", true)] {
        let mut s = coarse(3, 3);
        s.order = helmddm::config::parse_order(order).unwrap();
        if obstacle {
            s.obstacles = vec![(1, 1, 0.25)];
            s.incident = Some(helmddm_core::ddm::PlaneWave { angle: 0.3, k: 2.0 * PI });
        }
        let pb = problem(&s);
        for c in 0..9 {
            worst_sym = worst_sym.max(pb.system(c).unwrap().matrix().symmetry_defect());
        }
    }
    check("complex symmetry", worst_sym <= 1e-12, format!("largest relative defect {worst_sym:.1e}"));

    let s = coarse(3, 3);
    let pb = problem(&s);
    let n = pb.dim();
    let op = (n, |x: &[C64]| pb.apply_f(x));
    let b = pb.compute_rhs(&s.sources()).unwrap();
    let tight = KrylovSettings { tol: 1e-10, max_iterations: n, restart: None };
    let (_, plain) = gmres(&op, None, &b, tight).unwrap();
    let (_, restarted) = gmres(&op, None, &b, KrylovSettings { restart: Some(7), ..tight }).unwrap();
    let loss = plain.orthogonality_loss.max(restarted.orthogonality_loss);
    check("Arnoldi orthogonality", loss <= 1e-10, format!("max |V^H V - I| {loss:.1e}"));

    let cfg = match "sgs-d1".parse::<PrecondChoice>().unwrap() {
        PrecondChoice::Sweep(c) => c,
        PrecondChoice::None => unreachable!(),
    };
    let m = SweepPreconditioner::new(&pb, cfg);
    let fixed = (n, |x: &[C64]| {
        use helmddm_core::krylov::Preconditioner;
        m.apply(0, x)
    });
    let (_, g) = gmres(&op, Some(&Fixed(&fixed as &dyn LinearOperator)), &b, tight).unwrap();
    let (_, fl) = fgmres(&op, &Fixed(&fixed as &dyn LinearOperator), &b, tight).unwrap();
    let same_len = g.history.len() == fl.history.len();
    let hist = g.history.iter().zip(&fl.history).map(|(a, b)| (a.1 - b.1).abs()).fold(0.0, f64::max);
    check(
        "FGMRES with a fixed preconditioner",
        same_len && hist <= 1e-12,
        format!("{} vs {} iterations, max residual difference {hist:.1e}", g.iterations(), fl.iterations()),
    );

    let (x, y) = (random_vec(11, n), random_vec(12, n));
    let xy: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a * C64::new(0.7, -0.2) + b).collect();
    let arr = build_groups(pb.partition(), Direction::D1);
    let maps: [(&str, Box<dyn Fn(&[C64]) -> Vec<C64> + '_>); 3] = [
        ("apply_A", Box::new(|v| pb.apply_a(v).unwrap())),
        ("sgs_apply", Box::new(|v| sgs_apply(&pb, &arr, v).unwrap())),
        ("ds_apply", Box::new(|v| ds_apply(&pb, &arr, v).unwrap())),
    ];
    let mut lin: f64 = 0.0;
    for (_, f) in &maps {
        let comb: Vec<C64> = f(&x).iter().zip(f(&y)).map(|(a, b)| a * C64::new(0.7, -0.2) + b).collect();
        lin = lin.max(rel_diff(&f(&xy), &comb));
    }
    check("linearity of apply_A, sgs_apply, ds_apply", lin <= 1e-12, format!("max relative defect {lin:.1e}"));

    let mut bad_groups = 0;
    for nr in 1..=8 {
        for nc in 1..=8 {
            let part = build_partition(
                helmddm_core::mesh::Rect::new(0.0, 0.0, nc as f64, nr as f64).unwrap(),
                nr,
                nc,
                None,
            )
            .unwrap();
            for d in [Direction::D1, Direction::D2] {
                if build_groups(&part, d).n_groups() != nr + nc - 1 {
                    bad_groups += 1;
                }
            }
        }
    }
    check("diagonal group count", bad_groups == 0, format!("{bad_groups} mismatches over 64 partitions"));

    let ok = failures.is_empty();
    (ok, if ok { "all six properties hold".to_string() } else { format!("failed: {}", failures.join(", ")) })
}

fn criterion_8() -> Check {
    let base = scenario("masked-L").unwrap();
    let mut padded = base.clone();
    padded.keep_dummy_blocks = true;
    let mut compact = base;
    compact.keep_dummy_blocks = false;
    let (rp, rc) = (run_scenario(&padded).unwrap(), run_scenario(&compact).unwrap());

    let (lp, lc) = (rp.problem.layout(), rc.problem.layout());
    let mut identical = rp.run.history == rc.run.history && rp.fields == rc.fields;
    let mut matched = 0;
    for blk in lp.blocks() {
        let twin = lc.blocks().iter().find(|o| o.from == blk.from && o.to == blk.to);
        match (blk.dummy, twin) {
            (true, None) => identical &= rp.interface[blk.range()].iter().all(|v| *v == C64::new(0.0, 0.0)),
            (false, Some(t)) => {
                identical &= rp.interface[blk.range()] == rc.interface[t.range()];
                matched += 1;
            }
            _ => identical = false,
        }
    }
    identical &= matched == lc.blocks().len();
    (
        rc.converged() && rc.precond == "sgs-2d" && identical,
        format!(
            "{} in {} iterations, dims {} (dummy blocks) and {} (masked), identical: {identical}",
            if rc.converged() { "converged" } else { "not converged" },
            rc.iterations(),
            rp.problem.dim(),
            rc.problem.dim()
        ),
    )
}

fn main() {
    let criteria: [(usize, &str, fn() -> Check); 8] = [
        (1, "mono-domain equivalence", criterion_1),
        (2, "dense-probe equivalence", criterion_2),
        (3, "DS block cancellation", criterion_3),
        (4, "SGS exact triangular inverse", criterion_4),
        (5, "drop iterations", criterion_5),
        (6, "scalability trend", criterion_6),
        (7, "property suites", criterion_7),
        (8, "masked domain", criterion_8),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, title, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id} ({title}): {} | {detail} | {:.1} s",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
