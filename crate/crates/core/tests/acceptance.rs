//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The process fails if a criterion fails that is not listed in
//! `KNOWN_FAILURES`.

use std::time::{Duration, Instant};

use lemniscate::catalog::Example;
use lemniscate::centers::{compute_centers, CentersResult, IterationOptions, Method};
use lemniscate::preimage::{
    endpoint_residual, polynomial_from_endpoints, solve_endpoints, Preimage,
};
use lemniscate::walshmap::{trace_boundary, MapContext, TOL_MAP};
use lemniscate::ComplexPoly;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The published three-interval centers carry four truncated digits, so the
/// first differs from the computed value by 9.3e-5 and cannot meet the
/// rounding tolerance 5e-5.
const KNOWN_FAILURES: &[u32] = &[1];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn preimage(ex: Example) -> Preimage {
    Preimage::analyze(ex.polynomial().unwrap()).unwrap()
}

fn solve(ex: Example, method: Method) -> Result<CentersResult, String> {
    compute_centers(&preimage(ex), method, &IterationOptions::default()).map_err(|e| e.to_string())
}

fn steps(res: &CentersResult) -> usize {
    res.trace.as_ref().map_or(0, |t| t.steps)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn context(ex: Example) -> Result<MapContext, String> {
    let pre = preimage(ex);
    let lem = compute_centers(&pre, Method::Auto, &IterationOptions::default())
        .map_err(|e| e.to_string())?
        .data;
    MapContext::new(pre, lem).map_err(|e| e.to_string())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn reference_centers(ex: Example, tol: f64, published_steps: usize, max_time: f64) -> Outcome {
    let (res, time) = timed(|| solve(ex, Method::Iterative));
    let res = res?;
    let reference = ex.reference().centers.unwrap();
    let err = max_diff(res.data.centers(), &reference);
    let k = steps(&res);
    check(
        err <= tol && k.abs_diff(published_steps) <= 2 && time.as_secs_f64() < max_time,
        format!(
            "max error {err:.2e}, {k} steps, {:.1} ms",
            time.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_1() -> Outcome {
    let ex = Example::ThreeIntervals {
        alpha: 0.05,
        beta: 0.3,
    };
    reference_centers(ex, 5e-5, 4, 1.0)
}

fn criterion_2() -> Outcome {
    reference_centers(Example::SevenFour, 1e-10, 5, 1.0)
}

fn criterion_3() -> Outcome {
    reference_centers(Example::FiveIntervals, 1e-10, 4, 1.0)
}

fn criterion_4() -> Outcome {
    let table = [
        (Example::TwoIntervals { alpha: 0.1 }, 4),
        (
            Example::SymmetricPair {
                alpha: 0.2,
                beta: 2.0,
            },
            0,
        ),
        (Example::CrossingQuartic { alpha: 1.01 }, 1),
        (
            Example::ThreeIntervals {
                alpha: 0.05,
                beta: 0.3,
            },
            4,
        ),
        (Example::SymmetricTriple { alpha: 0.2 }, 4),
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    for (ex, published) in table {
        let res = solve(ex, Method::Iterative)?;
        let k = steps(&res);
        ok &= k.abs_diff(published) <= 2;
        let mut d = format!("{} {k}/{published}", ex.id());
        if !matches!(ex, Example::ThreeIntervals { .. }) {
            let closed = solve(ex, Method::ClosedForm)?;
            let err = max_diff(res.data.centers(), closed.data.centers());
            ok &= err <= 1e-12;
            d += &format!(" (vs closed form {err:.1e})");
        }
        detail.push(d);
    }
    check(ok, detail.join(", "))
}

fn criterion_5() -> Outcome {
    let mut fixtures = Vec::new();
    for alpha in [0.05, 0.2, 0.4, 0.6, 0.8] {
        fixtures.push(Example::TwoIntervals { alpha });
    }
    for alpha in [1.01, 1.05, 1.1, 1.3, 1.6] {
        fixtures.push(Example::CrossingQuartic { alpha });
    }
    for alpha in [0.05, 0.15, 0.25, 0.35, 0.45] {
        fixtures.push(Example::SymmetricTriple { alpha });
    }
    for (alpha, beta) in [(0.1, 1.0), (0.2, 2.0), (0.5, 1.0), (0.3, 3.0), (1.0, 1.5)] {
        fixtures.push(Example::SymmetricPair { alpha, beta });
    }
    let mut worst = 0.0f64;
    for ex in &fixtures {
        let it = solve(*ex, Method::Iterative)?;
        let cf = solve(*ex, Method::ClosedForm)?;
        worst = worst.max(max_diff(it.data.centers(), cf.data.centers()));
    }
    check(
        worst <= 1e-11,
        format!("{} fixtures, max difference {worst:.2e}", fixtures.len()),
    )
}

fn map_fixtures() -> Vec<Example> {
    vec![
        Example::TwoIntervals { alpha: 0.1 },
        Example::SymmetricPair {
            alpha: 0.2,
            beta: 2.0,
        },
        Example::ThreeIntervals {
            alpha: 0.05,
            beta: 0.3,
        },
        Example::SymmetricTriple { alpha: 0.2 },
        Example::SevenFour,
        Example::FiveIntervals,
        Example::CrossingQuartic { alpha: 1.01 },
        Example::Chebyshev { n: 10, scale: 1.05 },
    ]
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst_res = 0.0f64;
    let mut worst_conj = 0.0f64;
    let mut worst_inf = 0.0f64;
    let mut monotone = true;
    for ex in map_fixtures() {
        let ctx = context(ex)?;
        let pre = ctx.preimage();
        let mut count = 0;
        while count < 500 {
            let z = Complex64::from_polar(3.0 * rng.gen::<f64>().sqrt(), rng.gen_range(-3.2..3.2));
            if z.im.abs() < 1e-6 && pre.components().contains(z.re, 1e-6) {
                continue;
            }
            let w = ctx.phi(z).map_err(|e| format!("{} at {z}: {e}", ex.id()))?;
            let h = pre.h(z).unwrap();
            let q = ctx.lemniscatic().q_eval(w);
            worst_res = worst_res.max((q - h).norm() / h.norm().max(1.0));
            let wc = ctx.phi(z.conj()).map_err(|e| e.to_string())?;
            worst_conj = worst_conj.max((wc - w.conj()).norm());
            count += 1;
        }
        let e = pre.components();
        for j in 0..e.ell().saturating_sub(1) {
            let (lo, hi) = e.gap(j);
            let mut last = f64::NEG_INFINITY;
            for k in 1..=50 {
                let x = lo + (hi - lo) * k as f64 / 51.0;
                let w = ctx
                    .phi(Complex64::new(x, 0.0))
                    .map_err(|e| e.to_string())?
                    .re;
                monotone &= w > last;
                last = w;
            }
        }
        for k in 0..16 {
            let z = Complex64::from_polar(1e4, 0.4 * k as f64);
            let w = ctx.phi(z).map_err(|e| e.to_string())?;
            worst_inf = worst_inf.max((w - z).norm());
        }
    }
    check(
        worst_res <= TOL_MAP && worst_conj <= 1e-12 && monotone && worst_inf <= 1e-3,
        format!(
            "relative residual {worst_res:.1e}, conjugation {worst_conj:.1e}, monotone {monotone}, |Phi(z) - z| at 1e4 {worst_inf:.1e}"
        ),
    )
}

fn explicit_symmetric_pair(z: Complex64, alpha: f64, beta: f64) -> Complex64 {
    // Branch of the inner root with the behavior z^2 - (a^2 + b^2)/2 at
    // infinity, continued to the first quadrant; the rest follows by symmetry.
    let zq = Complex64::new(z.re.abs(), z.im.abs());
    let inner = ((zq - alpha) * (zq + alpha)).sqrt() * ((zq - beta) * (zq + beta)).sqrt();
    let inner = if inner.re * (zq * zq).re + inner.im * (zq * zq).im >= 0.0 {
        inner
    } else {
        -inner
    };
    let v = ((zq * zq + alpha * beta + inner) / 2.0).sqrt();
    let v = Complex64::new(v.re.abs(), v.im.abs());
    Complex64::new(v.re * z.re.signum(), v.im * z.im.signum())
}

fn criterion_7() -> Outcome {
    let (alpha, beta) = (0.2, 2.0);
    let ctx = context(Example::SymmetricPair { alpha, beta })?;
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let w = ctx.phi(z).map_err(|e| e.to_string())?;
        worst = worst.max((w - explicit_symmetric_pair(z, alpha, beta)).norm());
    }
    check(
        worst <= 1e-10,
        format!("max deviation {worst:.2e} on 100 samples"),
    )
}

/// Endpoints of `s T_n`: `cos(((2k - 1) pi / 2 ± asin(1/s)) / n)`.
fn chebyshev_endpoints(n: usize, s: f64) -> Vec<f64> {
    let t = (1.0 / s).asin();
    let mut c: Vec<f64> = (1..=n)
        .flat_map(|k| {
            let m = (2 * k - 1) as f64 * std::f64::consts::FRAC_PI_2;
            [((m - t) / n as f64).cos(), ((m + t) / n as f64).cos()]
        })
        .collect();
    c.sort_by(f64::total_cmp);
    c
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst_recovery = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut configs = 0;
    for n in 2..=10 {
        for _ in 0..3 {
            let base = chebyshev_endpoints(n, rng.gen_range(1.05..1.5));
            let gap = base
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::MAX, f64::min);
            // Free the right endpoint of every interval but the last.
            let free = |i: usize| i % 2 == 1 && i < 2 * n - 1;
            let pinned: Vec<Option<f64>> = base
                .iter()
                .enumerate()
                .map(|(i, &x)| (!free(i)).then(|| x + rng.gen_range(-0.05..0.05) * gap))
                .collect();
            let guesses: Vec<f64> = (0..2 * n).filter(|&i| free(i)).map(|i| base[i]).collect();
            let sol = solve_endpoints(&pinned, &guesses).map_err(|e| format!("n = {n}: {e}"))?;
            let r = endpoint_residual(&sol.endpoints).unwrap();
            worst_residual = r.iter().fold(worst_residual, |m, x| m.max(x.abs()));
            let p = polynomial_from_endpoints(&sol.endpoints).map_err(|e| e.to_string())?;
            let pre = Preimage::analyze(p).map_err(|e| format!("n = {n}: {e}"))?;
            worst_recovery =
                worst_recovery.max(max_diff(pre.components().endpoints(), &sol.endpoints));
            configs += 1;
        }
    }
    check(
        worst_recovery <= 1e-9 && worst_residual <= 1e-12,
        format!("{configs} configurations, recovery {worst_recovery:.1e}, residual {worst_residual:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let pre = Preimage::analyze(ComplexPoly::from_real(&[0.0, 1.0])).unwrap();
    let lem = compute_centers(&pre, Method::Auto, &IterationOptions::default())
        .unwrap()
        .data;
    let disk = MapContext::new(pre, lem).map_err(|e| e.to_string())?;
    let radius_err = trace_boundary(&disk, 256)
        .map_err(|e| e.to_string())?
        .iter()
        .flat_map(|c| &c.points)
        .fold(0.0f64, |m, w| m.max((w.norm() - 0.5).abs()));
    let mut level_err = 0.0f64;
    for ex in map_fixtures() {
        let ctx = context(ex)?;
        for curve in trace_boundary(&ctx, 128).map_err(|e| e.to_string())? {
            for w in curve.points {
                level_err = level_err.max((ctx.lemniscatic().q_eval(w).norm() - 1.0).abs());
            }
        }
    }
    let ctx = context(Example::SymmetricPair {
        alpha: 0.2,
        beta: 2.0,
    })?;
    let a2 = ctx.lemniscatic().centers()[1];
    let cap = ctx.lemniscatic().capacity();
    let c = ctx.boundary_crossings();
    let crossing_err = (c[2] - (a2 * a2 - cap * cap).sqrt())
        .abs()
        .max((c[3] - (a2 * a2 + cap * cap).sqrt()).abs());
    check(
        radius_err <= 1e-10 && level_err <= 1e-10 && crossing_err <= 1e-10,
        format!(
            "disk radius {radius_err:.1e}, ||Q| - 1| {level_err:.1e}, crossings {crossing_err:.1e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let (res, time) =
        timed(|| [10, 20].map(|n| solve(Example::Chebyshev { n, scale: 1.05 }, Method::Iterative)));
    let [t10, t20] = res;
    let (k10, k20) = (steps(&t10?), steps(&t20?));
    check(
        k10 <= 7 && k20 <= 7 && time.as_secs_f64() < 5.0,
        format!(
            "T10 {k10} steps, T20 {k20} steps, {:.0} ms",
            time.as_secs_f64() * 1e3
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "three-interval centers", criterion_1),
        (2, "seven-four centers", criterion_2),
        (3, "five-interval centers", criterion_3),
        (4, "iteration counts", criterion_4),
        (5, "closed forms vs iteration", criterion_5),
        (6, "map residual and symmetries", criterion_6),
        (7, "explicit symmetric-pair map", criterion_7),
        (8, "endpoint round trip", criterion_8),
        (9, "boundary tracer", criterion_9),
        (10, "Chebyshev scalability", criterion_10),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
            Err(detail) => {
                let known = KNOWN_FAILURES.contains(&id);
                println!(
                    "FAIL {id:>2} {name}: {detail}{}",
                    if known { " (known)" } else { "" }
                );
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
