//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Criteria 1-7 run under the convention chosen by calibration (criterion 8).

#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;
use std::time::{Duration, Instant};

use orthocurv::{run, Command, RunConfig, EXIT_OK};
use orthocurv_core::cartan::{cartan_table, connection_forms, torsion, ExteriorForm};
use orthocurv_core::curvature::{closed_form_table, gauss_k_with, gauss_k_oneill, rtc_diag_with};
use orthocurv_core::expr::{residual, Expr, Func};
use orthocurv_core::oracle::{
    calibrate, calibrate_default, compare, finite_diff_riemann, ll_applicable, ll_table, mathpages_table,
    riemann_frame,
};
use orthocurv_core::random::{random_metrics, random_root};
use orthocurv_core::{fixtures, DiagonalMetric, Execution, IndexQuad, Point, RtcTable, SignConvention};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXEC: Execution = Execution::Parallel;
const RANDOM_PER_DIM: usize = 100;
const RANDOM_SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.metric"))
}

fn random_suite() -> Vec<DiagonalMetric> {
    (2..=5).flat_map(|n| random_metrics(n, RANDOM_PER_DIM, RANDOM_SEED)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every closed-form component zero symbolically, and numerically at 64 samples.
fn all_zero(name: &str, conv: SignConvention, limit: Duration) -> Outcome {
    let start = Instant::now();
    let m = fixtures::load(name);
    let table = closed_form_table(&m, conv, EXEC);
    let quads = IndexQuad::all(m.dim());
    let points = m.sample_points(64, 0);
    let mut worst: f64 = 0.0;
    for q in &quads {
        let e = table.entry(q);
        ensure(e.simplify().is_zero(), || format!("{q} simplifies to {}", e.simplify()))?;
        for p in &points {
            let v = e.eval(p).map_err(|err| format!("{q} at {p}: {err}"))?;
            worst = worst.max(v.abs());
        }
    }
    // the oracle sees the same flatness
    let oracle = riemann_frame(&m, EXEC);
    for q in &quads {
        for p in &points {
            let v = oracle.entry(q).eval(p).map_err(|err| format!("oracle {q} at {p}: {err}"))?;
            worst = worst.max(v.abs());
        }
    }
    ensure(worst < 1e-10, || format!("max |component| {worst:e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:?}"))?;
    Ok(format!("{} components symbolic zero, max |value| {worst:e}, {elapsed:.2?}", quads.len()))
}

fn criterion_1(conv: SignConvention) -> Outcome {
    all_zero("milne", conv, Duration::from_secs(5))
}

fn criterion_2(conv: SignConvention) -> Outcome {
    let summary = all_zero("polar4d", conv, Duration::from_secs(5))?;
    let m = fixtures::load("polar4d");
    let (r, th, ph) = (1, 2, 3);
    let t = closed_form_table(&m, conv, EXEC);
    for (a, b, c, d) in [(th, r, r, th), (r, ph, r, ph), (th, ph, th, ph)] {
        ensure(t.get(a, b, c, d).simplify().is_zero(), || format!("({a},{b},{c},{d}) nonzero"))?;
    }
    Ok(summary)
}

fn tables(m: &DiagonalMetric, conv: SignConvention) -> Vec<RtcTable> {
    let mut out = vec![closed_form_table(m, conv, EXEC), cartan_table(m, conv, EXEC), riemann_frame(m, EXEC)];
    if ll_applicable(m, 0) {
        out.push(ll_table(m));
    }
    out.push(mathpages_table(m));
    out
}

fn criterion_3(conv: SignConvention) -> Outcome {
    let start = Instant::now();
    let metrics = random_suite();
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    for (k, m) in metrics.iter().enumerate() {
        let ts = tables(m, conv);
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                let r = compare(&ts[i], &ts[j], m, 1e-9, 32, k as u64, EXEC);
                pairs += 1;
                worst = worst.max(r.max_residual());
                ensure(r.agrees(), || {
                    let c = r.worst().expect("a component disagrees");
                    format!(
                        "metric #{k} {} vs {} at {}: {:?} residual {:e}\n{m}",
                        r.left.name(),
                        r.right.name(),
                        c.quad,
                        c.agreement,
                        c.max_residual
                    )
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{} metrics, {pairs} pipeline pairs, max residual {worst:e}, {elapsed:.2?}", metrics.len()))
}

fn criterion_4(conv: SignConvention) -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, m) in random_metrics(2, 20, 4).iter().enumerate() {
        let k_expr = gauss_k_with(m, conv, 0, 1).map_err(|e| e.to_string())?;
        let diag = rtc_diag_with(m, conv, 0, 1).map_err(|e| e.to_string())?;
        ensure(diag == k_expr, || format!("metric #{k}: rtc_diag differs from K structurally"))?;
        let (u, v) = (m.coord(0), m.coord(1));
        let oneill = gauss_k_oneill(&m.g_diag(0), &m.g_diag(1), m.eta(0), m.eta(1), u, v);
        for p in m.sample_points(32, k as u64) {
            let (a, b) = (k_expr.eval(&p).map_err(|e| e.to_string())?, oneill.eval(&p).map_err(|e| e.to_string())?);
            worst = worst.max(residual(a, b));
        }
    }
    ensure(worst < 1e-10, || format!("K vs O'Neill residual {worst:e}"))?;
    Ok(format!("20 metrics, rtc_diag = K exactly, K vs O'Neill form max residual {worst:e}"))
}

fn criterion_5() -> Outcome {
    let mut metrics: Vec<DiagonalMetric> = fixtures::names().map(fixtures::load).collect();
    for n in 2..=5 {
        metrics.extend(random_metrics(n, 10, 5));
    }
    let mut worst_torsion: f64 = 0.0;
    for m in &metrics {
        let w = connection_forms(m);
        for a in 0..m.dim() {
            for d in 0..m.dim() {
                let eta = Expr::int((m.eta(a) * m.eta(d)).into());
                let sum = w[a][d].add(&w[d][a].scale(&eta)).map_err(|e| e.to_string())?;
                ensure(sum.is_zero(), || format!("antisymmetry ({a},{d}) fails: {sum}\n{m}"))?;
            }
        }
        for t in torsion(m) {
            for p in m.sample_points(16, 5) {
                worst_torsion = worst_torsion.max(t.max_abs_at(&p).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(worst_torsion < 1e-10, || format!("torsion residual {worst_torsion:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst_dd: f64 = 0.0;
    for k in 0..50u64 {
        let m = &random_metrics(2 + (k % 4) as usize, 1, 500 + k)[0];
        let xs: Vec<Expr> = m.coords().iter().map(Expr::symbol).collect();
        let (u, v) = (random_root(&mut rng, &xs), random_root(&mut rng, &xs));
        let f = match rng.gen_range(0..3) {
            0 => u * v,
            1 => Expr::func(Func::Sin, u) * Expr::func(Func::Exp, v),
            _ => Expr::func(Func::Ln, u) / v,
        };
        let dd = ExteriorForm::scalar(f).ext_d(m).and_then(|df| df.ext_d(m)).map_err(|e| e.to_string())?;
        ensure(dd.simplify().is_zero(), || format!("d(d f) = {dd}"))?;
        for p in m.sample_points(8, k) {
            worst_dd = worst_dd.max(dd.max_abs_at(&p).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst_dd < 1e-10, || format!("d(d f) residual {worst_dd:e}"))?;
    Ok(format!(
        "{} metrics: antisymmetry exact, torsion max {worst_torsion:e}; d(d f) = 0 on 50 forms",
        metrics.len()
    ))
}

fn criterion_6(conv: SignConvention) -> Outcome {
    let metrics = random_suite();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (k, m) in metrics.iter().enumerate() {
        let points = m.sample_points(32, k as u64);
        for a in 0..m.dim() {
            for b in a + 1..m.dim() {
                let ab = rtc_diag_with(m, conv, a, b).map_err(|e| e.to_string())?;
                let ba = rtc_diag_with(m, conv, b, a).map_err(|e| e.to_string())?;
                for p in &points {
                    if let (Ok(x), Ok(y)) = (ab.eval(p), ba.eval(p)) {
                        worst = worst.max(residual(x, y));
                    }
                }
                count += 1;
            }
        }
    }
    ensure(worst < 1e-10, || format!("max residual {worst:e}"))?;
    Ok(format!("{count} pairs on {} metrics, max residual {worst:e}", metrics.len()))
}

fn criterion_7(conv: SignConvention) -> Outcome {
    let sphere = fixtures::load("sphere2");
    let oracle = riemann_frame(&sphere, EXEC);
    let closed = closed_form_table(&sphere, conv, EXEC);
    for a in [1.0, 2.5] {
        for (th, ph) in [(0.4, 1.0), (1.3, 2.0), (2.6, 5.0)] {
            let p = Point::from_pairs([("theta", th), ("phi", ph), ("a", a)]);
            let want = oracle.get(0, 1, 0, 1).eval(&p).map_err(|e| e.to_string())?;
            let got = closed.get(0, 1, 0, 1).eval(&p).map_err(|e| e.to_string())?;
            ensure(residual(want, 1.0 / (a * a)) < 1e-12, || format!("oracle sphere a={a}: {want}"))?;
            ensure(residual(got, want) < 1e-10, || format!("closed form sphere a={a}: {got} vs {want}"))?;
        }
    }
    let hyp = fixtures::load("hyperbolic2");
    for p in hyp.sample_points(16, 7) {
        let want = riemann_frame(&hyp, EXEC).get(0, 1, 0, 1).eval(&p).map_err(|e| e.to_string())?;
        let got = closed_form_table(&hyp, conv, EXEC).get(0, 1, 0, 1).eval(&p).map_err(|e| e.to_string())?;
        ensure(residual(want, -1.0) < 1e-12 && residual(got, -1.0) < 1e-10, || format!("hyperbolic {got} / {want}"))?;
    }
    let mut cfg = RunConfig::new(Command::Verify, fixture_path("schwarzschild"));
    cfg.convention = conv;
    let out = run(&cfg).map_err(|e| e.to_string())?;
    ensure(out.exit_code == EXIT_OK, || format!("schwarzschild verify exit {}", out.exit_code))?;
    let n = out.report.comparisons.len();
    Ok(format!("sphere 1/a^2 for a in {{1, 2.5}}, hyperbolic -1, schwarzschild verify exit 0 over {n} pairs"))
}

fn criterion_8(runs: &[SignConvention]) -> Outcome {
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("runs disagree: {runs:?}"))?;
    ensure(runs[0] == SignConvention::RESOLVED, || format!("selected {}", runs[0]))?;
    Ok(format!("{} runs all select ({})", runs.len(), runs[0]))
}

fn criterion_9() -> Outcome {
    let cases = [
        ("sphere2", Point::from_pairs([("theta", 1.0), ("phi", 2.0), ("a", 1.5)])),
        ("schwarzschild", Point::from_pairs([("t", 0.5), ("r", 4.0), ("theta", 1.2), ("phi", 1.0), ("M", 0.8)])),
    ];
    let mut parts = Vec::new();
    for (name, p) in cases {
        let m = fixtures::load(name);
        let exact = riemann_frame(&m, EXEC);
        let res = |h: f64| -> Result<f64, String> {
            let fd = finite_diff_riemann(&m, &p, h).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for (q, v) in &fd {
                worst = worst.max(residual(exact.entry(q).eval(&p).map_err(|e| e.to_string())?, *v));
            }
            Ok(worst)
        };
        let ratio = res(1e-3)? / res(5e-4)?;
        ensure((3.5..=4.5).contains(&ratio), || format!("{name}: ratio {ratio}"))?;
        parts.push(format!("{name} {ratio:.3}"));
    }
    Ok(format!("residual ratio h=1e-3 / h=5e-4: {}", parts.join(", ")))
}

fn calibration_runs() -> Result<Vec<SignConvention>, String> {
    let schwarzschild = [fixtures::load("schwarzschild")];
    let mut runs = Vec::new();
    for seed in 0..3 {
        for _ in 0..2 {
            let c = calibrate(&schwarzschild, 1e-9, 32, seed, EXEC).map_err(|e| e.to_string())?;
            runs.push(c.selected);
        }
        runs.push(calibrate_default(seed).map_err(|e| e.to_string())?.selected);
    }
    Ok(runs)
}

fn main() {
    let runs = calibration_runs();
    let conv = runs.as_ref().map(|r| r[0]).unwrap_or(SignConvention::RESOLVED);
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(move || criterion_1(conv))),
        (2, Box::new(move || criterion_2(conv))),
        (3, Box::new(move || criterion_3(conv))),
        (4, Box::new(move || criterion_4(conv))),
        (5, Box::new(criterion_5)),
        (6, Box::new(move || criterion_6(conv))),
        (7, Box::new(move || criterion_7(conv))),
        (8, Box::new(move || runs.clone().and_then(|r| criterion_8(&r)))),
        (9, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {n}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL  {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
