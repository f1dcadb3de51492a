//! Acceptance criteria 1-11. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; the process fails if any does.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use rapprox::approx::{
    counting_by_enumeration, counting_function, curve_frontier, enumerate_p1, enumerate_p2, line_cluster,
    min_dist_height, p1_frontier, points_near_p2, product_barrier, product_barrier_brute, ApproxEstimate, Metric,
};
use rapprox::arith::{big, q, Q};
use rapprox::fixtures;
use rapprox::nslattice::NSLattice;
use rapprox::predictor::{predict_alpha, Candidate, PointContext};
use rapprox::projective::ProjPoint;
use rapprox::ratcurves::{named, ParamCurve};
use rapprox::suite::{self, Check};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn pt(v: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(v).unwrap()
}

fn in_range(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn summarize(checks: &[Check]) -> (bool, String) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let detail = if failed.is_empty() {
        format!("{} checks", checks.len())
    } else {
        let names: Vec<String> = failed.iter().take(5).map(|c| format!("{} ({})", c.name, c.detail)).collect();
        format!("{} of {} failed: {}", failed.len(), checks.len(), names.join("; "))
    };
    (failed.is_empty(), detail)
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    if let Some(limit) = limit {
        if el > limit {
            o.passed = false;
            o.detail = format!("{}; took {:.2?} (limit {:.0?})", o.detail, el, limit);
            return o;
        }
    }
    o.detail = format!("{}; {:.2?}", o.detail, el);
    o
}

fn c1_line() -> Outcome {
    let p = pt(&[0, 1]);
    let f = p1_frontier(&p, 10_000, Metric::Projective).unwrap();
    let est = ApproxEstimate::from_frontier(&f, 10_000);
    let g = est.tail_median_gamma.unwrap_or(f64::NAN);
    let floor = min_dist_height(&p, 10_000).unwrap();
    let ok = in_range(g, 0.95, 1.05) && !est.insufficient && floor == Some(q(1, 1));
    outcome(
        ok,
        format!("tail median {g:.4} over {} records, min dist*H = {}", est.records.len(), floor.map_or("none".to_string(), |d| d.to_string())),
    )
}

fn c2_cusp() -> Outcome {
    let lat = Arc::new(NSLattice::from_i64(&["L"], &[&[1]]).unwrap());
    let class = |k: i64| rapprox::nslattice::DivisorClass::new(lat.clone(), vec![big(k)]).unwrap();
    let ctx = PointContext::new(
        lat.clone(),
        vec![
            Candidate {
                label: "cusp".into(),
                class: class(3),
                mult: 2,
            },
            Candidate {
                label: "conic".into(),
                class: class(2),
                mult: 1,
            },
        ],
    )
    .unwrap();
    let pred = predict_alpha(&ctx, &class(1)).unwrap();
    let curve = named::cuspidal_cubic();
    let t0 = pt(&[1, 0]);
    let along = curve.alpha_along(&t0, 1);
    let extra = ParamCurve::best_sequence_parameters(&t0, 1000);
    let f = curve_frontier(&curve, &t0, 1000, &extra).unwrap();
    let est = ApproxEstimate::from_frontier(&f, 1000);
    let g = est.tail_median_gamma.unwrap_or(f64::NAN);
    let ok = pred.alpha == q(3, 2) && pred.winners == ["cusp"] && along == q(3, 2) && in_range(g, 1.40, 1.60);
    outcome(
        ok,
        format!("predictor {} via {:?}, d/m = {along}, tail median {g:.4}", pred.alpha, pred.winners),
    )
}

fn c3_twisted_cubic() -> Outcome {
    let line = named::line();
    let e3 = line.alpha_along(&pt(&[1, 1]), 3);
    let cubic = named::twisted_cubic();
    let d_over_m = cubic.alpha_along(&pt(&[1, 1]), 1);
    let est_at = |t0: ProjPoint| {
        let extra = ParamCurve::best_sequence_parameters(&t0, 1000);
        let f = curve_frontier(&cubic, &t0, 1000, &extra).unwrap();
        ApproxEstimate::from_frontier(&f, 1000)
    };
    // At [1:0] the image is a coordinate point and the ratio estimator is
    // exact; at [1:1] a constant factor in the distance biases the ratio, so
    // the log-log slope is used there.
    let a = est_at(pt(&[1, 0]));
    let b = est_at(pt(&[1, 1]));
    let ga = a.tail_median_gamma.unwrap_or(f64::NAN);
    let sb = b.slope_fit.unwrap_or(f64::NAN);
    let ok = e3 == q(3, 1) && d_over_m == q(3, 1) && in_range(ga, 2.85, 3.15) && in_range(sb, 2.85, 3.15);
    outcome(
        ok,
        format!(
            "alpha(P^1, e=3) = {e3}, d/m = {d_over_m}, tail median at [1:0] {ga:.4}, slope at [1:1] {sb:.4} (tail median there {:.4})",
            b.tail_median_gamma.unwrap_or(f64::NAN)
        ),
    )
}

fn c4_product() -> Outcome {
    let (p1, p2) = (pt(&[0, 1]), pt(&[0, 1]));
    let r = product_barrier(&p1, &p2, 500, (1, 1)).unwrap();
    let one = Q::from_integer(big(1));
    // The reduction to closest points per height pair, against a direct
    // search over all pairs at small height.
    let brute = product_barrier_brute(&p1, &p2, 40, (1, 1)).unwrap();
    let reduced = product_barrier(&p1, &p2, 40, (1, 1)).unwrap().min_off_axis_gamma;
    let agree = (brute - reduced).abs() < 1e-12;
    let ok = r.min_off_axis_gamma >= 1.9 && r.axis_max_dist_height == one && r.axis_min_dist_height == one && agree;
    outcome(
        ok,
        format!(
            "min off-axis gamma {:.4} at heights {:?}, axis dist*H in [{}, {}], brute/reduced at 40: {brute:.4}/{reduced:.4}",
            r.min_off_axis_gamma, r.argmin_heights, r.axis_min_dist_height, r.axis_max_dist_height
        ),
    )
}

fn c5_duality() -> Outcome {
    let (ok, d) = summarize(&suite::duality_checks());
    outcome(ok, d)
}

fn c6_tables() -> Outcome {
    let (ok, d) = summarize(&suite::table_checks());
    outcome(ok, d)
}

fn c7_pairings() -> Outcome {
    let (ok, d) = summarize(&suite::pairing_checks());
    outcome(ok, d)
}

fn c8_trees() -> Outcome {
    let (ok, d) = summarize(&suite::tree_checks(50, suite::TREE_SEED));
    outcome(ok, d)
}

fn c9_predictor() -> Outcome {
    let mut checks = suite::predictor_checks(fixtures::SAMPLES);
    checks.push(suite::preset_coverage());
    let (mut ok, mut d) = summarize(&checks);
    for (o, note) in fixtures::check_errata().unwrap() {
        println!("      info: corrected generators for {}: printed list selects the curve = {} ({note})", o.name, o.passed);
        if o.passed {
            ok = false;
            d.push_str(&format!("; printed generators for {} unexpectedly pass", o.name));
        }
    }
    outcome(ok, d)
}

fn c10_cluster() -> Outcome {
    let p = pt(&[0, 0, 1]);
    let c = q(2, 1);
    // dist * H <= c means every minor of (p, q) is at most c H(p); the dual
    // coordinates of the line pq are those minors up to a common factor.
    let bound = (&c * Q::from_integer(p.height())).floor().to_integer();
    let report = |b: i64| {
        let pts = points_near_p2(&p, b, &c).unwrap();
        line_cluster(&p, &pts, &c).unwrap()
    };
    let r250 = report(250);
    let r500 = report(500);
    let grew = r500.line_count() > r250.line_count();
    let bounded = |r: &rapprox::approx::ClusterReport| r.lines.keys().all(|l| l.plucker_height() <= bound);
    let ok = !grew && bounded(&r250) && bounded(&r500) && r250.max_plucker_height == r500.max_plucker_height;
    outcome(
        ok,
        format!(
            "lines {} -> {}, admitted {} -> {}, max Plucker height {} -> {} (bound {bound})",
            r250.line_count(),
            r500.line_count(),
            r250.admitted,
            r500.admitted,
            r250.max_plucker_height,
            r500.max_plucker_height
        ),
    )
}

fn naive(n: usize, b: i64) -> BTreeSet<ProjPoint> {
    let mut out = BTreeSet::new();
    let mut v = vec![-b; n + 1];
    loop {
        if v.iter().any(|&x| x != 0) {
            out.insert(ProjPoint::from_i64(&v).unwrap());
        }
        let mut i = 0;
        while i <= n {
            v[i] += 1;
            if v[i] <= b {
                break;
            }
            v[i] = -b;
            i += 1;
        }
        if i > n {
            return out;
        }
    }
}

fn c11_enumeration() -> Outcome {
    let mut mismatch = Vec::new();
    for b in 1..=30 {
        let e1: BTreeSet<ProjPoint> = enumerate_p1(b).into_iter().collect();
        if e1 != naive(1, b) || enumerate_p1(b).len() != e1.len() {
            mismatch.push(format!("P^1 B={b}"));
        }
        let e2: BTreeSet<ProjPoint> = enumerate_p2(b).into_iter().collect();
        if e2 != naive(2, b) || enumerate_p2(b).len() != e2.len() {
            mismatch.push(format!("P^2 B={b}"));
        }
        for n in [1, 2] {
            if counting_function(n, b as u64) != BigInt::from(counting_by_enumeration(n, b).unwrap()) {
                mismatch.push(format!("count P^{n} B={b}"));
            }
        }
    }
    let ratio = |n: usize, b: u64| {
        counting_function(n, 2 * b).to_f64().unwrap() / counting_function(n, b).to_f64().unwrap()
    };
    let r1 = ratio(1, 500);
    let r2 = ratio(2, 100);
    let ok = mismatch.is_empty() && (r1 - 4.0).abs() <= 0.1 && (r2 - 8.0).abs() <= 0.2;
    outcome(
        ok,
        format!("oracle mismatches {:?}, N(1000)/N(500) on P^1 = {r1:.4}, N(200)/N(100) on P^2 = {r2:.4}", mismatch),
    )
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("line constant", secs(10), c1_line),
        ("cuspidal cubic", secs(30), c2_cusp),
        ("twisted cubic", None, c3_twisted_cubic),
        ("product barrier", None, c4_product),
        ("cone duality", secs(5), c5_duality),
        ("intersection tables", None, c6_tables),
        ("simple-fibre pairings", None, c7_pairings),
        ("fiber trees", None, c8_trees),
        ("predictor conclusions", None, c9_predictor),
        ("line clustering", None, c10_cluster),
        ("enumeration oracle", None, c11_enumeration),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let o = timed(limit, f);
        if !o.passed {
            failures += 1;
        }
        println!("criterion {:>2} {:<22} {}  {}", i + 1, name, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
