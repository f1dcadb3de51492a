//! Scenario runner shared by the `rapprox` binary and the tests.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::approx::{
    self, counting_function, curve_frontier, enumerate_p1, enumerate_p2, hirzebruch_frontier, line_cluster,
    p1_frontier, p2_frontier, points_near_p2, product_barrier, ApproxEstimate, Frontier, Metric,
};
use crate::arith::{fmt_q, parse_q, q, Q};
use crate::cones::{is_dual_pair, Cone};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::nslattice::{format_combination, preset, q_vec_json, DivisorClass, Preset};
use crate::predictor::{predict_alpha, predict_over_cone, Candidate, PointContext};
use crate::projective::{max_minor, ProjPoint};
use crate::ratcurves::{named, ParamCurve};
use crate::serial::{big_vec_json, to_sorted_json};
use crate::suite::{self, Check};
use crate::surfaces::{HirzebruchPoint, LinearSystem, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Lattice,
    Cones,
    Predict,
    Enumerate,
    Alpha,
    Verify,
}

impl FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lattice" => Task::Lattice,
            "cones" => Task::Cones,
            "predict" => Task::Predict,
            "enumerate" => Task::Enumerate,
            "alpha" => Task::Alpha,
            "verify" => Task::Verify,
            _ => return Err(Error::Parse(format!("task: unknown task {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("format: expected json or csv, got {s:?}"))),
        }
    }
}

/// Task parameters. Scenario files use the same field names; unset fields
/// fall back to per-task defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub task: Option<String>,
    pub preset: Option<String>,
    pub model: Option<Value>,
    #[serde(default)]
    pub divisor: Vec<String>,
    pub max_height: Option<i64>,
    pub threshold: Option<String>,
    pub point: Option<String>,
    pub op: Option<String>,
    pub candidates: Option<String>,
    pub context: Option<Value>,
    #[serde(default)]
    pub over_cone: bool,
    pub space: Option<String>,
    #[serde(default)]
    pub count: bool,
    pub near: Option<String>,
    pub metric: Option<String>,
    pub class: Option<String>,
    pub bidegree: Option<String>,
    pub grid_height: Option<i64>,
    pub suite: Option<String>,
    pub samples: Option<usize>,
    pub format: Option<String>,
    pub out: Option<String>,
}

impl Params {
    pub fn from_scenario(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))
    }

    /// Fields set in `over` replace those here.
    pub fn overlay(mut self, over: Params) -> Params {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(task, preset, model, max_height, threshold, point, op, candidates, context, space, near, metric, class,
              bidegree, grid_height, suite, samples, format, out);
        if !over.divisor.is_empty() {
            self.divisor = over.divisor;
        }
        self.over_cone |= over.over_cone;
        self.count |= over.count;
        self
    }

    pub fn task(&self) -> Result<Task> {
        self.task
            .as_deref()
            .ok_or_else(|| Error::Parse("task: missing (give a subcommand or a scenario task)".into()))?
            .parse()
    }

    pub fn format(&self) -> Result<Format> {
        self.format.as_deref().map_or(Ok(Format::Json), str::parse)
    }

    fn preset(&self) -> Result<Preset> {
        preset(self.preset.as_deref().ok_or_else(|| Error::Parse("preset: missing".into()))?)
    }

    fn max_height(&self, default: i64) -> Result<i64> {
        let b = self.max_height.unwrap_or(default);
        if b < 1 {
            return Err(Error::InvalidParameter(format!("max_height: must be at least 1, got {b}")));
        }
        Ok(b)
    }
}

/// Output of a run. `ok` is false when a check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub ok: bool,
}

impl Report {
    fn new(json: Value) -> Self {
        Report { json, csv: None, ok: true }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(to_sorted_json(&self.json)),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| Error::Parse("format: csv is not available for this task".into())),
        }
    }
}

pub fn run(params: &Params) -> Result<Report> {
    match params.task()? {
        Task::Lattice => run_lattice(params),
        Task::Cones => run_cones(params),
        Task::Predict => run_predict(params),
        Task::Enumerate => run_enumerate(params),
        Task::Alpha => run_alpha(params),
        Task::Verify => run_verify(params),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn class_json(p: &Preset, d: &DivisorClass) -> Value {
    json!({"coeffs": q_vec_json(&d.coeffs), "expr": format_combination(p.lattice.labels(), &d.coeffs)})
}

fn rays_report(p: &Preset, cone: &Cone) -> Report {
    let labels = p.lattice.labels();
    let rays: Vec<Value> = cone
        .generators()
        .iter()
        .map(|g| json!({"coeffs": big_vec_json(g), "expr": format_combination(labels, &crate::arith::to_q(g))}))
        .collect();
    let mut csv = labels.iter().map(|l| csv_escape(l)).collect::<Vec<_>>().join(",");
    csv.push('\n');
    for g in cone.generators() {
        csv.push_str(&g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }
    Report::new(json!({"preset": p.name, "basis": labels, "count": rays.len(), "rays": rays})).with_csv(csv)
}

fn run_lattice(params: &Params) -> Result<Report> {
    let p = params.preset()?;
    let lat = &p.lattice;
    let (pos, neg, zero) = lat.signature();
    let names: Vec<&str> = p.classes.keys().map(|s| s.as_str()).collect();
    let table = crate::nslattice::intersection_table(&p, &names)?;
    let dual: Vec<Value> = lat.dual_basis()?.iter().map(|v| q_vec_json(v)).collect();
    let mut divisors = Vec::new();
    for expr in &params.divisor {
        let d = p.parse(expr).map_err(|e| Error::Parse(format!("divisor: {e}")))?;
        let self_int = d.dot(&d)?;
        let pairings: BTreeMap<String, String> = p
            .classes
            .keys()
            .map(|l| Ok((l.clone(), fmt_q(&p.class(l)?.dot(&d)?))))
            .collect::<Result<_>>()?;
        divisors.push(json!({
            "input": expr,
            "class": class_json(&p, &d),
            "self_intersection": fmt_q(&self_int),
            "pairings": pairings,
        }));
    }
    let mut out = json!({
        "preset": p.name,
        "lattice": lat.to_json(),
        "determinant": lat.determinant().to_string(),
        "signature": [pos, neg, zero],
        "hodge": lat.is_hodge(),
        "dual_basis": dual,
        "classes": p.classes.iter().map(|(l, v)| (l.clone(), big_vec_json(v))).collect::<serde_json::Map<_, _>>(),
        "table": {"names": names, "rows": table.iter().map(|r| big_vec_json(r)).collect::<Vec<_>>()},
        "effective": p.effective,
        "nef": p.nef,
        "divisors": divisors,
    });
    if let Some(t) = &p.fiber_tree {
        out["fiber_tree"] = t.to_json();
    }
    let mut csv = String::from("row");
    for n in &names {
        csv.push(',');
        csv.push_str(&csv_escape(n));
    }
    csv.push('\n');
    for (n, r) in names.iter().zip(&table) {
        csv.push_str(&csv_escape(n));
        for x in r {
            csv.push_str(&format!(",{x}"));
        }
        csv.push('\n');
    }
    Ok(Report::new(out).with_csv(csv))
}

fn run_cones(params: &Params) -> Result<Report> {
    let p = params.preset()?;
    let eff = Cone::new(p.lattice.clone(), p.effective_vectors())?;
    let nef = Cone::new(p.lattice.clone(), p.nef_vectors())?;
    let op = params.op.as_deref().unwrap_or("dual");
    match op {
        "dual" => Ok(rays_report(&p, &eff.dual()?)),
        "effective" => Ok(rays_report(&p, &eff.extremal_rays())),
        "nef" => {
            let mut r = rays_report(&p, &nef.extremal_rays());
            r.json["dual_pair"] = json!(is_dual_pair(&eff, &nef)?);
            Ok(r)
        }
        "contains" => {
            if params.divisor.is_empty() {
                return Err(Error::Parse("divisor: cones contains needs at least one --divisor".into()));
            }
            let mut rows = Vec::new();
            let mut csv = String::from("divisor,effective,nef\n");
            for expr in &params.divisor {
                let d = p.parse(expr).map_err(|e| Error::Parse(format!("divisor: {e}")))?;
                let me = eff.membership(&d.coeffs)?;
                let mn = nef.membership(&d.coeffs)?;
                csv.push_str(&format!("{},{},{}\n", csv_escape(expr), me.contained, mn.contained));
                rows.push(json!({
                    "input": expr,
                    "class": class_json(&p, &d),
                    "effective": me.contained,
                    "nef": mn.contained,
                }));
            }
            Ok(Report::new(json!({"preset": p.name, "divisors": rows})).with_csv(csv))
        }
        "subdivide" => {
            let ctx = context(params, &p)?;
            subdivide_report(&p, &ctx, &nef)
        }
        _ => Err(Error::Parse(format!("op: unknown cones operation {op:?}"))),
    }
}

/// "label=expr[:mult],..."
pub fn parse_candidates(p: &Preset, s: &str) -> Result<Vec<Candidate>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|item| {
            let (label, rest) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("candidates: expected label=class in {item:?}")))?;
            let (expr, mult) = match rest.rsplit_once(':') {
                Some((e, m)) => (
                    e,
                    m.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("candidates: bad multiplicity in {item:?}")))?,
                ),
                None => (rest, 1),
            };
            let class = p.parse(expr).map_err(|e| Error::Parse(format!("candidates: {e}")))?;
            Ok(Candidate {
                label: label.trim().to_string(),
                class,
                mult,
            })
        })
        .collect()
}

fn context(params: &Params, p: &Preset) -> Result<PointContext> {
    if let Some(v) = &params.context {
        return PointContext::from_json(v, p.lattice.clone(), Some(p)).map_err(|e| Error::Parse(format!("context: {e}")));
    }
    let s = params
        .candidates
        .as_deref()
        .ok_or_else(|| Error::Parse("candidates: missing (or give a context object)".into()))?;
    let ctx = PointContext::new(p.lattice.clone(), parse_candidates(p, s)?)?;
    if p.effective.is_empty() {
        Ok(ctx)
    } else {
        ctx.with_effective(p.effective.iter().map(|l| p.class(l)).collect::<Result<_>>()?)
    }
}

fn subdivide_report(p: &Preset, ctx: &PointContext, nef: &Cone) -> Result<Report> {
    let cells = predict_over_cone(ctx, nef)?;
    let labels = p.lattice.labels();
    let mut csv = String::from("cell,candidate,winners,constant,rays\n");
    for (i, c) in cells.iter().enumerate() {
        let rays: Vec<String> = c
            .cone
            .generators()
            .iter()
            .map(|g| format_combination(labels, &crate::arith::to_q(g)))
            .collect();
        csv.push_str(&format!(
            "{i},{},{},{},{}\n",
            csv_escape(&c.candidate),
            csv_escape(&c.winners.join(" ")),
            c.constant,
            csv_escape(&rays.join(" ; "))
        ));
    }
    Ok(Report::new(json!({
        "preset": p.name,
        "context": ctx.to_json(),
        "cells": cells.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    }))
    .with_csv(csv))
}

fn run_predict(params: &Params) -> Result<Report> {
    let p = params.preset()?;
    let ctx = context(params, &p)?;
    if params.over_cone {
        let nef = Cone::new(p.lattice.clone(), p.nef_vectors())?;
        return subdivide_report(&p, &ctx, &nef);
    }
    if params.divisor.is_empty() {
        return Err(Error::Parse("divisor: predict needs --divisor or --over-cone".into()));
    }
    let mut rows = Vec::new();
    let mut csv = String::from("divisor,alpha,winners\n");
    for expr in &params.divisor {
        let d = p.parse(expr).map_err(|e| Error::Parse(format!("divisor: {e}")))?;
        let pr = predict_alpha(&ctx, &d)?;
        csv.push_str(&format!("{},{},{}\n", csv_escape(expr), fmt_q(&pr.alpha), csv_escape(&pr.winners.join(" "))));
        let mut v = pr.to_json();
        v["input"] = json!(expr);
        v["class"] = class_json(&p, &d);
        rows.push(v);
    }
    Ok(Report::new(json!({"preset": p.name, "predictions": rows})).with_csv(csv))
}

fn parse_point(s: &str, what: &str) -> Result<ProjPoint> {
    ProjPoint::parse_colon(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn run_enumerate(params: &Params) -> Result<Report> {
    let space = params.space.as_deref().unwrap_or("p1");
    let n = match space {
        "p1" => 1,
        "p2" => 2,
        _ => return Err(Error::Parse(format!("space: expected p1 or p2, got {space:?}"))),
    };
    let b = params.max_height(20)?;
    if let Some(near) = &params.near {
        if n != 2 {
            return Err(Error::Parse("near: clustering is defined on p2".into()));
        }
        let p = parse_point(near, "near")?;
        let c = match &params.threshold {
            Some(t) => parse_q(t).ok_or_else(|| Error::Parse(format!("threshold: bad rational {t:?}")))?,
            None => q(2, 1),
        };
        let pts = points_near_p2(&p, b, &c)?;
        let rep = line_cluster(&p, &pts, &c)?;
        let mut v = rep.to_json();
        v["point"] = json!(p.to_colon_string());
        v["max_height"] = json!(b);
        v["threshold"] = json!(fmt_q(&c));
        let mut csv = String::from("point\n");
        for q in &pts {
            csv.push_str(&q.to_colon_string());
            csv.push('\n');
        }
        return Ok(Report::new(v).with_csv(csv));
    }
    let count = counting_function(n, b as u64);
    if params.count {
        let csv = format!("space,max_height,count\n{space},{b},{count}\n");
        return Ok(Report::new(json!({"space": space, "max_height": b, "count": count.to_string()})).with_csv(csv));
    }
    if b > 2000 / n as i64 {
        return Err(Error::InvalidParameter(format!(
            "max_height: listing {space} points is capped at {}; use --count",
            2000 / n
        )));
    }
    let pts = if n == 1 { enumerate_p1(b) } else { enumerate_p2(b) };
    let mut csv = String::from("point,height\n");
    for q in &pts {
        csv.push_str(&format!("{},{}\n", q.to_colon_string(), q.height()));
    }
    Ok(Report::new(json!({
        "space": space,
        "max_height": b,
        "count": count.to_string(),
        "points": pts.iter().map(|q| q.to_colon_string()).collect::<Vec<_>>(),
    }))
    .with_csv(csv))
}

fn named_curve(name: &str) -> Option<(ParamCurve, ProjPoint)> {
    let p = |v: &[i64]| ProjPoint::from_i64(v).unwrap();
    Some(match name {
        "cusp" => (named::cuspidal_cubic(), p(&[1, 0])),
        "quintic_cusp" => (named::quintic_cusp(), p(&[1, 0])),
        "twisted_cubic" => (named::twisted_cubic(), p(&[1, 0])),
        "conic" => (named::conic(), p(&[1, 0])),
        _ => return None,
    })
}

fn pair(s: &str, what: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("{what}: expected two integers a,b, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn estimate_report(target: Value, f: &Frontier, b: i64, predicted: Option<Q>) -> Report {
    let est = ApproxEstimate::from_frontier(f, b as u64);
    let mut v = est.to_json();
    v["target"] = target;
    v["predicted_alpha"] = predicted.map_or(Value::Null, |a| json!(fmt_q(&a)));
    Report::new(v).with_csv(est.to_csv())
}

fn run_alpha(params: &Params) -> Result<Report> {
    if let Some(m) = &params.model {
        return alpha_model(params, &Model::from_json(m).map_err(|e| Error::Parse(format!("model: {e}")))?);
    }
    let name = params.preset.as_deref().ok_or_else(|| Error::Parse("preset: missing".into()))?;
    let metric = match params.metric.as_deref() {
        None | Some("projective") => Metric::Projective,
        Some(s) => match s.strip_prefix("chart") {
            Some(k) => Metric::AffineChart(k.parse().map_err(|_| Error::Parse(format!("metric: bad chart {s:?}")))?),
            None => return Err(Error::Parse(format!("metric: expected projective or chartK, got {s:?}"))),
        },
    };
    match name {
        "line" | "p1" => {
            let b = params.max_height(10_000)?;
            let p = parse_point(params.point.as_deref().unwrap_or("0:1"), "point")?;
            let f = p1_frontier(&p, b, metric)?;
            let floor = approx::min_dist_height(&p, b)?;
            let mut r = estimate_report(json!({"space": "p1", "point": p.to_colon_string()}), &f, b, Some(q(1, 1)));
            r.json["dist_height_floor"] = floor.map_or(Value::Null, |d| json!(fmt_q(&d)));
            Ok(r)
        }
        "p2" => {
            let b = params.max_height(200)?;
            let p = parse_point(params.point.as_deref().unwrap_or("0:0:1"), "point")?;
            let f = p2_frontier(&p, b)?;
            Ok(estimate_report(json!({"space": "p2", "point": p.to_colon_string()}), &f, b, Some(q(1, 1))))
        }
        "product" => {
            let b = params.max_height(200)?;
            let (a, bb) = params.bidegree.as_deref().map_or(Ok((1, 1)), |s| pair(s, "bidegree"))?;
            let (ua, ub) = (
                u32::try_from(a).map_err(|_| Error::Parse("bidegree: negative entry".into()))?,
                u32::try_from(bb).map_err(|_| Error::Parse("bidegree: negative entry".into()))?,
            );
            let pt = params.point.as_deref().unwrap_or("0:1;0:1");
            let (s1, s2) = pt
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("point: expected x0:x1;y0:y1, got {pt:?}")))?;
            let (p1, p2) = (parse_point(s1, "point")?, parse_point(s2, "point")?);
            let r = product_barrier(&p1, &p2, b, (ua, ub))?;
            Ok(Report::new(json!({
                "target": {"space": "p1xp1", "point": pt, "bidegree": [a, bb]},
                "max_height": b,
                "min_off_axis_gamma": r.min_off_axis_gamma,
                "argmin_heights": [r.argmin_heights.0, r.argmin_heights.1],
                "axis_max_dist_height": fmt_q(&r.axis_max_dist_height),
                "axis_min_dist_height": fmt_q(&r.axis_min_dist_height),
            })))
        }
        _ if name.starts_with("hirzebruch:") => {
            let n: u32 = name["hirzebruch:".len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("preset: bad Hirzebruch index in {name:?}")))?;
            let (a, b) = params.class.as_deref().map_or(Ok((n as i64 + 1, 1)), |s| pair(s, "class"))?;
            let m = Model::Hirzebruch { n, a, b };
            alpha_model(params, &m)
        }
        _ => {
            let (curve, default_t0) =
                named_curve(name).ok_or_else(|| Error::UnknownPreset(format!("alpha preset {name:?}")))?;
            let b = params.max_height(1000)?;
            let t0 = match &params.point {
                Some(s) => parse_point(s, "point")?,
                None => default_t0,
            };
            let extra = ParamCurve::best_sequence_parameters(&t0, b as usize);
            let f = curve_frontier(&curve, &t0, b, &extra)?;
            let predicted = curve.alpha_along(&t0, 1);
            let target = json!({
                "curve": name,
                "parameter": t0.to_colon_string(),
                "point": curve.evaluate(&t0).to_colon_string(),
                "degree": curve.degree(),
                "branch_multiplicity": curve.branch_multiplicity(&t0),
            });
            Ok(estimate_report(target, &f, b, Some(predicted)))
        }
    }
}

fn alpha_model(params: &Params, m: &Model) -> Result<Report> {
    match m {
        Model::Hirzebruch { n, a, b } => {
            if !(*b > 0 && *a > *n as i64 * *b) {
                return Err(Error::NotAmple(format!("{a}F + {b}S on H_{n}")));
            }
            let pt = params.point.as_deref().unwrap_or("1:0;1:1");
            let (s1, s2) = pt
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("point: expected x1:x2;y1:y2, got {pt:?}")))?;
            let ints = |s: &str| -> Result<[i64; 2]> {
                let v: Vec<i64> = s
                    .split(':')
                    .map(|x| x.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("point: bad coordinates {s:?}")))?;
                <[i64; 2]>::try_from(v).map_err(|_| Error::Parse(format!("point: need two coordinates in {s:?}")))
            };
            let p = HirzebruchPoint::from_i64(*n, ints(s1)?, ints(s2)?)?;
            let fb = params.max_height(500)?;
            let gb = params.grid_height.unwrap_or(8);
            let f = hirzebruch_frontier(&p, *a, *b, fb, gb)?;
            // The fibre through p has degree b; sections through p have
            // degree at least a - n b + n b = a >= b.
            let target = json!({"space": format!("hirzebruch:{n}"), "class": [a, b], "point": pt});
            Ok(estimate_report(target, &f, fb, Some(Q::from_integer(BigInt::from(*b)))))
        }
        Model::Product { bidegree } => {
            let mut p = params.clone();
            p.preset = Some("product".into());
            p.bidegree = Some(format!("{},{}", bidegree.0, bidegree.1));
            p.model = None;
            run_alpha(&p)
        }
        Model::BlowupP2 { system } => {
            let b = params.max_height(30)?;
            let p = parse_point(params.point.as_deref().unwrap_or("1:2:3"), "point")?;
            let f = embedded_frontier(system, &p, b)?;
            let target = json!({"space": "blowup_p2", "system": system.to_json(), "point": p.to_colon_string()});
            Ok(estimate_report(target, &f, b, None))
        }
    }
}

/// Frontier of the image of p under a linear system, over plane points of
/// height <= b outside the base locus.
pub fn embedded_frontier(system: &LinearSystem, p: &ProjPoint, b: i64) -> Result<Frontier> {
    let target = system.embed(p)?;
    let hp = target.height();
    let mut f = Frontier::new();
    for q in enumerate_p2(b) {
        let Ok(img) = system.embed(&q) else { continue };
        let m = max_minor(target.coords(), img.coords());
        if m.is_zero() {
            continue;
        }
        let h = img.height();
        f.insert(img, Q::new(m, &hp * &h), h);
    }
    Ok(f)
}

fn run_verify(params: &Params) -> Result<Report> {
    let suite_name = params.suite.as_deref().unwrap_or("fixtures");
    let samples = params.samples.unwrap_or(fixtures::SAMPLES);
    let checks: Vec<Check> = match suite_name {
        "fixtures" | "paper-fixtures" | "all" => {
            let mut v = suite::duality_checks();
            v.extend(suite::table_checks());
            v.extend(suite::pairing_checks());
            v.extend(suite::tree_checks(50, suite::TREE_SEED));
            v.extend(suite::predictor_checks(samples));
            v.push(suite::preset_coverage());
            v
        }
        "duality" => suite::duality_checks(),
        "tables" => suite::table_checks(),
        "pairings" => suite::pairing_checks(),
        "trees" => suite::tree_checks(50, suite::TREE_SEED),
        "predictor" => suite::predictor_checks(samples),
        _ => return Err(Error::Parse(format!("suite: unknown suite {suite_name:?}"))),
    };
    let errata: Vec<Value> = if matches!(suite_name, "fixtures" | "paper-fixtures" | "all" | "predictor") {
        fixtures::check_errata()?
            .into_iter()
            .map(|(o, note)| json!({"fixture": o.name, "printed_generators_fail": !o.passed, "note": note}))
            .collect()
    } else {
        Vec::new()
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut csv = String::from("group,name,passed,detail\n");
    for c in &checks {
        csv.push_str(&format!("{},{},{},{}\n", c.group, csv_escape(&c.name), c.passed, csv_escape(&c.detail)));
    }
    let mut r = Report::new(json!({
        "suite": suite_name,
        "total": checks.len(),
        "failed": failed,
        "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "errata": errata,
    }))
    .with_csv(csv);
    r.ok = failed == 0;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(task: &str) -> Params {
        Params {
            task: Some(task.into()),
            ..Default::default()
        }
    }

    #[test]
    fn dual_of_blowup4_has_ten_rays() {
        let mut p = params("cones");
        p.preset = Some("blowup_p2:4".into());
        let r = run(&p).unwrap();
        assert_eq!(r.json["count"], json!(10));
    }

    #[test]
    fn predict_from_candidates() {
        let mut p = params("predict");
        p.preset = Some("blowup_p2:2".into());
        p.candidates = Some("E1=E1,S=L-E1-E2,L1=L-E1".into());
        p.divisor = vec!["3L-E1-E2".into()];
        let r = run(&p).unwrap();
        let pr = &r.json["predictions"][0];
        assert_eq!(pr["alpha"], json!("1"));
        assert_eq!(pr["winners"], json!(["E1", "S"]));
    }

    #[test]
    fn scenario_errors_name_the_field() {
        let e = Params::from_scenario(r#"{"task": "alpha", "max_heigth": 3}"#).unwrap_err();
        assert!(e.to_string().contains("max_heigth"), "{e}");
        let p = Params::from_scenario(r#"{"task": "predict", "preset": "blowup_p2:2"}"#).unwrap();
        let e = run(&p).unwrap_err();
        assert!(e.to_string().contains("candidates"), "{e}");
    }

    #[test]
    fn overlay_prefers_flags() {
        let base = Params::from_scenario(r#"{"task": "alpha", "preset": "cusp", "max_height": 50}"#).unwrap();
        let over = Params {
            max_height: Some(60),
            ..Default::default()
        };
        let p = base.overlay(over);
        assert_eq!(p.max_height, Some(60));
        assert_eq!(p.preset.as_deref(), Some("cusp"));
    }

    #[test]
    fn cusp_alpha_report() {
        let mut p = params("alpha");
        p.preset = Some("cusp".into());
        p.max_height = Some(200);
        let r = run(&p).unwrap();
        assert_eq!(r.json["predicted_alpha"], json!("3/2"));
        let g = r.json["tail_median_gamma"].as_f64().unwrap();
        assert!((g - 1.5).abs() < 0.1, "{g}");
        assert!(r.render(Format::Csv).unwrap().starts_with("point,"));
    }

    #[test]
    fn counting_report() {
        let mut p = params("enumerate");
        p.space = Some("p2".into());
        p.max_height = Some(3);
        let r = run(&p).unwrap();
        assert_eq!(r.json["points"].as_array().unwrap().len().to_string(), r.json["count"].as_str().unwrap());
    }
}
