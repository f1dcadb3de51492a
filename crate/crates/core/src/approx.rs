//! Rational points of bounded height, counting functions, and empirical
//! approximation exponents read off the record frontier.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{big, fmt_q, ln_big, ln_q, Q};
use crate::error::{Error, Result};
use crate::projective::{distance, line_through, max_minor, normalize, LineInP2, ProjPoint};
use crate::surfaces::{cox_values, HirzebruchPoint};
use crate::ratcurves::ParamCurve;

fn gcd2(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn canonical_first_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Canonical points of P^1 with height exactly h, in a fixed order.
pub fn p1_shell(h: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    if h < 1 {
        return out;
    }
    for a in 0..=h {
        if a == h {
            for b in -h..=h {
                if gcd2(a, b) == 1 {
                    out.push([a, b]);
                }
            }
        } else {
            for b in [h, -h] {
                if canonical_first_positive(&[a, b]) && gcd2(a, b) == 1 {
                    out.push([a, b]);
                }
            }
        }
    }
    out
}

/// Canonical points of P^2 with height exactly h, in a fixed order.
pub fn p2_shell(h: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    if h < 1 {
        return out;
    }
    for x in 0..=h {
        for y in -h..=h {
            let edge = x == h || y.abs() == h;
            let zs: Vec<i64> = if edge { (-h..=h).collect() } else { vec![-h, h] };
            for z in zs {
                if !canonical_first_positive(&[x, y, z]) {
                    continue;
                }
                if gcd2(gcd2(x, y), z) == 1 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Every canonical point of P^1 with height at most b, shell by shell.
pub fn enumerate_p1(b: i64) -> Vec<ProjPoint> {
    (1..=b)
        .flat_map(p1_shell)
        .map(|v| ProjPoint::from_canonical(v.iter().map(|&x| big(x)).collect()))
        .collect()
}

pub fn enumerate_p2(b: i64) -> Vec<ProjPoint> {
    (1..=b)
        .flat_map(p2_shell)
        .map(|v| ProjPoint::from_canonical(v.iter().map(|&x| big(x)).collect()))
        .collect()
}

fn mobius_table(b: usize) -> Vec<i8> {
    let mut mu = vec![1i8; b + 1];
    let mut is_comp = vec![false; b + 1];
    let mut primes = Vec::new();
    if b >= 1 {
        mu[0] = 0;
    }
    for i in 2..=b {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > b {
                break;
            }
            is_comp[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// N(B) = #{P in P^n(Q) : H(P) <= B}, from sum_d mu(d) ((2[B/d]+1)^(n+1) - 1) / 2.
pub fn counting_function(n: usize, b: u64) -> BigInt {
    let mu = mobius_table(b as usize);
    let mut total = BigInt::zero();
    for d in 1..=b {
        let m = mu[d as usize];
        if m == 0 {
            continue;
        }
        let side = big(2 * (b / d) as i64 + 1);
        let boxcount = (num_traits::pow(side, n + 1) - BigInt::one()) / 2;
        if m > 0 {
            total += boxcount;
        } else {
            total -= boxcount;
        }
    }
    total
}

/// The same count by walking the shells.
pub fn counting_by_enumeration(n: usize, b: i64) -> Result<u64> {
    match n {
        1 => Ok((1..=b).into_par_iter().map(|h| p1_shell(h).len() as u64).sum()),
        2 => Ok((1..=b).into_par_iter().map(|h| p2_shell(h).len() as u64).sum()),
        _ => Err(Error::InvalidParameter("enumeration supports P^1 and P^2".into())),
    }
}

/// Log-log slopes of two counting functions over the top half of a ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub slope_a: f64,
    pub slope_b: f64,
    /// The first set grows faster by more than 0.5 in the exponent.
    pub a_dominates: bool,
    pub b_dominates: bool,
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

pub fn growth_ratio(ladder: &[u64], counts_a: &[u64], counts_b: &[u64]) -> Result<GrowthReport> {
    if ladder.len() < 4 {
        return Err(Error::Insufficient(format!(
            "growth ladder needs at least 4 rungs, got {}",
            ladder.len()
        )));
    }
    if counts_a.len() != ladder.len() || counts_b.len() != ladder.len() {
        return Err(Error::DimensionMismatch(counts_a.len().min(counts_b.len()), ladder.len()));
    }
    let start = ladder.len() / 2;
    let xs: Vec<f64> = ladder[start..].iter().map(|&b| (b as f64).ln()).collect();
    let slope = |c: &[u64]| -> Result<f64> {
        let ys: Vec<f64> = c[start..].iter().map(|&v| (v.max(1) as f64).ln()).collect();
        ls_slope(&xs, &ys).ok_or_else(|| Error::Insufficient("ladder rungs must differ".into()))
    };
    let sa = slope(counts_a)?;
    let sb = slope(counts_b)?;
    Ok(GrowthReport {
        slope_a: sa,
        slope_b: sb,
        a_dominates: sa - sb > 0.5,
        b_dominates: sb - sa > 0.5,
    })
}

/// One record of the frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordPoint {
    pub point: ProjPoint,
    pub distance: Q,
    pub height: BigInt,
    pub neg_log_dist: f64,
    pub log_height: f64,
    pub gamma: f64,
}

/// Pareto-minimal (distance, height) pairs, keyed by height. Merging is
/// order-insensitive except for exact ties, where the earlier entry stays.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Frontier {
    entries: BTreeMap<BigInt, (Q, ProjPoint)>,
}

impl Frontier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest distance seen among heights <= h.
    pub fn best_up_to(&self, h: &BigInt) -> Option<&Q> {
        self.entries.range(..=h.clone()).next_back().map(|(_, (d, _))| d)
    }

    /// Add a point at distance d in (0, 1) and height h > 1. Returns whether
    /// it joined the frontier.
    pub fn insert(&mut self, point: ProjPoint, d: Q, h: BigInt) -> bool {
        if !d.is_positive() || d >= Q::one() || h <= BigInt::one() {
            return false;
        }
        if let Some(best) = self.best_up_to(&h) {
            if *best <= d {
                return false;
            }
        }
        let dominated: Vec<BigInt> = self
            .entries
            .range(h.clone()..)
            .take_while(|(_, (d2, _))| *d2 >= d)
            .map(|(k, _)| k.clone())
            .collect();
        for k in dominated {
            self.entries.remove(&k);
        }
        self.entries.insert(h, (d, point));
        true
    }

    pub fn merge(&mut self, other: Frontier) {
        for (h, (d, p)) in other.entries {
            self.insert(p, d, h);
        }
    }

    pub fn records(&self) -> Vec<RecordPoint> {
        self.entries
            .iter()
            .map(|(h, (d, p))| {
                let nld = -ln_q(d);
                let lh = ln_big(h);
                RecordPoint {
                    point: p.clone(),
                    distance: d.clone(),
                    height: h.clone(),
                    neg_log_dist: nld,
                    log_height: lh,
                    gamma: lh / nld,
                }
            })
            .collect()
    }
}

/// Frontier summary. `insufficient` marks fewer than `MIN_RECORDS` records;
/// the estimators are still computed from what is there.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxEstimate {
    pub records: Vec<RecordPoint>,
    pub tail_median_gamma: Option<f64>,
    pub slope_fit: Option<f64>,
    pub max_height: u64,
    pub insufficient: bool,
}

pub const MIN_RECORDS: usize = 8;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

impl ApproxEstimate {
    pub fn from_frontier(f: &Frontier, max_height: u64) -> Self {
        let records = f.records();
        let n = records.len();
        if n == 0 {
            return ApproxEstimate {
                records,
                tail_median_gamma: None,
                slope_fit: None,
                max_height,
                insufficient: true,
            };
        }
        let k = n.div_ceil(4);
        let tail = median(records[n - k..].iter().map(|r| r.gamma).collect());
        let xs: Vec<f64> = records.iter().map(|r| r.neg_log_dist).collect();
        let ys: Vec<f64> = records.iter().map(|r| r.log_height).collect();
        // One record (or all at one distance): fall back to the ratio.
        let slope = ls_slope(&xs, &ys).unwrap_or_else(|| median(records.iter().map(|r| r.gamma).collect()));
        ApproxEstimate {
            records,
            tail_median_gamma: Some(tail),
            slope_fit: Some(slope),
            max_height,
            insufficient: n < MIN_RECORDS,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "records": self.records.iter().map(|r| json!({
                "point": r.point.to_colon_string(),
                "distance": fmt_q(&r.distance),
                "height": r.height.to_string(),
                "neg_log_dist": r.neg_log_dist,
                "log_height": r.log_height,
                "gamma": r.gamma,
            })).collect::<Vec<_>>(),
            "tail_median_gamma": self.tail_median_gamma,
            "slope_fit": self.slope_fit,
            "max_height": self.max_height,
            "insufficient": self.insufficient,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("point,dist_num,dist_den,height,neg_log_dist,log_height,gamma\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{:.12},{:.12},{:.12}\n",
                r.point.to_colon_string(),
                r.distance.numer(),
                r.distance.denom(),
                r.height,
                r.neg_log_dist,
                r.log_height,
                r.gamma
            ));
        }
        s
    }
}

/// Frontier of an arbitrary stream of (point, distance, height).
pub fn empirical_alpha<I>(stream: I, max_height: u64) -> Result<ApproxEstimate>
where
    I: IntoIterator<Item = (ProjPoint, Q, BigInt)>,
{
    let mut f = Frontier::new();
    let mut seen = false;
    for (p, d, h) in stream {
        seen = true;
        f.insert(p, d, h);
    }
    if !seen {
        return Err(Error::Insufficient("empty point stream".into()));
    }
    Ok(ApproxEstimate::from_frontier(&f, max_height))
}

/// Distance used for frontier searches on P^1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Projective,
    /// Affine chart x_c != 0.
    AffineChart(usize),
}

fn to_i64s(p: &ProjPoint) -> Result<Vec<i64>> {
    p.coords()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::InvalidParameter("coordinates too large for enumeration".into())))
        .collect()
}

// (numerator, denominator) of the distance from p to q on P^1.
fn p1_dist(p: &[i64], hp: i64, q: &[i64; 2], h: i64, metric: Metric) -> Option<(i128, i128)> {
    let num = (p[0] as i128 * q[1] as i128 - p[1] as i128 * q[0] as i128).abs();
    match metric {
        Metric::Projective => Some((num, hp as i128 * h as i128)),
        Metric::AffineChart(c) => {
            if q[c] == 0 {
                None
            } else {
                Some((num, (p[c] as i128 * q[c] as i128).abs()))
            }
        }
    }
}

fn frac_lt(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

// Walk outward from the real root r of |c t - d| over integers lo..=hi and
// return, on each side, the first t with gcd(t, h) = 1 and a nonzero value.
fn side_minima(c: i128, d: i128, lo: i64, hi: i64, h: i64, out: &mut Vec<(i64, i128)>) {
    if lo > hi {
        return;
    }
    let val = |t: i64| (c * t as i128 - d).abs();
    let ok = |t: i64| gcd2(t, h) == 1 && val(t) != 0;
    if c == 0 {
        if let Some(t) = (lo..=hi).find(|&t| ok(t)) {
            out.push((t, val(t)));
        }
        return;
    }
    // floor(d / c)
    let r = if c > 0 { d.div_euclid(c) } else { (-d).div_euclid(-c) };
    let r = r.clamp(lo as i128 - 1, hi as i128 + 1) as i64;
    let start_up = (r + 1).max(lo);
    let start_down = r.min(hi);
    if let Some(t) = (start_up..=hi).find(|&t| ok(t)) {
        out.push((t, val(t)));
    }
    if let Some(t) = (lo..=start_down).rev().find(|&t| ok(t)) {
        out.push((t, val(t)));
    }
}

/// Closest point of P^1 of height exactly h to p (by the minor
/// |p0 q1 - p1 q0|), with ties broken by the smaller coordinate vector.
pub fn p1_shell_min(p: &[i64], h: i64) -> Option<([i64; 2], i128)> {
    let (p0, p1) = (p[0] as i128, p[1] as i128);
    let hh = h as i128;
    let mut cands: Vec<([i64; 2], i128)> = Vec::new();
    // q = (h, t), |t| <= h: minor |p0 t - p1 h|.
    let mut side = Vec::new();
    side_minima(p0, p1 * hh, -h, h, h, &mut side);
    cands.extend(side.drain(..).map(|(t, v)| ([h, t], v)));
    // q = (a, h) and (a, -h), 0 < a < h (and (0, 1) when h = 1).
    let lo = if h == 1 { 0 } else { 1 };
    for s in [1i128, -1] {
        if h == 1 && s == -1 {
            continue;
        }
        // minor |p0 s h - p1 a| = |p1 a - p0 s h|.
        side_minima(p1, p0 * s * hh, lo, h - 1, h, &mut side);
        cands.extend(side.drain(..).map(|(a, v)| ([a, (s as i64) * h], v)));
    }
    cands.into_iter().min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
}

/// Record frontier for approximating p in P^1 by points of height <= b.
/// Each shell contributes only its closest point.
pub fn p1_frontier(p: &ProjPoint, b: i64, metric: Metric) -> Result<Frontier> {
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch(p.dim(), 1));
    }
    if let Metric::AffineChart(c) = metric {
        if c > 1 {
            return Err(Error::InvalidParameter("chart index out of range".into()));
        }
        if p.coords()[c].is_zero() {
            return Err(Error::ZeroChart(c));
        }
    }
    let pv = to_i64s(p)?;
    let hp = pv.iter().map(|x| x.abs()).max().unwrap();
    let best: Vec<Option<([i64; 2], (i128, i128))>> = (2..=b)
        .into_par_iter()
        .map(|h| {
            if metric == Metric::Projective {
                return p1_shell_min(&pv, h).map(|(q, m)| (q, (m, hp as i128 * h as i128)));
            }
            let mut best: Option<([i64; 2], (i128, i128))> = None;
            let mut consider = |q: [i64; 2]| {
                if let Some(d) = p1_dist(&pv, hp, &q, h, metric) {
                    if d.0 == 0 {
                        return;
                    }
                    if best.is_none_or(|(_, bd)| frac_lt(d, bd)) && gcd2(q[0], q[1]) == 1 {
                        best = Some((q, d));
                    }
                }
            };
            for a in 0..h {
                if a > 0 {
                    consider([a, -h]);
                }
                consider([a, h]);
            }
            for bb in -h..=h {
                consider([h, bb]);
            }
            best
        })
        .collect();
    let mut f = Frontier::new();
    for (q, d) in best.into_iter().flatten() {
        let pt = ProjPoint::from_i64(&q).unwrap();
        let h = pt.height();
        f.insert(pt, Q::new(big(d.0 as i64), BigInt::from(d.1)), h);
    }
    Ok(f)
}

/// Record frontier for p in P^2 over points of height <= b.
pub fn p2_frontier(p: &ProjPoint, b: i64) -> Result<Frontier> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(p.dim(), 2));
    }
    let pv = to_i64s(p)?;
    let hp = pv.iter().map(|x| x.abs()).max().unwrap() as i128;
    let minor = |q: &[i64; 3]| -> i128 {
        let (p0, p1, p2) = (pv[0] as i128, pv[1] as i128, pv[2] as i128);
        let (q0, q1, q2) = (q[0] as i128, q[1] as i128, q[2] as i128);
        (p0 * q1 - p1 * q0).abs().max((p0 * q2 - p2 * q0).abs()).max((p1 * q2 - p2 * q1).abs())
    };
    let best: Vec<Option<([i64; 3], i128)>> = (2..=b)
        .into_par_iter()
        .map(|h| {
            let mut best: Option<([i64; 3], i128)> = None;
            for q in p2_shell(h) {
                let m = minor(&q);
                if m != 0 && best.is_none_or(|(_, bm)| m < bm) {
                    best = Some((q, m));
                }
            }
            best
        })
        .collect();
    let mut f = Frontier::new();
    for (h, item) in (2..=b).zip(best) {
        if let Some((q, m)) = item {
            let pt = ProjPoint::from_i64(&q).unwrap();
            f.insert(pt, Q::new(BigInt::from(m), BigInt::from(hp * h as i128)), big(h));
        }
    }
    Ok(f)
}

/// Frontier for the image of `t0` on a rational curve, over images of all
/// parameters of height <= b together with `extra_params`.
pub fn curve_frontier(curve: &ParamCurve, t0: &ProjPoint, b: i64, extra_params: &[ProjPoint]) -> Result<Frontier> {
    if t0.dim() != 1 {
        return Err(Error::DimensionMismatch(t0.dim(), 1));
    }
    let p = curve.evaluate(t0);
    let hp = p.height();
    let eval = |t: &ProjPoint| -> Option<(ProjPoint, Q, BigInt)> {
        let q = curve.evaluate(t);
        let h = q.height();
        let m = max_minor(p.coords(), q.coords());
        if m.is_zero() {
            return None;
        }
        Some((q, Q::new(m, &hp * &h), h))
    };
    let chunks: Vec<Frontier> = (1..=b)
        .into_par_iter()
        .map(|h| {
            let mut f = Frontier::new();
            for v in p1_shell(h) {
                if let Some((q, d, hh)) = eval(&ProjPoint::from_i64(&v).unwrap()) {
                    f.insert(q, d, hh);
                }
            }
            f
        })
        .collect();
    let mut f = Frontier::new();
    for c in chunks {
        f.merge(c);
    }
    for t in extra_params {
        if let Some((q, d, h)) = eval(t) {
            f.insert(q, d, h);
        }
    }
    Ok(f)
}

/// Frontier for a point of H_n embedded by the sections of aF + bS. The
/// stream is the fibre through p (fibre parameters of height <= fibre_b)
/// together with the grid of Cox coordinates of height <= grid_b.
pub fn hirzebruch_frontier(p: &HirzebruchPoint, a: i64, b: i64, fibre_b: i64, grid_b: i64) -> Result<Frontier> {
    let target = normalize(&cox_values(p, a, b)?)?;
    let hp = target.height();
    let eval = |q: &HirzebruchPoint| -> Result<Option<(ProjPoint, Q, BigInt)>> {
        let img = normalize(&cox_values(q, a, b)?)?;
        let m = max_minor(target.coords(), img.coords());
        if m.is_zero() {
            return Ok(None);
        }
        let h = img.height();
        Ok(Some((img, Q::new(m, &hp * &h), h)))
    };
    let fib: Vec<ProjPoint> = enumerate_p1(fibre_b);
    let chunks: Vec<Result<Frontier>> = fib
        .par_chunks(256)
        .map(|ys| {
            let mut f = Frontier::new();
            for y in ys {
                let c = y.coords();
                let q = HirzebruchPoint::new(p.n, p.x.clone(), [c[0].clone(), c[1].clone()])?;
                if let Some((img, d, h)) = eval(&q)? {
                    f.insert(img, d, h);
                }
            }
            Ok(f)
        })
        .collect();
    let grid = enumerate_p1(grid_b);
    let grid_chunks: Vec<Result<Frontier>> = grid
        .par_iter()
        .map(|x| {
            let mut f = Frontier::new();
            let xc = x.coords();
            for y in &grid {
                let yc = y.coords();
                for s in [1i64, -1] {
                    let q = HirzebruchPoint::new(p.n, [xc[0].clone(), xc[1].clone()], [yc[0].clone(), &yc[1] * s])?;
                    if let Some((img, d, h)) = eval(&q)? {
                        f.insert(img, d, h);
                    }
                }
            }
            Ok(f)
        })
        .collect();
    let mut f = Frontier::new();
    for c in chunks.into_iter().chain(grid_chunks) {
        f.merge(c?);
    }
    Ok(f)
}

/// Points of P^2 with height <= b and dist(p, q) H(q) <= c, found by
/// walking the slab around p instead of the whole box.
pub fn points_near_p2(p: &ProjPoint, b: i64, c: &Q) -> Result<Vec<ProjPoint>> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(p.dim(), 2));
    }
    let pv = to_i64s(p)?;
    let hp = pv.iter().map(|x| x.abs()).max().unwrap();
    let k = pv.iter().position(|x| x.abs() == hp).unwrap();
    // Bound on every minor: dist H(q) <= c  <=>  max minor <= c H(p).
    let bound_q = c * Q::from_integer(big(hp));
    let bound = bound_q.floor().to_integer().to_i64().unwrap_or(i64::MAX / 4) as i128;
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let pk = pv[k] as i128;
    let mut out = BTreeSet::new();
    for qk in -b..=b {
        // |q_i p_k - q_k p_i| <= bound for i != k.
        let window = |i: usize| -> (i64, i64) {
            let centre = qk as i128 * pv[i] as i128;
            let lo = (centre - bound).div_euclid(pk.abs()) - 1;
            let hi = (centre + bound).div_euclid(pk.abs()) + 1;
            let (lo, hi) = if pk > 0 { (lo, hi) } else { (-hi, -lo) };
            (lo.max(-b as i128) as i64, hi.min(b as i128) as i64)
        };
        let (lo0, hi0) = window(others[0]);
        let (lo1, hi1) = window(others[1]);
        for a in lo0..=hi0 {
            for bb in lo1..=hi1 {
                let mut q = [0i64; 3];
                q[k] = qk;
                q[others[0]] = a;
                q[others[1]] = bb;
                if !canonical_first_positive(&q) || gcd2(gcd2(q[0], q[1]), q[2]) != 1 {
                    continue;
                }
                let qp = ProjPoint::from_i64(&q).unwrap();
                if qp == *p {
                    continue;
                }
                let m = max_minor(p.coords(), qp.coords());
                if Q::from_integer(m) <= bound_q {
                    out.insert(qp);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Points grouped by the line joining them to p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterReport {
    pub admitted: usize,
    pub lines: BTreeMap<LineInP2, usize>,
    pub max_plucker_height: BigInt,
}

impl ClusterReport {
    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "admitted": self.admitted,
            "line_count": self.lines.len(),
            "max_plucker_height": self.max_plucker_height.to_string(),
            "lines": self.lines.iter().map(|(l, n)| json!({
                "line": l.dual.to_colon_string(),
                "members": n,
                "plucker_height": l.plucker_height().to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn line_cluster(p: &ProjPoint, points: &[ProjPoint], c: &Q) -> Result<ClusterReport> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(p.dim(), 2));
    }
    let mut lines = BTreeMap::new();
    let mut admitted = 0;
    for q in points {
        if q == p {
            continue;
        }
        let d = distance(p, q)?;
        if d * Q::from_integer(q.height()) > *c {
            continue;
        }
        admitted += 1;
        *lines.entry(line_through(p, q)?).or_insert(0) += 1;
    }
    let max_plucker_height = lines
        .keys()
        .map(|l: &LineInP2| l.plucker_height())
        .max()
        .unwrap_or_else(BigInt::zero);
    Ok(ClusterReport {
        admitted,
        lines,
        max_plucker_height,
    })
}

/// Exact minimum of dist(p, q) H(q) over q != p in P^1 with H(q) <= b
/// passing `keep`.
pub fn dist_height_floor<F>(p: &ProjPoint, b: i64, keep: F) -> Result<Option<Q>>
where
    F: Fn(&[i64; 2]) -> bool + Sync,
{
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch(p.dim(), 1));
    }
    let pv = to_i64s(p)?;
    let hp = pv.iter().map(|x| x.abs()).max().unwrap();
    let best = (1..=b)
        .into_par_iter()
        .filter_map(|h| {
            p1_shell(h)
                .into_iter()
                .filter(|q| keep(q))
                .map(|q| (pv[0] as i128 * q[1] as i128 - pv[1] as i128 * q[0] as i128).abs())
                .filter(|&m| m != 0)
                .min()
        })
        .min();
    Ok(best.map(|m| Q::new(BigInt::from(m), big(hp))))
}

/// `dist_height_floor` without a filter, one closest point per shell.
pub fn min_dist_height(p: &ProjPoint, b: i64) -> Result<Option<Q>> {
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch(p.dim(), 1));
    }
    let pv = to_i64s(p)?;
    let hp = pv.iter().map(|x| x.abs()).max().unwrap();
    let best = (1..=b).into_par_iter().filter_map(|h| p1_shell_min(&pv, h).map(|(_, m)| m)).min();
    Ok(best.map(|m| Q::new(BigInt::from(m), big(hp))))
}

/// Smallest nonzero distance from p to a point of each height 1..=b on P^1.
pub fn p1_shell_minima(p: &ProjPoint, b: i64) -> Result<Vec<Option<Q>>> {
    let pv = to_i64s(p)?;
    if pv.len() != 2 {
        return Err(Error::DimensionMismatch(pv.len() - 1, 1));
    }
    let hp = pv.iter().map(|x| x.abs()).max().unwrap();
    Ok((1..=b)
        .into_par_iter()
        .map(|h| p1_shell_min(&pv, h).map(|(_, m)| Q::new(BigInt::from(m), big(hp) * big(h))))
        .collect())
}

/// Result of the product search on P^1 x P^1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBarrier {
    /// Least gamma over pairs with both factors different from the target.
    pub min_off_axis_gamma: f64,
    pub argmin_heights: (i64, i64),
    /// Largest dist * H along the axis sequences (q_1 = p_1 or q_2 = p_2).
    pub axis_max_dist_height: Q,
    pub axis_min_dist_height: Q,
}

/// For a fixed pair of factor heights gamma is smallest at the closest
/// points of each shell, so the search runs over height pairs only.
pub fn product_barrier(p1: &ProjPoint, p2: &ProjPoint, b: i64, bidegree: (u32, u32)) -> Result<ProductBarrier> {
    if bidegree == (0, 0) {
        return Err(Error::InvalidParameter("bidegree (0, 0)".into()));
    }
    let m1 = p1_shell_minima(p1, b)?;
    let m2 = p1_shell_minima(p2, b)?;
    let (a, bb) = (bidegree.0 as f64, bidegree.1 as f64);
    let ln: Vec<f64> = (0..=b).map(|h| if h == 0 { 0.0 } else { (h as f64).ln() }).collect();
    let nl1: Vec<Option<f64>> = m1.iter().map(|d| d.as_ref().map(|d| -ln_q(d))).collect();
    let nl2: Vec<Option<f64>> = m2.iter().map(|d| d.as_ref().map(|d| -ln_q(d))).collect();
    let (gamma, arg) = (1..=b)
        .into_par_iter()
        .filter_map(|h1| {
            let x = nl1[(h1 - 1) as usize]?;
            let mut best: Option<(f64, (i64, i64))> = None;
            for h2 in 1..=b {
                let Some(y) = nl2[(h2 - 1) as usize] else { continue };
                let nld = x.min(y);
                if nld <= 0.0 {
                    continue;
                }
                let g = (a * ln[h1 as usize] + bb * ln[h2 as usize]) / nld;
                if best.is_none_or(|(bg, _)| g < bg) {
                    best = Some((g, (h1, h2)));
                }
            }
            best
        })
        .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)))
        .ok_or_else(|| Error::Insufficient("no off-axis pairs".into()))?;
    // Axis sequences: one factor fixed at the target, the other at the
    // closest point of each shell.
    let hp1 = BigInt::from(to_i64s(p1)?.iter().map(|x| x.abs()).max().unwrap());
    let hp2 = BigInt::from(to_i64s(p2)?.iter().map(|x| x.abs()).max().unwrap());
    let mut axis: Vec<Q> = Vec::new();
    for (h, d) in (1..=b).zip(&m2) {
        if let Some(d) = d {
            if *d < Q::one() {
                let height = num_traits::pow(hp1.clone(), bidegree.0 as usize) * num_traits::pow(big(h), bidegree.1 as usize);
                axis.push(d * Q::from_integer(height));
            }
        }
    }
    for (h, d) in (1..=b).zip(&m1) {
        if let Some(d) = d {
            if *d < Q::one() {
                let height = num_traits::pow(big(h), bidegree.0 as usize) * num_traits::pow(hp2.clone(), bidegree.1 as usize);
                axis.push(d * Q::from_integer(height));
            }
        }
    }
    let axis_max = axis.iter().max().cloned().unwrap_or_else(Q::zero);
    let axis_min = axis.iter().min().cloned().unwrap_or_else(Q::zero);
    Ok(ProductBarrier {
        min_off_axis_gamma: gamma,
        argmin_heights: arg,
        axis_max_dist_height: axis_max,
        axis_min_dist_height: axis_min,
    })
}

/// Direct search over all off-axis pairs, for small b.
pub fn product_barrier_brute(p1: &ProjPoint, p2: &ProjPoint, b: i64, bidegree: (u32, u32)) -> Result<f64> {
    let s = enumerate_p1(b);
    let mut best = f64::INFINITY;
    for x in &s {
        if x == p1 {
            continue;
        }
        for y in &s {
            if y == p2 {
                continue;
            }
            let (h, d) = crate::surfaces::product_height_and_distance((p1, p2), (x, y), bidegree)?;
            if d < Q::one() && d.is_positive() {
                let g = ln_big(&h) / -ln_q(&d);
                best = best.min(g);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(v).unwrap()
    }

    #[test]
    fn small_enumerations() {
        let e1 = enumerate_p1(1);
        assert_eq!(e1, vec![pt(&[0, 1]), pt(&[1, -1]), pt(&[1, 0]), pt(&[1, 1])]);
        assert_eq!(enumerate_p2(1).len(), 13);
        assert_eq!(enumerate_p1(2).len(), 8);
        assert_eq!(counting_function(1, 1), big(4));
        assert_eq!(counting_function(2, 1), big(13));
        for b in 1..=20 {
            assert_eq!(counting_function(1, b), BigInt::from(counting_by_enumeration(1, b as i64).unwrap()));
            assert_eq!(counting_function(2, b), BigInt::from(counting_by_enumeration(2, b as i64).unwrap()));
        }
    }

    #[test]
    fn line_frontier() {
        let f = p1_frontier(&pt(&[0, 1]), 200, Metric::Projective).unwrap();
        let recs = f.records();
        assert_eq!(recs.len(), 199);
        for r in &recs {
            assert_eq!(r.distance, Q::new(BigInt::one(), r.height.clone()));
            assert!((r.gamma - 1.0).abs() < 1e-12);
        }
        let est = ApproxEstimate::from_frontier(&f, 200);
        assert!((est.tail_median_gamma.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(dist_height_floor(&pt(&[0, 1]), 100, |_| true).unwrap(), Some(q(1, 1)));
        assert_eq!(dist_height_floor(&pt(&[0, 1]), 1, |_| true).unwrap(), Some(q(1, 1)));
        assert_eq!(dist_height_floor(&pt(&[0, 1]), 100, |v| v[0].abs() >= 2).unwrap(), Some(q(2, 1)));
    }

    #[test]
    fn frontier_semantics() {
        let mut f = Frontier::new();
        assert!(f.insert(pt(&[1, 3]), q(1, 3), big(3)));
        assert!(!f.insert(pt(&[1, 5]), q(1, 2), big(5)));
        assert!(f.insert(pt(&[2, 7]), q(1, 4), big(7)));
        assert!(f.insert(pt(&[1, 2]), q(1, 5), big(2)));
        assert_eq!(f.len(), 1);
        let one = empirical_alpha(vec![(pt(&[1, 4]), q(1, 4), big(4))], 4).unwrap();
        assert_eq!(one.records.len(), 1);
        assert!(one.insufficient);
        assert!((one.tail_median_gamma.unwrap() - 1.0).abs() < 1e-12);
        assert!((one.slope_fit.unwrap() - 1.0).abs() < 1e-12);
        assert!(empirical_alpha(Vec::new(), 1).is_err());
    }

    #[test]
    fn cluster_at_origin() {
        let p = pt(&[0, 0, 1]);
        let near = points_near_p2(&p, 40, &q(2, 1)).unwrap();
        let brute: Vec<ProjPoint> = enumerate_p2(40)
            .into_iter()
            .filter(|x| *x != p && distance(&p, x).unwrap() * Q::from_integer(x.height()) <= q(2, 1))
            .collect();
        let mut brute = brute;
        brute.sort();
        assert_eq!(near, brute);
        let r = line_cluster(&p, &near, &q(2, 1)).unwrap();
        assert_eq!(r.line_count(), 8);
        assert_eq!(r.max_plucker_height, big(2));
        for l in r.lines.keys() {
            assert!(l.contains(&p));
        }
    }

    #[test]
    fn product_reduction_matches_brute_force() {
        for (a, b) in [((0, 1), (0, 1)), ((1, 2), (0, 1)), ((2, 3), (1, 5))] {
            let p1 = pt(&[a.0, a.1]);
            let p2 = pt(&[b.0, b.1]);
            let fast = product_barrier(&p1, &p2, 14, (1, 1)).unwrap().min_off_axis_gamma;
            let slow = product_barrier_brute(&p1, &p2, 14, (1, 1)).unwrap();
            assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
        }
        let r = product_barrier(&pt(&[0, 1]), &pt(&[0, 1]), 50, (1, 1)).unwrap();
        assert_eq!(r.axis_max_dist_height, q(1, 1));
        assert_eq!(r.axis_min_dist_height, q(1, 1));
        assert!(r.min_off_axis_gamma >= 2.0 - 1e-12);
    }

    #[test]
    fn growth() {
        let ladder = [10u64, 20, 40, 80, 160];
        let line: Vec<u64> = ladder.iter().map(|&b| counting_function(1, b).to_u64().unwrap()).collect();
        let plane: Vec<u64> = ladder.iter().map(|&b| counting_function(2, b).to_u64().unwrap()).collect();
        let r = growth_ratio(&ladder, &line, &plane).unwrap();
        assert!(r.b_dominates && !r.a_dominates);
        let same = growth_ratio(&ladder, &line, &line).unwrap();
        assert!(!same.a_dominates && !same.b_dominates);
        assert!(growth_ratio(&ladder[..3], &line[..3], &line[..3]).is_err());
    }

    #[test]
    fn hirzebruch_fibre_gamma() {
        let p = HirzebruchPoint::from_i64(2, [1, 0], [1, 1]).unwrap();
        let f = hirzebruch_frontier(&p, 3, 1, 500, 8).unwrap();
        let est = ApproxEstimate::from_frontier(&f, 500);
        let g = est.tail_median_gamma.unwrap();
        assert!(!est.insufficient);
        assert!((g - 1.0).abs() < 0.1, "{g}");
    }

    fn shell_min_brute(p: &[i64], h: i64) -> Option<([i64; 2], i128)> {
        p1_shell(h)
            .into_iter()
            .map(|q| (q, (p[0] as i128 * q[1] as i128 - p[1] as i128 * q[0] as i128).abs()))
            .filter(|&(_, m)| m != 0)
            .min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
    }

    #[test]
    fn shell_min_matches_brute() {
        for p in [[0, 1], [1, 0], [1, 1], [3, -7], [5, 2], [1, -1], [13, 8], [2, 9]] {
            for h in 1..=60 {
                assert_eq!(p1_shell_min(&p, h), shell_min_brute(&p, h), "p = {p:?}, h = {h}");
            }
        }
        let p = pt(&[3, -7]);
        assert_eq!(min_dist_height(&p, 80).unwrap(), dist_height_floor(&p, 80, |_| true).unwrap());
    }
}
