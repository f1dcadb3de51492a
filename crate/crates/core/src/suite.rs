//! Exact fixture checks shared by `rapprox verify` and the acceptance tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::big;
use crate::cones::{is_dual_pair, Cone};
use crate::error::Result;
use crate::fixtures;
use crate::nslattice::{alpha_label, intersection_table, preset, FiberTree, PRESET_NAMES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(group: &str, name: String, passed: bool, detail: String) -> Self {
        Check {
            group: group.to_string(),
            name,
            passed,
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"group": self.group, "name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

fn err_check(group: &str, name: String, e: crate::Error) -> Check {
    Check::new(group, name, false, e.to_string())
}

/// (preset, expected number of nef rays).
pub fn duality_presets() -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = Vec::new();
    for n in 0..=5 {
        v.push((format!("hirzebruch:{n}"), 2));
    }
    for n in 1..=6 {
        for k in 0..n {
            v.push((format!("simplefibres:{n},{k}"), 1 + (1 << k)));
        }
    }
    v.push(("blowup_p2:2".into(), 3));
    v.push(("blowup_p2:3".into(), 5));
    v.push(("case1:1".into(), 5));
    v.push(("case1:2".into(), 5));
    for n in 1..=4 {
        v.push((format!("case2:{n}"), 4));
    }
    for n in 2..=4 {
        v.push((format!("case3:{n}"), 4));
    }
    for n in 1..=4 {
        v.push((format!("case3_multiple:{n}"), 4));
    }
    v.push(("blowup_p2:4".into(), 10));
    v.push(("blowup_p2:5".into(), 26));
    v.push(("k3_quartic_line".into(), 2));
    v
}

/// Effective and nef generators are dual cones, with the expected ray count.
pub fn duality_checks() -> Vec<Check> {
    duality_presets()
        .into_iter()
        .map(|(name, rays)| {
            let run = || -> Result<Check> {
                let p = preset(&name)?;
                let eff = Cone::new(p.lattice.clone(), p.effective_vectors())?;
                let nef = Cone::new(p.lattice.clone(), p.nef_vectors())?;
                let dual = is_dual_pair(&eff, &nef)?;
                let got = eff.dual()?.generators().len();
                Ok(Check::new(
                    "duality",
                    name.clone(),
                    dual && got == rays,
                    format!("dual pair {dual}, {got} nef rays (expected {rays})"),
                ))
            };
            run().unwrap_or_else(|e| err_check("duality", name.clone(), e))
        })
        .collect()
}

fn table(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect()
}

/// (preset, row/column classes, expected table).
pub fn table_fixtures() -> Vec<(String, Vec<String>, Vec<Vec<BigInt>>)> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut out = Vec::new();
    out.push((
        "blowup_p2:4".to_string(),
        names(&["L", "L1", "L2", "L3", "L4", "D1", "D2", "D3", "D4", "D"]),
        table(&[
            &[1, 1, 1, 1, 1, 2, 2, 2, 2, 2],
            &[1, 0, 1, 1, 1, 2, 1, 1, 1, 1],
            &[1, 1, 0, 1, 1, 1, 2, 1, 1, 1],
            &[1, 1, 1, 0, 1, 1, 1, 2, 1, 1],
            &[1, 1, 1, 1, 0, 1, 1, 1, 2, 1],
            &[2, 2, 1, 1, 1, 1, 2, 2, 2, 1],
            &[2, 1, 2, 1, 1, 2, 1, 2, 2, 1],
            &[2, 1, 1, 2, 1, 2, 2, 1, 2, 1],
            &[2, 1, 1, 1, 2, 2, 2, 2, 1, 1],
            &[2, 1, 1, 1, 1, 1, 1, 1, 1, 0],
        ]),
    ));
    out.push((
        "case1:2".to_string(),
        names(&["F", "D2", "D1", "D1'", "D0"]),
        table(&[
            &[0, 1, 1, 1, 1],
            &[1, 2, 2, 2, 2],
            &[1, 2, 1, 2, 1],
            &[1, 2, 2, 1, 1],
            &[1, 2, 1, 1, 0],
        ]),
    ));
    out.push((
        "blowup_p2:3".to_string(),
        names(&["L", "L1", "L2", "L3", "F"]),
        table(&[
            &[1, 1, 1, 1, 2],
            &[1, 0, 1, 1, 1],
            &[1, 1, 0, 1, 1],
            &[1, 1, 1, 0, 1],
            &[2, 1, 1, 1, 1],
        ]),
    ));
    let fd = names(&["F", "D1", "D2", "D3"]);
    for n in 1..=4i64 {
        out.push((
            format!("case2:{n}"),
            fd.clone(),
            table(&[&[0, 1, 1, 1], &[1, n, n, n], &[1, n, n - 1, n], &[1, n, n, n - 1]]),
        ));
    }
    for n in 2..=4i64 {
        out.push((
            format!("case3:{n}"),
            fd.clone(),
            table(&[&[0, 1, 1, 1], &[1, n - 2, n - 1, n], &[1, n - 1, n - 1, n], &[1, n, n, n]]),
        ));
    }
    for n in 1..=4i64 {
        out.push((
            format!("case3_multiple:{n}"),
            fd.clone(),
            table(&[
                &[0, 1, 2, 1],
                &[1, n, 2 * n, n],
                &[2, 2 * n, 4 * n - 2, 2 * n - 1],
                &[1, n, 2 * n - 1, n - 1],
            ]),
        ));
    }
    out
}

pub fn table_checks() -> Vec<Check> {
    table_fixtures()
        .into_iter()
        .map(|(name, labels, want)| {
            let p = match preset(&name) {
                Ok(p) => p,
                Err(e) => return err_check("tables", name, e),
            };
            let l: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
            match intersection_table(&p, &l) {
                Ok(got) => {
                    let ok = got == want;
                    let detail = if ok {
                        format!("{}x{} exact", l.len(), l.len())
                    } else {
                        format!("got {got:?}")
                    };
                    Check::new("tables", format!("{name} [{}]", labels.join(",")), ok, detail)
                }
                Err(e) => err_check("tables", name, e),
            }
        })
        .collect()
}

/// D_a.D_b = n - a.b on simplefibres(n, k) for every k < n <= 6.
pub fn pairing_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 2..=6i64 {
        for k in 1..(n as usize) {
            let name = format!("simplefibres:{n},{k}");
            let p = match preset(&name) {
                Ok(p) => p,
                Err(e) => {
                    out.push(err_check("pairings", name, e));
                    continue;
                }
            };
            let alphas: Vec<Vec<bool>> = (0..(1usize << k))
                .map(|mask| (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect())
                .collect();
            let mut bad = None;
            'outer: for a in &alphas {
                for b in &alphas {
                    let va = &p.classes[&alpha_label(a)];
                    let vb = &p.classes[&alpha_label(b)];
                    let ab = a.iter().zip(b).filter(|(x, y)| **x && **y).count() as i64;
                    if p.lattice.pair(va, vb) != big(n - ab) {
                        bad = Some(format!("{} . {}", alpha_label(a), alpha_label(b)));
                        break 'outer;
                    }
                }
            }
            let pairs = alphas.len() * alphas.len();
            out.push(Check::new(
                "pairings",
                name,
                bad.is_none(),
                bad.unwrap_or_else(|| format!("{pairs} pairs exact")),
            ));
        }
    }
    out
}

/// A fibre tree built from H_n by `m - 1` random blowups, each at a general
/// point of a component or at the meeting point of two components.
pub fn random_fiber_tree<R: Rng>(rng: &mut R, n: i64, m: usize) -> Result<FiberTree> {
    let mut t = FiberTree::hirzebruch(n);
    while t.len() < m {
        let between = t.len() > 1 && rng.gen_bool(0.5);
        if between {
            let i = rng.gen_range(1..t.len());
            let j = t.nodes[i].parent.expect("non-root");
            t = t.blow_up_between(i, j)?;
        } else {
            let i = rng.gen_range(0..t.len());
            t = t.blow_up_on(i);
        }
    }
    t.validate()?;
    Ok(t)
}

pub const TREE_SEED: u64 = 0x7ee5;

/// Multiplicity identity on every adjacent comparable pair, and the pullback
/// identity for every contractible component, on `count` random trees.
pub fn tree_checks(count: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|idx| {
            let m = rng.gen_range(2..=8usize);
            let n = m as i64 + rng.gen_range(1..=3i64);
            let name = format!("tree {idx} (m={m}, n={n})");
            let run = |rng: &mut ChaCha8Rng| -> Result<Check> {
                let t = random_fiber_tree(rng, n, m)?;
                let mut pairs = 0;
                let mut downs = 0;
                for i in 1..t.len() {
                    let j = t.nodes[i].parent.expect("non-root");
                    let r = t.verify_multiplegens(i, j)?;
                    pairs += 1;
                    if !r.holds || !r.adjacent {
                        return Ok(Check::new("trees", name.clone(), false, format!("pair ({i}, {j}) fails")));
                    }
                }
                for k in t.contractible() {
                    downs += 1;
                    if !t.verify_inductive_step(k)? {
                        return Ok(Check::new("trees", name.clone(), false, format!("blowdown of {k} fails")));
                    }
                }
                let mults = t.compute_fiber_class()?;
                Ok(Check::new(
                    "trees",
                    name.clone(),
                    true,
                    format!(
                        "{pairs} adjacent pairs, {downs} blowdowns, multiplicities {:?}",
                        mults.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                    ),
                ))
            };
            run(&mut rng).unwrap_or_else(|e| err_check("trees", name.clone(), e))
        })
        .collect()
}

pub fn predictor_checks(samples: usize) -> Vec<Check> {
    match fixtures::check_all(samples) {
        Ok(v) => v
            .into_iter()
            .map(|o| {
                let detail = if o.passed {
                    format!("{} samples", o.samples)
                } else {
                    o.detail
                };
                Check::new("predictor", o.name, o.passed, detail)
            })
            .collect(),
        Err(e) => vec![err_check("predictor", "fixture table".into(), e)],
    }
}

/// Families of presets touched by the exact suites.
pub fn preset_coverage() -> Check {
    let mut used: BTreeSet<String> = BTreeSet::new();
    let family = |s: &str| s.split(':').next().unwrap_or(s).to_string();
    for (p, _) in duality_presets() {
        used.insert(family(&p));
    }
    for (p, _, _) in table_fixtures() {
        used.insert(family(&p));
    }
    for f in fixtures::cone_fixtures() {
        used.insert(family(&f.preset));
    }
    used.insert("simplefibres".into());
    let missing: Vec<String> = PRESET_NAMES
        .iter()
        .map(|s| family(s))
        .filter(|f| !used.contains(f))
        .collect();
    Check::new(
        "coverage",
        "every preset family exercised".into(),
        missing.is_empty(),
        if missing.is_empty() {
            format!("{} families", used.len())
        } else {
            format!("missing {missing:?}")
        },
    )
}

/// Everything above, in a fixed order.
pub fn full_suite() -> Vec<Check> {
    let mut v = duality_checks();
    v.extend(table_checks());
    v.extend(pairing_checks());
    v.extend(tree_checks(50, TREE_SEED));
    v.extend(predictor_checks(fixtures::SAMPLES));
    v.push(preset_coverage());
    v
}
