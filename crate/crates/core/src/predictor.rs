//! The conjectural approximation constant of a point: the least value of
//! D.C/m over a catalog of rational curves C through the point, where m is
//! the multiplicity of the branch of C at the point.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::arith::{fmt_q, qi, Q};
use crate::cones::{nakai_ample, subdivide_weighted, Cone};
use crate::error::{Error, Result};
use crate::nslattice::{DivisorClass, NSLattice, Preset};
use crate::serial::{big_vec_json, json_big_vec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub label: String,
    pub class: DivisorClass,
    pub mult: u32,
}

/// A recorded disjointness C.E = 0 between a candidate and an effective class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub candidate: String,
    pub effective: DivisorClass,
}

#[derive(Clone, Debug)]
pub struct PointContext {
    lattice: Arc<NSLattice>,
    candidates: Vec<Candidate>,
    facts: Vec<Fact>,
    effective: Option<Vec<DivisorClass>>,
}

impl PointContext {
    pub fn new(lattice: Arc<NSLattice>, candidates: Vec<Candidate>) -> Result<Self> {
        for c in &candidates {
            if c.mult == 0 {
                return Err(Error::InvalidParameter(format!("candidate {} has multiplicity 0", c.label)));
            }
            if *c.class.lattice != *lattice {
                return Err(Error::LatticeMismatch);
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(c) = candidates.iter().find(|c| !seen.insert(c.label.clone())) {
            return Err(Error::InvalidParameter(format!("duplicate candidate label {}", c.label)));
        }
        Ok(PointContext {
            lattice,
            candidates,
            facts: Vec::new(),
            effective: None,
        })
    }

    /// Candidates given as (label, class expression, multiplicity) in a
    /// preset; the preset's effective generators become the ampleness test.
    pub fn from_preset(p: &Preset, catalog: &[(&str, &str, u32)]) -> Result<Self> {
        let cands = catalog
            .iter()
            .map(|&(l, e, m)| {
                Ok(Candidate {
                    label: l.to_string(),
                    class: p.parse(e)?,
                    mult: m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ctx = PointContext::new(p.lattice.clone(), cands)?;
        if !p.effective.is_empty() {
            ctx.effective = Some(p.effective.iter().map(|l| p.class(l)).collect::<Result<_>>()?);
        }
        Ok(ctx)
    }

    pub fn with_effective(mut self, effective: Vec<DivisorClass>) -> Result<Self> {
        if effective.iter().any(|e| *e.lattice != *self.lattice) {
            return Err(Error::LatticeMismatch);
        }
        self.effective = Some(effective);
        Ok(self)
    }

    /// Record C.E = 0 for the candidate `label`; rejected if the pairing is
    /// not zero.
    pub fn add_fact(&mut self, label: &str, e: DivisorClass) -> Result<()> {
        let c = self
            .candidate(label)
            .ok_or_else(|| Error::InvalidParameter(format!("no candidate {label}")))?;
        let d = c.class.dot(&e)?;
        if !d.is_zero() {
            return Err(Error::Precondition(format!("{label}.E = {} is not zero", fmt_q(&d))));
        }
        self.facts.push(Fact {
            candidate: label.to_string(),
            effective: e,
        });
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<NSLattice> {
        &self.lattice
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn candidate(&self, label: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.label == label)
    }

    fn weighted(&self) -> Vec<Vec<Q>> {
        self.candidates
            .iter()
            .map(|c| {
                let m = Q::from_integer(BigInt::from(c.mult));
                c.class.coeffs.iter().map(|x| x / &m).collect()
            })
            .collect()
    }

    /// Ampleness by the numerical Nakai test. Without recorded effective
    /// generators the catalog itself is used.
    pub fn check_ample(&self, d: &DivisorClass) -> Result<()> {
        if *d.lattice != *self.lattice {
            return Err(Error::LatticeMismatch);
        }
        let dd = d.dot(d)?;
        if !dd.is_positive() {
            return Err(Error::NotAmple(format!("D^2 = {}", fmt_q(&dd))));
        }
        let curves: Vec<(String, &DivisorClass)> = match &self.effective {
            Some(e) => e.iter().map(|c| (c.expression(), c)).collect(),
            None => self.candidates.iter().map(|c| (c.label.clone(), &c.class)).collect(),
        };
        let plain: Vec<DivisorClass> = curves.iter().map(|(_, c)| (*c).clone()).collect();
        if nakai_ample(d, &plain) {
            return Ok(());
        }
        for (l, c) in curves {
            let x = d.dot(c)?;
            if !x.is_positive() {
                return Err(Error::NotAmple(format!("D.({l}) = {}", fmt_q(&x))));
            }
        }
        Err(Error::NotAmple("Nakai test failed".into()))
    }

    /// JSON shape: {"candidates": [{"label", "class", "mult"}], "facts":
    /// [{"candidate", "class"}], "effective": [...]}. A class is an integer
    /// array, or an expression when a preset is supplied.
    pub fn from_json(v: &Value, lattice: Arc<NSLattice>, preset: Option<&Preset>) -> Result<Self> {
        let class_of = |x: &Value| -> Result<DivisorClass> {
            match (x, preset) {
                (Value::String(s), Some(p)) => p.parse(s),
                (Value::String(s), None) => Err(Error::Parse(format!("class expression {s:?} needs a preset"))),
                _ => DivisorClass::new(lattice.clone(), json_big_vec(x)?),
            }
        };
        let arr = v
            .get("candidates")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("context.candidates missing".into()))?;
        let mut cands = Vec::new();
        for (i, c) in arr.iter().enumerate() {
            let label = c
                .get("label")
                .and_then(|l| l.as_str())
                .ok_or_else(|| Error::Parse(format!("context.candidates[{i}].label missing")))?;
            let class = class_of(
                c.get("class")
                    .ok_or_else(|| Error::Parse(format!("context.candidates[{i}].class missing")))?,
            )?;
            let mult = match c.get("mult") {
                None => 1,
                Some(m) => m
                    .as_u64()
                    .and_then(|m| u32::try_from(m).ok())
                    .ok_or_else(|| Error::Parse(format!("context.candidates[{i}].mult must be a positive integer")))?,
            };
            cands.push(Candidate {
                label: label.to_string(),
                class,
                mult,
            });
        }
        let mut ctx = PointContext::new(lattice.clone(), cands)?;
        if let Some(e) = v.get("effective") {
            let e = e
                .as_array()
                .ok_or_else(|| Error::Parse("context.effective must be an array".into()))?;
            ctx.effective = Some(e.iter().map(&class_of).collect::<Result<_>>()?);
        } else if let Some(p) = preset {
            if !p.effective.is_empty() {
                ctx.effective = Some(p.effective.iter().map(|l| p.class(l)).collect::<Result<_>>()?);
            }
        }
        if let Some(fs) = v.get("facts").and_then(|f| f.as_array()) {
            for (i, f) in fs.iter().enumerate() {
                let label = f
                    .get("candidate")
                    .and_then(|l| l.as_str())
                    .ok_or_else(|| Error::Parse(format!("context.facts[{i}].candidate missing")))?;
                let e = class_of(
                    f.get("class")
                        .ok_or_else(|| Error::Parse(format!("context.facts[{i}].class missing")))?,
                )?;
                ctx.add_fact(label, e)?;
            }
        }
        Ok(ctx)
    }

    pub fn to_json(&self) -> Value {
        let q_json = |c: &DivisorClass| -> Value {
            match c.int_coeffs() {
                Some(v) => big_vec_json(&v),
                None => Value::Array(c.coeffs.iter().map(|x| Value::String(fmt_q(x))).collect()),
            }
        };
        let mut m = Map::new();
        m.insert(
            "candidates".into(),
            Value::Array(
                self.candidates
                    .iter()
                    .map(|c| json!({"label": c.label, "class": q_json(&c.class), "mult": c.mult}))
                    .collect(),
            ),
        );
        m.insert(
            "facts".into(),
            Value::Array(
                self.facts
                    .iter()
                    .map(|f| json!({"candidate": f.candidate, "class": q_json(&f.effective)}))
                    .collect(),
            ),
        );
        if let Some(e) = &self.effective {
            m.insert("effective".into(), Value::Array(e.iter().map(q_json).collect()));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub alpha: Q,
    pub winners: Vec<String>,
    pub degrees: BTreeMap<String, Q>,
    pub cells: Option<Vec<CellPrediction>>,
}

impl Prediction {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("alpha".into(), Value::String(fmt_q(&self.alpha)));
        m.insert("winners".into(), json!(self.winners));
        m.insert(
            "degrees".into(),
            Value::Object(self.degrees.iter().map(|(l, d)| (l.clone(), Value::String(fmt_q(d)))).collect()),
        );
        if let Some(cells) = &self.cells {
            m.insert("cells".into(), Value::Array(cells.iter().map(|c| c.to_json()).collect()));
        }
        Value::Object(m)
    }
}

/// Minimise D.C/m over the catalog without the ampleness gate.
pub fn evaluate(ctx: &PointContext, d: &DivisorClass) -> Result<Prediction> {
    if ctx.candidates.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    if *d.lattice != *ctx.lattice {
        return Err(Error::LatticeMismatch);
    }
    let mut degrees = BTreeMap::new();
    let mut best: Option<Q> = None;
    for c in &ctx.candidates {
        let v = c.class.dot(d)? / Q::from_integer(BigInt::from(c.mult));
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v.clone());
        }
        degrees.insert(c.label.clone(), v);
    }
    let alpha = best.expect("nonempty catalog");
    let mut winners: Vec<String> = degrees
        .iter()
        .filter(|(_, v)| **v == alpha)
        .map(|(l, _)| l.clone())
        .collect();
    winners.sort();
    Ok(Prediction {
        alpha,
        winners,
        degrees,
        cells: None,
    })
}

pub fn predict_alpha(ctx: &PointContext, d: &DivisorClass) -> Result<Prediction> {
    if ctx.candidates.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    ctx.check_ample(d)?;
    let p = evaluate(ctx, d)?;
    if !p.alpha.is_positive() {
        return Err(Error::NotAmple(format!("least degree {} is not positive", fmt_q(&p.alpha))));
    }
    Ok(p)
}

/// A cell of the nef cone on which one candidate attains the minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPrediction {
    pub cone: Cone,
    pub candidate: String,
    pub winners: Vec<String>,
    /// The winner set agreed at the sample and at every ray pushed inward.
    pub constant: bool,
}

impl CellPrediction {
    pub fn to_json(&self) -> Value {
        json!({
            "candidate": self.candidate,
            "winners": self.winners,
            "constant": self.constant,
            "rays": self.cone.generators().iter().map(|g| big_vec_json(g)).collect::<Vec<_>>(),
        })
    }
}

const INWARD: i64 = 8;

pub fn predict_over_cone(ctx: &PointContext, nef: &Cone) -> Result<Vec<CellPrediction>> {
    if ctx.candidates.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    if **nef.lattice() != *ctx.lattice {
        return Err(Error::LatticeMismatch);
    }
    let cells = subdivide_weighted(nef, &ctx.weighted())?;
    cells
        .par_iter()
        .map(|cell| {
            let s = cell.cone.sample_interior()?;
            let at_sample = evaluate(ctx, &s)?.winners;
            let mut constant = at_sample.contains(&ctx.candidates[cell.candidate].label);
            for r in cell.cone.generators() {
                let coeffs: Vec<Q> = r
                    .iter()
                    .zip(&s.coeffs)
                    .map(|(x, y)| qi(&(x * BigInt::from(INWARD))) + y)
                    .collect();
                let d = DivisorClass::new_q(ctx.lattice.clone(), coeffs)?;
                if evaluate(ctx, &d)?.winners != at_sample {
                    constant = false;
                }
            }
            Ok(CellPrediction {
                cone: cell.cone.clone(),
                candidate: ctx.candidates[cell.candidate].label.clone(),
                winners: at_sample,
                constant,
            })
        })
        .collect()
}

/// Whether a winner C under D, with a recorded C.E = 0, is still a winner
/// under D + E.
pub fn add_effective_rule(ctx: &PointContext, d: &DivisorClass, e: &DivisorClass) -> Result<bool> {
    if *e.lattice != *ctx.lattice {
        return Err(Error::LatticeMismatch);
    }
    if e.coeffs.iter().all(|x| x.is_zero()) {
        return Ok(true);
    }
    let before = predict_alpha(ctx, d)?;
    let Some(c) = before
        .winners
        .iter()
        .find(|w| ctx.facts.iter().any(|f| &f.candidate == *w && f.effective == *e))
    else {
        return Err(Error::MissingFact(before.winners.join(", ")));
    };
    let cand = ctx.candidate(c).expect("winner is a candidate");
    if !cand.class.dot(e)?.is_zero() {
        return Ok(false);
    }
    let sum: Vec<Q> = d.coeffs.iter().zip(&e.coeffs).map(|(a, b)| a + b).collect();
    let after = evaluate(ctx, &DivisorClass::new_q(ctx.lattice.clone(), sum)?)?;
    Ok(after.winners.contains(c))
}
