//! Intersection lattices of rational surfaces: Gram matrices, exact dual
//! bases, named class tables for the preset surfaces, and fibre trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{big, bigs, dot, fmt_q, inverse, kernel, qi, to_q, Q};
use crate::error::{Error, Result};
use crate::serial::{big_vec_json, json_big_matrix};

/// A free Z-module with a symmetric nondegenerate integer pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSLattice {
    labels: Vec<String>,
    gram: Vec<Vec<BigInt>>,
}

impl NSLattice {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidParameter("lattice needs a basis".into()));
        }
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "gram must be {n}x{n} to match the labels"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "gram not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let lat = NSLattice { labels, gram };
        if lat.determinant().is_zero() {
            return Err(Error::SingularGram);
        }
        Ok(lat)
    }

    pub fn from_i64(labels: &[&str], gram: &[&[i64]]) -> Result<Self> {
        NSLattice::new(
            labels.iter().map(|s| s.to_string()).collect(),
            gram.iter().map(|r| bigs(r)).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn gram_q(&self) -> Vec<Vec<Q>> {
        self.gram.iter().map(|r| to_q(r)).collect()
    }

    /// a^T G b for integer coordinate vectors.
    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            s += ai * dot(&self.gram[i], b);
        }
        s
    }

    pub fn pair_q(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !self.gram[i][j].is_zero() {
                    s += ai * bj * qi(&self.gram[i][j]);
                }
            }
        }
        s
    }

    /// G a, the linear form x -> a.x in coordinates.
    pub fn form(&self, a: &[BigInt]) -> Vec<BigInt> {
        (0..self.rank())
            .map(|j| (0..self.rank()).map(|i| &a[i] * &self.gram[i][j]).sum())
            .collect()
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
        if !a.same_lattice(b) || a.lattice.as_ref() != self {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.pair_q(&a.coeffs, &b.coeffs))
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        let mut m = self.gram_q();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            for r in (c + 1)..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &piv;
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det.to_integer()
    }

    /// Numbers of positive, negative and zero entries after an exact
    /// congruence diagonalization P^T G P.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut m = self.gram_q();
        let mut diag = Vec::new();
        let mut active: Vec<usize> = (0..n).collect();
        while let Some(&first) = active.first() {
            // Find a usable pivot; if every diagonal entry is zero but some
            // off-diagonal entry is not, add row/column s to r first.
            let piv = active.iter().copied().find(|&i| !m[i][i].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => {
                    let pair = active.iter().copied().find_map(|r| {
                        active
                            .iter()
                            .copied()
                            .find(|&s| s != r && !m[r][s].is_zero())
                            .map(|s| (r, s))
                    });
                    match pair {
                        None => {
                            diag.extend(std::iter::repeat_n(Q::zero(), active.len()));
                            break;
                        }
                        Some((r, s)) => {
                            for k in 0..n {
                                let t = m[s][k].clone();
                                m[r][k] += t;
                            }
                            for k in 0..n {
                                let t = m[k][s].clone();
                                m[k][r] += t;
                            }
                            r
                        }
                    }
                }
            };
            let _ = first;
            let d = m[piv][piv].clone();
            for &r in &active {
                if r == piv || m[r][piv].is_zero() {
                    continue;
                }
                let f = &m[r][piv] / &d;
                for k in 0..n {
                    let t = &f * &m[piv][k];
                    m[r][k] -= t;
                }
                for k in 0..n {
                    let t = &f * &m[k][piv];
                    m[k][r] -= t;
                }
            }
            diag.push(d);
            active.retain(|&i| i != piv);
        }
        let pos = diag.iter().filter(|d| d.is_positive()).count();
        let neg = diag.iter().filter(|d| d.is_negative()).count();
        (pos, neg, n - pos - neg)
    }

    pub fn is_hodge(&self) -> bool {
        self.signature() == (1, self.rank() - 1, 0)
    }

    /// Rows D_i with D_i . e_j = delta_ij, in basis coordinates.
    pub fn dual_basis(&self) -> Result<Vec<Vec<Q>>> {
        inverse(&self.gram_q()).ok_or(Error::SingularGram)
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "gram": self.gram.iter().map(|r| big_vec_json(r)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let labels: Vec<String> = v
            .get("labels")
            .and_then(|l| l.as_array())
            .ok_or_else(|| Error::Parse("lattice.labels missing".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(|s| s.to_string())
                    .ok_or_else(|| Error::Parse("lattice.labels must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let gram = json_big_matrix(
            v.get("gram")
                .ok_or_else(|| Error::Parse("lattice.gram missing".into()))?,
        )?;
        NSLattice::new(labels, gram)
    }
}

/// A class in a lattice by its basis coordinates.
#[derive(Clone, Debug)]
pub struct DivisorClass {
    pub lattice: Arc<NSLattice>,
    pub coeffs: Vec<Q>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other) && self.coeffs == other.coeffs
    }
}

impl Eq for DivisorClass {}

impl DivisorClass {
    pub fn new(lattice: Arc<NSLattice>, coeffs: Vec<BigInt>) -> Result<Self> {
        Self::new_q(lattice, to_q(&coeffs))
    }

    pub fn new_q(lattice: Arc<NSLattice>, coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::DimensionMismatch(coeffs.len(), lattice.rank()));
        }
        Ok(DivisorClass { lattice, coeffs })
    }

    pub fn same_lattice(&self, other: &DivisorClass) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    pub fn dot(&self, other: &DivisorClass) -> Result<Q> {
        self.lattice.intersect(self, other)
    }

    /// Readable form such as "2L - E1 - E2".
    pub fn expression(&self) -> String {
        format_combination(self.lattice.labels(), &self.coeffs)
    }
}

pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
    a.dot(b)
}

pub fn dual_basis(lattice: &NSLattice) -> Result<Vec<Vec<Q>>> {
    lattice.dual_basis()
}

pub fn format_combination(labels: &[String], coeffs: &[Q]) -> String {
    let mut out = String::new();
    for (l, c) in labels.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&fmt_q(&a));
        }
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A preset surface: its lattice, a table of named classes, and the
/// generators of its effective and nef cones by name.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub lattice: Arc<NSLattice>,
    pub classes: BTreeMap<String, Vec<BigInt>>,
    pub effective: Vec<String>,
    pub nef: Vec<String>,
    pub fiber_tree: Option<FiberTree>,
}

impl Preset {
    fn new(name: String, lattice: NSLattice) -> Self {
        let mut classes = BTreeMap::new();
        for (i, l) in lattice.labels().iter().enumerate() {
            let mut v = vec![BigInt::zero(); lattice.rank()];
            v[i] = BigInt::one();
            classes.insert(l.clone(), v);
        }
        Preset {
            name,
            lattice: Arc::new(lattice),
            classes,
            effective: Vec::new(),
            nef: Vec::new(),
            fiber_tree: None,
        }
    }

    fn define(&mut self, label: &str, expr: &str) {
        let v = self.parse_int(expr).unwrap_or_else(|e| panic!("bad preset class {label} = {expr}: {e}"));
        self.classes.insert(label.to_string(), v);
    }

    pub fn class(&self, label: &str) -> Result<DivisorClass> {
        let v = self
            .classes
            .get(label)
            .ok_or_else(|| Error::Parse(format!("no class named {label:?} in {}", self.name)))?;
        DivisorClass::new(self.lattice.clone(), v.clone())
    }

    pub fn vector(&self, label: &str) -> Result<Vec<BigInt>> {
        self.classes
            .get(label)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("no class named {label:?} in {}", self.name)))
    }

    pub fn effective_vectors(&self) -> Vec<Vec<BigInt>> {
        self.effective.iter().map(|l| self.classes[l].clone()).collect()
    }

    pub fn nef_vectors(&self) -> Vec<Vec<BigInt>> {
        self.nef.iter().map(|l| self.classes[l].clone()).collect()
    }

    /// Parse an integer combination of named classes, e.g. "2L-E1-E2" or
    /// "D1+F". Labels are matched longest first.
    pub fn parse(&self, expr: &str) -> Result<DivisorClass> {
        let v = self.parse_q(expr)?;
        DivisorClass::new_q(self.lattice.clone(), v)
    }

    pub fn parse_int(&self, expr: &str) -> Result<Vec<BigInt>> {
        let v = self.parse_q(expr)?;
        if v.iter().any(|c| !c.is_integer()) {
            return Err(Error::Parse(format!("{expr:?} is not integral")));
        }
        Ok(v.into_iter().map(|c| c.to_integer()).collect())
    }

    fn parse_q(&self, expr: &str) -> Result<Vec<Q>> {
        let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty class expression".into()));
        }
        if s.starts_with('[') {
            let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()))?;
            let ints = crate::serial::json_big_vec(&v)?;
            if ints.len() != self.lattice.rank() {
                return Err(Error::DimensionMismatch(ints.len(), self.lattice.rank()));
            }
            return Ok(to_q(&ints));
        }
        // Names such as "L-E1-E2" are spelled as expressions already.
        let mut labels: Vec<&String> = self
            .classes
            .keys()
            .filter(|l| !l.contains(['+', '-']))
            .collect();
        labels.sort_by_key(|l| std::cmp::Reverse(l.len()));
        let mut acc = vec![Q::zero(); self.lattice.rank()];
        let bytes = s.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos > 0 {
                return Err(Error::Parse(format!("expected + or - at {pos} in {expr:?}")));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: BigInt = if pos > start {
                s[start..pos].parse().unwrap()
            } else {
                BigInt::one()
            };
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            let rest = &s[pos..];
            let Some(label) = labels.iter().find(|l| rest.starts_with(l.as_str())) else {
                if pos > start && (rest.is_empty() || rest.starts_with(['+', '-'])) {
                    return Err(Error::Parse(format!("bare number in {expr:?}")));
                }
                return Err(Error::Parse(format!("unknown class at {rest:?} in {expr:?}")));
            };
            let v = &self.classes[label.as_str()];
            for (a, x) in acc.iter_mut().zip(v) {
                *a += qi(&(&sign * &coeff * x));
            }
            pos += label.len();
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "lattice": self.lattice.to_json(),
            "classes": self.classes.iter().map(|(l, v)| json!({"label": l, "coeffs": big_vec_json(v)})).collect::<Vec<_>>(),
            "effective": self.effective,
            "nef": self.nef,
        })
    }
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn gram_from(n: usize, entries: &[(usize, usize, i64)]) -> Vec<Vec<BigInt>> {
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for &(i, j, v) in entries {
        g[i][j] = big(v);
        g[j][i] = big(v);
    }
    g
}

fn check_range(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.to_string()))
    }
}

/// H_n with basis (S, F).
pub fn hirzebruch(n: i64) -> Result<Preset> {
    check_range(n >= 0, "hirzebruch needs n >= 0")?;
    let lat = NSLattice::new(labels(&["S", "F"]), gram_from(2, &[(0, 0, -n), (0, 1, 1)]))?;
    let mut p = Preset::new(format!("hirzebruch:{n}"), lat);
    let d = p.parse_int("S").unwrap();
    let f = p.parse_int("F").unwrap();
    let dv: Vec<BigInt> = d.iter().zip(&f).map(|(s, f)| s + big(n) * f).collect();
    p.classes.insert("D".into(), dv);
    p.effective = labels(&["S", "F"]);
    p.nef = labels(&["F", "D"]);
    Ok(p)
}

pub fn alpha_label(alpha: &[bool]) -> String {
    let bits: String = alpha.iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("D_{bits}")
}

/// H_n blown up at k < n points in distinct fibres, basis (S, F, E1..Ek).
pub fn simplefibres(n: i64, k: usize) -> Result<Preset> {
    check_range(n >= 1, "simplefibres needs n >= 1")?;
    check_range((k as i64) < n, "simplefibres needs k < n")?;
    check_range(k <= 9, "simplefibres rank is capped at 11")?;
    let r = k + 2;
    let mut entries = vec![(0, 0, -n), (0, 1, 1)];
    for i in 0..k {
        entries.push((2 + i, 2 + i, -1));
    }
    let mut names = vec!["S".to_string(), "F".to_string()];
    names.extend((1..=k).map(|i| format!("E{i}")));
    let lat = NSLattice::new(names, gram_from(r, &entries))?;
    let mut p = Preset::new(format!("simplefibres:{n},{k}"), lat);
    p.effective.push("S".into());
    for i in 1..=k {
        p.define(&format!("F{i}"), &format!("F-E{i}"));
        p.effective.push(format!("E{i}"));
        p.effective.push(format!("F{i}"));
    }
    if k == 0 {
        p.effective.push("F".into());
    }
    p.nef.push("F".into());
    for mask in 0..(1usize << k) {
        let alpha: Vec<bool> = (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect();
        let mut v = vec![BigInt::zero(); r];
        v[0] = BigInt::one();
        v[1] = big(n);
        for (i, &a) in alpha.iter().enumerate() {
            if a {
                v[2 + i] = big(-1);
            }
        }
        let l = alpha_label(&alpha);
        p.classes.insert(l.clone(), v);
        p.nef.push(l);
    }
    Ok(p)
}

/// Two reducible fibres of two components each, basis (F, E2, F2, S).
pub fn case1(n: i64) -> Result<Preset> {
    check_range(n >= 1, "case1 needs n >= 1")?;
    let lat = NSLattice::new(
        labels(&["F", "E2", "F2", "S"]),
        gram_from(4, &[(0, 3, 1), (1, 1, -1), (2, 2, -1), (3, 3, -n)]),
    )?;
    let mut p = Preset::new(format!("case1:{n}"), lat);
    p.define("E1", "F-E2");
    p.define("F1", "F-F2");
    p.effective = labels(&["S", "E1", "E2", "F1", "F2"]);
    if n == 1 {
        // The blowup of P^2 at p1, p2, p3 fibred by lines through p1:
        // S = E1, F = L - E1, E2 = E2, F2 = E3 in plane notation.
        p.define("L", "F+S");
        p.define("L23", "F+S-E2-F2");
        p.effective.push("L23".into());
        p.define("D2", "F+S");
        p.define("D1", "F+S-E2");
        p.define("D1'", "F+S-F2");
        p.define("D0", "2F+S-E2-F2");
    } else {
        p.define("D2", &format!("{n}F+S"));
        p.define("D1", &format!("{n}F+S-E2"));
        p.define("D1'", &format!("{n}F+S-F2"));
        p.define("D0", &format!("{n}F+S-E2-F2"));
    }
    p.nef = labels(&["F", "D2", "D1", "D1'", "D0"]);
    Ok(p)
}

/// One reducible fibre F1 + E1 + E2 shaped like the letter F,
/// basis (S, E1, E2, F).
pub fn case2(n: i64) -> Result<Preset> {
    check_range(n >= 1, "case2 needs n >= 1")?;
    let lat = NSLattice::new(
        labels(&["S", "E1", "E2", "F"]),
        gram_from(4, &[(0, 0, -n), (0, 3, 1), (1, 1, -1), (2, 2, -1)]),
    )?;
    let mut p = Preset::new(format!("case2:{n}"), lat);
    p.define("F1", "F-E1-E2");
    p.define("D1", &format!("{n}F+S"));
    p.define("D2", &format!("{n}F+S-E1"));
    p.define("D3", &format!("{n}F+S-E2"));
    p.effective = labels(&["S", "F1", "E1", "E2"]);
    p.nef = labels(&["F", "D1", "D2", "D3"]);
    p.fiber_tree = Some(FiberTree::new(
        -n,
        vec![
            FiberNode::new("F1", -2, None),
            FiberNode::new("E1", -1, Some(0)),
            FiberNode::new("E2", -1, Some(0)),
        ],
    )?);
    Ok(p)
}

/// One reducible fibre E1 - E2 - E3 shaped like the letter H, reduced,
/// basis (S, E2, E3, F).
pub fn case3(n: i64) -> Result<Preset> {
    check_range(n >= 2, "case3 needs n >= 2")?;
    let lat = NSLattice::new(
        labels(&["S", "E2", "E3", "F"]),
        gram_from(4, &[(0, 0, -n), (0, 3, 1), (1, 1, -2), (1, 2, 1), (2, 2, -1)]),
    )?;
    let mut p = Preset::new(format!("case3:{n}"), lat);
    p.define("E1", "F-E2-E3");
    p.define("D1", &format!("{n}F+S-E2-2E3"));
    p.define("D2", &format!("{n}F+S-E2-E3"));
    p.define("D3", &format!("{n}F+S"));
    p.effective = labels(&["S", "E1", "E2", "E3"]);
    p.nef = labels(&["F", "D1", "D2", "D3"]);
    p.fiber_tree = Some(FiberTree::new(
        -n,
        vec![
            FiberNode::new("E1", -1, None),
            FiberNode::new("E2", -2, Some(0)),
            FiberNode::new("E3", -1, Some(1)),
        ],
    )?);
    Ok(p)
}

/// The H-shaped fibre E1 + 2E2 + E3 with a double crossbar,
/// basis (S, E2, E3, F).
pub fn case3_multiple(n: i64) -> Result<Preset> {
    check_range(n >= 1, "case3_multiple needs n >= 1")?;
    let lat = NSLattice::new(
        labels(&["S", "E2", "E3", "F"]),
        gram_from(4, &[(0, 0, -n), (0, 3, 1), (1, 1, -1), (1, 2, 1), (2, 2, -2)]),
    )?;
    let mut p = Preset::new(format!("case3_multiple:{n}"), lat);
    p.define("E1", "F-2E2-E3");
    p.define("D1", &format!("S+{n}F"));
    p.define("D2", &format!("2S+{}F-2E2-E3", 2 * n));
    p.define("D3", &format!("S+{n}F-E2-E3"));
    p.effective = labels(&["S", "E1", "E2", "E3"]);
    p.nef = labels(&["F", "D1", "D2", "D3"]);
    p.fiber_tree = Some(FiberTree::new(
        -n,
        vec![
            FiberNode::new("E1", -2, None),
            FiberNode::new("E2", -1, Some(0)),
            FiberNode::new("E3", -2, Some(1)),
        ],
    )?);
    Ok(p)
}

/// P^2 blown up at r <= 5 points in general position, basis (L, E1..Er).
pub fn blowup_p2(r: usize) -> Result<Preset> {
    check_range(r <= 5, "blowup_p2 supports at most 5 points")?;
    let mut entries = vec![(0, 0, 1)];
    for i in 1..=r {
        entries.push((i, i, -1));
    }
    let mut names = vec!["L".to_string()];
    names.extend((1..=r).map(|i| format!("E{i}")));
    let lat = NSLattice::new(names, gram_from(r + 1, &entries))?;
    let mut p = Preset::new(format!("blowup_p2:{r}"), lat);
    for i in 1..=r {
        p.define(&format!("L{i}"), &format!("L-E{i}"));
    }
    let all_e: String = (1..=r).map(|i| format!("-E{i}")).collect();
    match r {
        0 => {
            p.effective = labels(&["L"]);
            p.nef = labels(&["L"]);
        }
        1 => {
            p.effective = labels(&["E1", "L1"]);
            p.nef = labels(&["L", "L1"]);
        }
        2 => {
            p.define("S", "L-E1-E2");
            p.effective = labels(&["S", "E1", "E2"]);
            p.nef = labels(&["L", "L1", "L2"]);
        }
        _ => {
            for i in 1..=r {
                p.effective.push(format!("E{i}"));
            }
            for i in 1..=r {
                for j in (i + 1)..=r {
                    let l = format!("L-E{i}-E{j}");
                    p.define(&l, &l);
                    p.effective.push(l);
                }
            }
            p.nef.push("L".into());
            p.nef.extend((1..=r).map(|i| format!("L{i}")));
            match r {
                3 => {
                    p.define("F", &format!("2L{all_e}"));
                    p.nef.push("F".into());
                }
                4 => {
                    p.define("D", &format!("2L{all_e}"));
                    p.nef.push("D".into());
                    for i in 1..=4 {
                        p.define(&format!("D{i}"), &format!("D+E{i}"));
                        p.nef.push(format!("D{i}"));
                    }
                }
                _ => {
                    p.define("E", &format!("2L{all_e}"));
                    p.effective.push("E".into());
                    for i in 1..=5 {
                        for j in (i + 1)..=5 {
                            p.define(&format!("L{i}{j}"), &format!("E+E{i}+E{j}"));
                            p.nef.push(format!("L{i}{j}"));
                        }
                    }
                    for i in 1..=5 {
                        p.define(&format!("C{i}"), &format!("E+E{i}"));
                        p.nef.push(format!("C{i}"));
                    }
                    for i in 1..=5 {
                        p.define(&format!("B{i}"), &format!("E+L{i}"));
                        p.nef.push(format!("B{i}"));
                    }
                }
            }
        }
    }
    Ok(p)
}

/// A quartic K3 surface containing a line L, with E the residual plane
/// cubic of a hyperplane section through L; basis (E, L).
pub fn k3_quartic_line() -> Result<Preset> {
    let lat = NSLattice::from_i64(&["E", "L"], &[&[0, 3], &[3, -2]])?;
    let mut p = Preset::new("k3_quartic_line".into(), lat);
    p.define("D", "2E+3L");
    p.define("H", "E+L");
    p.effective = labels(&["E", "L"]);
    p.nef = labels(&["E", "D"]);
    Ok(p)
}

pub const PRESET_NAMES: &[&str] = &[
    "hirzebruch:N",
    "simplefibres:N,K",
    "case1:N",
    "case2:N",
    "case3:N",
    "case3_multiple:N",
    "blowup_p2:R",
    "k3_quartic_line",
];

/// Look up a preset by "name" or "name:params", e.g. "blowup_p2:4" or
/// "simplefibres:3,2".
pub fn preset(spec: &str) -> Result<Preset> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), p.trim()),
        None => (spec.trim(), ""),
    };
    let nums: Vec<i64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter(format!("bad preset parameters in {spec:?}")))?
    };
    let want = |k: usize| -> Result<()> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "preset {name} takes {k} parameter(s), got {}",
                nums.len()
            )))
        }
    };
    match name {
        "hirzebruch" => {
            want(1)?;
            hirzebruch(nums[0])
        }
        "p1xp1" => {
            want(0)?;
            hirzebruch(0)
        }
        "simplefibres" => {
            want(2)?;
            check_range(nums[1] >= 0, "k must be nonnegative")?;
            simplefibres(nums[0], nums[1] as usize)
        }
        "case1" => {
            want(1)?;
            case1(nums[0])
        }
        "case2" => {
            want(1)?;
            case2(nums[0])
        }
        "case3" => {
            want(1)?;
            case3(nums[0])
        }
        "case3_multiple" => {
            want(1)?;
            case3_multiple(nums[0])
        }
        "blowup_p2" => {
            want(1)?;
            check_range(nums[0] >= 0, "r must be nonnegative")?;
            blowup_p2(nums[0] as usize)
        }
        "p2" => {
            want(0)?;
            blowup_p2(0)
        }
        "k3_quartic_line" => {
            want(0)?;
            k3_quartic_line()
        }
        _ => Err(Error::UnknownPreset(spec.to_string())),
    }
}

/// One component of a reducible fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberNode {
    pub label: String,
    pub self_intersection: i64,
    pub parent: Option<usize>,
}

impl FiberNode {
    pub fn new(label: &str, self_intersection: i64, parent: Option<usize>) -> Self {
        FiberNode {
            label: label.to_string(),
            self_intersection,
            parent,
        }
    }
}

/// The dual graph of the unique reducible fibre of a blown-up H_n, rooted at
/// the component meeting the section S (node 0). The section never passes
/// through a blown-up point, so S^2 stays -n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberTree {
    pub section_self_intersection: i64,
    pub nodes: Vec<FiberNode>,
}

/// Outcome of checking m_i D_j - m_j D_i against the fibre components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplegensReport {
    pub holds: bool,
    pub adjacent: bool,
    /// m_i D_j - m_j D_i in the basis (S, E_1, .., E_m).
    pub witness: Vec<Q>,
}

impl FiberTree {
    pub fn new(section_self_intersection: i64, nodes: Vec<FiberNode>) -> Result<Self> {
        let t = FiberTree {
            section_self_intersection,
            nodes,
        };
        t.validate()?;
        Ok(t)
    }

    /// The irreducible fibre of H_n.
    pub fn hirzebruch(n: i64) -> Self {
        FiberTree {
            section_self_intersection: -n,
            nodes: vec![FiberNode::new("E1", 0, None)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.nodes.len();
        if m == 0 {
            return Err(Error::InvalidConfiguration("fibre tree has no components".into()));
        }
        if self.nodes[0].parent.is_some() {
            return Err(Error::InvalidConfiguration("node 0 must be the root".into()));
        }
        for (i, node) in self.nodes.iter().enumerate().skip(1) {
            match node.parent {
                Some(p) if p < i => {}
                _ => {
                    return Err(Error::InvalidConfiguration(format!(
                        "node {i} needs a parent with a smaller index"
                    )))
                }
            }
        }
        if m > 1 && self.nodes.iter().any(|n| n.self_intersection > -1) {
            return Err(Error::InvalidConfiguration(
                "components of a reducible fibre have self-intersection <= -1".into(),
            ));
        }
        if m == 1 && self.nodes[0].self_intersection != 0 {
            return Err(Error::InvalidConfiguration(
                "an irreducible fibre has self-intersection 0".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.nodes[i].parent.into_iter().collect();
        out.extend(
            self.nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.parent == Some(i))
                .map(|(k, _)| k),
        );
        out.sort();
        out
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.nodes[i].parent == Some(j) || self.nodes[j].parent == Some(i)
    }

    /// True when j lies on the path from the root to i (so E_i >= E_j).
    pub fn succeq(&self, i: usize, j: usize) -> bool {
        let mut cur = Some(i);
        while let Some(c) = cur {
            if c == j {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    pub fn subtree(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.succeq(t, i)).collect()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.nodes.iter().all(|n| n.parent != Some(i))
    }

    /// Lattice with basis (S, E_1, .., E_m).
    pub fn lattice(&self) -> Result<NSLattice> {
        let m = self.len();
        let mut g = vec![vec![BigInt::zero(); m + 1]; m + 1];
        g[0][0] = big(self.section_self_intersection);
        g[0][1] = BigInt::one();
        g[1][0] = BigInt::one();
        for (i, node) in self.nodes.iter().enumerate() {
            g[i + 1][i + 1] = big(node.self_intersection);
            if let Some(p) = node.parent {
                g[i + 1][p + 1] = BigInt::one();
                g[p + 1][i + 1] = BigInt::one();
            }
        }
        let mut names = vec!["S".to_string()];
        names.extend(self.nodes.iter().map(|n| n.label.clone()));
        NSLattice::new(names, g)
    }

    /// Multiplicities m with sum m_i E_i . E_j = 0 for all j and m_root = 1.
    pub fn compute_fiber_class(&self) -> Result<Vec<BigInt>> {
        let m = self.len();
        let mut g = vec![vec![Q::zero(); m]; m];
        for (i, node) in self.nodes.iter().enumerate() {
            g[i][i] = qi(&big(node.self_intersection));
            if let Some(p) = node.parent {
                g[i][p] = Q::one();
                g[p][i] = Q::one();
            }
        }
        let ker = kernel(&g, m);
        if ker.len() != 1 {
            return Err(Error::InvalidConfiguration(format!(
                "fibre components have a {}-dimensional null space, expected 1",
                ker.len()
            )));
        }
        let v = &ker[0];
        if v[0].is_zero() {
            return Err(Error::InvalidConfiguration("root multiplicity vanishes".into()));
        }
        let scale = v[0].clone();
        let mult: Vec<Q> = v.iter().map(|x| x / &scale).collect();
        if mult.iter().any(|x| !x.is_integer() || !x.is_positive()) {
            return Err(Error::InvalidConfiguration(
                "no positive integer multiplicities with root multiplicity 1".into(),
            ));
        }
        Ok(mult.into_iter().map(|x| x.to_integer()).collect())
    }

    /// F in the basis (S, E_1, .., E_m).
    pub fn fiber_vector(&self) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero()];
        v.extend(self.compute_fiber_class()?);
        Ok(v)
    }

    pub fn verify_multiplegens(&self, i: usize, j: usize) -> Result<MultiplegensReport> {
        let m = self.len();
        if i >= m || j >= m {
            return Err(Error::Precondition(format!("component index out of range ({i}, {j})")));
        }
        if !self.succeq(i, j) {
            return Err(Error::Precondition(format!(
                "{} does not lie above {} in the tree order",
                self.nodes[i].label, self.nodes[j].label
            )));
        }
        let mult = self.compute_fiber_class()?;
        if i == j {
            return Ok(MultiplegensReport {
                holds: true,
                adjacent: false,
                witness: vec![Q::zero(); m + 1],
            });
        }
        let dual = self.lattice()?.dual_basis()?;
        let (mi, mj) = (qi(&mult[i]), qi(&mult[j]));
        let witness: Vec<Q> = (0..=m)
            .map(|k| &mi * &dual[j + 1][k] - &mj * &dual[i + 1][k])
            .collect();
        let adjacent = self.adjacent(i, j);
        let holds = if adjacent {
            let mut expect = vec![Q::zero(); m + 1];
            for t in self.subtree(i) {
                expect[t + 1] = qi(&mult[t]);
            }
            witness == expect
        } else {
            witness[0].is_zero() && witness.iter().all(|c| !c.is_negative())
        };
        Ok(MultiplegensReport {
            holds,
            adjacent,
            witness,
        })
    }

    /// Blow up a general point of component i: i drops by one and gains a
    /// new (-1)-leaf.
    pub fn blow_up_on(&self, i: usize) -> FiberTree {
        let mut t = self.clone();
        t.nodes[i].self_intersection -= 1;
        let label = format!("E{}", t.nodes.len() + 1);
        t.nodes.push(FiberNode::new(&label, -1, Some(i)));
        t
    }

    /// Blow up the point where adjacent components i and j meet.
    pub fn blow_up_between(&self, i: usize, j: usize) -> Result<FiberTree> {
        if !self.adjacent(i, j) {
            return Err(Error::Precondition("components do not meet".into()));
        }
        let (parent, child) = if self.nodes[j].parent == Some(i) { (i, j) } else { (j, i) };
        let mut t = self.clone();
        t.nodes[i].self_intersection -= 1;
        t.nodes[j].self_intersection -= 1;
        let new = t.nodes.len();
        let label = format!("E{}", new + 1);
        t.nodes.push(FiberNode::new(&label, -1, Some(parent)));
        t.nodes[child].parent = Some(new);
        // Keep parents before children.
        Ok(t.reindexed())
    }

    fn reindexed(&self) -> FiberTree {
        let m = self.len();
        let mut order = Vec::with_capacity(m);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            order.push(v);
            let mut kids: Vec<usize> = (0..m).filter(|&k| self.nodes[k].parent == Some(v)).collect();
            kids.reverse();
            stack.extend(kids);
        }
        let mut pos = vec![0; m];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        FiberTree {
            section_self_intersection: self.section_self_intersection,
            nodes: order
                .iter()
                .map(|&old| {
                    let n = &self.nodes[old];
                    FiberNode {
                        label: n.label.clone(),
                        self_intersection: n.self_intersection,
                        parent: n.parent.map(|p| pos[p]),
                    }
                })
                .collect(),
        }
    }

    /// Components that can be blown down: (-1)-curves off the section with at
    /// most two neighbours.
    pub fn contractible(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&k| self.nodes[k].self_intersection == -1 && self.neighbors(k).len() <= 2)
            .collect()
    }

    /// Contract component k. Returns the smaller tree and, for every
    /// surviving node, its index in the original tree.
    pub fn blow_down(&self, k: usize) -> Result<(FiberTree, Vec<usize>)> {
        if !self.contractible().contains(&k) {
            return Err(Error::Precondition(format!(
                "{} is not a contractible (-1)-component",
                self.nodes[k].label
            )));
        }
        let nb = self.neighbors(k);
        let parent = self.nodes[k].parent.expect("non-root");
        let mut nodes = self.nodes.clone();
        for &a in &nb {
            nodes[a].self_intersection += 1;
        }
        for node in nodes.iter_mut() {
            if node.parent == Some(k) {
                node.parent = Some(parent);
            }
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != k).collect();
        let new_nodes: Vec<FiberNode> = keep
            .iter()
            .map(|&old| {
                let n = &nodes[old];
                FiberNode {
                    label: n.label.clone(),
                    self_intersection: n.self_intersection,
                    parent: n.parent.map(|p| if p > k { p - 1 } else { p }),
                }
            })
            .collect();
        let t = FiberTree {
            section_self_intersection: self.section_self_intersection,
            nodes: new_nodes,
        };
        t.validate()?;
        Ok((t, keep))
    }

    /// Check that contracting component k matches the dual bases:
    /// D_i = f^*(D_i') for surviving i, and D_k = sum over neighbours a of
    /// f^*(D_a') - E_k.
    pub fn verify_inductive_step(&self, k: usize) -> Result<bool> {
        let (small, keep) = self.blow_down(k)?;
        let big_dual = self.lattice()?.dual_basis()?;
        let small_dual = small.lattice()?.dual_basis()?;
        let m = self.len();
        let nb = self.neighbors(k);
        // Pull back a class of the contracted surface (basis S, E'_..).
        let pullback = |v: &[Q]| -> Vec<Q> {
            let mut out = vec![Q::zero(); m + 1];
            out[0] = v[0].clone();
            for (new, &old) in keep.iter().enumerate() {
                out[old + 1] = v[new + 1].clone();
            }
            out[k + 1] = nb
                .iter()
                .map(|&a| {
                    let new = keep.iter().position(|&o| o == a).unwrap();
                    v[new + 1].clone()
                })
                .fold(Q::zero(), |s, x| s + x);
            out
        };
        // Index 0 is S in both bases.
        if pullback(&small_dual[0]) != big_dual[0] {
            return Ok(false);
        }
        for (new, &old) in keep.iter().enumerate() {
            if pullback(&small_dual[new + 1]) != big_dual[old + 1] {
                return Ok(false);
            }
        }
        let mut expect = vec![Q::zero(); m + 1];
        for &a in &nb {
            let new = keep.iter().position(|&o| o == a).unwrap();
            for (e, x) in expect.iter_mut().zip(pullback(&small_dual[new + 1])) {
                *e += x;
            }
        }
        expect[k + 1] -= Q::one();
        Ok(expect == big_dual[k + 1])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "section_self_intersection": self.section_self_intersection,
            "nodes": self.nodes.iter().map(|n| json!({
                "label": n.label,
                "self_intersection": n.self_intersection,
                "parent": n.parent,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let s = v
            .get("section_self_intersection")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Parse("section_self_intersection missing".into()))?;
        let nodes = v
            .get("nodes")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("nodes missing".into()))?
            .iter()
            .map(|n| {
                Ok(FiberNode {
                    label: n
                        .get("label")
                        .and_then(|x| x.as_str())
                        .ok_or_else(|| Error::Parse("node label missing".into()))?
                        .to_string(),
                    self_intersection: n
                        .get("self_intersection")
                        .and_then(|x| x.as_i64())
                        .ok_or_else(|| Error::Parse("node self_intersection missing".into()))?,
                    parent: match n.get("parent") {
                        None | Some(Value::Null) => None,
                        Some(p) => Some(
                            p.as_u64()
                                .ok_or_else(|| Error::Parse("node parent must be an index".into()))?
                                as usize,
                        ),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiberTree::new(s, nodes)
    }
}

pub fn compute_fiber_class(tree: &FiberTree) -> Result<Vec<BigInt>> {
    tree.compute_fiber_class()
}

pub fn verify_multiplegens(tree: &FiberTree, i: usize, j: usize) -> Result<MultiplegensReport> {
    tree.verify_multiplegens(i, j)
}

/// Exact table of pairings between named classes.
pub fn intersection_table(p: &Preset, names: &[&str]) -> Result<Vec<Vec<BigInt>>> {
    let vs: Vec<Vec<BigInt>> = names.iter().map(|n| p.vector(n)).collect::<Result<_>>()?;
    Ok(vs
        .iter()
        .map(|a| vs.iter().map(|b| p.lattice.pair(a, b)).collect())
        .collect())
}

pub fn q_vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::from(fmt_q(x))).collect())
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        bigs(x)
    }

    #[test]
    fn intersect_examples() {
        let h = hirzebruch(2).unwrap();
        let s = h.class("S").unwrap();
        assert_eq!(s.dot(&s).unwrap(), rational(-2, 1));
        let b = blowup_p2(4).unwrap();
        let d = b.class("D").unwrap();
        assert_eq!(d.dot(&d).unwrap(), rational(0, 1));
        let z = DivisorClass::new(b.lattice.clone(), v(&[0, 0, 0, 0, 0])).unwrap();
        assert!(z.dot(&d).unwrap().is_zero());
        assert_eq!(z.dot(&s), Err(Error::LatticeMismatch));
    }

    #[test]
    fn dual_basis_examples() {
        let h = hirzebruch(3).unwrap();
        let d = h.lattice.dual_basis().unwrap();
        assert_eq!(d[0], to_q(&h.vector("F").unwrap()));
        assert_eq!(d[1], to_q(&h.vector("D").unwrap()));
        let one = NSLattice::from_i64(&["H"], &[&[1]]).unwrap();
        assert_eq!(one.dual_basis().unwrap(), vec![vec![rational(1, 1)]]);
        let c3 = case3(3).unwrap();
        let dual = c3.lattice.dual_basis().unwrap();
        assert_eq!(dual[2], to_q(&v(&[0, -1, -2, 0])));
        let d1 = c3.vector("D1").unwrap();
        let pairs: Vec<BigInt> = ["S", "E1", "E2", "E3"]
            .iter()
            .map(|l| c3.lattice.pair(&d1, &c3.vector(l).unwrap()))
            .collect();
        assert_eq!(pairs, v(&[0, 0, 0, 1]));
    }

    #[test]
    fn preset_grams() {
        let c1 = case1(2).unwrap();
        let g = c1.lattice.gram();
        assert_eq!(g[0][3], big(1));
        assert_eq!(g[3][3], big(-2));
        assert_eq!(g[1][1], big(-1));
        let b4 = blowup_p2(4).unwrap();
        assert_eq!(b4.lattice.gram()[0][0], big(1));
        assert!((1..5).all(|i| b4.lattice.gram()[i][i] == big(-1)));
        assert!(NSLattice::from_i64(&["a", "b"], &[&[1, 2], &[2, 4]]).is_err());
        assert!(NSLattice::from_i64(&["a", "b"], &[&[1, 2], &[3, 4]]).is_err());
    }

    #[test]
    fn simplefibre_pairings() {
        let p = simplefibres(3, 2).unwrap();
        for a in 0..4usize {
            for b in 0..4usize {
                let al = [a >> 1 & 1 == 1, a & 1 == 1];
                let be = [b >> 1 & 1 == 1, b & 1 == 1];
                let dot_ab = al.iter().zip(&be).filter(|(x, y)| **x && **y).count() as i64;
                let da = p.vector(&alpha_label(&al)).unwrap();
                let db = p.vector(&alpha_label(&be)).unwrap();
                assert_eq!(p.lattice.pair(&da, &db), big(3 - dot_ab));
            }
        }
    }

    #[test]
    fn every_preset_is_hodge_and_dual_roundtrips() {
        let mut names = vec!["k3_quartic_line".to_string()];
        for n in 0..=5 {
            names.push(format!("hirzebruch:{n}"));
        }
        for n in 1..=6 {
            for k in 0..n {
                names.push(format!("simplefibres:{n},{k}"));
            }
        }
        for n in 1..=4 {
            names.push(format!("case1:{n}"));
            names.push(format!("case2:{n}"));
            names.push(format!("case3_multiple:{n}"));
        }
        for n in 2..=4 {
            names.push(format!("case3:{n}"));
        }
        for r in 0..=5 {
            names.push(format!("blowup_p2:{r}"));
        }
        for name in names {
            let p = preset(&name).unwrap();
            assert!(p.lattice.is_hodge(), "{name} signature {:?}", p.lattice.signature());
            let dual = p.lattice.dual_basis().unwrap();
            let r = p.lattice.rank();
            for i in 0..r {
                for j in 0..r {
                    let mut e = vec![Q::zero(); r];
                    e[j] = Q::one();
                    let x = p.lattice.pair_q(&dual[i], &e);
                    assert_eq!(x, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        let hyp = NSLattice::from_i64(&["a", "b"], &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(hyp.signature(), (1, 1, 0));
        let k3 = k3_quartic_line().unwrap();
        assert_eq!(k3.lattice.determinant(), big(-9));
    }

    #[test]
    fn parser() {
        let p = blowup_p2(4).unwrap();
        assert_eq!(p.parse_int("2L-E1-E2-E3-E4").unwrap(), p.vector("D").unwrap());
        assert_eq!(p.parse_int("D + L1").unwrap(), v(&[3, -2, -1, -1, -1]));
        assert_eq!(p.parse_int("3*L").unwrap(), v(&[3, 0, 0, 0, 0]));
        assert_eq!(p.parse_int("[1,0,0,0,-1]").unwrap(), v(&[1, 0, 0, 0, -1]));
        assert!(p.parse_int("2X").is_err());
        assert!(p.parse_int("L3L").is_err());
        let c = case1(2).unwrap();
        assert_eq!(c.parse_int("D1'").unwrap(), v(&[2, 0, -1, 1]));
        assert_eq!(c.class("D1'").unwrap().expression(), "2F - F2 + S");
    }

    #[test]
    fn fiber_class_examples() {
        let h = case3_multiple(3).unwrap().fiber_tree.unwrap();
        assert_eq!(h.compute_fiber_class().unwrap(), v(&[1, 2, 1]));
        assert_eq!(FiberTree::hirzebruch(3).compute_fiber_class().unwrap(), v(&[1]));
        let f = case2(3).unwrap().fiber_tree.unwrap();
        assert_eq!(f.compute_fiber_class().unwrap(), v(&[1, 1, 1]));
        let bad = FiberTree::new(
            -3,
            vec![FiberNode::new("E1", -1, None), FiberNode::new("E2", -3, Some(0))],
        )
        .unwrap();
        assert!(bad.compute_fiber_class().is_err());
    }

    #[test]
    fn fiber_trees_match_presets() {
        for (p, basis_f) in [
            (case2(3).unwrap(), "F"),
            (case3(3).unwrap(), "F"),
            (case3_multiple(3).unwrap(), "F"),
        ] {
            let t = p.fiber_tree.clone().unwrap();
            let tl = t.lattice().unwrap();
            // Map each tree basis element to the preset by label and compare
            // all pairings.
            let names: Vec<String> = tl.labels().to_vec();
            for (i, a) in names.iter().enumerate() {
                for (j, b) in names.iter().enumerate() {
                    let pa = p.vector(a).unwrap();
                    let pb = p.vector(b).unwrap();
                    assert_eq!(p.lattice.pair(&pa, &pb), tl.gram()[i][j].clone(), "{} {a} {b}", p.name);
                }
            }
            let fv = t.fiber_vector().unwrap();
            let mut acc = vec![BigInt::zero(); p.lattice.rank()];
            for (label, m) in names.iter().zip(&fv) {
                for (x, y) in acc.iter_mut().zip(p.vector(label).unwrap()) {
                    *x += m * y;
                }
            }
            assert_eq!(acc, p.vector(basis_f).unwrap());
        }
    }

    #[test]
    fn multiplegens_examples() {
        let t = case3_multiple(3).unwrap().fiber_tree.unwrap();
        // E3 above E2, adjacent: m3 D2 - m2 D3 = E3
        let r = t.verify_multiplegens(2, 1).unwrap();
        assert!(r.holds && r.adjacent);
        assert_eq!(r.witness, to_q(&v(&[0, 0, 0, 1])));
        let z = t.verify_multiplegens(1, 1).unwrap();
        assert!(z.holds && z.witness.iter().all(|c| c.is_zero()));
        assert!(matches!(t.verify_multiplegens(0, 2), Err(Error::Precondition(_))));
        let far = t.verify_multiplegens(2, 0).unwrap();
        assert!(far.holds && !far.adjacent);
    }

    #[test]
    fn blowups_and_blowdowns() {
        let t = FiberTree::hirzebruch(5).blow_up_on(0);
        assert_eq!(t.compute_fiber_class().unwrap(), v(&[1, 1]));
        let t2 = t.blow_up_between(0, 1).unwrap();
        assert_eq!(t2.compute_fiber_class().unwrap(), v(&[1, 2, 1]));
        for k in t2.contractible() {
            assert!(t2.verify_inductive_step(k).unwrap());
        }
        let (back, keep) = t2.blow_down(1).unwrap();
        assert_eq!(keep, vec![0, 2]);
        assert_eq!(back.nodes[1].self_intersection, -1);
    }

    #[test]
    fn json_roundtrips() {
        let p = case2(2).unwrap();
        let lj = p.lattice.to_json();
        assert_eq!(NSLattice::from_json(&lj).unwrap(), *p.lattice);
        let t = p.fiber_tree.unwrap();
        assert_eq!(FiberTree::from_json(&t.to_json()).unwrap(), t);
    }
}
