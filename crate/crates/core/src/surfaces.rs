//! Concrete models carrying heights: plane linear systems with base
//! conditions, Hirzebruch surfaces in Cox coordinates, and products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{big, clear_denominators, gcd_all, max_abs, primitive, qi, Q};
use crate::error::{Error, Result};
use crate::projective::{distance, ProjPoint};
use crate::serial::{big_vec_json, json_big_vec};

/// Exponents (i, j, k) of x^i y^j z^k with i + j + k = a, in decreasing
/// lexicographic order: x^a, x^(a-1) y, ..., z^a.
pub fn monomials(a: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((a + 1) * (a + 2) / 2);
    for i in (0..=a).rev() {
        for j in (0..=(a - i)).rev() {
            out.push([i, j, a - i - j]);
        }
    }
    out
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * big((n - t) as i64))
}

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

/// A plane linear system of degree a with assigned base points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub degree: usize,
    pub base_points: Vec<(ProjPoint, usize)>,
    /// Coefficient vectors over `monomials(degree)`.
    pub basis: Vec<Vec<BigInt>>,
    /// Set when the conditions imposed by the base points are dependent.
    pub non_generic: bool,
}

impl LinearSystem {
    /// Conditions for vanishing to order b at p: all partial derivatives of
    /// order b - 1 vanish there (Euler's relation gives the lower ones).
    fn condition_rows(a: usize, p: &ProjPoint, b: usize) -> Vec<Vec<BigInt>> {
        let mons = monomials(a);
        let c = p.coords();
        let mut rows = Vec::new();
        if b == 0 {
            return rows;
        }
        let order = b - 1;
        if order > a {
            // every form of degree a dies: its partials of order a are
            // constants that must vanish
            return LinearSystem::condition_rows(a, p, a + 1);
        }
        for d in monomials(order) {
            let row: Vec<BigInt> = mons
                .iter()
                .map(|m| {
                    if m[0] < d[0] || m[1] < d[1] || m[2] < d[2] {
                        return BigInt::zero();
                    }
                    let mut v = BigInt::one();
                    for t in 0..3 {
                        v *= falling(m[t], d[t]) * pow(&c[t], m[t] - d[t]);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        rows
    }

    pub fn new(a: usize, base_points: Vec<(ProjPoint, usize)>) -> Result<Self> {
        if a < 1 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        for (i, (p, b)) in base_points.iter().enumerate() {
            if p.dim() != 2 {
                return Err(Error::InvalidPoint(format!("base point {p} is not in P^2")));
            }
            if *b < 1 {
                return Err(Error::InvalidParameter("base multiplicities must be >= 1".into()));
            }
            if base_points[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidParameter(format!("base point {p} repeated")));
            }
        }
        let mut rows = Vec::new();
        for (p, b) in &base_points {
            rows.extend(LinearSystem::condition_rows(a, p, *b));
        }
        let n = monomials(a).len();
        let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(qi).collect()).collect();
        let ker = crate::arith::kernel(&qrows, n);
        let basis: Vec<Vec<BigInt>> = if qrows.is_empty() {
            (0..n)
                .map(|i| (0..n).map(|j| big((i == j) as i64)).collect())
                .collect()
        } else {
            ker.iter().map(|k| clear_denominators(k)).collect()
        };
        let expected = n as i64
            - base_points
                .iter()
                .map(|(_, b)| (b * (b + 1) / 2) as i64)
                .sum::<i64>();
        let non_generic = basis.len() as i64 != expected.max(0);
        Ok(LinearSystem {
            degree: a,
            base_points,
            basis,
            non_generic,
        })
    }

    /// Wrap an explicit list of forms, checking degree, independence and the
    /// base conditions.
    pub fn from_forms(a: usize, base_points: Vec<(ProjPoint, usize)>, forms: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = monomials(a).len();
        if forms.iter().any(|f| f.len() != n) {
            return Err(Error::InvalidParameter(format!("forms of degree {a} have {n} coefficients")));
        }
        if crate::arith::rank(&forms) != forms.len() {
            return Err(Error::InvalidParameter("forms are linearly dependent".into()));
        }
        for (p, b) in &base_points {
            for r in LinearSystem::condition_rows(a, p, *b) {
                if forms.iter().any(|f| !crate::arith::dot(f, &r).is_zero()) {
                    return Err(Error::InvalidParameter(format!(
                        "a form does not vanish to order {b} at {p}"
                    )));
                }
            }
        }
        Ok(LinearSystem {
            degree: a,
            base_points,
            basis: forms,
            non_generic: false,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn eval_form(&self, form: &[BigInt], q: &ProjPoint) -> BigInt {
        let c = q.coords();
        monomials(self.degree)
            .iter()
            .zip(form)
            .filter(|(_, f)| !f.is_zero())
            .map(|(m, f)| f * pow(&c[0], m[0]) * pow(&c[1], m[1]) * pow(&c[2], m[2]))
            .sum()
    }

    pub fn values(&self, q: &ProjPoint) -> Result<Vec<BigInt>> {
        if q.dim() != 2 {
            return Err(Error::DimensionMismatch(q.dim(), 2));
        }
        let vals: Vec<BigInt> = self.basis.iter().map(|f| self.eval_form(f, q)).collect();
        if vals.iter().all(|v| v.is_zero()) {
            return Err(Error::BaseLocus(format!("{q} lies in the base locus")));
        }
        Ok(vals)
    }

    pub fn height(&self, q: &ProjPoint) -> Result<BigInt> {
        let vals = self.values(q)?;
        let g = gcd_all(&vals);
        Ok(max_abs(&vals) / g)
    }

    pub fn embed(&self, q: &ProjPoint) -> Result<ProjPoint> {
        if self.dimension() < 2 {
            return Err(Error::InvalidParameter("system maps to a point".into()));
        }
        ProjPoint::new(&self.values(q)?)
    }

    pub fn form_string(&self, form: &[BigInt]) -> String {
        let mut out = String::new();
        for (m, c) in monomials(self.degree).iter().zip(form) {
            if c.is_zero() {
                continue;
            }
            let mut mon = String::new();
            for (v, e) in ["x", "y", "z"].iter().zip(m) {
                match e {
                    0 => {}
                    1 => mon.push_str(v),
                    _ => mon.push_str(&format!("{v}^{e}")),
                }
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
            if !a.is_one() || mon.is_empty() {
                out.push_str(&a.to_string());
            }
            out.push_str(&mon);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "base_points": self.base_points.iter().map(|(p, b)| json!({"point": big_vec_json(p.coords()), "mult": b})).collect::<Vec<_>>(),
            "basis": self.basis.iter().map(|f| big_vec_json(f)).collect::<Vec<_>>(),
            "forms": self.basis.iter().map(|f| self.form_string(f)).collect::<Vec<_>>(),
            "non_generic": self.non_generic,
        })
    }
}

pub fn linear_system_basis(a: usize, base_points: Vec<(ProjPoint, usize)>) -> Result<LinearSystem> {
    LinearSystem::new(a, base_points)
}

pub fn height_via_system(q: &ProjPoint, sys: &LinearSystem) -> Result<BigInt> {
    sys.height(q)
}

pub fn embed_via_system(q: &ProjPoint, sys: &LinearSystem) -> Result<ProjPoint> {
    sys.embed(q)
}

/// A rational point of the Hirzebruch surface H_n in Cox coordinates
/// (x1, x2; y1, y2) with deg x = F, deg y1 = S, deg y2 = S + nF.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HirzebruchPoint {
    pub n: u32,
    pub x: [BigInt; 2],
    pub y: [BigInt; 2],
}

impl HirzebruchPoint {
    pub fn new(n: u32, x: [BigInt; 2], y: [BigInt; 2]) -> Result<Self> {
        let (Some(xp), Some(yp)) = (primitive(&x), primitive(&y)) else {
            return Err(Error::InvalidPoint("a Cox coordinate pair vanishes".into()));
        };
        if gcd_all(&x) != BigInt::one() || gcd_all(&y) != BigInt::one() {
            return Err(Error::InvalidPoint("Cox coordinate pairs must be coprime".into()));
        }
        // Rescaling x by -1 changes the sign of y2 by (-1)^n.
        let flip_x = xp[0] != x[0] || xp[1] != x[1];
        let mut y = y;
        if flip_x && n % 2 == 1 {
            y[1] = -&y[1];
        }
        let yp = if flip_x && n % 2 == 1 { primitive(&y).unwrap() } else { yp };
        Ok(HirzebruchPoint {
            n,
            x: [xp[0].clone(), xp[1].clone()],
            y: [yp[0].clone(), yp[1].clone()],
        })
    }

    pub fn from_i64(n: u32, x: [i64; 2], y: [i64; 2]) -> Result<Self> {
        HirzebruchPoint::new(n, [big(x[0]), big(x[1])], [big(y[0]), big(y[1])])
    }
}

/// Exponents (i, j, k, l) of x1^i x2^j y1^k y2^l spanning the sections of
/// aF + bS on H_n.
pub fn cox_monomials(n: u32, a: i64, b: i64) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    if a < 0 || b < 0 {
        return out;
    }
    for l in 0..=b {
        let rest = a - n as i64 * l;
        if rest < 0 {
            break;
        }
        let k = b - l;
        for i in (0..=rest).rev() {
            out.push([i as usize, (rest - i) as usize, k as usize, l as usize]);
        }
    }
    out
}

/// Height of a point of H_n with respect to the class aF + bS.
pub fn cox_height(p: &HirzebruchPoint, a: i64, b: i64) -> Result<BigInt> {
    let vals = cox_values(p, a, b)?;
    let g = gcd_all(&vals);
    if g.is_zero() {
        return Err(Error::BaseLocus("all sections vanish at the point".into()));
    }
    Ok(max_abs(&vals) / g)
}

pub fn cox_values(p: &HirzebruchPoint, a: i64, b: i64) -> Result<Vec<BigInt>> {
    let mons = cox_monomials(p.n, a, b);
    if mons.is_empty() {
        return Err(Error::InvalidParameter(format!("class {a}F + {b}S has no sections")));
    }
    Ok(mons
        .iter()
        .map(|m| pow(&p.x[0], m[0]) * pow(&p.x[1], m[1]) * pow(&p.y[0], m[2]) * pow(&p.y[1], m[3]))
        .collect())
}

/// Height H_1^a H_2^b of q and the max of the factor distances to p.
pub fn product_height_and_distance(
    p: (&ProjPoint, &ProjPoint),
    q: (&ProjPoint, &ProjPoint),
    bidegree: (u32, u32),
) -> Result<(BigInt, BigRational)> {
    if bidegree == (0, 0) {
        return Err(Error::InvalidParameter("bidegree (0, 0) is not ample".into()));
    }
    let d1 = distance(p.0, q.0)?;
    let d2 = distance(p.1, q.1)?;
    let h = pow(&q.0.height(), bidegree.0 as usize) * pow(&q.1.height(), bidegree.1 as usize);
    Ok((h, if d1 > d2 { d1 } else { d2 }))
}

/// Model descriptions accepted in scenario files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    BlowupP2 { system: LinearSystem },
    Hirzebruch { n: u32, a: i64, b: i64 },
    Product { bidegree: (u32, u32) },
}

impl Model {
    pub fn from_json(v: &Value) -> Result<Self> {
        let ty = v
            .get("type")
            .and_then(|t| t.as_str())
            .ok_or_else(|| Error::Parse("model.type missing".into()))?;
        match ty {
            "blowup_p2" => {
                let pts = v
                    .get("points")
                    .and_then(|p| p.as_array())
                    .ok_or_else(|| Error::Parse("model.points missing".into()))?;
                let class = v.get("class").ok_or_else(|| Error::Parse("model.class missing".into()))?;
                let a = class
                    .get("a")
                    .and_then(|a| a.as_u64())
                    .ok_or_else(|| Error::Parse("model.class.a missing".into()))? as usize;
                let bs: Vec<usize> = match class.get("b") {
                    None => vec![1; pts.len()],
                    Some(b) => b
                        .as_array()
                        .ok_or_else(|| Error::Parse("model.class.b must be a list".into()))?
                        .iter()
                        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("model.class.b entries".into())))
                        .collect::<Result<_>>()?,
                };
                if bs.len() != pts.len() {
                    return Err(Error::Parse("model.class.b must match model.points".into()));
                }
                let base = pts
                    .iter()
                    .zip(bs)
                    .map(|(p, b)| Ok((ProjPoint::new(&json_big_vec(p)?)?, b)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Model::BlowupP2 {
                    system: LinearSystem::new(a, base)?,
                })
            }
            "hirzebruch" => {
                let n = v
                    .get("n")
                    .and_then(|n| n.as_u64())
                    .ok_or_else(|| Error::Parse("model.n missing".into()))? as u32;
                let c = v
                    .get("class")
                    .and_then(|c| c.as_array())
                    .filter(|c| c.len() == 2)
                    .ok_or_else(|| Error::Parse("model.class must be [a, b]".into()))?;
                let a = c[0].as_i64().ok_or_else(|| Error::Parse("model.class[0]".into()))?;
                let b = c[1].as_i64().ok_or_else(|| Error::Parse("model.class[1]".into()))?;
                if cox_monomials(n, a, b).is_empty() {
                    return Err(Error::InvalidParameter(format!("class {a}F + {b}S has no sections")));
                }
                Ok(Model::Hirzebruch { n, a, b })
            }
            "product" => {
                let bd = v
                    .get("bidegree")
                    .and_then(|c| c.as_array())
                    .filter(|c| c.len() == 2)
                    .ok_or_else(|| Error::Parse("model.bidegree must be [a, b]".into()))?;
                let a = bd[0].as_u64().ok_or_else(|| Error::Parse("model.bidegree[0]".into()))? as u32;
                let b = bd[1].as_u64().ok_or_else(|| Error::Parse("model.bidegree[1]".into()))? as u32;
                if a == 0 && b == 0 {
                    return Err(Error::InvalidParameter("bidegree (0, 0)".into()));
                }
                Ok(Model::Product { bidegree: (a, b) })
            }
            other => Err(Error::Parse(format!("unknown model type {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bigs;

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(v).unwrap()
    }

    fn four_points() -> Vec<(ProjPoint, usize)> {
        vec![(pt(&[0, 0, 1]), 1), (pt(&[1, 0, 0]), 1), (pt(&[0, 1, 0]), 1), (pt(&[1, 1, 1]), 1)]
    }

    #[test]
    fn conic_pencil() {
        let sys = LinearSystem::new(2, four_points()).unwrap();
        assert_eq!(sys.dimension(), 2);
        assert!(!sys.non_generic);
        // every form lies in the span of xy - xz and yz - xz
        let reference = LinearSystem::from_forms(
            2,
            four_points(),
            vec![bigs(&[0, 1, -1, 0, 0, 0]), bigs(&[0, 0, -1, 0, 1, 0])],
        )
        .unwrap();
        let mut all = reference.basis.clone();
        all.extend(sys.basis.clone());
        assert_eq!(crate::arith::rank(&all), 2);
        let q = pt(&[2, 3, 1]);
        assert_eq!(reference.height(&q).unwrap(), big(4));
        assert_eq!(reference.embed(&q).unwrap(), pt(&[4, 1]));
        assert_eq!(sys.height(&q).unwrap(), big(4));
        assert!(matches!(sys.height(&pt(&[1, 1, 1])), Err(Error::BaseLocus(_))));
    }

    #[test]
    fn small_systems() {
        let lines = LinearSystem::new(1, vec![(pt(&[1, 2, 3]), 1)]).unwrap();
        assert_eq!(lines.dimension(), 2);
        let tri = LinearSystem::new(2, vec![(pt(&[1, 0, 0]), 1), (pt(&[0, 1, 0]), 1), (pt(&[0, 0, 1]), 1)]).unwrap();
        assert_eq!(tri.dimension(), 3);
        let mut forms: Vec<String> = tri.basis.iter().map(|f| tri.form_string(f)).collect();
        forms.sort();
        assert_eq!(forms, vec!["xy", "xz", "yz"]);
        assert_eq!(tri.height(&pt(&[1, 2, 1])).unwrap(), big(2));
        let full = LinearSystem::new(1, vec![]).unwrap();
        for q in [pt(&[3, -7, 2]), pt(&[0, 0, 1]), pt(&[5, 5, 1])] {
            assert_eq!(full.height(&q).unwrap(), q.height());
            assert_eq!(full.embed(&q).unwrap(), q);
        }
        let collinear = LinearSystem::new(1, vec![(pt(&[1, 0, 0]), 1), (pt(&[0, 1, 0]), 1), (pt(&[1, 1, 0]), 1)]).unwrap();
        assert!(collinear.non_generic);
        assert_eq!(collinear.dimension(), 1);
        let double = LinearSystem::new(2, vec![(pt(&[0, 0, 1]), 2)]).unwrap();
        // conics singular at a point: x^2, xy, y^2
        assert_eq!(double.dimension(), 3);
        let empty = LinearSystem::new(1, vec![(pt(&[0, 0, 1]), 2)]).unwrap();
        assert!(empty.is_empty() && !empty.non_generic);
    }

    #[test]
    fn cox_examples() {
        let p = HirzebruchPoint::from_i64(2, [3, 2], [1, 5]).unwrap();
        let mut vals = cox_values(&p, 2, 1).unwrap();
        vals.sort();
        assert_eq!(vals, bigs(&[4, 5, 6, 9]));
        assert_eq!(cox_height(&p, 2, 1).unwrap(), big(9));
        for n in 0..6u32 {
            assert_eq!(cox_monomials(n, n as i64, 1).len(), n as usize + 2);
        }
        assert_eq!(cox_height(&p, 1, 0).unwrap(), big(3));
        assert!(cox_height(&p, -1, 1).is_err());
        let q = HirzebruchPoint::from_i64(3, [-1, 2], [4, 3]).unwrap();
        assert_eq!(q.x, [big(1), big(-2)]);
        assert_eq!(q.y, [big(4), big(-3)]);
    }

    #[test]
    fn products() {
        let j = 10;
        let (h, d) = product_height_and_distance(
            (&pt(&[0, 1]), &pt(&[0, 1])),
            (&pt(&[1, j]), &pt(&[0, 1])),
            (1, 1),
        )
        .unwrap();
        assert_eq!(h, big(10));
        assert_eq!(d, BigRational::new(big(1), big(10)));
        let (h, d) = product_height_and_distance(
            (&pt(&[0, 1]), &pt(&[0, 1])),
            (&pt(&[1, j]), &pt(&[1, j])),
            (1, 1),
        )
        .unwrap();
        assert_eq!(h, big(100));
        assert_eq!(d, BigRational::new(big(1), big(10)));
        let (_, d) = product_height_and_distance((&pt(&[2, 3]), &pt(&[1, 1])), (&pt(&[2, 3]), &pt(&[1, 1])), (1, 1)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn model_json() {
        let m = Model::from_json(&serde_json::json!({
            "type": "blowup_p2", "points": [[0,0,1],[1,0,0],[0,1,0],[1,1,1]], "class": {"a": 2, "b": [1,1,1,1]}
        }))
        .unwrap();
        let Model::BlowupP2 { system } = m else { panic!() };
        assert_eq!(system.dimension(), 2);
        assert!(Model::from_json(&serde_json::json!({"type": "hirzebruch", "n": 2, "class": [-1, 0]})).is_err());
        assert_eq!(
            Model::from_json(&serde_json::json!({"type": "product", "bidegree": [1, 1]})).unwrap(),
            Model::Product { bidegree: (1, 1) }
        );
    }
}
