//! Parametrized rational curves P^1 -> P^n given by binary forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{qi, Q};
use crate::error::{Error, Result};
use crate::projective::{normalize, ProjPoint};
use crate::serial::{deserialize_big_vec, serialize_big_vec};

/// A binary form of degree d, coefficient k multiplying s^(d-k) t^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryForm {
    #[serde(serialize_with = "serialize_big_vec", deserialize_with = "deserialize_big_vec")]
    pub coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        BinaryForm { coeffs }
    }

    /// c * s^i t^j
    pub fn monomial(c: i64, i: usize, j: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); i + j + 1];
        coeffs[j] = BigInt::from(c);
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &BigInt, t: &BigInt) -> BigInt {
        let d = self.degree();
        let mut spow = vec![BigInt::one(); d + 1];
        let mut tpow = vec![BigInt::one(); d + 1];
        for k in 1..=d {
            spow[k] = &spow[k - 1] * s;
            tpow[k] = &tpow[k - 1] * t;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &spow[d - k] * &tpow[k])
            .sum()
    }

    /// f(c u + a, e u + b) as a polynomial in u (index = power).
    fn substitute(&self, c: &BigInt, a: &BigInt, e: &BigInt, b: &BigInt) -> Vec<BigInt> {
        let d = self.degree();
        let lin_s = vec![a.clone(), c.clone()];
        let lin_t = vec![b.clone(), e.clone()];
        let mut out = vec![BigInt::zero(); d + 1];
        for (k, ck) in self.coeffs.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let term = poly_mul(&poly_pow(&lin_s, d - k), &poly_pow(&lin_t, k));
            for (i, x) in term.iter().enumerate() {
                out[i] += ck * x;
            }
        }
        out
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[BigInt], e: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..e {
        out = poly_mul(&out, a);
    }
    out
}

/// Lowest power with nonzero coefficient, `None` for the zero polynomial.
fn order(p: &[BigInt]) -> Option<usize> {
    p.iter().position(|c| !c.is_zero())
}

// Univariate gcd over Q, polynomials stored lowest power first.
fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            let t = &f * c;
            r[i + shift] -= t;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// A rational curve given by n+1 binary forms of a common degree d without
/// common factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCurve {
    pub label: String,
    pub components: Vec<BinaryForm>,
}

impl ParamCurve {
    pub fn new(label: &str, components: Vec<BinaryForm>) -> Result<Self> {
        let c = ParamCurve {
            label: label.to_string(),
            components,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.len() < 2 {
            return Err(Error::InvalidCurve("need at least two components".into()));
        }
        let d = self.components[0].coeffs.len();
        if d < 2 {
            return Err(Error::InvalidCurve("degree must be at least 1".into()));
        }
        if self.components.iter().any(|f| f.coeffs.len() != d) {
            return Err(Error::InvalidCurve(
                "components must share one homogeneous degree".into(),
            ));
        }
        if self.components.iter().all(|f| f.is_zero()) {
            return Err(Error::InvalidCurve("all components are zero".into()));
        }
        // t divides every form iff every s^d coefficient vanishes.
        if self.components.iter().all(|f| f.coeffs[0].is_zero()) {
            return Err(Error::InvalidCurve("components share the factor t".into()));
        }
        // Other common factors show up in the gcd of f(x, 1), lowest power first.
        let mut g: Vec<Q> = Vec::new();
        for f in &self.components {
            let p: Vec<Q> = f.coeffs.iter().rev().map(qi).collect();
            g = if g.is_empty() { p } else { poly_gcd(&g, &p) };
            trim(&mut g);
        }
        if g.len() > 1 {
            return Err(Error::InvalidCurve("components share a common factor".into()));
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn evaluate(&self, t: &ProjPoint) -> ProjPoint {
        assert_eq!(t.dim(), 1, "curve parameters live in P^1");
        let (s, tt) = (&t.coords()[0], &t.coords()[1]);
        let v: Vec<BigInt> = self.components.iter().map(|f| f.eval(s, tt)).collect();
        normalize(&v).expect("coprime forms have no common zero")
    }

    pub fn branch_multiplicity(&self, t0: &ProjPoint) -> usize {
        let p = self.evaluate(t0);
        let j = p
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero point");
        let (a, b) = (&t0.coords()[0], &t0.coords()[1]);
        // Second column of the parameter change is t0; the first completes a basis.
        let (c, e) = if !b.is_zero() {
            (BigInt::one(), BigInt::zero())
        } else {
            (BigInt::zero(), BigInt::one())
        };
        let g: Vec<Vec<BigInt>> = self
            .components
            .iter()
            .map(|f| f.substitute(&c, a, &e, b))
            .collect();
        let pj = &p.coords()[j];
        let mut best: Option<usize> = None;
        for (i, gi) in g.iter().enumerate() {
            if i == j {
                continue;
            }
            let pi = &p.coords()[i];
            let expr: Vec<BigInt> = gi.iter().zip(&g[j]).map(|(x, y)| x * pj - y * pi).collect();
            if let Some(o) = order(&expr) {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        best.expect("a nonconstant curve moves away from every point")
    }

    /// e * d / m
    pub fn alpha_along(&self, t0: &ProjPoint, embedding_degree: u64) -> BigRational {
        assert!(embedding_degree >= 1, "embedding degree must be positive");
        BigRational::new(
            BigInt::from(embedding_degree) * BigInt::from(self.degree()),
            BigInt::from(self.branch_multiplicity(t0)),
        )
    }

    /// Parameters j*t0 + u for j = 1..=count, with u = [1,0] unless t0 = [1,0].
    pub fn best_sequence_parameters(t0: &ProjPoint, count: usize) -> Vec<ProjPoint> {
        assert_eq!(t0.dim(), 1);
        let (a, b) = (&t0.coords()[0], &t0.coords()[1]);
        let u = if !b.is_zero() { (1, 0) } else { (0, 1) };
        (1..=count as i64)
            .map(|j| {
                let j = BigInt::from(j);
                normalize(&[&j * a + u.0, &j * b + u.1]).expect("nonzero parameter")
            })
            .collect()
    }

    pub fn best_sequence(&self, t0: &ProjPoint, count: usize) -> Vec<ProjPoint> {
        Self::best_sequence_parameters(t0, count)
            .iter()
            .map(|p| self.evaluate(p))
            .collect()
    }

    /// Read from {"label": .., "components": [[..], ..]}.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let c: ParamCurve =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

pub fn evaluate(curve: &ParamCurve, t: &ProjPoint) -> ProjPoint {
    curve.evaluate(t)
}

pub fn degree(curve: &ParamCurve) -> usize {
    curve.degree()
}

pub fn branch_multiplicity(curve: &ParamCurve, t0: &ProjPoint) -> usize {
    curve.branch_multiplicity(t0)
}

pub fn alpha_along_curve(curve: &ParamCurve, t0: &ProjPoint, e: u64) -> BigRational {
    curve.alpha_along(t0, e)
}

pub fn best_sequence(curve: &ParamCurve, t0: &ProjPoint, count: usize) -> Vec<ProjPoint> {
    curve.best_sequence(t0, count)
}

/// Named curves used by fixtures and the CLI.
pub mod named {
    use super::*;

    /// [s t^2 : t^3 : s^3], cusp at [1,0] -> [0:0:1].
    pub fn cuspidal_cubic() -> ParamCurve {
        ParamCurve::new(
            "cuspidal_cubic",
            vec![
                BinaryForm::monomial(1, 1, 2),
                BinaryForm::monomial(1, 0, 3),
                BinaryForm::monomial(1, 3, 0),
            ],
        )
        .unwrap()
    }

    /// [s^2 t^3 : t^5 : s^5]
    pub fn quintic_cusp() -> ParamCurve {
        ParamCurve::new(
            "quintic_cusp",
            vec![
                BinaryForm::monomial(1, 2, 3),
                BinaryForm::monomial(1, 0, 5),
                BinaryForm::monomial(1, 5, 0),
            ],
        )
        .unwrap()
    }

    /// The identity parametrization [s : t] of P^1.
    pub fn line() -> ParamCurve {
        ParamCurve::new(
            "line",
            vec![BinaryForm::monomial(1, 1, 0), BinaryForm::monomial(1, 0, 1)],
        )
        .unwrap()
    }

    /// [s^3 : s^2 t : s t^2 : t^3]
    pub fn twisted_cubic() -> ParamCurve {
        ParamCurve::new(
            "twisted_cubic",
            (0..=3).map(|k| BinaryForm::monomial(1, 3 - k, k)).collect(),
        )
        .unwrap()
    }

    /// [s^2 : s t : t^2]
    pub fn conic() -> ParamCurve {
        ParamCurve::new(
            "conic",
            (0..=2).map(|k| BinaryForm::monomial(1, 2 - k, k)).collect(),
        )
        .unwrap()
    }
}
