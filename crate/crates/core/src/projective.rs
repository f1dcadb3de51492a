//! Rational points of projective space over Q with exact heights and the
//! chordal minor-ratio distance.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{max_abs, primitive};
use crate::error::{Error, Result};
use crate::serial::{deserialize_big_vec, serialize_big_vec};

/// A point of P^n(Q) stored as its canonical primitive integer vector:
/// gcd 1 and first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(raw: &[BigInt]) -> Result<Self> {
        normalize(raw)
    }

    pub fn from_i64(raw: &[i64]) -> Result<Self> {
        let v: Vec<BigInt> = raw.iter().map(|&x| BigInt::from(x)).collect();
        normalize(&v)
    }

    /// Wrap a vector already known to be canonical. Debug builds check it.
    pub(crate) fn from_canonical(coords: Vec<BigInt>) -> Self {
        debug_assert_eq!(primitive(&coords).as_ref(), Some(&coords));
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient dimension n of P^n.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn height(&self) -> BigInt {
        max_abs(&self.coords)
    }

    pub fn to_colon_string(&self) -> String {
        self.coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(":")
    }

    pub fn parse_colon(s: &str) -> Result<Self> {
        let v: std::result::Result<Vec<BigInt>, _> =
            s.split(':').map(|t| t.trim().parse::<BigInt>()).collect();
        let v = v.map_err(|_| Error::Parse(format!("bad point {s:?}")))?;
        if v.len() < 2 {
            return Err(Error::Parse(format!("point {s:?} needs at least two coordinates")));
        }
        normalize(&v)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_colon_string())
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_big_vec(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = deserialize_big_vec(d)?;
        if v.len() < 2 {
            return Err(serde::de::Error::custom("point needs at least two coordinates"));
        }
        normalize(&v).map_err(serde::de::Error::custom)
    }
}

pub fn normalize(raw: &[BigInt]) -> Result<ProjPoint> {
    if raw.len() < 2 {
        return Err(Error::InvalidPoint(format!(
            "need at least two coordinates, got {}",
            raw.len()
        )));
    }
    primitive(raw)
        .map(|coords| ProjPoint { coords })
        .ok_or_else(|| Error::InvalidPoint("all coordinates are zero".into()))
}

pub fn height(p: &ProjPoint) -> BigInt {
    p.height()
}

fn check_dims(p: &ProjPoint, q: &ProjPoint) -> Result<()> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

/// Largest absolute 2x2 minor of the pair (x, y).
pub fn max_minor(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut best = BigInt::zero();
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            let m = (&x[i] * &y[j] - &x[j] * &y[i]).abs();
            if m > best {
                best = m;
            }
        }
    }
    best
}

/// max_{i<j} |x_i y_j - x_j y_i| / (H(x) H(y)).
pub fn distance(p: &ProjPoint, q: &ProjPoint) -> Result<BigRational> {
    check_dims(p, q)?;
    Ok(BigRational::new(
        max_minor(&p.coords, &q.coords),
        p.height() * q.height(),
    ))
}

/// max_j |p_j/p_c - q_j/q_c| in the affine chart x_c != 0.
pub fn affine_chart_distance(p: &ProjPoint, q: &ProjPoint, chart: usize) -> Result<BigRational> {
    check_dims(p, q)?;
    if chart > p.dim() {
        return Err(Error::InvalidParameter(format!(
            "chart {chart} out of range for P^{}",
            p.dim()
        )));
    }
    if p.coords[chart].is_zero() {
        return Err(Error::ZeroChart(chart));
    }
    if q.coords[chart].is_zero() {
        return Err(Error::ZeroChart(chart));
    }
    let mut best = BigRational::zero();
    for j in 0..p.coords.len() {
        if j == chart {
            continue;
        }
        let a = BigRational::new(p.coords[j].clone(), p.coords[chart].clone());
        let b = BigRational::new(q.coords[j].clone(), q.coords[chart].clone());
        let d = (a - b).abs();
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// A line of P^2 by its normalized dual coordinates [a:b:c], ax+by+cz=0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineInP2 {
    pub dual: ProjPoint,
}

impl LineInP2 {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.dim() == 2
            && self
                .dual
                .coords
                .iter()
                .zip(&p.coords)
                .map(|(a, x)| a * x)
                .sum::<BigInt>()
                .is_zero()
    }

    /// Height of the dual coordinates.
    pub fn plucker_height(&self) -> BigInt {
        self.dual.height()
    }
}

pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<LineInP2> {
    check_dims(p, q)?;
    if p.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "lines are in P^2, got P^{}",
            p.dim()
        )));
    }
    if p == q {
        return Err(Error::SamePoint);
    }
    let (x, y) = (&p.coords, &q.coords);
    let cross = [
        &x[1] * &y[2] - &x[2] * &y[1],
        &x[2] * &y[0] - &x[0] * &y[2],
        &x[0] * &y[1] - &x[1] * &y[0],
    ];
    Ok(LineInP2 {
        dual: normalize(&cross)?,
    })
}
