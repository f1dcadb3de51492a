//! Exact polyhedral cones in a Néron–Severi lattice.
//!
//! Conversions between generators and inequalities use the double
//! description method over the integers: rays are kept primitive and every
//! new ray is an integer combination of two adjacent old ones.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{clear_denominators, dot, gcd_all, inverse, kernel, qi, rank, to_q, Q};
use crate::error::{Error, Result};
use crate::nslattice::{DivisorClass, NSLattice};
use crate::serial::{big_vec_json, json_big_matrix};

pub const RANK_CAP: usize = 10;

/// Generators of {y : a.y >= 0 for every row a}, with the lineality space
/// listed separately (each basis vector stands for both signs).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl VRep {
    /// Rays together with both signs of every lineality vector.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out
    }
}

fn ray_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_all(&v);
    if g.is_zero() || g == BigInt::from(1) {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

type Bits = Vec<u64>;

fn bits_new(len: usize) -> Bits {
    vec![0; len.div_ceil(64).max(1)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_count(a: &Bits) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Double description: the extreme rays and lineality space of the cone
/// cut out by `rows` in dimension `n`.
pub fn double_description(rows: &[Vec<BigInt>], n: usize) -> VRep {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let qrows: Vec<Vec<Q>> = rows.iter().map(|r| to_q(r)).collect();
    let lineality: Vec<Vec<BigInt>> = if qrows.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect()
    } else {
        kernel(&qrows, n).iter().map(|k| clear_denominators(k)).collect()
    };
    if lineality.len() == n {
        return VRep {
            rays: Vec::new(),
            lineality,
        };
    }
    // Restrict to the complement of the lineality space so the cone is
    // pointed and the rows have full column rank.
    let mut all = rows;
    for l in &lineality {
        all.push(l.clone());
        all.push(l.iter().map(|x| -x).collect());
    }
    let total = all.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, r) in all.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
            if chosen.len() == n {
                break;
            }
        } else {
            basis.pop();
        }
    }
    debug_assert_eq!(chosen.len(), n);
    let b: Vec<Vec<Q>> = chosen.iter().map(|&i| to_q(&all[i])).collect();
    let inv = inverse(&b).expect("chosen rows are independent");
    let mut rays: Vec<(Vec<BigInt>, Bits)> = (0..n)
        .map(|k| {
            let col: Vec<Q> = (0..n).map(|r| inv[r][k].clone()).collect();
            let mut z = bits_new(total);
            for (t, &ci) in chosen.iter().enumerate() {
                if t != k {
                    bit_set(&mut z, ci);
                }
            }
            (ray_primitive(clear_denominators(&col)), z)
        })
        .collect();
    for (i, a) in all.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, (_, z)) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    bit_set(z, i);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<BigInt>, Bits)> = Vec::new();
        for (k, (r, z)) in rays.iter().enumerate() {
            if vals[k].is_positive() {
                next.push((r.clone(), z.clone()));
            } else if vals[k].is_zero() {
                let mut z = z.clone();
                bit_set(&mut z, i);
                next.push((r.clone(), z));
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].1, &rays[q].1);
                if bits_count(&common) + 2 < n {
                    continue;
                }
                let blocked = (0..rays.len())
                    .any(|t| t != p && t != q && bits_subset(&common, &rays[t].1));
                if blocked {
                    continue;
                }
                let (vp, vq) = (&vals[p], &vals[q]);
                let r: Vec<BigInt> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(xq, xp)| vp * xq - vq * xp)
                    .collect();
                let mut z = common;
                bit_set(&mut z, i);
                next.push((ray_primitive(r), z));
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    out.dedup();
    VRep {
        rays: out,
        lineality,
    }
}

/// Outcome of a membership query. A point outside the cone comes with a
/// linear form that is nonnegative on the cone and negative on the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub contained: bool,
    /// Euclidean normal h with h.g >= 0 for all generators g and h.d < 0.
    pub certificate: Option<Vec<BigInt>>,
}

/// A rational polyhedral cone given by primitive integer generators.
#[derive(Clone, Debug)]
pub struct Cone {
    lattice: Arc<NSLattice>,
    generators: Vec<Vec<BigInt>>,
    normals: OnceLock<Vec<Vec<BigInt>>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.lattice == other.lattice
    }
}

impl Eq for Cone {}

impl Cone {
    pub fn new(lattice: Arc<NSLattice>, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = lattice.rank();
        if n > RANK_CAP {
            return Err(Error::RankCap(n, RANK_CAP));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch(g.len(), n));
            }
            if g.iter().all(|x| x.is_zero()) {
                continue;
            }
            gens.push(ray_primitive(g));
        }
        gens.sort();
        gens.dedup();
        Ok(Cone {
            lattice,
            generators: gens,
            normals: OnceLock::new(),
        })
    }

    pub fn from_classes(classes: &[DivisorClass]) -> Result<Self> {
        let first = classes
            .first()
            .ok_or_else(|| Error::DegenerateCone("no generators".into()))?;
        if classes.iter().any(|c| !c.same_lattice(first)) {
            return Err(Error::LatticeMismatch);
        }
        Cone::new(
            first.lattice.clone(),
            classes.iter().map(|c| clear_denominators(&c.coeffs)).collect(),
        )
    }

    pub fn lattice(&self) -> &Arc<NSLattice> {
        &self.lattice
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        if self.generators.is_empty() {
            0
        } else {
            rank(&self.generators)
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.lattice.rank()
    }

    /// Euclidean inequalities h.x >= 0 cutting out the cone.
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        self.normals.get_or_init(|| {
            double_description(&self.generators, self.lattice.rank()).generators()
        })
    }

    /// Extremal rays (and both signs of any lineality directions).
    pub fn extremal_rays(&self) -> Cone {
        let v = double_description(self.facet_normals(), self.lattice.rank());
        Cone::new(self.lattice.clone(), v.generators()).expect("same lattice")
    }

    /// {y : x.y >= 0 for all generators x} under the lattice pairing.
    pub fn dual(&self) -> Result<Cone> {
        if self.generators.is_empty() {
            return Err(Error::DegenerateCone("zero-dimensional cone".into()));
        }
        let rows: Vec<Vec<BigInt>> = self.generators.iter().map(|g| self.lattice.form(g)).collect();
        let v = double_description(&rows, self.lattice.rank());
        Cone::new(self.lattice.clone(), v.generators())
    }

    pub fn membership(&self, d: &[Q]) -> Result<Membership> {
        if d.len() != self.lattice.rank() {
            return Err(Error::DimensionMismatch(d.len(), self.lattice.rank()));
        }
        for h in self.facet_normals() {
            let v = h
                .iter()
                .zip(d)
                .filter(|(x, _)| !x.is_zero())
                .fold(Q::zero(), |s, (x, y)| s + qi(x) * y);
            if v.is_negative() {
                return Ok(Membership {
                    contained: false,
                    certificate: Some(h.clone()),
                });
            }
        }
        Ok(Membership {
            contained: true,
            certificate: None,
        })
    }

    pub fn contains(&self, d: &DivisorClass) -> Result<bool> {
        if d.lattice.as_ref() != self.lattice.as_ref() {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.membership(&d.coeffs)?.contained)
    }

    pub fn contains_vec(&self, d: &[BigInt]) -> Result<bool> {
        Ok(self.membership(&to_q(d))?.contained)
    }

    /// Same cone, compared by extremal rays.
    pub fn same_cone(&self, other: &Cone) -> bool {
        self.lattice == other.lattice && self.extremal_rays().generators == other.extremal_rays().generators
    }

    /// The sum of the generators.
    pub fn sample_interior(&self) -> Result<DivisorClass> {
        if !self.is_full_dimensional() {
            return Err(Error::DegenerateCone(format!(
                "cone has dimension {} in rank {}",
                self.dim(),
                self.lattice.rank()
            )));
        }
        let n = self.lattice.rank();
        let mut s = vec![BigInt::zero(); n];
        for g in &self.generators {
            for (a, x) in s.iter_mut().zip(g) {
                *a += x;
            }
        }
        DivisorClass::new(self.lattice.clone(), s)
    }

    /// Random strictly positive integer combinations of the generators.
    pub fn random_interior<R: Rng>(&self, rng: &mut R, count: usize, max_weight: u32) -> Result<Vec<DivisorClass>> {
        if !self.is_full_dimensional() {
            return Err(Error::DegenerateCone("cone is not full-dimensional".into()));
        }
        let n = self.lattice.rank();
        (0..count)
            .map(|_| {
                let mut s = vec![BigInt::zero(); n];
                for g in &self.generators {
                    let w = BigInt::from(rng.gen_range(1..=max_weight.max(1)));
                    for (a, x) in s.iter_mut().zip(g) {
                        *a += &w * x;
                    }
                }
                DivisorClass::new(self.lattice.clone(), s)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lattice": self.lattice.to_json(),
            "generators": self.generators.iter().map(|g| big_vec_json(g)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let lat = NSLattice::from_json(
            v.get("lattice")
                .ok_or_else(|| Error::Parse("cone.lattice missing".into()))?,
        )?;
        let gens = json_big_matrix(
            v.get("generators")
                .ok_or_else(|| Error::Parse("cone.generators missing".into()))?,
        )?;
        Cone::new(Arc::new(lat), gens)
    }
}

pub fn dual_cone(c: &Cone) -> Result<Cone> {
    c.dual()
}

pub fn contains(c: &Cone, d: &DivisorClass) -> Result<bool> {
    c.contains(d)
}

pub fn is_dual_pair(a: &Cone, b: &Cone) -> Result<bool> {
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch);
    }
    let ab = a.dual()?;
    let ba = b.dual()?;
    Ok(ab.generators == b.extremal_rays().generators && ba.generators == a.extremal_rays().generators)
}

/// Numerical Nakai test against a list the caller vouches contains every
/// negative curve.
pub fn nakai_ample(d: &DivisorClass, effective: &[DivisorClass]) -> bool {
    let Ok(dd) = d.dot(d) else { return false };
    if !dd.is_positive() {
        return false;
    }
    effective
        .iter()
        .all(|c| d.dot(c).map(|x| x.is_positive()).unwrap_or(false))
}

/// A cell of a subdivision: the part of the nef cone where `candidate`
/// has the least weighted degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub candidate: usize,
    pub cone: Cone,
}

/// Split `nef` by which candidate C minimises D.C. Cells that are not
/// full-dimensional are dropped.
pub fn subdivide_by_min_degree(nef: &Cone, candidates: &[DivisorClass]) -> Result<Vec<Cell>> {
    let weighted: Vec<Vec<Q>> = candidates.iter().map(|c| c.coeffs.clone()).collect();
    subdivide_weighted(nef, &weighted)
}

/// As `subdivide_by_min_degree`, with each candidate already divided by its
/// weight (for example C/m with m a branch multiplicity).
pub fn subdivide_weighted(nef: &Cone, candidates: &[Vec<Q>]) -> Result<Vec<Cell>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let n = nef.lattice.rank();
    if let Some(c) = candidates.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch(c.len(), n));
    }
    let normals = nef.facet_normals().to_vec();
    let lat = nef.lattice.clone();
    let cells: Vec<Option<Cell>> = (0..candidates.len())
        .into_par_iter()
        .map(|i| {
            let mut rows = normals.clone();
            for (j, other) in candidates.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff: Vec<Q> = other.iter().zip(&candidates[i]).map(|(a, b)| a - b).collect();
                let diff = clear_denominators(&diff);
                if diff.iter().all(|x| x.is_zero()) {
                    continue;
                }
                rows.push(lat.form(&diff));
            }
            let v = double_description(&rows, n);
            let cone = Cone::new(lat.clone(), v.generators()).ok()?;
            cone.is_full_dimensional().then_some(Cell { candidate: i, cone })
        })
        .collect();
    Ok(cells.into_iter().flatten().collect())
}

pub fn sample_interior(c: &Cone) -> Result<DivisorClass> {
    c.sample_interior()
}
