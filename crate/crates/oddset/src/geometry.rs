//! Points, exact ℓ1 distances, odd-distance certificates, and the
//! half-integer parity audit.
//!
//! A [`PointSet`] is an ordered list of pairwise-distinct points in a common
//! dimension; order matters because the construction and its golden tests
//! are deterministic. [`verify_odd_set`] produces a complete certificate
//! covering every unordered pair, and [`parity_audit`] checks the two
//! pigeonhole conditions every odd-distance subset of (½ℤ)^n must satisfy:
//! uniform fingerprint weight parity and fibers of size at most two.

use std::collections::HashMap;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{classify_rational, NumberClass, Rational};

/// A point with exact rational coordinates. Comparison, ordering and
/// hashing are coordinate-wise lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    /// Requires at least one coordinate.
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Panics when `i` is out of range, like slice indexing.
    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An ordered list of pairwise-distinct points sharing one dimension.
/// The list may be empty; the dimension is always at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Point>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        for (index, p) in points.iter().enumerate() {
            if p.dim() != dimension {
                return Err(Error::PointDimension {
                    index,
                    got: p.dim(),
                    expected: dimension,
                });
            }
        }
        let mut seen: HashMap<&Point, usize> = HashMap::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(Error::DuplicatePoint {
                    first,
                    second: index,
                });
            }
            seen.insert(p, index);
        }
        drop(seen);
        Ok(Self { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

/// Exact ℓ1 distance ∑ᵢ |pᵢ − qᵢ|. Errors when dimensions differ.
pub fn l1_distance(p: &Point, q: &Point) -> Result<Rational> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(l1_unchecked(p, q))
}

pub(crate) fn l1_unchecked(p: &Point, q: &Point) -> Rational {
    let mut sum = Rational::zero();
    for (a, b) in p.coords.iter().zip(&q.coords) {
        sum += (a - b).abs();
    }
    sum
}

/// One unordered pair of a certificate: indices, exact distance, and
/// whether that distance is an odd integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    pub distance: Rational,
    pub is_odd_integer: bool,
}

/// Complete record of every pairwise distance of a point set. The verdict
/// is the conjunction of all per-pair oddness flags, so empty and singleton
/// sets verify vacuously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCertificate {
    pub set_size: usize,
    /// Every unordered pair exactly once, in (i, j), i < j, row-major order.
    pub pair_results: Vec<PairResult>,
    pub verdict: bool,
}

impl OddCertificate {
    /// The first pair whose distance is not an odd integer, if any.
    pub fn first_failure(&self) -> Option<&PairResult> {
        self.pair_results.iter().find(|r| !r.is_odd_integer)
    }
}

/// Checks whether all pairwise distances are odd integers and returns the
/// full certificate. Failure is a verdict, never an error.
///
/// The pairwise loop is partitioned across worker threads; the certificate
/// is identical regardless of partitioning because rows are reassembled in
/// index order.
pub fn verify_odd_set(ps: &PointSet) -> OddCertificate {
    match half_unit_rows(ps) {
        Some(rows) => verify_half_units(ps.len(), &rows),
        None => verify_generic(ps),
    }
}

/// Coordinates scaled by 2 into `i64`, when every coordinate lies in ½ℤ and
/// is small enough that a full ℓ1 sum cannot overflow. This covers every
/// constructed and searched set; rationalized sets with large denominators
/// fall back to the generic path.
pub(crate) fn half_unit_rows(ps: &PointSet) -> Option<Vec<Vec<i64>>> {
    // |half| bounded so that ∑ |aᵢ − bᵢ| ≤ dim · 2 · bound stays in range.
    let bound = i64::MAX / 4 / ps.dimension() as i64;
    ps.iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| {
                    let numer = c.numer().to_i64()?;
                    let half = match c.denom().to_i64()? {
                        1 => numer.checked_mul(2)?,
                        2 => numer,
                        _ => return None,
                    };
                    (half.abs() <= bound).then_some(half)
                })
                .collect()
        })
        .collect()
}

/// Whether the distance s/2 given by half-unit coordinate rows is an odd
/// integer: exactly when s ≡ 2 (mod 4).
pub(crate) fn half_units_odd(a: &[i64], b: &[i64]) -> bool {
    let s: i64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    s % 4 == 2
}

fn verify_half_units(size: usize, rows: &[Vec<i64>]) -> OddCertificate {
    let pair_results: Vec<PairResult> = rows
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, a)| {
            rows[i + 1..].iter().enumerate().map(move |(off, b)| {
                let s: i64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
                PairResult {
                    i,
                    j: i + 1 + off,
                    distance: Rational::new(BigInt::from(s), BigInt::from(2)),
                    is_odd_integer: s % 4 == 2,
                }
            })
        })
        .collect();
    let verdict = pair_results.iter().all(|r| r.is_odd_integer);
    OddCertificate {
        set_size: size,
        pair_results,
        verdict,
    }
}

fn verify_generic(ps: &PointSet) -> OddCertificate {
    let points = ps.points();
    let pair_results: Vec<PairResult> = points
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, a)| {
            points[i + 1..].iter().enumerate().map(move |(off, b)| {
                let distance = l1_unchecked(a, b);
                let is_odd_integer = crate::rational::is_odd_integer(&distance);
                PairResult {
                    i,
                    j: i + 1 + off,
                    distance,
                    is_odd_integer,
                }
            })
        })
        .collect();
    let verdict = pair_results.iter().all(|r| r.is_odd_integer);
    OddCertificate {
        set_size: ps.len(),
        pair_results,
        verdict,
    }
}

/// Fingerprint parity classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Per-point fingerprints, fiber sizes, and fingerprint weight parities,
/// together with the two pigeonhole flags they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityAudit {
    /// One binary vector per point; bit i is set iff coordinate i ∈ ℤ + 1/2.
    pub fingerprints: Vec<Vec<bool>>,
    /// How many points share each fingerprint, keyed deterministically.
    pub fiber_sizes: BTreeMap<Vec<bool>, usize>,
    /// Parity of the number of set bits in each fingerprint.
    pub weight_parities: Vec<Parity>,
    /// All weight parities agree (vacuously true for fewer than two points).
    pub uniform_weight_parity: bool,
    /// Every fiber holds at most two points.
    pub fibers_within_two: bool,
}

/// The indicator vector of which coordinates are strict half-integers.
/// Errors when any coordinate lies outside ½ℤ.
pub fn phi_fingerprint(p: &Point) -> Result<Vec<bool>> {
    p.coords()
        .iter()
        .map(|c| match classify_rational(c) {
            NumberClass::StrictHalfInteger => Ok(true),
            NumberClass::OddInteger | NumberClass::EvenInteger => Ok(false),
            _ => Err(Error::NotHalfIntegral { value: c.clone() }),
        })
        .collect()
}

/// Audits the two necessary conditions for odd-distance sets in (½ℤ)^n:
/// all fingerprint weights share one parity, and no fingerprint repeats
/// more than twice. Together these cap such a set at 2^n points.
pub fn parity_audit(ps: &PointSet) -> Result<ParityAudit> {
    let fingerprints = ps
        .iter()
        .map(phi_fingerprint)
        .collect::<Result<Vec<_>>>()?;
    let weight_parities: Vec<Parity> = fingerprints
        .iter()
        .map(|f| {
            if f.iter().filter(|&&b| b).count() % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            }
        })
        .collect();
    let mut fiber_sizes: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for f in &fingerprints {
        *fiber_sizes.entry(f.clone()).or_insert(0) += 1;
    }
    let uniform_weight_parity = weight_parities.windows(2).all(|w| w[0] == w[1]);
    let fibers_within_two = fiber_sizes.values().all(|&c| c <= 2);
    Ok(ParityAudit {
        fingerprints,
        fiber_sizes,
        weight_parities,
        uniform_weight_parity,
        fibers_within_two,
    })
}
