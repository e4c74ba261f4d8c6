//! The doubling construction: 2^n points in (½ℤ)^n with all pairwise ℓ1
//! distances odd.
//!
//! The induction has three independently testable steps. [`spread_translate`]
//! shifts the points apart along one coordinate by even amounts, which
//! preserves every distance parity. [`dim2_pair`] splits a single ½ℤ value
//! into two points of the plane whose coordinates sum to it and sit within
//! half a unit of its midpoint; the pair is distance 1 apart. The split is
//! exactly what [`extend_dimension`] applies to coordinate 0 of every point:
//! thanks to the spread, any cross pair of the doubled set keeps the old
//! distance of its parents, so oddness survives while the dimension and the
//! size both grow. [`build_odd_set`] folds the steps starting from {(0), (1)}.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::rational::{is_half_integral, rat, Rational};

/// Two points of the plane whose coordinates each sum to `target_sum`, at
/// ℓ1 distance exactly 1, with every coordinate inside
/// [target_sum/2 − 1/2, target_sum/2 + 1/2]. Built by [`dim2_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dim2Pair {
    pub target_sum: Rational,
    pub first: Point,
    pub second: Point,
}

/// Splits a ½ℤ value into its two-point plane pair.
///
/// Integer x yields (x/2 + 1/2, x/2 − 1/2) and (x/2, x/2); strict
/// half-integer x yields (x/2 + 1/4, x/2 − 1/4) and (x/2 − 1/4, x/2 + 1/4).
/// The pair order is fixed; the construction's golden values depend on it.
pub fn dim2_pair(x: &Rational) -> Result<Dim2Pair> {
    if !is_half_integral(x) {
        return Err(Error::NotHalfIntegral { value: x.clone() });
    }
    let half = x / rat(2, 1);
    let offset = if x.is_integer() { rat(1, 2) } else { rat(1, 4) };
    let (first, second) = if x.is_integer() {
        (
            vec![&half + &offset, &half - &offset],
            vec![half.clone(), half],
        )
    } else {
        (
            vec![&half + &offset, &half - &offset],
            vec![&half - &offset, &half + &offset],
        )
    };
    Ok(Dim2Pair {
        target_sum: x.clone(),
        first: Point::new(first)?,
        second: Point::new(second)?,
    })
}

/// Sorts by coordinate `coord` (ties broken by full lexicographic order)
/// and shifts the point of 1-based rank i by 2i along that coordinate.
/// Returns the shifted points in sorted order together with the permutation
/// mapping each output position to its original index.
///
/// For the pair at sorted ranks i < j the distance grows by exactly
/// 2(j − i), an even amount, so every distance parity is preserved and the
/// output is strictly increasing, with gaps ≥ 2, along `coord`.
pub(crate) fn spread_pass(ps: &PointSet, coord: usize) -> Result<(Vec<Point>, Vec<usize>)> {
    if coord >= ps.dimension() {
        return Err(Error::CoordOutOfRange {
            coord,
            dimension: ps.dimension(),
        });
    }
    let points = ps.points();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .coord(coord)
            .cmp(points[b].coord(coord))
            .then_with(|| points[a].cmp(&points[b]))
    });
    let shifted = order
        .iter()
        .enumerate()
        .map(|(rank0, &orig)| {
            let mut cs = points[orig].coords().to_vec();
            cs[coord] += Rational::from_integer(BigInt::from(2 * (rank0 as u64 + 1)));
            Point::new(cs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((shifted, order))
}

/// The even-translation step: sorts by `coord` (ties broken
/// lexicographically) and shifts the point at 1-based rank i by 2i along
/// `coord`, so the pair at ranks i < j moves apart by exactly 2(j − i).
/// Every distance changes by an even amount and the output, in sorted
/// order, has gaps of at least 2 along `coord`.
pub fn spread_translate(ps: &PointSet, coord: usize) -> Result<PointSet> {
    let (points, _) = spread_pass(ps, coord)?;
    PointSet::new(ps.dimension(), points)
}

/// The doubling step: replaces coordinate 0 of every point by its
/// [`dim2_pair`] split, producing 2·|ps| points in dimension n + 1, ordered
/// pair by pair in the input point order.
///
/// Requires all coordinates in ½ℤ and any two points at least 2 apart in
/// coordinate 0 (what [`spread_translate`] establishes). Under that spread,
/// the two-coordinate blocks of a cross pair are exactly as far apart as
/// the old coordinate-0 values were, so cross pairs keep their old distance
/// while the two siblings of each point end up at distance 1.
pub fn extend_dimension(ps: &PointSet) -> Result<PointSet> {
    for p in ps.iter() {
        for c in p.coords() {
            if !is_half_integral(c) {
                return Err(Error::NotHalfIntegral { value: c.clone() });
            }
        }
    }
    let points = ps.points();
    let mut by_coord0: Vec<usize> = (0..points.len()).collect();
    by_coord0.sort_by(|&a, &b| points[a].coord(0).cmp(points[b].coord(0)));
    for w in by_coord0.windows(2) {
        let gap = points[w[1]].coord(0) - points[w[0]].coord(0);
        if gap < rat(2, 1) {
            return Err(Error::SpreadTooNarrow {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
                gap,
            });
        }
    }
    let mut out = Vec::with_capacity(points.len() * 2);
    for p in points {
        let pair = dim2_pair(p.coord(0))?;
        for half in [pair.first, pair.second] {
            let mut cs = half.coords().to_vec();
            cs.extend_from_slice(&p.coords()[1..]);
            out.push(Point::new(cs)?);
        }
    }
    PointSet::new(ps.dimension() + 1, out)
}

/// The full construction: starting from {(0), (1)} in dimension 1, apply
/// spread-then-extend n − 1 times. The result has exactly 2^n points in
/// (½ℤ)^n, all pairwise distances odd, in a deterministic order.
pub fn build_odd_set(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut ps = PointSet::new(
        1,
        vec![
            Point::new(vec![Rational::zero()])?,
            Point::new(vec![Rational::one()])?,
        ],
    )?;
    for _ in 1..n {
        ps = extend_dimension(&spread_translate(&ps, 0)?)?;
    }
    Ok(ps)
}
