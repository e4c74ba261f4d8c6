//! Replacing approximately specified coordinates by nearby small rationals
//! that realize exactly odd pairwise distances, plus the odd rescaling onto
//! dyadic denominators.
//!
//! The pipeline: separate the points so every coordinate differs by at
//! least 2 between any two of them ([`ensure_separation`]), read off the
//! per-pair coordinate signs and the linear system those signs induce
//! ([`assemble_system`]), reduce the system exactly ([`rref`]), then snap
//! the free variables to minimum-denominator rationals close enough to the
//! input that no sign can flip, and let the dependent variables follow
//! ([`perturb_and_solve`]). Because the signs survive the perturbation, the
//! output realizes the right-hand sides as exact ℓ1 distances.
//!
//! [`rationalize_set`] runs the whole chain on decimal input and certifies
//! the result; [`dyadic_scale`] multiplies a rational odd-distance set by
//! the odd factor that clears every odd denominator factor.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::construct::spread_pass;
use crate::error::{Error, Result};
use crate::geometry::{l1_distance, verify_odd_set, Point, PointSet};
use crate::rational::{
    best_rational_in_interval, odd_denominator_lcm, parse_decimal, parse_rational, rat, Rational,
};

/// Distances extracted from decimal proxies must sit within this distance
/// of an integer; anything farther is rejected as not an odd-distance set.
pub const DISTANCE_TOLERANCE_DENOMINATOR: u64 = 1_000_000;

fn distance_tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(DISTANCE_TOLERANCE_DENOMINATOR))
}

/// An approximately specified point set: exact rational proxies parsed
/// from arbitrary-precision decimal (or rational) literals, optionally
/// with declared pairwise distances that bypass the rounding gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalPointSet {
    proxies: PointSet,
    declared: Option<BTreeMap<(usize, usize), u64>>,
}

impl DecimalPointSet {
    /// Parses coordinate literals (decimal like `1.41421356237` or rational
    /// like `3/2`) into exact proxies. Declared distances, when present,
    /// must cover every unordered pair exactly once with odd positive
    /// values; partial declarations are rejected rather than mixed with
    /// rounded ones.
    pub fn new(
        dimension: usize,
        coords: Vec<Vec<String>>,
        declared: Option<Vec<(usize, usize, u64)>>,
    ) -> Result<Self> {
        let points = coords
            .into_iter()
            .map(|cs| {
                let parsed = cs
                    .iter()
                    .map(|s| parse_rational(s).or_else(|_| parse_decimal(s)))
                    .collect::<Result<Vec<_>>>()?;
                Point::new(parsed)
            })
            .collect::<Result<Vec<_>>>()?;
        let proxies = PointSet::new(dimension, points)?;
        let declared = match declared {
            None => None,
            Some(list) => Some(Self::validate_declared(&proxies, list)?),
        };
        Ok(Self { proxies, declared })
    }

    /// Exact proxies taken directly from a point set, with no declared
    /// distances.
    pub fn from_point_set(ps: &PointSet) -> Self {
        Self {
            proxies: ps.clone(),
            declared: None,
        }
    }

    fn validate_declared(
        proxies: &PointSet,
        list: Vec<(usize, usize, u64)>,
    ) -> Result<BTreeMap<(usize, usize), u64>> {
        let bad = |detail: String| Error::InvalidDeclaredDistances { detail };
        let m = proxies.len();
        let mut map = BTreeMap::new();
        for (i, j, d) in list {
            if i == j || i >= m || j >= m {
                return Err(bad(format!(
                    "pair ({i}, {j}) is not a pair of distinct point indices below {m}"
                )));
            }
            let key = (i.min(j), i.max(j));
            if map.insert(key, d).is_some() {
                return Err(bad(format!("pair ({}, {}) is declared twice", key.0, key.1)));
            }
            if d % 2 == 0 {
                return Err(bad(format!(
                    "pair ({}, {}) declares distance {d}, which is not odd",
                    key.0, key.1
                )));
            }
        }
        let expected = m * (m - 1) / 2;
        if map.len() != expected {
            return Err(bad(format!(
                "{} of {expected} pairs declared; declare every pair or none",
                map.len()
            )));
        }
        Ok(map)
    }

    pub fn dimension(&self) -> usize {
        self.proxies.dimension()
    }

    pub fn len(&self) -> usize {
        self.proxies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proxies.is_empty()
    }

    pub fn proxies(&self) -> &PointSet {
        &self.proxies
    }

    pub fn declared_distance(&self, i: usize, j: usize) -> Option<u64> {
        self.declared
            .as_ref()
            .and_then(|map| map.get(&(i.min(j), i.max(j))).copied())
    }

    pub fn has_declared(&self) -> bool {
        self.declared.is_some()
    }
}

/// Runs a spread pass over every coordinate in turn, tracking the composite
/// permutation (output position → original index) and, per coordinate,
/// whether any pair was actually closer than 2 before its pass.
fn separate_all(ps: &PointSet) -> Result<(PointSet, Vec<usize>, Vec<bool>)> {
    let n = ps.dimension();
    let mut current = ps.clone();
    let mut perm: Vec<usize> = (0..ps.len()).collect();
    let mut applied = Vec::with_capacity(n);
    for coord in 0..n {
        let mut values: Vec<&Rational> = current.iter().map(|p| p.coord(coord)).collect();
        values.sort();
        let needed = values.windows(2).any(|w| w[1] - w[0] < rat(2, 1));
        applied.push(needed);
        let (points, order) = spread_pass(&current, coord)?;
        perm = order.iter().map(|&k| perm[k]).collect();
        current = PointSet::new(n, points)?;
    }
    Ok((current, perm, applied))
}

/// Separates every coordinate: after the call, any two points differ by at
/// least 2 in every coordinate. Each pass shifts distances by even amounts
/// only, so the odd-distance property is preserved; the input must already
/// be a verified odd-distance set.
pub fn ensure_separation(ps: &PointSet) -> Result<PointSet> {
    let cert = verify_odd_set(ps);
    if let Some(fail) = cert.first_failure() {
        return Err(Error::NotOddDistance {
            i: fail.i,
            j: fail.j,
            distance: fail.distance.clone(),
        });
    }
    Ok(separate_all(ps)?.0)
}

/// Per ordered pair and coordinate, the sign of the coordinate difference:
/// +1 when the first point is larger. Stored once per unordered pair and
/// mirrored on query, so antisymmetry holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    size: usize,
    dimension: usize,
    /// signs[k][c] for the k-th unordered pair (i, j), i < j, in row-major
    /// order, viewed from the lower-indexed point.
    signs: Vec<Vec<i8>>,
}

impl SignPattern {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Index of the unordered pair (i, j), i < j, in row-major order.
    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.size);
        i * self.size - i * (i + 1) / 2 + (j - i - 1)
    }

    /// The sign of coordinate `coord` viewed from `p` against `q`.
    /// Panics when `p == q` or an index is out of range.
    pub fn sign(&self, p: usize, q: usize, coord: usize) -> i8 {
        assert!(p != q, "sign pattern is defined for distinct points");
        if p < q {
            self.signs[self.pair_index(p, q)][coord]
        } else {
            -self.signs[self.pair_index(q, p)][coord]
        }
    }
}

/// A dense exact linear system over variables indexed by
/// (point, coordinate), column order point-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    num_variables: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl LinearSystem {
    /// Builds a system from explicit rows. Every row must have
    /// `num_variables` coefficients, one rhs each.
    pub fn from_dense(
        num_variables: usize,
        rows: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
    ) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                left: rows.len(),
                right: rhs.len(),
            });
        }
        for row in &rows {
            if row.len() != num_variables {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: num_variables,
                });
            }
        }
        Ok(Self {
            num_variables,
            rows,
            rhs,
        })
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    /// Exact check that the assignment satisfies every row.
    pub fn is_satisfied_by(&self, assignment: &[Rational]) -> bool {
        assert_eq!(assignment.len(), self.num_variables);
        self.rows.iter().zip(&self.rhs).all(|(row, want)| {
            let got: Rational = row
                .iter()
                .zip(assignment)
                .map(|(coeff, value)| coeff * value)
                .sum();
            &got == want
        })
    }
}

/// Column index of the variable for coordinate `coord` of point `point`.
pub fn variable_index(point: usize, dimension: usize, coord: usize) -> usize {
    point * dimension + coord
}

fn flatten(ps: &PointSet) -> Vec<Rational> {
    ps.iter().flat_map(|p| p.coords().iter().cloned()).collect()
}

/// One row per unordered pair (i, j), i < j: the signed coordinate
/// differences that make ∑_c s_c · (x_{i,c} − x_{j,c}) equal the ℓ1
/// distance. Requires strict coordinate comparisons everywhere, which the
/// separation step guarantees; any tie is an error.
fn assemble_with_rhs(ps: &PointSet, rhs: Vec<Rational>) -> Result<(SignPattern, LinearSystem)> {
    let m = ps.len();
    let n = ps.dimension();
    debug_assert_eq!(rhs.len(), m * (m - 1) / 2);
    let points = ps.points();
    let mut signs = Vec::with_capacity(rhs.len());
    let mut rows = Vec::with_capacity(rhs.len());
    for i in 0..m {
        for j in i + 1..m {
            let mut pair_signs = Vec::with_capacity(n);
            let mut row = vec![Rational::zero(); m * n];
            for c in 0..n {
                let (a, b) = (points[i].coord(c), points[j].coord(c));
                if a == b {
                    return Err(Error::TiedCoordinate { i, j, coord: c });
                }
                let s: i8 = if a > b { 1 } else { -1 };
                pair_signs.push(s);
                row[variable_index(i, n, c)] = rat(s as i64, 1);
                row[variable_index(j, n, c)] = rat(-s as i64, 1);
            }
            signs.push(pair_signs);
            rows.push(row);
        }
    }
    let system = LinearSystem::from_dense(m * n, rows, rhs)?;
    Ok((
        SignPattern {
            size: m,
            dimension: n,
            signs,
        },
        system,
    ))
}

/// Builds the sign pattern and linear system whose right-hand sides are the
/// exact pairwise distances of `ps`. The coordinates of `ps` themselves
/// satisfy the system, which is asserted before returning.
pub fn assemble_system(ps: &PointSet) -> Result<(SignPattern, LinearSystem)> {
    let m = ps.len();
    let mut rhs = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            rhs.push(l1_distance(&ps.points()[i], &ps.points()[j])?);
        }
    }
    let (signs, system) = assemble_with_rhs(ps, rhs)?;
    assert!(
        system.is_satisfied_by(&flatten(ps)),
        "the defining identity of the sign pattern failed"
    );
    Ok((signs, system))
}

/// Exact reduced row echelon form: dependent (pivot) variables expressed as
/// affine functions of the free ones, with the largest coefficient
/// magnitude C that controls how far dependents move per unit of free
/// perturbation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefResult {
    num_variables: usize,
    pivot_columns: Vec<usize>,
    free_columns: Vec<usize>,
    /// offsets[k] is a_g for pivot_columns[k].
    offsets: Vec<Rational>,
    /// coefficients[k][f] is b_{f,g} for pivot_columns[k] and free_columns[f].
    coefficients: Vec<Vec<Rational>>,
    bound_c: Rational,
}

impl RrefResult {
    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free_columns
    }

    pub fn offset(&self, k: usize) -> &Rational {
        &self.offsets[k]
    }

    pub fn coefficients(&self, k: usize) -> &[Rational] {
        &self.coefficients[k]
    }

    /// Largest |b_{f,g}|; zero when there are no dependent-free pairs.
    pub fn bound_c(&self) -> &Rational {
        &self.bound_c
    }

    /// The full assignment induced by values for the free variables, in
    /// column order. Panics unless one value per free column is supplied.
    pub fn solve(&self, free_values: &[Rational]) -> Vec<Rational> {
        assert_eq!(free_values.len(), self.free_columns.len());
        let mut out = vec![Rational::zero(); self.num_variables];
        for (f, value) in self.free_columns.iter().zip(free_values) {
            out[*f] = value.clone();
        }
        for (k, g) in self.pivot_columns.iter().enumerate() {
            let mut value = self.offsets[k].clone();
            for (b, y) in self.coefficients[k].iter().zip(free_values) {
                value += b * y;
            }
            out[*g] = value;
        }
        out
    }
}

/// Gauss-Jordan elimination over exact rationals. Pivots are chosen
/// deterministically: leftmost column with a nonzero entry, first such row.
/// A row reducing to 0 = nonzero means the system is inconsistent, which
/// signals a bug or contradictory inputs upstream.
pub fn rref(system: &LinearSystem) -> Result<RrefResult> {
    let ncols = system.num_variables;
    let mut rows: Vec<Vec<Rational>> = system.rows.clone();
    let mut rhs: Vec<Rational> = system.rhs.clone();
    let nrows = rows.len();
    let mut pivot_columns = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..nrows).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let inv = rows[r][col].clone();
        for value in rows[r].iter_mut() {
            *value /= &inv;
        }
        rhs[r] /= &inv;
        let pivot_row = rows[r].clone();
        let pivot_rhs = rhs[r].clone();
        for k in 0..nrows {
            if k == r || rows[k][col].is_zero() {
                continue;
            }
            let factor = rows[k][col].clone();
            for (value, pivot) in rows[k].iter_mut().zip(&pivot_row) {
                *value -= &factor * pivot;
            }
            rhs[k] -= &factor * &pivot_rhs;
        }
        pivot_columns.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if rhs.iter().skip(r).any(|value| !value.is_zero()) {
        return Err(Error::InconsistentSystem);
    }
    let free_columns: Vec<usize> = {
        let mut pivots = pivot_columns.iter().peekable();
        (0..ncols)
            .filter(|col| {
                if pivots.peek() == Some(&col) {
                    pivots.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    };
    let mut offsets = Vec::with_capacity(pivot_columns.len());
    let mut coefficients = Vec::with_capacity(pivot_columns.len());
    let mut bound_c = Rational::zero();
    for (k, _) in pivot_columns.iter().enumerate() {
        // Row k reads x_g + ∑_f rows[k][f]·x_f = rhs[k].
        offsets.push(rhs[k].clone());
        let bs: Vec<Rational> = free_columns
            .iter()
            .map(|&f| -rows[k][f].clone())
            .collect();
        for b in &bs {
            if b.abs() > bound_c {
                bound_c = b.abs();
            }
        }
        coefficients.push(bs);
    }
    Ok(RrefResult {
        num_variables: ncols,
        pivot_columns,
        free_columns,
        offsets,
        coefficients,
        bound_c,
    })
}

/// How far the perturbation may move each free variable: strictly inside
/// 1/(max(C,1)·m·n), so that even if every free variable moves by the
/// maximum, no dependent variable can drift by 1 or more.
fn perturbation_radius(bound_c: &Rational, num_points: usize, dimension: usize) -> Rational {
    let c = if bound_c < &Rational::one() {
        Rational::one()
    } else {
        bound_c.clone()
    };
    let cells = BigInt::from(num_points as u64) * BigInt::from(dimension as u64);
    Rational::one() / (c * Rational::from_integer(cells))
}

/// Snaps every free variable to the minimum-denominator rational within the
/// perturbation radius of its hint, then computes the dependents from the
/// reduced system. Dependents are checked to land strictly within 1 of
/// their hints; a larger drift means the hints were not near a true
/// solution of the system.
pub fn perturb_and_solve(rr: &RrefResult, hints: &DecimalPointSet) -> Result<PointSet> {
    let m = hints.len();
    let n = hints.dimension();
    if m * n != rr.num_variables() {
        return Err(Error::VariableCount {
            expected: rr.num_variables(),
            got: m * n,
        });
    }
    let hint_values = flatten(hints.proxies());
    let epsilon = perturbation_radius(rr.bound_c(), m, n);
    let free_values: Vec<Rational> = rr
        .free_columns()
        .iter()
        .map(|&f| {
            let h = &hint_values[f];
            best_rational_in_interval(&(h - &epsilon), &(h + &epsilon))
        })
        .collect::<Result<Vec<_>>>()?;
    let assignment = rr.solve(&free_values);
    for (k, &g) in rr.pivot_columns().iter().enumerate() {
        let drift = (&assignment[g] - &hint_values[g]).abs();
        if drift >= Rational::one() {
            let _ = k;
            return Err(Error::DependentDrift {
                point: g / n,
                coord: g % n,
                drift,
            });
        }
    }
    let points = assignment
        .chunks(n)
        .map(|cs| Point::new(cs.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(n, points)
}

/// Provenance of a [`rationalize_set`] run, surfaced alongside the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalizeReport {
    /// Per coordinate: whether some pair was closer than 2 before its
    /// separation pass (the pass itself always runs).
    pub separation_applied: Vec<bool>,
    pub free_variables: usize,
    /// Largest dependent-on-free coefficient magnitude from the reduction.
    pub bound_c: Rational,
    /// Radius used when snapping free variables.
    pub epsilon: Rational,
}

/// Rounds each exact proxy distance to the nearest integer and validates
/// the gate: within tolerance, odd, positive. Declared distances skip the
/// tolerance check entirely.
fn target_distances(input: &DecimalPointSet) -> Result<Vec<Vec<BigInt>>> {
    let m = input.len();
    let points = input.proxies().points();
    let tolerance = distance_tolerance();
    let mut targets = vec![vec![BigInt::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let target = match input.declared_distance(i, j) {
                Some(d) => BigInt::from(d),
                None => {
                    let distance = l1_distance(&points[i], &points[j])?;
                    let nearest = (&distance + rat(1, 2)).floor().to_integer();
                    if (&distance - Rational::from_integer(nearest.clone())).abs() > tolerance {
                        return Err(Error::DistanceNotNearInteger { i, j, distance });
                    }
                    if nearest.is_even() {
                        return Err(Error::EvenDistance {
                            i,
                            j,
                            distance,
                            nearest,
                        });
                    }
                    nearest
                }
            };
            targets[j][i] = target.clone();
            targets[i][j] = target;
        }
    }
    Ok(targets)
}

/// The full pipeline with its provenance report: gate the input distances,
/// separate, assemble the system against the (evenly shifted) integer
/// targets, reduce, perturb, and certify the result.
pub fn rationalize_set_with_report(
    input: &DecimalPointSet,
) -> Result<(PointSet, RationalizeReport)> {
    let proxies = input.proxies();
    let m = proxies.len();
    let n = proxies.dimension();
    let targets = target_distances(input)?;
    // The gate has vouched for the proxies; separation shifts every
    // distance by an even integer, so the gated targets move with it.
    let (separated, perm, separation_applied) = separate_all(proxies)?;
    let mut rhs = Vec::with_capacity(m * (m - 1) / 2);
    for k in 0..m {
        for l in k + 1..m {
            let d_sep = l1_distance(&separated.points()[k], &separated.points()[l])?;
            let d_orig = l1_distance(&proxies.points()[perm[k]], &proxies.points()[perm[l]])?;
            let shift = d_sep - d_orig;
            debug_assert!(shift.is_integer() && shift.numer().is_even());
            let target = Rational::from_integer(targets[perm[k]][perm[l]].clone()) + shift;
            rhs.push(target);
        }
    }
    let (_, system) = assemble_with_rhs(&separated, rhs)?;
    let reduced = rref(&system)?;
    let hints = DecimalPointSet::from_point_set(&separated);
    let output = perturb_and_solve(&reduced, &hints)?;
    let cert = verify_odd_set(&output);
    assert!(
        cert.verdict,
        "perturbed solution lost the odd-distance property"
    );
    let report = RationalizeReport {
        separation_applied,
        free_variables: reduced.free_columns().len(),
        bound_c: reduced.bound_c().clone(),
        epsilon: perturbation_radius(reduced.bound_c(), m, n),
    };
    Ok((output, report))
}

/// Turns an approximately specified odd-distance set into an exactly
/// rational one of the same size whose distances are exactly the gated
/// integer targets after separation.
pub fn rationalize_set(input: &DecimalPointSet) -> Result<PointSet> {
    Ok(rationalize_set_with_report(input)?.0)
}

/// Scales a rational odd-distance set by the least odd integer clearing
/// every odd denominator factor. The scale is odd, so every distance stays
/// an odd integer, and every output denominator is a power of two.
pub fn dyadic_scale(ps: &PointSet) -> Result<(PointSet, BigInt)> {
    let cert = verify_odd_set(ps);
    if let Some(fail) = cert.first_failure() {
        return Err(Error::NotOddDistance {
            i: fail.i,
            j: fail.j,
            distance: fail.distance.clone(),
        });
    }
    let scale = odd_denominator_lcm(ps.iter().flat_map(|p| p.coords().iter()));
    let factor = Rational::from_integer(scale.clone());
    let points = ps
        .iter()
        .map(|p| Point::new(p.coords().iter().map(|c| c * &factor).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok((PointSet::new(ps.dimension(), points)?, scale))
}
