//! Exhaustive maximum odd-distance-set search over bounded lattice boxes.
//!
//! An odd-distance set inside a box is exactly a clique of the graph whose
//! vertices are the lattice points of the box and whose edges join pairs at
//! odd integer ℓ1 distance. [`max_odd_clique`] finds a maximum clique
//! exactly, by branch and bound with greedy-coloring upper bounds over
//! packed bit rows. [`bound_report`] compares the result against the
//! theoretical caps: 2^n on the half-integer lattice, 2 on the integer
//! lattice. Everything here certifies boxes only, never the infinite
//! lattice.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Point, PointSet};
use crate::rational::{is_half_integral, is_odd_integer, rat, Rational};

/// Largest box enumeration accepted by default.
pub const DEFAULT_VERTEX_LIMIT: usize = 100_000;

/// Wording used by every box-scoped claim this module emits.
pub const BOX_SCOPE: &str = "within the searched box only";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Integers,
    HalfIntegers,
}

impl Lattice {
    pub fn name(self) -> &'static str {
        match self {
            Lattice::Integers => "integer",
            Lattice::HalfIntegers => "half-integer",
        }
    }

    /// Grid spacing between neighboring lattice values on one axis.
    pub fn step(self) -> Rational {
        match self {
            Lattice::Integers => rat(1, 1),
            Lattice::HalfIntegers => rat(1, 2),
        }
    }

    /// Whether `x` lies on this lattice.
    pub fn contains(self, x: &Rational) -> bool {
        match self {
            Lattice::Integers => x.is_integer(),
            Lattice::HalfIntegers => is_half_integral(x),
        }
    }
}

/// An axis-aligned window into ℤ^n or (½ℤ)^n: per-coordinate bounds that
/// lie on the lattice, with lower ≤ upper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox {
    dimension: usize,
    lattice: Lattice,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl LatticeBox {
    pub fn new(lattice: Lattice, lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                left: lower.len(),
                right: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (coord, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            for value in [lo, hi] {
                if !lattice.contains(value) {
                    return Err(Error::OffLattice {
                        coord,
                        value: value.clone(),
                        lattice: lattice.name(),
                    });
                }
            }
            if lo > hi {
                return Err(Error::InvertedBounds {
                    coord,
                    lower: lo.clone(),
                    upper: hi.clone(),
                });
            }
        }
        Ok(Self {
            dimension: lower.len(),
            lattice,
            lower,
            upper,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    /// Number of lattice points in the box, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        let mut total: u128 = 1;
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            // Both bounds are on the lattice, so the span is a whole number
            // of steps.
            let steps = ((hi - lo) / self.lattice.step()).to_integer();
            let per_coord = (steps + BigInt::from(1)).to_u128().unwrap_or(u128::MAX);
            total = total.saturating_mul(per_coord);
        }
        total
    }
}

/// All lattice points of the box in lexicographic coordinate order.
/// Refuses boxes holding more than `limit` points.
pub fn enumerate_box(bx: &LatticeBox, limit: usize) -> Result<PointSet> {
    let count = bx.count();
    if count > limit as u128 {
        return Err(Error::VertexLimit { count, limit });
    }
    let step = bx.lattice.step();
    let mut points = Vec::with_capacity(count as usize);
    let mut cur = bx.lower.clone();
    'odometer: loop {
        points.push(Point::new(cur.clone())?);
        // Advance the last coordinate first: row-major is lexicographic.
        let mut k = bx.dimension;
        loop {
            if k == 0 {
                break 'odometer;
            }
            k -= 1;
            cur[k] += &step;
            if cur[k] <= bx.upper[k] {
                break;
            }
            cur[k] = bx.lower[k].clone();
        }
    }
    PointSet::new(bx.dimension, points)
}

fn bit_test(row: &[u64], v: usize) -> bool {
    row[v / 64] & (1 << (v % 64)) != 0
}

fn bit_set(row: &mut [u64], v: usize) {
    row[v / 64] |= 1 << (v % 64);
}

fn bit_clear(row: &mut [u64], v: usize) {
    row[v / 64] &= !(1 << (v % 64));
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_intersect(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn bits_empty(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

fn bits_ones(a: &[u64]) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

/// The odd-distance graph of a vertex list: an edge joins two points iff
/// their ℓ1 distance is an odd integer. Adjacency is stored as packed bit
/// rows; the diagonal is always clear.
#[derive(Debug, Clone)]
pub struct OddGraph {
    vertices: PointSet,
    rows: Vec<Vec<u64>>,
    edge_count: usize,
}

impl OddGraph {
    pub fn vertices(&self) -> &PointSet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.vertices.dimension()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        bit_test(&self.rows[u], v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Builds the odd-distance graph. The point set already guarantees the
/// vertices are distinct and share one dimension.
pub fn build_odd_graph(vertices: &PointSet) -> OddGraph {
    let m = vertices.len();
    let words = m.div_ceil(64).max(1);
    let halves = geometry::half_unit_rows(vertices);
    let points = vertices.points();
    let upper_neighbors: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .filter(|&j| match &halves {
                    Some(rows) => geometry::half_units_odd(&rows[i], &rows[j]),
                    None => is_odd_integer(&geometry::l1_unchecked(&points[i], &points[j])),
                })
                .collect()
        })
        .collect();
    let mut rows = vec![vec![0u64; words]; m];
    let mut edge_count = 0;
    for (i, neighbors) in upper_neighbors.iter().enumerate() {
        edge_count += neighbors.len();
        for &j in neighbors {
            bit_set(&mut rows[i], j);
            bit_set(&mut rows[j], i);
        }
    }
    OddGraph {
        vertices: vertices.clone(),
        rows,
        edge_count,
    }
}

/// Outcome of an exact maximum-clique run. The witness always passes
/// odd-distance verification and has exactly `max_size` points; the size is
/// schedule-independent, while `nodes_explored` and the witness identity
/// may vary between runs.
#[derive(Debug, Clone)]
pub struct CliqueResult {
    pub max_size: usize,
    pub witness: PointSet,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

struct Solver {
    adj: Vec<Vec<u64>>,
    words: usize,
    /// Size of the best clique found anywhere; shared lower bound for pruning.
    best: AtomicUsize,
}

impl Solver {
    /// Greedy coloring of the candidate set. Returns the candidates grouped
    /// by color class, and for each position the number of classes used so
    /// far; a clique inside the first k classes has at most k vertices, so
    /// the count is an upper bound for branches taken at that position.
    fn color(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<(Vec<usize>, Vec<u64>)> = Vec::new();
        for v in bits_ones(p) {
            match classes
                .iter_mut()
                .find(|(_, members)| !bits_intersect(members, &self.adj[v]))
            {
                Some((list, members)) => {
                    list.push(v);
                    bit_set(members, v);
                }
                None => {
                    let mut members = vec![0u64; self.words];
                    bit_set(&mut members, v);
                    classes.push((vec![v], members));
                }
            }
        }
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        for (k, (list, _)) in classes.iter().enumerate() {
            for &v in list {
                order.push(v);
                bounds.push(k + 1);
            }
        }
        (order, bounds)
    }

    /// Tomita-style expansion: branch on candidates in descending color
    /// order, pruning when clique size plus color bound cannot beat the
    /// shared best. Records a witness only when it raises the global best,
    /// so the longest witness across tasks realizes the final size.
    fn expand(&self, r: &mut Vec<usize>, p: Vec<u64>, witness: &mut Vec<usize>, nodes: &mut u64) {
        *nodes += 1;
        if bits_empty(&p) {
            let prev = self.best.fetch_max(r.len(), Ordering::SeqCst);
            if prev < r.len() {
                *witness = r.clone();
            }
            return;
        }
        let (order, bounds) = self.color(&p);
        let mut p = p;
        for k in (0..order.len()).rev() {
            if r.len() + bounds[k] <= self.best.load(Ordering::SeqCst) {
                return;
            }
            let v = order[k];
            r.push(v);
            self.expand(r, bits_and(&p, &self.adj[v]), witness, nodes);
            r.pop();
            bit_clear(&mut p, v);
        }
    }
}

/// Exact maximum clique of the odd-distance graph.
///
/// Vertices are branched in descending-degree order (ties by vertex index).
/// Root branches run on the rayon pool and share an atomic best-size bound;
/// `max_size` does not depend on the worker count or schedule.
pub fn max_odd_clique(graph: &OddGraph) -> CliqueResult {
    let start = Instant::now();
    let m = graph.len();
    let empty_witness = || PointSet::new(graph.dimension(), Vec::new()).expect("dimension >= 1");
    if m == 0 {
        return CliqueResult {
            max_size: 0,
            witness: empty_witness(),
            nodes_explored: 0,
            elapsed: start.elapsed(),
        };
    }
    let mut by_degree: Vec<usize> = (0..m).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let mut position = vec![0usize; m];
    for (k, &v) in by_degree.iter().enumerate() {
        position[v] = k;
    }
    let words = m.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; m];
    for (k, &v) in by_degree.iter().enumerate() {
        for u in bits_ones(&graph.rows[v]) {
            bit_set(&mut adj[k], position[u]);
        }
    }
    let solver = Solver {
        adj,
        words,
        best: AtomicUsize::new(0),
    };

    let mut full = vec![0u64; words];
    for v in 0..m {
        bit_set(&mut full, v);
    }
    let (root_order, root_bounds) = solver.color(&full);
    // Root branch k owns candidate set adj[v_k] ∩ {v_0..v_{k-1}}: exactly
    // what the sequential loop would hand it after removing later branches.
    let results: Vec<(Vec<usize>, u64)> = (0..root_order.len())
        .into_par_iter()
        .map(|idx| {
            let k = root_order.len() - 1 - idx;
            let mut witness = Vec::new();
            let mut nodes = 0u64;
            // A clique through v_k inside {v_0..v_k} has at most
            // root_bounds[k] vertices.
            if root_bounds[k] <= solver.best.load(Ordering::SeqCst) {
                // Color classes below this one cannot beat the bound either,
                // but skipping just this branch keeps the loop shape simple.
                return (witness, nodes);
            }
            let v = root_order[k];
            let mut prefix = vec![0u64; words];
            for &u in &root_order[..k] {
                bit_set(&mut prefix, u);
            }
            let mut r = vec![v];
            solver.expand(
                &mut r,
                bits_and(&prefix, &solver.adj[v]),
                &mut witness,
                &mut nodes,
            );
            (witness, nodes)
        })
        .collect();

    let max_size = solver.best.load(Ordering::SeqCst);
    let nodes_explored = results.iter().map(|(_, n)| n).sum();
    let winner = results
        .into_iter()
        .map(|(w, _)| w)
        .max_by_key(|w| w.len())
        .unwrap_or_default();
    debug_assert_eq!(winner.len(), max_size);
    let mut original: Vec<usize> = winner.into_iter().map(|k| by_degree[k]).collect();
    original.sort_unstable();
    let witness_points: Vec<Point> = original
        .into_iter()
        .map(|v| graph.vertices.points()[v].clone())
        .collect();
    let witness = PointSet::new(graph.dimension(), witness_points)
        .expect("clique vertices are distinct points");
    CliqueResult {
        max_size,
        witness,
        nodes_explored,
        elapsed: start.elapsed(),
    }
}

/// A clique size set against the lattice cap: 2^n points on the
/// half-integer lattice, 2 on the integer lattice. A violation means an
/// implementation bug, never new mathematics, and the claim is scoped to
/// the searched box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub dimension: usize,
    pub lattice: Lattice,
    pub max_size: usize,
    /// Saturates at `u64::MAX` for dimensions past 63.
    pub cap: u64,
    pub violation: bool,
    pub scope: &'static str,
}

pub fn bound_report(dimension: usize, lattice: Lattice, result: &CliqueResult) -> BoundReport {
    let cap = match lattice {
        Lattice::HalfIntegers => 1u64
            .checked_shl(dimension.min(u32::MAX as usize) as u32)
            .unwrap_or(u64::MAX),
        Lattice::Integers => 2,
    };
    BoundReport {
        dimension,
        lattice,
        max_size: result.max_size,
        cap,
        violation: result.max_size as u64 > cap,
        scope: BOX_SCOPE,
    }
}
