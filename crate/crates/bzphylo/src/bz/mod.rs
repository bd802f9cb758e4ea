//! The BZ triangle semigroup for SL_m.
//!
//! Points of the triangle `{(a,b,c) >= 0, a+b+c = 2m-3}` split by their
//! number of odd coordinates: exactly one odd (the labelled points) or
//! all odd (hexagon centers). A semigroup element assigns a nonnegative
//! value to every labelled point so that in each hexagon the value sums
//! over opposite edge pairs agree. Boundary sums project to a triple of
//! dominant weights; fibers of that projection count tensor invariants.
//!
//! Grid layout: the `(0, 2m-3, 0)` corner sits at the top, `(2m-3, 0, 0)`
//! bottom left, `(0, 0, 2m-3)` bottom right. The northwest side (c = 0)
//! carries λ, the northeast side (a = 0) carries μ, the south side
//! (b = 0) carries ν. Points are ordered row-major: b descending, then c
//! ascending.

mod fiber;
mod glued;
mod graded;

pub use fiber::{enumerate_fiber, enumerate_fiber_bounded, minimal_generators, DEFAULT_MAX_NODES};
pub use glued::{enumerate_glued, validate_glued, vertex_sides, GluedBzElement};
pub use graded::{decompose_graded_sl3, sl3_graded_generators};

pub(crate) use fiber::weights_up_to;

use crate::weights::DominantWeight;
use crate::{check_modulus, Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

pub type Point = (i64, i64, i64);

/// Offsets from a hexagon center to its six vertices, in cyclic order.
/// Opposite edges of the hexagon are (i, i+3).
pub const HEX_OFFSETS: [Point; 6] = [
    (1, -1, 0),
    (1, 0, -1),
    (0, 1, -1),
    (-1, 1, 0),
    (-1, 0, 1),
    (0, -1, 1),
];

/// The side of the triangle a weight is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// c = 0, carries λ.
    NW,
    /// a = 0, carries μ.
    NE,
    /// b = 0, carries ν.
    S,
}

/// The triangle grid for SL_m: all points, the labelled points, the
/// hexagon centers and their vertex rings.
#[derive(Debug, Clone)]
pub struct TriangleGrid {
    pub m: u32,
    t_points: Vec<Point>,
    g_points: Vec<Point>,
    h_points: Vec<Point>,
    g_index: BTreeMap<Point, usize>,
    /// Indices into `g_points`, six per hexagon, cyclic order.
    hexagons: Vec<[usize; 6]>,
}

/// Row-major order: b descending, then c ascending.
fn row_major(m: u32) -> Vec<Point> {
    let edge = 2 * m as i64 - 3;
    let mut pts = Vec::new();
    for b in (0..=edge).rev() {
        for c in 0..=(edge - b) {
            pts.push((edge - b - c, b, c));
        }
    }
    pts
}

fn odd_count(p: &Point) -> u32 {
    [p.0, p.1, p.2].iter().filter(|&&x| x % 2 != 0).count() as u32
}

pub fn build_grid(m: u32) -> Result<TriangleGrid> {
    check_modulus(m)?;
    let t_points = row_major(m);
    debug_assert_eq!(t_points.len() as u32, (2 * m - 1) * (2 * m - 2) / 2);
    let g_points: Vec<Point> = t_points.iter().filter(|p| odd_count(p) == 1).cloned().collect();
    let h_points: Vec<Point> = t_points.iter().filter(|p| odd_count(p) == 3).cloned().collect();
    debug_assert_eq!(g_points.len() + h_points.len(), t_points.len());
    let g_index: BTreeMap<Point, usize> = g_points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut hexagons = Vec::with_capacity(h_points.len());
    for h in &h_points {
        let mut ring = [0usize; 6];
        for (k, off) in HEX_OFFSETS.iter().enumerate() {
            let v = (h.0 + off.0, h.1 + off.1, h.2 + off.2);
            ring[k] = *g_index
                .get(&v)
                .ok_or_else(|| Error::Inconsistent(format!("hexagon vertex {v:?} is not a labelled point")))?;
        }
        hexagons.push(ring);
    }
    Ok(TriangleGrid { m, t_points, g_points, h_points, g_index, hexagons })
}

impl TriangleGrid {
    pub fn t_points(&self) -> &[Point] {
        &self.t_points
    }

    pub fn g_points(&self) -> &[Point] {
        &self.g_points
    }

    pub fn h_points(&self) -> &[Point] {
        &self.h_points
    }

    pub fn hexagons(&self) -> &[[usize; 6]] {
        &self.hexagons
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.g_index.get(p).copied()
    }

    /// The formula point pairs along one side, indexed by i = 1..m-1:
    /// the i-th weight coordinate is the sum of the pair's values.
    pub fn side_pairs(&self, side: Side) -> Vec<(usize, usize)> {
        let m = self.m as i64;
        (1..m)
            .map(|i| {
                let (p, q) = match side {
                    Side::NW => ((2 * (m - i) - 1, 2 * (i - 1), 0), (2 * (m - i) - 2, 2 * i - 1, 0)),
                    Side::NE => ((0, 2 * (m - i) - 1, 2 * (i - 1)), (0, 2 * (m - i) - 2, 2 * i - 1)),
                    Side::S => ((2 * (i - 1), 0, 2 * (m - i) - 1), (2 * i - 1, 0, 2 * (m - i) - 2)),
                };
                (
                    self.g_index[&p],
                    self.g_index[&q],
                )
            })
            .collect()
    }

    /// The three equations of a hexagon: value sums over opposite edge
    /// pairs agree. Each entry lists the four point indices
    /// (lhs1, lhs2, rhs1, rhs2).
    pub fn hexagon_equations(&self) -> Vec<[usize; 4]> {
        let mut eqs = Vec::with_capacity(self.hexagons.len() * 3);
        for ring in &self.hexagons {
            for i in 0..3 {
                eqs.push([
                    ring[i],
                    ring[(i + 1) % 6],
                    ring[i + 3],
                    ring[(i + 4) % 6],
                ]);
            }
        }
        eqs
    }
}

pub fn point_label(p: &Point) -> String {
    format!("{},{},{}", p.0, p.1, p.2)
}

pub fn parse_point(s: &str) -> Result<Point> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Json(format!("point key {s:?} must be \"a,b,c\"")));
    }
    let mut c = [0i64; 3];
    for (i, part) in parts.iter().enumerate() {
        c[i] = part
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Json(format!("point key {s:?} must hold integers")))?;
    }
    Ok((c[0], c[1], c[2]))
}

/// A semigroup element: nonnegative values on the labelled points with
/// all hexagon opposite-edge sums in balance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BzTriangle {
    pub m: u32,
    /// Dense, in row-major grid order.
    values: Vec<u64>,
}

impl BzTriangle {
    /// Validates length and hexagon balance against the given grid.
    pub fn with_grid(grid: &TriangleGrid, values: Vec<u64>) -> Result<BzTriangle> {
        if values.len() != grid.g_points().len() {
            return Err(Error::Validation(format!(
                "triangle for m = {} needs {} values, got {}",
                grid.m,
                grid.g_points().len(),
                values.len()
            )));
        }
        for eq in grid.hexagon_equations() {
            let lhs = values[eq[0]] + values[eq[1]];
            let rhs = values[eq[2]] + values[eq[3]];
            if lhs != rhs {
                let pts: Vec<Point> = eq.iter().map(|&i| grid.g_points()[i]).collect();
                return Err(Error::Validation(format!(
                    "hexagon balance fails: {} + {} != {} + {} at {pts:?}",
                    values[eq[0]], values[eq[1]], values[eq[2]], values[eq[3]],
                )));
            }
        }
        Ok(BzTriangle { m: grid.m, values })
    }

    pub fn new(m: u32, values: Vec<u64>) -> Result<BzTriangle> {
        Self::with_grid(&build_grid(m)?, values)
    }

    pub fn zero(m: u32) -> Result<BzTriangle> {
        let grid = build_grid(m)?;
        Ok(BzTriangle { m, values: vec![0; grid.g_points().len()] })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn value_at(&self, grid: &TriangleGrid, p: &Point) -> Result<u64> {
        grid.index_of(p)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::Validation(format!("{p:?} is not a labelled point")))
    }

    /// The projection to one side, coordinate-reversed when `dualize`.
    pub fn pr_edge_with(&self, grid: &TriangleGrid, side: Side, dualize: bool) -> Result<DominantWeight> {
        let mut coords: Vec<u32> = grid
            .side_pairs(side)
            .iter()
            .map(|&(p, q)| {
                u32::try_from(self.values[p] + self.values[q])
                    .map_err(|_| Error::Validation("boundary sum exceeds u32".into()))
            })
            .collect::<Result<_>>()?;
        if dualize {
            coords.reverse();
        }
        DominantWeight::new(self.m, coords)
    }

    pub fn pr_edge(&self, side: Side, dualize: bool) -> Result<DominantWeight> {
        self.pr_edge_with(&build_grid(self.m)?, side, dualize)
    }

    /// The full projection (λ; μ; ν) = (NW; NE; S).
    pub fn pr_with(&self, grid: &TriangleGrid) -> Result<(DominantWeight, DominantWeight, DominantWeight)> {
        Ok((
            self.pr_edge_with(grid, Side::NW, false)?,
            self.pr_edge_with(grid, Side::NE, false)?,
            self.pr_edge_with(grid, Side::S, false)?,
        ))
    }

    pub fn pr(&self) -> Result<(DominantWeight, DominantWeight, DominantWeight)> {
        self.pr_with(&build_grid(self.m)?)
    }

    /// Total boundary size: the coordinate sum of all three projections.
    pub fn boundary_size(&self, grid: &TriangleGrid) -> Result<u64> {
        let (l, mu, nu) = self.pr_with(grid)?;
        Ok([l, mu, nu]
            .iter()
            .map(|w| w.coords().iter().map(|&c| c as u64).sum::<u64>())
            .sum())
    }

    pub fn to_json(&self) -> Value {
        let grid = build_grid(self.m).expect("valid modulus");
        let mut entries = Map::new();
        for (i, p) in grid.g_points().iter().enumerate() {
            if self.values[i] != 0 {
                entries.insert(point_label(p), json!(self.values[i]));
            }
        }
        json!({ "m": self.m, "values": entries })
    }

    pub fn from_json(v: &Value) -> Result<BzTriangle> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("triangle must be an object".into()))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("triangle needs a numeric \"m\"".into()))? as u32;
        let grid = build_grid(m)?;
        let mut values = vec![0u64; grid.g_points().len()];
        if let Some(entries) = obj.get("values") {
            let entries = entries
                .as_object()
                .ok_or_else(|| Error::Json("\"values\" must be an object".into()))?;
            for (key, val) in entries {
                let p = parse_point(key)?;
                let i = grid
                    .index_of(&p)
                    .ok_or_else(|| Error::Json(format!("{key:?} is not a labelled point for m = {m}")))?;
                values[i] = val
                    .as_u64()
                    .ok_or_else(|| Error::Json(format!("value at {key:?} must be a nonneg integer")))?;
            }
        }
        BzTriangle::with_grid(&grid, values)
    }
}

/// Pointwise sum; the balance conditions are linear, so the result is
/// validated only in debug builds.
pub fn add(x: &BzTriangle, y: &BzTriangle) -> Result<BzTriangle> {
    if x.m != y.m {
        return Err(Error::ModulusMismatch(x.m, y.m));
    }
    let values: Vec<u64> = x.values.iter().zip(&y.values).map(|(a, b)| a + b).collect();
    let out = BzTriangle { m: x.m, values };
    debug_assert!(BzTriangle::new(out.m, out.values.clone()).is_ok());
    Ok(out)
}
