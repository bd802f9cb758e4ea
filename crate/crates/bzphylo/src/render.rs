//! Honeycomb diagrams for triangles and glued families, as SVG and as
//! monospaced text.
//!
//! The planar layout fixes one orientation throughout: the side c = 0
//! (the λ side) is the top edge, read left to right; the side a = 0
//! (the μ side) descends on the right; the side b = 0 (the ν side)
//! ascends on the left. A value at a hexagon vertex becomes a weighted
//! segment from that vertex to the hexagon center, one segment per
//! incident hexagon; a value at a corner of the triangle becomes a
//! weighted node. Zero weights are omitted unless asked for, then
//! drawn dashed. Output is a pure function of the input: identical
//! inputs give byte-identical documents.

use crate::bz::{build_grid, validate_glued, vertex_sides, BzTriangle, GluedBzElement, Point, Side};
use crate::graphs::Graph;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

/// Styling switches for SVG emission.
#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Draw zero-weight segments and corner nodes dashed instead of
    /// omitting them.
    pub show_zero_edges: bool,
}

/// Pixel distance between neighbouring lattice sites.
const SPACING: f64 = 40.0;
/// Margin around the drawing.
const MARGIN: f64 = 30.0;
/// Height of a unit equilateral step.
const ROW_H: f64 = 0.866_025_403_784_438_6;

type Pt = (f64, f64);

/// A triangle frame: planar positions of the three corners, in the
/// order a-corner, b-corner, c-corner. Lattice points map in by
/// barycentric interpolation.
#[derive(Debug, Clone, Copy)]
struct Frame {
    corners: [Pt; 3],
    span: f64,
}

impl Frame {
    /// The standard upward frame with the a-corner at the origin.
    fn standard(m: u32) -> Frame {
        let s = f64::from(2 * m - 3) * SPACING;
        Frame { corners: [(0.0, 0.0), (s, 0.0), (s / 2.0, s * ROW_H)], span: f64::from(2 * m - 3) }
    }

    fn map(&self, p: &Point) -> Pt {
        let [pa, pb, pc] = self.corners;
        let (a, b, c) = (p.0 as f64, p.1 as f64, p.2 as f64);
        (
            (a * pa.0 + b * pb.0 + c * pc.0) / self.span,
            (a * pa.1 + b * pb.1 + c * pc.1) / self.span,
        )
    }

    fn centroid(&self) -> Pt {
        let [pa, pb, pc] = self.corners;
        ((pa.0 + pb.0 + pc.0) / 3.0, (pa.1 + pb.1 + pc.1) / 3.0)
    }
}

fn fmt_pt(p: Pt) -> String {
    format!("{:.2},{:.2}", p.0, p.1)
}

/// Emits one triangle's scaffold and weights into `out`, mapped
/// through `frame`.
fn draw_triangle(out: &mut String, x: &BzTriangle, frame: &Frame, options: &RenderOptions) -> Result<()> {
    let grid = build_grid(x.m)?;
    let corners = frame.corners.map(fmt_pt);
    let _ = writeln!(
        out,
        "<polygon class=\"tri\" points=\"{} {} {}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\"/>",
        corners[0], corners[1], corners[2]
    );
    for hex in grid.hexagons() {
        let ring: Vec<String> =
            hex.iter().map(|&gi| fmt_pt(frame.map(&grid.g_points()[gi]))).collect();
        let _ = writeln!(
            out,
            "<polygon class=\"hex\" points=\"{}\" fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.6\"/>",
            ring.join(" ")
        );
    }
    // One weighted segment per (hexagon, vertex) incidence.
    for (k, hex) in grid.hexagons().iter().enumerate() {
        let center = frame.map(&grid.h_points()[k]);
        for &gi in hex {
            let p = &grid.g_points()[gi];
            let v = x.value_at(&grid, p)?;
            if v == 0 && !options.show_zero_edges {
                continue;
            }
            let from = frame.map(p);
            let dash = if v == 0 { " stroke-dasharray=\"4 3\"" } else { "" };
            let _ = writeln!(
                out,
                "<line class=\"wseg\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#1a6\" stroke-width=\"2\"{dash}/>",
                from.0, from.1, center.0, center.1
            );
            let mid = ((from.0 + center.0) / 2.0, (from.1 + center.1) / 2.0);
            let _ = writeln!(
                out,
                "<text class=\"wlabel\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#1a6\">{v}</text>",
                mid.0 + 3.0,
                mid.1 - 3.0
            );
        }
    }
    // Corner points carry plain weighted nodes.
    for p in grid.g_points() {
        let zeros = [p.0, p.1, p.2].iter().filter(|&&c| c == 0).count();
        if zeros != 2 {
            continue;
        }
        let v = x.value_at(&grid, p)?;
        if v == 0 && !options.show_zero_edges {
            continue;
        }
        let at = frame.map(p);
        let dash = if v == 0 { " stroke-dasharray=\"3 2\" fill=\"none\"" } else { " fill=\"#c61\"" };
        let _ = writeln!(
            out,
            "<circle class=\"wnode\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" stroke=\"#c61\"{dash}/>",
            at.0, at.1
        );
        let _ = writeln!(
            out,
            "<text class=\"wlabel\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#c61\">{v}</text>",
            at.0 + 6.0,
            at.1 - 6.0
        );
    }
    Ok(())
}

fn svg_document(body: &str, width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.2}\" height=\"{:.2}\" viewBox=\"0 0 {:.2} {:.2}\">\n{body}</svg>\n",
        width, height, width, height
    )
}

/// Shifts a frame so the whole drawing sits inside positive
/// coordinates with a margin, returning the shifted frame.
fn shift(frame: &Frame, dx: f64, dy: f64) -> Frame {
    Frame {
        corners: frame.corners.map(|(x, y)| (x + dx, y + dy)),
        span: frame.span,
    }
}

/// Renders one triangle as a standalone SVG document.
pub fn honeycomb_svg(x: &BzTriangle, options: &RenderOptions) -> Result<String> {
    let frame = shift(&Frame::standard(x.m), MARGIN, MARGIN);
    let mut body = String::new();
    draw_triangle(&mut body, x, &frame, options)?;
    let s = f64::from(2 * x.m - 3) * SPACING;
    Ok(svg_document(&body, s + 2.0 * MARGIN, s * ROW_H + 2.0 * MARGIN))
}

/// Renders one triangle as a fixed-width text diagram: one cell per
/// lattice site, row r holding the sites with c = r, values printed at
/// the sites carrying them and `.` at the others. Rows are indented by
/// half a cell per step so the sites line up triangularly.
pub fn honeycomb_text(x: &BzTriangle) -> Result<String> {
    if x.m > 6 {
        return Err(Error::Validation(format!(
            "text layout supports m <= 6, got {}",
            x.m
        )));
    }
    let grid = build_grid(x.m)?;
    let s = i64::from(2 * x.m - 3);
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut width = 1usize;
    for c in 0..=s {
        let mut row = Vec::new();
        for b in 0..=(s - c) {
            let p = (s - c - b, b, c);
            let cell = match grid.index_of(&p) {
                Some(i) => x.values()[i].to_string(),
                None => ".".to_string(),
            };
            width = width.max(cell.len());
            row.push(cell);
        }
        cells.push(row);
    }
    // An odd cell width makes the half-cell row indent a whole number.
    if width % 2 == 0 {
        width += 1;
    }
    let mut out = String::new();
    for (r, row) in cells.iter().enumerate() {
        let indent = r * (width + 1) / 2;
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}{}", " ".repeat(indent), line.join(" "));
    }
    Ok(out)
}

/// Reads a text diagram back into a triangle. The row count determines
/// m; every site must be present, values at lattice points carrying
/// them and `.` elsewhere.
pub fn parse_honeycomb_text(text: &str) -> Result<BzTriangle> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    if rows.len() < 2 {
        return Err(Error::Validation("diagram needs at least two rows".into()));
    }
    let s = rows.len() as i64 - 1;
    let m = u32::try_from((s + 3) / 2).map_err(|_| Error::Validation("bad row count".into()))?;
    if i64::from(2 * m - 3) != s {
        return Err(Error::Validation(format!("row count {} fits no modulus", rows.len())));
    }
    let grid = build_grid(m)?;
    let mut values = vec![0u64; grid.g_points().len()];
    for (r, row) in rows.iter().enumerate() {
        let c = r as i64;
        if row.len() as i64 != s - c + 1 {
            return Err(Error::Validation(format!(
                "row {r} has {} cells, expected {}",
                row.len(),
                s - c + 1
            )));
        }
        for (j, tok) in row.iter().enumerate() {
            let b = j as i64;
            let p = (s - c - b, b, c);
            match grid.index_of(&p) {
                Some(i) => {
                    values[i] = tok.parse().map_err(|_| {
                        Error::Validation(format!("bad value {tok:?} at site {p:?}"))
                    })?;
                }
                None => {
                    if *tok != "." {
                        return Err(Error::Validation(format!(
                            "expected `.` at non-value site {p:?}, got {tok:?}"
                        )));
                    }
                }
            }
        }
    }
    BzTriangle::new(m, values)
}

/// The two corner indices bounding a side, in reading order.
fn side_corners(side: Side) -> (usize, usize) {
    match side {
        Side::NW => (0, 1),
        Side::NE => (1, 2),
        Side::S => (2, 0),
    }
}

fn reflect(p: Pt, a: Pt, b: Pt) -> Pt {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = ((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2;
    let foot = (a.0 + t * dx, a.1 + t * dy);
    (2.0 * foot.0 - p.0, 2.0 * foot.1 - p.1)
}

/// Renders a glued family over its graph. Trees of triangles are laid
/// out by reflecting across shared sides, so paired boundaries abut
/// and dual readings run in opposite directions; the shared side is
/// annotated with its edge name. Graphs with loops or cycles, and the
/// rare tree whose reflections collide, fall back to one panel per
/// vertex with every side labelled by edge name and slot so pairs can
/// be matched by eye.
pub fn glued_honeycomb_svg(g: &Graph, e: &GluedBzElement) -> Result<String> {
    if !validate_glued(g, e)? {
        return Err(Error::Validation(
            "the family does not satisfy the matching condition".into(),
        ));
    }
    let inner: Vec<String> = {
        let mut v: Vec<String> = g.non_leaf_vertices().iter().map(|s| s.to_string()).collect();
        v.sort();
        v
    };
    let internal: Vec<usize> = (0..g.edges().len())
        .filter(|&i| {
            let e = &g.edges()[i];
            !g.is_leaf_vertex(&e.ends[0]) && !g.is_leaf_vertex(&e.ends[1])
        })
        .collect();
    let has_loop = internal.iter().any(|&i| g.edges()[i].ends[0] == g.edges()[i].ends[1]);
    let is_tree = !has_loop && internal.len() + 1 == inner.len();
    if is_tree {
        if let Some(doc) = abutting_layout(g, e, &inner, &internal)? {
            return Ok(doc);
        }
    }
    panel_layout(g, e, &inner)
}

/// Tree layout by reflection; None when two placements collide.
fn abutting_layout(
    g: &Graph,
    e: &GluedBzElement,
    inner: &[String],
    internal: &[usize],
) -> Result<Option<String>> {
    let m = e.m;
    let mut frames: BTreeMap<String, Frame> = BTreeMap::new();
    let mut occupied: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let root = inner[0].clone();
    frames.insert(root.clone(), Frame::standard(m));
    occupied.insert(centroid_key(&Frame::standard(m)));
    queue.push_back(root);
    let mut annotations: Vec<(Pt, String)> = Vec::new();
    while let Some(u) = queue.pop_front() {
        let fu = frames[&u];
        for &ei in internal {
            let edge = &g.edges()[ei];
            let (v, su, sv) = if edge.ends[0] == u && !frames.contains_key(&edge.ends[1]) {
                (
                    edge.ends[1].clone(),
                    side_of_vertex(g, &u, &edge.id, 0)?,
                    side_of_vertex(g, &edge.ends[1], &edge.id, 1)?,
                )
            } else if edge.ends[1] == u && !frames.contains_key(&edge.ends[0]) {
                (
                    edge.ends[0].clone(),
                    side_of_vertex(g, &u, &edge.id, 1)?,
                    side_of_vertex(g, &edge.ends[0], &edge.id, 0)?,
                )
            } else {
                continue;
            };
            // The neighbour sits mirrored across the shared side; its
            // reading of the side runs opposite to ours, so its start
            // corner lands on our end corner.
            let (us, ue) = side_corners(su);
            let (vs, ve) = side_corners(sv);
            let p = fu.corners[ue];
            let q = fu.corners[us];
            let third = reflect(fu.corners[3 - us - ue], p, q);
            let mut corners = [(0.0, 0.0); 3];
            corners[vs] = p;
            corners[ve] = q;
            corners[3 - vs - ve] = third;
            let fv = Frame { corners, span: fu.span };
            let key = centroid_key(&fv);
            if !occupied.insert(key) {
                return Ok(None);
            }
            annotations.push((
                ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0),
                edge.id.clone(),
            ));
            frames.insert(v.clone(), fv);
            queue.push_back(v);
        }
    }
    // Shift everything into view.
    let (mut minx, mut miny, mut maxx, mut maxy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for f in frames.values() {
        for (x, y) in f.corners {
            minx = minx.min(x);
            miny = miny.min(y);
            maxx = maxx.max(x);
            maxy = maxy.max(y);
        }
    }
    let (dx, dy) = (MARGIN - minx, MARGIN - miny);
    let mut body = String::new();
    let options = RenderOptions::default();
    for v in inner {
        let f = shift(&frames[v], dx, dy);
        draw_triangle(&mut body, &e.triangles[v], &f, &options)?;
    }
    for (at, label) in &annotations {
        let _ = writeln!(
            body,
            "<text class=\"pairing\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#06c\">{label}</text>",
            at.0 + dx + 4.0,
            at.1 + dy - 4.0
        );
    }
    Ok(Some(svg_document(&body, maxx - minx + 2.0 * MARGIN, maxy - miny + 2.0 * MARGIN)))
}

fn centroid_key(f: &Frame) -> (i64, i64) {
    let c = f.centroid();
    ((c.0 * 1000.0).round() as i64, (c.1 * 1000.0).round() as i64)
}

fn side_of_vertex(g: &Graph, vertex: &str, edge: &str, slot: usize) -> Result<Side> {
    vertex_sides(g, vertex)?
        .into_iter()
        .find(|(e, s, _)| e == edge && *s == slot)
        .map(|(_, _, side)| side)
        .ok_or_else(|| {
            Error::Inconsistent(format!("edge {edge:?} slot {slot} not at vertex {vertex:?}"))
        })
}

/// One panel per inner vertex, side by side, all sides labelled with
/// edge name and slot.
fn panel_layout(g: &Graph, e: &GluedBzElement, inner: &[String]) -> Result<String> {
    let m = e.m;
    let s = f64::from(2 * m - 3) * SPACING;
    let panel_w = s + 2.0 * MARGIN;
    let mut body = String::new();
    let options = RenderOptions::default();
    for (k, v) in inner.iter().enumerate() {
        let f = shift(&Frame::standard(m), MARGIN + k as f64 * panel_w, 2.0 * MARGIN);
        draw_triangle(&mut body, &e.triangles[v], &f, &options)?;
        let _ = writeln!(
            body,
            "<text class=\"panel\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" fill=\"#000\">{v}</text>",
            f.corners[0].0,
            f.corners[0].1 - MARGIN
        );
        for (edge_id, slot, side) in vertex_sides(g, v)? {
            let (i, j) = side_corners(side);
            let (p, q) = (f.corners[i], f.corners[j]);
            let _ = writeln!(
                body,
                "<text class=\"pairing\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#06c\">{edge_id}#{slot}</text>",
                (p.0 + q.0) / 2.0 + 4.0,
                (p.1 + q.1) / 2.0 - 4.0
            );
        }
    }
    Ok(svg_document(
        &body,
        inner.len() as f64 * panel_w + MARGIN,
        s * ROW_H + 4.0 * MARGIN,
    ))
}
