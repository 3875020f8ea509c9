//! Rough-set covers of a binary raster on a square grid.
//!
//! A cell belongs to the upper approximation when it holds at least one
//! black pixel and to the lower approximation when every one of its pixels is
//! black. Each approximation is traced into isothetic polygons whose vertices
//! sit on grid lines. Contours are walked with the object on the right-hand
//! side (y grows downwards), so outer contours run clockwise, hole contours
//! counter-clockwise, a right turn is a 90 degree corner (type +1) and a left
//! turn a 270 degree corner (type -1). Cells are joined under 4-connectivity;
//! at a diagonal pinch the walk turns right, which keeps the two cells apart.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::raster::BinaryRaster;

/// Square grid with cell side `g` pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    g: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { g: 3 }
    }
}

impl Grid {
    pub fn new(g: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidGrid { g, width: 0, height: 0 });
        }
        Ok(Grid { g })
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.g
    }

    pub fn check(&self, raster: &BinaryRaster) -> Result<()> {
        if self.g > raster.width().min(raster.height()) {
            return Err(Error::InvalidGrid {
                g: self.g,
                width: raster.width(),
                height: raster.height(),
            });
        }
        Ok(())
    }
}

/// Placement of a cell lattice over a `width x height` frame. The last
/// column and row are narrower when the frame is not a multiple of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub g: u32,
    pub width: u32,
    pub height: u32,
    pub cols: u32,
    pub rows: u32,
}

impl Lattice {
    pub fn new(width: u32, height: u32, grid: Grid) -> Self {
        let g = grid.size();
        Lattice {
            g,
            width,
            height,
            cols: width.div_ceil(g),
            rows: height.div_ceil(g),
        }
    }

    /// Pixel extent `[x0, x1) x [y0, y1)` of a cell.
    pub fn cell_pixels(&self, c: u32, r: u32) -> (u32, u32, u32, u32) {
        let g = self.g;
        (
            c * g,
            r * g,
            ((c + 1) * g).min(self.width),
            ((r + 1) * g).min(self.height),
        )
    }

    pub fn cell_capacity(&self, c: u32, r: u32) -> u32 {
        let (x0, y0, x1, y1) = self.cell_pixels(c, r);
        (x1 - x0) * (y1 - y0)
    }

    /// Pixel position of a lattice corner, clipped to the frame.
    pub fn corner_pixel(&self, cx: i64, cy: i64) -> (u32, u32) {
        let g = self.g as i64;
        (
            (cx * g).min(self.width as i64) as u32,
            (cy * g).min(self.height as i64) as u32,
        )
    }

    fn cell_count(&self) -> usize {
        self.cols as usize * self.rows as usize
    }
}

/// Black-pixel count of every grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellOccupancy {
    lattice: Lattice,
    counts: Vec<u32>,
}

impl CellOccupancy {
    pub fn new(raster: &BinaryRaster, grid: Grid) -> Self {
        let lattice = Lattice::new(raster.width(), raster.height(), grid);
        let g = grid.size();
        let mut counts = vec![0u32; lattice.cell_count()];
        for y in 0..raster.height() {
            let row = (y / g) as usize * lattice.cols as usize;
            for x in 0..raster.width() {
                if raster.get(x, y) {
                    counts[row + (x / g) as usize] += 1;
                }
            }
        }
        CellOccupancy { lattice, counts }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn cols(&self) -> u32 {
        self.lattice.cols
    }

    pub fn rows(&self) -> u32 {
        self.lattice.rows
    }

    pub fn count(&self, c: u32, r: u32) -> u32 {
        self.counts[r as usize * self.lattice.cols as usize + c as usize]
    }

    /// Cells holding at least one black pixel.
    pub fn upper_cells(&self) -> CellSet {
        CellSet::from_fn(self.lattice, |c, r| self.count(c, r) > 0)
    }

    /// Cells whose every pixel is black.
    pub fn lower_cells(&self) -> CellSet {
        CellSet::from_fn(self.lattice, |c, r| {
            self.count(c, r) == self.lattice.cell_capacity(c, r)
        })
    }
}

/// Subset of the cells of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    lattice: Lattice,
    cells: Vec<bool>,
}

impl CellSet {
    pub fn empty(lattice: Lattice) -> Self {
        CellSet {
            lattice,
            cells: vec![false; lattice.cell_count()],
        }
    }

    pub fn from_fn(lattice: Lattice, f: impl Fn(u32, u32) -> bool) -> Self {
        let mut s = Self::empty(lattice);
        for r in 0..lattice.rows {
            for c in 0..lattice.cols {
                s.cells[r as usize * lattice.cols as usize + c as usize] = f(c, r);
            }
        }
        s
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Membership test; anything outside the lattice is absent.
    #[inline]
    pub fn contains(&self, c: i64, r: i64) -> bool {
        c >= 0
            && r >= 0
            && c < self.lattice.cols as i64
            && r < self.lattice.rows as i64
            && self.cells[r as usize * self.lattice.cols as usize + c as usize]
    }

    pub fn insert(&mut self, c: u32, r: u32) {
        let cols = self.lattice.cols as usize;
        self.cells[r as usize * cols + c as usize] = true;
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let cols = self.lattice.cols;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i as u32 % cols, i as u32 / cols))
    }

    /// Whether pixel `(x, y)` lies in a member cell.
    pub fn covers_pixel(&self, x: u32, y: u32) -> bool {
        self.contains((x / self.lattice.g) as i64, (y / self.lattice.g) as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolygonKind {
    Primary,
    Hole,
}

/// Closed isothetic polygon on grid lines.
///
/// Only corner vertices are stored; collinear lattice crossings are dropped,
/// so consecutive edges alternate between horizontal and vertical. The vertex
/// list starts at the top-left vertex (smallest y, then smallest x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoPolygon {
    pub id: u32,
    pub kind: PolygonKind,
    /// Vertex positions in pixels, clipped to the raster frame.
    pub vertices: Vec<(u32, u32)>,
    /// +1 for a 90 degree corner, -1 for a 270 degree corner.
    pub vtypes: Vec<i8>,
    /// Enclosed area in cells.
    pub area: u64,
    /// Vertex positions in lattice units.
    corners: Vec<(i64, i64)>,
    /// A cell inside the polygon next to its boundary: an object cell for a
    /// primary, a void cell for a hole.
    probe: (i64, i64),
}

const EAST: usize = 0;
const STEP: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

#[inline]
fn turn_right(d: usize) -> usize {
    (d + 1) % 4
}

#[inline]
fn turn_left(d: usize) -> usize {
    (d + 3) % 4
}

/// Cell on the right of the unit edge leaving corner `p` in direction `d`.
#[inline]
fn right_cell(p: (i64, i64), d: usize) -> (i64, i64) {
    let (x, y) = p;
    match d {
        0 => (x, y),
        1 => (x - 1, y),
        2 => (x - 1, y - 1),
        _ => (x, y - 1),
    }
}

#[inline]
fn left_cell(p: (i64, i64), d: usize) -> (i64, i64) {
    let (x, y) = p;
    match d {
        0 => (x, y - 1),
        1 => (x, y),
        2 => (x - 1, y),
        _ => (x - 1, y - 1),
    }
}

impl IsoPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn type_sum(&self) -> i32 {
        self.vtypes.iter().map(|&t| t as i32).sum()
    }

    pub fn lattice_vertices(&self) -> &[(i64, i64)] {
        &self.corners
    }

    /// Directed edges as `(from, to)` pixel pairs, in traversal order.
    pub fn edges(&self) -> impl Iterator<Item = ((u32, u32), (u32, u32))> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Direction index (0 east, 1 south, 2 west, 3 north) of each edge.
    pub fn edge_directions(&self) -> Vec<usize> {
        let n = self.corners.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.corners[i], self.corners[(i + 1) % n]);
                match ((b.0 - a.0).signum(), (b.1 - a.1).signum()) {
                    (1, 0) => 0,
                    (0, 1) => 1,
                    (-1, 0) => 2,
                    _ => 3,
                }
            })
            .collect()
    }

    /// Even-odd test of the centre of cell `(c, r)` against this contour.
    pub fn encloses_cell(&self, c: i64, r: i64) -> bool {
        let n = self.corners.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.corners[i], self.corners[(i + 1) % n]);
            if a.0 == b.0 && a.0 > c && a.1.min(b.1) <= r && r < a.1.max(b.1) {
                inside = !inside;
            }
        }
        inside
    }

    fn bbox(&self) -> (i64, i64, i64, i64) {
        let xs = self.corners.iter().map(|p| p.0);
        let ys = self.corners.iter().map(|p| p.1);
        (
            xs.clone().min().unwrap(),
            ys.clone().min().unwrap(),
            xs.max().unwrap(),
            ys.max().unwrap(),
        )
    }
}

/// Primary when the corner types sum to +4, hole when they sum to -4.
pub fn classify(poly: &IsoPolygon) -> Result<PolygonKind> {
    match poly.type_sum() {
        4 => Ok(PolygonKind::Primary),
        -4 => Ok(PolygonKind::Hole),
        s => Err(Error::Tracing(format!("polygon {} has corner-type sum {s}", poly.id))),
    }
}

/// Traces every boundary contour of `cells`. Ids are assigned from 1 in
/// row-major discovery order.
pub fn trace_polygons(cells: &CellSet) -> Result<Vec<IsoPolygon>> {
    let lat = cells.lattice();
    let cols = lat.cols as usize;
    // top edges (object below, void above) already walked
    let mut seen = vec![false; lat.cell_count()];
    let mut polys = Vec::new();
    for r in 0..lat.rows as i64 {
        for c in 0..lat.cols as i64 {
            if !cells.contains(c, r) || cells.contains(c, r - 1) {
                continue;
            }
            if seen[r as usize * cols + c as usize] {
                continue;
            }
            let id = polys.len() as u32 + 1;
            polys.push(walk(cells, (c, r), id, &mut seen)?);
        }
    }
    Ok(polys)
}

fn walk(cells: &CellSet, start: (i64, i64), id: u32, seen: &mut [bool]) -> Result<IsoPolygon> {
    let lat = cells.lattice();
    let cols = lat.cols as usize;
    let is_edge = |p: (i64, i64), d: usize| {
        let (rc, lc) = (right_cell(p, d), left_cell(p, d));
        cells.contains(rc.0, rc.1) && !cells.contains(lc.0, lc.1)
    };

    let mut corners = Vec::new();
    let mut vtypes = Vec::new();
    let mut p = start;
    let mut d = EAST;
    let limit = 4 * lat.cell_count() + 4;
    for _ in 0..limit {
        if d == EAST {
            seen[p.1 as usize * cols + p.0 as usize] = true;
        }
        p = (p.0 + STEP[d].0, p.1 + STEP[d].1);
        let next = [turn_right(d), d, turn_left(d)]
            .into_iter()
            .find(|&nd| is_edge(p, nd))
            .ok_or_else(|| Error::Tracing(format!("contour {id} dead-ends at {p:?}")))?;
        if next != d {
            corners.push(p);
            vtypes.push(if next == turn_right(d) { 1i8 } else { -1 });
        }
        d = next;
        if p == start && d == EAST {
            return Ok(finish(lat, id, start, corners, vtypes));
        }
    }
    Err(Error::Tracing(format!("contour {id} does not close")))
}

fn finish(lat: Lattice, id: u32, start: (i64, i64), mut corners: Vec<(i64, i64)>, mut vtypes: Vec<i8>) -> IsoPolygon {
    let first = corners
        .iter()
        .enumerate()
        .min_by_key(|(_, &(x, y))| (y, x))
        .map(|(i, _)| i)
        .unwrap_or(0);
    corners.rotate_left(first);
    vtypes.rotate_left(first);

    let n = corners.len();
    let twice: i64 = (0..n)
        .map(|i| {
            let (a, b) = (corners[i], corners[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    let kind = if vtypes.iter().map(|&t| t as i32).sum::<i32>() >= 0 {
        PolygonKind::Primary
    } else {
        PolygonKind::Hole
    };
    let probe = match kind {
        PolygonKind::Primary => right_cell(start, EAST),
        PolygonKind::Hole => left_cell(start, EAST),
    };
    IsoPolygon {
        id,
        kind,
        vertices: corners.iter().map(|&(x, y)| lat.corner_pixel(x, y)).collect(),
        vtypes,
        area: (twice.unsigned_abs()) / 2,
        corners,
        probe,
    }
}

/// Traces and classifies, rejecting any contour whose corner types do not
/// sum to +-4.
pub fn trace_classified(cells: &CellSet) -> Result<Vec<IsoPolygon>> {
    let polys = trace_polygons(cells)?;
    for p in &polys {
        let kind = classify(p)?;
        debug_assert_eq!(kind, p.kind);
    }
    Ok(polys)
}

/// Nesting relations between the polygons of one trace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Containment {
    /// hole id -> innermost enclosing primary id
    pub hole_parent: BTreeMap<u32, u32>,
    /// primary id -> innermost enclosing primary id, 0 at top level
    pub primary_parent: BTreeMap<u32, u32>,
}

impl Containment {
    /// Number of primaries strictly enclosing a primary.
    pub fn primary_depth(&self, id: u32) -> u32 {
        let mut depth = 0;
        let mut cur = id;
        while let Some(&parent) = self.primary_parent.get(&cur) {
            if parent == 0 {
                break;
            }
            depth += 1;
            cur = parent;
        }
        depth
    }

    pub fn holes_of(&self, primary: u32) -> usize {
        self.hole_parent.values().filter(|&&p| p == primary).count()
    }
}

pub fn build_containment(polys: &[IsoPolygon]) -> Result<Containment> {
    let primaries: Vec<_> = polys
        .iter()
        .filter(|p| p.kind == PolygonKind::Primary)
        .map(|p| (p, p.bbox()))
        .collect();
    let innermost = |poly: &IsoPolygon| -> Option<u32> {
        let (c, r) = poly.probe;
        primaries
            .iter()
            .filter(|(q, (x0, y0, x1, y1))| {
                q.id != poly.id && (*x0..*x1).contains(&c) && (*y0..*y1).contains(&r) && q.encloses_cell(c, r)
            })
            .min_by_key(|(q, _)| (q.area, q.id))
            .map(|(q, _)| q.id)
    };
    let mut cont = Containment::default();
    for poly in polys {
        match poly.kind {
            PolygonKind::Primary => {
                cont.primary_parent.insert(poly.id, innermost(poly).unwrap_or(0));
            }
            PolygonKind::Hole => {
                let parent = innermost(poly)
                    .ok_or_else(|| Error::Tracing(format!("hole {} has no enclosing primary", poly.id)))?;
                cont.hole_parent.insert(poly.id, parent);
            }
        }
    }
    Ok(cont)
}

/// Cells enclosed by a set of contours under the even-odd rule.
pub fn fill_polygons(polys: &[IsoPolygon], lattice: Lattice) -> CellSet {
    let mut crossings: Vec<Vec<i64>> = vec![Vec::new(); lattice.rows as usize];
    for poly in polys {
        let n = poly.corners.len();
        for i in 0..n {
            let (a, b) = (poly.corners[i], poly.corners[(i + 1) % n]);
            if a.0 == b.0 {
                for r in a.1.min(b.1)..a.1.max(b.1) {
                    crossings[r as usize].push(a.0);
                }
            }
        }
    }
    let mut set = CellSet::empty(lattice);
    for (r, xs) in crossings.iter_mut().enumerate() {
        xs.sort_unstable();
        for pair in xs.chunks_exact(2) {
            for c in pair[0]..pair[1] {
                set.insert(c as u32, r as u32);
            }
        }
    }
    set
}

/// Traced upper and lower approximations.
#[derive(Debug, Clone)]
pub struct CoverPair {
    pub upper: Vec<IsoPolygon>,
    pub lower: Vec<IsoPolygon>,
}

pub fn rough_cover(raster: &BinaryRaster, grid: Grid) -> Result<CoverPair> {
    grid.check(raster)?;
    let occ = CellOccupancy::new(raster, grid);
    Ok(CoverPair {
        upper: trace_classified(&occ.upper_cells())?,
        lower: trace_classified(&occ.lower_cells())?,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Cell set from rows of `#`/`.` characters.
    pub(crate) fn cells(rows: &[&str]) -> CellSet {
        let lat = Lattice {
            g: 1,
            width: rows[0].len() as u32,
            height: rows.len() as u32,
            cols: rows[0].len() as u32,
            rows: rows.len() as u32,
        };
        CellSet::from_fn(lat, |c, r| rows[r as usize].as_bytes()[c as usize] == b'#')
    }

    fn raster(w: u32, h: u32, f: impl Fn(u32, u32) -> bool) -> BinaryRaster {
        BinaryRaster::from_fn(w, h, f).unwrap()
    }

    #[test]
    fn occupancy_edge_cases() {
        let g = Grid::new(3).unwrap();
        let white = CellOccupancy::new(&raster(9, 9, |_, _| false), g);
        assert_eq!((white.cols(), white.rows()), (3, 3));
        assert!((0..3).all(|c| (0..3).all(|r| white.count(c, r) == 0)));
        assert!(white.upper_cells().is_empty());

        let black = CellOccupancy::new(&raster(9, 9, |_, _| true), g);
        assert!((0..3).all(|c| (0..3).all(|r| black.count(c, r) == 9)));
        assert_eq!(black.lower_cells().len(), 9);

        let dot = CellOccupancy::new(&raster(9, 9, |x, y| x == 0 && y == 0), g);
        assert_eq!(dot.count(0, 0), 1);
        assert_eq!(dot.upper_cells().iter().collect::<Vec<_>>(), vec![(0, 0)]);
        assert!(dot.lower_cells().is_empty());
    }

    #[test]
    fn ragged_border_cells() {
        let occ = CellOccupancy::new(&raster(10, 7, |_, _| true), Grid::new(3).unwrap());
        assert_eq!((occ.cols(), occ.rows()), (4, 3));
        assert_eq!(occ.count(3, 2), 1);
        assert_eq!(occ.lattice().cell_capacity(3, 2), 1);
        assert_eq!(occ.lower_cells().len(), 12);
    }

    #[test]
    fn aligned_square_covers_two_by_two() {
        let occ = CellOccupancy::new(&raster(12, 12, |x, y| x < 6 && y < 6), Grid::new(3).unwrap());
        let upper: Vec<_> = occ.upper_cells().iter().collect();
        assert_eq!(upper, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(occ.lower_cells(), occ.upper_cells());
    }

    #[test]
    fn offset_square_lower_is_strictly_smaller() {
        let occ = CellOccupancy::new(
            &raster(12, 12, |x, y| (1..7).contains(&x) && (1..7).contains(&y)),
            Grid::new(3).unwrap(),
        );
        let (upper, lower) = (occ.upper_cells(), occ.lower_cells());
        assert_eq!(upper.len(), 9);
        assert_eq!(lower.len(), 1);
        assert!(lower.iter().all(|(c, r)| upper.contains(c as i64, r as i64)));
    }

    #[test]
    fn block_traces_to_rectangle() {
        let polys = trace_classified(&cells(&["##", "##"])).unwrap();
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].kind, PolygonKind::Primary);
        assert_eq!(polys[0].vtypes, vec![1, 1, 1, 1]);
        assert_eq!(polys[0].vertices, vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(polys[0].area, 4);
    }

    #[test]
    fn annulus_traces_to_primary_and_hole() {
        let polys = trace_classified(&cells(&["###", "#.#", "###"])).unwrap();
        assert_eq!(polys.len(), 2);
        assert_eq!(polys[0].kind, PolygonKind::Primary);
        assert_eq!(polys[0].type_sum(), 4);
        assert_eq!(polys[0].len(), 4);
        assert_eq!(polys[1].kind, PolygonKind::Hole);
        assert_eq!(polys[1].type_sum(), -4);
        assert_eq!(polys[1].vertices, vec![(1, 1), (1, 2), (2, 2), (2, 1)]);
        assert_eq!(polys[1].area, 1);

        let cont = build_containment(&polys).unwrap();
        assert_eq!(cont.hole_parent, BTreeMap::from([(2, 1)]));
        assert_eq!(cont.primary_parent, BTreeMap::from([(1, 0)]));
    }

    #[test]
    fn l_hexomino_is_primary() {
        let polys = trace_classified(&cells(&["#.", "#.", "##", "##"])).unwrap();
        assert_eq!(polys.len(), 1);
        let mut types = polys[0].vtypes.clone();
        types.sort();
        assert_eq!(types, vec![-1, 1, 1, 1, 1, 1]);
        assert_eq!(classify(&polys[0]).unwrap(), PolygonKind::Primary);
    }

    #[test]
    fn diagonal_cells_stay_separate() {
        let polys = trace_classified(&cells(&["#.", ".#"])).unwrap();
        assert_eq!(polys.len(), 2);
        assert!(polys.iter().all(|p| p.vtypes == vec![1, 1, 1, 1]));
    }

    #[test]
    fn malformed_polygon_is_rejected() {
        let mut p = trace_polygons(&cells(&["##"])).unwrap().remove(0);
        p.vtypes[0] = -1;
        assert!(matches!(classify(&p), Err(Error::Tracing(_))));
    }

    #[test]
    fn nested_frames_containment() {
        // frame, island with two holes inside the frame's hole; holes are
        // discovered at their bottom edge
        let polys = trace_classified(&cells(&[
            "#########",
            "#.......#",
            "#.#####.#",
            "#.#.#.#.#",
            "#.#####.#",
            "#.......#",
            "#########",
        ]))
        .unwrap();
        let kinds: Vec<_> = polys.iter().map(|p| (p.id, p.kind)).collect();
        use PolygonKind::*;
        assert_eq!(kinds, vec![(1, Primary), (2, Primary), (3, Hole), (4, Hole), (5, Hole)]);
        let cont = build_containment(&polys).unwrap();
        assert_eq!(cont.hole_parent, BTreeMap::from([(3, 2), (4, 2), (5, 1)]));
        assert_eq!(cont.primary_parent, BTreeMap::from([(1, 0), (2, 1)]));
        assert_eq!(cont.primary_depth(2), 1);
        assert_eq!(cont.holes_of(2), 2);
    }

    #[test]
    fn fill_reproduces_cells() {
        let set = cells(&[
            "#########",
            "#.......#",
            "#.#####.#",
            "#.#.#.#.#",
            "#.#####.#",
            "#......##",
            "####.####",
        ]);
        let polys = trace_classified(&set).unwrap();
        assert_eq!(fill_polygons(&polys, set.lattice()), set);
    }

    #[test]
    fn ragged_vertices_clip_to_frame() {
        let r = raster(10, 8, |_, _| true);
        let cover = rough_cover(&r, Grid::new(3).unwrap()).unwrap();
        assert_eq!(cover.upper[0].vertices, vec![(0, 0), (10, 0), (10, 8), (0, 8)]);
    }

    #[test]
    fn grid_larger_than_raster_rejected() {
        let r = raster(4, 9, |_, _| true);
        assert!(matches!(
            rough_cover(&r, Grid::new(5).unwrap()),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(Grid::new(0).is_err());
    }
}
