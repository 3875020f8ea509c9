//! The attribute reduct of an image: five global attributes and a
//! seven-attribute row per polygon of the upper cover, plus the concavity
//! string the matcher compares by edit distance.

use std::fmt;
use std::str::FromStr;

use crate::cover::{build_containment, trace_classified, CellOccupancy, Containment, Grid, IsoPolygon, PolygonKind};
use crate::error::{Error, Result};
use crate::kdindex::Point;
use crate::raster::BinaryRaster;

/// A polygon is major when its area is at least this fraction of the
/// largest polygon's area.
pub const DEFAULT_MAJOR_FRACTION: f64 = 1.0 / 16.0;

/// Quantized black-to-white pixel ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BwBin {
    Quarter,
    Half,
    One,
    Two,
    Four,
}

impl BwBin {
    pub const ALL: [BwBin; 5] = [BwBin::Quarter, BwBin::Half, BwBin::One, BwBin::Two, BwBin::Four];

    pub fn value(self) -> f64 {
        2f64.powi(self.log2())
    }

    pub fn log2(self) -> i32 {
        self as i32 - 2
    }

    /// Nearest bin in log scale, ties to the smaller bin. Computed exactly on
    /// the integer counts: the boundary between bins `2^k` and `2^(k+1)`
    /// sits at `2^(k + 1/2)`, so `black/white` is compared through squares.
    pub fn from_counts(black: u64, white: u64) -> BwBin {
        if white == 0 {
            return BwBin::Four;
        }
        if black == 0 {
            return BwBin::Quarter;
        }
        let (b2, w2) = ((black as u128).pow(2), (white as u128).pow(2));
        // ratio^2 <= 2^(2k+1)  <=>  b^2 * 2^(-(2k+1)) <= w^2
        let below = |k: i32| {
            let e = 2 * k + 1;
            if e >= 0 {
                b2 <= w2 << e
            } else {
                b2 << (-e) <= w2
            }
        };
        for (i, bin) in BwBin::ALL.iter().enumerate().take(4) {
            if below(i as i32 - 2) {
                return *bin;
            }
        }
        BwBin::Four
    }

    pub fn from_ratio(ratio: f64) -> BwBin {
        let l = ratio.log2();
        let k = (l - 0.5).ceil().clamp(-2.0, 2.0) as i32;
        BwBin::ALL[(k + 2) as usize]
    }
}

impl fmt::Display for BwBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BwBin::Quarter => "0.25",
            BwBin::Half => "0.5",
            BwBin::One => "1",
            BwBin::Two => "2",
            BwBin::Four => "4",
        })
    }
}

impl FromStr for BwBin {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "0.25" => BwBin::Quarter,
            "0.5" => BwBin::Half,
            "1" => BwBin::One,
            "2" => BwBin::Two,
            "4" => BwBin::Four,
            _ => return Err(format!("bw {s:?} not in {{0.25, 0.5, 1, 2, 4}}")),
        })
    }
}

/// Quantized vertical-to-horizontal perimeter ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRatio {
    Half,
    One,
    Two,
}

impl EdgeRatio {
    pub fn log2(self) -> i32 {
        match self {
            EdgeRatio::Half => -1,
            EdgeRatio::One => 0,
            EdgeRatio::Two => 1,
        }
    }

    /// Nearest of {1/2, 1, 2} in log scale, ties to 1.
    pub fn from_perimeters(vertical: u64, horizontal: u64) -> EdgeRatio {
        let (v2, h2) = ((vertical as u128).pow(2), (horizontal as u128).pow(2));
        if v2 > 2 * h2 {
            EdgeRatio::Two
        } else if 2 * v2 < h2 {
            EdgeRatio::Half
        } else {
            EdgeRatio::One
        }
    }

    pub fn inverse(self) -> EdgeRatio {
        match self {
            EdgeRatio::Half => EdgeRatio::Two,
            EdgeRatio::One => EdgeRatio::One,
            EdgeRatio::Two => EdgeRatio::Half,
        }
    }
}

impl fmt::Display for EdgeRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRatio::Half => "1/2",
            EdgeRatio::One => "1",
            EdgeRatio::Two => "2",
        })
    }
}

impl FromStr for EdgeRatio {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "1/2" => EdgeRatio::Half,
            "1" => EdgeRatio::One,
            "2" => EdgeRatio::Two,
            _ => return Err(format!("er {s:?} not in {{1/2, 1, 2}}")),
        })
    }
}

/// One row of the information table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonAttributes {
    /// Polygon number within its image, from 1.
    pub id: u32,
    pub kind: PolygonKind,
    /// Euler number; `None` (printed "inv") for holes.
    pub en: Option<i32>,
    /// Enclosing primary of a hole, 0 for primaries.
    pub hc: u32,
    /// Enclosing primary of a primary, 0 at top level and for holes.
    pub pc: u32,
    pub vdc: u32,
    pub hdc: u32,
    pub er: EdgeRatio,
    /// Hole position: sign is left (-) / right (+) of the parent's top-left
    /// vertex, magnitude 1 for the upper and 2 for the lower half. 0 for
    /// primaries.
    pub poh: i8,
    /// Concavity orientations over {L, R, U, D}.
    pub concavity: String,
    /// Number of primaries enclosing this polygon. Derived from `hc`/`pc`
    /// within the image and never serialized.
    pub nesting: u32,
}

/// Global attributes and polygon rows of one image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageFeature {
    pub image_id: String,
    pub tp: u32,
    pub mp: u32,
    pub holes: u32,
    pub parents: u32,
    pub bw: BwBin,
    pub polys: Vec<PolygonAttributes>,
}

impl ImageFeature {
    /// The (hole count, parent count) point used as the index key.
    pub fn key(&self) -> Point {
        Point::new(self.holes, self.parents)
    }

    /// Number of attribute values: seven per polygon plus five global.
    pub fn attribute_count(&self) -> usize {
        self.polys.len() * 7 + 5
    }

    /// Checks every structural invariant and recomputes `nesting`.
    pub fn validate(&mut self) -> std::result::Result<(), String> {
        validate_image_id(&self.image_id).map_err(|e| e.to_string())?;
        if self.tp != self.holes + self.parents {
            return Err(format!(
                "tp {} != holes {} + parents {}",
                self.tp, self.holes, self.parents
            ));
        }
        if self.mp > self.tp {
            return Err(format!("mp {} exceeds tp {}", self.mp, self.tp));
        }
        if self.polys.len() != self.tp as usize {
            return Err(format!("{} polygon rows for tp {}", self.polys.len(), self.tp));
        }
        let kind_of = |id: u32| -> Option<PolygonKind> { self.polys.get(id.checked_sub(1)? as usize).map(|p| p.kind) };
        let mut holes = 0;
        for (i, p) in self.polys.iter().enumerate() {
            if p.id as usize != i + 1 {
                return Err(format!("polygon number {} out of sequence", p.id));
            }
            if !p.concavity.bytes().all(|b| b"LRUD".contains(&b)) {
                return Err(format!("polygon {}: concavity {:?}", p.id, p.concavity));
            }
            match p.kind {
                PolygonKind::Primary => {
                    if p.en.is_none() {
                        return Err(format!("primary {} has EN inv", p.id));
                    }
                    if p.poh != 0 || p.hc != 0 {
                        return Err(format!("primary {} has a hole position or hole parent", p.id));
                    }
                    if p.pc != 0 && (p.pc == p.id || kind_of(p.pc) != Some(PolygonKind::Primary)) {
                        return Err(format!("primary {}: pc {} is not another primary", p.id, p.pc));
                    }
                }
                PolygonKind::Hole => {
                    holes += 1;
                    if p.en.is_some() {
                        return Err(format!("hole {} has an Euler number", p.id));
                    }
                    if !matches!(p.poh, -2 | -1 | 1 | 2) {
                        return Err(format!("hole {}: poh {}", p.id, p.poh));
                    }
                    if p.pc != 0 || kind_of(p.hc) != Some(PolygonKind::Primary) {
                        return Err(format!("hole {}: hc {} is not a primary", p.id, p.hc));
                    }
                }
            }
        }
        if holes != self.holes {
            return Err(format!("{holes} hole rows but holes = {}", self.holes));
        }
        for p in self.polys.iter().filter(|p| p.kind == PolygonKind::Primary) {
            let assigned = self.polys.iter().filter(|h| h.hc == p.id).count() as i32;
            if p.en != Some(1 - assigned) {
                return Err(format!("primary {}: EN {:?} but {assigned} holes", p.id, p.en));
            }
        }
        let nesting = self.compute_nesting()?;
        for (p, n) in self.polys.iter_mut().zip(nesting) {
            p.nesting = n;
        }
        Ok(())
    }

    fn compute_nesting(&self) -> std::result::Result<Vec<u32>, String> {
        let depth = |start: u32| -> std::result::Result<u32, String> {
            let mut d = 0;
            let mut cur = start;
            while cur != 0 {
                let pc = self.polys[cur as usize - 1].pc;
                if pc == 0 {
                    break;
                }
                d += 1;
                if d > self.tp {
                    return Err(format!("containment cycle through primary {start}"));
                }
                cur = pc;
            }
            Ok(d)
        };
        self.polys
            .iter()
            .map(|p| match p.kind {
                PolygonKind::Primary => depth(p.id),
                PolygonKind::Hole => Ok(depth(p.hc)? + 1),
            })
            .collect()
    }
}

pub fn validate_image_id(id: &str) -> Result<()> {
    if !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
    {
        Ok(())
    } else {
        Err(Error::InvalidId(id.to_string()))
    }
}

/// BW bin of the whole raster. An all-black raster saturates to 4, an
/// all-white one to 0.25.
pub fn black_white_bin(raster: &BinaryRaster) -> BwBin {
    let black = raster.black_count();
    let white = raster.white_count();
    if black == 0 {
        log::debug!("all-white raster; BW ratio is degenerate");
    }
    BwBin::from_counts(black, white)
}

pub fn major_polygons(polys: &[IsoPolygon], fraction: f64) -> usize {
    let Some(max) = polys.iter().map(|p| p.area).max() else {
        return 0;
    };
    polys.iter().filter(|p| p.area as f64 >= fraction * max as f64).count()
}

/// `2 - n` with `n` the primary plus its directly assigned holes; `None` for holes.
pub fn euler_number(poly: &IsoPolygon, cont: &Containment) -> Option<i32> {
    match poly.kind {
        PolygonKind::Primary => Some(2 - (1 + cont.holes_of(poly.id) as i32)),
        PolygonKind::Hole => None,
    }
}

/// Top-left vertex: smallest y, then smallest x.
fn top_left(poly: &IsoPolygon) -> (u32, u32) {
    poly.vertices
        .iter()
        .copied()
        .min_by_key(|&(x, y)| (y, x))
        .expect("traced polygons are non-empty")
}

/// Quadrant code of a hole's vertex centroid relative to the top-left
/// vertex of its parent. Ties go right and to the lower half.
pub fn hole_position(hole: &IsoPolygon, parent: &IsoPolygon) -> i8 {
    let n = hole.vertices.len() as u64;
    let (sx, sy) = hole
        .vertices
        .iter()
        .fold((0u64, 0u64), |(ax, ay), &(x, y)| (ax + x as u64, ay + y as u64));
    let (vx, vy) = top_left(parent);
    // compare sx/n against vx without division
    let sign: i8 = if sx >= vx as u64 * n { 1 } else { -1 };
    let half: i8 = if sy < vy as u64 * n { 1 } else { 2 };
    sign * half
}

/// Orientation letter of a concavity whose middle edge runs in direction `d`:
/// the outward normal, i.e. the left-hand side of travel.
fn opening(d: usize) -> char {
    match d {
        0 => 'U',
        1 => 'R',
        2 => 'D',
        _ => 'L',
    }
}

/// Each maximal run of k >= 2 consecutive reflex (-1) corners contributes
/// k - 1 letters, one per adjacent reflex pair, naming the side the edge
/// between the pair faces.
pub fn concavity_string(poly: &IsoPolygon) -> String {
    let n = poly.vtypes.len();
    let dirs = poly.edge_directions();
    if poly.vtypes.iter().all(|&t| t == -1) {
        return dirs.iter().map(|&d| opening(d)).collect();
    }
    // vertex lists begin at the top-left vertex; start the scan at the first
    // convex corner from there so no run wraps around
    let start = (0..n).find(|&i| poly.vtypes[i] != -1).unwrap();
    let mut out = String::new();
    for step in 0..n - 1 {
        let i = (start + step) % n;
        let j = (i + 1) % n;
        if poly.vtypes[i] == -1 && poly.vtypes[j] == -1 {
            out.push(opening(dirs[i]));
        }
    }
    out
}

/// Sum of vertical edge lengths and of horizontal edge lengths, in pixels.
pub fn perimeter_components(poly: &IsoPolygon) -> (u64, u64) {
    poly.edges().fold((0, 0), |(v, h), (a, b)| {
        if a.0 == b.0 {
            (v + a.1.abs_diff(b.1) as u64, h)
        } else {
            (v, h + a.0.abs_diff(b.0) as u64)
        }
    })
}

pub fn edge_ratio(poly: &IsoPolygon) -> EdgeRatio {
    let (v, h) = perimeter_components(poly);
    EdgeRatio::from_perimeters(v, h)
}

/// Vertical and horizontal direction reversals around the whole contour.
pub fn direction_changes(poly: &IsoPolygon) -> (u32, u32) {
    let dirs = poly.edge_directions();
    let count = |axis: [usize; 2]| -> u32 {
        let seq: Vec<usize> = dirs.iter().copied().filter(|d| axis.contains(d)).collect();
        let n = seq.len();
        (0..n).filter(|&i| seq[i] != seq[(i + 1) % n]).count() as u32
    };
    (count([1, 3]), count([0, 2]))
}

/// Runs the full pipeline on one raster.
pub fn extract_features(image_id: &str, raster: &BinaryRaster, grid: Grid) -> Result<ImageFeature> {
    extract_features_with(image_id, raster, grid, DEFAULT_MAJOR_FRACTION)
}

pub fn extract_features_with(
    image_id: &str,
    raster: &BinaryRaster,
    grid: Grid,
    major_fraction: f64,
) -> Result<ImageFeature> {
    validate_image_id(image_id)?;
    grid.check(raster)?;
    let occ = CellOccupancy::new(raster, grid);
    let polys = trace_classified(&occ.upper_cells())?;
    let cont = build_containment(&polys)?;
    Ok(features_from_polygons(
        image_id,
        &polys,
        &cont,
        black_white_bin(raster),
        major_fraction,
    ))
}

pub fn features_from_polygons(
    image_id: &str,
    polys: &[IsoPolygon],
    cont: &Containment,
    bw: BwBin,
    major_fraction: f64,
) -> ImageFeature {
    let by_id = |id: u32| &polys[id as usize - 1];
    let rows: Vec<PolygonAttributes> = polys
        .iter()
        .map(|p| {
            let (vdc, hdc) = direction_changes(p);
            let (hc, pc, poh, nesting) = match p.kind {
                PolygonKind::Primary => {
                    let pc = cont.primary_parent[&p.id];
                    (0, pc, 0, cont.primary_depth(p.id))
                }
                PolygonKind::Hole => {
                    let hc = cont.hole_parent[&p.id];
                    (hc, 0, hole_position(p, by_id(hc)), cont.primary_depth(hc) + 1)
                }
            };
            PolygonAttributes {
                id: p.id,
                kind: p.kind,
                en: euler_number(p, cont),
                hc,
                pc,
                vdc,
                hdc,
                er: edge_ratio(p),
                poh,
                concavity: concavity_string(p),
                nesting,
            }
        })
        .collect();
    let holes = polys.iter().filter(|p| p.kind == PolygonKind::Hole).count() as u32;
    ImageFeature {
        image_id: image_id.to_string(),
        tp: polys.len() as u32,
        mp: major_polygons(polys, major_fraction) as u32,
        holes,
        parents: polys.len() as u32 - holes,
        bw,
        polys: rows,
    }
}
