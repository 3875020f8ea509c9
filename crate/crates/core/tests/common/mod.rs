//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use roughlogo::cover::IsoPolygon;
use roughlogo::kdindex::Point;
use roughlogo::BinaryRaster;

/// Raster built from a random union of `g`-cells. Every chosen cell gets at
/// least one black pixel and is fully black with probability `solid`, so
/// upper and lower covers usually differ. Dimensions may be ragged.
pub fn random_cell_raster(rng: &mut impl Rng, g: u32, max_cells: u32, solid: f64) -> BinaryRaster {
    let cols = rng.random_range(1..=max_cells);
    let rows = rng.random_range(1..=max_cells);
    let w = (cols * g).saturating_sub(rng.random_range(0..g)).max(g);
    let h = (rows * g).saturating_sub(rng.random_range(0..g)).max(g);
    let density = rng.random_range(0.2..0.8);
    let mut r = BinaryRaster::new(w, h).unwrap();
    for cr in 0..h.div_ceil(g) {
        for cc in 0..w.div_ceil(g) {
            if !rng.random_bool(density) {
                continue;
            }
            let (x0, y0) = (cc * g, cr * g);
            let (x1, y1) = ((x0 + g).min(w), (y0 + g).min(h));
            if rng.random_bool(solid) {
                r.fill_rect(x0 as i64, y0 as i64, x1 as i64, y1 as i64, true);
            } else {
                for y in y0..y1 {
                    for x in x0..x1 {
                        if rng.random_bool(0.5) {
                            r.set(x, y, true);
                        }
                    }
                }
                let x = rng.random_range(x0..x1);
                let y = rng.random_range(y0..y1);
                r.set(x, y, true);
            }
        }
    }
    r
}

/// Random union of whole cells on a grid-aligned canvas.
pub fn aligned_cell_raster(rng: &mut impl Rng, g: u32, cols: u32, rows: u32) -> BinaryRaster {
    let density = rng.random_range(0.25..0.75);
    let mask: Vec<bool> = (0..cols * rows).map(|_| rng.random_bool(density)).collect();
    BinaryRaster::from_fn(cols * g, rows * g, |x, y| mask[((y / g) * cols + x / g) as usize]).unwrap()
}

/// Direct per-pixel occupancy check: upper cells hold some black pixel,
/// lower cells hold only black pixels.
pub fn occupancy_oracle(r: &BinaryRaster, g: u32) -> (Vec<bool>, Vec<bool>, u32) {
    let cols = r.width().div_ceil(g);
    let rows = r.height().div_ceil(g);
    let mut upper = vec![false; (cols * rows) as usize];
    let mut lower = vec![true; (cols * rows) as usize];
    for y in 0..r.height() {
        for x in 0..r.width() {
            let i = ((y / g) * cols + x / g) as usize;
            if r.get(x, y) {
                upper[i] = true;
            } else {
                lower[i] = false;
            }
        }
    }
    (upper, lower, cols)
}

/// Shoelace area of a pixel-coordinate vertex list.
pub fn shoelace_pixels(p: &IsoPolygon) -> u64 {
    let n = p.vertices.len();
    let twice: i64 = (0..n)
        .map(|i| {
            let (a, b) = (p.vertices[i], p.vertices[(i + 1) % n]);
            a.0 as i64 * b.1 as i64 - b.0 as i64 * a.1 as i64
        })
        .sum();
    twice.unsigned_abs() / 2
}

/// Full-matrix Levenshtein distance.
pub fn levenshtein_oracle(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

pub fn random_lrud(rng: &mut impl Rng, max_len: usize) -> String {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| b"LRUD"[rng.random_range(0..4)] as char).collect()
}

/// The `m` nearest distinct points by (squared distance, point).
pub fn nearest_oracle(points: &[Point], q: Point, m: usize) -> Vec<Point> {
    let mut v: Vec<Point> = points.to_vec();
    v.sort();
    v.dedup();
    v.sort_by_key(|p| (p.dist2(q), *p));
    v.truncate(m);
    v
}

/// Valid random table: features of random rasters with the free attributes
/// (vdc, hdc, er, concavity, bw) scrambled.
pub fn random_table(rng: &mut impl Rng, images: usize) -> roughlogo::FeatureTable {
    use roughlogo::{extract_features, BwBin, EdgeRatio, Grid};
    let mut entries = Vec::with_capacity(images);
    for i in 0..images {
        let g = rng.random_range(1..=3);
        let r = random_cell_raster(rng, g, 10, 0.5);
        let id = format!("img-{i}.{}", rng.random_range(0..1000));
        let mut f = extract_features(&id, &r, Grid::new(g).unwrap()).unwrap();
        f.bw = BwBin::ALL[rng.random_range(0..5)];
        for p in &mut f.polys {
            p.vdc = 2 * rng.random_range(1..40);
            p.hdc = 2 * rng.random_range(1..40);
            p.er = [EdgeRatio::Half, EdgeRatio::One, EdgeRatio::Two][rng.random_range(0..3)];
            p.concavity = random_lrud(rng, 8);
        }
        entries.push(f);
    }
    roughlogo::FeatureTable::new(entries)
}

/// Raster whose `scale`×`scale` blocks follow `black(c, r)` on a
/// `cols`×`rows` board.
pub fn scaled(cols: u32, rows: u32, scale: u32, black: impl Fn(u32, u32) -> bool) -> BinaryRaster {
    BinaryRaster::from_fn(cols * scale, rows * scale, |x, y| black(x / scale, y / scale)).unwrap()
}

/// A 41×41-cell plate with a 3×3 array of 11×11 holes and four one-cell
/// notches along its top and left sides, framed by one white cell.
/// Notches add two direction changes each, so VDC = HDC = 10; black to
/// white is 584:1265.
pub fn nine_hole_plate(scale: u32) -> BinaryRaster {
    const NOTCHES: [u32; 4] = [5, 12, 20, 33];
    let in_hole = |t: u32| [2..13, 15..26, 28..39].iter().any(|r| r.contains(&t));
    scaled(43, 43, scale, |c, r| {
        if !(1..42).contains(&c) || !(1..42).contains(&r) {
            return false;
        }
        let (u, v) = (c - 1, r - 1);
        if in_hole(u) && in_hole(v) {
            return false;
        }
        !(v == 0 && NOTCHES.contains(&u) || u == 0 && NOTCHES.contains(&v))
    })
}

/// An annulus (one hole) beside a plate with four holes.
pub fn annulus_and_four_hole_plate(scale: u32) -> BinaryRaster {
    scaled(13, 7, scale, |c, r| {
        if !(1..6).contains(&r) {
            return false;
        }
        let annulus = (1..6).contains(&c) && !(c == 3 && r == 3);
        let plate = (7..12).contains(&c) && !((c == 8 || c == 10) && (r == 2 || r == 4));
        annulus || plate
    })
}

/// Five 12×12 rings with 8×8 holes and 25 isolated single cells.
pub fn rings_and_specks(scale: u32) -> BinaryRaster {
    scaled(71, 24, scale, |c, r| {
        if (1..13).contains(&r) {
            let k = (c.wrapping_sub(1)) % 14;
            let ring = (1..71).contains(&c) && k < 12;
            return ring && !((2..10).contains(&k) && (3..11).contains(&r));
        }
        r >= 14 && r % 2 == 0 && c % 6 == 3 && c < 30
    })
}
