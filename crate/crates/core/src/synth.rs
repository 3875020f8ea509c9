//! Seeded synthetic logo corpus: rings, bars, crosses, discs, letter-like
//! polyominoes and nested frames composed on a square canvas.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::Grid;
use crate::error::{Error, Result};
use crate::raster::BinaryRaster;
use crate::reduct::{extract_features, ImageFeature};

pub const CANVAS: u32 = 256;
const MARGIN: i64 = 8;
/// Space left around a primitive inside its slot.
const PAD: i64 = 6;
/// Thinnest stroke drawn; keeps strokes several cells wide at g = 3.
const MIN_STROKE: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Primitive {
    Bar,
    Ring,
    Disc,
    Annulus,
    Cross,
    Polyomino,
    NestedFrames,
}

const PRIMITIVES: [Primitive; 7] = [
    Primitive::Bar,
    Primitive::Ring,
    Primitive::Disc,
    Primitive::Annulus,
    Primitive::Cross,
    Primitive::Polyomino,
    Primitive::NestedFrames,
];

#[derive(Debug, Clone, Copy)]
struct Slot {
    x0: i64,
    y0: i64,
    x1: i64,
    y1: i64,
}

impl Slot {
    fn w(&self) -> i64 {
        self.x1 - self.x0
    }
    fn h(&self) -> i64 {
        self.y1 - self.y0
    }
    fn inset(&self, d: i64) -> Slot {
        Slot {
            x0: self.x0 + d,
            y0: self.y0 + d,
            x1: self.x1 - d,
            y1: self.y1 - d,
        }
    }
    /// A random sub-box of the given size.
    fn place(&self, rng: &mut ChaCha8Rng, w: i64, h: i64) -> Slot {
        let x0 = self.x0 + rng.random_range(0..=(self.w() - w).max(0));
        let y0 = self.y0 + rng.random_range(0..=(self.h() - h).max(0));
        Slot {
            x0,
            y0,
            x1: x0 + w,
            y1: y0 + h,
        }
    }
}

fn rect(r: &mut BinaryRaster, s: Slot, black: bool) {
    r.fill_rect(s.x0, s.y0, s.x1, s.y1, black);
}

fn frame(r: &mut BinaryRaster, s: Slot, t: i64) {
    rect(r, s, true);
    rect(r, s.inset(t), false);
}

fn ellipse(r: &mut BinaryRaster, s: Slot, black: bool) {
    let (cx, cy) = ((s.x0 + s.x1) as f64 / 2.0, (s.y0 + s.y1) as f64 / 2.0);
    let (rx, ry) = (s.w() as f64 / 2.0, s.h() as f64 / 2.0);
    for y in s.y0.max(0)..s.y1.min(r.height() as i64) {
        for x in s.x0.max(0)..s.x1.min(r.width() as i64) {
            let dx = (x as f64 + 0.5 - cx) / rx;
            let dy = (y as f64 + 0.5 - cy) / ry;
            if dx * dx + dy * dy <= 1.0 {
                r.set(x as u32, y as u32, black);
            }
        }
    }
}

/// Grows a 4-connected block shape on an `m`×`m` board.
fn polyomino_cells(rng: &mut ChaCha8Rng, m: usize) -> Vec<Vec<bool>> {
    let mut board = vec![vec![false; m]; m];
    let target = rng.random_range(m + 1..=m * m * 2 / 3);
    let start = (rng.random_range(0..m), rng.random_range(0..m));
    board[start.1][start.0] = true;
    let mut cells = vec![start];
    while cells.len() < target {
        let (x, y) = cells[rng.random_range(0..cells.len())];
        let (dx, dy) = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)][rng.random_range(0..4)];
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        if nx < 0 || ny < 0 || nx >= m as i64 || ny >= m as i64 {
            continue;
        }
        let (nx, ny) = (nx as usize, ny as usize);
        if !board[ny][nx] {
            board[ny][nx] = true;
            cells.push((nx, ny));
        }
    }
    board
}

fn draw(r: &mut BinaryRaster, rng: &mut ChaCha8Rng, prim: Primitive, slot: Slot) {
    let slot = slot.inset(PAD);
    let (sw, sh) = (slot.w(), slot.h());
    let side = sw.min(sh);
    let size = |rng: &mut ChaCha8Rng, max: i64, min: i64| rng.random_range(min.min(max)..=max);
    match prim {
        Primitive::Bar => {
            let w = size(rng, sw, MIN_STROKE);
            let h = size(rng, sh, MIN_STROKE);
            rect(r, slot.place(rng, w, h), true);
        }
        Primitive::Ring => {
            let w = size(rng, sw, side / 2);
            let h = size(rng, sh, side / 2);
            let t = rng.random_range(MIN_STROKE..=(w.min(h) / 3).max(MIN_STROKE));
            frame(r, slot.place(rng, w, h), t);
        }
        Primitive::Disc => {
            let d = size(rng, side, side / 2);
            ellipse(r, slot.place(rng, d, d), true);
        }
        Primitive::Annulus => {
            let d = size(rng, side, side * 2 / 3);
            let s = slot.place(rng, d, d);
            let t = rng.random_range(MIN_STROKE..=(d / 4).max(MIN_STROKE));
            ellipse(r, s, true);
            ellipse(r, s.inset(t), false);
        }
        Primitive::Cross => {
            let d = size(rng, side, side * 2 / 3);
            let s = slot.place(rng, d, d);
            let t = rng.random_range(MIN_STROKE..=(d / 3).max(MIN_STROKE));
            let off = (d - t) / 2;
            rect(
                r,
                Slot {
                    x0: s.x0 + off,
                    x1: s.x0 + off + t,
                    ..s
                },
                true,
            );
            rect(
                r,
                Slot {
                    y0: s.y0 + off,
                    y1: s.y0 + off + t,
                    ..s
                },
                true,
            );
        }
        Primitive::Polyomino => {
            let m = rng.random_range(3..=5);
            let block = (side / m as i64).max(1);
            let board = polyomino_cells(rng, m);
            let s = slot.place(rng, block * m as i64, block * m as i64);
            for (by, row) in board.iter().enumerate() {
                for (bx, &on) in row.iter().enumerate() {
                    if on {
                        let x0 = s.x0 + bx as i64 * block;
                        let y0 = s.y0 + by as i64 * block;
                        r.fill_rect(x0, y0, x0 + block, y0 + block, true);
                    }
                }
            }
        }
        Primitive::NestedFrames => {
            let d = size(rng, side, side * 3 / 4);
            let mut s = slot.place(rng, d, d);
            let t = MIN_STROKE + rng.random_range(0..6);
            while s.w() > 2 * t && s.h() > 2 * t {
                frame(r, s, t);
                s = s.inset(2 * t);
            }
            if s.w() >= MIN_STROKE && s.h() >= MIN_STROKE && rng.random_bool(0.5) {
                rect(r, s, true);
            }
        }
    }
}

fn split(slot: Slot, vertical: bool, at: f64) -> (Slot, Slot) {
    if vertical {
        let x = slot.x0 + (slot.w() as f64 * at) as i64;
        (Slot { x1: x, ..slot }, Slot { x0: x, ..slot })
    } else {
        let y = slot.y0 + (slot.h() as f64 * at) as i64;
        (Slot { y1: y, ..slot }, Slot { y0: y, ..slot })
    }
}

/// Draws one logo.
pub fn generate_logo(rng: &mut ChaCha8Rng) -> BinaryRaster {
    let mut r = BinaryRaster::new(CANVAS, CANVAS).expect("nonzero canvas");
    let full = Slot {
        x0: MARGIN,
        y0: MARGIN,
        x1: CANVAS as i64 - MARGIN,
        y1: CANVAS as i64 - MARGIN,
    };
    let slots: Vec<Slot> = match rng.random_range(0..4) {
        0 => vec![full],
        1 => {
            let (a, b) = split(full, rng.random_bool(0.5), rng.random_range(0.35..0.65));
            vec![a, b]
        }
        2 => {
            let v = rng.random_bool(0.5);
            let (a, rest) = split(full, v, rng.random_range(0.3..0.45));
            let (b, c) = split(rest, !v, rng.random_range(0.4..0.6));
            vec![a, b, c]
        }
        _ => {
            let (top, bottom) = split(full, false, 0.5);
            let (a, b) = split(top, true, 0.5);
            let (c, d) = split(bottom, true, 0.5);
            vec![a, b, c, d]
        }
    };
    for slot in slots {
        let prim = *PRIMITIVES.choose(rng).unwrap();
        draw(&mut r, rng, prim, slot);
    }
    r
}

/// The polygon tuples the matcher compares, sorted.
fn signature(f: &ImageFeature) -> Vec<String> {
    let mut v: Vec<String> = f
        .polys
        .iter()
        .map(|p| {
            format!(
                "{:?}|{:?}|{}|{}|{}|{}|{}|{}",
                p.kind, p.en, p.nesting, p.vdc, p.hdc, p.er, p.poh, p.concavity
            )
        })
        .collect();
    v.sort();
    v
}

/// Whether sorted `a` is a sub-multiset of sorted `b`.
fn is_submultiset(a: &[String], b: &[String]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// `n` logos named `logo_0000`, `logo_0001`, ... No logo's polygon tuples
/// form a sub-multiset of an earlier logo's. An unmodified logo therefore
/// ranks itself first: any other logo that also matches all of its
/// polygons exactly has a larger id and loses the final tie.
pub fn generate_corpus(n: usize, seed: u64, grid: Grid) -> Result<Vec<(String, BinaryRaster)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigs: Vec<Vec<String>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    let budget = 50 * n + 100;
    for _ in 0..budget {
        if out.len() == n {
            break;
        }
        let logo = generate_logo(&mut rng);
        let id = format!("logo_{:04}", out.len());
        let sig = signature(&extract_features(&id, &logo, grid)?);
        let clash = sig.is_empty() || sigs.iter().any(|s| is_submultiset(&sig, s));
        if !clash {
            sigs.push(sig);
            out.push((id, logo));
        }
    }
    if out.len() < n {
        return Err(Error::Eval(format!(
            "only {} distinguishable logos after {budget} attempts, {n} requested",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = generate_corpus(5, 7, Grid::default()).unwrap();
        let b = generate_corpus(5, 7, Grid::default()).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(5, 8, Grid::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn margins_stay_white() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let r = generate_logo(&mut rng);
            assert!(r.black_count() > 0);
            for i in 0..CANVAS {
                for j in 0..MARGIN as u32 {
                    assert!(!r.get(i, j) && !r.get(j, i));
                    assert!(!r.get(i, CANVAS - 1 - j) && !r.get(CANVAS - 1 - j, i));
                }
            }
        }
    }

    #[test]
    fn no_logo_is_covered_by_an_earlier_one() {
        let corpus = generate_corpus(40, 3, Grid::default()).unwrap();
        let sigs: Vec<_> = corpus
            .iter()
            .map(|(id, r)| signature(&extract_features(id, r, Grid::default()).unwrap()))
            .collect();
        for (i, a) in sigs.iter().enumerate() {
            for b in &sigs[..i] {
                assert!(!is_submultiset(a, b));
            }
        }
    }

    #[test]
    fn submultiset() {
        let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert!(is_submultiset(&v(&["a", "b"]), &v(&["a", "a", "b"])));
        assert!(!is_submultiset(&v(&["a", "a"]), &v(&["a", "b"])));
        assert!(is_submultiset(&v(&[]), &v(&["a"])));
    }
}
