//! Synthetic degradations used to build query sets: rotation, affine
//! warps, salt-and-pepper noise, erosion and dilation.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BinaryRaster;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegradeKind {
    /// Counter-clockwise (as displayed) rotation about the frame centre, in degrees.
    Rotate {
        angle: f64,
    },
    /// Row-major `[a, b, tx, c, d, ty]`; maps a centred source point `p` to
    /// `[[a, b], [c, d]] p + (tx, ty)`.
    Affine {
        matrix: [f64; 6],
    },
    /// Flips exactly `round(density * width * height)` distinct pixels.
    SaltPepper {
        density: f64,
    },
    Erode {
        radius: u32,
    },
    Dilate {
        radius: u32,
    },
}

impl DegradeKind {
    /// Short name used in file names and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            DegradeKind::Rotate { .. } => "rotate",
            DegradeKind::Affine { .. } => "affine",
            DegradeKind::SaltPepper { .. } => "salt_pepper",
            DegradeKind::Erode { .. } => "erode",
            DegradeKind::Dilate { .. } => "dilate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradeSpec {
    pub kind: DegradeKind,
    pub seed: u64,
}

impl DegradeSpec {
    pub fn new(kind: DegradeKind) -> Self {
        Self { kind, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            DegradeKind::Rotate { angle } if !angle.is_finite() => {
                Err(Error::InvalidDegrade(format!("rotation angle {angle}")))
            }
            DegradeKind::Affine { matrix } => {
                if matrix.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDegrade("non-finite affine coefficient".into()));
                }
                let det = matrix[0] * matrix[4] - matrix[1] * matrix[3];
                if det.abs() < 1e-12 {
                    return Err(Error::InvalidDegrade("singular affine matrix".into()));
                }
                Ok(())
            }
            DegradeKind::SaltPepper { density } if !(0.0..=1.0).contains(&density) => {
                Err(Error::InvalidDegrade(format!("density {density} outside [0, 1]")))
            }
            DegradeKind::Erode { radius } | DegradeKind::Dilate { radius } if radius == 0 => {
                Err(Error::InvalidDegrade("radius must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Applies `spec` to `input`. The output always has the input's dimensions.
pub fn degrade(input: &BinaryRaster, spec: &DegradeSpec) -> Result<BinaryRaster> {
    spec.validate()?;
    Ok(match spec.kind {
        DegradeKind::Rotate { angle } => {
            let (s, c) = angle.to_radians().sin_cos();
            // y grows downwards, so a visual counter-clockwise turn uses +sin on x.
            warp(input, [c, s, 0.0, -s, c, 0.0])
        }
        DegradeKind::Affine { matrix } => warp(input, matrix),
        DegradeKind::SaltPepper { density } => salt_pepper(input, density, spec.seed),
        DegradeKind::Erode { radius } => erode(input, radius),
        DegradeKind::Dilate { radius } => dilate(input, radius),
    })
}

/// Inverse-maps every output pixel through the affine map and samples the
/// nearest source pixel; anything outside the source frame is white.
fn warp(input: &BinaryRaster, m: [f64; 6]) -> BinaryRaster {
    let (w, h) = (input.width(), input.height());
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let det = m[0] * m[4] - m[1] * m[3];
    let inv = [m[4] / det, -m[1] / det, -m[3] / det, m[0] / det];
    BinaryRaster::from_fn(w, h, |x, y| {
        let dx = x as f64 - cx - m[2];
        let dy = y as f64 - cy - m[5];
        let sx = inv[0] * dx + inv[1] * dy + cx;
        let sy = inv[2] * dx + inv[3] * dy + cy;
        input.get_or_white(sx.round() as i64, sy.round() as i64)
    })
    .expect("dimensions come from a valid raster")
}

fn salt_pepper(input: &BinaryRaster, density: f64, seed: u64) -> BinaryRaster {
    let n = input.pixel_count() as usize;
    let flips = (density * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = input.bits().to_vec();
    for i in index::sample(&mut rng, n, flips.min(n)) {
        bits[i] = !bits[i];
    }
    BinaryRaster::from_bits(input.width(), input.height(), bits).unwrap()
}

/// Separable square-window filter; `any = true` dilates, `false` erodes.
/// Pixels outside the frame count as white.
fn square_filter(input: &BinaryRaster, radius: u32, any: bool) -> BinaryRaster {
    let (w, h) = (input.width() as i64, input.height() as i64);
    let r = radius as i64;
    let hit = |v: bool| if any { v } else { !v };
    let pass = |src: &BinaryRaster, horizontal: bool| {
        BinaryRaster::from_fn(w as u32, h as u32, |x, y| {
            let (x, y) = (x as i64, y as i64);
            let found = (-r..=r).any(|d| {
                let v = if horizontal {
                    src.get_or_white(x + d, y)
                } else {
                    src.get_or_white(x, y + d)
                };
                hit(v)
            });
            if any {
                found
            } else {
                !found
            }
        })
        .unwrap()
    };
    let tmp = pass(input, true);
    pass(&tmp, false)
}

pub(crate) fn erode(input: &BinaryRaster, radius: u32) -> BinaryRaster {
    square_filter(input, radius, false)
}

pub(crate) fn dilate(input: &BinaryRaster, radius: u32) -> BinaryRaster {
    square_filter(input, radius, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(w: u32, h: u32, x0: u32, y0: u32, side: u32) -> BinaryRaster {
        BinaryRaster::from_fn(w, h, |x, y| {
            (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y)
        })
        .unwrap()
    }

    fn blobs() -> BinaryRaster {
        BinaryRaster::from_fn(40, 30, |x, y| {
            let (dx, dy) = (x as i32 - 14, y as i32 - 12);
            dx * dx + dy * dy < 70 || (x > 28 && y % 7 < 3)
        })
        .unwrap()
    }

    #[test]
    fn rotate_zero_is_identity() {
        let r = blobs();
        let out = degrade(&r, &DegradeSpec::new(DegradeKind::Rotate { angle: 0.0 })).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn rotate_180_matches_exact_flip() {
        let r = blobs();
        let out = degrade(&r, &DegradeSpec::new(DegradeKind::Rotate { angle: 180.0 })).unwrap();
        assert_eq!(out, r.rotate_quarter_turns(2));
    }

    #[test]
    fn rotate_90_on_square_frame_is_exact() {
        let r = BinaryRaster::from_fn(24, 24, |x, y| x < 10 && y < 4).unwrap();
        let out = degrade(&r, &DegradeSpec::new(DegradeKind::Rotate { angle: 90.0 })).unwrap();
        assert_eq!(out, r.rotate_quarter_turns(1));
    }

    #[test]
    fn salt_pepper_zero_density_is_identity() {
        let r = blobs();
        let spec = DegradeSpec::new(DegradeKind::SaltPepper { density: 0.0 }).with_seed(9);
        assert_eq!(degrade(&r, &spec).unwrap(), r);
    }

    #[test]
    fn salt_pepper_flip_count_and_determinism() {
        let r = blobs();
        let spec = DegradeSpec::new(DegradeKind::SaltPepper { density: 0.01 }).with_seed(42);
        let a = degrade(&r, &spec).unwrap();
        let b = degrade(&r, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(r.hamming(&a), (0.01f64 * 1200.0).round() as u64);
        let c = degrade(&r, &spec.with_seed(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn opening_restores_a_square() {
        let r = square(48, 48, 14, 10, 20);
        let e = degrade(&r, &DegradeSpec::new(DegradeKind::Erode { radius: 2 })).unwrap();
        assert_eq!(e.black_count(), 16 * 16);
        let o = degrade(&e, &DegradeSpec::new(DegradeKind::Dilate { radius: 2 })).unwrap();
        assert_eq!(o, r);
    }

    #[test]
    fn morphology_is_monotone() {
        let r = blobs();
        let d = dilate(&r, 1);
        let e = erode(&r, 1);
        assert!(r.is_subset_of(&d));
        assert!(e.is_subset_of(&r));
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            DegradeKind::SaltPepper { density: 1.5 },
            DegradeKind::SaltPepper { density: -0.1 },
            DegradeKind::Erode { radius: 0 },
            DegradeKind::Dilate { radius: 0 },
            DegradeKind::Affine {
                matrix: [1.0, 2.0, 0.0, 2.0, 4.0, 0.0],
            },
        ];
        for kind in bad {
            assert!(matches!(
                degrade(&blobs(), &DegradeSpec::new(kind)),
                Err(Error::InvalidDegrade(_))
            ));
        }
    }

    #[test]
    fn identity_affine() {
        let r = blobs();
        let spec = DegradeSpec::new(DegradeKind::Affine {
            matrix: [1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        });
        assert_eq!(degrade(&r, &spec).unwrap(), r);
    }
}
