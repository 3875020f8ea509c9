//! Binary rasters: loading, saving and synthetic degradation.

mod degrade;
mod pnm;

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::png::PngDecoder;
use image::{DynamicImage, ExtendedColorType, ImageDecoder};

use crate::error::{Error, Result};

pub use degrade::{degrade, DegradeKind, DegradeSpec};

/// Default gray level below which a pixel is black.
pub const DEFAULT_THRESHOLD: u8 = 128;

/// Row-major bitmap; `true` is black (object), `false` is white (background).
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryRaster {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BinaryRaster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryRaster")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("black", &self.black_count())
            .finish()
    }
}

impl BinaryRaster {
    /// All-white raster.
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRaster);
        }
        Ok(Self {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        })
    }

    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRaster);
        }
        assert_eq!(
            bits.len(),
            width as usize * height as usize,
            "bit buffer does not match dimensions"
        );
        Ok(Self { width, height, bits })
    }

    pub fn from_fn(width: u32, height: u32, f: impl Fn(u32, u32) -> bool) -> Result<Self> {
        let mut r = Self::new(width, height)?;
        for y in 0..height {
            for x in 0..width {
                r.bits[y as usize * width as usize + x as usize] = f(x, y);
            }
        }
        Ok(r)
    }

    /// Binarizes 8-bit gray samples: `< threshold` becomes black.
    pub fn from_gray(width: u32, height: u32, gray: &[u8], threshold: u8) -> Result<Self> {
        Self::from_bits(width, height, gray.iter().map(|&v| v < threshold).collect())
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    /// Like [`get`](Self::get) but white outside the frame.
    #[inline]
    pub fn get_or_white(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            false
        } else {
            self.get(x as u32, y as u32)
        }
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, black: bool) {
        let w = self.width as usize;
        self.bits[y as usize * w + x as usize] = black;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn pixel_count(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn black_count(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    pub fn white_count(&self) -> u64 {
        self.pixel_count() - self.black_count()
    }

    /// Fills the axis-aligned rectangle `[x0, x1) x [y0, y1)`, clipped to the frame.
    pub fn fill_rect(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, black: bool) {
        let (w, h) = (self.width as i64, self.height as i64);
        for y in y0.max(0)..y1.min(h) {
            for x in x0.max(0)..x1.min(w) {
                self.set(x as u32, y as u32, black);
            }
        }
    }

    /// Number of differing pixels. Panics on a dimension mismatch.
    pub fn hamming(&self, other: &BinaryRaster) -> u64 {
        assert_eq!((self.width, self.height), (other.width, other.height));
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count() as u64
    }

    /// True when every black pixel of `self` is black in `other`.
    pub fn is_subset_of(&self, other: &BinaryRaster) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Loads a PBM (P1/P4), PGM (P2/P5) or PNG file. Gray inputs are
    /// binarized with `threshold`; 1-bit inputs ignore it.
    pub fn load(path: impl AsRef<Path>, threshold: u8) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, threshold).map_err(|e| match e {
            Error::MalformedImage { reason, .. } => Error::MalformedImage {
                path: path.to_path_buf(),
                reason,
            },
            other => other,
        })
    }

    /// Decodes an in-memory image, sniffing the format from its magic bytes.
    pub fn decode(bytes: &[u8], threshold: u8) -> Result<Self> {
        if bytes.len() >= 2 && bytes[0] == b'P' && matches!(bytes[1], b'1' | b'2' | b'4' | b'5') {
            return pnm::decode(bytes, threshold);
        }
        if bytes.starts_with(b"\x89PNG") {
            return decode_png(bytes, threshold);
        }
        let magic: String = bytes.iter().take(4).map(|b| format!("{b:02x}")).collect();
        Err(Error::UnsupportedFormat(format!("magic bytes {magic}")))
    }

    /// Writes the raster; `.png` gives a 1-bit-valued gray PNG, `.pgm` a P5
    /// graymap, anything else a P4 bitmap.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        let bytes = match ext.as_deref() {
            Some("png") => self.encode_png()?,
            Some("pgm") => pnm::encode_p5(self),
            _ => pnm::encode_p4(self),
        };
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    pub fn encode_p4(&self) -> Vec<u8> {
        pnm::encode_p4(self)
    }

    pub fn encode_p1(&self) -> Vec<u8> {
        pnm::encode_p1(self)
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let gray: Vec<u8> = self.bits.iter().map(|&b| if b { 0 } else { 255 }).collect();
        let img = image::GrayImage::from_raw(self.width, self.height, gray).expect("buffer sized from dimensions");
        let mut out = Cursor::new(Vec::new());
        img.write_to(&mut out, image::ImageFormat::Png)
            .map_err(|e| Error::UnsupportedFormat(e.to_string()))?;
        Ok(out.into_inner())
    }

    /// Rotates by a multiple of 90 degrees counter-clockwise (as displayed).
    /// Exact, and swaps width and height for odd multiples.
    pub fn rotate_quarter_turns(&self, turns: u32) -> BinaryRaster {
        let (w, h) = (self.width, self.height);
        match turns % 4 {
            0 => self.clone(),
            1 => Self::from_fn(h, w, |x, y| self.get(w - 1 - y, x)).unwrap(),
            2 => Self::from_fn(w, h, |x, y| self.get(w - 1 - x, h - 1 - y)).unwrap(),
            _ => Self::from_fn(h, w, |x, y| self.get(y, h - 1 - x)).unwrap(),
        }
    }
}

fn decode_png(bytes: &[u8], threshold: u8) -> Result<BinaryRaster> {
    let malformed = |e: image::ImageError| Error::MalformedImage {
        path: Default::default(),
        reason: e.to_string(),
    };
    let decoder = PngDecoder::new(Cursor::new(bytes)).map_err(malformed)?;
    let one_bit = matches!(decoder.original_color_type(), ExtendedColorType::L1);
    let img = DynamicImage::from_decoder(decoder).map_err(malformed)?;
    let gray = img.to_luma8();
    let (w, h) = gray.dimensions();
    // A 1-bit PNG expands to 0/255, which any threshold in 1..=255 separates.
    let threshold = if one_bit { DEFAULT_THRESHOLD } else { threshold };
    BinaryRaster::from_gray(w, h, gray.as_raw(), threshold)
}
