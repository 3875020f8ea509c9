//! Netpbm bitmap (P1/P4) and graymap (P2/P5) codec.

use super::BinaryRaster;
use crate::error::{Error, Result};

fn malformed(reason: impl Into<String>) -> Error {
    Error::MalformedImage {
        path: Default::default(),
        reason: reason.into(),
    }
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            let c = self.data[self.pos];
            if c == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(malformed("expected a decimal number in header"));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| malformed("header number out of range"))
    }

    /// P1 allows bits without separators, so read a single digit.
    fn bit(&mut self) -> Result<bool> {
        self.skip_space_and_comments();
        match self.data.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(malformed("truncated or invalid P1 pixel data")),
        }
    }
}

pub(super) fn decode(bytes: &[u8], threshold: u8) -> Result<BinaryRaster> {
    let kind = bytes[1];
    let mut hdr = Header { data: bytes, pos: 2 };
    let width = hdr.number()?;
    let height = hdr.number()?;
    if width == 0 || height == 0 {
        return Err(Error::EmptyRaster);
    }
    let n = width as usize * height as usize;
    match kind {
        b'1' => {
            let bits = (0..n).map(|_| hdr.bit()).collect::<Result<Vec<_>>>()?;
            BinaryRaster::from_bits(width, height, bits)
        }
        b'4' => {
            // exactly one whitespace byte separates header and raster
            let start = hdr.pos + 1;
            let row_bytes = (width as usize).div_ceil(8);
            let body = bytes
                .get(start..start + row_bytes * height as usize)
                .ok_or_else(|| malformed("truncated P4 raster"))?;
            let mut bits = Vec::with_capacity(n);
            for row in body.chunks_exact(row_bytes) {
                for x in 0..width as usize {
                    bits.push(row[x / 8] & (0x80 >> (x % 8)) != 0);
                }
            }
            BinaryRaster::from_bits(width, height, bits)
        }
        b'2' | b'5' => {
            let maxval = hdr.number()?;
            if maxval == 0 || maxval > 65535 {
                return Err(malformed(format!("invalid maxval {maxval}")));
            }
            let samples: Vec<u32> = if kind == b'2' {
                (0..n).map(|_| hdr.number()).collect::<Result<_>>()?
            } else {
                let start = hdr.pos + 1;
                let wide = maxval > 255;
                let len = if wide { 2 * n } else { n };
                let body = bytes
                    .get(start..start + len)
                    .ok_or_else(|| malformed("truncated P5 raster"))?;
                if wide {
                    body.chunks_exact(2)
                        .map(|c| u32::from(c[0]) << 8 | u32::from(c[1]))
                        .collect()
                } else {
                    body.iter().map(|&b| u32::from(b)).collect()
                }
            };
            let gray: Vec<u8> = samples
                .into_iter()
                .map(|v| (v.min(maxval) * 255 / maxval) as u8)
                .collect();
            BinaryRaster::from_gray(width, height, &gray, threshold)
        }
        _ => unreachable!("caller checks the magic"),
    }
}

pub(super) fn encode_p4(r: &BinaryRaster) -> Vec<u8> {
    let (w, h) = (r.width() as usize, r.height() as usize);
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    for y in 0..h {
        let mut row = vec![0u8; row_bytes];
        for x in 0..w {
            if r.get(x as u32, y as u32) {
                row[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

pub(super) fn encode_p1(r: &BinaryRaster) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", r.width(), r.height());
    for y in 0..r.height() {
        let line: Vec<&str> = (0..r.width()).map(|x| if r.get(x, y) { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

pub(super) fn encode_p5(r: &BinaryRaster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", r.width(), r.height()).into_bytes();
    out.extend(r.bits().iter().map(|&b| if b { 0u8 } else { 255 }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_all_zero_is_white() {
        let r = BinaryRaster::decode(b"P1\n# c\n3 2\n0 0 0\n000\n", 0).unwrap();
        assert_eq!(r.black_count(), 0);
        assert_eq!(r.white_count(), 6);
    }

    #[test]
    fn p1_threshold_ignored() {
        let r = BinaryRaster::decode(b"P1 2 1 1 0", 0).unwrap();
        assert!(r.get(0, 0));
        assert!(!r.get(1, 0));
    }

    #[test]
    fn p2_constant_zero_is_black_at_128() {
        let r = BinaryRaster::decode(b"P2\n2 2\n255\n0 0\n0 0\n", 128).unwrap();
        assert_eq!(r.black_count(), 4);
        // threshold boundary: value equal to threshold stays white
        let r = BinaryRaster::decode(b"P2\n2 1\n255\n127 128\n", 128).unwrap();
        assert!(r.get(0, 0));
        assert!(!r.get(1, 0));
    }

    #[test]
    fn p5_sixteen_bit() {
        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0x00, 0x10, 0xff, 0xff]);
        let r = BinaryRaster::decode(&bytes, 128).unwrap();
        assert!(r.get(0, 0));
        assert!(!r.get(1, 0));
    }

    #[test]
    fn p4_round_trip_odd_width() {
        let r = BinaryRaster::from_fn(13, 5, |x, y| (x + 2 * y) % 3 == 0).unwrap();
        let bytes = encode_p4(&r);
        assert!(bytes.starts_with(b"P4\n13 5\n"));
        assert_eq!(bytes.len(), 8 + 2 * 5);
        assert_eq!(BinaryRaster::decode(&bytes, 128).unwrap(), r);
        assert_eq!(BinaryRaster::decode(&encode_p1(&r), 128).unwrap(), r);
        assert_eq!(BinaryRaster::decode(&encode_p5(&r), 128).unwrap(), r);
    }

    #[test]
    fn zero_dimension_is_an_error() {
        assert!(matches!(
            BinaryRaster::decode(b"P4\n0 5\n", 128),
            Err(Error::EmptyRaster)
        ));
    }

    #[test]
    fn truncated_p4() {
        assert!(matches!(
            BinaryRaster::decode(b"P4\n16 2\n\x00", 128),
            Err(Error::MalformedImage { .. })
        ));
    }
}
