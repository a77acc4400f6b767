//! Binary images (PBM) as trees over 2-space, and window snapshots.
//!
//! Pixel (column x, row y) is cell (x, y): row 0 is the top row and y grows
//! downward. Images are padded to the next power-of-two square.

use crate::error::{Error, Result};
use crate::pyramid::Pgm;
use crate::tree::{build_cells, rasterize, rasterize_values, NodeRef, SpaceSpec, Store};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pbm {
    pub width: usize,
    pub height: usize,
    /// Row-major, `true` for a set (black) pixel.
    pub pixels: Vec<bool>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedImage(msg.into())
}

fn skip_space(data: &[u8], pos: &mut usize) {
    while let Some(&c) = data.get(*pos) {
        if c == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
        } else if c.is_ascii_whitespace() {
            *pos += 1;
        } else {
            break;
        }
    }
}

fn header_number(data: &[u8], pos: &mut usize) -> Result<usize> {
    skip_space(data, pos);
    let start = *pos;
    while *pos < data.len() && data[*pos].is_ascii_digit() {
        *pos += 1;
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(format!("expected a number at byte {start}")))
}

impl Pbm {
    /// Parses P1 (ASCII) or P4 (packed) images. Any non-zero sample is set.
    pub fn parse(data: &[u8]) -> Result<Pbm> {
        let packed = match data.get(..2) {
            Some(b"P1") => false,
            Some(b"P4") => true,
            _ => return Err(bad("missing P1/P4 magic")),
        };
        let mut pos = 2;
        let width = header_number(data, &mut pos)?;
        let height = header_number(data, &mut pos)?;
        if width == 0 || height == 0 {
            return Err(bad("empty image"));
        }
        let mut pixels = Vec::with_capacity(width * height);
        if packed {
            let row_bytes = width.div_ceil(8);
            let start = pos + 1;
            let body = data.get(start..start + row_bytes * height).ok_or_else(|| bad("truncated raster"))?;
            for row in body.chunks(row_bytes) {
                pixels.extend((0..width).map(|x| row[x / 8] & (0x80 >> (x % 8)) != 0));
            }
        } else {
            while pixels.len() < width * height {
                skip_space(data, &mut pos);
                match data.get(pos) {
                    Some(b'0') => pixels.push(false),
                    Some(c) if c.is_ascii_digit() => pixels.push(true),
                    Some(_) => return Err(bad(format!("unexpected byte at {pos}"))),
                    None => return Err(bad("truncated raster")),
                }
                pos += 1;
            }
        }
        Ok(Pbm { width, height, pixels })
    }

    pub fn to_p4(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
        for row in self.pixels.chunks(self.width) {
            for byte in row.chunks(8) {
                out.push(byte.iter().enumerate().fold(0u8, |acc, (i, &b)| if b { acc | (0x80 >> i) } else { acc }));
            }
        }
        out
    }

    pub fn to_p1(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Tree of the set pixels, with k = 2 and the smallest r that fits.
pub fn tree_from_pbm(store: &mut Store, img: &Pbm) -> Result<(NodeRef, SpaceSpec)> {
    let side = img.width.max(img.height).next_power_of_two().max(2);
    let space = SpaceSpec::new(2, side.trailing_zeros())?;
    let tree = build_cells(store, &space, space.r(), |c| {
        let (x, y) = (c[0] as usize, c[1] as usize);
        if x < img.width && y < img.height && img.pixels[y * img.width + x] {
            NodeRef::BLACK
        } else {
            NodeRef::WHITE
        }
    })?;
    Ok((tree, space))
}

/// Full-resolution bitmap of a 2-space tree; every non-white cell is set.
pub fn tree_to_pbm(store: &Store, tree: NodeRef, space: &SpaceSpec) -> Result<Pbm> {
    if space.k() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: space.dim() });
    }
    let g = rasterize(store, tree, space, space.r())?;
    let side = g.side;
    let pixels = (0..side * side).map(|i| *g.get(&[(i % side) as u32, (i / side) as u32])).collect();
    Ok(Pbm { width: side, height: side, pixels })
}

/// Gray level of a displayed cell over a white background: plain black is
/// 0, integer colors 1..7 are darkening grays, values in `[0, 1)` a ramp.
fn shade(v: f64) -> u16 {
    if v.is_nan() {
        0
    } else if v >= 1.0 {
        ((8.0 - v.min(7.0)) * 24.0).round() as u16
    } else {
        (255.0 * (1.0 - v.max(0.0))).round() as u16
    }
}

/// Largest snapshot side, in cells per axis.
pub const MAX_SNAPSHOT_BITS: u32 = 11;

/// Overlay 2-space layers, later ones on top, at the finest layer
/// precision.
pub fn snapshot(store: &Store, layers: &[(NodeRef, SpaceSpec, u32)]) -> Result<Pgm> {
    let bits = layers.iter().map(|l| l.2).max().unwrap_or(1);
    if bits > MAX_SNAPSHOT_BITS {
        return Err(Error::GridTooLarge(2 * bits));
    }
    let side = 1usize << bits;
    let mut pixels = vec![255u16; side * side];
    for &(root, space, p) in layers {
        if space.k() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: space.dim() });
        }
        let g = rasterize_values(store, root, &space, p)?;
        let shift = bits - p;
        for (i, px) in pixels.iter_mut().enumerate() {
            let (x, y) = ((i % side) >> shift, (i / side) >> shift);
            if let Some(v) = g.get(&[x as u32, y as u32]) {
                *px = shade(*v);
            }
        }
    }
    Ok(Pgm { width: side, height: side, maxval: 255, pixels })
}
