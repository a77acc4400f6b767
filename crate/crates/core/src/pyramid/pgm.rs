//! Gray-level images (PGM) as pyramids over 2-space.
//!
//! Column `x` maps to axis 0 and row `y` (top row 0) to axis 1. Gray levels
//! become values `g / maxval`. The image is padded to the next power-of-two
//! square with white cells.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tree::{build_cells, rasterize_values, NodeRef, SpaceSpec, Store};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major gray levels.
    pub pixels: Vec<u16>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedImage(msg.into())
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
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
        self.skip_space();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("expected a number at byte {start}")))
    }
}

impl Pgm {
    /// Parses a P2 (ASCII) or P5 (binary) image.
    pub fn parse(data: &[u8]) -> Result<Pgm> {
        let binary = match data.get(..2) {
            Some(b"P2") => false,
            Some(b"P5") => true,
            _ => return Err(bad("missing P2/P5 magic")),
        };
        let mut h = Header { data, pos: 2 };
        let width = h.number()? as usize;
        let height = h.number()? as usize;
        let maxval = h.number()?;
        if width == 0 || height == 0 {
            return Err(bad("empty image"));
        }
        if maxval == 0 || maxval > 65535 {
            return Err(bad(format!("maxval {maxval} out of range")));
        }
        let n = width * height;
        let mut pixels = Vec::with_capacity(n);
        if binary {
            let start = h.pos + 1;
            let wide = maxval > 255;
            let bytes = if wide { 2 * n } else { n };
            let body = data.get(start..start + bytes).ok_or_else(|| bad("truncated pixel data"))?;
            if wide {
                pixels.extend(body.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])));
            } else {
                pixels.extend(body.iter().map(|&b| u16::from(b)));
            }
        } else {
            for _ in 0..n {
                pixels.push(h.number()? as u16);
            }
        }
        if let Some(&p) = pixels.iter().find(|&&p| u32::from(p) > maxval) {
            return Err(bad(format!("gray level {p} above maxval {maxval}")));
        }
        Ok(Pgm { width, height, maxval: maxval as u16, pixels })
    }

    /// Binary (P5) encoding.
    pub fn to_p5(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        if self.maxval > 255 {
            out.extend(self.pixels.iter().flat_map(|p| p.to_be_bytes()));
        } else {
            out.extend(self.pixels.iter().map(|&p| p as u8));
        }
        out
    }

    /// ASCII (P2) encoding.
    pub fn to_p2(&self) -> String {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Precision covering `n` cells per axis.
fn precision_for(n: usize) -> u32 {
    n.max(2).next_power_of_two().trailing_zeros()
}

/// Pyramid over 2-space holding the image's gray levels.
pub fn pyramid_from_pgm(store: &mut Store, img: &Pgm) -> Result<(NodeRef, SpaceSpec)> {
    let r = precision_for(img.width.max(img.height));
    let space = SpaceSpec::new(2, r)?;
    let scale = f64::from(img.maxval);
    let mut leaves = HashMap::new();
    for &g in &img.pixels {
        leaves.entry(g).or_insert_with(|| store.valued(f64::from(g) / scale));
    }
    let t = build_cells(store, &space, r, |c| {
        let (x, y) = (c[0] as usize, c[1] as usize);
        if x >= img.width || y >= img.height {
            NodeRef::WHITE
        } else {
            leaves[&img.pixels[y * img.width + x]]
        }
    })?;
    Ok((t, space))
}

/// Renders a pyramid at full precision into a `width` x `height` image.
/// Values are clamped to [0, 1] and rounded; white cells become 0 and plain
/// black cells `maxval`.
pub fn pyramid_to_pgm(
    store: &Store,
    pyramid: NodeRef,
    space: &SpaceSpec,
    width: usize,
    height: usize,
    maxval: u16,
) -> Result<Pgm> {
    if space.k() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: space.dim() });
    }
    if maxval == 0 {
        return Err(bad("maxval must be positive"));
    }
    let side = space.cells_per_axis() as usize;
    if width == 0 || height == 0 || width > side || height > side {
        return Err(bad(format!("{width}x{height} does not fit a {side}x{side} space")));
    }
    let g = rasterize_values(store, pyramid, space, space.r())?;
    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let v = match g.get(&[x as u32, y as u32]) {
                None => 0.0,
                Some(v) if v.is_nan() => 1.0,
                Some(v) => v.clamp(0.0, 1.0),
            };
            pixels.push((v * f64::from(maxval)).round() as u16);
        }
    }
    Ok(Pgm { width, height, maxval, pixels })
}
