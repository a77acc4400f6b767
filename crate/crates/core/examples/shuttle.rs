//! Writes the 256x256 test image used by the bundled demo command file.
//!
//! ```text
//! cargo run -p regtree --example shuttle -- crates/core/data/shu256.pbm
//! ```

use regtree::script::images::Pbm;

const SIDE: usize = 256;

/// Point inside an ellipse centred at (cx, cy), semi-axes (a, b), turned by
/// `angle` degrees.
fn ellipse(x: f64, y: f64, cx: f64, cy: f64, a: f64, b: f64, angle: f64) -> bool {
    let (s, c) = angle.to_radians().sin_cos();
    let (dx, dy) = (x - cx, y - cy);
    let (u, v) = (c * dx + s * dy, -s * dx + c * dy);
    (u / a).powi(2) + (v / b).powi(2) <= 1.0
}

fn rectangle(x: f64, y: f64, cx: f64, cy: f64, w: f64, h: f64, angle: f64) -> bool {
    let (s, c) = angle.to_radians().sin_cos();
    let (dx, dy) = (x - cx, y - cy);
    (c * dx + s * dy).abs() <= w / 2.0 && (-s * dx + c * dy).abs() <= h / 2.0
}

fn triangle(x: f64, y: f64, p: [(f64, f64); 3]) -> bool {
    let side = |a: (f64, f64), b: (f64, f64)| (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0);
    let d = [side(p[0], p[1]), side(p[1], p[2]), side(p[2], p[0])];
    d.iter().all(|&v| v >= 0.0) || d.iter().all(|&v| v <= 0.0)
}

fn inside(x: f64, y: f64) -> bool {
    // orbiter: fuselage, delta wing and fin
    let orbiter = ellipse(x, y, 128.0, 112.0, 17.0, 72.0, 0.0)
        || triangle(x, y, [(128.0, 100.0), (74.0, 178.0), (182.0, 178.0)])
        || rectangle(x, y, 128.0, 186.0, 6.0, 20.0, 0.0);
    // a tilted panel, an ellipse, an L bracket, a wedge and a ring
    let panel = rectangle(x, y, 42.0, 40.0, 44.0, 12.0, 30.0);
    let pod = ellipse(x, y, 214.0, 44.0, 26.0, 10.0, -20.0);
    let bracket = rectangle(x, y, 30.0, 222.0, 12.0, 40.0, 0.0) || rectangle(x, y, 48.0, 236.0, 36.0, 12.0, 0.0);
    let wedge = triangle(x, y, [(196.0, 200.0), (240.0, 214.0), (204.0, 244.0)]);
    let ring = ellipse(x, y, 32.0, 128.0, 18.0, 18.0, 0.0) && !ellipse(x, y, 32.0, 128.0, 9.0, 9.0, 0.0);
    orbiter || panel || pod || bracket || wedge || ring
}

fn main() -> std::io::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "shu256.pbm".to_string());
    let pixels = (0..SIDE * SIDE).map(|i| inside((i % SIDE) as f64 + 0.5, (i / SIDE) as f64 + 0.5)).collect();
    let img = Pbm { width: SIDE, height: SIDE, pixels };
    std::fs::write(&path, img.to_p4())?;
    println!("wrote {path}");
    Ok(())
}
