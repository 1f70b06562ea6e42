//! Raster coloring and image output.

use std::path::Path;

use juliasym::dynamics::Raster;
use juliasym::mcmullen::Overlay;

// Smooth iteration count for an escaped cell; larger means slower
// escape (closer to the Julia set).
fn smooth_iterations(iterations: u32, final_modulus: f64, escape_radius: f64, degree: usize) -> f64 {
    let base = (degree.max(2)) as f64;
    let r = escape_radius.max(1.0 + 1e-9);
    let m = final_modulus.max(r * 1.000001);
    let nu = (m.ln() / r.ln()).ln() / base.ln();
    (iterations as f64 + 1.0 - nu).max(0.0)
}

fn escape_shade(t: f64) -> u8 {
    let t = t.clamp(0.0, 1.0);
    255 - (t.sqrt() * 190.0) as u8
}

/// Julia-set coloring: escaped pixels shade light by escape speed;
/// black marks the visible Julia set, approached from both sides:
/// bounded pixels touching an escaped one, and escaped pixels in the
/// top percentile of escape counts (totally disconnected Julia sets
/// have no bounded pixels at any finite resolution, so the slow-escape
/// band is the only trace they leave).
pub fn julia_rgb(raster: &Raster, degree: usize) -> Vec<u8> {
    // Escape counts grow like log(1/distance to J), so a fixed offset
    // below the frame maximum is a band of roughly constant width in
    // pixels, at any resolution.
    let max_count = raster
        .cells
        .iter()
        .filter(|c| c.escaped)
        .map(|c| c.iterations)
        .max()
        .unwrap_or(0);
    let slow_threshold = if max_count >= 8 {
        (max_count - 3).max(6)
    } else {
        // Flat far-field frame: no part of the Julia set is in view.
        u32::MAX
    };
    let mut rgb = vec![0u8; raster.width * raster.height * 3];
    for y in 0..raster.height {
        for x in 0..raster.width {
            let cell = raster.cell(x, y);
            let px = 3 * (y * raster.width + x);
            if cell.escaped {
                if cell.iterations >= slow_threshold {
                    continue; // black
                }
                let s = smooth_iterations(
                    cell.iterations,
                    cell.final_modulus,
                    raster.escape_radius,
                    degree,
                );
                let shade = escape_shade(s / raster.max_iter.max(1) as f64);
                rgb[px] = shade;
                rgb[px + 1] = shade;
                rgb[px + 2] = shade;
            } else if raster.has_escaped_neighbor(x, y) {
                // Black: the boundary of the escaping set.
            } else {
                rgb[px] = 120;
                rgb[px + 1] = 120;
                rgb[px + 2] = 120;
            }
        }
    }
    rgb
}

/// Parameter-plane coloring: bounded critical orbits are black, escaped
/// ones shade by speed; the lambda = 0 marker and (for m = d) the
/// |lambda| = 1 regime boundary are burned in.
pub fn param_rgb(raster: &Raster, overlay: &Overlay) -> Vec<u8> {
    let mut rgb = vec![0u8; raster.width * raster.height * 3];
    let pw = raster.window.width / raster.width as f64;
    let ph = raster.window.height / raster.height as f64;
    let pixel_diag = (pw * pw + ph * ph).sqrt();
    let dot_radius = (2.0 * pixel_diag).max(0.01 * raster.window.width);
    for y in 0..raster.height {
        for x in 0..raster.width {
            let cell = raster.cell(x, y);
            let px = 3 * (y * raster.width + x);
            if cell.escaped {
                // Escape radius varies per pixel in the parameter plane;
                // a plain iteration ramp is stable enough here.
                let t = cell.iterations as f64 / raster.max_iter.max(1) as f64;
                let shade = escape_shade(t);
                rgb[px] = shade;
                rgb[px + 1] = shade;
                rgb[px + 2] = shade;
            }
            let lambda = raster
                .window
                .pixel_center(x, y, raster.width, raster.height);
            if overlay.unit_circle && (lambda.norm() - 1.0).abs() <= 0.75 * pixel_diag {
                rgb[px] = 40;
                rgb[px + 1] = 80;
                rgb[px + 2] = 255;
            }
            if lambda.norm() <= dot_radius {
                rgb[px] = 220;
                rgb[px + 1] = 40;
                rgb[px + 2] = 40;
            }
        }
    }
    rgb
}

pub fn save_png(path: &Path, width: usize, height: usize, rgb: &[u8]) -> std::io::Result<()> {
    let img = image::RgbImage::from_raw(width as u32, height as u32, rgb.to_vec())
        .expect("buffer matches dimensions");
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| std::io::Error::other(e.to_string()))
}
