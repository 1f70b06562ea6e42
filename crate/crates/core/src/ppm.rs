//! Binary PPM (P6) encoding.

use std::io::Write;

use crate::error::Result;

/// Writes an RGB buffer (row-major, 3 bytes per pixel) as binary PPM.
pub fn write_ppm<W: Write>(mut w: W, width: usize, height: usize, rgb: &[u8]) -> Result<()> {
    assert_eq!(rgb.len(), width * height * 3, "rgb buffer size mismatch");
    write!(w, "P6\n{width} {height}\n255\n")?;
    w.write_all(rgb)?;
    Ok(())
}
