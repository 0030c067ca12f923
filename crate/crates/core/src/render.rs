//! Depth-limited rendering of limit-set approximations to raster images.
//!
//! The disc tree is the faithful representation: both families map discs to
//! discs exactly, so leaves are painted as analytic circles on a 2x2
//! supersampled grid over `[-1, 1]^2` and downsampled to 8-bit grayscale
//! coverage. Traversal order is fixed (digit index ascending, rotation index
//! ascending) and painting is order-independent, so output bytes are
//! deterministic for fixed parameters.

use crate::digits::SystemSpec;
use crate::error::{Error, Result};
use crate::geometry::{letter_alpha, Disc, MobiusMatrix};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub depth: u32,
    pub min_radius: f64,
    /// Digit indices above this are pruned.
    pub digit_cutoff: u32,
    pub width: u32,
    pub height: u32,
    /// Shade leaves by their depth instead of solid black.
    pub shade_by_depth: bool,
}

impl RenderOptions {
    pub fn figure_defaults(width: u32, height: u32) -> RenderOptions {
        RenderOptions {
            depth: 50,
            // Half a pixel in limit-set coordinates.
            min_radius: 1.0 / width as f64,
            digit_cutoff: 200,
            width,
            height,
            shade_by_depth: false,
        }
    }
}

/// One painted leaf of the disc tree.
#[derive(Debug, Clone, Serialize)]
pub struct LeafDisc {
    /// Letters as `(digit index, rotation index)`, outermost first.
    pub word: Vec<(u32, u32)>,
    pub disc: Disc,
    pub depth: u32,
}

/// Depth-first expansion of the disc tree.
///
/// A branch stops (and its node is painted) when the word reaches `depth` or
/// its disc falls below `min_radius`; digit indices above the cutoff are
/// dropped entirely.
pub fn leaf_discs(spec: &SystemSpec, opts: &RenderOptions) -> Result<Vec<LeafDisc>> {
    spec.require_valid()?;
    if opts.depth == 0 {
        return Err(Error::BadParameter("render depth must be at least 1".into()));
    }
    let mut letters = Vec::new();
    for n in 1..=opts.digit_cutoff {
        for j in 0..spec.rotations {
            letters.push(((n, j), letter_alpha(spec, n, j)?));
        }
    }
    let mut leaves = Vec::new();
    let mut word = Vec::new();
    descend(
        spec,
        opts,
        &letters,
        &MobiusMatrix::IDENTITY,
        1,
        &mut word,
        &mut leaves,
    )?;
    Ok(leaves)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    spec: &SystemSpec,
    opts: &RenderOptions,
    letters: &[((u32, u32), num_complex::Complex64)],
    prefix: &MobiusMatrix,
    level: u32,
    word: &mut Vec<(u32, u32)>,
    leaves: &mut Vec<LeafDisc>,
) -> Result<()> {
    for (id, alpha) in letters {
        let m = prefix.compose(&MobiusMatrix::generator(spec.family, *alpha));
        let disc = m.image_disc(&Disc::UNIT)?;
        word.push(*id);
        if level >= opts.depth || disc.radius < opts.min_radius {
            leaves.push(LeafDisc {
                word: word.clone(),
                disc,
                depth: level,
            });
        } else {
            descend(spec, opts, letters, &m, level + 1, word, leaves)?;
        }
        word.pop();
    }
    Ok(())
}

/// Paint leaves onto an RGB buffer (row-major, 3 bytes per pixel).
pub fn rasterize(leaves: &[LeafDisc], opts: &RenderOptions) -> Vec<u8> {
    let (w, h) = (opts.width as usize, opts.height as usize);
    assert!(w > 0 && h > 0, "zero pixel area");
    let (sw, sh) = (2 * w, 2 * h);
    // Per-subsample shade: 255 = empty; leaves keep the darkest value.
    let mut sub = vec![255u8; sw * sh];
    let max_depth = leaves.iter().map(|l| l.depth).max().unwrap_or(1);

    for leaf in leaves {
        let shade = if opts.shade_by_depth {
            (200 - (160 * leaf.depth.min(max_depth)) / max_depth.max(1)) as u8
        } else {
            0u8
        };
        let (cx, cy, r) = (leaf.disc.center_re, leaf.disc.center_im, leaf.disc.radius);
        // Subsample index ranges covering the disc's bounding box.
        let x0 = ((cx - r + 1.0) / 2.0 * sw as f64 - 0.5).floor().max(0.0) as usize;
        let x1 = ((cx + r + 1.0) / 2.0 * sw as f64 + 0.5).ceil().min(sw as f64) as usize;
        let y0 = ((1.0 - (cy + r)) / 2.0 * sh as f64 - 0.5).floor().max(0.0) as usize;
        let y1 = ((1.0 - (cy - r)) / 2.0 * sh as f64 + 0.5).ceil().min(sh as f64) as usize;
        for iy in y0..y1 {
            let y = 1.0 - (2.0 * iy as f64 + 1.0) / sh as f64;
            let dy = y - cy;
            for ix in x0..x1 {
                let x = (2.0 * ix as f64 + 1.0) / sw as f64 - 1.0;
                let dx = x - cx;
                if dx * dx + dy * dy <= r * r {
                    let cell = &mut sub[iy * sw + ix];
                    *cell = (*cell).min(shade);
                }
            }
        }
    }

    // 4x supersample average into the pixel grid.
    let mut rgb = vec![0u8; w * h * 3];
    for py in 0..h {
        for px in 0..w {
            let mut acc = 0u32;
            for dy in 0..2 {
                for dx in 0..2 {
                    acc += sub[(2 * py + dy) * sw + 2 * px + dx] as u32;
                }
            }
            let v = (acc / 4) as u8;
            let at = (py * w + px) * 3;
            rgb[at] = v;
            rgb[at + 1] = v;
            rgb[at + 2] = v;
        }
    }
    rgb
}

/// Binary PPM (P6, 8-bit RGB, row-major, no comments).
pub fn write_ppm(path: &Path, rgb: &[u8], width: u32, height: u32) -> Result<()> {
    assert_eq!(rgb.len(), (width * height * 3) as usize);
    let mut f = std::fs::File::create(path)?;
    write!(f, "P6\n{width} {height}\n255\n")?;
    f.write_all(rgb)?;
    Ok(())
}

/// PNG from the same pixel buffer.
pub fn write_png(path: &Path, rgb: &[u8], width: u32, height: u32) -> Result<()> {
    let img = image::RgbImage::from_raw(width, height, rgb.to_vec())
        .ok_or_else(|| Error::Image("buffer size mismatch".into()))?;
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::Image(e.to_string()))
}

/// Line-delimited leaf records `(word, center re/im, radius)` in traversal
/// order.
pub fn leaf_records(leaves: &[LeafDisc]) -> String {
    let mut out = String::new();
    for leaf in leaves {
        let words: Vec<String> = leaf
            .word
            .iter()
            .map(|(n, j)| format!("[{n},{j}]"))
            .collect();
        out.push_str(&format!(
            "{{\"word\":[{}],\"re\":{},\"im\":{},\"radius\":{}}}\n",
            words.join(","),
            leaf.disc.center_re,
            leaf.disc.center_im,
            leaf.disc.radius
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderStats {
    pub leaves: usize,
    pub width: u32,
    pub height: u32,
}

/// Render to a file; the extension picks PPM (default) or PNG.
pub fn render_to_file(spec: &SystemSpec, opts: &RenderOptions, path: &Path) -> Result<RenderStats> {
    let leaves = leaf_discs(spec, opts)?;
    let rgb = rasterize(&leaves, opts);
    match path.extension().and_then(|e| e.to_str()) {
        Some("png") => write_png(path, &rgb, opts.width, opts.height)?,
        _ => write_ppm(path, &rgb, opts.width, opts.height)?,
    }
    Ok(RenderStats {
        leaves: leaves.len(),
        width: opts.width,
        height: opts.height,
    })
}
