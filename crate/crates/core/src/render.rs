//! Escape-time pictures of the Mandelbrot set with parameter points drawn on
//! top.

use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::par::Exec;
use crate::roots::{Kind, ParamPoint};

/// Result of iterating `z -> z^2 + c` from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Escape {
    /// first index `i` with `|z_i| > 2`
    At(u32),
    Bounded,
}

pub fn escape_time(c: Complex64, max_iter: u32) -> Escape {
    let mut z = Complex64::new(0.0, 0.0);
    for i in 1..=max_iter {
        z = z * z + c;
        if z.norm_sqr() > 4.0 {
            return Escape::At(i);
        }
    }
    Escape::Bounded
}

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    pub interior: Rgb,
    pub boundary: Rgb,
    /// exterior color for orbits that escape at once; later escapes darken
    /// toward `exterior_far`
    pub exterior_near: Rgb,
    pub exterior_far: Rgb,
    pub hyperbolic: Rgb,
    pub misiurewicz: Rgb,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            interior: [160, 160, 160],
            boundary: [0, 0, 0],
            exterior_near: [255, 255, 255],
            exterior_far: [120, 140, 200],
            hyperbolic: [0, 170, 0],
            misiurewicz: [220, 0, 0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub center: Complex64,
    /// span of the real axis across the image
    pub width: f64,
    pub pixels: (u32, u32),
    pub max_iter: u32,
    pub overlay: Vec<ParamPoint>,
    pub palette: Palette,
    /// overlay disk radius in pixels
    pub point_radius: u32,
}

impl PlotSpec {
    pub fn new(center: Complex64, width: f64, pixels: (u32, u32), max_iter: u32) -> Self {
        PlotSpec { center, width, pixels, max_iter, overlay: Vec::new(), palette: Palette::default(), point_radius: 2 }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if self.pixels.0 == 0 || self.pixels.1 == 0 {
            return Err(RenderError::InvalidSpec("pixel dimensions must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(RenderError::InvalidSpec("max_iter must be at least 1".into()));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(RenderError::InvalidSpec("width must be positive".into()));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(RenderError::InvalidSpec("center must be finite".into()));
        }
        Ok(())
    }

    fn pixel_size(&self) -> f64 {
        self.width / f64::from(self.pixels.0)
    }

    /// Parameter at the center of pixel `(x, y)`; row 0 is the top.
    pub fn pixel_to_c(&self, x: u32, y: u32) -> Complex64 {
        let s = self.pixel_size();
        let (w, h) = (f64::from(self.pixels.0), f64::from(self.pixels.1));
        Complex64::new(
            self.center.re + (f64::from(x) + 0.5 - w / 2.0) * s,
            self.center.im - (f64::from(y) + 0.5 - h / 2.0) * s,
        )
    }

    /// Pixel containing `c`, or `None` outside the viewport.
    pub fn c_to_pixel(&self, c: Complex64) -> Option<(u32, u32)> {
        let s = self.pixel_size();
        let (w, h) = (f64::from(self.pixels.0), f64::from(self.pixels.1));
        let x = ((c.re - self.center.re) / s + w / 2.0).floor();
        let y = ((self.center.im - c.im) / s + h / 2.0).floor();
        if x >= 0.0 && x < w && y >= 0.0 && y < h {
            Some((x as u32, y as u32))
        } else {
            None
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid plot spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Packed 8-bit RGB, rows top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub rgb: Vec<u8>,
}

impl Image {
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    fn set(&mut self, x: u32, y: u32, c: Rgb) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.rgb[i..i + 3].copy_from_slice(&c);
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<(), RenderError> {
        let mut f = io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(&self.to_ppm())?;
        f.flush()?;
        Ok(())
    }
}

fn ramp(p: &Palette, iter: u32, max_iter: u32) -> Rgb {
    // fraction on a log scale, in integer steps of 1/256
    let t = (f64::from(iter).ln_1p() / f64::from(max_iter).ln_1p() * 256.0) as u32;
    let t = t.min(256);
    let mut out = [0u8; 3];
    for k in 0..3 {
        let a = u32::from(p.exterior_near[k]);
        let b = u32::from(p.exterior_far[k]);
        out[k] = ((a * (256 - t) + b * t) / 256) as u8;
    }
    out
}

/// Renders the escape-time background and the overlay points. Bounded
/// pixels with an escaping 4-neighbor form the boundary.
pub fn render(spec: &PlotSpec) -> Result<Image, RenderError> {
    render_with(spec, Exec::default())
}

pub fn render_with(spec: &PlotSpec, exec: Exec) -> Result<Image, RenderError> {
    spec.validate()?;
    let (w, h) = spec.pixels;
    let mut escape = vec![Escape::Bounded; w as usize * h as usize];
    exec.for_each_chunk(&mut escape, w as usize, |y, row| {
        for (x, e) in row.iter_mut().enumerate() {
            *e = escape_time(spec.pixel_to_c(x as u32, y as u32), spec.max_iter);
        }
    });
    let at = |x: u32, y: u32| escape[y as usize * w as usize + x as usize];
    let pal = &spec.palette;
    let mut img = Image { width: w, height: h, rgb: vec![0; 3 * w as usize * h as usize] };
    exec.for_each_chunk(&mut img.rgb, 3 * w as usize, |y, row| {
        let y = y as u32;
        for x in 0..w {
            let color = match at(x, y) {
                Escape::At(i) => ramp(pal, i, spec.max_iter),
                Escape::Bounded => {
                    let escaped = |dx: i64, dy: i64| {
                        let (nx, ny) = (i64::from(x) + dx, i64::from(y) + dy);
                        nx >= 0
                            && ny >= 0
                            && nx < i64::from(w)
                            && ny < i64::from(h)
                            && matches!(at(nx as u32, ny as u32), Escape::At(_))
                    };
                    if escaped(-1, 0) || escaped(1, 0) || escaped(0, -1) || escaped(0, 1) {
                        pal.boundary
                    } else {
                        pal.interior
                    }
                }
            };
            let i = 3 * x as usize;
            row[i..i + 3].copy_from_slice(&color);
        }
    });

    let r = i64::from(spec.point_radius);
    for p in &spec.overlay {
        let color = match p.kind {
            Kind::Hyperbolic { .. } => pal.hyperbolic,
            Kind::Misiurewicz { .. } => pal.misiurewicz,
            Kind::Unclassified => continue,
        };
        let Some((cx, cy)) = spec.c_to_pixel(p.to_c64()) else {
            continue;
        };
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy > r * r {
                    continue;
                }
                let (x, y) = (i64::from(cx) + dx, i64::from(cy) + dy);
                if x >= 0 && y >= 0 && x < i64::from(w) && y < i64::from(h) {
                    img.set(x as u32, y as u32, color);
                }
            }
        }
    }
    Ok(img)
}
