//! Escape-time pictures of the connectedness locus in the `lambda` plane or
//! in the rescaled `Lambda` plane of a satellite, plus binary PPM output.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{lambda_from_big, membership};
use crate::raster::Mask;
use crate::rational::IrreducibleRational;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Plane {
    LambdaSmall,
    /// `Lambda = Log(lambda^q)` of the given satellite, drawn through the
    /// principal inverse `lambda = omega exp(Lambda / q)`.
    LambdaBig(IrreducibleRational),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: Complex64,
    pub half_width: f64,
    pub half_height: f64,
    pub px_w: usize,
    pub px_h: usize,
    pub plane: Plane,
}

impl Viewport {
    pub fn new(center: Complex64, half_width: f64, half_height: f64, px_w: usize, px_h: usize, plane: Plane) -> Result<Self> {
        if px_w == 0 || px_h == 0 {
            return Err(Error::InvalidInput("viewport needs at least one pixel".into()));
        }
        if !(half_width > 0.0 && half_height > 0.0) {
            return Err(Error::InvalidInput("viewport half sizes must be positive".into()));
        }
        Ok(Self { center, half_width, half_height, px_w, px_h, plane })
    }

    /// Square viewport with square pixels.
    pub fn square(center: Complex64, half_width: f64, px: usize, plane: Plane) -> Result<Self> {
        Self::new(center, half_width, half_width, px, px, plane)
    }

    /// Centre of pixel `(x, y)` in plane coordinates, row 0 at the top.
    pub fn pixel(&self, x: usize, y: usize) -> Complex64 {
        let u = (2.0 * x as f64 + 1.0) / self.px_w as f64 - 1.0;
        let v = 1.0 - (2.0 * y as f64 + 1.0) / self.px_h as f64;
        self.center + Complex64::new(u * self.half_width, v * self.half_height)
    }

    pub fn pixel_diagonal(&self) -> f64 {
        Complex64::new(2.0 * self.half_width / self.px_w as f64, 2.0 * self.half_height / self.px_h as f64).norm()
    }

    /// The parameter `lambda` drawn at pixel `(x, y)`.
    pub fn lambda_at(&self, x: usize, y: usize) -> Complex64 {
        let w = self.pixel(x, y);
        match self.plane {
            Plane::LambdaSmall => w,
            Plane::LambdaBig(pq) => lambda_from_big(pq, w),
        }
    }

    /// Pixel whose centre is nearest to `w`, if `w` is inside the viewport.
    pub fn locate(&self, w: Complex64) -> Option<(usize, usize)> {
        let u = ((w.re - self.center.re) / self.half_width + 1.0) * 0.5 * self.px_w as f64;
        let v = (1.0 - (w.im - self.center.im) / self.half_height) * 0.5 * self.px_h as f64;
        let inside = (0.0..self.px_w as f64).contains(&u) && (0.0..self.px_h as f64).contains(&v);
        inside.then_some((u as usize, v as usize))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, pixels: vec![0; width * height * 3] }
    }

    pub fn rgb(&self, x: usize, y: usize) -> [u8; 3] {
        let k = 3 * (y * self.width + x);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }

    pub fn set_rgb(&mut self, x: usize, y: usize, c: [u8; 3]) {
        let k = 3 * (y * self.width + x);
        self.pixels[k..k + 3].copy_from_slice(&c);
    }
}

/// Escape step of the critical orbit for every pixel, row-major; `None`
/// marks members.
pub fn escape_field(view: &Viewport, max_iter: usize) -> Vec<Option<usize>> {
    (0..view.px_h)
        .into_par_iter()
        .flat_map_iter(|y| (0..view.px_w).map(move |x| membership(view.lambda_at(x, y), max_iter).1))
        .collect()
}

/// Grey level of a pixel that escaped at `step`: light for fast escape,
/// darker towards the budget, never pure black.
pub fn shade(step: usize, max_iter: usize) -> u8 {
    let s = (step.max(1) as f64).ln() / ((max_iter.max(1) + 1) as f64).ln();
    (255.0 - 254.0 * s.clamp(0.0, 1.0)).round() as u8
}

pub fn render_locus(view: &Viewport, max_iter: usize) -> RasterImage {
    let field = escape_field(view, max_iter);
    let pixels = field
        .iter()
        .flat_map(|f| {
            let g = f.map_or(0, |k| shade(k, max_iter));
            [g, g, g]
        })
        .collect();
    RasterImage { width: view.px_w, height: view.px_h, pixels }
}

pub fn member_mask(view: &Viewport, max_iter: usize) -> Mask {
    let bits = escape_field(view, max_iter).into_iter().map(|f| f.is_none()).collect();
    Mask { width: view.px_w, height: view.px_h, bits }
}

/// Members of a `Lambda`-plane picture that lie in `Re Lambda > 0` and are
/// 8-connected to the pixels nearest the root `Lambda = 0`: the pixel trace
/// of the satellite limb, without the main component and other limbs.
pub fn satellite_component(view: &Viewport, max_iter: usize) -> Result<Mask> {
    if !matches!(view.plane, Plane::LambdaBig(_)) {
        return Err(Error::InvalidInput("satellite component needs a Lambda-plane viewport".into()));
    }
    let members = member_mask(view, max_iter);
    let right = Mask::from_fn(view.px_w, view.px_h, |x, y| members.get(x, y) && view.pixel(x, y).re > 0.0);
    let reach = 2.0 * view.pixel_diagonal();
    let seeds: Vec<(usize, usize)> = right.iter_set().filter(|&(x, y)| view.pixel(x, y).norm() <= reach).collect();
    Ok(right.components_from(&seeds))
}

const PPM_MAGIC: &str = "P6";

pub fn encode_ppm(img: &RasterImage) -> Vec<u8> {
    let mut out = format!("{PPM_MAGIC}\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Reads back the output of [`encode_ppm`].
pub fn decode_ppm(bytes: &[u8]) -> Result<RasterImage> {
    let bad = |what: &str| Error::InvalidInput(format!("malformed PPM: {what}"));
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header"))?);
    }
    if fields[0] != PPM_MAGIC || fields[3] != "255" {
        return Err(bad("expected P6 with maxval 255"));
    }
    let width: usize = fields[1].parse().map_err(|_| bad("width"))?;
    let height: usize = fields[2].parse().map_err(|_| bad("height"))?;
    let data = bytes.get(pos + 1..).ok_or_else(|| bad("missing data"))?;
    if data.len() != width * height * 3 {
        return Err(bad("pixel data length"));
    }
    Ok(RasterImage { width, height, pixels: data.to_vec() })
}

/// Per-pixel membership as CSV with header `x,y,re,im,member,escape_step`;
/// the coordinates are those of the viewport plane.
pub fn membership_csv(view: &Viewport, max_iter: usize) -> String {
    let field = escape_field(view, max_iter);
    let mut out = String::from("x,y,re,im,member,escape_step\n");
    for (k, f) in field.iter().enumerate() {
        let (x, y) = (k % view.px_w, k / view.px_w);
        let w = view.pixel(x, y);
        let step = f.map_or(String::new(), |s| s.to_string());
        let _ = writeln!(out, "{x},{y},{:.16e},{:.16e},{},{step}", w.re, w.im, u8::from(f.is_none()));
    }
    out
}
