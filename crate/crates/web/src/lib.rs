//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! Images cross the boundary as canvas-style RGBA byte arrays; alpha is
//! ignored on input and set opaque on output.

use retinex_entropy::entropy::entropy_curve;
use retinex_entropy::histogram::image_distribution;
use retinex_entropy::retinex::msrcr;
use retinex_entropy::sweep::run_sweep;
use retinex_entropy::{fixture, GridSpec, ImageRgb8, RetinexLevel, RetinexParams};
use wasm_bindgen::prelude::*;

fn from_rgba(rgba: &[u8], width: u32, height: u32) -> Result<ImageRgb8, String> {
    let (w, h) = (width as usize, height as usize);
    if rgba.len() != w * h * 4 {
        return Err(format!(
            "expected {} RGBA bytes, got {}",
            w * h * 4,
            rgba.len()
        ));
    }
    let rgb = rgba
        .chunks_exact(4)
        .flat_map(|p| [p[0], p[1], p[2]])
        .collect();
    ImageRgb8::new(w, h, rgb).map_err(|e| e.to_string())
}

fn to_rgba(img: &ImageRgb8) -> Vec<u8> {
    img.pixels().flat_map(|[r, g, b]| [r, g, b, 255]).collect()
}

pub fn filter(
    rgba: &[u8],
    width: u32,
    height: u32,
    level: &str,
    scale: u32,
    scale_div: u32,
    dynamic: f64,
) -> Result<Vec<u8>, String> {
    let level: RetinexLevel = level
        .parse()
        .map_err(|e: retinex_entropy::Error| e.to_string())?;
    let params = RetinexParams::new(level, scale, scale_div, dynamic).map_err(|e| e.to_string())?;
    let img = from_rgba(rgba, width, height)?;
    msrcr(&img, &params)
        .map(|o| to_rgba(&o))
        .map_err(|e| e.to_string())
}

pub fn curve(
    rgba: &[u8],
    width: u32,
    height: u32,
    kappa_max: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let p = image_distribution(&from_rgba(rgba, width, height)?).map_err(|e| e.to_string())?;
    entropy_curve(&p, kappa_max, steps)
        .map(|c| c.values().to_vec())
        .map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_levels(
    rgba: &[u8],
    width: u32,
    height: u32,
    scale: u32,
    scale_div: u32,
    dynamic: f64,
    kappa_max: f64,
    steps: usize,
) -> Result<String, String> {
    let grid = GridSpec {
        levels: RetinexLevel::ALL.to_vec(),
        scales: vec![scale],
        scale_divisions: vec![scale_div],
        dynamics: vec![dynamic],
        kappa_max,
        kappa_steps: steps,
    };
    let report = run_sweep(&from_rgba(rgba, width, height)?, &grid).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Filtered image as RGBA, ready for `ImageData`.
#[wasm_bindgen(js_name = filterRgba)]
pub fn filter_rgba(
    rgba: &[u8],
    width: u32,
    height: u32,
    level: &str,
    scale: u32,
    scale_div: u32,
    dynamic: f64,
) -> Result<Vec<u8>, JsError> {
    filter(rgba, width, height, level, scale, scale_div, dynamic).map_err(|e| JsError::new(&e))
}

/// Kaniadakis entropy of the grey-tone histogram at `steps` κ values in
/// `[0, kappa_max]`; the first value is the Shannon entropy.
#[wasm_bindgen(js_name = entropyCurve)]
pub fn entropy_curve_rgba(
    rgba: &[u8],
    width: u32,
    height: u32,
    kappa_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    curve(rgba, width, height, kappa_max, steps).map_err(|e| JsError::new(&e))
}

/// JSON sweep report over the three levels at the given scale, division and
/// slider.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = sweepLevels)]
pub fn sweep_levels_json(
    rgba: &[u8],
    width: u32,
    height: u32,
    scale: u32,
    scale_div: u32,
    dynamic: f64,
    kappa_max: f64,
    steps: usize,
) -> Result<String, JsError> {
    sweep_levels(
        rgba, width, height, scale, scale_div, dynamic, kappa_max, steps,
    )
    .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = foggyFixture)]
pub fn foggy_fixture_rgba(width: u32, height: u32, seed: u32) -> Vec<u8> {
    to_rgba(&fixture::foggy(
        width as usize,
        height as usize,
        u64::from(seed),
    ))
}
