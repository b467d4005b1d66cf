//! Deterministic synthetic "foggy street" image.
//!
//! A simple scene (sky, building blocks with windows, a road) is composited
//! with a bright airlight through a transmission that falls off towards the
//! horizon, then perturbed with seeded Gaussian noise. The result has the
//! compressed, bright-shifted histogram typical of fog.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::image::ImageRgb8;

pub const DEFAULT_WIDTH: usize = 160;
pub const DEFAULT_HEIGHT: usize = 120;
pub const DEFAULT_SEED: u64 = 2015;

const AIRLIGHT: [f64; 3] = [206.0, 209.0, 214.0];
const NOISE_STD: f64 = 2.0;
const TEXTURE_AMPLITUDE: f64 = 30.0;
const TEXTURE_OCTAVES: usize = 6;

/// The fixture used throughout the tests and the acceptance suite.
pub fn default_foggy() -> ImageRgb8 {
    foggy(DEFAULT_WIDTH, DEFAULT_HEIGHT, DEFAULT_SEED)
}

pub fn foggy(width: usize, height: usize, seed: u64) -> ImageRgb8 {
    let width = width.max(1);
    let height = height.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, NOISE_STD).expect("valid noise std");

    let texture = Texture::new(&mut rng);
    let mut data = Vec::with_capacity(width * height * 3);
    for y in 0..height {
        let v = y as f64 / height as f64;
        // denser fog near the horizon (top), thinner in the foreground
        let transmission = 0.22 + 0.38 * v;
        for x in 0..width {
            let u = x as f64 / width as f64;
            let radiance = scene(u, v);
            let grain = TEXTURE_AMPLITUDE * texture.sample(u, v);
            for c in 0..3 {
                let hazy = (radiance[c] + grain).max(0.0) * transmission
                    + AIRLIGHT[c] * (1.0 - transmission);
                let value = hazy + noise.sample(&mut rng);
                data.push(value.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    ImageRgb8::new(width, height, data).expect("fixture dimensions are consistent")
}

/// Multi-octave value noise in roughly [-1, 1], amplitude halving per octave
/// so that surface detail exists at every scale, as in photographs.
struct Texture {
    octaves: Vec<(usize, Vec<f64>)>,
}

impl Texture {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        use rand::Rng;
        let octaves = (0..TEXTURE_OCTAVES)
            .map(|o| {
                let cells = 4usize << o;
                let lattice = (0..(cells + 1) * (cells + 1))
                    .map(|_| rng.random_range(-1.0..1.0))
                    .collect();
                (cells, lattice)
            })
            .collect();
        Self { octaves }
    }

    fn sample(&self, u: f64, v: f64) -> f64 {
        let mut total = 0.0;
        let mut amplitude = 0.5;
        for (cells, lattice) in &self.octaves {
            let (fx, fy) = (u * *cells as f64, v * *cells as f64);
            let (ix, iy) = ((fx as usize).min(cells - 1), (fy as usize).min(cells - 1));
            let (tx, ty) = (fx - ix as f64, fy - iy as f64);
            let at = |x: usize, y: usize| lattice[y * (cells + 1) + x];
            let top = at(ix, iy) * (1.0 - tx) + at(ix + 1, iy) * tx;
            let bottom = at(ix, iy + 1) * (1.0 - tx) + at(ix + 1, iy + 1) * tx;
            total += amplitude * (top * (1.0 - ty) + bottom * ty);
            amplitude *= 0.5;
        }
        total
    }
}

/// Fog-free radiance at normalized coordinates.
fn scene(u: f64, v: f64) -> [f64; 3] {
    let horizon = 0.45;
    if v >= 0.72 {
        // road, darker towards the viewer, with a lane marking
        let shade = 70.0 - 40.0 * (v - 0.72) / 0.28;
        if (u - 0.5).abs() < 0.015 && ((v * 40.0) as i64) % 2 == 0 {
            return [230.0, 225.0, 190.0];
        }
        return [shade, shade, shade + 6.0];
    }
    // building blocks of varying height and colour
    let blocks: [(f64, f64, f64, [f64; 3]); 6] = [
        (0.00, 0.16, 0.18, [60.0, 40.0, 35.0]),
        (0.16, 0.30, 0.30, [35.0, 38.0, 45.0]),
        (0.30, 0.42, 0.22, [95.0, 70.0, 50.0]),
        (0.58, 0.70, 0.26, [28.0, 30.0, 28.0]),
        (0.70, 0.86, 0.12, [80.0, 60.0, 62.0]),
        (0.86, 1.00, 0.34, [45.0, 55.0, 40.0]),
    ];
    for (x0, x1, top, colour) in blocks {
        if u >= x0 && u < x1 && v >= top {
            let window = ((u - x0) * 60.0).fract() < 0.45 && ((v - top) * 30.0).fract() < 0.4;
            if window && v < 0.68 {
                return [colour[0] + 110.0, colour[1] + 95.0, colour[2] + 40.0];
            }
            return colour;
        }
    }
    if v >= horizon {
        // street opening between the buildings, receding into the fog
        let d = 110.0 + 60.0 * (0.72 - v) / (0.72 - horizon);
        return [d, d, d + 4.0];
    }
    // sky gradient
    let s = 170.0 + 60.0 * (1.0 - v / horizon);
    [s - 10.0, s - 4.0, s + 8.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::shannon;
    use crate::histogram::image_distribution;

    #[test]
    fn reproducible_and_seed_dependent() {
        assert_eq!(foggy(40, 30, 1), foggy(40, 30, 1));
        assert_ne!(foggy(40, 30, 1), foggy(40, 30, 2));
    }

    #[test]
    fn histogram_is_compressed() {
        let img = default_foggy();
        let p = image_distribution(&img).unwrap();
        let occupied = p.support().count();
        assert!(occupied < 160, "{occupied} tones occupied");
        assert!(shannon(&p) < 5.545);
    }
}
