//! Image containers: 8-bit RGB input/output and real-valued working buffers.

use crate::error::{Error, Result};

/// Row-major interleaved RGB image with 8 bits per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRgb8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ImageRgb8 {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| Error::InvalidInput("image dimensions overflow".into()))?;
        if data.len() != expected {
            return Err(Error::InvalidInput(format!(
                "expected {expected} bytes for a {width}x{height} RGB image, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Image filled with a single colour.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        let data = rgb
            .iter()
            .copied()
            .cycle()
            .take(width.saturating_mul(height).saturating_mul(3))
            .collect();
        Self::new(width, height, data)
    }

    /// Builds an image from a single-channel buffer by replicating each
    /// value into R, G and B.
    pub fn from_grey(width: usize, height: usize, grey: &[u8]) -> Result<Self> {
        if grey.len() != width.saturating_mul(height) {
            return Err(Error::InvalidInput(format!(
                "expected {} grey samples, got {}",
                width.saturating_mul(height),
                grey.len()
            )));
        }
        let data = grey.iter().flat_map(|&v| [v, v, v]).collect();
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
    }

    /// Splits into three real-valued planes (R, G, B), values in [0, 255].
    pub fn to_channels(&self) -> [Channel; 3] {
        let n = self.pixel_count();
        let mut planes = [
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        ];
        for px in self.pixels() {
            for (plane, v) in planes.iter_mut().zip(px) {
                plane.push(f64::from(v));
            }
        }
        planes.map(|data| Channel {
            width: self.width,
            height: self.height,
            data,
        })
    }
}

/// Single real-valued plane, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Channel {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "channel must be non-empty, got {width}x{height}"
            )));
        }
        if data.len() != width.saturating_mul(height) {
            return Err(Error::InvalidInput(format!(
                "expected {} samples for a {width}x{height} channel, got {}",
                width.saturating_mul(height),
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample {v}")));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub(crate) fn into_data(self) -> Vec<f64> {
        self.data
    }
}

/// Real-valued RGB working image of the log-domain pipeline, stored as three
/// planes. Every sample is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkingImage {
    width: usize,
    height: usize,
    planes: [Vec<f64>; 3],
}

impl WorkingImage {
    pub fn from_channels(channels: [Channel; 3]) -> Result<Self> {
        let (w, h) = (channels[0].width, channels[0].height);
        if channels.iter().any(|c| c.width != w || c.height != h) {
            return Err(Error::InvalidInput(
                "working image channels differ in size".into(),
            ));
        }
        Ok(Self {
            width: w,
            height: h,
            planes: channels.map(Channel::into_data),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        &self.planes[c]
    }

    /// All samples of all three planes.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.planes.iter().flatten().copied()
    }
}
