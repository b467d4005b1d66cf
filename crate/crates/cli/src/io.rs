//! PNG and binary PPM (P6) reading and writing, 8 bits per channel only.

use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use retinex_entropy::ImageRgb8;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageIoError {
    #[error("{path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("{path}: unsupported format ({reason}); expected PNG or binary PPM (P6)")]
    UnsupportedFormat { path: PathBuf, reason: String },
    #[error("{path}: unsupported bit depth ({color:?}); only 8-bit images are accepted")]
    UnsupportedDepth {
        path: PathBuf,
        color: image::ColorType,
    },
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Png,
    Ppm,
}

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

fn sniff(bytes: &[u8]) -> Option<Kind> {
    if bytes.starts_with(PNG_MAGIC) {
        Some(Kind::Png)
    } else if bytes.starts_with(b"P6") {
        Some(Kind::Ppm)
    } else {
        None
    }
}

/// Decodes a PNG or P6 PPM file into RGB. Greyscale is replicated into the
/// three channels and alpha is dropped.
pub fn load_image(path: &Path) -> Result<ImageRgb8, ImageIoError> {
    let read_err = |reason: String| ImageIoError::Read {
        path: path.to_path_buf(),
        reason,
    };
    let bytes = fs::read(path).map_err(|e| read_err(e.to_string()))?;
    let kind = sniff(&bytes).ok_or_else(|| ImageIoError::UnsupportedFormat {
        path: path.to_path_buf(),
        reason: "unrecognized file signature".into(),
    })?;
    let format = match kind {
        Kind::Png => ImageFormat::Png,
        Kind::Ppm => ImageFormat::Pnm,
    };
    let decoded = image::load_from_memory_with_format(&bytes, format)
        .map_err(|e| read_err(format!("cannot decode image: {e}")))?;

    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let rgb = match decoded {
        DynamicImage::ImageRgb8(buf) => buf.into_raw(),
        DynamicImage::ImageLuma8(buf) => {
            return ImageRgb8::from_grey(w, h, buf.as_raw()).map_err(|e| read_err(e.to_string()))
        }
        d @ (DynamicImage::ImageRgba8(_) | DynamicImage::ImageLumaA8(_)) => d.to_rgb8().into_raw(),
        other => {
            return Err(ImageIoError::UnsupportedDepth {
                path: path.to_path_buf(),
                color: other.color(),
            })
        }
    };
    ImageRgb8::new(w, h, rgb).map_err(|e| read_err(e.to_string()))
}

fn kind_from_extension(path: &Path) -> Option<Kind> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "png" => Some(Kind::Png),
        "ppm" => Some(Kind::Ppm),
        _ => None,
    }
}

/// Writes `image` as PNG or P6 PPM depending on the extension of `path`,
/// replacing any existing file.
pub fn save_image(image: &ImageRgb8, path: &Path) -> Result<(), ImageIoError> {
    let kind = kind_from_extension(path).ok_or_else(|| ImageIoError::UnsupportedFormat {
        path: path.to_path_buf(),
        reason: "output extension must be .png or .ppm".into(),
    })?;
    let write_err = |source: std::io::Error| ImageIoError::Write {
        path: path.to_path_buf(),
        source,
    };
    let bytes = match kind {
        Kind::Ppm => {
            let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
            out.extend_from_slice(image.data());
            out
        }
        Kind::Png => {
            let mut out = Vec::new();
            image::write_buffer_with_format(
                &mut std::io::Cursor::new(&mut out),
                image.data(),
                image.width() as u32,
                image.height() as u32,
                image::ExtendedColorType::Rgb8,
                ImageFormat::Png,
            )
            .map_err(|e| write_err(std::io::Error::other(e)))?;
            out
        }
    };
    fs::write(path, bytes).map_err(write_err)
}
