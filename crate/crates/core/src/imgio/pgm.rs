use crate::error::PgmError;
use crate::grid::{quantize, ImageGrid};

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, field: &'static str) -> Result<u64, PgmError> {
        let tok = self.token().ok_or(PgmError::MissingField(field))?;
        std::str::from_utf8(tok)
            .ok()
            .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PgmError::NonNumeric {
                field,
                token: String::from_utf8_lossy(tok).into_owned(),
            })
    }
}

/// Decodes an 8-bit binary PGM (`P5`). Intensities are returned as stored,
/// in `0..=maxval`.
pub fn read_pgm(bytes: &[u8]) -> Result<ImageGrid, PgmError> {
    let mut hdr = Header { bytes, pos: 0 };
    let magic = hdr.token().ok_or(PgmError::MissingField("magic"))?;
    if magic != b"P5" {
        return Err(PgmError::UnsupportedMagic(
            String::from_utf8_lossy(magic).into_owned(),
        ));
    }
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if width == 0 {
        return Err(PgmError::OutOfRange {
            field: "width",
            value: width,
        });
    }
    if height == 0 {
        return Err(PgmError::OutOfRange {
            field: "height",
            value: height,
        });
    }
    if maxval == 0 {
        return Err(PgmError::OutOfRange {
            field: "maxval",
            value: maxval,
        });
    }
    if maxval > 255 {
        return Err(PgmError::MaxvalTooLarge(maxval));
    }
    let (w, h) = (width as usize, height as usize);
    let expected = w.checked_mul(h).ok_or(PgmError::OutOfRange {
        field: "width",
        value: width,
    })?;

    // Exactly one whitespace byte separates maxval from the raster.
    let start = hdr.pos + 1;
    let payload = bytes.get(start..).unwrap_or(&[]);
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let data = payload[..expected].iter().map(|&b| b as f64).collect();
    Ok(ImageGrid::from_raw(w, h, data))
}

/// Canonical `P5` encoding: `"P5\n<w> <h>\n255\n"` then one quantized byte per pixel.
pub fn write_pgm(img: &ImageGrid) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend(img.data().iter().map(|&v| quantize(v)));
    out
}
