//! FMAP: a small little-endian header followed by the raw `f32` payload.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "FMAP" (46 4D 41 50)
//!      4     1  version = 1
//!      5     1  dtype   = 1 (f32 little-endian)
//!      6     2  reserved = 0
//!      8     4  height   u32 LE
//!     12     4  width    u32 LE
//!     16     4  channels u32 LE
//!     20     .  height * width * channels f32 LE, row-major, channel-last
//! ```

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::FormatError;
use crate::feature::{FeatureMap, ShapeError};

pub const MAGIC: [u8; 4] = *b"FMAP";
pub const VERSION: u8 = 1;
pub const DTYPE_F32_LE: u8 = 1;
pub const HEADER_LEN: usize = 20;

/// Serializes `map` into its exact on-disk byte representation.
pub fn encode_fmap(map: &FeatureMap) -> Result<Vec<u8>, FormatError> {
    let dim = |v: usize, name: &'static str| {
        u32::try_from(v).map_err(|_| FormatError::Validation(format!("{name} {v} exceeds u32")))
    };
    let (h, w, c) = map.shape();
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * map.data().len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(DTYPE_F32_LE);
    out.extend_from_slice(&[0, 0]);
    out.extend_from_slice(&dim(h, "height")?.to_le_bytes());
    out.extend_from_slice(&dim(w, "width")?.to_le_bytes());
    out.extend_from_slice(&dim(c, "channels")?.to_le_bytes());
    for v in map.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Parses an FMAP byte buffer.
pub fn decode_fmap(bytes: &[u8]) -> Result<FeatureMap, FormatError> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        let mut found = [0u8; 4];
        let n = bytes.len().min(4);
        found[..n].copy_from_slice(&bytes[..n]);
        return Err(FormatError::BadMagic { found });
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let (version, dtype) = (bytes[4], bytes[5]);
    if version != VERSION || dtype != DTYPE_F32_LE {
        return Err(FormatError::UnsupportedVersion { version, dtype });
    }
    let read_u32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let (h, w, c) = (read_u32(8), read_u32(12), read_u32(16));
    if h == 0 || w == 0 || c == 0 {
        return Err(FormatError::Shape(ShapeError::ZeroDimension {
            height: h,
            width: w,
            channels: c,
        }));
    }
    let expected = h
        .checked_mul(w)
        .and_then(|n| n.checked_mul(c))
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| FormatError::Validation(format!("dimensions {h}x{w}x{c} overflow")))?;
    if bytes.len() < expected {
        return Err(FormatError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(FormatError::TrailingBytes {
            expected,
            actual: bytes.len(),
        });
    }
    let mut data = Vec::with_capacity(h * w * c);
    for (index, chunk) in bytes[HEADER_LEN..].chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(FormatError::NonFiniteValue { index });
        }
        data.push(v);
    }
    Ok(FeatureMap::new(h, w, c, data)?)
}

pub fn write_fmap(map: &FeatureMap, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let bytes = encode_fmap(map)?;
    let mut f = BufWriter::new(File::create(path.as_ref())?);
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}

pub fn read_fmap(path: impl AsRef<Path>) -> Result<FeatureMap, FormatError> {
    let mut bytes = Vec::new();
    File::open(path.as_ref())?.read_to_end(&mut bytes)?;
    decode_fmap(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_element_layout() {
        let m = FeatureMap::new(1, 1, 1, vec![7.0]).unwrap();
        let bytes = encode_fmap(&m).unwrap();
        assert_eq!(
            &bytes[..16],
            &[0x46, 0x4D, 0x41, 0x50, 1, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]
        );
        assert_eq!(&bytes[16..20], &[1, 0, 0, 0]);
        assert_eq!(&bytes[20..], &7.0f32.to_le_bytes());
        assert_eq!(bytes.len(), HEADER_LEN + 4);
    }

    #[test]
    fn file_size_matches_shape() {
        let m = FeatureMap::from_fn(2, 3, 4, |y, x, c| (y * 12 + x * 4 + c) as f32 * 0.5).unwrap();
        assert_eq!(encode_fmap(&m).unwrap().len(), HEADER_LEN + 2 * 3 * 4 * 4);
    }

    #[test]
    fn malformed_inputs() {
        let m = FeatureMap::from_fn(2, 2, 2, |y, x, c| (y + x + c) as f32).unwrap();
        let good = encode_fmap(&m).unwrap();

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(
            decode_fmap(&bad),
            Err(FormatError::BadMagic { .. })
        ));

        let short = &good[..good.len() - 3];
        assert!(matches!(
            decode_fmap(short),
            Err(FormatError::Truncated { .. })
        ));

        let mut v2 = good.clone();
        v2[4] = 2;
        assert!(matches!(
            decode_fmap(&v2),
            Err(FormatError::UnsupportedVersion { version: 2, .. })
        ));

        let mut nan = good.clone();
        nan[HEADER_LEN + 8..HEADER_LEN + 12].copy_from_slice(&f32::NAN.to_le_bytes());
        assert!(matches!(
            decode_fmap(&nan),
            Err(FormatError::NonFiniteValue { index: 2 })
        ));

        assert!(matches!(
            decode_fmap(b"FMA"),
            Err(FormatError::BadMagic { .. })
        ));
        assert!(matches!(
            decode_fmap(&good[..10]),
            Err(FormatError::Truncated { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            h in 1usize..6, w in 1usize..6, c in 1usize..4,
            seed in proptest::collection::vec(-1e6f32..1e6, 150)
        ) {
            let m = FeatureMap::from_fn(h, w, c, |y, x, k| seed[(y * w + x) * c + k]).unwrap();
            let bytes = encode_fmap(&m).unwrap();
            let back = decode_fmap(&bytes).unwrap();
            prop_assert_eq!(back.shape(), m.shape());
            prop_assert!(back.data().iter().zip(m.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
            prop_assert_eq!(encode_fmap(&back).unwrap(), bytes);
        }
    }
}
