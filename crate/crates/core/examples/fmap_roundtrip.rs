//! Write a feature map to FMAP, read it back, and show the header bytes.
//!
//! cargo run --example fmap_roundtrip

use specprobe::io::{decode_fmap, encode_fmap, HEADER_LEN};
use specprobe::FeatureMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = FeatureMap::from_fn(2, 3, 4, |y, x, c| (y * 100 + x * 10 + c) as f32)?;
    let bytes = encode_fmap(&map)?;
    println!("header ({HEADER_LEN} bytes): {:02x?}", &bytes[..HEADER_LEN]);
    println!("file size: {} bytes", bytes.len());

    let back = decode_fmap(&bytes)?;
    assert_eq!(back, map);
    println!("round trip ok, value at (1, 2, 3) = {}", back.get(1, 2, 3));

    let mut broken = bytes.clone();
    broken.truncate(bytes.len() - 1);
    println!("truncated file -> {}", decode_fmap(&broken).unwrap_err());
    Ok(())
}
