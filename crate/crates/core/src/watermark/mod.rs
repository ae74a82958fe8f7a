//! LSB watermarking driven by chaotic iterations.
//!
//! The watermark bits are the initial state `E^0` of a system with one cell
//! per selected pixel. A keyed strategy drives `m` iterations of the
//! negation update, and the resulting state is written into the least
//! significant bits of the selected pixels. Every iteration flips a single
//! cell, so the whole run is an XOR with the parity mask of the strategy;
//! replaying the same strategy on the read bits undoes it.
//!
//! Keys are hashed with FNV-1a to a 64-bit seed. The strategy stream uses
//! that seed directly, the pixel selection uses it XORed with
//! [`SELECTION_DOMAIN`].

pub mod pgm;

use std::fs;
use std::path::Path;

use crate::dynamics::{mix, BoolState, Strategy};
use crate::error::{Error, Result};
use crate::rng::{fnv1a_64, SplitMix64};

pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm, GrayImage, Pgm};

/// Seed offset separating the selection stream from the strategy stream.
pub const SELECTION_DOMAIN: u64 = 0xA5A5_A5A5_A5A5_A5A5;

/// Detection threshold on the bit error rate.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WatermarkKey {
    key: Vec<u8>,
    derived_seed: u64,
}

impl WatermarkKey {
    pub fn new(key: impl AsRef<[u8]>) -> Self {
        let key = key.as_ref().to_vec();
        let derived_seed = fnv1a_64(&key);
        Self { key, derived_seed }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.key
    }

    pub fn derived_seed(&self) -> u64 {
        self.derived_seed
    }
}

/// The watermark: one bit per selected coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WatermarkPayload {
    bits: BoolState,
}

impl WatermarkPayload {
    pub fn new(bits: BoolState) -> Self {
        Self { bits }
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        Ok(Self::new(BoolState::new(bits)?))
    }

    pub fn len(&self) -> usize {
        self.bits.n_cells()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &BoolState {
        &self.bits
    }

    /// Parses a `0`/`1` string; whitespace is ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        Ok(Self::new(compact.parse()?))
    }

    /// First `bit_len` bits of `bytes`, most significant bit of each byte first.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Result<Self> {
        if bit_len > bytes.len() * 8 {
            return Err(Error::Capacity {
                requested: bit_len,
                available: bytes.len() * 8,
            });
        }
        Self::from_bits(
            (0..bit_len)
                .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1)
                .collect(),
        )
    }

    /// Reads a payload file: raw bits when `bit_len` is given, a `0`/`1`
    /// text file otherwise.
    pub fn read(path: impl AsRef<Path>, bit_len: Option<usize>) -> Result<Self> {
        let bytes = fs::read(path)?;
        match bit_len {
            Some(n) => Self::from_bytes(&bytes, n),
            None => Self::parse_text(
                std::str::from_utf8(&bytes)
                    .map_err(|e| Error::parse(e.valid_up_to(), "payload text is not UTF-8"))?,
            ),
        }
    }
}

impl std::fmt::Display for WatermarkPayload {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.bits.fmt(f)
    }
}

/// Keyed strategy of `length` terms over `n_cells` cells.
pub fn key_to_strategy(key: &WatermarkKey, length: usize, n_cells: usize) -> Result<Strategy> {
    if length == 0 {
        return Err(Error::Domain("strategy length must be at least 1".into()));
    }
    if n_cells == 0 {
        return Err(Error::InvalidCellCount { got: 0, min: 1 });
    }
    let mut rng = SplitMix64::new(key.derived_seed);
    let terms = (0..length)
        .map(|_| rng.below(n_cells as u64) as usize)
        .collect();
    Strategy::new(terms, n_cells)
}

/// First `count` positions of a keyed forward Fisher-Yates shuffle of the
/// pixel indices: step `i` swaps slot `i` with slot `i + below(len - i)`.
pub fn select_coefficients(
    key: &WatermarkKey,
    image: &GrayImage,
    count: usize,
) -> Result<Vec<usize>> {
    let total = image.len();
    if count > total {
        return Err(Error::Capacity {
            requested: count,
            available: total,
        });
    }
    let mut rng = SplitMix64::new(key.derived_seed ^ SELECTION_DOMAIN);
    // Sparse view of the permutation: untouched slots hold their own index.
    let mut moved = std::collections::HashMap::with_capacity(2 * count);
    let mut selection = Vec::with_capacity(count);
    for i in 0..count {
        let j = i + rng.below((total - i) as u64) as usize;
        let at_j = *moved.get(&j).unwrap_or(&j);
        let at_i = *moved.get(&i).unwrap_or(&i);
        moved.insert(j, at_i);
        selection.push(at_j);
    }
    Ok(selection)
}

/// Mixes the payload with `iterations` keyed chaotic iterations and writes
/// the result into the LSBs of the selected pixels.
pub fn embed(
    cover: &GrayImage,
    payload: &WatermarkPayload,
    key: &WatermarkKey,
    iterations: usize,
) -> Result<GrayImage> {
    let selection = select_coefficients(key, cover, payload.len())?;
    let strategy = key_to_strategy(key, iterations, payload.len())?;
    let mixed = mix(payload.bits(), &strategy)?;
    let mut stego = cover.clone();
    let pixels = stego.pixels_mut();
    for (&idx, &bit) in selection.iter().zip(mixed.bits()) {
        pixels[idx] = (pixels[idx] & !1) | bit as u8;
    }
    Ok(stego)
}

/// Reads the selected LSBs and replays the keyed strategy on them.
pub fn extract(
    stego: &GrayImage,
    key: &WatermarkKey,
    payload_length: usize,
    iterations: usize,
) -> Result<WatermarkPayload> {
    if payload_length == 0 {
        return Err(Error::InvalidCellCount { got: 0, min: 1 });
    }
    let selection = select_coefficients(key, stego, payload_length)?;
    let strategy = key_to_strategy(key, iterations, payload_length)?;
    let read = BoolState::new(
        selection
            .iter()
            .map(|&idx| stego.pixels()[idx] & 1 == 1)
            .collect(),
    )?;
    Ok(WatermarkPayload::new(mix(&read, &strategy)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    pub ber: f64,
    pub present: bool,
}

pub fn bit_error_rate(a: &WatermarkPayload, b: &WatermarkPayload) -> Result<f64> {
    let errors = crate::metrics::state_distance(a.bits(), b.bits())?;
    Ok(errors as f64 / a.len() as f64)
}

pub fn detect(
    stego: &GrayImage,
    key: &WatermarkKey,
    expected: &WatermarkPayload,
    iterations: usize,
) -> Result<Detection> {
    detect_with_threshold(stego, key, expected, iterations, DEFAULT_THRESHOLD)
}

/// The watermark is declared present when `ber < threshold`.
pub fn detect_with_threshold(
    stego: &GrayImage,
    key: &WatermarkKey,
    expected: &WatermarkPayload,
    iterations: usize,
    threshold: f64,
) -> Result<Detection> {
    let extracted = extract(stego, key, expected.len(), iterations)?;
    let ber = bit_error_rate(&extracted, expected)?;
    Ok(Detection {
        ber,
        present: ber < threshold,
    })
}

/// Peak signal-to-noise ratio in dB; infinite for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    crate::dynamics::check_cells("psnr", a.len(), b.len())?;
    let sse: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / a.len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit, Negation, SystemPoint};

    fn noise_image(width: usize, height: usize, seed: u64) -> GrayImage {
        let mut rng = SplitMix64::new(seed);
        let pixels = (0..width * height).map(|_| rng.next_u64() as u8).collect();
        GrayImage::new(width, height, pixels).unwrap()
    }

    fn random_payload(len: usize, seed: u64) -> WatermarkPayload {
        let mut rng = SplitMix64::new(seed);
        WatermarkPayload::from_bits((0..len).map(|_| rng.next_bool()).collect()).unwrap()
    }

    #[test]
    fn key_seed_is_fnv() {
        assert_eq!(WatermarkKey::new("a").derived_seed(), 0xaf63dc4c8601ec8c);
    }

    #[test]
    fn strategies_are_deterministic() {
        let k = WatermarkKey::new("secret");
        let a = key_to_strategy(&k, 100, 10).unwrap();
        assert_eq!(a, key_to_strategy(&k, 100, 10).unwrap());
        assert!(key_to_strategy(&k, 50, 1)
            .unwrap()
            .terms()
            .iter()
            .all(|&t| t == 0));
        assert!(key_to_strategy(&k, 0, 10).is_err());
    }

    #[test]
    fn strategy_avalanche() {
        let a = key_to_strategy(&WatermarkKey::new("secret-key-0"), 1000, 1024).unwrap();
        let b = key_to_strategy(&WatermarkKey::new("secret-key-1"), 1000, 1024).unwrap();
        let differing = a
            .terms()
            .iter()
            .zip(b.terms())
            .filter(|(x, y)| x != y)
            .count();
        assert!(differing >= 400, "{differing}");
    }

    #[test]
    fn selection_is_a_permutation_prefix() {
        let img = GrayImage::filled(7, 5, 0).unwrap();
        let k = WatermarkKey::new("k");
        let mut all = select_coefficients(&k, &img, 35).unwrap();
        let prefix = select_coefficients(&k, &img, 10).unwrap();
        assert_eq!(&all[..10], prefix.as_slice());
        all.sort_unstable();
        assert_eq!(all, (0..35).collect::<Vec<_>>());
        assert!(matches!(
            select_coefficients(&k, &img, 36),
            Err(Error::Capacity {
                requested: 36,
                available: 35
            })
        ));
    }

    #[test]
    fn selection_matches_dense_fisher_yates() {
        let img = GrayImage::filled(16, 16, 0).unwrap();
        let k = WatermarkKey::new("dense");
        let mut rng = SplitMix64::new(k.derived_seed() ^ SELECTION_DOMAIN);
        let mut slots: Vec<usize> = (0..256).collect();
        for i in 0..40 {
            let j = i + rng.below((256 - i) as u64) as usize;
            slots.swap(i, j);
        }
        assert_eq!(
            select_coefficients(&k, &img, 40).unwrap(),
            slots[..40].to_vec()
        );
    }

    #[test]
    fn even_strategy_keeps_zero_payload() {
        // Find a key whose strategy hits every cell an even number of times.
        let cover = noise_image(8, 8, 1);
        let payload = WatermarkPayload::from_bits(vec![false; 2]).unwrap();
        let key = (0..)
            .map(|i| WatermarkKey::new(format!("even-{i}")))
            .find(|k| key_to_strategy(k, 4, 2).unwrap().parity_mask().count_ones() == 0)
            .unwrap();
        let stego = embed(&cover, &payload, &key, 4).unwrap();
        for idx in select_coefficients(&key, &cover, 2).unwrap() {
            assert_eq!(stego.pixels()[idx] & 1, 0);
        }
    }

    #[test]
    fn embed_matches_the_orbit_endpoint() {
        let cover = noise_image(16, 16, 2);
        let payload = random_payload(40, 3);
        let key = WatermarkKey::new("orbit");
        let stego = embed(&cover, &payload, &key, 77).unwrap();
        let strategy = key_to_strategy(&key, 77, 40).unwrap();
        let point = SystemPoint::new(strategy, payload.bits().clone()).unwrap();
        let end = orbit(&point, &Negation, 77).unwrap().pop().unwrap();
        let written: Vec<bool> = select_coefficients(&key, &cover, 40)
            .unwrap()
            .iter()
            .map(|&i| stego.pixels()[i] & 1 == 1)
            .collect();
        assert_eq!(written.as_slice(), end.bits());
    }

    #[test]
    fn round_trip_and_locality() {
        let cover = noise_image(32, 32, 4);
        let payload = random_payload(100, 5);
        let key = WatermarkKey::new("round trip");
        let stego = embed(&cover, &payload, &key, 250).unwrap();
        assert_eq!(stego, embed(&cover, &payload, &key, 250).unwrap());
        assert_eq!(extract(&stego, &key, 100, 250).unwrap(), payload);

        let selected: std::collections::HashSet<_> = select_coefficients(&key, &cover, 100)
            .unwrap()
            .into_iter()
            .collect();
        for (i, (&c, &s)) in cover.pixels().iter().zip(stego.pixels()).enumerate() {
            if selected.contains(&i) {
                assert!((c as i16 - s as i16).abs() <= 1);
            } else {
                assert_eq!(c, s);
            }
        }
        let d = detect(&stego, &key, &payload, 250).unwrap();
        assert_eq!(
            d,
            Detection {
                ber: 0.0,
                present: true
            }
        );
    }

    #[test]
    fn psnr_bound() {
        // Flipping every LSB of N_w pixels out of M gives 10 log10(255^2 M / N_w).
        let cover = noise_image(512, 512, 6);
        let mut flipped = cover.clone();
        for p in flipped.pixels_mut().iter_mut().take(1024) {
            *p ^= 1;
        }
        let oracle = 10.0 * (255.0f64 * 255.0 * 262144.0 / 1024.0).log10();
        assert!((psnr(&cover, &flipped).unwrap() - oracle).abs() < 1e-9);
        assert!(oracle >= 51.0);

        let stego = embed(
            &cover,
            &random_payload(1024, 7),
            &WatermarkKey::new("p"),
            1000,
        )
        .unwrap();
        assert!(psnr(&cover, &stego).unwrap() >= oracle);
    }

    #[test]
    fn payload_forms() {
        let p = WatermarkPayload::parse_text("0101 1\n").unwrap();
        assert_eq!(p.to_string(), "01011");
        let q = WatermarkPayload::from_bytes(&[0b0101_1000], 5).unwrap();
        assert_eq!(p, q);
        assert!(WatermarkPayload::from_bytes(&[0], 9).is_err());
        assert!(WatermarkPayload::parse_text("").is_err());
        assert!(extract(&noise_image(2, 2, 0), &WatermarkKey::new(""), 5, 1).is_err());
    }
}
