use std::collections::HashSet;

use chaotic_iterations::dynamics::{orbit, Negation, SystemPoint};
use chaotic_iterations::rng::SplitMix64;
use chaotic_iterations::watermark::{
    bit_error_rate, decode_pgm, detect, embed, encode_pgm, extract, key_to_strategy,
    select_coefficients, GrayImage, WatermarkKey, WatermarkPayload,
};

fn random_image(rng: &mut SplitMix64, w: usize, h: usize) -> GrayImage {
    GrayImage::new(w, h, (0..w * h).map(|_| rng.below(256) as u8).collect()).unwrap()
}

fn random_payload(rng: &mut SplitMix64, len: usize) -> WatermarkPayload {
    WatermarkPayload::from_bits((0..len).map(|_| rng.next_bool()).collect()).unwrap()
}

#[test]
fn every_small_payload_round_trips() {
    let mut rng = SplitMix64::new(11);
    let cover = random_image(&mut rng, 4, 4);
    let key = WatermarkKey::new("small");
    for len in 1..=16usize {
        for iterations in 1..=8 {
            for word in 0..(1u32 << len) {
                let bits = (0..len).map(|i| word >> i & 1 == 1).collect();
                let payload = WatermarkPayload::from_bits(bits).unwrap();
                let stego = embed(&cover, &payload, &key, iterations).unwrap();
                assert_eq!(extract(&stego, &key, len, iterations).unwrap(), payload);
            }
        }
    }
    assert!(embed(&cover, &random_payload(&mut rng, 4), &key, 0).is_err());
}

#[test]
fn embedded_bits_are_the_orbit_endpoint() {
    // Replays the keyed strategy with the step map rather than the XOR mask.
    let mut rng = SplitMix64::new(12);
    let cover = random_image(&mut rng, 16, 16);
    for trial in 0..50 {
        let key = WatermarkKey::new(format!("k{trial}"));
        let payload = random_payload(&mut rng, 32);
        let strategy = key_to_strategy(&key, 100, 32).unwrap();
        let start = SystemPoint::new(strategy, payload.bits().clone()).unwrap();
        let end = orbit(&start, &Negation, 100).unwrap().pop().unwrap();
        let stego = embed(&cover, &payload, &key, 100).unwrap();
        let positions = select_coefficients(&key, &cover, 32).unwrap();
        for (&p, &bit) in positions.iter().zip(end.bits()) {
            assert_eq!(stego.pixels()[p] & 1 == 1, bit);
        }
    }
}

#[test]
fn changes_only_selected_lsbs() {
    let mut rng = SplitMix64::new(13);
    let cover = random_image(&mut rng, 64, 64);
    let key = WatermarkKey::new("local");
    let payload = random_payload(&mut rng, 256);
    let stego = embed(&cover, &payload, &key, 500).unwrap();
    let selected: HashSet<usize> = select_coefficients(&key, &cover, 256)
        .unwrap()
        .into_iter()
        .collect();
    for (i, (&a, &b)) in cover.pixels().iter().zip(stego.pixels()).enumerate() {
        let change = (a as i16 - b as i16).abs();
        if selected.contains(&i) {
            assert!(change <= 1);
        } else {
            assert_eq!(change, 0);
        }
    }
}

#[test]
fn key_avalanche_is_near_half() {
    let mut rng = SplitMix64::new(14);
    let cover = random_image(&mut rng, 64, 64);
    let payload = random_payload(&mut rng, 512);
    let mut total = 0.0;
    let trials = 100;
    for t in 0..trials {
        let a = embed(
            &cover,
            &payload,
            &WatermarkKey::new(format!("key-{t}")),
            300,
        )
        .unwrap();
        let b = embed(
            &cover,
            &payload,
            &WatermarkKey::new(format!("key-{t}!")),
            300,
        )
        .unwrap();
        let differing = a
            .pixels()
            .iter()
            .zip(b.pixels())
            .filter(|(x, y)| x != y)
            .count();
        // Both stegos touch at most 2 * 512 pixels, so normalise by the union.
        let changed_a: HashSet<_> =
            select_coefficients(&WatermarkKey::new(format!("key-{t}")), &cover, 512)
                .unwrap()
                .into_iter()
                .collect();
        let changed_b: HashSet<_> =
            select_coefficients(&WatermarkKey::new(format!("key-{t}!")), &cover, 512)
                .unwrap()
                .into_iter()
                .collect();
        total += differing as f64 / changed_a.union(&changed_b).count() as f64;
    }
    let mean = total / trials as f64;
    assert!((mean - 0.5).abs() < 0.05, "mean differing fraction {mean}");
}

#[test]
fn strategy_avalanche_is_near_half() {
    let mut differing = 0usize;
    let mut total = 0usize;
    for t in 0..200 {
        let a = key_to_strategy(&WatermarkKey::new(format!("s{t}")), 64, 2).unwrap();
        let b = key_to_strategy(&WatermarkKey::new(format!("s{t}x")), 64, 2).unwrap();
        differing += a
            .terms()
            .iter()
            .zip(b.terms())
            .filter(|(x, y)| x != y)
            .count();
        total += 64;
    }
    let rate = differing as f64 / total as f64;
    assert!((rate - 0.5).abs() < 0.05, "{rate}");
}

#[test]
fn wrong_key_reads_noise() {
    let mut rng = SplitMix64::new(15);
    let cover = random_image(&mut rng, 128, 128);
    let payload = random_payload(&mut rng, 1024);
    let stego = embed(&cover, &payload, &WatermarkKey::new("right"), 1000).unwrap();
    let mut sum = 0.0;
    for t in 0..100 {
        let wrong = extract(&stego, &WatermarkKey::new(format!("wrong{t}")), 1024, 1000).unwrap();
        let ber = bit_error_rate(&wrong, &payload).unwrap();
        assert!((0.4..=0.6).contains(&ber), "{ber}");
        sum += ber;
    }
    assert!((sum / 100.0 - 0.5).abs() < 0.02);
}

#[test]
fn detection_on_clean_noisy_and_unmarked_images() {
    let mut rng = SplitMix64::new(16);
    let key = WatermarkKey::new("detect");
    for _ in 0..20 {
        let cover = random_image(&mut rng, 64, 64);
        let payload = random_payload(&mut rng, 1000);
        let stego = embed(&cover, &payload, &key, 1000).unwrap();
        let clean = detect(&stego, &key, &payload, 1000).unwrap();
        assert_eq!(clean.ber, 0.0);
        assert!(clean.present);

        let unmarked = detect(&cover, &key, &payload, 1000).unwrap();
        assert!(!unmarked.present, "ber {}", unmarked.ber);

        // Flip the LSB of exactly 10 selected pixels: the XOR mixing maps
        // each flip to exactly one payload error.
        let mut noisy = stego.clone();
        let positions = select_coefficients(&key, &stego, 1000).unwrap();
        for &p in positions.iter().step_by(100) {
            noisy.pixels_mut()[p] ^= 1;
        }
        let d = detect(&noisy, &key, &payload, 1000).unwrap();
        assert_eq!(d.ber, 0.01);
        assert!(d.present);

        // 1% of all pixels corrupted at random.
        let mut noisy = stego.clone();
        for _ in 0..noisy.len() / 100 {
            let p = rng.below(noisy.len() as u64) as usize;
            noisy.pixels_mut()[p] ^= 1;
        }
        assert!(detect(&noisy, &key, &payload, 1000).unwrap().present);
    }
}

#[test]
fn selection_is_collision_free_and_uniform() {
    let mut rng = SplitMix64::new(17);
    let image = GrayImage::filled(10, 10, 0).unwrap();
    let mut first_hits = [0usize; 100];
    for t in 0..20_000 {
        let key = WatermarkKey::new(format!("{t}-{}", rng.next_u64()));
        let sel = select_coefficients(&key, &image, 50).unwrap();
        let unique: HashSet<_> = sel.iter().collect();
        assert_eq!(unique.len(), 50);
        assert!(sel.iter().all(|&p| p < 100));
        first_hits[sel[0]] += 1;
    }
    // Chi-square with 99 degrees of freedom; 99.9% quantile is about 148.
    let expected = 200.0;
    let chi2: f64 = first_hits
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 148.0, "chi2 {chi2}");
    // Full capacity gives a permutation.
    let key = WatermarkKey::new("all");
    let mut all = select_coefficients(&key, &image, 100).unwrap();
    all.sort_unstable();
    assert_eq!(all, (0..100).collect::<Vec<_>>());
    assert!(select_coefficients(&key, &image, 101).is_err());
}

#[test]
fn stego_survives_pgm_round_trip() {
    let mut rng = SplitMix64::new(18);
    let cover = random_image(&mut rng, 33, 17);
    let key = WatermarkKey::new("pgm");
    let payload = random_payload(&mut rng, 200);
    let stego = embed(&cover, &payload, &key, 50).unwrap();
    let back = decode_pgm(&encode_pgm(&stego)).unwrap().image;
    assert_eq!(back, stego);
    assert_eq!(extract(&back, &key, 200, 50).unwrap(), payload);
}
