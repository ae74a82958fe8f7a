//! Embeds a payload into a synthetic cover, writes the stego image as PGM and
//! reads the mark back with the right and a wrong key.

use chaotic_iterations::rng::SplitMix64;
use chaotic_iterations::watermark::{
    detect, embed, extract, psnr, read_pgm, write_pgm, GrayImage, WatermarkKey, WatermarkPayload,
};

fn main() -> chaotic_iterations::Result<()> {
    let (w, h) = (256, 256);
    // smooth gradient with a little noise
    let mut rng = SplitMix64::new(7);
    let pixels = (0..w * h)
        .map(|i| ((i % w + i / w) / 2) as u8 ^ (rng.below(4) as u8))
        .collect();
    let cover = GrayImage::new(w, h, pixels)?;

    let payload = WatermarkPayload::from_bytes(b"chaotic mark", 96)?;
    let key = WatermarkKey::new("correct horse");
    let stego = embed(&cover, &payload, &key, 1000)?;

    let path = std::env::temp_dir().join("ciw-example-stego.pgm");
    write_pgm(&stego, &path)?;
    let stego = read_pgm(&path)?.image;
    println!(
        "wrote {} (PSNR {:.1} dB)",
        path.display(),
        psnr(&cover, &stego)?
    );

    let back = extract(&stego, &key, payload.len(), 1000)?;
    println!("recovered intact: {}", back == payload);
    println!("right key: {:?}", detect(&stego, &key, &payload, 1000)?);
    println!(
        "wrong key: {:?}",
        detect(&stego, &WatermarkKey::new("battery staple"), &payload, 1000)?
    );
    Ok(())
}
