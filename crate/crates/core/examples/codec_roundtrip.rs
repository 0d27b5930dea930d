//! Encode random 349-bit words with each scheme and decode them back.
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlidm::codec::{format_hex_word, format_sequence, Codec};
use nlidm::optimizer::build_all;
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let k = 349;
    let sets = build_all(216, k, &AmplitudeAlphabet::qam64())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for set in &sets {
        let codec = Codec::new(set)?;
        let mut energy = 0.0;
        for i in 0..1000 {
            let bytes: Vec<u8> = (0..44).map(|_| rng.gen()).collect();
            let w = BigUint::from_bytes_be(&bytes) >> (44 * 8 - k);
            let s = codec.encode(&w)?;
            assert_eq!(codec.decode(&s)?, w);
            energy += s.iter().map(|x| x * x).sum::<f64>();
            if i == 0 {
                println!("{}: {} -> {}...", set.tag, format_hex_word(&w), &format_sequence(&s)[..40]);
            }
        }
        println!("  1000 round trips, mean block energy {:.1}", energy / 1000.0);
    }
    Ok(())
}
