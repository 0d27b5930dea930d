//! Pairwise MPDM: target, pair count and the shape of the prefix tree.
use std::collections::BTreeMap;

use nlidm::mpdm::design_mpdm;
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(216);
    let k: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(349);
    let d = design_mpdm(n, k, &AmplitudeAlphabet::qam64())?;
    println!("target {} ({} candidate pairs)", d.target, d.pairs_considered);
    println!("{} leaves, rate loss {:.4}, Kraft sum {:?}", d.set.len(), d.set.rate_loss, d.set.kraft_sum());
    let mut depths: BTreeMap<u64, usize> = BTreeMap::new();
    for l in &d.set.leaves {
        *depths.entry(k - l.payload_bits().unwrap()).or_default() += 1;
    }
    for (depth, count) in depths {
        println!("  depth {depth:>2}: {count} leaves");
    }
    Ok(())
}
