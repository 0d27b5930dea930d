//! Kurtosis-pruned MPDM against the plain MPDM at the same rate.
use nlidm::mpdm::build_mpdm;
use nlidm::nli::{analyze, Config};
use nlidm::optimizer::{build_opt_mpdm, max_leaf_kurtosis, model_for};
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let a = AmplitudeAlphabet::qam64();
    let (n, k) = (216, 349);
    let mpdm = build_mpdm(n, k, &a)?;
    let opt = build_opt_mpdm(n, k, &a)?;
    println!(
        "k+1 design: target {}, {} leaves; pruned {}, {} survivors, {} kept",
        opt.reference.target,
        opt.reference.set.len(),
        opt.pruned,
        opt.survivors,
        opt.set.len()
    );
    let model = model_for(&Config::default(), Some(&mpdm))?;
    for set in [&mpdm, &opt.set] {
        let g = analyze(set, &model)?.aggregates;
        println!(
            "{:>8}: {:>5} leaves, rate loss {:.4}, max kurtosis {:.4}, SNR min {:.3} avg {:.3} p2p {:.3} dB",
            set.tag.as_str(),
            set.len(),
            set.rate_loss,
            max_leaf_kurtosis(set)?,
            g.min,
            g.avg,
            g.p2p
        );
    }
    Ok(())
}
