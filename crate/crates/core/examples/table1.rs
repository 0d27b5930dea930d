//! Comparison of all four schemes at n=216, k=349 under the default calibration.
use nlidm::io::write_comparison;
use nlidm::nli::Config;
use nlidm::optimizer::compare_with_config;
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let (_, model, rows) = compare_with_config(216, 349, &AmplitudeAlphabet::qam64(), &Config::default())?;
    eprintln!("eta0 {:.1}, eta1 {:.1} 1/W^2", model.eta0, model.eta1);
    println!("{:<9} {:>7} {:>9} {:>8} {:>8} {:>6} {:>8}", "scheme", "#comp", "rate loss", "max", "min", "p2p", "avg");
    for r in &rows {
        println!(
            "{:<9} {:>7} {:>9.3} {:>8.2} {:>8.2} {:>6.2} {:>8.2}",
            r.scheme.as_str(),
            r.n_compositions,
            r.rate_loss,
            r.snr.max,
            r.snr.min,
            r.snr.p2p,
            r.snr.avg
        );
    }
    write_comparison(std::io::stderr(), &rows)
}
