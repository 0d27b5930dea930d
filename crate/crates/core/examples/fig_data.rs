//! SNR-versus-kurtosis scatter, weighted histograms and CDFs for every scheme, as CSV.
use std::path::PathBuf;

use nlidm::io::write_report_files;
use nlidm::nli::{analyze_with_bins, Config};
use nlidm::optimizer::compare_with_config;
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fig_data".into()));
    std::fs::create_dir_all(&dir)?;
    let (sets, model, _) = compare_with_config(216, 349, &AmplitudeAlphabet::qam64(), &Config::default())?;
    for set in &sets {
        let report = analyze_with_bins(set, &model, 0.05)?;
        for p in write_report_files(&dir.join(set.tag.as_str()), set.tag, &report)? {
            println!("{}", p.display());
        }
    }
    Ok(())
}
