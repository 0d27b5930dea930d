//! Implementations behind the `nlidm` subcommands.

use std::io::Write;
use std::path::Path;

use crate::codec::{format_hex_word, format_sequence, parse_hex_word, parse_sequence, Codec};
use crate::combinatorics::AmplitudeAlphabet;
use crate::error::{Error, Result};
use crate::io::{load_scheme, save_scheme, write_comparison, write_report_files};
use crate::mpdm::build_mpdm;
use crate::nli::{analyze_with_bins, Config, NliModel, SnrReport, DEFAULT_BIN_DB};
use crate::optimizer::{build_scheme, compare_with_config, model_for, ComparisonRow};
use crate::scheme::{CompositionSet, SchemeTag};

pub fn parse_alphabet(s: &str) -> Result<AmplitudeAlphabet> {
    let levels: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidAlphabet(format!("'{s}' is not a comma-separated level list")))?;
    AmplitudeAlphabet::new(levels)
}

pub fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

pub fn cmd_build(
    tag: SchemeTag,
    n: u32,
    k: u64,
    a: &AmplitudeAlphabet,
    config: Option<&Path>,
    out: &Path,
) -> Result<CompositionSet> {
    // the link settings do not affect construction, but a broken file is still an error
    load_config(config)?;
    let set = build_scheme(tag, n, k, a)?;
    save_scheme(out, &set)?;
    Ok(set)
}

/// Model used to analyse a scheme of the given shape under `cfg`.
pub fn analysis_model(cfg: &Config, n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<NliModel> {
    if cfg.eta1.is_some() || cfg.anchor2_kurtosis.is_some() {
        return model_for(cfg, None);
    }
    match build_mpdm(n, k, a) {
        Ok(mpdm) => model_for(cfg, Some(&mpdm)),
        Err(e) => Err(Error::CalibrationRequired(format!(
            "no MPDM at n={n}, k={k} to place the second anchor ({e}); set anchor2_kurtosis or eta1"
        ))),
    }
}

pub fn cmd_analyze(
    scheme_file: &Path,
    config: Option<&Path>,
    out_prefix: &Path,
    bin_db: Option<f64>,
) -> Result<(CompositionSet, SnrReport)> {
    let cfg = load_config(config)?;
    let set = load_scheme(scheme_file)?;
    let model = analysis_model(&cfg, set.n, set.k, &set.alphabet)?;
    let report = analyze_with_bins(&set, &model, bin_db.unwrap_or(DEFAULT_BIN_DB))?;
    write_report_files(out_prefix, set.tag, &report)?;
    Ok((set, report))
}

pub fn cmd_compare(
    n: u32,
    k: u64,
    a: &AmplitudeAlphabet,
    config: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Vec<ComparisonRow>> {
    let cfg = load_config(config)?;
    let (_, _, rows) = compare_with_config(n, k, a, &cfg)?;
    write_comparison(out, &rows)?;
    Ok(rows)
}

pub fn cmd_encode(scheme_file: &Path, word: &str) -> Result<String> {
    let w = parse_hex_word(word)?;
    let set = load_scheme(scheme_file)?;
    Ok(format_sequence(&Codec::new(&set)?.encode(&w)?))
}

pub fn cmd_decode(scheme_file: &Path, sequence: &str) -> Result<String> {
    let seq = parse_sequence(sequence)?;
    let set = load_scheme(scheme_file)?;
    Ok(format_hex_word(&Codec::new(&set)?.decode(&seq)?))
}
